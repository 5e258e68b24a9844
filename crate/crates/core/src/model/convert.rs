use super::tree::{LayoutTree, LayoutTreeBuilder, NodeId};
use super::{Fragment, ModelError, SyntaxNode, SyntaxTree};

/// Re-parses a syntax tree into binary joins.
///
/// Each `Node` becomes a `Wrap`; its children are split into lines at
/// `Newline`s, siblings on a line are combined with balanced `JoinH`s and the
/// lines with balanced `JoinV`s. Whitespace-only atoms at the start of a line
/// become a single `Spacer`. An empty line inside a node becomes `Spacer(0)`
/// so it still occupies a line; a node with no children lays out to nothing.
pub fn to_layout_tree(e: &SyntaxTree) -> Result<LayoutTree, ModelError> {
    let mut b = LayoutTreeBuilder::new();
    let next = e.atoms().iter().map(|f| f.id.0 + 1).max().unwrap_or(0);
    b.reserve_ids(next);
    let mut cx = Convert {
        b,
        at_line_start: true,
    };
    let root = match cx.item(e)? {
        Some(r) => r,
        None => cx.b.empty(),
    };
    cx.b.build(root)
}

struct Convert {
    b: LayoutTreeBuilder,
    at_line_start: bool,
}

fn is_blank(f: &Fragment) -> bool {
    !f.is_spacer && !f.text.is_empty() && f.text.chars().all(char::is_whitespace)
}

impl Convert {
    /// `None` only for a bare `Newline`, which is handled by the parent.
    fn item(&mut self, e: &SyntaxTree) -> Result<Option<NodeId>, ModelError> {
        Ok(Some(match e {
            SyntaxTree::Node(n) => self.node(n)?,
            SyntaxTree::Atom(f) => {
                self.at_line_start = false;
                self.b.fragment(f.clone())
            }
            SyntaxTree::Pin { pid, fragment } => {
                self.at_line_start = false;
                self.b.pin(pid.clone(), fragment.clone())
            }
            SyntaxTree::Spacer(w) => self.b.spacer(*w),
            SyntaxTree::Newline => {
                self.at_line_start = true;
                return Ok(None);
            }
        }))
    }

    fn node(&mut self, n: &SyntaxNode) -> Result<NodeId, ModelError> {
        if !(n.padding >= 0.0) {
            return Err(ModelError::NegativePadding {
                id: n.id.clone(),
                padding: n.padding,
            });
        }
        let body = if n.children.is_empty() {
            self.b.empty()
        } else {
            let mut lines = Vec::new();
            let mut cur: Vec<NodeId> = Vec::new();
            // Width of the pending leading-whitespace run, and the fragment
            // whose id it inherits.
            let mut indent: Option<Fragment> = None;
            for c in &n.children {
                match c {
                    SyntaxTree::Newline => {
                        self.flush_indent(&mut indent, &mut cur);
                        lines.push(self.segment(&cur));
                        cur.clear();
                        self.at_line_start = true;
                    }
                    SyntaxTree::Atom(f) if self.at_line_start && is_blank(f) => match &mut indent {
                        Some(acc) => acc.width += f.width,
                        None => indent = Some(f.clone()),
                    },
                    _ => {
                        self.flush_indent(&mut indent, &mut cur);
                        if let Some(id) = self.item(c)? {
                            cur.push(id);
                        }
                    }
                }
            }
            self.flush_indent(&mut indent, &mut cur);
            lines.push(self.segment(&cur));
            self.b.join_v_all(&lines).expect("at least one line")
        };
        Ok(self
            .b
            .wrap_styled(n.id.clone(), body, n.padding, n.style.clone()))
    }

    fn flush_indent(&mut self, indent: &mut Option<Fragment>, cur: &mut Vec<NodeId>) {
        if let Some(f) = indent.take() {
            let mut s = Fragment::spacer(f.id, f.width);
            s.text = f.text;
            cur.push(self.b.fragment(s));
        }
    }

    fn segment(&mut self, items: &[NodeId]) -> NodeId {
        match self.b.join_h_all(items) {
            Some(id) => id,
            None => self.b.spacer(0.0),
        }
    }
}
