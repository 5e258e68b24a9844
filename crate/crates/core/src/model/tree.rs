use std::collections::HashSet;
use std::fmt;
use std::ops::Range;

use serde::Serialize;

use super::{FragId, Fragment, ModelError, Style};

/// Index of a node in a [`LayoutTree`]. Nodes are stored in post-order, so
/// children always have smaller ids than their parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// Dense index of a wrap; the user-facing name lives in [`WrapInfo`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WrapId(pub u32);

impl WrapId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WrapInfo {
    pub name: String,
    pub padding: f64,
    pub style: Style,
}

/// Leaves refer to fragments by column, i.e. their index in document order.
#[derive(Debug, Clone, PartialEq)]
pub enum LayoutNode {
    /// Zero lines. Identity for both joins.
    Empty,
    Atom(usize),
    Pin {
        pid: String,
        column: usize,
    },
    Spacer(usize),
    Wrap {
        wrap: WrapId,
        child: NodeId,
    },
    JoinH(NodeId, NodeId),
    JoinV(NodeId, NodeId),
}

impl LayoutNode {
    pub fn column(&self) -> Option<usize> {
        match *self {
            LayoutNode::Atom(c) | LayoutNode::Spacer(c) | LayoutNode::Pin { column: c, .. } => {
                Some(c)
            }
            _ => None,
        }
    }

    pub fn children(&self) -> impl Iterator<Item = NodeId> {
        let (a, b) = match *self {
            LayoutNode::Wrap { child, .. } => (Some(child), None),
            LayoutNode::JoinH(a, b) | LayoutNode::JoinV(a, b) => (Some(a), Some(b)),
            _ => (None, None),
        };
        a.into_iter().chain(b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutTree {
    nodes: Vec<LayoutNode>,
    fragments: Vec<Fragment>,
    wraps: Vec<WrapInfo>,
}

impl LayoutTree {
    pub fn root(&self) -> NodeId {
        NodeId(self.nodes.len() as u32 - 1)
    }

    pub fn nodes(&self) -> &[LayoutNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &LayoutNode {
        &self.nodes[id.index()]
    }

    /// Fragments in document order; index = column.
    pub fn fragments(&self) -> &[Fragment] {
        &self.fragments
    }

    pub fn wraps(&self) -> &[WrapInfo] {
        &self.wraps
    }

    pub fn wrap(&self, id: WrapId) -> &WrapInfo {
        &self.wraps[id.index()]
    }

    pub fn padding(&self, id: WrapId) -> f64 {
        self.wraps[id.index()].padding
    }

    pub fn wrap_by_name(&self, name: &str) -> Option<WrapId> {
        self.wraps
            .iter()
            .position(|w| w.name == name)
            .map(|i| WrapId(i as u32))
    }

    /// The `Wrap` node carrying `wrap`.
    pub fn wrap_node(&self, wrap: WrapId) -> Option<NodeId> {
        self.nodes
            .iter()
            .position(|n| matches!(n, LayoutNode::Wrap { wrap: w, .. } if *w == wrap))
            .map(|i| NodeId(i as u32))
    }

    pub fn contains_join_v(&self) -> bool {
        self.nodes
            .iter()
            .any(|n| matches!(n, LayoutNode::JoinV(..)))
    }

    /// Copy of the tree with every wrap's padding replaced.
    pub fn with_uniform_padding(&self, padding: f64) -> LayoutTree {
        let mut t = self.clone();
        t.wraps.iter_mut().for_each(|w| w.padding = padding);
        t
    }

    /// Column range covered by each node.
    pub fn column_ranges(&self) -> Vec<Range<usize>> {
        let mut out: Vec<Range<usize>> = Vec::with_capacity(self.nodes.len());
        // Empty nodes have no columns; give them the position where they sit.
        let mut next = 0;
        for node in &self.nodes {
            let r = match *node {
                LayoutNode::Empty => next..next,
                LayoutNode::Atom(c) | LayoutNode::Spacer(c) | LayoutNode::Pin { column: c, .. } => {
                    next = c + 1;
                    c..c + 1
                }
                LayoutNode::Wrap { child, .. } => out[child.index()].clone(),
                LayoutNode::JoinH(a, b) | LayoutNode::JoinV(a, b) => {
                    out[a.index()].start..out[b.index()].end
                }
            };
            out.push(r);
        }
        out
    }

    /// Parent of each node (`None` for the root).
    pub fn parents(&self) -> Vec<Option<NodeId>> {
        let mut out = vec![None; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            for c in node.children() {
                out[c.index()] = Some(NodeId(i as u32));
            }
        }
        out
    }

    /// Number of `Wrap` nodes strictly above each node.
    pub fn wrap_ancestor_counts(&self) -> Vec<usize> {
        let mut out = vec![0; self.nodes.len()];
        for i in (0..self.nodes.len()).rev() {
            let here = out[i] + usize::from(matches!(self.nodes[i], LayoutNode::Wrap { .. }));
            for c in self.nodes[i].children() {
                out[c.index()] = here;
            }
        }
        out
    }

    /// Number of visual lines each node lays out to.
    pub fn line_counts(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let n = match *node {
                LayoutNode::Empty => 0,
                LayoutNode::Atom(_) | LayoutNode::Spacer(_) | LayoutNode::Pin { .. } => 1,
                LayoutNode::Wrap { child, .. } => out[child.index()],
                LayoutNode::JoinH(a, b) => {
                    let (la, lb) = (out[a.index()], out[b.index()]);
                    if la == 0 || lb == 0 {
                        la + lb
                    } else {
                        la + lb - 1
                    }
                }
                LayoutNode::JoinV(a, b) => out[a.index()] + out[b.index()],
            };
            out.push(n);
        }
        out
    }

    /// Document line of every column, and the total number of lines.
    pub fn column_lines(&self) -> (Vec<usize>, usize) {
        let counts = self.line_counts();
        let mut start = vec![0usize; self.nodes.len()];
        let mut lines = vec![0usize; self.fragments.len()];
        for i in (0..self.nodes.len()).rev() {
            let s = start[i];
            match self.nodes[i] {
                LayoutNode::Atom(c) | LayoutNode::Spacer(c) | LayoutNode::Pin { column: c, .. } => {
                    lines[c] = s
                }
                LayoutNode::Wrap { child, .. } => start[child.index()] = s,
                LayoutNode::JoinH(a, b) => {
                    start[a.index()] = s;
                    start[b.index()] = s + counts[a.index()].saturating_sub(1);
                }
                LayoutNode::JoinV(a, b) => {
                    start[a.index()] = s;
                    start[b.index()] = s + counts[a.index()];
                }
                LayoutNode::Empty => {}
            }
        }
        (lines, counts[self.root().index()])
    }

    /// Nesting depth of each wrap (outermost = 0).
    pub fn wrap_depths(&self) -> Vec<usize> {
        let anc = self.wrap_ancestor_counts();
        let mut out = vec![0; self.wraps.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            if let LayoutNode::Wrap { wrap, .. } = node {
                out[wrap.index()] = anc[i];
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
enum Pending {
    Empty,
    Atom(Fragment),
    Pin(String, Fragment),
    Spacer(Fragment),
    Wrap(String, f64, Style, NodeId),
    JoinH(NodeId, NodeId),
    JoinV(NodeId, NodeId),
}

/// Assembles a [`LayoutTree`] from nodes created in any order; `build`
/// renumbers nodes into post-order and fragments into document order.
#[derive(Debug, Default, Clone)]
pub struct LayoutTreeBuilder {
    pending: Vec<Pending>,
    next_frag: u32,
}

impl LayoutTreeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, p: Pending) -> NodeId {
        self.pending.push(p);
        NodeId(self.pending.len() as u32 - 1)
    }

    fn fresh_id(&mut self) -> FragId {
        self.next_frag += 1;
        FragId(self.next_frag - 1)
    }

    /// Fresh fragment ids start at `next` or later.
    pub fn reserve_ids(&mut self, next: u32) {
        self.next_frag = self.next_frag.max(next);
    }

    pub fn empty(&mut self) -> NodeId {
        self.push(Pending::Empty)
    }

    pub fn fragment(&mut self, f: Fragment) -> NodeId {
        self.next_frag = self.next_frag.max(f.id.0 + 1);
        if f.is_spacer {
            self.push(Pending::Spacer(f))
        } else {
            self.push(Pending::Atom(f))
        }
    }

    /// An atom of the given size with a fresh id.
    pub fn atom(&mut self, width: f64, height: f64) -> NodeId {
        let id = self.fresh_id();
        self.push(Pending::Atom(Fragment::sized(id, width, height)))
    }

    pub fn text(&mut self, text: &str, width: f64, height: f64) -> NodeId {
        let id = self.fresh_id();
        let mut f = Fragment::sized(id, width, height);
        f.text = text.to_string();
        self.push(Pending::Atom(f))
    }

    pub fn pin(&mut self, pid: impl Into<String>, f: Fragment) -> NodeId {
        self.next_frag = self.next_frag.max(f.id.0 + 1);
        self.push(Pending::Pin(pid.into(), f))
    }

    /// A pin of the given size with a fresh id.
    pub fn pin_sized(&mut self, pid: impl Into<String>, width: f64, height: f64) -> NodeId {
        let id = self.fresh_id();
        self.push(Pending::Pin(pid.into(), Fragment::sized(id, width, height)))
    }

    pub fn spacer(&mut self, width: f64) -> NodeId {
        let id = self.fresh_id();
        self.push(Pending::Spacer(Fragment::spacer(id, width)))
    }

    pub fn wrap(&mut self, name: impl Into<String>, child: NodeId, padding: f64) -> NodeId {
        self.wrap_styled(name, child, padding, Style::new())
    }

    pub fn wrap_styled(
        &mut self,
        name: impl Into<String>,
        child: NodeId,
        padding: f64,
        style: Style,
    ) -> NodeId {
        self.push(Pending::Wrap(name.into(), padding, style, child))
    }

    pub fn join_h(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.push(Pending::JoinH(a, b))
    }

    pub fn join_v(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.push(Pending::JoinV(a, b))
    }

    /// Balanced fold with `join_h`; `None` for an empty list.
    pub fn join_h_all(&mut self, items: &[NodeId]) -> Option<NodeId> {
        self.balanced(items, Self::join_h)
    }

    pub fn join_v_all(&mut self, items: &[NodeId]) -> Option<NodeId> {
        self.balanced(items, Self::join_v)
    }

    fn balanced(
        &mut self,
        items: &[NodeId],
        join: fn(&mut Self, NodeId, NodeId) -> NodeId,
    ) -> Option<NodeId> {
        match items.len() {
            0 => None,
            1 => Some(items[0]),
            n => {
                let (l, r) = items.split_at(n / 2);
                let a = self.balanced(l, join)?;
                let b = self.balanced(r, join)?;
                Some(join(self, a, b))
            }
        }
    }

    pub fn build(self, root: NodeId) -> Result<LayoutTree, ModelError> {
        let pending = self.pending;
        if root.index() >= pending.len() {
            return Err(ModelError::Malformed(root));
        }
        let mut seen = vec![false; pending.len()];
        let mut nodes = Vec::with_capacity(pending.len());
        let mut fragments = Vec::new();
        let mut wraps: Vec<WrapInfo> = Vec::new();
        let mut names = HashSet::new();
        let mut frag_ids = HashSet::new();
        let mut new_id = vec![NodeId(0); pending.len()];

        // Iterative post-order: (node, children_done)
        let mut stack = vec![(root, false)];
        while let Some((id, expanded)) = stack.pop() {
            let p = pending.get(id.index()).ok_or(ModelError::Malformed(id))?;
            if !expanded {
                if seen[id.index()] {
                    return Err(ModelError::Malformed(id));
                }
                seen[id.index()] = true;
                stack.push((id, true));
                match *p {
                    Pending::Wrap(_, _, _, c) => stack.push((c, false)),
                    Pending::JoinH(a, b) | Pending::JoinV(a, b) => {
                        stack.push((b, false));
                        stack.push((a, false));
                    }
                    _ => {}
                }
                continue;
            }
            let mut leaf = |f: &Fragment| -> Result<usize, ModelError> {
                if !(f.width >= 0.0 && f.height >= 0.0) {
                    return Err(ModelError::NegativeSize(f.id));
                }
                if !frag_ids.insert(f.id) {
                    return Err(ModelError::DuplicateFragId(f.id));
                }
                fragments.push(f.clone());
                Ok(fragments.len() - 1)
            };
            let node = match p {
                Pending::Empty => LayoutNode::Empty,
                Pending::Atom(f) => LayoutNode::Atom(leaf(f)?),
                Pending::Spacer(f) => LayoutNode::Spacer(leaf(f)?),
                Pending::Pin(pid, f) => LayoutNode::Pin {
                    pid: pid.clone(),
                    column: leaf(f)?,
                },
                Pending::Wrap(name, padding, style, c) => {
                    if !names.insert(name.clone()) {
                        return Err(ModelError::DuplicateWrapId(name.clone()));
                    }
                    if !(*padding >= 0.0) {
                        return Err(ModelError::NegativePadding {
                            id: name.clone(),
                            padding: *padding,
                        });
                    }
                    wraps.push(WrapInfo {
                        name: name.clone(),
                        padding: *padding,
                        style: style.clone(),
                    });
                    LayoutNode::Wrap {
                        wrap: WrapId(wraps.len() as u32 - 1),
                        child: new_id[c.index()],
                    }
                }
                Pending::JoinH(a, b) => LayoutNode::JoinH(new_id[a.index()], new_id[b.index()]),
                Pending::JoinV(a, b) => LayoutNode::JoinV(new_id[a.index()], new_id[b.index()]),
            };
            new_id[id.index()] = NodeId(nodes.len() as u32);
            nodes.push(node);
        }
        Ok(LayoutTree {
            nodes,
            fragments,
            wraps,
        })
    }
}
