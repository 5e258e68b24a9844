//! Reference layouts: nested boxes (with and without spacers) and S-Blocks.

use crate::geometry::Rect;
use crate::layout::{source_lines, Placement};
use crate::model::{LayoutNode, LayoutTree, NodeId};
use crate::regions_stateful::layout_l1s;

#[derive(Debug, Clone)]
enum Item {
    Frag {
        column: usize,
        w: f64,
        h: f64,
    },
    Box {
        node: NodeId,
        pad: f64,
        w: f64,
        h: f64,
        inner: Vec<FlowLine>,
    },
}

impl Item {
    fn size(&self) -> (f64, f64) {
        match *self {
            Item::Frag { w, h, .. } | Item::Box { w, h, .. } => (w, h),
        }
    }
}

#[derive(Debug, Clone, Default)]
struct FlowLine {
    items: Vec<Item>,
}

impl FlowLine {
    fn width(&self) -> f64 {
        self.items.iter().map(|i| i.size().0).sum()
    }

    fn height(&self, line_height: f64) -> f64 {
        self.items
            .iter()
            .map(|i| i.size().1)
            .fold(line_height, f64::max)
    }
}

/// Output of [`layout_boxes`]: positions plus one rectangle per wrap node.
/// Dropped spacers keep a zero rectangle at the origin.
#[derive(Debug, Clone)]
pub struct BoxesLayout {
    pub placement: Placement,
    /// `(wrap node, box)`, outermost first.
    pub boxes: Vec<(NodeId, Rect)>,
}

/// Classic nested boxes. Inside a wrap, children flow inline and break only
/// at their own newlines; items on a flow line are top-aligned; a wrap's box
/// is its content plus padding on all four sides. Without `render_spacers`
/// spacers are dropped.
pub fn layout_boxes(tree: &LayoutTree, render_spacers: bool, line_height: f64) -> BoxesLayout {
    let mut flows: Vec<Vec<FlowLine>> = Vec::with_capacity(tree.nodes().len());
    for (i, node) in tree.nodes().iter().enumerate() {
        let frag = |c: usize| {
            let f = &tree.fragments()[c];
            Item::Frag {
                column: c,
                w: f.width,
                h: f.height,
            }
        };
        let lines = match *node {
            LayoutNode::Empty => Vec::new(),
            LayoutNode::Atom(c) | LayoutNode::Pin { column: c, .. } => {
                vec![FlowLine {
                    items: vec![frag(c)],
                }]
            }
            LayoutNode::Spacer(c) => {
                let items = if render_spacers {
                    vec![frag(c)]
                } else {
                    Vec::new()
                };
                vec![FlowLine { items }]
            }
            LayoutNode::Wrap { wrap, child } => {
                let inner = std::mem::take(&mut flows[child.index()]);
                let pad = tree.padding(wrap);
                let w = inner.iter().map(FlowLine::width).fold(0.0, f64::max) + 2.0 * pad;
                let h = inner.iter().map(|l| l.height(line_height)).sum::<f64>() + 2.0 * pad;
                let node = NodeId(i as u32);
                vec![FlowLine {
                    items: vec![Item::Box {
                        node,
                        pad,
                        w,
                        h,
                        inner,
                    }],
                }]
            }
            LayoutNode::JoinH(a, b) => {
                let mut la = std::mem::take(&mut flows[a.index()]);
                let mut lb = std::mem::take(&mut flows[b.index()]).into_iter();
                match (la.last_mut(), lb.next()) {
                    (Some(last), Some(first)) => last.items.extend(first.items),
                    (None, Some(first)) => la.push(first),
                    _ => {}
                }
                la.extend(lb);
                la
            }
            LayoutNode::JoinV(a, b) => {
                let mut la = std::mem::take(&mut flows[a.index()]);
                la.append(&mut flows[b.index()]);
                la
            }
        };
        flows.push(lines);
    }
    let root = std::mem::take(&mut flows[tree.root().index()]);
    let mut rects = vec![Rect::default(); tree.fragments().len()];
    let mut boxes = Vec::new();
    place(&root, 0.0, 0.0, line_height, &mut rects, &mut boxes);
    BoxesLayout {
        placement: Placement {
            rects,
            lines: source_lines(tree),
        },
        boxes,
    }
}

fn place(
    lines: &[FlowLine],
    x0: f64,
    mut y: f64,
    line_height: f64,
    rects: &mut [Rect],
    boxes: &mut Vec<(NodeId, Rect)>,
) {
    for line in lines {
        let mut x = x0;
        for item in &line.items {
            match item {
                Item::Frag { column, w, h } => rects[*column] = Rect::new(x, y, *w, *h),
                Item::Box {
                    node,
                    pad,
                    w,
                    h,
                    inner,
                } => {
                    boxes.push((*node, Rect::new(x, y, *w, *h)));
                    place(inner, x + pad, y + pad, line_height, rects, boxes);
                }
            }
            x += item.size().0;
        }
        y += line.height(line_height);
    }
}

/// S-Blocks: x exactly as L1; each line is a band tall enough for every
/// fragment's fully padded rectangle, and bands never share borders.
///
/// With `T` the largest padding above a fragment on the line, fragments sit
/// at `band top + T` and the band is `T + max(height + padding)` tall, at
/// least `line_height`.
pub fn layout_sblocks(tree: &LayoutTree, line_height: f64) -> Placement {
    let (mut placement, state) = layout_l1s(tree, line_height);
    let root = tree.root();
    let frags = tree.fragments();
    let mut y = 0.0;
    for range in placement.lines.clone() {
        let inked: Vec<usize> = range.clone().filter(|&c| !frags[c].is_spacer).collect();
        let top = inked
            .iter()
            .map(|&c| state.sigma(root, c))
            .fold(0.0, f64::max);
        let below = inked
            .iter()
            .map(|&c| frags[c].height + state.sigma(root, c))
            .fold(0.0, f64::max);
        for c in range {
            placement.rects[c].y = y + top;
        }
        y += if inked.is_empty() {
            line_height
        } else {
            (top + below).max(line_height)
        };
    }
    placement
}
