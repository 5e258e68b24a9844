//! The common output of every layout algorithm.

use std::ops::Range;

use serde::Serialize;

use crate::geometry::Rect;
use crate::model::{LayoutNode, LayoutTree, NodeId};

/// Absolute fragment rectangles plus the visual line structure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Placement {
    /// Indexed by column (document order of fragments).
    pub rects: Vec<Rect>,
    /// Columns of each visual line; contiguous and in order.
    pub lines: Vec<Range<usize>>,
}

impl Placement {
    pub fn line_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.rects.len()];
        for (i, r) in self.lines.iter().enumerate() {
            out[r.clone()].iter_mut().for_each(|l| *l = i);
        }
        out
    }

    /// Bounding box of the non-spacer fragments.
    pub fn bbox(&self, tree: &LayoutTree) -> Option<Rect> {
        Rect::bbox(
            self.rects
                .iter()
                .zip(tree.fragments())
                .filter(|(_, f)| !f.is_spacer)
                .map(|(r, _)| r),
        )
    }
}

/// Line structure of the tree as written: one range per source line.
pub fn source_lines(tree: &LayoutTree) -> Vec<Range<usize>> {
    let (line_of, n) = tree.column_lines();
    lines_from_index(&line_of, n)
}

pub(crate) fn lines_from_index(line_of: &[usize], n: usize) -> Vec<Range<usize>> {
    let mut out = vec![0..0; n];
    let mut start = 0;
    for (i, r) in out.iter_mut().enumerate() {
        let end = start + line_of[start..].iter().take_while(|&&l| l == i).count();
        *r = start..end;
        start = end;
    }
    out
}

/// Plain text layout ignoring every wrap: fragments packed left to right,
/// lines `line_height` apart.
pub fn flat_text_placement(tree: &LayoutTree, line_height: f64) -> Placement {
    let lines = source_lines(tree);
    let mut rects = vec![Rect::default(); tree.fragments().len()];
    for (i, r) in lines.iter().enumerate() {
        let mut x = 0.0;
        for c in r.clone() {
            let f = &tree.fragments()[c];
            rects[c] = Rect::new(x, i as f64 * line_height, f.width, f.height);
            x += f.width;
        }
    }
    Placement { rects, lines }
}

/// Non-spacer fragment rects under `node`, each inflated by the cumulative
/// padding `sigma(column)` it carries at that node.
pub fn node_region(
    tree: &LayoutTree,
    placement: &Placement,
    columns: Range<usize>,
    sigma: impl Fn(usize) -> f64,
) -> Vec<Rect> {
    columns
        .filter(|&c| !tree.fragments()[c].is_spacer)
        .map(|c| placement.rects[c].inflate(sigma(c)))
        .collect()
}

/// Extent (bounding box of the inflated rects) of every node's region.
pub fn region_extents(
    tree: &LayoutTree,
    placement: &Placement,
    sigma: impl Fn(NodeId, usize) -> f64,
) -> Vec<Option<Rect>> {
    let ranges = tree.column_ranges();
    (0..tree.nodes().len())
        .map(|i| {
            let n = NodeId(i as u32);
            if matches!(tree.node(n), LayoutNode::Empty) {
                return None;
            }
            let rs = node_region(tree, placement, ranges[i].clone(), |c| sigma(n, c));
            Rect::bbox(&rs)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::LayoutTreeBuilder;

    #[test]
    fn flat_layout_prefix_sums() {
        let mut b = LayoutTreeBuilder::new();
        let a = b.atom(10.0, 16.0);
        let c = b.atom(20.0, 16.0);
        let d = b.atom(5.0, 16.0);
        let h = b.join_h(a, c);
        let v = b.join_v(h, d);
        let t = b.build(v).unwrap();
        let p = flat_text_placement(&t, 16.0);
        assert_eq!(p.rects[1].x, 10.0);
        assert_eq!(p.rects[2], Rect::new(0.0, 16.0, 5.0, 16.0));
        assert_eq!(p.lines, vec![0..2, 2..3]);
        assert_eq!(p.line_of(), vec![0, 0, 1]);
    }
}
