//! Top-down smoothing of region outlines.
//!
//! Outlines only grow: concave corners and antiknobs (edges between two
//! concave corners) are filled with rectangles as long as the result stays
//! inside `keep_in`, away from `keep_out`, and has fewer corners.

use crate::geometry::{self, covered_area, erode, is_concave, union, Polygon, Pt, Rect, EPS};
use crate::layout::{node_region, Placement};
use crate::model::{LayoutNode, LayoutTree, NodeId, WrapId};

/// Outline of `node`: its non-spacer fragment rects, each inflated by the
/// cumulative padding it carries at that node.
pub fn polygon_of(
    tree: &LayoutTree,
    placement: &Placement,
    node: NodeId,
    sigma: impl Fn(usize) -> f64,
) -> Polygon {
    let cols = tree.column_ranges()[node.index()].clone();
    geometry::boundary_of_rect_union(&node_region(tree, placement, cols, sigma))
}

struct Bounds {
    keep_in: Vec<Rect>,
    keep_out: Vec<Rect>,
}

impl Bounds {
    fn new(keep_out: &[&Polygon], keep_in: &Polygon) -> Bounds {
        Bounds {
            keep_in: keep_in.to_rects(),
            keep_out: keep_out.iter().flat_map(|p| p.to_rects()).collect(),
        }
    }

    /// `p ∪ r` if that is an admissible step.
    fn try_fill(&self, p: &Polygon, p_rects: &[Rect], r: Rect) -> Option<Polygon> {
        let a = r.area();
        if a <= EPS
            || covered_area(&r, p_rects) >= a - EPS
            || covered_area(&r, &self.keep_in) < a - EPS
            || covered_area(&r, &self.keep_out) > EPS
        {
            return None;
        }
        let q = union(p, &Polygon::from_rect(r));
        (q.corner_count() < p.corner_count()).then_some(q)
    }
}

fn around(l: &[Pt], k: usize, d: isize) -> Pt {
    let n = l.len() as isize;
    l[((k as isize + d) % n + n) as usize % l.len()]
}

/// Rectangles spanned by the two edges at each concave corner, in scan
/// order.
fn corner_candidates(p: &Polygon) -> Vec<Rect> {
    let mut out = Vec::new();
    for l in &p.loops {
        for k in 0..l.len() {
            let (u, v, w) = (around(l, k, -1), l[k], around(l, k, 1));
            if is_concave(u, v, w) {
                let xs = [u.x, v.x, w.x];
                let ys = [u.y, v.y, w.y];
                out.push(Rect::from_corners(
                    xs.iter().copied().fold(f64::INFINITY, f64::min),
                    ys.iter().copied().fold(f64::INFINITY, f64::min),
                    xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                    ys.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                ));
            }
        }
    }
    out
}

/// For each edge flanked by two concave corners, the rectangle over it as
/// deep as the shorter flanking edge.
fn antiknob_candidates(p: &Polygon) -> Vec<Rect> {
    let mut out = Vec::new();
    for l in &p.loops {
        for k in 0..l.len() {
            let (a, b, c, d) = (around(l, k, -1), l[k], around(l, k, 1), around(l, k, 2));
            if !(is_concave(a, b, c) && is_concave(b, c, d)) {
                continue;
            }
            let depth = dist(a, b).min(dist(c, d));
            let len = dist(b, c);
            let (tx, ty) = ((c.x - b.x) / len, (c.y - b.y) / len);
            // outward is to the left of travel
            let (nx, ny) = (ty, -tx);
            let far_b = Pt::new(b.x + nx * depth, b.y + ny * depth);
            out.push(Rect::from_corners(
                b.x.min(c.x).min(far_b.x),
                b.y.min(c.y).min(far_b.y),
                b.x.max(c.x).max(far_b.x),
                b.y.max(c.y).max(far_b.y),
            ));
        }
    }
    out
}

fn dist(a: Pt, b: Pt) -> f64 {
    (a.x - b.x).abs() + (a.y - b.y).abs()
}

fn first_fill(bounds: &Bounds, p: &Polygon, candidates: Vec<Rect>) -> Option<Polygon> {
    let p_rects = p.to_rects();
    candidates
        .into_iter()
        .find_map(|r| bounds.try_fill(p, &p_rects, r))
}

/// Fills the first concave corner (scan order) that can be filled.
pub fn simplify_corner(keep_out: &Polygon, keep_in: &Polygon, p: &Polygon) -> Option<Polygon> {
    first_fill(&Bounds::new(&[keep_out], keep_in), p, corner_candidates(p))
}

/// Fills the first antiknob (scan order) that can be filled.
pub fn simplify_antiknob(keep_out: &Polygon, keep_in: &Polygon, p: &Polygon) -> Option<Polygon> {
    first_fill(
        &Bounds::new(&[keep_out], keep_in),
        p,
        antiknob_candidates(p),
    )
}

fn fixpoint(bounds: &Bounds, mut p: Polygon) -> Polygon {
    loop {
        if let Some(q) = first_fill(bounds, &p, corner_candidates(&p)) {
            p = q;
        } else if let Some(q) = first_fill(bounds, &p, antiknob_candidates(&p)) {
            p = q;
        } else {
            return p;
        }
    }
}

/// Applies both rules until neither applies. Disconnected pieces are
/// simplified one at a time, each keeping out of the others.
pub fn simplify_polygon(p: &Polygon, keep_out: &Polygon, keep_in: &Polygon) -> Polygon {
    let mut parts = p.components();
    if parts.len() <= 1 {
        return fixpoint(&Bounds::new(&[keep_out], keep_in), p.clone());
    }
    for i in 0..parts.len() {
        let others: Vec<&Polygon> = std::iter::once(keep_out)
            .chain(
                parts
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, q)| q),
            )
            .collect();
        let bounds = Bounds::new(&others, keep_in);
        parts[i] = fixpoint(&bounds, parts[i].clone());
    }
    let mut out = Polygon::default();
    for q in &parts {
        out = union(&out, q);
    }
    out
}

/// Outlines of every node before and after simplification.
#[derive(Debug, Clone)]
pub struct Outlines {
    pub before: Vec<Polygon>,
    pub after: Vec<Polygon>,
    /// The `keep_in` each node was simplified against.
    pub keep_in: Vec<Polygon>,
}

impl Outlines {
    /// Unsimplified outlines only.
    pub fn unsimplified(
        tree: &LayoutTree,
        placement: &Placement,
        sigma: impl Fn(NodeId, usize) -> f64,
    ) -> Outlines {
        let ranges = tree.column_ranges();
        let before: Vec<Polygon> = (0..tree.nodes().len())
            .map(|i| {
                let n = NodeId(i as u32);
                let rs = node_region(tree, placement, ranges[i].clone(), |c| sigma(n, c));
                geometry::boundary_of_rect_union(&rs)
            })
            .collect();
        Outlines {
            after: before.clone(),
            keep_in: vec![Polygon::default(); before.len()],
            before,
        }
    }

    /// `(wrap, node, outline)` for every wrap, outermost first.
    pub fn wraps<'a>(
        &'a self,
        tree: &'a LayoutTree,
    ) -> impl Iterator<Item = (WrapId, NodeId, &'a Polygon)> + 'a {
        (0..tree.nodes().len())
            .rev()
            .filter_map(move |i| match tree.nodes()[i] {
                LayoutNode::Wrap { wrap, .. } => Some((wrap, NodeId(i as u32), &self.after[i])),
                _ => None,
            })
    }
}

/// Root `keep_in`: the bounding box of the root's padded region (so the
/// root padding is already in) grown by one line.
pub fn root_keep_in(root_outline: &Polygon, line_height: f64) -> Polygon {
    root_outline
        .bbox()
        .map(|b| Polygon::from_rect(b.inflate(line_height)))
        .unwrap_or_default()
}

/// Simplifies outlines top-down. A wrap's children must stay inside its
/// simplified outline shrunk by its padding; the children of a join keep
/// out of each other, the second seeing the first's simplified outline.
pub fn simplify(
    tree: &LayoutTree,
    placement: &Placement,
    sigma: impl Fn(NodeId, usize) -> f64,
    line_height: f64,
) -> Outlines {
    let mut o = Outlines::unsimplified(tree, placement, sigma);
    let root = tree.root().index();
    let k = root_keep_in(&o.before[root], line_height);
    o.after[root] = simplify_polygon(&o.before[root], &Polygon::default(), &k);
    o.keep_in[root] = k;
    let mut stack = vec![tree.root()];
    while let Some(n) = stack.pop() {
        match *tree.node(n) {
            LayoutNode::Wrap { wrap, child } => {
                let k = erode(&o.after[n.index()], tree.padding(wrap));
                let c = child.index();
                o.after[c] = simplify_polygon(&o.before[c], &Polygon::default(), &k);
                o.keep_in[c] = k;
                stack.push(child);
            }
            LayoutNode::JoinH(a, b) | LayoutNode::JoinV(a, b) => {
                let k = o.after[n.index()].clone();
                let (ai, bi) = (a.index(), b.index());
                o.after[ai] = simplify_polygon(&o.before[ai], &o.before[bi], &k);
                o.after[bi] = simplify_polygon(&o.before[bi], &o.after[ai], &k);
                o.keep_in[ai] = k.clone();
                o.keep_in[bi] = k;
                stack.push(b);
                stack.push(a);
            }
            _ => {}
        }
    }
    o
}
