//! Regions as explicit lists of stacks, and the L1 layout algorithm over them.
//!
//! This is the reference implementation: every operation is a direct
//! transcription of its definition, and `leading_r` compares all pairs.

use serde::Serialize;

use crate::geometry::Rect;
use crate::layout::Placement;
use crate::model::{LayoutNode, LayoutTree, NodeId, WrapId};

/// One enclosing wrap of a fragment: its id and the cumulative padding from
/// the fragment out to and including that wrap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cell {
    pub wrap: WrapId,
    pub sigma: f64,
}

impl Cell {
    pub fn new(wrap: u32, sigma: f64) -> Self {
        Cell {
            wrap: WrapId(wrap),
            sigma,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stack {
    pub column: usize,
    pub rect: Rect,
    /// Outermost first.
    pub cells: Vec<Cell>,
    pub spacer: bool,
}

impl Stack {
    pub fn fragment(column: usize, rect: Rect, cells: Vec<Cell>) -> Self {
        Stack {
            column,
            rect,
            cells,
            spacer: false,
        }
    }

    pub fn spacer(column: usize, x: f64, width: f64) -> Self {
        Stack {
            column,
            rect: Rect::new(x, 0.0, width, 0.0),
            cells: Vec::new(),
            spacer: true,
        }
    }

    /// Cumulative padding of the outermost cell, 0 without cells.
    pub fn outer_sigma(&self) -> f64 {
        self.cells.first().map_or(0.0, |c| c.sigma)
    }
}

pub type Region = Vec<Stack>;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

/// A region with the advance vector telling where the next region goes.
#[derive(Debug, Clone, PartialEq)]
pub struct Line {
    pub region: Region,
    pub advance: Vec2,
}

pub type Layout = Vec<Line>;

/// Padding owed on each side between two fragments: equal-id outer cells are
/// shed, then the first differing pair's cumulative paddings are returned.
pub fn space_between(a: &[Cell], b: &[Cell]) -> (f64, f64) {
    let shared = a
        .iter()
        .zip(b)
        .take_while(|(x, y)| x.wrap == y.wrap)
        .count();
    (
        a.get(shared).map_or(0.0, |c| c.sigma),
        b.get(shared).map_or(0.0, |c| c.sigma),
    )
}

pub fn advance(a: &Stack, b: &Stack) -> f64 {
    if a.spacer || b.spacer {
        return a.rect.w;
    }
    let (pa, pb) = space_between(&a.cells, &b.cells);
    a.rect.w + pa + pb
}

/// How far `xj` must move down to clear `xi`, when they overlap horizontally.
pub fn leading_x(xi: &Rect, xj: &Rect) -> f64 {
    if xi.h_overlaps(xj) {
        xi.bottom() - xj.top()
    } else {
        0.0
    }
}

pub fn leading_s(a: &Stack, b: &Stack) -> f64 {
    if a.spacer || b.spacer {
        return 0.0;
    }
    let (pa, pb) = space_between(&a.cells, &b.cells);
    leading_x(&a.rect.inflate(pa), &b.rect.inflate(pb))
}

pub fn leading_r(a: &[Stack], b: &[Stack]) -> f64 {
    let mut best: Option<f64> = None;
    for sa in a {
        for sb in b {
            let l = leading_s(sa, sb);
            best = Some(best.map_or(l, |m: f64| m.max(l)));
        }
    }
    best.unwrap_or(0.0)
}

pub fn translate(region: &mut [Stack], v: Vec2) {
    for s in region {
        s.rect = s.rect.translate(v.x, v.y);
    }
}

pub fn union_l(mut a: Line, b: Line) -> Line {
    a.region.extend(b.region);
    Line {
        region: a.region,
        advance: a.advance + b.advance,
    }
}

pub fn wrap_l(wrap: WrapId, padding: f64, mut line: Line) -> Line {
    for s in &mut line.region {
        if !s.spacer {
            let sigma = s.outer_sigma() + padding;
            s.cells.insert(0, Cell { wrap, sigma });
        }
    }
    translate(&mut line.region, Vec2::new(padding, 0.0));
    line.advance = line.advance + Vec2::new(2.0 * padding, 0.0);
    line
}

pub fn join_v(mut a: Layout, b: Layout) -> Layout {
    a.extend(b);
    a
}

pub fn join_h(mut a: Layout, mut b: Layout) -> Layout {
    if a.is_empty() || b.is_empty() {
        a.extend(b);
        return a;
    }
    let last = a.pop().expect("non-empty");
    let mut first = b.remove(0);
    translate(&mut first.region, last.advance);
    a.push(union_l(last, first));
    a.extend(b);
    a
}

/// Line-relative layout of every node, bottom-up.
pub fn layout(tree: &LayoutTree) -> Layout {
    let mut done: Vec<Layout> = Vec::new();
    for node in tree.nodes() {
        let l = match node {
            LayoutNode::Empty => Vec::new(),
            LayoutNode::Atom(c) | LayoutNode::Pin { column: c, .. } => {
                let f = &tree.fragments()[*c];
                vec![Line {
                    region: vec![Stack::fragment(
                        *c,
                        Rect::new(0.0, 0.0, f.width, f.height),
                        vec![],
                    )],
                    advance: Vec2::new(f.width, 0.0),
                }]
            }
            LayoutNode::Spacer(c) => {
                let w = tree.fragments()[*c].width;
                vec![Line {
                    region: vec![Stack::spacer(*c, 0.0, w)],
                    advance: Vec2::new(w, 0.0),
                }]
            }
            LayoutNode::Wrap { wrap, .. } => {
                let child = done.pop().expect("post-order");
                let p = tree.padding(*wrap);
                child.into_iter().map(|l| wrap_l(*wrap, p, l)).collect()
            }
            LayoutNode::JoinH(..) => {
                let b = done.pop().expect("post-order");
                let a = done.pop().expect("post-order");
                join_h(a, b)
            }
            LayoutNode::JoinV(..) => {
                let b = done.pop().expect("post-order");
                let a = done.pop().expect("post-order");
                join_v(a, b)
            }
        };
        done.push(l);
    }
    done.pop().unwrap_or_default()
}

/// Result of merging: the final region plus the top of every line.
#[derive(Debug, Clone, PartialEq)]
pub struct Merged {
    pub region: Region,
    pub line_tops: Vec<f64>,
    /// `leading_r` against everything above, per line (0 for the first).
    pub leadings: Vec<f64>,
}

/// Stacks lines top to bottom. Each line moves down by its leading against
/// everything already placed, but never less than one `line_height` below the
/// previous line.
pub fn merge(layout: Layout, line_height: f64) -> Merged {
    let mut region: Region = Vec::new();
    let mut line_tops = Vec::with_capacity(layout.len());
    let mut leadings = Vec::with_capacity(layout.len());
    for (i, mut line) in layout.into_iter().enumerate() {
        let (y, lead) = if i == 0 {
            (0.0, 0.0)
        } else {
            let lead = leading_r(&region, &line.region);
            (lead.max(line_tops[i - 1] + line_height), lead)
        };
        translate(&mut line.region, Vec2::new(0.0, y));
        region.extend(line.region);
        line_tops.push(y);
        leadings.push(lead);
    }
    Merged {
        region,
        line_tops,
        leadings,
    }
}

/// Output of [`layout_l1p`].
#[derive(Debug, Clone)]
pub struct PureLayout {
    pub placement: Placement,
    /// Final cell list of every column, outermost first.
    pub cells: Vec<Vec<Cell>>,
    pub line_tops: Vec<f64>,
    pub leadings: Vec<f64>,
    wrap_depth: Vec<usize>,
}

impl PureLayout {
    /// Cumulative padding that `column` carries within `node`'s region.
    pub fn sigma(&self, node: NodeId, column: usize) -> f64 {
        self.cells[column]
            .get(self.wrap_depth[node.index()])
            .map_or(0.0, |c| c.sigma)
    }
}

pub fn layout_l1p(tree: &LayoutTree, line_height: f64) -> PureLayout {
    finish(tree, layout(tree), line_height)
}

/// Merges line-relative `lines` and indexes the result by column.
pub(crate) fn finish(tree: &LayoutTree, lines: Layout, line_height: f64) -> PureLayout {
    let ranges: Vec<_> = {
        let mut start = 0;
        lines
            .iter()
            .map(|l| {
                let r = start..start + l.region.len();
                start = r.end;
                r
            })
            .collect()
    };
    let merged = merge(lines, line_height);
    let n = tree.fragments().len();
    let mut rects = vec![Rect::default(); n];
    let mut cells = vec![Vec::new(); n];
    for s in merged.region {
        rects[s.column] = s.rect;
        cells[s.column] = s.cells;
    }
    PureLayout {
        placement: Placement {
            rects,
            lines: ranges,
        },
        cells,
        line_tops: merged.line_tops,
        leadings: merged.leadings,
        wrap_depth: tree.wrap_ancestor_counts(),
    }
}
