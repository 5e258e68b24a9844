//! Stateful regions: a shared timetable of cells plus (begin, end, depth)
//! spans into it, and the L1S layout algorithm built on them.
//!
//! Fragment rectangles live in one shared vector, so translating a node's
//! columns is visible through every span that covers them. Merging uses a
//! bucketed index over the placed stacks instead of comparing all pairs.

use std::fmt::Write as _;
use std::ops::Range;

use serde::Serialize;

use crate::geometry::Rect;
use crate::layout::Placement;
use crate::model::{LayoutNode, LayoutTree, NodeId, WrapId};
use crate::regions_pure::{leading_x, Cell};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Span {
    pub begin: usize,
    pub end: usize,
    pub depth: usize,
}

impl Span {
    pub fn columns(&self) -> Range<usize> {
        self.begin..self.end
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum RegionError {
    #[error("no region for {0}: layout has not run")]
    NotLaidOut(NodeId),
}

/// Column-major table of cells; `None` is the empty sentinel.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Timetable {
    columns: Vec<Vec<Option<Cell>>>,
}

impl Timetable {
    fn with_columns(n: usize) -> Self {
        Timetable {
            columns: vec![vec![None]; n],
        }
    }

    pub fn columns(&self) -> &[Vec<Option<Cell>>] {
        &self.columns
    }

    pub fn rows(&self) -> usize {
        self.columns.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn entry(&self, row: usize, column: usize) -> Option<Cell> {
        self.columns[column].get(row).copied().flatten()
    }

    /// Cumulative padding of `column` at `row`; 0 for a sentinel.
    pub fn sigma(&self, row: usize, column: usize) -> f64 {
        self.entry(row, column).map_or(0.0, |c| c.sigma)
    }

    fn wrap(&mut self, span: Span, wrap: WrapId, padding: f64, spacer: &[bool]) -> Span {
        for c in span.columns() {
            let col = &mut self.columns[c];
            debug_assert_eq!(col.len(), span.depth + 1);
            let next = if spacer[c] {
                None
            } else {
                let prev = col[span.depth].map_or(0.0, |x| x.sigma);
                Some(Cell {
                    wrap,
                    sigma: prev + padding,
                })
            };
            col.push(next);
        }
        Span {
            depth: span.depth + 1,
            ..span
        }
    }

    fn join(&mut self, a: Span, b: Span) -> Span {
        let depth = a.depth.max(b.depth);
        for s in [a, b] {
            for c in s.columns() {
                let col = &mut self.columns[c];
                let top = col[s.depth];
                col.resize(depth + 1, top);
            }
        }
        Span {
            begin: a.begin.min(b.begin),
            end: a.end.max(b.end),
            depth,
        }
    }

    /// Walks two columns down from `row`, shedding shared cells.
    pub fn space_between(&self, row: usize, a: usize, b: usize) -> (f64, f64) {
        let (ca, cb) = (&self.columns[a], &self.columns[b]);
        for r in (0..=row).rev() {
            match (ca[r], cb[r]) {
                (Some(x), Some(y)) if x.wrap == y.wrap => continue,
                (x, y) => return (x.map_or(0.0, |c| c.sigma), y.map_or(0.0, |c| c.sigma)),
            }
        }
        (0.0, 0.0)
    }

    /// Cells of `column` as seen from `row`, outermost first, with the
    /// repeats introduced by filling removed.
    pub fn cells_at(&self, row: usize, column: usize) -> Vec<Cell> {
        let mut out: Vec<Cell> = Vec::new();
        for r in (0..=row).rev() {
            if let Some(c) = self.columns[column][r] {
                if out.last().is_none_or(|l| l.wrap != c.wrap) {
                    out.push(c);
                }
            }
        }
        out
    }

    /// Aligned text dump: one column per fragment, rows listed outermost
    /// first, sentinels shown as a dash.
    pub fn dump(&self, tree: &LayoutTree) -> String {
        let header: Vec<String> = tree
            .fragments()
            .iter()
            .map(|f| {
                let t = f.text.trim();
                if f.is_spacer {
                    "_".to_string()
                } else if t.is_empty() {
                    f.id.to_string()
                } else {
                    t.to_string()
                }
            })
            .collect();
        let rows = self.rows();
        let grid: Vec<Vec<String>> = (0..rows)
            .rev()
            .map(|r| {
                (0..self.columns.len())
                    .map(|c| match self.columns[c].get(r).copied().flatten() {
                        Some(cell) => format!("{}:{}", tree.wrap(cell.wrap).name, cell.sigma),
                        None => "\u{2014}".to_string(),
                    })
                    .collect()
            })
            .collect();
        let width: Vec<usize> = (0..self.columns.len())
            .map(|c| {
                grid.iter()
                    .map(|row| row[c].chars().count())
                    .chain([header[c].chars().count()])
                    .max()
                    .unwrap_or(1)
            })
            .collect();
        let label = rows.to_string().len().max(3);
        let mut out = String::new();
        let mut emit = |lead: &str, cells: &[String]| {
            let mut line = format!("{lead:>label$}");
            for (c, s) in cells.iter().enumerate() {
                let pad = width[c] - s.chars().count();
                let _ = write!(line, " | {s}{}", " ".repeat(pad));
            }
            out.push_str(line.trim_end());
            out.push('\n');
        };
        emit("", &header);
        for (i, row) in grid.iter().enumerate() {
            emit(&(rows - 1 - i).to_string(), row);
        }
        out
    }
}

/// Structural simulation only: the timetable and every node's span.
pub fn build_timetable(tree: &LayoutTree) -> (Timetable, Vec<Span>) {
    let spacer: Vec<bool> = tree.fragments().iter().map(|f| f.is_spacer).collect();
    let mut table = Timetable::with_columns(tree.fragments().len());
    let ranges = tree.column_ranges();
    let mut spans: Vec<Span> = Vec::with_capacity(tree.nodes().len());
    for (i, node) in tree.nodes().iter().enumerate() {
        let s = match *node {
            LayoutNode::Wrap { wrap, child } => {
                table.wrap(spans[child.index()], wrap, tree.padding(wrap), &spacer)
            }
            LayoutNode::JoinH(a, b) | LayoutNode::JoinV(a, b) => {
                table.join(spans[a.index()], spans[b.index()])
            }
            _ => Span {
                begin: ranges[i].start,
                end: ranges[i].end,
                depth: 0,
            },
        };
        spans.push(s);
    }
    (table, spans)
}

/// One visual line of a node: its columns and horizontal advance.
#[derive(Debug, Clone)]
struct SLine {
    cols: Range<usize>,
    advance: f64,
}

/// L1S state for one document. Spans are only available after [`layout`].
///
/// [`layout`]: StatefulLayout::layout
#[derive(Debug, Clone)]
pub struct StatefulLayout<'t> {
    tree: &'t LayoutTree,
    table: Timetable,
    spans: Vec<Option<Span>>,
    rects: Vec<Rect>,
    line_tops: Vec<f64>,
}

impl<'t> StatefulLayout<'t> {
    pub fn new(tree: &'t LayoutTree) -> Self {
        StatefulLayout {
            tree,
            table: Timetable::with_columns(tree.fragments().len()),
            spans: vec![None; tree.nodes().len()],
            rects: Vec::new(),
            line_tops: Vec::new(),
        }
    }

    pub fn timetable(&self) -> &Timetable {
        &self.table
    }

    pub fn line_tops(&self) -> &[f64] {
        &self.line_tops
    }

    pub fn region_span_of(&self, node: NodeId) -> Result<Span, RegionError> {
        self.spans
            .get(node.index())
            .copied()
            .flatten()
            .ok_or(RegionError::NotLaidOut(node))
    }

    /// Cumulative padding `column` carries within `node`'s region.
    pub fn sigma(&self, node: NodeId, column: usize) -> f64 {
        let span = self.spans[node.index()].expect("layout has run");
        self.table.sigma(span.depth, column)
    }

    fn translate(&mut self, cols: Range<usize>, dx: f64, dy: f64) {
        for r in &mut self.rects[cols] {
            *r = r.translate(dx, dy);
        }
    }

    /// Runs L1S and returns absolute positions.
    pub fn layout(&mut self, line_height: f64) -> Placement {
        let tree = self.tree;
        let frags = tree.fragments();
        let spacer: Vec<bool> = frags.iter().map(|f| f.is_spacer).collect();
        self.table = Timetable::with_columns(frags.len());
        self.rects = frags
            .iter()
            .map(|f| Rect::new(0.0, 0.0, f.width, if f.is_spacer { 0.0 } else { f.height }))
            .collect();
        let ranges = tree.column_ranges();
        let mut results: Vec<Vec<SLine>> = Vec::new();
        for (i, node) in tree.nodes().iter().enumerate() {
            let (lines, span) = match *node {
                LayoutNode::Empty => (
                    Vec::new(),
                    Span {
                        begin: ranges[i].start,
                        end: ranges[i].end,
                        depth: 0,
                    },
                ),
                LayoutNode::Atom(c) | LayoutNode::Spacer(c) | LayoutNode::Pin { column: c, .. } => {
                    (
                        vec![SLine {
                            cols: c..c + 1,
                            advance: frags[c].width,
                        }],
                        Span {
                            begin: c,
                            end: c + 1,
                            depth: 0,
                        },
                    )
                }
                LayoutNode::Wrap { wrap, child } => {
                    let mut lines = results.pop().expect("post-order");
                    let p = tree.padding(wrap);
                    let cs = self.spans[child.index()].expect("child visited");
                    self.translate(cs.columns(), p, 0.0);
                    lines.iter_mut().for_each(|l| l.advance += 2.0 * p);
                    (lines, self.table.wrap(cs, wrap, p, &spacer))
                }
                LayoutNode::JoinH(a, b) | LayoutNode::JoinV(a, b) => {
                    let lb = results.pop().expect("post-order");
                    let mut la = results.pop().expect("post-order");
                    if matches!(node, LayoutNode::JoinH(..)) && !la.is_empty() && !lb.is_empty() {
                        let last = la.pop().expect("non-empty");
                        let first = &lb[0];
                        self.translate(first.cols.clone(), last.advance, 0.0);
                        la.push(SLine {
                            cols: last.cols.start..first.cols.end,
                            advance: last.advance + first.advance,
                        });
                        la.extend(lb.into_iter().skip(1));
                    } else {
                        la.extend(lb);
                    }
                    let sa = self.spans[a.index()].expect("child visited");
                    let sb = self.spans[b.index()].expect("child visited");
                    (la, self.table.join(sa, sb))
                }
            };
            self.spans[i] = Some(span);
            results.push(lines);
        }
        let lines: Vec<Range<usize>> = results
            .pop()
            .unwrap_or_default()
            .into_iter()
            .map(|l| l.cols)
            .collect();
        let depth = self.spans.last().copied().flatten().map_or(0, |s| s.depth);
        self.merge(&lines, depth, &spacer, line_height);
        Placement {
            rects: self.rects.clone(),
            lines,
        }
    }

    fn merge(&mut self, lines: &[Range<usize>], row: usize, spacer: &[bool], line_height: f64) {
        self.line_tops.clear();
        let outer: Vec<f64> = (0..self.rects.len())
            .map(|c| self.table.sigma(row, c))
            .collect();
        let mut index = BucketIndex::new(&self.rects, &outer, spacer);
        for (i, cols) in lines.iter().enumerate() {
            let y = if i == 0 {
                0.0
            } else {
                let floor = self.line_tops[i - 1] + line_height;
                let mut best = floor;
                for b in cols.clone().filter(|&c| !spacer[c]) {
                    index.query(b, &self.rects, &outer, &mut best, |a| {
                        let (pa, pb) = self.table.space_between(row, a, b);
                        leading_x(&self.rects[a].inflate(pa), &self.rects[b].inflate(pb))
                    });
                }
                best
            };
            self.translate(cols.clone(), 0.0, y);
            for c in cols.clone().filter(|&c| !spacer[c]) {
                index.insert(c, &self.rects[c], outer[c]);
            }
            self.line_tops.push(y);
        }
    }
}

/// Placed stacks bucketed by their fully inflated x-interval. Within a bucket
/// entries keep insertion order alongside a running maximum of
/// `bottom + outer padding`, which bounds any leading they can cause.
struct BucketIndex {
    origin: f64,
    size: f64,
    buckets: Vec<Vec<(usize, f64)>>,
}

impl BucketIndex {
    fn new(rects: &[Rect], outer: &[f64], spacer: &[bool]) -> Self {
        let live: Vec<usize> = (0..rects.len()).filter(|&c| !spacer[c]).collect();
        if live.is_empty() {
            return BucketIndex {
                origin: 0.0,
                size: 1.0,
                buckets: Vec::new(),
            };
        }
        let lo = live
            .iter()
            .map(|&c| rects[c].left() - outer[c])
            .fold(f64::INFINITY, f64::min);
        let hi = live
            .iter()
            .map(|&c| rects[c].right() + outer[c])
            .fold(f64::NEG_INFINITY, f64::max);
        let mean = live
            .iter()
            .map(|&c| rects[c].w + 2.0 * outer[c])
            .sum::<f64>()
            / live.len() as f64;
        let size = (2.0 * mean).max((hi - lo) / 4096.0).max(1e-3);
        let n = ((hi - lo) / size).floor() as usize + 1;
        BucketIndex {
            origin: lo,
            size,
            buckets: vec![Vec::new(); n],
        }
    }

    fn range(&self, r: &Rect, outer: f64) -> Range<usize> {
        let last = self.buckets.len().saturating_sub(1);
        let a = ((r.left() - outer - self.origin) / self.size)
            .floor()
            .max(0.0) as usize;
        let b = ((r.right() + outer - self.origin) / self.size)
            .floor()
            .max(0.0) as usize;
        a.min(last)..b.min(last) + 1
    }

    fn insert(&mut self, column: usize, r: &Rect, outer: f64) {
        let key = r.bottom() + outer;
        for k in self.range(r, outer) {
            let bucket = &mut self.buckets[k];
            let m = bucket.last().map_or(key, |&(_, m)| m.max(key));
            bucket.push((column, m));
        }
    }

    /// Raises `best` to the largest exact leading from any entry that could
    /// beat it.
    fn query(
        &self,
        column: usize,
        rects: &[Rect],
        outer: &[f64],
        best: &mut f64,
        mut exact: impl FnMut(usize) -> f64,
    ) {
        let r = &rects[column];
        let slack = outer[column] - r.top();
        for k in self.range(r, outer[column]) {
            for &(a, m) in self.buckets[k].iter().rev() {
                if m + slack <= *best {
                    break;
                }
                let l = exact(a);
                if l > *best {
                    *best = l;
                }
            }
        }
    }
}

/// Convenience wrapper: L1S positions and the spans of every node.
pub fn layout_l1s(tree: &LayoutTree, line_height: f64) -> (Placement, StatefulLayout<'_>) {
    let mut s = StatefulLayout::new(tree);
    let p = s.layout(line_height);
    (p, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::LayoutTreeBuilder;
    use crate::regions_pure::layout_l1p;

    #[test]
    fn no_wraps_one_row() {
        let mut b = LayoutTreeBuilder::new();
        let xs: Vec<_> = (0..3).map(|_| b.atom(5.0, 5.0)).collect();
        let r = b.join_h_all(&xs).unwrap();
        let t = b.build(r).unwrap();
        let (table, spans) = build_timetable(&t);
        assert_eq!(table.rows(), 1);
        assert_eq!(
            *spans.last().unwrap(),
            Span {
                begin: 0,
                end: 3,
                depth: 0
            }
        );
    }

    #[test]
    fn filling_repeats_topmost() {
        // frag 0 wrapped twice, frags 1-2 wrapped once
        let mut b = LayoutTreeBuilder::new();
        let x0 = b.atom(5.0, 5.0);
        let w0 = b.wrap("a", x0, 1.0);
        let w1 = b.wrap("b", w0, 1.0);
        let x1 = b.atom(5.0, 5.0);
        let x2 = b.atom(5.0, 5.0);
        let j = b.join_h(x1, x2);
        let w2 = b.wrap("c", j, 2.0);
        let r = b.join_h(w1, w2);
        let t = b.build(r).unwrap();
        let (table, spans) = build_timetable(&t);
        assert!(table.columns().iter().all(|c| c.len() == 3));
        let c = table.columns();
        assert_eq!(c[1][2], c[1][1]);
        assert_eq!(c[2][1].unwrap().sigma, 2.0);
        assert_eq!(spans.last().unwrap().depth, 2);
        assert_eq!(table.cells_at(2, 0).len(), 2);
        assert_eq!(table.cells_at(2, 1).len(), 1);
    }

    #[test]
    fn span_before_layout_is_an_error() {
        let mut b = LayoutTreeBuilder::new();
        let x = b.atom(1.0, 1.0);
        let t = b.build(x).unwrap();
        let s = StatefulLayout::new(&t);
        assert_eq!(
            s.region_span_of(NodeId(0)),
            Err(RegionError::NotLaidOut(NodeId(0)))
        );
    }

    #[test]
    fn matches_pure_on_small_tree() {
        let mut b = LayoutTreeBuilder::new();
        let a = b.atom(10.0, 10.0);
        let c = b.atom(20.0, 10.0);
        let wa = b.wrap("a", a, 2.0);
        let h = b.join_h(wa, c);
        let d = b.atom(15.0, 10.0);
        let e = b.atom(5.0, 10.0);
        let wd = b.wrap("d", d, 3.0);
        let h2 = b.join_h(wd, e);
        let v = b.join_v(h, h2);
        let r = b.wrap("r", v, 1.0);
        let t = b.build(r).unwrap();
        let pure = layout_l1p(&t, 10.0);
        let (p, s) = layout_l1s(&t, 10.0);
        assert_eq!(p, pure.placement);
        for n in 0..t.nodes().len() {
            for c in t.column_ranges()[n].clone() {
                assert_eq!(
                    s.sigma(NodeId(n as u32), c),
                    pure.sigma(NodeId(n as u32), c)
                );
            }
        }
        let root = s.region_span_of(t.root()).unwrap();
        assert_eq!(root.columns(), 0..4);
    }

    #[test]
    fn dump_marks_sentinels() {
        let mut b = LayoutTreeBuilder::new();
        let x = b.text("ab", 16.0, 16.0);
        let y = b.text("c", 8.0, 16.0);
        let wy = b.wrap("w", y, 2.0);
        let r = b.join_h(x, wy);
        let t = b.build(r).unwrap();
        let (table, _) = build_timetable(&t);
        let d = table.dump(&t);
        assert!(d.contains('\u{2014}'));
        assert!(d.contains("w:2"));
        assert!(d.lines().next().unwrap().contains("ab"));
    }
}
