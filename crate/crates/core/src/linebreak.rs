//! Optimal line breaking over a wrap-aware tape, then justified layout.
//!
//! The tape is the single line of stacks produced by a tree without vertical
//! joins. Spacers are the only places a line may break; a break consumes its
//! spacer. Line costs follow the usual squared adjustment ratio, using the
//! stretch and shrink of the spacers on the line.

use crate::model::{Fragment, LayoutNode, LayoutTree, LayoutTreeBuilder, NodeId};
use crate::regions_pure::{self, advance, finish, PureLayout, Stack};

const EPS: f64 = 1e-9;
/// Adjustment ratio charged for a short line that has nothing to stretch.
const RIGID_RATIO: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreakParams {
    pub ideal_width: f64,
    /// Stretch of a spacer as a fraction of its width.
    pub stretch: f64,
    /// Shrink of a spacer as a fraction of its width.
    pub shrink: f64,
}

impl BreakParams {
    pub fn new(ideal_width: f64) -> Self {
        BreakParams {
            ideal_width,
            stretch: 0.5,
            shrink: 0.33,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum LinebreakError {
    #[error("line breaking needs a tree without vertical joins (found one at {0})")]
    HasJoinV(NodeId),
    #[error("ideal width must be positive, got {0}")]
    BadWidth(f64),
    #[error("item {text:?} (column {column}) cannot fit in {ideal} px even alone")]
    Overfull {
        column: usize,
        text: String,
        ideal: f64,
    },
}

#[derive(Debug, Clone)]
pub struct Tape {
    pub items: Vec<Stack>,
    /// Indices of spacer items strictly inside the tape.
    pub breakables: Vec<usize>,
    /// Prefix sums of advances and of spacer widths.
    adv: Vec<f64>,
    spacer_w: Vec<f64>,
}

impl Tape {
    pub fn from_tree(tree: &LayoutTree) -> Result<Tape, LinebreakError> {
        if let Some(i) = tree
            .nodes()
            .iter()
            .position(|n| matches!(n, LayoutNode::JoinV(..)))
        {
            return Err(LinebreakError::HasJoinV(NodeId(i as u32)));
        }
        let items = regions_pure::layout(tree)
            .pop()
            .map(|l| l.region)
            .unwrap_or_default();
        Ok(Tape::from_items(items))
    }

    pub fn from_items(items: Vec<Stack>) -> Tape {
        let n = items.len();
        let breakables = (1..n.saturating_sub(1))
            .filter(|&k| items[k].spacer)
            .collect();
        let mut adv = vec![0.0; n.max(1)];
        let mut spacer_w = vec![0.0; n + 1];
        for k in 0..n {
            if k + 1 < n {
                adv[k + 1] = adv[k] + advance(&items[k], &items[k + 1]);
            }
            spacer_w[k + 1] = spacer_w[k]
                + if items[k].spacer {
                    items[k].rect.w
                } else {
                    0.0
                };
        }
        Tape {
            items,
            breakables,
            adv,
            spacer_w,
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Width of a line holding items `i..=j`, including the outer padding on
    /// both ends.
    pub fn line_width(&self, i: usize, j: usize) -> f64 {
        let s = &self.items;
        self.adv[j] - self.adv[i] + s[j].rect.w + s[i].outer_sigma() + s[j].outer_sigma()
    }

    fn spacer_width(&self, i: usize, j: usize) -> f64 {
        self.spacer_w[j + 1] - self.spacer_w[i]
    }

    /// Cost of items `i..=j` as one line, `None` when it cannot fit.
    pub fn line_cost(&self, i: usize, j: usize, last: bool, p: &BreakParams) -> Option<f64> {
        let w = self.line_width(i, j);
        let l = p.ideal_width;
        let sw = self.spacer_width(i, j);
        if w > l + EPS {
            let shrink = sw * p.shrink;
            if w - shrink > l + EPS {
                return None;
            }
            let r = (w - l) / shrink;
            return Some(r * r);
        }
        if last || w >= l - EPS {
            return Some(0.0);
        }
        let stretch = sw * p.stretch;
        let r = if stretch > 0.0 {
            (l - w) / stretch
        } else {
            RIGID_RATIO
        };
        Some(r * r)
    }

    /// Segments of the tape under a break set: `(first, last)` item indices.
    pub fn segments(&self, breaks: &[usize]) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(breaks.len() + 1);
        let mut start = 0;
        for &b in breaks {
            out.push((start, b - 1));
            start = b + 1;
        }
        if !self.is_empty() {
            out.push((start, self.len() - 1));
        }
        out
    }

    pub fn total_cost(&self, breaks: &[usize], p: &BreakParams) -> Option<f64> {
        let segs = self.segments(breaks);
        let n = segs.len();
        segs.iter()
            .enumerate()
            .map(|(k, &(i, j))| {
                if i > j {
                    None
                } else {
                    self.line_cost(i, j, k + 1 == n, p)
                }
            })
            .sum()
    }

    /// Rejects tapes with a piece between consecutive breakables that cannot
    /// fit on any line.
    fn check_fits(&self, p: &BreakParams) -> Result<(), LinebreakError> {
        let segs = self.segments(&self.breakables);
        for &(i, j) in segs.iter().filter(|(i, j)| i <= j) {
            if self.line_cost(i, j, true, p).is_none() {
                let k = (i..=j)
                    .filter(|&k| !self.items[k].spacer)
                    .max_by(|&a, &b| self.items[a].rect.w.total_cmp(&self.items[b].rect.w))
                    .unwrap_or(i);
                return Err(LinebreakError::Overfull {
                    column: self.items[k].column,
                    text: String::new(),
                    ideal: p.ideal_width,
                });
            }
        }
        Ok(())
    }
}

/// Break set of least total cost. Ties go to the set whose break positions
/// are lexicographically smallest, the paragraph end counting as +infinity.
pub fn find_breaks(tape: &Tape, p: &BreakParams) -> Result<Vec<usize>, LinebreakError> {
    if !(p.ideal_width > 0.0) {
        return Err(LinebreakError::BadWidth(p.ideal_width));
    }
    if tape.is_empty() {
        return Ok(Vec::new());
    }
    tape.check_fits(p)?;
    let n = tape.len();
    let bk = &tape.breakables;
    // Line starts: 0 and one past each breakable.
    let starts: Vec<usize> = std::iter::once(0).chain(bk.iter().map(|b| b + 1)).collect();
    // best[s] over line starts, indexed like `starts`; choice = Some(break) or None (to end)
    let mut best = vec![f64::INFINITY; starts.len()];
    let mut choice: Vec<Option<usize>> = vec![None; starts.len()];
    for si in (0..starts.len()).rev() {
        let s = starts[si];
        let mut cur = f64::INFINITY;
        let mut pick = None;
        // Candidate breaks in increasing order, then the paragraph end.
        for (bi, &b) in bk.iter().enumerate().skip(si) {
            if b <= s {
                continue;
            }
            let j = b - 1;
            // Grows with j, and no line from s ending at or after j can be
            // narrower than this once shrunk.
            let floor = tape.adv[j] - tape.adv[s] + tape.items[j].rect.w
                - tape.spacer_width(s, j) * p.shrink
                + tape.items[s].outer_sigma();
            if floor > p.ideal_width + EPS {
                break;
            }
            if let Some(c) = tape.line_cost(s, j, false, p) {
                let total = c + best[bi + 1];
                if total < cur - EPS {
                    cur = total;
                    pick = Some(b);
                }
            }
        }
        if let Some(c) = tape.line_cost(s, n - 1, true, p) {
            if c < cur - EPS {
                cur = c;
                pick = None;
            }
        }
        best[si] = cur;
        choice[si] = pick;
    }
    if best[0].is_infinite() {
        let k = (0..n)
            .filter(|&k| !tape.items[k].spacer)
            .max_by(|&a, &b| tape.items[a].rect.w.total_cmp(&tape.items[b].rect.w))
            .unwrap_or(0);
        return Err(LinebreakError::Overfull {
            column: tape.items[k].column,
            text: String::new(),
            ideal: p.ideal_width,
        });
    }
    let mut out = Vec::new();
    let mut si = 0;
    while let Some(b) = choice[si] {
        out.push(b);
        si = bk.iter().position(|&x| x == b).expect("breakable") + 1;
    }
    Ok(out)
}

/// Reference optimum by trying every subset of breakables, with the same tie
/// rule as [`find_breaks`].
pub fn exhaustive_breaks(tape: &Tape, p: &BreakParams) -> Option<(Vec<usize>, f64)> {
    let bk = &tape.breakables;
    assert!(bk.len() < 24, "exhaustive search is for small tapes");
    let mut all: Vec<(Vec<usize>, f64)> = Vec::new();
    for mask in 0u32..(1 << bk.len()) {
        let set: Vec<usize> = (0..bk.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| bk[i])
            .collect();
        if let Some(c) = tape.total_cost(&set, p) {
            all.push((set, c));
        }
    }
    let min = all.iter().map(|(_, c)| *c).fold(f64::INFINITY, f64::min);
    all.into_iter()
        .filter(|(_, c)| *c <= min + 1e-6)
        .min_by(|(a, _), (b, _)| {
            let inf = |v: &Vec<usize>, i: usize| v.get(i).copied().unwrap_or(usize::MAX);
            (0..=a.len().max(b.len()))
                .map(|i| inf(a, i).cmp(&inf(b, i)))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
}

/// Replaces every break spacer with a vertical join of two empty spacers.
/// Returns the new tree and, for every new column, the old column it came
/// from (`None` for the added spacers).
pub fn insert_breaks(
    tree: &LayoutTree,
    tape: &Tape,
    breaks: &[usize],
) -> (LayoutTree, Vec<Option<usize>>) {
    let break_cols: Vec<usize> = breaks.iter().map(|&b| tape.items[b].column).collect();
    let mut b = LayoutTreeBuilder::new();
    b.reserve_ids(
        tree.fragments()
            .iter()
            .map(|f| f.id.0 + 1)
            .max()
            .unwrap_or(0),
    );
    let mut ids: Vec<NodeId> = Vec::with_capacity(tree.nodes().len());
    for n in tree.nodes() {
        let id = match n {
            LayoutNode::Empty => b.empty(),
            LayoutNode::Atom(c) => b.fragment(tree.fragments()[*c].clone()),
            LayoutNode::Pin { pid, column } => {
                b.pin(pid.clone(), tree.fragments()[*column].clone())
            }
            LayoutNode::Spacer(c) if break_cols.contains(c) => {
                let f = &tree.fragments()[*c];
                let s1 = b.fragment(Fragment::spacer(f.id, 0.0));
                let s2 = b.spacer(0.0);
                b.join_v(s1, s2)
            }
            LayoutNode::Spacer(c) => b.fragment(tree.fragments()[*c].clone()),
            LayoutNode::Wrap { wrap, child } => {
                let w = tree.wrap(*wrap);
                b.wrap_styled(
                    w.name.clone(),
                    ids[child.index()],
                    w.padding,
                    w.style.clone(),
                )
            }
            LayoutNode::JoinH(x, y) => b.join_h(ids[x.index()], ids[y.index()]),
            LayoutNode::JoinV(x, y) => b.join_v(ids[x.index()], ids[y.index()]),
        };
        ids.push(id);
    }
    let t = b
        .build(*ids.last().expect("non-empty tree"))
        .expect("rebuilding a valid tree");
    let mut origin = Vec::with_capacity(t.fragments().len());
    for c in 0..tree.fragments().len() {
        if break_cols.contains(&c) {
            origin.push(None);
            origin.push(None);
        } else {
            origin.push(Some(c));
        }
    }
    (t, origin)
}

#[derive(Debug, Clone)]
pub struct L2bLayout {
    /// The tree with breaks inserted; `layout` columns refer to it.
    pub tree: LayoutTree,
    pub layout: PureLayout,
    pub breaks: Vec<usize>,
    pub cost: f64,
    pub warnings: Vec<String>,
}

/// Horizontal positions of the items of one line (tape indices `i..=j`),
/// justified to `target` unless `last`.
fn justify(
    tape: &Tape,
    i: usize,
    j: usize,
    target: f64,
    last: bool,
    p: &BreakParams,
) -> (Vec<f64>, Option<String>) {
    let items = &tape.items[i..=j];
    let mut gaps: Vec<f64> = items.windows(2).map(|w| advance(&w[0], &w[1])).collect();
    let natural = tape.line_width(i, j);
    let slack = target - natural;
    let mut warning = None;
    if !last && items.len() > 1 && slack.abs() > EPS {
        let spacers: Vec<usize> = (0..gaps.len()).filter(|&k| items[k].spacer).collect();
        let ratio = if slack > 0.0 { p.stretch } else { p.shrink };
        let flex: f64 = spacers.iter().map(|&k| items[k].rect.w * ratio).sum();
        if slack < 0.0 && -slack > flex + EPS {
            warning = Some(format!(
                "line starting at column {} is overfull by {:.2}px",
                items[0].column, -slack
            ));
        } else if flex > 0.0 {
            for &k in &spacers {
                gaps[k] += slack * items[k].rect.w * ratio / flex;
            }
        } else if slack > 0.0 {
            let each = slack / gaps.len() as f64;
            gaps.iter_mut().for_each(|g| *g += each);
        } else {
            warning = Some(format!(
                "line starting at column {} is overfull by {:.2}px",
                items[0].column, -slack
            ));
        }
    }
    let mut xs = Vec::with_capacity(items.len());
    let mut x = items[0].outer_sigma();
    xs.push(x);
    for g in gaps {
        x += g;
        xs.push(x);
    }
    (xs, warning)
}

pub fn layout_l2b(
    tree: &LayoutTree,
    params: &BreakParams,
    target_width: f64,
    line_height: f64,
) -> Result<L2bLayout, LinebreakError> {
    let tape = Tape::from_tree(tree)?;
    let breaks = find_breaks(&tape, params).map_err(|e| match e {
        LinebreakError::Overfull { column, ideal, .. } => LinebreakError::Overfull {
            column,
            text: tree.fragments()[column].text.clone(),
            ideal,
        },
        e => e,
    })?;
    let cost = tape.total_cost(&breaks, params).unwrap_or(0.0);
    let (t2, origin) = insert_breaks(tree, &tape, &breaks);

    let mut x_of = vec![0.0; tree.fragments().len()];
    let mut warnings = Vec::new();
    let segs = tape.segments(&breaks);
    for (k, &(i, j)) in segs.iter().enumerate() {
        let (xs, w) = justify(&tape, i, j, target_width, k + 1 == segs.len(), params);
        warnings.extend(w);
        for (item, x) in tape.items[i..=j].iter().zip(xs) {
            x_of[item.column] = x;
        }
    }
    let mut lines = regions_pure::layout(&t2);
    for line in &mut lines {
        let mut prev_right = 0.0;
        for s in &mut line.region {
            match origin[s.column] {
                Some(c) => s.rect.x = x_of[c],
                None => s.rect.x = prev_right,
            }
            prev_right = s.rect.right();
        }
    }
    let layout = finish(&t2, lines, line_height);
    Ok(L2bLayout {
        tree: t2,
        layout,
        breaks,
        cost,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rect;
    use crate::regions_pure::Cell;

    fn word(col: usize, w: f64) -> Stack {
        Stack::fragment(col, Rect::new(0.0, 0.0, w, 10.0), vec![])
    }

    fn words(n: usize, w: f64, gap: f64) -> Tape {
        let mut items = Vec::new();
        for i in 0..n {
            if i > 0 {
                items.push(Stack::spacer(items.len(), 0.0, gap));
            }
            items.push(word(items.len(), w));
        }
        Tape::from_items(items)
    }

    #[test]
    fn line_width_examples() {
        let t = Tape::from_items(vec![word(0, 10.0), word(1, 20.0), word(2, 30.0)]);
        assert_eq!(t.line_width(0, 2), 60.0);
        assert_eq!(t.line_width(1, 1), 20.0);
        let padded = Tape::from_items(vec![Stack::fragment(
            0,
            Rect::new(0.0, 0.0, 12.0, 10.0),
            vec![Cell::new(0, 4.0)],
        )]);
        assert_eq!(padded.line_width(0, 0), 20.0);
    }

    #[test]
    fn four_words() {
        let t = words(4, 10.0, 5.0);
        let p = BreakParams::new(25.0);
        assert_eq!(find_breaks(&t, &p).unwrap(), vec![3]);
        assert_eq!(t.total_cost(&[3], &p), Some(0.0));
    }

    #[test]
    fn fits_on_one_line() {
        let t = words(3, 10.0, 5.0);
        assert!(find_breaks(&t, &BreakParams::new(100.0))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn overwide_item_is_an_error() {
        let t = words(3, 50.0, 5.0);
        assert!(matches!(
            find_breaks(&t, &BreakParams::new(30.0)),
            Err(LinebreakError::Overfull { column: 0, .. })
        ));
    }

    #[test]
    fn matches_exhaustive_on_uneven_words() {
        let widths = [12.0, 30.0, 7.0, 22.0, 16.0, 9.0];
        let mut items = Vec::new();
        for (i, w) in widths.iter().enumerate() {
            if i > 0 {
                items.push(Stack::spacer(items.len(), 0.0, 6.0));
            }
            items.push(word(items.len(), *w));
        }
        let t = Tape::from_items(items);
        for ideal in [35.0, 45.0, 60.0, 80.0] {
            let p = BreakParams::new(ideal);
            let (ex, _) = exhaustive_breaks(&t, &p).unwrap();
            assert_eq!(find_breaks(&t, &p).unwrap(), ex, "ideal {ideal}");
        }
    }

    #[test]
    fn two_stack_gap_grows() {
        let t = Tape::from_items(vec![word(0, 20.0), word(1, 30.0)]);
        let (xs, w) = justify(&t, 0, 1, 60.0, false, &BreakParams::new(60.0));
        assert!(w.is_none());
        assert_eq!(xs, vec![0.0, 30.0]);
    }

    #[test]
    fn justified_tree_layout() {
        let mut b = LayoutTreeBuilder::new();
        let mut parts = Vec::new();
        for i in 0..6 {
            if i > 0 {
                parts.push(b.spacer(8.0));
            }
            parts.push(b.atom(16.0 + 8.0 * (i % 3) as f64, 16.0));
        }
        let h = b.join_h_all(&parts).unwrap();
        let r = b.wrap("r", h, 2.0);
        let t = b.build(r).unwrap();
        let params = BreakParams::new(70.0);
        let l = layout_l2b(&t, &params, 70.0, 16.0).unwrap();
        assert!(!l.breaks.is_empty());
        let n = l.layout.placement.lines.len();
        assert_eq!(n, l.breaks.len() + 1);
        assert!(l.warnings.is_empty());
    }

    #[test]
    fn join_v_rejected() {
        let mut b = LayoutTreeBuilder::new();
        let x = b.atom(1.0, 1.0);
        let y = b.atom(1.0, 1.0);
        let v = b.join_v(x, y);
        let t = b.build(v).unwrap();
        assert!(matches!(
            Tape::from_tree(&t),
            Err(LinebreakError::HasJoinV(_))
        ));
    }
}

#[cfg(test)]
mod random {
    use super::*;
    use crate::geometry::Rect;
    use crate::regions_pure::Cell;
    use crate::synth::rng;
    use rand::Rng;

    #[test]
    fn dp_equals_exhaustive() {
        let mut r = rng(5);
        for case in 0..300 {
            let n = r.gen_range(1..=12);
            let mut items = Vec::new();
            for k in 0..n {
                if r.gen_bool(0.4) {
                    items.push(Stack::spacer(k, 0.0, 8.0 * r.gen_range(0..3) as f64));
                } else {
                    let cells = if r.gen_bool(0.5) {
                        vec![Cell::new(r.gen_range(0..3), r.gen_range(0..4) as f64)]
                    } else {
                        vec![]
                    };
                    items.push(Stack::fragment(
                        k,
                        Rect::new(0.0, 0.0, r.gen_range(4..40) as f64, 16.0),
                        cells,
                    ));
                }
            }
            let t = Tape::from_items(items);
            let p = BreakParams::new(r.gen_range(30..120) as f64);
            match find_breaks(&t, &p) {
                Ok(b) => {
                    let Some((ex, c)) = exhaustive_breaks(&t, &p) else {
                        panic!(
                            "case {case} {b:?} {:?} {:?} {:?}",
                            p,
                            t.breakables,
                            t.items
                                .iter()
                                .map(|s| (s.spacer, s.rect.w, s.cells.clone()))
                                .collect::<Vec<_>>()
                        )
                    };
                    assert_eq!(b, ex, "case {case}");
                    assert!((t.total_cost(&b, &p).unwrap() - c).abs() < 1e-6);
                }
                Err(_) => assert!(exhaustive_breaks(&t, &p).is_none(), "case {case}"),
            }
        }
    }
}
