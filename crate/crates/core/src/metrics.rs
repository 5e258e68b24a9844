//! Layout error against a reference (mesh distance) and mean line width.
//!
//! Only inked fragments count: spacers are skipped, and lines left with no
//! fragment are skipped entirely.

use serde::Serialize;

use crate::layout::Placement;
use crate::model::LayoutTree;

/// Segment lengths between upper-left corners.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SegmentList {
    /// Adjacent fragments on each non-empty line, by line.
    pub horizontal: Vec<Vec<f64>>,
    /// First fragments of consecutive non-empty lines.
    pub vertical: Vec<f64>,
    /// Source line index of each entry in `horizontal`.
    pub line_index: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("layouts differ in structure at line {line}")]
    Mismatch { line: usize },
}

/// `true` for every spacer column.
pub fn spacer_mask(tree: &LayoutTree) -> Vec<bool> {
    tree.fragments().iter().map(|f| f.is_spacer).collect()
}

fn inked_lines(spacer: &[bool], placement: &Placement) -> Vec<(usize, Vec<usize>)> {
    placement
        .lines
        .iter()
        .enumerate()
        .map(|(i, r)| (i, r.clone().filter(|&c| !spacer[c]).collect::<Vec<_>>()))
        .filter(|(_, cs)| !cs.is_empty())
        .collect()
}

fn len(a: &crate::geometry::Rect, b: &crate::geometry::Rect) -> f64 {
    (b.x - a.x).hypot(b.y - a.y)
}

pub fn segments(tree: &LayoutTree, placement: &Placement) -> SegmentList {
    segments_masked(&spacer_mask(tree), placement)
}

pub fn segments_masked(spacer: &[bool], placement: &Placement) -> SegmentList {
    let lines = inked_lines(spacer, placement);
    let r = &placement.rects;
    SegmentList {
        horizontal: lines
            .iter()
            .map(|(_, cs)| cs.windows(2).map(|w| len(&r[w[0]], &r[w[1]])).collect())
            .collect(),
        vertical: lines
            .windows(2)
            .map(|w| len(&r[w[0].1[0]], &r[w[1].1[0]]))
            .collect(),
        line_index: lines.iter().map(|(i, _)| *i).collect(),
    }
}

/// Per-line breakdown of a comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineReport {
    pub line: usize,
    pub width: f64,
    #[serde(rename = "meshH")]
    pub mesh_h: f64,
    /// Error of the vertical segment ending at this line (0 for the first).
    #[serde(rename = "meshV")]
    pub mesh_v: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    #[serde(rename = "meshH")]
    pub mesh_h: f64,
    #[serde(rename = "meshV")]
    pub mesh_v: f64,
    #[serde(rename = "meanLineWidth")]
    pub mean_line_width: f64,
    #[serde(rename = "perLine")]
    pub per_line: Vec<LineReport>,
}

fn check(a: &SegmentList, b: &SegmentList) -> Result<(), MetricsError> {
    let n = a.horizontal.len().min(b.horizontal.len());
    for k in 0..n {
        if a.horizontal[k].len() != b.horizontal[k].len() || a.line_index[k] != b.line_index[k] {
            return Err(MetricsError::Mismatch {
                line: a.line_index[k].min(b.line_index[k]),
            });
        }
    }
    if a.horizontal.len() != b.horizontal.len() {
        let line = a
            .line_index
            .get(n)
            .or(b.line_index.get(n))
            .copied()
            .unwrap_or(0);
        return Err(MetricsError::Mismatch { line });
    }
    Ok(())
}

/// `(H, V)`: summed absolute differences of corresponding segment lengths.
pub fn mesh_distance(a: &SegmentList, b: &SegmentList) -> Result<(f64, f64), MetricsError> {
    check(a, b)?;
    let h = a
        .horizontal
        .iter()
        .flatten()
        .zip(b.horizontal.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .sum();
    let v = a
        .vertical
        .iter()
        .zip(&b.vertical)
        .map(|(x, y)| (x - y).abs())
        .sum();
    Ok((h, v))
}

/// Width of every non-empty line, keyed by source line.
pub fn line_widths(tree: &LayoutTree, placement: &Placement) -> Vec<(usize, f64)> {
    line_widths_masked(&spacer_mask(tree), placement)
}

pub fn line_widths_masked(spacer: &[bool], placement: &Placement) -> Vec<(usize, f64)> {
    inked_lines(spacer, placement)
        .into_iter()
        .map(|(i, cs)| {
            let r = &placement.rects;
            let left = cs
                .iter()
                .map(|&c| r[c].left())
                .fold(f64::INFINITY, f64::min);
            let right = cs
                .iter()
                .map(|&c| r[c].right())
                .fold(f64::NEG_INFINITY, f64::max);
            (i, right - left)
        })
        .collect()
}

pub fn mean_line_width(tree: &LayoutTree, placement: &Placement) -> f64 {
    mean_line_width_masked(&spacer_mask(tree), placement)
}

pub fn mean_line_width_masked(spacer: &[bool], placement: &Placement) -> f64 {
    let w = line_widths_masked(spacer, placement);
    if w.is_empty() {
        0.0
    } else {
        w.iter().map(|(_, x)| x).sum::<f64>() / w.len() as f64
    }
}

/// Full comparison of `test` against `reference`, which must share `tree`'s
/// line structure.
pub fn report(
    tree: &LayoutTree,
    test: &Placement,
    reference: &Placement,
) -> Result<MetricsReport, MetricsError> {
    report_masked(&spacer_mask(tree), test, reference)
}

pub fn report_masked(
    spacer: &[bool],
    test: &Placement,
    reference: &Placement,
) -> Result<MetricsReport, MetricsError> {
    let (a, b) = (
        segments_masked(spacer, reference),
        segments_masked(spacer, test),
    );
    let (mesh_h, mesh_v) = mesh_distance(&a, &b)?;
    let widths = line_widths_masked(spacer, test);
    let per_line = widths
        .iter()
        .enumerate()
        .map(|(k, &(line, width))| LineReport {
            line,
            width,
            mesh_h: a.horizontal[k]
                .iter()
                .zip(&b.horizontal[k])
                .map(|(x, y)| (x - y).abs())
                .sum(),
            mesh_v: match k {
                0 => 0.0,
                _ => (a.vertical[k - 1] - b.vertical[k - 1]).abs(),
            },
        })
        .collect();
    Ok(MetricsReport {
        mesh_h,
        mesh_v,
        mean_line_width: mean_line_width_masked(spacer, test),
        per_line,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rect;
    use crate::model::LayoutTreeBuilder;

    /// `rows[i]` fragments on line i, each 8 wide.
    fn grid(rows: &[usize]) -> (LayoutTree, Placement) {
        let mut b = LayoutTreeBuilder::new();
        let mut lines = Vec::new();
        for &n in rows {
            let atoms: Vec<_> = (0..n).map(|_| b.atom(8.0, 16.0)).collect();
            lines.push(b.join_h_all(&atoms).unwrap_or_else(|| b.spacer(0.0)));
        }
        let root = b.join_v_all(&lines).unwrap();
        let t = b.build(root).unwrap();
        let p = crate::layout::flat_text_placement(&t, 16.0);
        (t, p)
    }

    #[test]
    fn segment_counts() {
        let (t, p) = grid(&[4]);
        let s = segments(&t, &p);
        assert_eq!(s.horizontal, vec![vec![8.0; 3]]);
        assert!(s.vertical.is_empty());
        let (t, p) = grid(&[1, 2, 3]);
        assert_eq!(segments(&t, &p).vertical.len(), 2);
    }

    #[test]
    fn single_gap() {
        let (t, mut p) = grid(&[2]);
        p.rects[1].x = 28.0;
        assert_eq!(segments(&t, &p).horizontal, vec![vec![28.0]]);
    }

    #[test]
    fn distances() {
        let (t, p) = grid(&[4, 2]);
        let s = segments(&t, &p);
        assert_eq!(mesh_distance(&s, &s).unwrap(), (0.0, 0.0));
        let mut q = p.clone();
        for (k, c) in (1..4).enumerate() {
            q.rects[c].x += 5.0 * (k + 1) as f64;
        }
        assert_eq!(mesh_distance(&s, &segments(&t, &q)).unwrap().0, 15.0);
        let mut q = p.clone();
        for c in 4..6 {
            q.rects[c].y += 7.0;
        }
        assert_eq!(mesh_distance(&s, &segments(&t, &q)).unwrap(), (0.0, 7.0));
        let moved = Placement {
            rects: p.rects.iter().map(|r| r.translate(3.0, -9.0)).collect(),
            lines: p.lines.clone(),
        };
        assert_eq!(
            mesh_distance(&s, &segments(&t, &moved)).unwrap(),
            (0.0, 0.0)
        );
    }

    #[test]
    fn mismatch_names_line() {
        let (t1, p1) = grid(&[2, 3]);
        let (t2, p2) = grid(&[2, 2]);
        assert_eq!(
            mesh_distance(&segments(&t1, &p1), &segments(&t2, &p2)),
            Err(MetricsError::Mismatch { line: 1 })
        );
    }

    #[test]
    fn widths() {
        let mut b = LayoutTreeBuilder::new();
        let e = b.empty();
        let t = b.build(e).unwrap();
        let p = crate::layout::flat_text_placement(&t, 16.0);
        assert_eq!(mean_line_width(&t, &p), 0.0);
        let mut b = LayoutTreeBuilder::new();
        let a = b.atom(100.0, 16.0);
        let c = b.atom(300.0, 16.0);
        let v = b.join_v(a, c);
        let t = b.build(v).unwrap();
        let p = crate::layout::flat_text_placement(&t, 16.0);
        assert_eq!(mean_line_width(&t, &p), 200.0);
        let one = Placement {
            rects: vec![Rect::new(0.0, 0.0, 340.0, 16.0)],
            lines: vec![0..1],
        };
        let mut b = LayoutTreeBuilder::new();
        let a = b.atom(340.0, 16.0);
        let t = b.build(a).unwrap();
        assert_eq!(mean_line_width(&t, &one), 340.0);
    }
}
