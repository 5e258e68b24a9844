//! Rectilinear polygons: boundaries of rectangle unions, offsets and
//! containment predicates.
//!
//! Booleans work on a scanline form (bands of x-intervals), with coordinates
//! snapped to a 1e-6 px lattice so results are exact on that lattice.

mod bands;
mod rect;

use serde::Serialize;

use bands::Bands;
pub use rect::Rect;

pub const EPS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pt {
    pub x: f64,
    pub y: f64,
}

impl Pt {
    pub fn new(x: f64, y: f64) -> Pt {
        Pt { x, y }
    }
}

/// Closed axis-aligned loops. Outer loops run clockwise on screen (positive
/// shoelace area with y down), holes counter-clockwise. Each loop starts at
/// its topmost-leftmost vertex and loops are sorted by that vertex.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Polygon {
    pub loops: Vec<Vec<Pt>>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("loop {index} has {len} vertices")]
    TooFewVertices { index: usize, len: usize },
    #[error("loop {index}: edge {edge} is not axis-aligned or has zero length")]
    BadEdge { index: usize, edge: usize },
    #[error("loop {index}: edges {edge} and {next} are not perpendicular")]
    NotPerpendicular {
        index: usize,
        edge: usize,
        next: usize,
    },
    #[error("loop {index} is not a simple boundary")]
    NotSimple { index: usize },
    #[error("offset {delta} collapses loop {index} starting at ({x}, {y})")]
    Collapsed {
        index: usize,
        delta: f64,
        x: f64,
        y: f64,
    },
    #[error("offset {delta} splits loop {index} starting at ({x}, {y}) into {parts} parts")]
    Split {
        index: usize,
        delta: f64,
        x: f64,
        y: f64,
        parts: usize,
    },
}

impl Polygon {
    pub fn from_rect(r: Rect) -> Polygon {
        boundary_of_rect_union(&[r])
    }

    pub fn is_empty(&self) -> bool {
        self.loops.is_empty()
    }

    /// Shoelace sum over all loops; holes subtract.
    pub fn area(&self) -> f64 {
        self.loops.iter().map(|l| loop_area(l)).sum()
    }

    pub fn corner_count(&self) -> usize {
        self.loops.iter().map(Vec::len).sum()
    }

    pub fn bbox(&self) -> Option<Rect> {
        let pts = self.loops.iter().flatten();
        let mut it = pts.clone();
        let first = it.next()?;
        let (mut x0, mut y0, mut x1, mut y1) = (first.x, first.y, first.x, first.y);
        for p in pts {
            x0 = x0.min(p.x);
            y0 = y0.min(p.y);
            x1 = x1.max(p.x);
            y1 = y1.max(p.y);
        }
        Some(Rect::from_corners(x0, y0, x1, y1))
    }

    pub fn translate(&self, dx: f64, dy: f64) -> Polygon {
        Polygon {
            loops: self
                .loops
                .iter()
                .map(|l| l.iter().map(|p| Pt::new(p.x + dx, p.y + dy)).collect())
                .collect(),
        }
    }

    /// Disjoint rectangles covering the interior (even-odd rule).
    pub fn to_rects(&self) -> Vec<Rect> {
        Bands::from_polygon(self).rects()
    }

    /// Connected pieces (corner contact does not connect), each with its
    /// holes.
    pub fn components(&self) -> Vec<Polygon> {
        Bands::from_polygon(self)
            .components()
            .iter()
            .map(Bands::trace)
            .collect()
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        for (index, l) in self.loops.iter().enumerate() {
            let n = l.len();
            if n < 4 || n % 2 == 1 {
                return Err(GeometryError::TooFewVertices { index, len: n });
            }
            for k in 0..n {
                let (a, b, c) = (l[k], l[(k + 1) % n], l[(k + 2) % n]);
                let h1 = axis_of(a, b).ok_or(GeometryError::BadEdge { index, edge: k })?;
                let h2 = axis_of(b, c).ok_or(GeometryError::BadEdge {
                    index,
                    edge: (k + 1) % n,
                })?;
                if h1 == h2 {
                    return Err(GeometryError::NotPerpendicular {
                        index,
                        edge: k,
                        next: (k + 1) % n,
                    });
                }
            }
            // A simple loop's boundary is recovered exactly by rasterising it.
            let single = Polygon {
                loops: vec![l.clone()],
            };
            let area = loop_area(l).abs();
            if area <= EPS
                || (single.to_rects().iter().map(Rect::area).sum::<f64>() - area).abs()
                    > EPS * (1.0 + area)
            {
                return Err(GeometryError::NotSimple { index });
            }
        }
        Ok(())
    }

    /// Normalises loop start vertices and loop order.
    pub(crate) fn normalize(&mut self) {
        for l in &mut self.loops {
            let k = (0..l.len())
                .min_by(|&i, &j| key(l[i]).partial_cmp(&key(l[j])).unwrap())
                .unwrap_or(0);
            l.rotate_left(k);
        }
        self.loops
            .sort_by(|a, b| key(a[0]).partial_cmp(&key(b[0])).unwrap());
    }
}

fn key(p: Pt) -> (f64, f64) {
    (p.y, p.x)
}

fn axis_of(a: Pt, b: Pt) -> Option<bool> {
    let dx = (a.x - b.x).abs();
    let dy = (a.y - b.y).abs();
    match (dx <= EPS, dy <= EPS) {
        (true, false) => Some(false),
        (false, true) => Some(true),
        _ => None,
    }
}

fn loop_area(l: &[Pt]) -> f64 {
    let n = l.len();
    let mut s = 0.0;
    for k in 0..n {
        let (a, b) = (l[k], l[(k + 1) % n]);
        s += a.x * b.y - b.x * a.y;
    }
    0.5 * s
}

/// `true` for a vertex whose interior angle is 270 degrees.
pub fn is_concave(prev: Pt, v: Pt, next: Pt) -> bool {
    let (d1x, d1y) = (v.x - prev.x, v.y - prev.y);
    let (d2x, d2y) = (next.x - v.x, next.y - v.y);
    d1x * d2y - d1y * d2x < 0.0
}

pub fn boundary_of_rect_union(rects: &[Rect]) -> Polygon {
    Bands::from_rects(rects).trace()
}

fn boolean(a: &Polygon, b: &Polygon, keep: impl Fn(bool, bool) -> bool) -> Bands {
    Bands::combine(&Bands::from_polygon(a), &Bands::from_polygon(b), keep)
}

pub fn union(a: &Polygon, b: &Polygon) -> Polygon {
    boolean(a, b, |x, y| x || y).trace()
}

pub fn intersection(a: &Polygon, b: &Polygon) -> Polygon {
    boolean(a, b, |x, y| x && y).trace()
}

pub fn difference(a: &Polygon, b: &Polygon) -> Polygon {
    boolean(a, b, |x, y| x && !y).trace()
}

/// Closed-region containment: shared boundary is fine.
pub fn contains(outer: &Polygon, inner: &Polygon) -> bool {
    boolean(inner, outer, |x, y| x && !y).area() <= EPS
}

/// Interiors meet; touching edges or corners do not count.
pub fn intersects(p: &Polygon, q: &Polygon) -> bool {
    boolean(p, q, |x, y| x && y).area() > EPS
}

/// Area of `r` covered by a set of pairwise disjoint rectangles.
pub fn covered_area(r: &Rect, disjoint: &[Rect]) -> f64 {
    disjoint
        .iter()
        .map(|o| {
            let w = r.right().min(o.right()) - r.left().max(o.left());
            let h = r.bottom().min(o.bottom()) - r.top().max(o.top());
            w.max(0.0) * h.max(0.0)
        })
        .sum()
}

/// Minkowski sum with a square of half-side `d >= 0`.
pub fn dilate(p: &Polygon, d: f64) -> Polygon {
    let rects: Vec<Rect> = p.to_rects().iter().map(|r| r.inflate(d)).collect();
    boundary_of_rect_union(&rects)
}

/// Inward offset by `d >= 0`. Thin parts vanish and narrow waists split the
/// result; no error is raised.
pub fn erode(p: &Polygon, d: f64) -> Polygon {
    if d <= 0.0 {
        return dilate(p, -d);
    }
    let Some(bb) = p.bbox() else {
        return Polygon::default();
    };
    let frame = Polygon::from_rect(bb.inflate(2.0 * d + 1.0));
    let outside = difference(&frame, p);
    difference(p, &dilate(&outside, d))
}

/// Moves every edge outward (`delta > 0`) or inward by `|delta|`. Inward
/// offsets that make a connected piece vanish or fall apart are errors.
pub fn offset_polygon(delta: f64, p: &Polygon) -> Result<Polygon, GeometryError> {
    if delta >= 0.0 {
        return Ok(dilate(p, delta));
    }
    let mut parts = Vec::new();
    for (index, c) in p.components().iter().enumerate() {
        let e = erode(c, -delta);
        let start = c.loops[0][0];
        let pieces = e.components();
        match pieces.len() {
            0 => {
                return Err(GeometryError::Collapsed {
                    index,
                    delta,
                    x: start.x,
                    y: start.y,
                })
            }
            1 => parts.extend(e.loops),
            n => {
                return Err(GeometryError::Split {
                    index,
                    delta,
                    x: start.x,
                    y: start.y,
                    parts: n,
                })
            }
        }
    }
    let mut out = Polygon { loops: parts };
    out.normalize();
    Ok(out)
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn rects() -> impl Strategy<Value = Vec<Rect>> {
        prop::collection::vec((0i32..12, 0i32..12, 1i32..6, 1i32..6), 1..8).prop_map(|v| {
            v.into_iter()
                .map(|(x, y, w, h)| Rect::new(x as f64, y as f64, w as f64, h as f64))
                .collect()
        })
    }

    fn brute_area(rs: &[Rect]) -> f64 {
        let mut n = 0;
        for x in 0..20 {
            for y in 0..20 {
                let c = Rect::new(x as f64, y as f64, 1.0, 1.0);
                if rs.iter().any(|r| r.contains_rect(&c, 0.0)) {
                    n += 1;
                }
            }
        }
        n as f64
    }

    proptest! {
        #[test]
        fn union_area_matches_unit_grid(rs in rects()) {
            let p = boundary_of_rect_union(&rs);
            prop_assert!(p.validate().is_ok());
            prop_assert_eq!(p.area(), brute_area(&rs));
            prop_assert_eq!(p.to_rects().iter().map(Rect::area).sum::<f64>(), p.area());
        }

        #[test]
        fn dilation_strictly_contains(rs in rects(), d in 1i32..4) {
            let p = boundary_of_rect_union(&rs);
            let q = offset_polygon(d as f64, &p).unwrap();
            prop_assert!(q.validate().is_ok());
            prop_assert!(contains(&q, &p));
            prop_assert!(q.area() > p.area());
            prop_assert!(contains(&erode(&q, d as f64), &p));
        }

        #[test]
        fn booleans_match_unit_grid(a in rects(), b in rects()) {
            let (pa, pb) = (boundary_of_rect_union(&a), boundary_of_rect_union(&b));
            let both: Vec<Rect> = a.iter().chain(&b).copied().collect();
            prop_assert_eq!(union(&pa, &pb).area(), brute_area(&both));
            let inter = intersection(&pa, &pb);
            prop_assert!(inter.validate().is_ok());
            let diff = difference(&pa, &pb);
            prop_assert!(diff.validate().is_ok());
            prop_assert_eq!(inter.area() + diff.area(), pa.area());
            prop_assert_eq!(intersects(&pa, &pb), inter.area() > 0.0);
            prop_assert!(contains(&union(&pa, &pb), &pa));
        }

        #[test]
        fn union_of_pieces_is_whole(rs in rects()) {
            let p = boundary_of_rect_union(&rs);
            let total: f64 = p.components().iter().map(Polygon::area).sum();
            prop_assert_eq!(total, p.area());
        }
    }
}
