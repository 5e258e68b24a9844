//! Scanline representation of rectilinear point sets: horizontal bands,
//! each holding sorted disjoint x-intervals.

use std::collections::HashMap;

use super::{Polygon, Pt, Rect, EPS};

/// Rounds to the 1e-6 px lattice so coordinates from different sums agree.
pub(crate) fn snap(v: f64) -> f64 {
    let s = (v * 1e6).round() / 1e6;
    if s == 0.0 {
        0.0
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Band {
    pub y0: f64,
    pub y1: f64,
    pub xs: Vec<(f64, f64)>,
}

/// Bands are sorted, non-empty, and two touching bands never carry the same
/// intervals.
#[derive(Debug, Clone, PartialEq, Default)]
pub(crate) struct Bands(pub Vec<Band>);

fn merge_sorted(mut iv: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    iv.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(iv.len());
    for (a, b) in iv {
        if b - a <= EPS {
            continue;
        }
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

fn unique_sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

impl Bands {
    fn push(&mut self, y0: f64, y1: f64, xs: Vec<(f64, f64)>) {
        if xs.is_empty() || y1 - y0 <= EPS {
            return;
        }
        if let Some(last) = self.0.last_mut() {
            if last.y1 == y0 && last.xs == xs {
                last.y1 = y1;
                return;
            }
        }
        self.0.push(Band { y0, y1, xs });
    }

    pub fn from_rects(rects: &[Rect]) -> Bands {
        let mut rs: Vec<(f64, f64, f64, f64)> = rects
            .iter()
            .map(|r| {
                (
                    snap(r.left()),
                    snap(r.top()),
                    snap(r.right()),
                    snap(r.bottom()),
                )
            })
            .filter(|r| r.2 - r.0 > EPS && r.3 - r.1 > EPS)
            .collect();
        rs.sort_by(|a, b| a.1.total_cmp(&b.1));
        let ys = unique_sorted(rs.iter().flat_map(|r| [r.1, r.3]).collect());
        let mut out = Bands::default();
        let mut next = 0;
        let mut active: Vec<(f64, f64, f64, f64)> = Vec::new();
        for w in ys.windows(2) {
            active.retain(|r| r.3 > w[0]);
            while next < rs.len() && rs[next].1 <= w[0] {
                active.push(rs[next]);
                next += 1;
            }
            out.push(
                w[0],
                w[1],
                merge_sorted(active.iter().map(|r| (r.0, r.2)).collect()),
            );
        }
        out
    }

    /// Even-odd interior of the loops.
    pub fn from_polygon(p: &Polygon) -> Bands {
        // (y_low, y_high, x)
        let mut vs = Vec::new();
        for l in &p.loops {
            for (k, a) in l.iter().enumerate() {
                let b = l[(k + 1) % l.len()];
                let (ax, bx) = (snap(a.x), snap(b.x));
                let (ay, by) = (snap(a.y), snap(b.y));
                if ax == bx && ay != by {
                    vs.push((ay.min(by), ay.max(by), ax));
                }
            }
        }
        vs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let ys = unique_sorted(vs.iter().flat_map(|v| [v.0, v.1]).collect());
        let mut out = Bands::default();
        let mut next = 0;
        let mut active: Vec<(f64, f64, f64)> = Vec::new();
        for w in ys.windows(2) {
            active.retain(|v| v.1 > w[0]);
            while next < vs.len() && vs[next].0 <= w[0] {
                active.push(vs[next]);
                next += 1;
            }
            let mut xs: Vec<f64> = active.iter().map(|v| v.2).collect();
            xs.sort_by(f64::total_cmp);
            let iv = xs.chunks_exact(2).map(|c| (c[0], c[1])).collect();
            out.push(w[0], w[1], merge_sorted(iv));
        }
        out
    }

    pub fn combine(a: &Bands, b: &Bands, op: impl Fn(bool, bool) -> bool) -> Bands {
        let ys = unique_sorted(
            a.0.iter()
                .chain(&b.0)
                .flat_map(|band| [band.y0, band.y1])
                .collect(),
        );
        let (mut ia, mut ib) = (0, 0);
        let mut out = Bands::default();
        for w in ys.windows(2) {
            let xa = band_at(a, &mut ia, w[0]);
            let xb = band_at(b, &mut ib, w[0]);
            out.push(w[0], w[1], combine_intervals(xa, xb, &op));
        }
        out
    }

    pub fn area(&self) -> f64 {
        self.0
            .iter()
            .map(|b| (b.y1 - b.y0) * b.xs.iter().map(|(x0, x1)| x1 - x0).sum::<f64>())
            .sum()
    }

    /// Interval rectangles, merged downwards while an interval repeats.
    pub fn rects(&self) -> Vec<Rect> {
        let mut out: Vec<Rect> = Vec::new();
        let mut open: HashMap<(u64, u64), usize> = HashMap::new();
        let mut prev_y1 = f64::NAN;
        for b in &self.0 {
            let mut next = HashMap::new();
            for &(x0, x1) in &b.xs {
                let key = (x0.to_bits(), x1.to_bits());
                let k = match open.get(&key) {
                    Some(&k) if prev_y1 == b.y0 => {
                        out[k].h = b.y1 - out[k].y;
                        k
                    }
                    _ => {
                        out.push(Rect::from_corners(x0, b.y0, x1, b.y1));
                        out.len() - 1
                    }
                };
                next.insert(key, k);
            }
            open = next;
            prev_y1 = b.y1;
        }
        out
    }

    /// Boundary loops with the interior on the right of travel (y down):
    /// outer loops clockwise on screen, holes counter-clockwise. At a vertex
    /// where two loops touch the right turn is taken, so corner contact
    /// leaves the loops separate.
    pub fn trace(&self) -> Polygon {
        // edges as (start, end)
        let mut edges: Vec<(Pt, Pt)> = Vec::new();
        let empty = Vec::new();
        for (k, b) in self.0.iter().enumerate() {
            for &(x0, x1) in &b.xs {
                edges.push((Pt::new(x0, b.y1), Pt::new(x0, b.y0)));
                edges.push((Pt::new(x1, b.y0), Pt::new(x1, b.y1)));
            }
            // boundary above this band
            let above = match k.checked_sub(1).map(|j| &self.0[j]) {
                Some(p) if p.y1 == b.y0 => &p.xs,
                _ => &empty,
            };
            horizontal_edges(above, &b.xs, b.y0, &mut edges);
            let below_touching = self.0.get(k + 1).is_some_and(|n| n.y0 == b.y1);
            if !below_touching {
                horizontal_edges(&b.xs, &empty, b.y1, &mut edges);
            }
        }
        link(edges)
    }

    /// Intervals connected through positive-length contact, as separate sets.
    pub fn components(&self) -> Vec<Bands> {
        let mut ids = Vec::new(); // (band, interval) -> node
        let mut offset = Vec::with_capacity(self.0.len());
        for b in &self.0 {
            offset.push(ids.len());
            ids.extend(0..b.xs.len());
        }
        let n = ids.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for k in 1..self.0.len() {
            let (up, dn) = (&self.0[k - 1], &self.0[k]);
            if up.y1 != dn.y0 {
                continue;
            }
            let (mut i, mut j) = (0, 0);
            while i < up.xs.len() && j < dn.xs.len() {
                let (a, b) = (up.xs[i], dn.xs[j]);
                if a.0.max(b.0) < a.1.min(b.1) {
                    let (ra, rb) = (
                        find(&mut parent, offset[k - 1] + i),
                        find(&mut parent, offset[k] + j),
                    );
                    parent[ra.max(rb)] = ra.min(rb);
                }
                if a.1 < b.1 {
                    i += 1;
                } else {
                    j += 1;
                }
            }
        }
        let mut comp_of: HashMap<usize, usize> = HashMap::new();
        let mut out: Vec<Bands> = Vec::new();
        for (k, b) in self.0.iter().enumerate() {
            let mut per: Vec<(usize, Vec<(f64, f64)>)> = Vec::new();
            for (i, &iv) in b.xs.iter().enumerate() {
                let root = find(&mut parent, offset[k] + i);
                let c = *comp_of.entry(root).or_insert_with(|| {
                    out.push(Bands::default());
                    out.len() - 1
                });
                match per.iter_mut().find(|p| p.0 == c) {
                    Some(p) => p.1.push(iv),
                    None => per.push((c, vec![iv])),
                }
            }
            for (c, xs) in per {
                out[c].push(b.y0, b.y1, xs);
            }
        }
        out
    }
}

/// Intervals of the band containing `y`, advancing the cursor `i`.
fn band_at<'a>(bands: &'a Bands, i: &mut usize, y: f64) -> &'a [(f64, f64)] {
    while *i < bands.0.len() && bands.0[*i].y1 <= y {
        *i += 1;
    }
    match bands.0.get(*i) {
        Some(band) if band.y0 <= y => &band.xs,
        _ => &[],
    }
}

fn combine_intervals(
    a: &[(f64, f64)],
    b: &[(f64, f64)],
    op: impl Fn(bool, bool) -> bool,
) -> Vec<(f64, f64)> {
    let mut cuts: Vec<f64> = a.iter().chain(b).flat_map(|&(x0, x1)| [x0, x1]).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let (mut i, mut j) = (0, 0);
    let mut out: Vec<(f64, f64)> = Vec::new();
    for w in cuts.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        while i < a.len() && a[i].1 <= mid {
            i += 1;
        }
        while j < b.len() && b[j].1 <= mid {
            j += 1;
        }
        let ina = i < a.len() && a[i].0 <= mid;
        let inb = j < b.len() && b[j].0 <= mid;
        if op(ina, inb) {
            match out.last_mut() {
                Some(last) if last.1 == w[0] => last.1 = w[1],
                _ => out.push((w[0], w[1])),
            }
        }
    }
    out
}

/// Top edges (covered below only) run east, bottom edges west.
fn horizontal_edges(above: &[(f64, f64)], below: &[(f64, f64)], y: f64, edges: &mut Vec<(Pt, Pt)>) {
    for (x0, x1) in combine_intervals(above, below, |a, b| b && !a) {
        edges.push((Pt::new(x0, y), Pt::new(x1, y)));
    }
    for (x0, x1) in combine_intervals(above, below, |a, b| a && !b) {
        edges.push((Pt::new(x1, y), Pt::new(x0, y)));
    }
}

fn bits(p: Pt) -> (u64, u64) {
    (p.x.to_bits(), p.y.to_bits())
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn dir(a: Pt, b: Pt) -> (f64, f64) {
    (sign(b.x - a.x), sign(b.y - a.y))
}

fn link(edges: Vec<(Pt, Pt)>) -> Polygon {
    let mut from: HashMap<(u64, u64), Vec<usize>> = HashMap::new();
    for (k, e) in edges.iter().enumerate() {
        from.entry(bits(e.0)).or_default().push(k);
    }
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (edges[i].0, edges[j].0);
        (a.y, a.x).partial_cmp(&(b.y, b.x)).unwrap()
    });
    let mut used = vec![false; edges.len()];
    let mut loops = Vec::new();
    for &s in &order {
        if used[s] {
            continue;
        }
        used[s] = true;
        let start = edges[s].0;
        let mut verts = vec![start];
        let mut cur = s;
        loop {
            let end = edges[cur].1;
            if bits(end) == bits(start) {
                break;
            }
            verts.push(end);
            let d = dir(edges[cur].0, end);
            let cands = from.get(&bits(end)).expect("boundary is closed");
            let free: Vec<usize> = cands.iter().copied().filter(|&k| !used[k]).collect();
            let next = if free.len() == 1 {
                free[0]
            } else {
                *free
                    .iter()
                    .find(|&&k| {
                        let e = dir(edges[k].0, edges[k].1);
                        d.0 * e.1 - d.1 * e.0 > 0.0
                    })
                    .expect("right turn at a pinch vertex")
            };
            used[next] = true;
            cur = next;
        }
        loops.push(drop_collinear(verts));
    }
    let mut p = Polygon { loops };
    p.normalize();
    p
}

fn drop_collinear(v: Vec<Pt>) -> Vec<Pt> {
    let n = v.len();
    (0..n)
        .filter(|&k| {
            let (a, b, c) = (v[(k + n - 1) % n], v[k], v[(k + 1) % n]);
            let (d1, d2) = (dir(a, b), dir(b, c));
            d1.0 * d2.1 - d1.1 * d2.0 != 0.0
        })
        .map(|k| v[k])
        .collect()
}
