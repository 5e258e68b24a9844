use serde::{Deserialize, Serialize};

/// Axis-aligned rectangle, y pointing down. `(x, y)` is the upper-left corner.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl Rect {
    pub fn new(x: f64, y: f64, w: f64, h: f64) -> Self {
        Rect { x, y, w, h }
    }

    pub fn from_corners(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Rect::new(x0, y0, x1 - x0, y1 - y0)
    }

    pub fn left(&self) -> f64 {
        self.x
    }

    pub fn right(&self) -> f64 {
        self.x + self.w
    }

    pub fn top(&self) -> f64 {
        self.y
    }

    pub fn bottom(&self) -> f64 {
        self.y + self.h
    }

    pub fn area(&self) -> f64 {
        self.w.max(0.0) * self.h.max(0.0)
    }

    /// Grows the rectangle by `d` on every side.
    pub fn inflate(&self, d: f64) -> Rect {
        Rect::new(self.x - d, self.y - d, self.w + 2.0 * d, self.h + 2.0 * d)
    }

    pub fn translate(&self, dx: f64, dy: f64) -> Rect {
        Rect::new(self.x + dx, self.y + dy, self.w, self.h)
    }

    /// Horizontal intervals share a stretch of positive length. Touching
    /// edges do not count.
    pub fn h_overlaps(&self, o: &Rect) -> bool {
        self.left().max(o.left()) < self.right().min(o.right())
    }

    pub fn v_overlaps(&self, o: &Rect) -> bool {
        self.top().max(o.top()) < self.bottom().min(o.bottom())
    }

    /// Intersection has positive area.
    pub fn overlaps(&self, o: &Rect) -> bool {
        self.h_overlaps(o) && self.v_overlaps(o)
    }

    pub fn contains_rect(&self, o: &Rect, eps: f64) -> bool {
        o.left() >= self.left() - eps
            && o.right() <= self.right() + eps
            && o.top() >= self.top() - eps
            && o.bottom() <= self.bottom() + eps
    }

    pub fn union(&self, o: &Rect) -> Rect {
        Rect::from_corners(
            self.left().min(o.left()),
            self.top().min(o.top()),
            self.right().max(o.right()),
            self.bottom().max(o.bottom()),
        )
    }

    pub fn bbox<'a>(rects: impl IntoIterator<Item = &'a Rect>) -> Option<Rect> {
        rects.into_iter().fold(None, |acc, r| match acc {
            None => Some(*r),
            Some(a) => Some(a.union(r)),
        })
    }
}
