use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::Grouped;
use crate::domain::Point;
use crate::error::{Error, Result};

/// `1[w1*x1 + w2*x2 + b >= 0]`. With `w = (0, 0)` the concept is constant and
/// stored canonically as `b = 0` (all ones) or `b = -1` (all zeros).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Halfspace2D {
    w1: f64,
    w2: f64,
    b: f64,
}

impl Halfspace2D {
    pub fn new(w1: f64, w2: f64, b: f64) -> Result<Self> {
        if !(w1.is_finite() && w2.is_finite() && b.is_finite()) {
            return Err(Error::NonFinite);
        }
        if w1 == 0.0 && w2 == 0.0 {
            return Ok(if b >= 0.0 { Self::all_ones() } else { Self::all_zeros() });
        }
        Ok(Halfspace2D {
            w1: w1 + 0.0,
            w2: w2 + 0.0,
            b: b + 0.0,
        })
    }

    pub fn all_ones() -> Self {
        Halfspace2D {
            w1: 0.0,
            w2: 0.0,
            b: 0.0,
        }
    }

    pub fn all_zeros() -> Self {
        Halfspace2D {
            w1: 0.0,
            w2: 0.0,
            b: -1.0,
        }
    }

    pub fn params(&self) -> (f64, f64, f64) {
        (self.w1, self.w2, self.b)
    }

    pub fn contains(&self, x1: f64, x2: f64) -> bool {
        self.w1 * x1 + self.w2 * x2 + self.b >= 0.0
    }

    fn key_cmp(&self, other: &Self) -> Ordering {
        self.w1
            .total_cmp(&other.w1)
            .then(self.w2.total_cmp(&other.w2))
            .then(self.b.total_cmp(&other.b))
    }
}

/// Exact ERM by direction sweep.
///
/// The order of the points projected on a unit normal `w` only changes when
/// `w` is perpendicular to the difference of two points. Taking one direction
/// strictly inside each arc between consecutive critical angles, every
/// halfspace labeling of the data is a suffix of the projected order for one
/// of those directions. Cuts sit halfway between consecutive projections.
/// Ties go to the lexicographically smallest `(w1, w2, b)`.
pub(crate) fn erm(g: &Grouped) -> Halfspace2D {
    let pts: Vec<(f64, f64)> = g
        .points
        .iter()
        .map(|p| match p {
            Point::Real2D(a, b) => (*a, *b),
            _ => unreachable!("grouped data was kind-checked"),
        })
        .collect();
    let n = pts.len();
    let total_w0: i128 = g.w0.iter().sum();
    let total_w1: i128 = g.w1.iter().sum();

    let mut best = (total_w0, Halfspace2D::all_ones());
    let offer = |err: i128, h: Halfspace2D, best: &mut (i128, Halfspace2D)| {
        if err < best.0 || (err == best.0 && h.key_cmp(&best.1) == Ordering::Less) {
            *best = (err, h);
        }
    };
    offer(total_w1, Halfspace2D::all_zeros(), &mut best);

    let mut order: Vec<usize> = (0..n).collect();
    let mut proj = vec![0.0; n];
    for angle in generic_directions(&pts) {
        let (w1, w2) = (angle.cos(), angle.sin());
        for (i, &(x, y)) in pts.iter().enumerate() {
            proj[i] = w1 * x + w2 * y;
        }
        order.sort_by(|&i, &j| proj[i].total_cmp(&proj[j]));
        // Cut before position k: order[..k] labeled 0, order[k..] labeled 1.
        let mut below_w1: i128 = 0;
        let mut above_w0 = total_w0;
        for k in 1..n {
            let prev = order[k - 1];
            below_w1 += g.w1[prev];
            above_w0 -= g.w0[prev];
            let (lo, hi) = (proj[prev], proj[order[k]]);
            if lo >= hi {
                continue;
            }
            let cut = lo + (hi - lo) / 2.0;
            let h = Halfspace2D {
                w1: w1 + 0.0,
                w2: w2 + 0.0,
                b: -cut + 0.0,
            };
            offer(below_w1 + above_w0, h, &mut best);
        }
    }
    best.1
}

fn generic_directions(pts: &[(f64, f64)]) -> Vec<f64> {
    let mut critical = Vec::with_capacity(pts.len() * pts.len());
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            let (dx, dy) = (pts[j].0 - pts[i].0, pts[j].1 - pts[i].1);
            let normal = (dy.atan2(dx) + PI / 2.0).rem_euclid(TAU);
            critical.push(normal);
            critical.push((normal + PI).rem_euclid(TAU));
        }
    }
    critical.sort_by(f64::total_cmp);
    critical.dedup();
    if critical.is_empty() {
        return vec![0.0];
    }
    let mut out = Vec::with_capacity(critical.len());
    for w in critical.windows(2) {
        out.push(w[0] + (w[1] - w[0]) / 2.0);
    }
    let last = critical[critical.len() - 1];
    out.push((last + (critical[0] + TAU - last) / 2.0).rem_euclid(TAU));
    out
}
