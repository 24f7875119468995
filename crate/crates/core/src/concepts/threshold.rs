use serde::{Deserialize, Serialize};

use super::Grouped;
use crate::error::{Error, Result};

/// `1[x >= theta]`. `theta = -inf` is the all-ones concept and `theta = +inf`
/// the all-zeros concept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    theta: f64,
}

impl Threshold {
    pub fn new(theta: f64) -> Result<Self> {
        if theta.is_nan() {
            return Err(Error::NonFinite);
        }
        Ok(Threshold { theta: theta + 0.0 })
    }

    pub fn all_ones() -> Self {
        Threshold {
            theta: f64::NEG_INFINITY,
        }
    }

    pub fn all_zeros() -> Self {
        Threshold { theta: f64::INFINITY }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.theta
    }
}

/// Candidates in canonical order `-inf, v_0 < ... < v_{D-1}, +inf`; the first
/// minimizer wins.
pub(crate) fn erm(g: &Grouped) -> Threshold {
    let xs = g.reals();
    // error of theta = v_i: ones below i are missed, zeros from i on are hit.
    let mut below_w1: i128 = 0;
    let mut above_w0: i128 = g.w0.iter().sum();
    let mut best = (above_w0, Threshold::all_ones());
    for ((&x, &w1), &w0) in xs.iter().zip(&g.w1).zip(&g.w0) {
        let err = below_w1 + above_w0;
        if err < best.0 {
            best = (err, Threshold { theta: x });
        }
        below_w1 += w1;
        above_w0 -= w0;
    }
    if below_w1 < best.0 {
        best = (below_w1, Threshold::all_zeros());
    }
    best.1
}

/// On sorted data, `dis` of two thresholds is one contiguous run
/// `[v_i, v_{j+1})`, so the best pair is the best-gain run. Ties go to the
/// smallest `(i, j)`; a non-positive best gain yields the identical pair.
pub(crate) fn erm_dis(g: &Grouped) -> (Threshold, Threshold) {
    let xs = g.reals();
    let gains = g.gains();
    match best_run(&gains) {
        None => (Threshold::all_ones(), Threshold::all_ones()),
        Some((i, j)) => {
            let hi = if j + 1 < xs.len() {
                Threshold { theta: xs[j + 1] }
            } else {
                Threshold::all_zeros()
            };
            (Threshold { theta: xs[i] }, hi)
        }
    }
}

/// Maximum-gain contiguous run with strictly positive gain, lexicographically
/// smallest `(start, end)` among ties.
pub(crate) fn best_run(gains: &[i128]) -> Option<(usize, usize)> {
    let mut prefix: i128 = 0;
    let mut min_prefix: i128 = 0;
    let mut min_at = 0usize;
    let mut best: Option<(i128, usize, usize)> = None;
    for (j, &g) in gains.iter().enumerate() {
        prefix += g;
        let gain = prefix - min_prefix;
        let better = match best {
            None => gain > 0,
            Some((b, bi, bj)) => gain > b || (gain == b && (min_at, j) < (bi, bj)),
        };
        if better {
            best = Some((gain, min_at, j));
        }
        if prefix < min_prefix {
            min_prefix = prefix;
            min_at = j + 1;
        }
    }
    best.map(|(_, i, j)| (i, j))
}
