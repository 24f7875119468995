use serde::{Deserialize, Serialize};

use super::{union, Grouped};
use crate::error::{Error, Result};

/// Closed interval `1[a <= x <= b]`. Any `a > b` collapses to the canonical
/// empty interval `(+inf, -inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a.is_nan() || b.is_nan() {
            return Err(Error::NonFinite);
        }
        if a > b {
            Ok(Self::empty())
        } else {
            Ok(Interval { a: a + 0.0, b: b + 0.0 })
        }
    }

    pub fn empty() -> Self {
        Interval {
            a: f64::INFINITY,
            b: f64::NEG_INFINITY,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.a > self.b
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }
}

/// Candidates: the empty interval, then `[v_i, v_j]` for `i <= j`. Among
/// minimizers the empty interval wins, then minimal length `v_j - v_i`, then
/// the smallest left endpoint.
///
/// For a fixed right end `j`, the best left end is the latest minimizer of
/// the prefix gain sum, which is also the shortest; one pass suffices.
pub(crate) fn erm(g: &Grouped) -> Interval {
    let xs = g.reals();
    let mut prefix: i128 = 0;
    let mut min_prefix: i128 = 0;
    let mut min_at = 0usize;
    let mut best: Option<(i128, usize, usize)> = None;
    for j in 0..xs.len() {
        prefix += g.w1[j] - g.w0[j];
        let gain = prefix - min_prefix;
        let better = match best {
            None => gain > 0,
            Some((bg, bi, bj)) => gain > bg || (gain == bg && shorter_or_left(&xs, (min_at, j), (bi, bj))),
        };
        if better {
            best = Some((gain, min_at, j));
        }
        if prefix <= min_prefix {
            min_prefix = prefix;
            min_at = j + 1;
        }
    }
    match best {
        None => Interval::empty(),
        Some((_, i, j)) => Interval { a: xs[i], b: xs[j] },
    }
}

fn shorter_or_left(xs: &[f64], cand: (usize, usize), inc: (usize, usize)) -> bool {
    let lc = xs[cand.1] - xs[cand.0];
    let li = xs[inc.1] - xs[inc.0];
    match lc.total_cmp(&li) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => xs[cand.0] < xs[inc.0],
    }
}

/// On sorted data, `dis` of two intervals is a union of at most two runs and
/// every such union is realized by a pair of disjoint intervals, so the best
/// pair comes from the two-run dynamic program.
pub(crate) fn erm_dis(g: &Grouped) -> (Interval, Interval) {
    let xs = g.reals();
    let runs = union::best_runs(&g.gains(), 2);
    let iv = |&(i, j): &(usize, usize)| Interval { a: xs[i], b: xs[j] };
    match runs.as_slice() {
        [] => (Interval::empty(), Interval::empty()),
        [r] => (iv(r), Interval::empty()),
        [r, s] => (iv(r), iv(s)),
        _ => unreachable!("at most two runs requested"),
    }
}
