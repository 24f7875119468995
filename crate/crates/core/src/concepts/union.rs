use serde::{Deserialize, Serialize};

use super::{Grouped, Interval};
use crate::error::{Error, Result};

/// At most `k` pairwise disjoint, non-empty closed intervals sorted by left
/// endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnionOfIntervals {
    k: usize,
    intervals: Vec<Interval>,
}

impl UnionOfIntervals {
    pub fn new(k: usize, mut intervals: Vec<Interval>) -> Result<Self> {
        intervals.retain(|iv| !iv.is_empty());
        if k == 0 || intervals.len() > k {
            return Err(Error::invalid(
                "intervals",
                format!("{} intervals exceed k = {k}", intervals.len()),
            ));
        }
        intervals.sort_by(|x, y| x.a().total_cmp(&y.a()));
        for w in intervals.windows(2) {
            if w[0].b() >= w[1].a() {
                return Err(Error::invalid("intervals", "intervals must be pairwise disjoint"));
            }
        }
        Ok(UnionOfIntervals { k, intervals })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|iv| iv.contains(x))
    }
}

pub(crate) fn erm(g: &Grouped, k: usize) -> UnionOfIntervals {
    let xs = g.reals();
    let intervals = best_runs(&g.gains(), k)
        .into_iter()
        .map(|(i, j)| Interval::new(xs[i], xs[j]).expect("data values are finite"))
        .collect();
    UnionOfIntervals { k, intervals }
}

/// At most `k` disjoint runs of consecutive positions maximizing the summed
/// gain, in O(len * k).
///
/// `dp[r][in]` is the best total using exactly `r` runs with the current
/// position inside (`in = 1`) or outside a run. Ties prefer staying outside
/// and extending an open run; at the end the smallest `r` reaching the
/// optimum wins, so no returned run has non-positive total gain and no two
/// runs touch.
pub(crate) fn best_runs(gains: &[i128], k: usize) -> Vec<(usize, usize)> {
    let n = gains.len();
    let states = 2 * (k + 1);
    let idx = |r: usize, s: usize| 2 * r + s;
    let mut cur: Vec<Option<i128>> = vec![None; states];
    cur[idx(0, 0)] = Some(0);
    // back[j * states + state] = predecessor "inside" flag.
    let mut back = vec![0u8; n * states];
    for (j, &g) in gains.iter().enumerate() {
        let mut next: Vec<Option<i128>> = vec![None; states];
        for r in 0..=k {
            let (o, i) = (cur[idx(r, 0)], cur[idx(r, 1)]);
            let (v, from) = pick(o, i);
            next[idx(r, 0)] = v;
            back[j * states + idx(r, 0)] = from;
            if r >= 1 {
                let (v, from) = pick(cur[idx(r, 1)], cur[idx(r - 1, 0)]);
                next[idx(r, 1)] = v.map(|x| x + g);
                // pick() returns 0 for its first argument: continuing the run.
                back[j * states + idx(r, 1)] = 1 - from;
            }
        }
        cur = next;
    }
    let mut best: Option<(i128, usize, usize)> = None;
    for r in 0..=k {
        for s in 0..2 {
            if let Some(v) = cur[idx(r, s)] {
                if best.is_none_or(|(b, _, _)| v > b) {
                    best = Some((v, r, s));
                }
            }
        }
    }
    let (_, mut r, mut s) = best.expect("zero runs is always feasible");
    let mut inside = vec![false; n];
    for j in (0..n).rev() {
        let from = back[j * states + idx(r, s)] as usize;
        if s == 1 {
            inside[j] = true;
            if from == 0 {
                r -= 1;
            }
        }
        s = from;
    }
    let mut runs = Vec::new();
    let mut j = 0;
    while j < n {
        if inside[j] {
            let start = j;
            while j + 1 < n && inside[j + 1] {
                j += 1;
            }
            runs.push((start, j));
        }
        j += 1;
    }
    runs
}

/// Larger of two optional values; ties go to the first. Returns the index of
/// the chosen argument.
fn pick(first: Option<i128>, second: Option<i128>) -> (Option<i128>, u8) {
    match (first, second) {
        (Some(a), Some(b)) if b > a => (Some(b), 1),
        (Some(a), _) => (Some(a), 0),
        (None, Some(b)) => (Some(b), 1),
        (None, None) => (None, 0),
    }
}
