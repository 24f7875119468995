use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::Grouped;
use crate::domain::Point;
use crate::error::{Error, Result};

/// Indicator of a finite index set: 1 exactly on `ones`, 0 everywhere else
/// (including indices outside any recorded domain).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OnesConcept {
    ones: Vec<usize>,
}

impl OnesConcept {
    pub fn new(ones: impl IntoIterator<Item = usize>) -> Self {
        let set: BTreeSet<usize> = ones.into_iter().collect();
        OnesConcept {
            ones: set.into_iter().collect(),
        }
    }

    pub fn ones(&self) -> &[usize] {
        &self.ones
    }

    pub fn contains(&self, i: usize) -> bool {
        self.ones.binary_search(&i).is_ok()
    }

    pub fn checked(ones: impl IntoIterator<Item = usize>, domain_size: usize, count: usize) -> Result<Self> {
        let c = OnesConcept::new(ones);
        if c.ones.len() != count || c.ones.iter().any(|&i| i >= domain_size) {
            return Err(Error::invalid(
                "ones",
                format!("need exactly {count} distinct indices below {domain_size}"),
            ));
        }
        Ok(c)
    }
}

/// Gain of labeling each in-domain data index 1.
fn gains(g: &Grouped, domain_size: usize) -> BTreeMap<usize, i128> {
    let mut out = BTreeMap::new();
    for (k, p) in g.points.iter().enumerate() {
        let Point::Discrete(i) = p else {
            unreachable!("grouped data was kind-checked")
        };
        if *i < domain_size {
            out.insert(*i, g.w1[k] - g.w0[k]);
        }
    }
    out
}

/// Smallest indices in `0..domain_size` that are not in `exclude`.
fn fillers(domain_size: usize, exclude: impl Fn(usize) -> bool, count: usize) -> Vec<usize> {
    (0..domain_size).filter(|&i| !exclude(i)).take(count).collect()
}

/// Exactly `count` indices maximizing the summed gain. Positive gains first
/// (largest gain, then smallest index), then zero-gain indices by smallest
/// index, then the least negative ones.
pub(crate) fn erm(g: &Grouped, domain_size: usize, count: usize) -> OnesConcept {
    let gain = gains(g, domain_size);
    let mut ranked: Vec<(usize, i128)> = gain.iter().map(|(&i, &v)| (i, v)).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut chosen: BTreeSet<usize> = ranked
        .iter()
        .filter(|(_, v)| *v > 0)
        .take(count)
        .map(|(i, _)| *i)
        .collect();
    if chosen.len() < count {
        let zero = fillers(
            domain_size,
            |i| chosen.contains(&i) || gain.get(&i).is_some_and(|v| *v != 0),
            count - chosen.len(),
        );
        chosen.extend(zero);
    }
    if chosen.len() < count {
        let need = count - chosen.len();
        let negatives: Vec<usize> = ranked
            .iter()
            .filter(|(_, v)| *v < 0)
            .map(|(i, _)| *i)
            .take(need)
            .collect();
        chosen.extend(negatives);
    }
    OnesConcept::new(chosen)
}

/// `dis` of two `count`-subsets `A, B` is `A Δ B`: any set of even size
/// `2j` with `j <= min(count, domain_size - count)`. The best such set is a
/// prefix of the gain ranking, made even by dropping its weakest member or
/// adding the best remaining index, whichever keeps more gain.
pub(crate) fn erm_dis(g: &Grouped, domain_size: usize, count: usize) -> (OnesConcept, OnesConcept) {
    let gain = gains(g, domain_size);
    let max_pairs = count.min(domain_size - count);
    let mut ranked: Vec<(usize, i128)> = gain.iter().map(|(&i, &v)| (i, v)).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut picked: Vec<usize> = ranked
        .iter()
        .filter(|(_, v)| *v > 0)
        .take(2 * max_pairs)
        .map(|(i, _)| *i)
        .collect();
    if picked.len() % 2 == 1 {
        let weakest = gain[picked.last().expect("odd length is nonzero")];
        // Best index not yet picked: an unseen or zero-gain index scores 0.
        let taken: BTreeSet<usize> = picked.iter().copied().collect();
        let zero_candidate = fillers(
            domain_size,
            |i| taken.contains(&i) || gain.get(&i).is_some_and(|v| *v != 0),
            1,
        );
        let neg_candidate = ranked.iter().find(|(i, v)| *v <= 0 && !taken.contains(i)).copied();
        let addition = match (zero_candidate.first(), neg_candidate) {
            (Some(&z), Some((i, v))) => {
                if v == 0 && i < z {
                    Some((i, 0))
                } else {
                    Some((z, 0))
                }
            }
            (Some(&z), None) => Some((z, 0)),
            (None, Some(c)) => Some(c),
            (None, None) => None,
        };
        match addition {
            Some((i, v)) if v + weakest > 0 => picked.push(i),
            _ => {
                picked.pop();
            }
        }
    }
    let half = picked.len() / 2;
    let in_diff: BTreeSet<usize> = picked.iter().copied().collect();
    let shared = fillers(domain_size, |i| in_diff.contains(&i), count - half);
    let c = OnesConcept::new(picked[..half].iter().copied().chain(shared.iter().copied()));
    let c_prime = OnesConcept::new(picked[half..].iter().copied().chain(shared));
    (c, c_prime)
}
