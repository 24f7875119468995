use serde::{Deserialize, Serialize};

use super::{Grouped, VcDimension};
use crate::domain::{Label, Point};
use crate::error::{Error, Result};

/// Largest domain on which the VC dimension is computed by exhaustive
/// shattering search.
pub const SHATTER_SEARCH_LIMIT: usize = 20;

/// A label vector over `Discrete(0..len)`; indices past the end are 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteConcept {
    labels: Vec<Label>,
}

impl FiniteConcept {
    pub fn new(labels: Vec<Label>) -> Self {
        FiniteConcept { labels }
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        Ok(FiniteConcept {
            labels: bits.iter().map(|&b| Label::from_u8(b)).collect::<Result<_>>()?,
        })
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn contains(&self, i: usize) -> bool {
        self.labels.get(i).is_some_and(|l| l.is_one())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct FiniteClassSpec {
    domain_size: usize,
    concepts: Vec<Vec<u8>>,
}

/// Explicit concept list. Duplicates are dropped keeping the first
/// occurrence; list order is the ERM tie-break order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FiniteClassSpec", into = "FiniteClassOut")]
pub struct FiniteClass {
    domain_size: usize,
    concepts: Vec<FiniteConcept>,
}

#[derive(Serialize)]
struct FiniteClassOut {
    domain_size: usize,
    concepts: Vec<Vec<u8>>,
}

impl From<FiniteClass> for FiniteClassOut {
    fn from(c: FiniteClass) -> Self {
        FiniteClassOut {
            domain_size: c.domain_size,
            concepts: c
                .concepts
                .iter()
                .map(|fc| fc.labels.iter().map(|l| l.as_u8()).collect())
                .collect(),
        }
    }
}

impl TryFrom<FiniteClassSpec> for FiniteClass {
    type Error = Error;

    fn try_from(spec: FiniteClassSpec) -> Result<Self> {
        let concepts = spec
            .concepts
            .iter()
            .map(|bits| FiniteConcept::from_bits(bits))
            .collect::<Result<Vec<_>>>()?;
        FiniteClass::new(spec.domain_size, concepts)
    }
}

impl FiniteClass {
    pub fn new(domain_size: usize, concepts: Vec<FiniteConcept>) -> Result<Self> {
        if concepts.is_empty() {
            return Err(Error::invalid("concepts", "finite class needs at least one concept"));
        }
        let mut unique: Vec<FiniteConcept> = Vec::with_capacity(concepts.len());
        for c in concepts {
            if c.labels.len() != domain_size {
                return Err(Error::invalid(
                    "concepts",
                    format!("label vector of length {} on a domain of {domain_size}", c.labels.len()),
                ));
            }
            if !unique.contains(&c) {
                unique.push(c);
            }
        }
        Ok(FiniteClass {
            domain_size,
            concepts: unique,
        })
    }

    /// All `2^n` labelings of `n` points, in binary counting order.
    pub fn all_labelings(n: usize) -> Result<Self> {
        if n > 16 {
            return Err(Error::invalid("n", "at most 16 points for the full power set"));
        }
        let concepts = (0..1u32 << n)
            .map(|mask| FiniteConcept::new((0..n).map(|i| Label::from_bool(mask >> i & 1 == 1)).collect()))
            .collect();
        FiniteClass::new(n, concepts)
    }

    /// The `n` singleton indicators on `n` points.
    pub fn singletons(n: usize) -> Result<Self> {
        let concepts = (0..n)
            .map(|k| FiniteConcept::new((0..n).map(|i| Label::from_bool(i == k)).collect()))
            .collect();
        FiniteClass::new(n, concepts)
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn concepts(&self) -> &[FiniteConcept] {
        &self.concepts
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn position(&self, c: &FiniteConcept) -> Option<usize> {
        self.concepts.iter().position(|x| x == c)
    }

    pub fn vc_dimension(&self) -> VcDimension {
        let upper = usize::BITS as usize - 1 - self.concepts.len().leading_zeros() as usize;
        if self.domain_size > SHATTER_SEARCH_LIMIT {
            return VcDimension { d: upper, exact: false };
        }
        let masks: Vec<u32> = self
            .concepts
            .iter()
            .map(|c| {
                c.labels
                    .iter()
                    .enumerate()
                    .fold(0u32, |m, (i, l)| if l.is_one() { m | 1 << i } else { m })
            })
            .collect();
        let mut d = 0;
        for size in 1..=upper.min(self.domain_size) {
            if !any_shattered(&masks, self.domain_size, size) {
                break;
            }
            d = size;
        }
        VcDimension { d, exact: true }
    }

    pub(crate) fn erm(&self, g: &Grouped) -> FiniteConcept {
        let mut best: Option<(i128, usize)> = None;
        for (ci, c) in self.concepts.iter().enumerate() {
            let err = error_of(g, |i| c.contains(i));
            if best.is_none_or(|(b, _)| err < b) {
                best = Some((err, ci));
            }
        }
        self.concepts[best.expect("class is nonempty").1].clone()
    }

    /// Brute force over unordered pairs `(i, j)`, `i <= j`, in list order.
    pub(crate) fn erm_dis(&self, g: &Grouped) -> (FiniteConcept, FiniteConcept) {
        let mut best: Option<(i128, usize, usize)> = None;
        for i in 0..self.concepts.len() {
            for j in i..self.concepts.len() {
                let (a, b) = (&self.concepts[i], &self.concepts[j]);
                let err = error_of(g, |x| a.contains(x) != b.contains(x));
                if best.is_none_or(|(e, _, _)| err < e) {
                    best = Some((err, i, j));
                }
            }
        }
        let (_, i, j) = best.expect("class is nonempty");
        (self.concepts[i].clone(), self.concepts[j].clone())
    }
}

fn error_of(g: &Grouped, predict: impl Fn(usize) -> bool) -> i128 {
    g.points
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let Point::Discrete(i) = p else {
                unreachable!("grouped data was kind-checked")
            };
            if predict(*i) {
                g.w0[k]
            } else {
                g.w1[k]
            }
        })
        .sum()
}

/// Whether some `size`-subset of `0..n` is shattered by the masks.
fn any_shattered(masks: &[u32], n: usize, size: usize) -> bool {
    if masks.len() < 1 << size {
        return false;
    }
    let mut subset: u32 = (1 << size) - 1;
    let limit: u32 = 1 << n;
    let mut seen = vec![false; 1 << size];
    while subset < limit {
        seen.iter_mut().for_each(|s| *s = false);
        let mut count = 0;
        for &m in masks {
            let pattern = compress(m & subset, subset);
            if !seen[pattern] {
                seen[pattern] = true;
                count += 1;
            }
        }
        if count == 1 << size {
            return true;
        }
        // Gosper's hack: next subset with the same popcount.
        let c = subset & subset.wrapping_neg();
        let r = subset + c;
        subset = (((r ^ subset) >> 2) / c) | r;
    }
    false
}

/// Packs the bits of `value` selected by `mask` into the low bits.
fn compress(value: u32, mask: u32) -> usize {
    let mut out = 0usize;
    let mut bit = 0;
    let mut m = mask;
    while m != 0 {
        let low = m.trailing_zeros();
        if value >> low & 1 == 1 {
            out |= 1 << bit;
        }
        bit += 1;
        m &= m - 1;
    }
    out
}
