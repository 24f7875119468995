//! Concept classes with exact, deterministic weighted ERM oracles.
//!
//! Every oracle works on the data grouped by distinct point: each group
//! carries the total weight labeled 0 and labeled 1. Weights are scaled to a
//! common integer denominator so the search runs in exact `i128` arithmetic.
//!
//! Boundary conventions: thresholds and halfspaces use `>=`, intervals are
//! closed. Ties between minimizers are broken by a fixed canonical order,
//! documented on each class.

mod disagreement;
mod finite;
mod halfspace;
mod interval;
mod ones;
mod threshold;
mod union;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

pub use disagreement::DisagreementConcept;
pub use finite::{FiniteClass, FiniteConcept};
pub use halfspace::Halfspace2D;
pub use interval::Interval;
pub use ones::OnesConcept;
pub use threshold::Threshold;
pub use union::UnionOfIntervals;

use crate::domain::{Concept, Point, PointKind, WeightedLabeledSample};
use crate::error::{Error, Result};

/// The hypothesis class `C` handed to the learners.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConceptClass {
    /// `1[x >= theta]` on the real line.
    Threshold,
    /// `1[a <= x <= b]` on the real line.
    Interval,
    /// At most `k` disjoint closed intervals.
    UnionOfIntervals { k: usize },
    /// `1[w1*x1 + w2*x2 + b >= 0]` on the plane.
    #[serde(rename = "halfspace2d")]
    Halfspace2D,
    /// Explicit list of label vectors over `Discrete(0..domain_size)`.
    Finite(FiniteClass),
    /// Indicators of exactly `ones` indices inside `0..domain_size`,
    /// enumerated lazily.
    ExactlyOnes { domain_size: usize, ones: usize },
}

impl ConceptClass {
    pub fn point_kind(&self) -> PointKind {
        match self {
            ConceptClass::Threshold | ConceptClass::Interval | ConceptClass::UnionOfIntervals { .. } => {
                PointKind::Real1D
            }
            ConceptClass::Halfspace2D => PointKind::Real2D,
            ConceptClass::Finite(_) | ConceptClass::ExactlyOnes { .. } => PointKind::Discrete,
        }
    }

    pub fn name(&self) -> String {
        match self {
            ConceptClass::Threshold => "threshold".into(),
            ConceptClass::Interval => "interval".into(),
            ConceptClass::UnionOfIntervals { k } => format!("union_of_intervals({k})"),
            ConceptClass::Halfspace2D => "halfspace2d".into(),
            ConceptClass::Finite(c) => format!("finite({} concepts on {} points)", c.len(), c.domain_size()),
            ConceptClass::ExactlyOnes { domain_size, ones } => {
                format!("exactly_ones({ones} of {domain_size})")
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ConceptClass::UnionOfIntervals { k } if *k == 0 => {
                Err(Error::invalid("k", "union of intervals needs k >= 1"))
            }
            ConceptClass::ExactlyOnes { domain_size, ones } if *ones == 0 || ones > domain_size => {
                Err(Error::invalid("ones", "need 1 <= ones <= domain_size"))
            }
            _ => Ok(()),
        }
    }

    /// Whether `c` is a member of this class.
    pub fn contains(&self, c: &Concept) -> bool {
        match (self, c) {
            (ConceptClass::Threshold, Concept::Threshold(_)) => true,
            (ConceptClass::Interval, Concept::Interval(_)) => true,
            (ConceptClass::UnionOfIntervals { k }, Concept::UnionOfIntervals(u)) => u.intervals().len() <= *k,
            (ConceptClass::UnionOfIntervals { .. }, Concept::Interval(_)) => true,
            (ConceptClass::Halfspace2D, Concept::Halfspace2D(_)) => true,
            (ConceptClass::Finite(fc), Concept::Finite(fcn)) => fc.position(fcn).is_some(),
            (ConceptClass::ExactlyOnes { domain_size, ones }, Concept::Ones(o)) => {
                o.ones().len() == *ones && o.ones().iter().all(|&i| i < *domain_size)
            }
            _ => false,
        }
    }
}

/// VC dimension of a class; `exact == false` marks an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VcDimension {
    pub d: usize,
    pub exact: bool,
}

pub fn vc_dimension(class: &ConceptClass) -> VcDimension {
    let exact = |d| VcDimension { d, exact: true };
    match class {
        ConceptClass::Threshold => exact(1),
        ConceptClass::Interval => exact(2),
        ConceptClass::UnionOfIntervals { k } => exact(2 * k),
        ConceptClass::Halfspace2D => exact(3),
        ConceptClass::Finite(fc) => fc.vc_dimension(),
        ConceptClass::ExactlyOnes { domain_size, ones } => exact((*ones).min(domain_size - ones)),
    }
}

/// Data grouped by distinct point, in ascending point order, with integer
/// weights on a common scale.
#[derive(Debug, Clone)]
pub(crate) struct Grouped {
    pub points: Vec<Point>,
    pub w0: Vec<i128>,
    pub w1: Vec<i128>,
}

impl Grouped {
    pub fn from_data(data: &WeightedLabeledSample, kind: PointKind) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::EmptyData("erm"));
        }
        let mut scale = BigInt::one();
        for e in data.entries() {
            e.point.expect_kind(kind)?;
            if !e.weight.denom().is_one() {
                scale = scale.lcm(e.weight.denom());
            }
        }
        let mut groups: BTreeMap<Point, (i128, i128)> = BTreeMap::new();
        let mut total: i128 = 0;
        for e in data.entries() {
            let w = if scale.is_one() {
                e.weight.numer().to_i128()
            } else {
                (e.weight.numer() * (&scale / e.weight.denom())).to_i128()
            }
            .ok_or(Error::WeightOverflow)?;
            total = total.checked_add(w).ok_or(Error::WeightOverflow)?;
            let slot = groups.entry(e.point).or_insert((0, 0));
            match e.label {
                crate::domain::Label::Zero => slot.0 += w,
                crate::domain::Label::One => slot.1 += w,
            }
        }
        if total == 0 {
            return Err(Error::EmptyData("erm (all weights are zero)"));
        }
        // Leave head-room so sums of gains never overflow downstream.
        if total > i128::MAX / 4 {
            return Err(Error::WeightOverflow);
        }
        let mut out = Grouped {
            points: Vec::with_capacity(groups.len()),
            w0: Vec::with_capacity(groups.len()),
            w1: Vec::with_capacity(groups.len()),
        };
        for (p, (w0, w1)) in groups {
            out.points.push(p);
            out.w0.push(w0);
            out.w1.push(w1);
        }
        Ok(out)
    }

    /// Per-group gain of predicting 1 instead of 0.
    pub fn gains(&self) -> Vec<i128> {
        self.w1.iter().zip(&self.w0).map(|(a, b)| a - b).collect()
    }

    pub fn reals(&self) -> Vec<f64> {
        self.points
            .iter()
            .map(|p| match p {
                Point::Real1D(x) => *x,
                _ => unreachable!("grouped data was kind-checked"),
            })
            .collect()
    }
}

/// Weighted ERM: a concept of minimal total misclassified weight.
pub fn erm(class: &ConceptClass, data: &WeightedLabeledSample) -> Result<Concept> {
    class.validate()?;
    let g = Grouped::from_data(data, class.point_kind())?;
    let c = match class {
        ConceptClass::Threshold => Concept::Threshold(threshold::erm(&g)),
        ConceptClass::Interval => Concept::Interval(interval::erm(&g)),
        ConceptClass::UnionOfIntervals { k } => Concept::UnionOfIntervals(union::erm(&g, *k)),
        ConceptClass::Halfspace2D => Concept::Halfspace2D(halfspace::erm(&g)),
        ConceptClass::Finite(fc) => Concept::Finite(fc.erm(&g)),
        ConceptClass::ExactlyOnes { domain_size, ones } => Concept::Ones(ones::erm(&g, *domain_size, *ones)),
    };
    Ok(c)
}

/// Weighted ERM over `DIS = { dis_{c,c'} : c, c' in C }`.
///
/// Supported for thresholds, intervals, explicit finite classes and
/// exactly-k-ones classes. The optimum over the continuous classes is
/// attained on the data grid: on sorted data, `dis` of two thresholds is a
/// single contiguous run and `dis` of two intervals is a union of at most two
/// runs, and every such run pattern is realized by some pair.
pub fn erm_dis(class: &ConceptClass, data: &WeightedLabeledSample) -> Result<DisagreementConcept> {
    class.validate()?;
    let unsupported = || Error::UnsupportedClass {
        op: "erm_dis",
        class: class.name(),
    };
    if matches!(class, ConceptClass::UnionOfIntervals { .. } | ConceptClass::Halfspace2D) {
        return Err(unsupported());
    }
    let g = Grouped::from_data(data, class.point_kind())?;
    let (c, c_prime) = match class {
        ConceptClass::Threshold => {
            let (a, b) = threshold::erm_dis(&g);
            (Concept::Threshold(a), Concept::Threshold(b))
        }
        ConceptClass::Interval => {
            let (a, b) = interval::erm_dis(&g);
            (Concept::Interval(a), Concept::Interval(b))
        }
        ConceptClass::Finite(fc) => {
            let (a, b) = fc.erm_dis(&g);
            (Concept::Finite(a), Concept::Finite(b))
        }
        ConceptClass::ExactlyOnes { domain_size, ones } => {
            let (a, b) = ones::erm_dis(&g, *domain_size, *ones);
            (Concept::Ones(a), Concept::Ones(b))
        }
        ConceptClass::UnionOfIntervals { .. } | ConceptClass::Halfspace2D => return Err(unsupported()),
    };
    DisagreementConcept::new(c, c_prime)
}
