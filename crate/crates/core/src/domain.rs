//! Points, labels, samples and the selective classifier that every other
//! module builds on.
//!
//! A selective classifier never materializes its selection region `S`.
//! Membership of a point is recomputed from the base hypothesis and the
//! committee: `x ∈ S` iff `h(x) = c_1(x) = ... = c_T(x)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::concepts::{FiniteConcept, Halfspace2D, Interval, OnesConcept, Threshold, UnionOfIntervals};
use crate::error::{Error, Result};

/// Exact rational used for weights, scores and probabilities.
pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rational_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Exact conversion of a finite float. Non-finite input is rejected.
pub fn rational_from_f64(v: f64) -> Result<Rational> {
    Rational::from_float(v).ok_or(Error::NonFinite)
}

pub fn rational_to_f64(v: &Rational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// `count / total` as an exact rational, `0` for an empty population.
pub fn fraction(count: usize, total: usize) -> Rational {
    if total == 0 {
        Rational::zero()
    } else {
        Rational::new(BigInt::from(count), BigInt::from(total))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PointKind {
    Real1D,
    Real2D,
    Discrete,
}

impl fmt::Display for PointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PointKind::Real1D => "real-1d",
            PointKind::Real2D => "real-2d",
            PointKind::Discrete => "discrete",
        };
        f.write_str(s)
    }
}

/// A domain element. Real coordinates must be finite; `Sample::new` and the
/// distribution constructors enforce that.
///
/// Equality and ordering are total: coordinates compare with
/// `f64::total_cmp` after folding `-0.0` into `+0.0`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub enum Point {
    Real1D(f64),
    Real2D(f64, f64),
    Discrete(usize),
}

impl Point {
    pub fn kind(&self) -> PointKind {
        match self {
            Point::Real1D(_) => PointKind::Real1D,
            Point::Real2D(..) => PointKind::Real2D,
            Point::Discrete(_) => PointKind::Discrete,
        }
    }

    pub fn is_finite(&self) -> bool {
        match *self {
            Point::Real1D(x) => x.is_finite(),
            Point::Real2D(a, b) => a.is_finite() && b.is_finite(),
            Point::Discrete(_) => true,
        }
    }

    pub fn expect_kind(&self, kind: PointKind) -> Result<()> {
        if self.kind() == kind {
            Ok(())
        } else {
            Err(Error::KindMismatch {
                expected: kind,
                found: self.kind(),
            })
        }
    }

    /// Euclidean distance for real points; 0/1 distance for discrete ones.
    pub fn distance(&self, other: &Point) -> Result<f64> {
        match (*self, *other) {
            (Point::Real1D(a), Point::Real1D(b)) => Ok((a - b).abs()),
            (Point::Real2D(a1, a2), Point::Real2D(b1, b2)) => Ok((a1 - b1).hypot(a2 - b2)),
            (Point::Discrete(a), Point::Discrete(b)) => Ok(if a == b { 0.0 } else { 1.0 }),
            (a, b) => Err(Error::KindMismatch {
                expected: a.kind(),
                found: b.kind(),
            }),
        }
    }
}

fn fold_zero(x: f64) -> f64 {
    x + 0.0
}

impl Ord for Point {
    fn cmp(&self, other: &Self) -> Ordering {
        match (*self, *other) {
            (Point::Real1D(a), Point::Real1D(b)) => fold_zero(a).total_cmp(&fold_zero(b)),
            (Point::Real2D(a1, a2), Point::Real2D(b1, b2)) => fold_zero(a1)
                .total_cmp(&fold_zero(b1))
                .then(fold_zero(a2).total_cmp(&fold_zero(b2))),
            (Point::Discrete(a), Point::Discrete(b)) => a.cmp(&b),
            (a, b) => a.kind().cmp(&b.kind()),
        }
    }
}

impl PartialOrd for Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Point {}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Real1D(x) => write!(f, "{x}"),
            Point::Real2D(a, b) => write!(f, "({a}, {b})"),
            Point::Discrete(i) => write!(f, "#{i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Zero,
    One,
}

impl Label {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Label::One
        } else {
            Label::Zero
        }
    }

    pub fn is_one(self) -> bool {
        self == Label::One
    }

    pub fn flip(self) -> Self {
        match self {
            Label::Zero => Label::One,
            Label::One => Label::Zero,
        }
    }

    pub fn as_u8(self) -> u8 {
        self as u8
    }

    pub fn from_u8(v: u8) -> Result<Self> {
        match v {
            0 => Ok(Label::Zero),
            1 => Ok(Label::One),
            other => Err(Error::invalid("label", format!("{other} is not a binary label"))),
        }
    }
}

/// Output of a selective classifier; `Reject` is the abstention symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TriLabel {
    Zero,
    One,
    Reject,
}

impl From<Label> for TriLabel {
    fn from(l: Label) -> Self {
        match l {
            Label::Zero => TriLabel::Zero,
            Label::One => TriLabel::One,
        }
    }
}

impl TriLabel {
    pub fn label(self) -> Option<Label> {
        match self {
            TriLabel::Zero => Some(Label::Zero),
            TriLabel::One => Some(Label::One),
            TriLabel::Reject => None,
        }
    }
}

/// Ordered multiset of points of a single kind.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    points: Vec<Point>,
}

impl Sample {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let mut first: Option<PointKind> = None;
        for p in &points {
            if !p.is_finite() {
                return Err(Error::NonFinite);
            }
            match first {
                None => first = Some(p.kind()),
                Some(k) if k != p.kind() => {
                    return Err(Error::HeterogeneousSample {
                        first: k,
                        other: p.kind(),
                    })
                }
                _ => {}
            }
        }
        Ok(Sample { points })
    }

    pub fn empty() -> Self {
        Sample::default()
    }

    pub fn from_reals(xs: &[f64]) -> Result<Self> {
        Sample::new(xs.iter().map(|&x| Point::Real1D(x)).collect())
    }

    pub fn from_indices(ix: &[usize]) -> Self {
        Sample {
            points: ix.iter().map(|&i| Point::Discrete(i)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn kind(&self) -> Option<PointKind> {
        self.points.first().map(Point::kind)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    /// Errors unless every point of `self` is of `kind` (empty samples pass).
    pub fn expect_kind(&self, kind: PointKind) -> Result<()> {
        match self.kind() {
            Some(k) if k != kind => Err(Error::KindMismatch {
                expected: kind,
                found: k,
            }),
            _ => Ok(()),
        }
    }
}

impl<'a> IntoIterator for &'a Sample {
    type Item = &'a Point;
    type IntoIter = std::slice::Iter<'a, Point>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedExample {
    pub point: Point,
    pub label: Label,
    pub weight: Rational,
}

/// Multiset of `(point, label, weight)` triples handed to the ERM oracles.
/// Weight `w` on an entry stands in for `w` repetitions of it.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WeightedLabeledSample {
    entries: Vec<WeightedExample>,
}

impl WeightedLabeledSample {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, point: Point, label: Label, weight: Rational) -> Result<()> {
        if weight < Rational::zero() {
            return Err(Error::invalid("weight", "weights must be nonnegative"));
        }
        if !point.is_finite() {
            return Err(Error::NonFinite);
        }
        if let Some(first) = self.entries.first() {
            point.expect_kind(first.point.kind())?;
        }
        self.entries.push(WeightedExample { point, label, weight });
        Ok(())
    }

    /// Unit weight on every `(point, label)` pair.
    pub fn unit(sample: &Sample, labels: &[Label]) -> Result<Self> {
        if sample.len() != labels.len() {
            return Err(Error::LengthMismatch {
                context: "sample vs labels",
                left: sample.len(),
                right: labels.len(),
            });
        }
        let one = rational_int(1);
        let mut out = Self::new();
        for (p, &l) in sample.iter().zip(labels) {
            out.push(*p, l, one.clone())?;
        }
        Ok(out)
    }

    pub fn entries(&self) -> &[WeightedExample] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn kind(&self) -> Option<PointKind> {
        self.entries.first().map(|e| e.point.kind())
    }

    pub fn total_weight(&self) -> Rational {
        self.entries.iter().map(|e| e.weight.clone()).sum()
    }

    /// Total weight of entries that `c` labels differently from the entry.
    pub fn weighted_error(&self, c: &Concept) -> Result<Rational> {
        let mut err = Rational::zero();
        for e in &self.entries {
            if c.predict(&e.point)? != e.label {
                err += &e.weight;
            }
        }
        Ok(err)
    }
}

/// A hypothesis from one of the supported concept classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Concept {
    Threshold(Threshold),
    Interval(Interval),
    UnionOfIntervals(UnionOfIntervals),
    Halfspace2D(Halfspace2D),
    Finite(FiniteConcept),
    Ones(OnesConcept),
}

impl Concept {
    pub fn kind(&self) -> PointKind {
        match self {
            Concept::Threshold(_) | Concept::Interval(_) | Concept::UnionOfIntervals(_) => PointKind::Real1D,
            Concept::Halfspace2D(_) => PointKind::Real2D,
            Concept::Finite(_) | Concept::Ones(_) => PointKind::Discrete,
        }
    }

    pub fn predict(&self, p: &Point) -> Result<Label> {
        let out = match (self, p) {
            (Concept::Threshold(c), Point::Real1D(x)) => c.contains(*x),
            (Concept::Interval(c), Point::Real1D(x)) => c.contains(*x),
            (Concept::UnionOfIntervals(c), Point::Real1D(x)) => c.contains(*x),
            (Concept::Halfspace2D(c), Point::Real2D(a, b)) => c.contains(*a, *b),
            (Concept::Finite(c), Point::Discrete(i)) => c.contains(*i),
            (Concept::Ones(c), Point::Discrete(i)) => c.contains(*i),
            _ => {
                return Err(Error::KindMismatch {
                    expected: self.kind(),
                    found: p.kind(),
                })
            }
        };
        Ok(Label::from_bool(out))
    }

    pub fn predict_all(&self, sample: &Sample) -> Result<Vec<Label>> {
        sample.iter().map(|p| self.predict(p)).collect()
    }
}

/// Anything that decides membership of a point in a selection region `S`.
pub trait Selector {
    fn selects(&self, p: &Point) -> Result<bool>;
}

/// A selector paired with a base prediction: `h|_S`.
pub trait SelectivePredictor: Selector {
    fn predict_selective(&self, p: &Point) -> Result<TriLabel>;
}

/// Whether the stated guarantees of the producing algorithm apply.
/// `Exploratory` marks runs where `|train| != |test|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GuaranteeMode {
    Guarantee,
    Exploratory,
}

/// Base hypothesis `h` restricted to `S(h, c_1..c_T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectiveClassifier {
    pub base: Concept,
    pub committee: Vec<Concept>,
    pub epsilon_used: f64,
    pub lambda_used: Rational,
    pub mode: GuaranteeMode,
}

impl SelectiveClassifier {
    /// `h|_X`: selects everything.
    pub fn unrestricted(base: Concept) -> Self {
        SelectiveClassifier {
            base,
            committee: Vec::new(),
            epsilon_used: 0.0,
            lambda_used: rational_int(1),
            mode: GuaranteeMode::Guarantee,
        }
    }

    pub fn with_committee(base: Concept, committee: Vec<Concept>) -> Result<Self> {
        for c in &committee {
            if c.kind() != base.kind() {
                return Err(Error::KindMismatch {
                    expected: base.kind(),
                    found: c.kind(),
                });
            }
        }
        Ok(SelectiveClassifier {
            committee,
            ..Self::unrestricted(base)
        })
    }

    pub fn iterations(&self) -> usize {
        self.committee.len()
    }

    pub fn kind(&self) -> PointKind {
        self.base.kind()
    }

    pub fn membership(&self, p: &Point) -> Result<bool> {
        let h = self.base.predict(p)?;
        for c in &self.committee {
            if c.predict(p)? != h {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn classify(&self, p: &Point) -> Result<TriLabel> {
        let h = self.base.predict(p)?;
        for c in &self.committee {
            if c.predict(p)? != h {
                return Ok(TriLabel::Reject);
            }
        }
        Ok(h.into())
    }
}

impl Selector for SelectiveClassifier {
    fn selects(&self, p: &Point) -> Result<bool> {
        self.membership(p)
    }
}

impl SelectivePredictor for SelectiveClassifier {
    fn predict_selective(&self, p: &Point) -> Result<TriLabel> {
        self.classify(p)
    }
}

/// Selects everything.
#[derive(Debug, Clone, Copy, Default)]
pub struct SelectAll;

impl Selector for SelectAll {
    fn selects(&self, _p: &Point) -> Result<bool> {
        Ok(true)
    }
}

/// Any hypothesis paired with any selector.
pub struct Restricted<'a, S: Selector + ?Sized> {
    pub base: &'a Concept,
    pub set: &'a S,
}

impl<'a, S: Selector + ?Sized> Restricted<'a, S> {
    pub fn new(base: &'a Concept, set: &'a S) -> Self {
        Restricted { base, set }
    }
}

impl<S: Selector + ?Sized> Selector for Restricted<'_, S> {
    fn selects(&self, p: &Point) -> Result<bool> {
        self.set.selects(p)
    }
}

impl<S: Selector + ?Sized> SelectivePredictor for Restricted<'_, S> {
    fn predict_selective(&self, p: &Point) -> Result<TriLabel> {
        let h = self.base.predict(p)?;
        if self.set.selects(p)? {
            Ok(h.into())
        } else {
            Ok(TriLabel::Reject)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concepts::Interval;
    use proptest::prelude::*;

    fn interval(a: f64, b: f64) -> Concept {
        Concept::Interval(Interval::new(a, b).unwrap())
    }

    fn worked_sc() -> SelectiveClassifier {
        SelectiveClassifier::with_committee(interval(2.0, 3.0), vec![interval(1.5, 3.9)]).unwrap()
    }

    #[test]
    fn empty_committee_selects_everything() {
        let sc = SelectiveClassifier::unrestricted(interval(2.0, 3.0));
        for x in [-10.0, 0.0, 2.5, 3.0, 100.0] {
            assert!(sc.membership(&Point::Real1D(x)).unwrap());
        }
        assert_eq!(sc.classify(&Point::Real1D(2.5)).unwrap(), TriLabel::One);
    }

    #[test]
    fn worked_interval_membership() {
        let sc = worked_sc();
        assert!(!sc.membership(&Point::Real1D(3.8)).unwrap());
        assert!(sc.membership(&Point::Real1D(2.5)).unwrap());
        assert_eq!(sc.classify(&Point::Real1D(1.5)).unwrap(), TriLabel::Reject);
        assert_eq!(sc.classify(&Point::Real1D(2.5)).unwrap(), TriLabel::One);
    }

    #[test]
    fn kind_mismatch_is_an_error() {
        let sc = worked_sc();
        assert!(matches!(
            sc.membership(&Point::Discrete(3)),
            Err(Error::KindMismatch { .. })
        ));
        assert!(SelectiveClassifier::with_committee(
            interval(0.0, 1.0),
            vec![Concept::Finite(crate::concepts::FiniteConcept::new(vec![Label::One]))]
        )
        .is_err());
    }

    #[test]
    fn sample_rejects_mixed_and_nonfinite() {
        assert!(Sample::new(vec![Point::Real1D(1.0), Point::Discrete(0)]).is_err());
        assert_eq!(Sample::new(vec![Point::Real1D(f64::NAN)]), Err(Error::NonFinite));
    }

    #[test]
    fn negative_zero_equals_zero() {
        assert_eq!(Point::Real1D(-0.0), Point::Real1D(0.0));
    }

    fn arb_interval() -> impl Strategy<Value = Concept> {
        (-5.0f64..5.0, 0.0f64..4.0).prop_map(|(a, len)| interval(a, a + len))
    }

    proptest! {
        #[test]
        fn reject_iff_not_member(base in arb_interval(), committee in proptest::collection::vec(arb_interval(), 0..4), x in -6.0f64..10.0) {
            let sc = SelectiveClassifier::with_committee(base, committee).unwrap();
            let p = Point::Real1D(x);
            let member = sc.membership(&p).unwrap();
            prop_assert_eq!(sc.classify(&p).unwrap() == TriLabel::Reject, !member);
            prop_assert_eq!(sc.membership(&p).unwrap(), member);
        }

        #[test]
        fn appending_member_shrinks_selection(base in arb_interval(), committee in proptest::collection::vec(arb_interval(), 0..4), extra in arb_interval(), x in -6.0f64..10.0) {
            let before = SelectiveClassifier::with_committee(base.clone(), committee.clone()).unwrap();
            let mut longer = committee;
            longer.push(extra);
            let after = SelectiveClassifier::with_committee(base, longer).unwrap();
            let p = Point::Real1D(x);
            if after.membership(&p).unwrap() {
                prop_assert!(before.membership(&p).unwrap());
            }
        }
    }
}
