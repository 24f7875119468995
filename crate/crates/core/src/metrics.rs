//! Error and rejection functionals, exact over finite-support distributions
//! and empirical over samples, plus distances between distributions and the
//! optimal reject set `S* = {x : Q(x) <= P(x)/ε}`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::domain::{
    fraction, rational_from_f64, rational_to_f64, Concept, Label, Point, PointKind, Rational, Sample,
    SelectivePredictor, Selector, TriLabel,
};
use crate::error::{Error, Result};

/// Tolerance accepted on the total mass of float-specified distributions.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// Finite-support distribution over points with exact rational masses.
/// Support is kept sorted and distinct; zero-mass atoms are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    atoms: BTreeMap<Point, Rational>,
}

fn check_kind(points: impl IntoIterator<Item = Point>) -> Result<Option<PointKind>> {
    let mut kind = None;
    for p in points {
        if !p.is_finite() {
            return Err(Error::NonFinite);
        }
        match kind {
            None => kind = Some(p.kind()),
            Some(k) => p.expect_kind(k)?,
        }
    }
    Ok(kind)
}

fn rationals_from_f64(probs: &[f64]) -> Result<Vec<Rational>> {
    if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::InvalidDistribution(
            "probabilities must be finite and >= 0".into(),
        ));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::InvalidDistribution(format!("masses sum to {total}, not 1")));
    }
    let exact: Vec<Rational> = probs.iter().map(|&p| rational_from_f64(p)).collect::<Result<_>>()?;
    let sum: Rational = exact.iter().cloned().sum();
    Ok(exact.into_iter().map(|p| p / &sum).collect())
}

impl DiscreteDistribution {
    /// Exact masses; they must be nonnegative and sum to exactly 1.
    pub fn new(support: Vec<Point>, probs: Vec<Rational>) -> Result<Self> {
        if support.len() != probs.len() {
            return Err(Error::LengthMismatch {
                context: "support vs probabilities",
                left: support.len(),
                right: probs.len(),
            });
        }
        check_kind(support.iter().copied())?;
        let mut atoms = BTreeMap::new();
        let mut seen = BTreeSet::new();
        let mut total = Rational::zero();
        for (p, w) in support.into_iter().zip(probs) {
            if w.is_negative() {
                return Err(Error::InvalidDistribution("negative mass".into()));
            }
            if !seen.insert(p) {
                return Err(Error::InvalidDistribution(format!("repeated support point {p}")));
            }
            total += &w;
            if !w.is_zero() {
                atoms.insert(p, w);
            }
        }
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!("masses sum to {total}, not 1")));
        }
        Ok(DiscreteDistribution { atoms })
    }

    /// Float masses summing to 1 within [`NORMALIZATION_TOLERANCE`]; the
    /// exact images of the floats are renormalized.
    pub fn from_f64(support: Vec<Point>, probs: &[f64]) -> Result<Self> {
        let exact = rationals_from_f64(probs)?;
        DiscreteDistribution::new(support, exact)
    }

    pub fn uniform(support: Vec<Point>) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        let w = fraction(1, support.len());
        let n = support.len();
        DiscreteDistribution::new(support, vec![w; n])
    }

    /// Uniform over `Discrete(lo..hi)`.
    pub fn uniform_indices(lo: usize, hi: usize) -> Result<Self> {
        DiscreteDistribution::uniform((lo..hi).map(Point::Discrete).collect())
    }

    pub fn point_mass(p: Point) -> Result<Self> {
        DiscreteDistribution::uniform(vec![p])
    }

    /// Positive-mass support in ascending order.
    pub fn support(&self) -> impl Iterator<Item = &Point> {
        self.atoms.keys()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&Point, &Rational)> {
        self.atoms.iter()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn kind(&self) -> Option<PointKind> {
        self.atoms.keys().next().map(Point::kind)
    }

    pub fn prob(&self, p: &Point) -> Rational {
        self.atoms.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total mass of the points satisfying `pred`.
    pub fn mass(&self, mut pred: impl FnMut(&Point) -> Result<bool>) -> Result<Rational> {
        let mut total = Rational::zero();
        for (p, w) in &self.atoms {
            if pred(p)? {
                total += w;
            }
        }
        Ok(total)
    }
}

/// Finite-support distribution over labeled points.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDiscreteDistribution {
    atoms: BTreeMap<(Point, Label), Rational>,
}

impl LabeledDiscreteDistribution {
    pub fn new(support: Vec<(Point, Label)>, probs: Vec<Rational>) -> Result<Self> {
        if support.len() != probs.len() {
            return Err(Error::LengthMismatch {
                context: "support vs probabilities",
                left: support.len(),
                right: probs.len(),
            });
        }
        check_kind(support.iter().map(|(p, _)| *p))?;
        let mut atoms = BTreeMap::new();
        let mut seen = BTreeSet::new();
        let mut total = Rational::zero();
        for (key, w) in support.into_iter().zip(probs) {
            if w.is_negative() {
                return Err(Error::InvalidDistribution("negative mass".into()));
            }
            total += &w;
            if !seen.insert(key) {
                return Err(Error::InvalidDistribution(format!(
                    "repeated support point ({}, {:?})",
                    key.0, key.1
                )));
            }
            if !w.is_zero() {
                atoms.insert(key, w);
            }
        }
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!("masses sum to {total}, not 1")));
        }
        Ok(LabeledDiscreteDistribution { atoms })
    }

    pub fn from_f64(support: Vec<(Point, Label)>, probs: &[f64]) -> Result<Self> {
        let exact = rationals_from_f64(probs)?;
        LabeledDiscreteDistribution::new(support, exact)
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&(Point, Label), &Rational)> {
        self.atoms.iter()
    }

    pub fn prob(&self, p: &Point, l: Label) -> Rational {
        self.atoms.get(&(*p, l)).cloned().unwrap_or_else(Rational::zero)
    }

    /// The marginal over points.
    pub fn marginal(&self) -> DiscreteDistribution {
        let mut atoms: BTreeMap<Point, Rational> = BTreeMap::new();
        for ((p, _), w) in &self.atoms {
            *atoms.entry(*p).or_insert_with(Rational::zero) += w;
        }
        DiscreteDistribution { atoms }
    }
}

/// Concept `g` restricted to nothing: the plain misclassification mass
/// `Pr_D[g(x) != f(x)]`.
pub fn disagreement_mass(g: &Concept, f: &Concept, d: &DiscreteDistribution) -> Result<Rational> {
    d.mass(|p| Ok(g.predict(p)? != f.predict(p)?))
}

/// `Pr_{x~D}[h(x) != f(x) and x in S]`.
pub fn err_dist<S: SelectivePredictor + ?Sized>(sc: &S, f: &Concept, d: &DiscreteDistribution) -> Result<Rational> {
    d.mass(|p| Ok(wrong(sc.predict_selective(p)?, f.predict(p)?)))
}

/// `Pr_{x~D}[x not in S]`.
pub fn rej_dist<S: Selector + ?Sized>(set: &S, d: &DiscreteDistribution) -> Result<Rational> {
    d.mass(|p| Ok(!set.selects(p)?))
}

fn wrong(out: TriLabel, truth: Label) -> bool {
    out.label().is_some_and(|l| l != truth)
}

/// `(1/n)|{i : f(x_i) != h(x_i) and x_i in S}|`.
pub fn err_empirical<S: SelectivePredictor + ?Sized>(sc: &S, f: &Concept, sample: &Sample) -> Result<Rational> {
    let mut count = 0;
    for p in sample {
        if wrong(sc.predict_selective(p)?, f.predict(p)?) {
            count += 1;
        }
    }
    Ok(fraction(count, sample.len()))
}

/// As [`err_empirical`] with explicit true labels.
pub fn err_empirical_labels<S: SelectivePredictor + ?Sized>(
    sc: &S,
    labels: &[Label],
    sample: &Sample,
) -> Result<Rational> {
    if labels.len() != sample.len() {
        return Err(Error::LengthMismatch {
            context: "sample vs labels",
            left: sample.len(),
            right: labels.len(),
        });
    }
    let mut count = 0;
    for (p, &y) in sample.iter().zip(labels) {
        if wrong(sc.predict_selective(p)?, y) {
            count += 1;
        }
    }
    Ok(fraction(count, sample.len()))
}

/// `(1/n)|{i : x_i not in S}|`.
pub fn rej_empirical<S: Selector + ?Sized>(set: &S, sample: &Sample) -> Result<Rational> {
    let mut count = 0;
    for p in sample {
        if !set.selects(p)? {
            count += 1;
        }
    }
    Ok(fraction(count, sample.len()))
}

/// Errors among the selected points only (a conditional rate, unlike
/// [`err_empirical`]); `0` when nothing is selected.
pub fn selected_error_rate<S: SelectivePredictor + ?Sized>(
    sc: &S,
    labels: &[Label],
    sample: &Sample,
) -> Result<Rational> {
    if labels.len() != sample.len() {
        return Err(Error::LengthMismatch {
            context: "sample vs labels",
            left: sample.len(),
            right: labels.len(),
        });
    }
    let (mut selected, mut errors) = (0, 0);
    for (p, &y) in sample.iter().zip(labels) {
        if let Some(l) = sc.predict_selective(p)?.label() {
            selected += 1;
            if l != y {
                errors += 1;
            }
        }
    }
    Ok(fraction(errors, selected))
}

fn same_len(z: &Sample, xt: &Sample) -> Result<()> {
    if z.len() == xt.len() {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            context: "z vs x̃",
            left: z.len(),
            right: xt.len(),
        })
    }
}

/// `(1/n)|{i : z_i != x̃_i}|`.
pub fn hamming_delta(z: &Sample, xt: &Sample) -> Result<Rational> {
    same_len(z, xt)?;
    Ok(fraction(z.iter().zip(xt).filter(|(a, b)| a != b).count(), z.len()))
}

/// `(1/n)|{i : x̃_i not in S and x̃_i = z_i}|`: rejected points the adversary
/// left untouched.
pub fn false_rejection_rate<S: Selector + ?Sized>(z: &Sample, xt: &Sample, set: &S) -> Result<Rational> {
    same_len(z, xt)?;
    let mut count = 0;
    for (a, b) in z.iter().zip(xt) {
        if a == b && !set.selects(b)? {
            count += 1;
        }
    }
    Ok(fraction(count, z.len()))
}

fn union_support<'a>(p: &'a DiscreteDistribution, q: &'a DiscreteDistribution) -> Result<BTreeSet<&'a Point>> {
    if let (Some(a), Some(b)) = (p.kind(), q.kind()) {
        if a != b {
            return Err(Error::KindMismatch { expected: a, found: b });
        }
    }
    Ok(p.support().chain(q.support()).collect())
}

/// `½ Σ |P(x) - Q(x)|`.
pub fn tv_distance(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<Rational> {
    let mut total = Rational::zero();
    for x in union_support(p, q)? {
        total += (p.prob(x) - q.prob(x)).abs();
    }
    Ok(total / Rational::from_integer(2.into()))
}

/// `Pr_{x~Q}[x not in S and Q(x) <= Λ·P(x)]`.
pub fn overlap_rejection_mass<S: Selector + ?Sized>(
    p: &DiscreteDistribution,
    q: &DiscreteDistribution,
    set: &S,
    lambda: &Rational,
) -> Result<Rational> {
    union_support(p, q)?;
    q.mass(|x| Ok(q.prob(x) <= lambda * p.prob(x) && !set.selects(x)?))
}

/// Explicit point set, or its complement, as a selector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    points: BTreeSet<Point>,
    complement: bool,
}

impl PointSet {
    /// Selects exactly `points`.
    pub fn including(points: impl IntoIterator<Item = Point>) -> Self {
        PointSet {
            points: points.into_iter().collect(),
            complement: false,
        }
    }

    /// Selects everything except `points`.
    pub fn excluding(points: impl IntoIterator<Item = Point>) -> Self {
        PointSet {
            points: points.into_iter().collect(),
            complement: true,
        }
    }

    pub fn points(&self) -> &BTreeSet<Point> {
        &self.points
    }

    pub fn is_complement(&self) -> bool {
        self.complement
    }
}

impl Selector for PointSet {
    fn selects(&self, p: &Point) -> Result<bool> {
        Ok(self.points.contains(p) != self.complement)
    }
}

/// `S*` represented by its rejected points, with both rejection rates.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalRejectSet {
    /// `X \ S*`: points with `Q(x) > P(x)/ε`.
    pub rejected: BTreeSet<Point>,
    pub rej_p: Rational,
    pub rej_q: Rational,
}

impl OptimalRejectSet {
    pub fn selector(&self) -> PointSet {
        PointSet::excluding(self.rejected.iter().copied())
    }
}

/// `S* = {x : Q(x) <= P(x)/ε}`, ties included. Points outside both supports
/// have `Q = 0` and are always in `S*`.
pub fn optimal_reject_set(
    p: &DiscreteDistribution,
    q: &DiscreteDistribution,
    eps: &Rational,
) -> Result<OptimalRejectSet> {
    if !eps.is_positive() {
        return Err(Error::invalid("eps", "must be positive"));
    }
    union_support(p, q)?;
    let rejected: BTreeSet<Point> = q.support().filter(|x| eps * q.prob(x) > p.prob(x)).copied().collect();
    let rej_p = p.mass(|x| Ok(rejected.contains(x)))?;
    let rej_q = q.mass(|x| Ok(rejected.contains(x)))?;
    Ok(OptimalRejectSet { rejected, rej_p, rej_q })
}

/// `Pr_{(x,y)~M}[h(x) != y and x in S]`.
pub fn err_labeled_dist<S: SelectivePredictor + ?Sized>(sc: &S, m: &LabeledDiscreteDistribution) -> Result<Rational> {
    let mut total = Rational::zero();
    for ((p, y), w) in m.atoms() {
        if wrong(sc.predict_selective(p)?, *y) {
            total += w;
        }
    }
    Ok(total)
}

/// `Pr_{(x,y)~M}[x not in S]`.
pub fn rej_labeled_dist<S: Selector + ?Sized>(set: &S, m: &LabeledDiscreteDistribution) -> Result<Rational> {
    let mut total = Rational::zero();
    for ((p, _), w) in m.atoms() {
        if !set.selects(p)? {
            total += w;
        }
    }
    Ok(total)
}

/// `Pr_{(x,y)~M}[g(x) != y]` for a plain concept.
pub fn concept_error_labeled(g: &Concept, m: &LabeledDiscreteDistribution) -> Result<Rational> {
    let mut total = Rational::zero();
    for ((p, y), w) in m.atoms() {
        if g.predict(p)? != *y {
            total += w;
        }
    }
    Ok(total)
}

/// `P_η`: mass `P(x)(1 - η(x))` on `(x, f(x))` and `P(x)η(x)` on
/// `(x, 1 - f(x))`.
pub fn massart_distribution(
    p: &DiscreteDistribution,
    f: &Concept,
    eta: impl Fn(&Point) -> Rational,
) -> Result<LabeledDiscreteDistribution> {
    let half = Rational::new(1.into(), 2.into());
    let mut support = Vec::with_capacity(2 * p.len());
    let mut probs = Vec::with_capacity(2 * p.len());
    for (x, w) in p.atoms() {
        let e = eta(x);
        if e.is_negative() || e >= half {
            return Err(Error::invalid("eta", format!("η({x}) = {e} is outside [0, 1/2)")));
        }
        let y = f.predict(x)?;
        support.push((*x, y));
        probs.push(w * (Rational::one() - &e));
        support.push((*x, y.flip()));
        probs.push(w * e);
    }
    LabeledDiscreteDistribution::new(support, probs)
}

/// `OPT = E_{x~P}[η(x)]`.
pub fn massart_opt(p: &DiscreteDistribution, eta: impl Fn(&Point) -> Rational) -> Rational {
    p.atoms().map(|(x, w)| w * eta(x)).sum()
}

/// Float view for reports.
pub fn to_f64(r: &Rational) -> f64 {
    rational_to_f64(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concepts::{Interval, Threshold};
    use crate::domain::{rational, rational_int, SelectAll, SelectiveClassifier};

    fn uniform(lo: usize, hi: usize) -> DiscreteDistribution {
        DiscreteDistribution::uniform_indices(lo, hi).unwrap()
    }

    #[test]
    fn worked_reject_set_instance() {
        let p = uniform(1, 101);
        let q = uniform(0, 10);
        assert_eq!(tv_distance(&p, &q).unwrap(), rational(91, 100));
        let s = optimal_reject_set(&p, &q, &rational(1, 10)).unwrap();
        assert_eq!(s.rejected, BTreeSet::from([Point::Discrete(0)]));
        assert_eq!(s.rej_p, rational_int(0));
        assert_eq!(s.rej_q, rational(1, 10));
        // S = {1..100} at Λ = 10: only 0 is rejected and Q(0) > 10·P(0) = 0.
        let set = PointSet::including((1..=100).map(Point::Discrete));
        assert_eq!(
            overlap_rejection_mass(&p, &q, &set, &rational_int(10)).unwrap(),
            rational_int(0)
        );
    }

    #[test]
    fn tv_identities() {
        let p = uniform(0, 4);
        assert_eq!(tv_distance(&p, &p).unwrap(), rational_int(0));
        assert_eq!(tv_distance(&p, &uniform(4, 8)).unwrap(), rational_int(1));
    }

    #[test]
    fn optimal_set_limits() {
        let p = DiscreteDistribution::new(
            vec![Point::Discrete(0), Point::Discrete(1), Point::Discrete(2)],
            vec![rational(1, 2), rational(1, 2), rational_int(0)],
        )
        .unwrap();
        let q = DiscreteDistribution::new(
            vec![Point::Discrete(1), Point::Discrete(2), Point::Discrete(3)],
            vec![rational(1, 4), rational(1, 4), rational(1, 2)],
        )
        .unwrap();
        let same = optimal_reject_set(&p, &p, &rational_int(1)).unwrap();
        assert!(same.rejected.is_empty());
        // A tiny ε puts all of supp(P) in S*.
        let tiny = optimal_reject_set(&p, &q, &rational(1, 1_000_000)).unwrap();
        assert!(p.support().all(|x| !tiny.rejected.contains(x)));
        // A huge ε leaves only points with Q = 0 in S*.
        let huge = optimal_reject_set(&p, &q, &rational_int(1_000_000)).unwrap();
        assert!(q.support().all(|x| huge.rejected.contains(x)));
    }

    #[test]
    fn float_construction_is_checked() {
        let pts = vec![Point::Discrete(0), Point::Discrete(1), Point::Discrete(2)];
        let d = DiscreteDistribution::from_f64(pts.clone(), &[0.1, 0.2, 0.7]).unwrap();
        assert_eq!(d.mass(|_| Ok(true)).unwrap(), rational_int(1));
        assert!(DiscreteDistribution::from_f64(pts.clone(), &[0.1, 0.2, 0.6]).is_err());
        assert!(DiscreteDistribution::from_f64(vec![Point::Discrete(0); 2], &[0.5, 0.5]).is_err());
        assert!(DiscreteDistribution::from_f64(pts, &[-0.1, 0.4, 0.7]).is_err());
    }

    fn sc_interval(a: f64, b: f64, committee: Vec<Concept>) -> SelectiveClassifier {
        SelectiveClassifier::with_committee(Concept::Interval(Interval::new(a, b).unwrap()), committee).unwrap()
    }

    #[test]
    fn err_and_rej_on_distributions() {
        let d = DiscreteDistribution::uniform(vec![Point::Real1D(0.0), Point::Real1D(1.0)]).unwrap();
        let sc = sc_interval(0.0, 0.5, vec![]);
        assert_eq!(err_dist(&sc, &sc.base, &d).unwrap(), rational_int(0));
        let f = Concept::Threshold(Threshold::all_zeros());
        assert_eq!(err_dist(&sc, &f, &d).unwrap(), rational(1, 2));
        // A committee member that disagrees with the base everywhere on D.
        let rejecting = sc_interval(0.0, 0.5, vec![Concept::Interval(Interval::new(0.5, 2.0).unwrap())]);
        assert_eq!(rej_dist(&rejecting, &d).unwrap(), rational_int(1));
        assert_eq!(err_dist(&rejecting, &f, &d).unwrap(), rational_int(0));
        assert_eq!(rej_dist(&SelectAll, &d).unwrap(), rational_int(0));
    }

    #[test]
    fn empirical_rates() {
        let sample = Sample::from_reals(&[0.0, 1.0, 2.0, 3.0]).unwrap();
        let sc = sc_interval(0.0, 2.0, vec![]);
        let f = Concept::Interval(Interval::new(0.0, 1.0).unwrap());
        assert_eq!(err_empirical(&sc, &sc.base, &sample).unwrap(), rational_int(0));
        assert_eq!(err_empirical(&sc, &f, &sample).unwrap(), rational(1, 4));
        let none =
            SelectiveClassifier::with_committee(sc.base.clone(), vec![Concept::Threshold(Threshold::all_ones())])
                .unwrap();
        // Committee member all-ones rejects where the base says 0.
        assert_eq!(rej_empirical(&none, &sample).unwrap(), rational(1, 4));
        assert_eq!(rej_empirical(&SelectAll, &sample).unwrap(), rational_int(0));
        assert_eq!(
            rej_empirical(&PointSet::including([]), &sample).unwrap(),
            rational_int(1)
        );
        assert_eq!(
            err_empirical(
                &crate::domain::Restricted::new(&sc.base, &PointSet::including([])),
                &f,
                &sample
            )
            .unwrap(),
            rational_int(0)
        );
    }

    #[test]
    fn hamming_and_false_rejections() {
        let z = Sample::from_indices(&[0, 1, 2, 3]);
        let xt = Sample::from_indices(&[0, 1, 7, 8]);
        assert_eq!(hamming_delta(&z, &z).unwrap(), rational_int(0));
        assert_eq!(
            hamming_delta(&z, &Sample::from_indices(&[4, 5, 6, 7])).unwrap(),
            rational_int(1)
        );
        assert_eq!(hamming_delta(&z, &xt).unwrap(), rational(1, 2));
        assert_eq!(false_rejection_rate(&z, &z, &SelectAll).unwrap(), rational_int(0));
        let none = PointSet::including([]);
        assert_eq!(
            false_rejection_rate(&z, &z, &none).unwrap(),
            rej_empirical(&none, &z).unwrap()
        );
        assert_eq!(
            false_rejection_rate(&z, &Sample::from_indices(&[4, 5, 6, 7]), &none).unwrap(),
            rational_int(0)
        );
        assert!(hamming_delta(&z, &Sample::from_indices(&[1])).is_err());
    }

    #[test]
    fn labeled_distributions_and_massart() {
        let p = uniform(0, 4);
        let f = Concept::Ones(crate::concepts::OnesConcept::new([1, 2]));
        let eta = |x: &Point| match x {
            Point::Discrete(i) => rational(*i as i64, 10),
            _ => unreachable!(),
        };
        let m = massart_distribution(&p, &f, eta).unwrap();
        assert_eq!(m.marginal(), p);
        assert_eq!(massart_opt(&p, eta), rational(3, 20));
        assert_eq!(concept_error_labeled(&f, &m).unwrap(), massart_opt(&p, eta));
        let sc = SelectiveClassifier::unrestricted(f.clone());
        assert_eq!(err_labeled_dist(&sc, &m).unwrap(), rational(3, 20));
        assert_eq!(rej_labeled_dist(&sc, &m).unwrap(), rational_int(0));
        assert!(massart_distribution(&p, &f, |_| rational(1, 2)).is_err());
    }
}
