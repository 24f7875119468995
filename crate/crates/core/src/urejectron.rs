//! Label-free selection: a committee of concept pairs, each pair chosen to
//! disagree on many selected test points while agreeing on the training
//! points. A point is selected iff every pair agrees there. The objective
//! for a pair is
//!
//! ```text
//! s_t(c, c') = |{x̃ in S_t : c(x̃) != c'(x̃)}| / m  -  Λ · |{x : c(x) != c'(x)}| / n
//! ```
//!
//! maximized by one DIS-ERM call on training points labeled 0 (weight
//! `Λ·m/n`) and selected test points labeled 1 (weight 1).
//!
//! Also here: the one-shot score-and-threshold selector.

use std::cmp::Ordering;

use crate::concepts::{erm_dis, ConceptClass, DisagreementConcept};
use crate::domain::{
    fraction, rational_int, Concept, GuaranteeMode, Label, Point, PointKind, Rational, Sample, Selector,
    WeightedLabeledSample,
};
use crate::error::{Error, Result};
use crate::rejectron::{objective, resolve, RejectronConfig};

/// Output of the unsupervised committee loop.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionSet {
    pub pairs: Vec<(Concept, Concept)>,
    pub epsilon_used: f64,
    pub lambda_used: Rational,
    pub mode: GuaranteeMode,
}

impl PredictionSet {
    pub fn everything() -> Self {
        PredictionSet {
            pairs: Vec::new(),
            epsilon_used: 0.0,
            lambda_used: rational_int(1),
            mode: GuaranteeMode::Guarantee,
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, p: &Point) -> Result<bool> {
        for (c, c2) in &self.pairs {
            if c.predict(p)? != c2.predict(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Selector for PredictionSet {
    fn selects(&self, p: &Point) -> Result<bool> {
        self.contains(p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairRound {
    pub candidate: DisagreementConcept,
    pub score: Rational,
    pub test_disagreements: usize,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct URejectronRun {
    pub set: PredictionSet,
    pub rounds: Vec<PairRound>,
}

/// Training points labeled 0 with weight `lambda`, selected test points
/// labeled 1 with weight 1.
pub fn build_dis_erm_dataset(train: &Sample, test_in_s: &Sample, lambda: &Rational) -> Result<WeightedLabeledSample> {
    let mut data = WeightedLabeledSample::new();
    for p in train {
        data.push(*p, Label::Zero, lambda.clone())?;
    }
    let one = rational_int(1);
    for p in test_in_s {
        data.push(*p, Label::One, one.clone())?;
    }
    Ok(data)
}

/// `s_t(c, c')` for the region `so_far`.
pub fn pair_score(
    c: &Concept,
    c_prime: &Concept,
    so_far: &PredictionSet,
    train: &Sample,
    test: &Sample,
    lambda: &Rational,
) -> Result<Rational> {
    if train.is_empty() {
        return Err(Error::EmptyData("pair_score"));
    }
    let mut a = 0;
    for p in test {
        if so_far.contains(p)? && c.predict(p)? != c_prime.predict(p)? {
            a += 1;
        }
    }
    let mut b = 0;
    for p in train {
        if c.predict(p)? != c_prime.predict(p)? {
            b += 1;
        }
    }
    Ok(objective(a, test.len(), b, train.len(), lambda))
}

pub fn urejectron(class: &ConceptClass, train: &Sample, test: &Sample, cfg: &RejectronConfig) -> Result<PredictionSet> {
    urejectron_traced(class, train, test, cfg).map(|r| r.set)
}

pub fn urejectron_traced(
    class: &ConceptClass,
    train: &Sample,
    test: &Sample,
    cfg: &RejectronConfig,
) -> Result<URejectronRun> {
    train.expect_kind(class.point_kind())?;
    test.expect_kind(class.point_kind())?;
    let (n, m) = (train.len(), test.len());
    let r = resolve(cfg, n, m)?;
    let mut in_s = vec![true; m];
    let mut pairs = Vec::new();
    let mut rounds = Vec::new();
    if m > 0 {
        loop {
            let mut data = WeightedLabeledSample::new();
            for p in train {
                data.push(*p, Label::Zero, r.train_weight.clone())?;
            }
            for (i, p) in test.iter().enumerate() {
                if in_s[i] {
                    data.push(*p, Label::One, rational_int(1))?;
                }
            }
            let d = erm_dis(class, &data)?;
            let d_test = d.predict_all(test)?;
            let a = (0..m).filter(|&i| in_s[i] && d_test[i].is_one()).count();
            let mut b = 0;
            for p in train {
                if d.predict(p)?.is_one() {
                    b += 1;
                }
            }
            let s = objective(a, m, b, n, &r.lambda);
            let accepted = s > r.epsilon;
            rounds.push(PairRound {
                candidate: d.clone(),
                score: s,
                test_disagreements: a,
                accepted,
            });
            if !accepted {
                break;
            }
            if pairs.len() >= r.cap {
                return Err(Error::IterationCapExceeded { cap: r.cap });
            }
            for i in 0..m {
                if d_test[i].is_one() {
                    in_s[i] = false;
                }
            }
            pairs.push(d.into_parts());
        }
    }
    Ok(URejectronRun {
        set: PredictionSet {
            pairs,
            epsilon_used: cfg.epsilon,
            lambda_used: r.lambda,
            mode: r.mode,
        },
        rounds,
    })
}

/// Which cloud a scored point was drawn from, so that leave-one-out scorers
/// can skip the point itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Train,
    Test,
    Other,
}

/// Real-valued score over points; higher means more train-like.
pub trait Scorer {
    fn name(&self) -> &str;
    fn score(&self, p: &Point, origin: Origin) -> Result<f64>;
}

/// Wraps a closure as a scorer that ignores the origin.
pub struct FnScorer<F> {
    name: String,
    f: F,
}

impl<F: Fn(&Point) -> f64> FnScorer<F> {
    pub fn new(name: impl Into<String>, f: F) -> Self {
        FnScorer { name: name.into(), f }
    }
}

impl<F: Fn(&Point) -> f64> Scorer for FnScorer<F> {
    fn name(&self) -> &str {
        &self.name
    }

    fn score(&self, p: &Point, _origin: Origin) -> Result<f64> {
        Ok((self.f)(p))
    }
}

/// Nearest-neighbor distance ratio `d_test / (d_train + d_test)`, where
/// `d_train` and `d_test` are the distances from the point to the closest
/// training and test point. A point scored as a member of one cloud skips
/// one exact copy of itself in that cloud. Both distances zero scores ½.
#[derive(Debug, Clone)]
pub struct NearestNeighborScorer {
    kind: PointKind,
    train: Cloud,
    test: Cloud,
}

#[derive(Debug, Clone)]
enum Cloud {
    /// Sorted values, for binary search.
    Line(Vec<f64>),
    Points(Vec<Point>),
}

impl Cloud {
    fn new(sample: &Sample) -> Self {
        match sample.kind() {
            Some(PointKind::Real1D) => {
                let mut xs: Vec<f64> = sample
                    .iter()
                    .map(|p| match p {
                        Point::Real1D(x) => *x,
                        _ => unreachable!("sample is homogeneous"),
                    })
                    .collect();
                xs.sort_by(f64::total_cmp);
                Cloud::Line(xs)
            }
            _ => Cloud::Points(sample.points().to_vec()),
        }
    }

    /// Distance to the nearest element, optionally ignoring one copy of `p`.
    fn nearest(&self, p: &Point, skip_self: bool) -> Result<f64> {
        match self {
            Cloud::Line(xs) => {
                let Point::Real1D(x) = *p else {
                    return Err(Error::KindMismatch {
                        expected: PointKind::Real1D,
                        found: p.kind(),
                    });
                };
                let lo = xs.partition_point(|v| v.total_cmp(&x) == Ordering::Less);
                let hi = xs.partition_point(|v| v.total_cmp(&x) != Ordering::Greater);
                let copies = hi - lo - usize::from(skip_self && hi > lo);
                if copies > 0 {
                    return Ok(0.0);
                }
                let left = lo.checked_sub(1).map(|i| x - xs[i]);
                let right = xs.get(hi).map(|v| v - x);
                Ok(match (left, right) {
                    (Some(a), Some(b)) => a.min(b),
                    (Some(a), None) => a,
                    (None, Some(b)) => b,
                    (None, None) => f64::INFINITY,
                })
            }
            Cloud::Points(ps) => {
                let mut skipped = !skip_self;
                let mut best = f64::INFINITY;
                for q in ps {
                    if !skipped && q == p {
                        skipped = true;
                        continue;
                    }
                    best = best.min(p.distance(q)?);
                }
                Ok(best)
            }
        }
    }
}

impl NearestNeighborScorer {
    pub fn new(train: &Sample, test: &Sample) -> Result<Self> {
        let kind = train
            .kind()
            .or(test.kind())
            .ok_or(Error::EmptyData("nearest-neighbor scorer"))?;
        train.expect_kind(kind)?;
        test.expect_kind(kind)?;
        Ok(NearestNeighborScorer {
            kind,
            train: Cloud::new(train),
            test: Cloud::new(test),
        })
    }
}

impl Scorer for NearestNeighborScorer {
    fn name(&self) -> &str {
        "nearest-neighbor-ratio"
    }

    fn score(&self, p: &Point, origin: Origin) -> Result<f64> {
        p.expect_kind(self.kind)?;
        let d_train = self.train.nearest(p, origin == Origin::Train)?;
        let d_test = self.test.nearest(p, origin == Origin::Test)?;
        Ok(match (d_train.is_infinite(), d_test.is_infinite()) {
            (true, true) => 0.5,
            (true, false) => 0.0,
            (false, true) => 1.0,
            _ if d_train + d_test == 0.0 => 0.5,
            _ => d_test / (d_train + d_test),
        })
    }
}

/// Points with score `>= tau` are selected.
#[derive(Debug, Clone, PartialEq)]
pub struct Distinguished {
    pub tau: f64,
    pub train_scores: Vec<f64>,
    pub test_scores: Vec<f64>,
    pub train_selected: Vec<bool>,
    pub test_selected: Vec<bool>,
    pub rej_train: Rational,
    pub rej_test: Rational,
}

pub fn simple_distinguisher(train: &Sample, test: &Sample, scorer: &dyn Scorer, tau: f64) -> Result<Distinguished> {
    let train_scores = score_all(scorer, train, Origin::Train)?;
    let test_scores = score_all(scorer, test, Origin::Test)?;
    Ok(threshold_scores(train_scores, test_scores, tau))
}

pub fn score_all(scorer: &dyn Scorer, sample: &Sample, origin: Origin) -> Result<Vec<f64>> {
    sample.iter().map(|p| scorer.score(p, origin)).collect()
}

/// The selection at `tau` given precomputed scores; lets a τ sweep score
/// each point once.
pub fn threshold_scores(train_scores: Vec<f64>, test_scores: Vec<f64>, tau: f64) -> Distinguished {
    let train_selected: Vec<bool> = train_scores.iter().map(|&s| s >= tau).collect();
    let test_selected: Vec<bool> = test_scores.iter().map(|&s| s >= tau).collect();
    let rej = |sel: &[bool]| fraction(sel.iter().filter(|s| !**s).count(), sel.len());
    Distinguished {
        tau,
        rej_train: rej(&train_selected),
        rej_test: rej(&test_selected),
        train_scores,
        test_scores,
        train_selected,
        test_selected,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concepts::FiniteClass;

    #[test]
    fn dis_dataset_construction() {
        let train = Sample::from_indices(&[0]);
        let test = Sample::from_indices(&[1, 2]);
        let data = build_dis_erm_dataset(&train, &test, &rational_int(2)).unwrap();
        let got: Vec<_> = data
            .entries()
            .iter()
            .map(|e| (e.point, e.label, e.weight.clone()))
            .collect();
        assert_eq!(
            got,
            vec![
                (Point::Discrete(0), Label::Zero, rational_int(2)),
                (Point::Discrete(1), Label::One, rational_int(1)),
                (Point::Discrete(2), Label::One, rational_int(1)),
            ]
        );
        assert_eq!(
            build_dis_erm_dataset(&train, &Sample::empty(), &rational_int(2))
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn test_equal_to_train_selects_everything() {
        let train = Sample::from_reals(&[0.0, 0.5, 1.0]).unwrap();
        let set = urejectron(&ConceptClass::Interval, &train, &train, &RejectronConfig::new(0.0)).unwrap();
        assert!(set.is_empty());
    }

    #[test]
    fn finite_worked_instance() {
        let class = ConceptClass::Finite(FiniteClass::all_labelings(2).unwrap());
        let train = Sample::from_indices(&[0; 10]);
        let test = Sample::from_indices(&[1; 10]);
        let set = urejectron(&class, &train, &test, &RejectronConfig::new(0.1)).unwrap();
        assert_eq!(set.len(), 1);
        assert!(set.contains(&Point::Discrete(0)).unwrap());
        assert!(!set.contains(&Point::Discrete(1)).unwrap());
    }

    #[test]
    fn threshold_far_cluster_rejected() {
        let near: Vec<f64> = (0..10).map(|i| i as f64 / 9.0).collect();
        let train = Sample::from_reals(&near).unwrap();
        let mut t: Vec<f64> = near[..5].to_vec();
        t.extend((0..5).map(|i| 10.0 + i as f64 / 4.0));
        let test = Sample::from_reals(&t).unwrap();
        let set = urejectron(&ConceptClass::Threshold, &train, &test, &RejectronConfig::new(0.3)).unwrap();
        for &x in &t {
            assert_eq!(set.contains(&Point::Real1D(x)).unwrap(), x < 5.0, "x = {x}");
        }
        for p in &train {
            assert!(set.contains(p).unwrap());
        }
    }

    #[test]
    fn distinguisher_examples() {
        let train = Sample::from_reals(&[0.0, 1.0]).unwrap();
        let test = Sample::from_reals(&[5.0, 6.0]).unwrap();
        let fixed = FnScorer::new("fixed", |p: &Point| {
            if matches!(p, Point::Real1D(x) if *x < 2.0) {
                0.9
            } else {
                0.2
            }
        });
        let d = simple_distinguisher(&train, &test, &fixed, 0.5).unwrap();
        assert_eq!(d.train_selected, vec![true, true]);
        assert_eq!(d.test_selected, vec![false, false]);
        let all = simple_distinguisher(&train, &test, &fixed, f64::NEG_INFINITY).unwrap();
        assert_eq!(all.rej_train, rational_int(0));
        assert_eq!(all.rej_test, rational_int(0));
    }

    #[test]
    fn nearest_neighbor_scores() {
        let train = Sample::from_reals(&[0.0, 1.0, 2.0]).unwrap();
        let test = Sample::from_reals(&[2.0, 10.0, 10.0]).unwrap();
        let s = NearestNeighborScorer::new(&train, &test).unwrap();
        // Repeated test point: its other copy is at distance 0.
        assert_eq!(s.score(&Point::Real1D(10.0), Origin::Test).unwrap(), 0.0);
        // Train point 0: next train point at 1, nearest test at 2.
        assert!((s.score(&Point::Real1D(0.0), Origin::Train).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(s.score(&Point::Real1D(2.0), Origin::Other).unwrap(), 0.5);
        // The same answers from the generic (non-sorted) path.
        let disc = NearestNeighborScorer::new(&Sample::from_indices(&[0, 1]), &Sample::from_indices(&[5, 5])).unwrap();
        assert_eq!(disc.score(&Point::Discrete(5), Origin::Test).unwrap(), 0.0);
        assert_eq!(disc.score(&Point::Discrete(0), Origin::Train).unwrap(), 0.5);
        assert!(s.score(&Point::Discrete(0), Origin::Other).is_err());
    }

    #[test]
    fn scorer_paths_agree() {
        use rand::{Rng, SeedableRng};
        let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let a: Vec<f64> = (0..r.random_range(1..8)).map(|_| r.random_range(0..6) as f64).collect();
            let b: Vec<f64> = (0..r.random_range(1..8)).map(|_| r.random_range(0..6) as f64).collect();
            let (sa, sb) = (Sample::from_reals(&a).unwrap(), Sample::from_reals(&b).unwrap());
            let fast = NearestNeighborScorer::new(&sa, &sb).unwrap();
            let slow = NearestNeighborScorer {
                kind: PointKind::Real1D,
                train: Cloud::Points(sa.points().to_vec()),
                test: Cloud::Points(sb.points().to_vec()),
            };
            for p in sa.iter().chain(sb.iter()) {
                for o in [Origin::Train, Origin::Test, Origin::Other] {
                    assert_eq!(fast.score(p, o).unwrap(), slow.score(p, o).unwrap());
                }
            }
        }
    }

    #[test]
    fn rejection_is_monotone_in_tau() {
        let train = Sample::from_reals(&[0.0, 0.3, 0.7, 1.0, 1.4]).unwrap();
        let test = Sample::from_reals(&[0.2, 3.0, 3.0, 0.9]).unwrap();
        let s = NearestNeighborScorer::new(&train, &test).unwrap();
        let mut prev = (rational_int(0), rational_int(0));
        for k in 0..=20 {
            let d = simple_distinguisher(&train, &test, &s, k as f64 / 20.0).unwrap();
            assert!(d.rej_train >= prev.0 && d.rej_test >= prev.1);
            prev = (d.rej_train, d.rej_test);
        }
    }
}
