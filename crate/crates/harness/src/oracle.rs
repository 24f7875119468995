//! Brute-force references and random instance generators for the exact
//! checks.

use std::collections::BTreeSet;

use rand::Rng;
use redaction::concepts::{FiniteClass, FiniteConcept};
use redaction::domain::{rational, Concept, Label, Point, Rational, Sample, SelectiveClassifier};
use redaction::error::Result;
use redaction::metrics::{rej_dist, DiscreteDistribution, PointSet};
use redaction::rejectron::{rejectron_traced, score, RejectronConfig};
use redaction::urejectron::{pair_score, urejectron_traced, PredictionSet};

/// A random class of at most `max_concepts` label vectors over at most
/// `max_points` indices.
pub fn random_finite_class(rng: &mut impl Rng, max_points: usize, max_concepts: usize) -> FiniteClass {
    let size = rng.random_range(2..=max_points);
    let k = rng.random_range(1..=max_concepts);
    let concepts = (0..k)
        .map(|_| FiniteConcept::new((0..size).map(|_| Label::from_bool(rng.random_bool(0.5))).collect()))
        .collect();
    FiniteClass::new(size, concepts).expect("label vectors match the domain")
}

pub fn random_indices(rng: &mut impl Rng, domain: usize, count: usize) -> Sample {
    Sample::from_indices(&(0..count).map(|_| rng.random_range(0..domain)).collect::<Vec<_>>())
}

fn concepts(class: &FiniteClass) -> impl Iterator<Item = Concept> + '_ {
    class.concepts().iter().cloned().map(Concept::Finite)
}

/// `max_c s_t(c)` by enumeration.
pub fn max_score(
    class: &FiniteClass,
    h: &Concept,
    so_far: &SelectiveClassifier,
    train: &Sample,
    test: &Sample,
    lambda: &Rational,
) -> Result<Rational> {
    let mut best: Option<Rational> = None;
    for c in concepts(class) {
        let s = score(&c, h, so_far, train, test, lambda)?;
        best = Some(match best {
            Some(b) if b >= s => b,
            _ => s,
        });
    }
    Ok(best.expect("finite classes are nonempty"))
}

/// `max_{c, c'} s_t(c, c')` by enumeration.
pub fn max_pair_score(
    class: &FiniteClass,
    so_far: &PredictionSet,
    train: &Sample,
    test: &Sample,
    lambda: &Rational,
) -> Result<Rational> {
    let mut best: Option<Rational> = None;
    for c in concepts(class) {
        for c2 in concepts(class) {
            let s = pair_score(&c, &c2, so_far, train, test, lambda)?;
            best = Some(match best {
                Some(b) if b >= s => b,
                _ => s,
            });
        }
    }
    Ok(best.expect("finite classes are nonempty"))
}

/// Outcome of comparing every round of a run with the enumerated maximum.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RoundCheck {
    pub rounds: usize,
    pub mismatches: usize,
    /// `(iterations, ⌊1/ε⌋)` of the run.
    pub iterations: (usize, usize),
}

pub fn check_rejectron_rounds(
    class: &FiniteClass,
    train: &Sample,
    labels: &[Label],
    test: &Sample,
    epsilon: f64,
) -> Result<RoundCheck> {
    let cls = redaction::concepts::ConceptClass::Finite(class.clone());
    let run = rejectron_traced(&cls, train, labels, test, &RejectronConfig::new(epsilon))?;
    let h = &run.classifier.base;
    let lambda = &run.classifier.lambda_used;
    let mut out = RoundCheck {
        iterations: (
            run.classifier.iterations(),
            redaction::rejectron::iteration_bound(epsilon).unwrap_or(usize::MAX),
        ),
        ..RoundCheck::default()
    };
    for (t, round) in run.rounds.iter().enumerate() {
        let so_far = SelectiveClassifier::with_committee(h.clone(), run.classifier.committee[..t].to_vec())?;
        out.rounds += 1;
        if round.score != max_score(class, h, &so_far, train, test, lambda)? {
            out.mismatches += 1;
        }
    }
    Ok(out)
}

pub fn check_urejectron_rounds(class: &FiniteClass, train: &Sample, test: &Sample, epsilon: f64) -> Result<RoundCheck> {
    let cls = redaction::concepts::ConceptClass::Finite(class.clone());
    let run = urejectron_traced(&cls, train, test, &RejectronConfig::new(epsilon))?;
    let lambda = &run.set.lambda_used;
    let mut out = RoundCheck {
        iterations: (
            run.set.len(),
            redaction::rejectron::iteration_bound(epsilon).unwrap_or(usize::MAX),
        ),
        ..RoundCheck::default()
    };
    for (t, round) in run.rounds.iter().enumerate() {
        let so_far = PredictionSet {
            pairs: run.set.pairs[..t].to_vec(),
            ..PredictionSet::everything()
        };
        out.rounds += 1;
        if round.score != max_pair_score(class, &so_far, train, test, lambda)? {
            out.mismatches += 1;
        }
    }
    Ok(out)
}

/// A distribution over `Discrete(0..atoms)` with small integer weights, some
/// of them zero.
pub fn random_distribution(rng: &mut impl Rng, atoms: usize) -> DiscreteDistribution {
    loop {
        let w: Vec<i64> = (0..atoms)
            .map(|_| {
                if rng.random_bool(0.3) {
                    0
                } else {
                    rng.random_range(1..10)
                }
            })
            .collect();
        let total: i64 = w.iter().sum();
        if total == 0 {
            continue;
        }
        let probs = w.iter().map(|&x| rational(x, total)).collect();
        return DiscreteDistribution::new((0..atoms).map(Point::Discrete).collect(), probs)
            .expect("weights normalize exactly");
    }
}

pub fn random_subset(rng: &mut impl Rng, atoms: usize) -> BTreeSet<Point> {
    (0..atoms)
        .filter(|_| rng.random_bool(0.5))
        .map(Point::Discrete)
        .collect()
}

/// A random reject set `R` shrunk until `rej_P(R) <= bound`, removing points
/// in random order.
pub fn reject_set_within(
    rng: &mut impl Rng,
    p: &DiscreteDistribution,
    atoms: usize,
    bound: &Rational,
) -> Result<BTreeSet<Point>> {
    let mut rejected = random_subset(rng, atoms);
    while rej_dist(&PointSet::excluding(rejected.iter().copied()), p)? > *bound {
        let k = rng.random_range(0..rejected.len());
        let victim = *rejected
            .iter()
            .nth(k)
            .expect("nonempty while above a nonnegative bound");
        rejected.remove(&victim);
    }
    Ok(rejected)
}
