//! Supervised selective classification by iterated ERM calls.
//!
//! Each round looks for a concept `c` that agrees with the base hypothesis
//! `h` on the training points but disagrees with it on many still-selected
//! test points, and adds it to the committee. The round objective is
//!
//! ```text
//! s_t(c) = |{x̃ in S_t : c(x̃) != h(x̃)}| / m  -  Λ · |{x : c(x) != h(x)}| / n
//! ```
//!
//! and it is maximized with a single weighted ERM call: training points
//! labeled by `h` with weight `Λ·m/n`, selected test points labeled `1 - h`
//! with weight 1. The weighted error of `c` on that data is
//! `|S_t ∩ test| - m·s_t(c)`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::concepts::{erm, ConceptClass};
use crate::domain::{
    rational_from_f64, rational_int, Concept, GuaranteeMode, Label, Rational, Sample, SelectiveClassifier,
    WeightedLabeledSample,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RejectronConfig {
    pub epsilon: f64,
    /// `None` means `n + 1`.
    pub lambda: Option<Rational>,
    /// `None` means `⌊1/ε⌋` (or `m` when `ε = 0`).
    pub max_iterations: Option<usize>,
}

impl RejectronConfig {
    pub fn new(epsilon: f64) -> Self {
        RejectronConfig {
            epsilon,
            lambda: None,
            max_iterations: None,
        }
    }

    pub fn with_lambda(mut self, lambda: Rational) -> Self {
        self.lambda = Some(lambda);
        self
    }
}

/// One ERM round: the maximizer found and its score.
#[derive(Debug, Clone, PartialEq)]
pub struct Round {
    pub candidate: Concept,
    pub score: Rational,
    /// Selected test points the candidate disagrees with `h` on.
    pub test_disagreements: usize,
    /// Whether the candidate joined the committee (`score > ε`).
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RejectronRun {
    pub classifier: SelectiveClassifier,
    /// Every round including the final, rejected one.
    pub rounds: Vec<Round>,
}

/// Parameters resolved from a config and the sample sizes.
#[derive(Debug, Clone)]
pub(crate) struct Resolved {
    pub epsilon: Rational,
    pub lambda: Rational,
    /// Weight on each training entry of the reduction dataset.
    pub train_weight: Rational,
    pub cap: usize,
    pub mode: GuaranteeMode,
}

pub(crate) fn resolve(cfg: &RejectronConfig, n: usize, m: usize) -> Result<Resolved> {
    if !cfg.epsilon.is_finite() || cfg.epsilon < 0.0 {
        return Err(Error::invalid(
            "epsilon",
            format!("{} is not a finite value >= 0", cfg.epsilon),
        ));
    }
    if n == 0 {
        return Err(Error::EmptyData("training sample"));
    }
    let lambda = cfg
        .lambda
        .clone()
        .unwrap_or_else(|| Rational::from_integer(BigInt::from(n + 1)));
    if lambda <= Rational::zero() {
        return Err(Error::invalid("lambda", "must be positive"));
    }
    let epsilon = rational_from_f64(cfg.epsilon)?;
    let cap = cfg
        .max_iterations
        .unwrap_or_else(|| iteration_bound(cfg.epsilon).unwrap_or(m));
    let train_weight = &lambda * Rational::new(BigInt::from(m), BigInt::from(n));
    let mode = if m == n {
        GuaranteeMode::Guarantee
    } else {
        GuaranteeMode::Exploratory
    };
    Ok(Resolved {
        epsilon,
        lambda,
        train_weight,
        cap,
        mode,
    })
}

/// `⌊1/ε⌋`, or `None` for `ε = 0`.
pub fn iteration_bound(epsilon: f64) -> Option<usize> {
    if epsilon <= 0.0 {
        return None;
    }
    let inv = Rational::from_integer(1.into()) / rational_from_f64(epsilon).ok()?;
    inv.floor().to_integer().to_usize()
}

/// Training points labeled `h(x)` with weight `lambda`, then selected test
/// points labeled `1 - h(x̃)` with weight 1.
pub fn build_rejectron_erm_dataset(
    train: &Sample,
    h: &Concept,
    test_in_s: &Sample,
    lambda: &Rational,
) -> Result<WeightedLabeledSample> {
    let mut data = WeightedLabeledSample::new();
    for p in train {
        data.push(*p, h.predict(p)?, lambda.clone())?;
    }
    let one = rational_int(1);
    for p in test_in_s {
        data.push(*p, h.predict(p)?.flip(), one.clone())?;
    }
    Ok(data)
}

/// `s_t(c)` for the selection region of `sc_so_far`. With `|train| != |test|`
/// the two error terms are normalized by their own sample sizes.
pub fn score(
    c: &Concept,
    h: &Concept,
    sc_so_far: &SelectiveClassifier,
    train: &Sample,
    test: &Sample,
    lambda: &Rational,
) -> Result<Rational> {
    if train.is_empty() {
        return Err(Error::EmptyData("score"));
    }
    let mut test_dis = 0usize;
    for p in test {
        if sc_so_far.membership(p)? && c.predict(p)? != h.predict(p)? {
            test_dis += 1;
        }
    }
    let mut train_dis = 0usize;
    for p in train {
        if c.predict(p)? != h.predict(p)? {
            train_dis += 1;
        }
    }
    Ok(objective(test_dis, test.len(), train_dis, train.len(), lambda))
}

/// `a/m - Λ·b/n` with `0/0 = 0`.
pub(crate) fn objective(a: usize, m: usize, b: usize, n: usize, lambda: &Rational) -> Rational {
    crate::domain::fraction(a, m) - lambda * crate::domain::fraction(b, n)
}

pub fn rejectron(
    class: &ConceptClass,
    train: &Sample,
    labels: &[Label],
    test: &Sample,
    cfg: &RejectronConfig,
) -> Result<SelectiveClassifier> {
    rejectron_traced(class, train, labels, test, cfg).map(|r| r.classifier)
}

/// `h = erm(train, labels)`, then the committee loop.
pub fn rejectron_traced(
    class: &ConceptClass,
    train: &Sample,
    labels: &[Label],
    test: &Sample,
    cfg: &RejectronConfig,
) -> Result<RejectronRun> {
    let h = erm(class, &WeightedLabeledSample::unit(train, labels)?)?;
    rejectron_with_base(class, h, train, test, cfg)
}

/// The committee loop around a given base hypothesis.
pub fn rejectron_with_base(
    class: &ConceptClass,
    h: Concept,
    train: &Sample,
    test: &Sample,
    cfg: &RejectronConfig,
) -> Result<RejectronRun> {
    train.expect_kind(class.point_kind())?;
    test.expect_kind(class.point_kind())?;
    let (n, m) = (train.len(), test.len());
    let r = resolve(cfg, n, m)?;
    let h_train = h.predict_all(train)?;
    let h_test = h.predict_all(test)?;
    let mut in_s = vec![true; m];
    let mut committee = Vec::new();
    let mut rounds = Vec::new();
    if m > 0 {
        loop {
            let mut data = WeightedLabeledSample::new();
            for (p, &l) in train.iter().zip(&h_train) {
                data.push(*p, l, r.train_weight.clone())?;
            }
            for (i, p) in test.iter().enumerate() {
                if in_s[i] {
                    data.push(*p, h_test[i].flip(), rational_int(1))?;
                }
            }
            let c = erm(class, &data)?;
            let c_test = c.predict_all(test)?;
            let a = (0..m).filter(|&i| in_s[i] && c_test[i] != h_test[i]).count();
            let mut b = 0;
            for (p, &l) in train.iter().zip(&h_train) {
                if c.predict(p)? != l {
                    b += 1;
                }
            }
            let s = objective(a, m, b, n, &r.lambda);
            let accepted = s > r.epsilon;
            rounds.push(Round {
                candidate: c.clone(),
                score: s,
                test_disagreements: a,
                accepted,
            });
            if !accepted {
                break;
            }
            if committee.len() >= r.cap {
                return Err(Error::IterationCapExceeded { cap: r.cap });
            }
            for i in 0..m {
                if c_test[i] != h_test[i] {
                    in_s[i] = false;
                }
            }
            committee.push(c);
        }
    }
    let classifier = SelectiveClassifier {
        base: h,
        committee,
        epsilon_used: cfg.epsilon,
        lambda_used: r.lambda,
        mode: r.mode,
    };
    Ok(RejectronRun { classifier, rounds })
}

fn check_dn(d: usize, n: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::invalid("d", "VC dimension must be positive"));
    }
    if n == 0 {
        return Err(Error::invalid("n", "sample size must be positive"));
    }
    Ok(())
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("delta", format!("{delta} is outside (0, 1]")))
    }
}

/// `√((2d/n)·log₂(2n)) + log₂(1/δ)/n`.
pub fn recommended_epsilon_transductive(d: usize, n: usize, delta: f64) -> Result<f64> {
    check_dn(d, n)?;
    check_delta(delta)?;
    let (d, n) = (d as f64, n as f64);
    Ok((2.0 * d / n * (2.0 * n).log2()).sqrt() + (1.0 / delta).log2() / n)
}

/// `√(8d·ln(2n)/n) + 8·ln(16/δ)/n`.
pub fn recommended_epsilon_pq(d: usize, n: usize, delta: f64) -> Result<f64> {
    check_dn(d, n)?;
    check_delta(delta)?;
    let (d, n) = (d as f64, n as f64);
    Ok((8.0 * d * (2.0 * n).ln() / n).sqrt() + 8.0 * (16.0 / delta).ln() / n)
}

/// `√(8d·ln(2n)/n) + 8·ln(32/δ)/n`, the PQ rate after denoising.
pub fn recommended_epsilon_massart(d: usize, n: usize, delta: f64) -> Result<f64> {
    check_dn(d, n)?;
    check_delta(delta)?;
    let (d, n) = (d as f64, n as f64);
    Ok((8.0 * d * (2.0 * n).ln() / n).sqrt() + 8.0 * (32.0 / delta).ln() / n)
}

/// `ε* = 4√((d·ln(2n) + ln(48/δ))/n)` and `Λ* = √(1/(8η + ε*²))`.
pub fn agnostic_params(d: usize, n: usize, delta: f64, eta: f64) -> Result<(f64, Rational)> {
    check_dn(d, n)?;
    check_delta(delta)?;
    let (df, nf) = (d as f64, n as f64);
    let eps = 4.0 * ((df * (2.0 * nf).ln() + (48.0 / delta).ln()) / nf).sqrt();
    Ok((eps, agnostic_lambda(eps, eta)?))
}

/// `Λ* = √(1/(8η + ε²))` for a given `ε`, as an exact rational image of the
/// float value.
pub fn agnostic_lambda(epsilon: f64, eta: f64) -> Result<Rational> {
    if !(0.0..1.0).contains(&eta) {
        return Err(Error::invalid("eta", format!("{eta} is outside [0, 1)")));
    }
    if !epsilon.is_finite() || epsilon < 0.0 {
        return Err(Error::invalid("epsilon", "must be finite and >= 0"));
    }
    let denom = 8.0 * eta + epsilon * epsilon;
    if denom == 0.0 {
        return Err(Error::invalid(
            "eta",
            "eta = 0 with epsilon = 0 gives an unbounded weight",
        ));
    }
    rational_from_f64((1.0 / denom).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MassartConfig {
    pub eta: f64,
    pub delta: f64,
    pub big_n: usize,
}

impl MassartConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..0.5).contains(&self.eta) {
            return Err(Error::invalid("eta", "Massart noise needs 0 <= eta < 1/2"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::invalid("delta", "must lie in (0, 1)"));
        }
        if self.big_n == 0 {
            return Err(Error::invalid("big_n", "must be positive"));
        }
        Ok(())
    }
}

/// `⌈constant · (d·n² + ln(2/δ)) / (δ²(1 - 2η)²)⌉` extra samples.
pub fn massart_extra_samples(d: usize, n: usize, delta: f64, eta: f64, constant: f64) -> Result<usize> {
    check_dn(d, n)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid("delta", "must lie in (0, 1)"));
    }
    if !(0.0..0.5).contains(&eta) {
        return Err(Error::invalid("eta", "Massart noise needs 0 <= eta < 1/2"));
    }
    if !(constant.is_finite() && constant > 0.0) {
        return Err(Error::invalid("constant", "must be positive"));
    }
    let (d, n) = (d as f64, n as f64);
    let gap = 1.0 - 2.0 * eta;
    let v = constant * (d * n * n + (2.0 / delta).ln()) / (delta * delta * gap * gap);
    Ok(v.ceil() as usize)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MassartRun {
    /// `ĥ`, fit on the extra noisy sample.
    pub denoiser: Concept,
    /// `ĥ` applied to the holdout points.
    pub relabeled: Vec<Label>,
    pub run: RejectronRun,
}

/// Fit `ĥ` on the extra noisy sample, relabel the holdout with it and run
/// the committee loop on `(holdout, ĥ(holdout))`. The holdout's own noisy
/// labels are not used.
#[allow(clippy::too_many_arguments)]
pub fn massart_denoise_and_run(
    class: &ConceptClass,
    extra_train: &Sample,
    extra_labels: &[Label],
    holdout: &Sample,
    _holdout_labels: &[Label],
    test: &Sample,
    cfg: &MassartConfig,
    rej_cfg: &RejectronConfig,
) -> Result<MassartRun> {
    cfg.validate()?;
    if extra_train.len() != cfg.big_n {
        return Err(Error::LengthMismatch {
            context: "extra sample vs big_n",
            left: extra_train.len(),
            right: cfg.big_n,
        });
    }
    let denoiser = erm(class, &WeightedLabeledSample::unit(extra_train, extra_labels)?)?;
    let relabeled = denoiser.predict_all(holdout)?;
    let run = rejectron_traced(class, holdout, &relabeled, test, rej_cfg)?;
    Ok(MassartRun {
        denoiser,
        relabeled,
        run,
    })
}
