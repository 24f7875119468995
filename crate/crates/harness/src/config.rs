//! Experiment configuration, as read from JSON.

use std::path::{Path, PathBuf};

use redaction::concepts::{vc_dimension, ConceptClass};
use redaction::domain::{Concept, Point};
use redaction::metrics::DiscreteDistribution;
use redaction::synthetic::{EtaFn, NoiseChannel, PointDistribution};
use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, HarnessError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistributionSpec {
    #[serde(rename = "uniform1d")]
    Uniform1D {
        lo: f64,
        hi: f64,
    },
    #[serde(rename = "normal1d")]
    Normal1D {
        mean: f64,
        std: f64,
    },
    UniformSquare {
        lo: f64,
        hi: f64,
    },
    /// Uniform over `Discrete(lo..hi)`.
    UniformIndices {
        lo: usize,
        hi: usize,
    },
    Discrete {
        support: Vec<usize>,
        probs: Vec<f64>,
    },
    /// Finitely many atoms on the real line.
    DiscreteReal {
        support: Vec<f64>,
        probs: Vec<f64>,
    },
}

impl DistributionSpec {
    pub fn build(&self) -> Result<PointDistribution, redaction::error::Error> {
        let d = match self {
            DistributionSpec::Uniform1D { lo, hi } => PointDistribution::Uniform1D { lo: *lo, hi: *hi },
            DistributionSpec::Normal1D { mean, std } => PointDistribution::Normal1D { mean: *mean, std: *std },
            DistributionSpec::UniformSquare { lo, hi } => PointDistribution::UniformSquare { lo: *lo, hi: *hi },
            DistributionSpec::UniformIndices { lo, hi } => {
                PointDistribution::Discrete(DiscreteDistribution::uniform_indices(*lo, *hi)?)
            }
            DistributionSpec::Discrete { support, probs } => PointDistribution::Discrete(
                DiscreteDistribution::from_f64(support.iter().map(|&i| Point::Discrete(i)).collect(), probs)?,
            ),
            DistributionSpec::DiscreteReal { support, probs } => PointDistribution::Discrete(
                DiscreteDistribution::from_f64(support.iter().map(|&x| Point::Real1D(x)).collect(), probs)?,
            ),
        };
        d.validate()?;
        Ok(d)
    }
}

/// How the target concept `f` is chosen for each trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TargetSpec {
    Fixed {
        concept: Concept,
    },
    /// `θ ~ U[lo, hi)`.
    RandomThreshold {
        lo: f64,
        hi: f64,
    },
    /// Endpoints are two uniform draws from `[lo, hi)`, sorted.
    RandomInterval {
        lo: f64,
        hi: f64,
    },
    /// A uniform member of a finite class.
    RandomMember,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LabelNoise {
    Massart {
        eta_fn: EtaFn,
        eta_bound: f64,
    },
    /// Each training label is flipped independently with this probability.
    RandomFlip {
        rate: f64,
    },
}

impl LabelNoise {
    pub fn is_noisy(&self) -> bool {
        match self {
            LabelNoise::Massart { eta_fn, .. } => match eta_fn {
                EtaFn::Constant { eta } => *eta > 0.0,
                EtaFn::Piecewise1D { values, .. } => values.iter().any(|&v| v > 0.0),
            },
            LabelNoise::RandomFlip { rate } => *rate > 0.0,
        }
    }
}

/// Where the test points come from. `z` always denotes an iid draw from the
/// training distribution of size `m`; scenarios that perturb it report
/// `rej_z` and false rejections against it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TestScenario {
    /// `x̃ ~ Q^m`; `Q` defaults to the training distribution.
    IidQ {
        #[serde(default)]
        distribution: Option<DistributionSpec>,
    },
    /// The first `⌈mix·m⌉` entries of `z` are replaced by repeated pool
    /// points where the base hypothesis errs.
    Spammer {
        #[serde(default)]
        pool: Option<DistributionSpec>,
        pool_size: usize,
        mix_fraction: f64,
    },
    /// Test points in the label-change gaps of the training sample.
    VersionSpaceGap,
    /// Entry-wise blend of `z` with iid draws from each source.
    Blend {
        sources: Vec<DistributionSpec>,
    },
    /// Entry-wise blend of the test sets produced by several scenarios.
    Mixture {
        scenarios: Vec<TestScenario>,
    },
    /// Replaces the training distribution, class and target.
    LowerBoundPq {
        d: usize,
    },
    LowerBoundTrans {
        d: usize,
    },
    Custom {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Algorithm {
    Rejectron,
    Urejectron,
    /// Nearest-neighbor scorer thresholded at `tau`.
    Distinguisher {
        tau: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AutoEpsilon {
    #[serde(rename = "auto-transductive")]
    Transductive,
    #[serde(rename = "auto-pq")]
    Pq,
    #[serde(rename = "auto-massart")]
    Massart,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EpsilonSpec {
    Value(f64),
    Auto(AutoEpsilon),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaKeyword {
    /// `n + 1`.
    Default,
    /// `Λ*` from `ε` and `eta`.
    Agnostic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaSpec {
    Value(f64),
    Keyword(LambdaKeyword),
}

/// Fit a denoiser on `N` extra noisy samples and relabel the training set
/// with it before running the learner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DenoiseSpec {
    #[serde(default = "one")]
    pub constant: f64,
    /// Overrides the formula for `N`.
    #[serde(default)]
    pub big_n: Option<usize>,
}

fn one() -> f64 {
    1.0
}

fn default_delta() -> f64 {
    0.1
}

fn default_epsilon() -> EpsilonSpec {
    EpsilonSpec::Auto(AutoEpsilon::Transductive)
}

fn default_lambda() -> LambdaSpec {
    LambdaSpec::Keyword(LambdaKeyword::Default)
}

fn default_trials() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub concept_class: ConceptClass,
    pub train_distribution: DistributionSpec,
    pub target: TargetSpec,
    pub test_scenario: TestScenario,
    pub algorithm: Algorithm,
    pub n: usize,
    pub m: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: EpsilonSpec,
    #[serde(default = "default_lambda")]
    pub lambda: LambdaSpec,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default)]
    pub eta: Option<f64>,
    #[serde(default)]
    pub label_noise: Option<LabelNoise>,
    #[serde(default)]
    pub denoise: Option<DenoiseSpec>,
    /// Fixed base hypothesis `h`; by default `h` is the ERM on the training
    /// labels.
    #[serde(default)]
    pub base: Option<Concept>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
}

fn fail(field: impl Into<String>, reason: impl Into<String>) -> ConfigError {
    ConfigError {
        field: field.into(),
        reason: reason.into(),
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| HarnessError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| HarnessError::Io(path.display().to_string(), e.to_string()))?;
        Self::from_json(&text)
    }

    /// The class the learner runs on; lower-bound scenarios bring their own.
    pub fn effective_class(&self) -> ConceptClass {
        match self.test_scenario {
            TestScenario::LowerBoundPq { d } => ConceptClass::ExactlyOnes {
                domain_size: 8 * self.n,
                ones: d,
            },
            TestScenario::LowerBoundTrans { d } => ConceptClass::ExactlyOnes {
                domain_size: 8 * self.n,
                ones: d,
            },
            _ => self.concept_class.clone(),
        }
    }

    /// VC dimension used by the automatic settings.
    pub fn vc_d(&self) -> Result<usize, ConfigError> {
        let vc = vc_dimension(&self.effective_class());
        if vc.d == 0 {
            return Err(fail(
                "concept_class",
                "automatic epsilon needs a class of positive VC dimension",
            ));
        }
        Ok(vc.d)
    }

    pub fn noise_channel(&self) -> Result<Option<NoiseChannel>, ConfigError> {
        match &self.label_noise {
            Some(LabelNoise::Massart { eta_fn, eta_bound }) => NoiseChannel::new(eta_fn.clone(), *eta_bound)
                .map(Some)
                .map_err(|e| fail("label_noise", e.to_string())),
            _ => Ok(None),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.trials == 0 {
            return Err(fail("trials", "must be at least 1"));
        }
        if self.n == 0 {
            return Err(fail("n", "must be at least 1"));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(fail("delta", "must lie in (0, 1]"));
        }
        self.concept_class
            .validate()
            .map_err(|e| fail("concept_class", e.to_string()))?;
        self.train_distribution
            .build()
            .map_err(|e| fail("train_distribution", e.to_string()))?;
        if let EpsilonSpec::Value(e) = self.epsilon {
            if !(e.is_finite() && e >= 0.0) {
                return Err(fail("epsilon", "must be a finite value >= 0"));
            }
        } else {
            self.vc_d().map_err(|e| fail("epsilon", e.reason))?;
        }
        match self.lambda {
            LambdaSpec::Value(l) if !(l.is_finite() && l > 0.0) => return Err(fail("lambda", "must be positive")),
            LambdaSpec::Keyword(LambdaKeyword::Agnostic) if self.eta.is_none() => {
                return Err(fail("lambda", "agnostic lambda needs `eta`"))
            }
            _ => {}
        }
        if let Some(eta) = self.eta {
            if !(0.0..0.5).contains(&eta) {
                return Err(fail("eta", "must lie in [0, 1/2)"));
            }
        }
        match &self.label_noise {
            Some(LabelNoise::RandomFlip { rate }) if !(0.0..=1.0).contains(rate) => {
                return Err(fail("label_noise.rate", "must lie in [0, 1]"))
            }
            _ => {}
        }
        self.noise_channel()?;
        if self.denoise.is_some() && !matches!(self.label_noise, Some(LabelNoise::Massart { .. })) {
            return Err(fail("denoise", "requires Massart label_noise"));
        }
        if let Some(b) = &self.base {
            if b.kind() != self.effective_class().point_kind() {
                return Err(fail("base", "point kind differs from the concept class"));
            }
        }
        if let TargetSpec::RandomMember = self.target {
            if !matches!(self.concept_class, ConceptClass::Finite(_)) {
                return Err(fail("target", "random_member needs a finite class"));
            }
        }
        if let TargetSpec::Fixed { concept } = &self.target {
            if !self.concept_class.contains(concept) {
                return Err(fail("target.concept", "not a member of concept_class"));
            }
        }
        if matches!(self.algorithm, Algorithm::Urejectron)
            && matches!(
                self.concept_class,
                ConceptClass::UnionOfIntervals { .. } | ConceptClass::Halfspace2D
            )
        {
            return Err(fail(
                "algorithm",
                "urejectron supports thresholds, intervals and finite classes",
            ));
        }
        validate_scenario(&self.test_scenario, self, "test_scenario")
    }
}

fn validate_scenario(s: &TestScenario, cfg: &ExperimentConfig, path: &str) -> Result<(), ConfigError> {
    match s {
        TestScenario::IidQ { distribution: Some(d) } => {
            d.build()
                .map_err(|e| fail(format!("{path}.distribution"), e.to_string()))?;
        }
        TestScenario::IidQ { distribution: None } | TestScenario::Custom { .. } => {}
        TestScenario::Spammer {
            pool,
            pool_size,
            mix_fraction,
        } => {
            if *pool_size == 0 {
                return Err(fail(format!("{path}.pool_size"), "must be at least 1"));
            }
            if !(0.0..=1.0).contains(mix_fraction) {
                return Err(fail(format!("{path}.mix_fraction"), "must lie in [0, 1]"));
            }
            if let Some(d) = pool {
                d.build().map_err(|e| fail(format!("{path}.pool"), e.to_string()))?;
            }
        }
        TestScenario::VersionSpaceGap => {
            if cfg.concept_class.point_kind() != redaction::domain::PointKind::Real1D {
                return Err(fail(path, "version_space_gap needs a real-line class"));
            }
        }
        TestScenario::Blend { sources } => {
            for (i, d) in sources.iter().enumerate() {
                d.build()
                    .map_err(|e| fail(format!("{path}.sources[{i}]"), e.to_string()))?;
            }
        }
        TestScenario::Mixture { scenarios } => {
            if scenarios.is_empty() {
                return Err(fail(format!("{path}.scenarios"), "needs at least one scenario"));
            }
            for (i, sub) in scenarios.iter().enumerate() {
                if matches!(
                    sub,
                    TestScenario::LowerBoundPq { .. }
                        | TestScenario::LowerBoundTrans { .. }
                        | TestScenario::Custom { .. }
                ) {
                    return Err(fail(format!("{path}.scenarios[{i}]"), "cannot be mixed"));
                }
                validate_scenario(sub, cfg, &format!("{path}.scenarios[{i}]"))?;
            }
        }
        TestScenario::LowerBoundPq { d } => {
            if *d == 0 || cfg.n < 2 * d {
                return Err(fail(format!("{path}.d"), "need d >= 1 and n >= 2d"));
            }
        }
        TestScenario::LowerBoundTrans { d } => {
            if *d == 0 || cfg.n < 4 * d || cfg.m < 4 * d {
                return Err(fail(format!("{path}.d"), "need d >= 1 and n, m >= 4d"));
            }
        }
    }
    Ok(())
}
