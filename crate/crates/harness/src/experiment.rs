//! One trial end to end: draw data, run the learner, measure.

use rand::Rng;
use rayon::prelude::*;
use redaction::concepts::{erm, ConceptClass, FiniteClass, Interval, Threshold};
use redaction::domain::{
    fraction, rational_from_f64, rational_int, rational_to_f64, Concept, GuaranteeMode, Label, Point, Rational,
    Restricted, Sample, SelectiveClassifier, WeightedLabeledSample,
};
use redaction::metrics::{err_dist, rej_dist, DiscreteDistribution};
use redaction::rejectron::{
    agnostic_lambda, iteration_bound, massart_denoise_and_run, massart_extra_samples, recommended_epsilon_massart,
    recommended_epsilon_pq, recommended_epsilon_transductive, rejectron_traced, rejectron_with_base, MassartConfig,
    RejectronConfig,
};
use redaction::synthetic::{
    blend_test_sources, lower_bound_pq_instance, lower_bound_trans_adversary, lower_bound_trans_instance,
    massart_corrupt, spammer_adversary, version_space_gap_adversary, PointDistribution, Sampler, Seed,
};
use redaction::urejectron::{score_all, threshold_scores, urejectron, NearestNeighborScorer, Origin, PredictionSet};

use crate::config::{
    Algorithm, AutoEpsilon, EpsilonSpec, ExperimentConfig, LabelNoise, LambdaKeyword, LambdaSpec, TargetSpec,
    TestScenario,
};
use crate::dataset;
use crate::error::{HarnessError, Result};

/// Measurements of one trial. Rates are exact; optional fields are absent
/// when the scenario does not define them.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub trial: usize,
    pub seed: u64,
    pub epsilon: f64,
    pub lambda: Rational,
    pub tau: Option<f64>,
    pub n: usize,
    pub m: usize,
    pub err_test: Rational,
    pub rej_test: Rational,
    pub rej_train: Rational,
    /// Rejection on the iid sample `z` that the test set was derived from.
    pub rej_z: Option<Rational>,
    pub false_rej: Option<Rational>,
    pub delta_ham: Option<Rational>,
    /// Rejection among test entries left equal to `z`.
    pub honest_rej: Option<Rational>,
    pub selected_error: Rational,
    pub iterations: Option<usize>,
    pub iteration_bound: Option<usize>,
    pub err_q_exact: Option<Rational>,
    pub rej_p_exact: Option<Rational>,
    pub mode: GuaranteeMode,
    /// Training labels equal `f` on the training sample.
    pub realizable: bool,
    pub denoise_exact: Option<bool>,
    pub lb_event: Option<bool>,
}

/// Everything a learner sees or is judged against in one trial.
#[derive(Debug, Clone)]
pub struct TrialData {
    pub class: ConceptClass,
    pub f: Concept,
    pub train: Sample,
    /// Observed training labels, possibly noisy.
    pub labels: Vec<Label>,
    pub test: Sample,
    pub truth: Vec<Label>,
    pub z: Option<Sample>,
    pub p: Option<DiscreteDistribution>,
    pub q: Option<DiscreteDistribution>,
    pub lb_event: Option<bool>,
    /// Extra noisy sample for the denoising pipeline.
    pub extra: Option<(Sample, Vec<Label>)>,
}

/// `ε` after resolving the automatic settings.
pub fn resolve_epsilon(cfg: &ExperimentConfig) -> Result<f64> {
    let d = || cfg.vc_d().map_err(HarnessError::from);
    Ok(match cfg.epsilon {
        EpsilonSpec::Value(e) => e,
        EpsilonSpec::Auto(AutoEpsilon::Transductive) => recommended_epsilon_transductive(d()?, cfg.n, cfg.delta)?,
        EpsilonSpec::Auto(AutoEpsilon::Pq) => recommended_epsilon_pq(d()?, cfg.n, cfg.delta)?,
        EpsilonSpec::Auto(AutoEpsilon::Massart) => recommended_epsilon_massart(d()?, cfg.n, cfg.delta)?,
    })
}

/// `Λ`, with `None` meaning `n + 1`.
pub fn resolve_lambda(cfg: &ExperimentConfig, epsilon: f64) -> Result<Option<Rational>> {
    Ok(match cfg.lambda {
        LambdaSpec::Keyword(LambdaKeyword::Default) => None,
        LambdaSpec::Value(v) => Some(rational_from_f64(v)?),
        LambdaSpec::Keyword(LambdaKeyword::Agnostic) => Some(agnostic_lambda(
            epsilon,
            cfg.eta.expect("validated: agnostic lambda has eta"),
        )?),
    })
}

fn as_discrete(d: &PointDistribution) -> Option<DiscreteDistribution> {
    match d {
        PointDistribution::Discrete(dd) => Some(dd.clone()),
        _ => None,
    }
}

fn draw_target(cfg: &ExperimentConfig, seed: Seed) -> Result<Concept> {
    let mut rng = seed.rng();
    Ok(match &cfg.target {
        TargetSpec::Fixed { concept } => concept.clone(),
        TargetSpec::RandomThreshold { lo, hi } => Concept::Threshold(Threshold::new(rng.random_range(*lo..*hi))?),
        TargetSpec::RandomInterval { lo, hi } => {
            let (a, b) = (rng.random_range(*lo..*hi), rng.random_range(*lo..*hi));
            Concept::Interval(Interval::new(a.min(b), a.max(b))?)
        }
        TargetSpec::RandomMember => {
            let ConceptClass::Finite(fc) = &cfg.concept_class else {
                unreachable!("validated: random_member needs a finite class")
            };
            random_member(fc, &mut rng)
        }
    })
}

fn random_member(fc: &FiniteClass, rng: &mut impl Rng) -> Concept {
    Concept::Finite(fc.concepts()[rng.random_range(0..fc.len())].clone())
}

fn observe_labels(cfg: &ExperimentConfig, train: &Sample, f: &Concept, seed: Seed) -> Result<Vec<Label>> {
    let clean = f.predict_all(train)?;
    match &cfg.label_noise {
        None => Ok(clean),
        Some(LabelNoise::Massart { .. }) => {
            let ch = cfg.noise_channel()?.expect("validated Massart channel");
            Ok(massart_corrupt(train, f, &ch, seed)?)
        }
        Some(LabelNoise::RandomFlip { rate }) => {
            let mut rng = seed.rng();
            Ok(clean
                .into_iter()
                .map(|y| if rng.random_bool(*rate) { y.flip() } else { y })
                .collect())
        }
    }
}

/// The hypothesis an adversary attacks: the configured base, or the ERM on
/// the observed labels.
fn attacked_hypothesis(
    cfg: &ExperimentConfig,
    class: &ConceptClass,
    train: &Sample,
    labels: &[Label],
) -> Result<Concept> {
    match &cfg.base {
        Some(b) => Ok(b.clone()),
        None => Ok(erm(class, &WeightedLabeledSample::unit(train, labels)?)?),
    }
}

struct Scene {
    test: Sample,
    z: Option<Sample>,
    q: Option<DiscreteDistribution>,
}

#[allow(clippy::too_many_arguments)]
fn scenario_test(
    cfg: &ExperimentConfig,
    scenario: &TestScenario,
    p: &PointDistribution,
    class: &ConceptClass,
    f: &Concept,
    train: &Sample,
    labels: &[Label],
    seed: Seed,
) -> Result<Scene> {
    let sampler = Sampler::new(p)?;
    let draw_z = || sampler.sample(cfg.m, &mut seed.derive(0, "z").rng());
    Ok(match scenario {
        TestScenario::IidQ { distribution: None } => {
            let z = draw_z();
            Scene {
                test: z.clone(),
                z: Some(z),
                q: as_discrete(p),
            }
        }
        TestScenario::IidQ { distribution: Some(q) } => {
            let q = q.build()?;
            Scene {
                test: Sampler::new(&q)?.sample(cfg.m, &mut seed.derive(0, "q").rng()),
                z: None,
                q: as_discrete(&q),
            }
        }
        TestScenario::Spammer {
            pool,
            pool_size,
            mix_fraction,
        } => {
            let pool_dist = match pool {
                Some(d) => d.build()?,
                None => p.clone(),
            };
            let pool = Sampler::new(&pool_dist)?.sample(*pool_size, &mut seed.derive(0, "pool").rng());
            let h = attacked_hypothesis(cfg, class, train, labels)?;
            let z = draw_z();
            let out = spammer_adversary(&h, f, &pool, &z, *mix_fraction)?;
            Scene {
                test: out.sample,
                z: Some(z),
                q: None,
            }
        }
        TestScenario::VersionSpaceGap => Scene {
            test: version_space_gap_adversary(train, labels, cfg.m, seed.derive(0, "gap"))?,
            z: None,
            q: None,
        },
        TestScenario::Blend { sources } => {
            let z = draw_z();
            let qs = sources
                .iter()
                .enumerate()
                .map(|(i, s)| Ok(Sampler::new(&s.build()?)?.sample(cfg.m, &mut seed.derive(i as u64, "source").rng())))
                .collect::<Result<Vec<_>>>()?;
            Scene {
                test: blend_test_sources(&z, &qs, seed.derive(0, "blend"))?.sample,
                z: None,
                q: None,
            }
        }
        TestScenario::Mixture { scenarios } => {
            let parts = scenarios
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    Ok(scenario_test(cfg, s, p, class, f, train, labels, seed.derive(i as u64, "part"))?.test)
                })
                .collect::<Result<Vec<_>>>()?;
            Scene {
                test: blend_test_sources(&parts[0], &parts[1..], seed.derive(0, "mixture"))?.sample,
                z: None,
                q: None,
            }
        }
        TestScenario::LowerBoundPq { .. } | TestScenario::LowerBoundTrans { .. } | TestScenario::Custom { .. } => {
            return Err(HarnessError::Dataset("scenario cannot be nested".into()))
        }
    })
}

/// Draws the data of trial `trial`.
pub fn generate(cfg: &ExperimentConfig, trial: usize) -> Result<TrialData> {
    let master = Seed::new(cfg.seed);
    let seed = master.derive(trial as u64, "trial");
    let class = cfg.effective_class();
    match &cfg.test_scenario {
        TestScenario::LowerBoundPq { d } => {
            let inst = lower_bound_pq_instance(*d, cfg.n, seed.derive(0, "instance"))?;
            let p = PointDistribution::Discrete(inst.p.clone());
            let q = PointDistribution::Discrete(inst.q.clone());
            let train = Sampler::new(&p)?.sample(cfg.n, &mut seed.derive(0, "train").rng());
            let test = Sampler::new(&q)?.sample(cfg.m, &mut seed.derive(0, "q").rng());
            let labels = observe_labels(cfg, &train, &inst.f, seed.derive(0, "labels"))?;
            Ok(TrialData {
                truth: inst.f.predict_all(&test)?,
                class,
                f: inst.f,
                train,
                labels,
                test,
                z: None,
                p: Some(inst.p),
                q: Some(inst.q),
                lb_event: None,
                extra: None,
            })
        }
        TestScenario::LowerBoundTrans { d } => {
            let inst = lower_bound_trans_instance(*d, cfg.n, cfg.m, seed.derive(0, "instance"))?;
            let out = lower_bound_trans_adversary(&inst.x, &inst.z, &inst.f, *d, cfg.m, seed.derive(0, "adversary"))?;
            let labels = observe_labels(cfg, &inst.x, &inst.f, seed.derive(0, "labels"))?;
            Ok(TrialData {
                truth: inst.f.predict_all(&out.sample)?,
                class,
                f: inst.f,
                train: inst.x,
                labels,
                test: out.sample,
                z: Some(inst.z),
                p: None,
                q: None,
                lb_event: Some(out.event),
                extra: None,
            })
        }
        TestScenario::Custom { path } => {
            let ds = dataset::load(path, class.point_kind())?;
            let f = draw_target(cfg, seed.derive(0, "target"))?;
            let truth = match ds.truth {
                Some(t) => t,
                None => f.predict_all(&ds.test)?,
            };
            Ok(TrialData {
                class,
                f,
                train: ds.train,
                labels: ds.labels,
                test: ds.test,
                truth,
                z: None,
                p: None,
                q: None,
                lb_event: None,
                extra: None,
            })
        }
        scenario => {
            let p = cfg.train_distribution.build()?;
            let f = draw_target(cfg, seed.derive(0, "target"))?;
            let train = Sampler::new(&p)?.sample(cfg.n, &mut seed.derive(0, "train").rng());
            let labels = observe_labels(cfg, &train, &f, seed.derive(0, "labels"))?;
            let extra = match cfg.denoise {
                Some(dn) => {
                    let ch = cfg.noise_channel()?.expect("validated Massart channel");
                    let big_n = match dn.big_n {
                        Some(k) => k,
                        None => massart_extra_samples(cfg.vc_d()?, cfg.n, cfg.delta, ch.eta_bound(), dn.constant)?,
                    };
                    let xs = Sampler::new(&p)?.sample(big_n, &mut seed.derive(0, "extra").rng());
                    let ys = massart_corrupt(&xs, &f, &ch, seed.derive(0, "extra-labels"))?;
                    Some((xs, ys))
                }
                None => None,
            };
            let scene = scenario_test(cfg, scenario, &p, &class, &f, &train, &labels, seed)?;
            Ok(TrialData {
                truth: f.predict_all(&scene.test)?,
                class,
                f,
                p: as_discrete(&p),
                q: scene.q,
                train,
                labels,
                test: scene.test,
                z: scene.z,
                lb_event: None,
                extra,
            })
        }
    }
}

/// The learner's output, with `h` and `S` evaluable per point.
pub enum Learned {
    Committee(SelectiveClassifier),
    Pairs {
        h: Concept,
        set: PredictionSet,
    },
    Scores {
        h: Concept,
        scorer: NearestNeighborScorer,
        train_scores: Vec<f64>,
        test_scores: Vec<f64>,
    },
}

impl Learned {
    pub fn base(&self) -> &Concept {
        match self {
            Learned::Committee(sc) => &sc.base,
            Learned::Pairs { h, .. } | Learned::Scores { h, .. } => h,
        }
    }

    pub fn iterations(&self) -> Option<usize> {
        match self {
            Learned::Committee(sc) => Some(sc.iterations()),
            Learned::Pairs { set, .. } => Some(set.len()),
            Learned::Scores { .. } => None,
        }
    }

    fn mode(&self) -> GuaranteeMode {
        match self {
            Learned::Committee(sc) => sc.mode,
            Learned::Pairs { set, .. } => set.mode,
            Learned::Scores { .. } => GuaranteeMode::Exploratory,
        }
    }

    fn selects(&self, p: &Point) -> Result<bool> {
        Ok(match self {
            Learned::Committee(sc) => sc.membership(p)?,
            Learned::Pairs { set, .. } => set.contains(p)?,
            Learned::Scores { .. } => unreachable!("score selections are evaluated per index"),
        })
    }
}

pub struct Learner {
    pub learned: Learned,
    pub lambda: Rational,
    pub denoise_exact: Option<bool>,
}

pub fn learn(cfg: &ExperimentConfig, data: &TrialData, epsilon: f64) -> Result<Learner> {
    let mut rej_cfg = RejectronConfig::new(epsilon);
    rej_cfg.lambda = resolve_lambda(cfg, epsilon)?;
    let default_lambda = || rational_int(data.train.len() as i64 + 1);
    let lambda = rej_cfg.lambda.clone().unwrap_or_else(default_lambda);
    let (train, labels, test) = (&data.train, &data.labels, &data.test);
    match cfg.algorithm {
        Algorithm::Rejectron => {
            if let Some((xs, ys)) = &data.extra {
                let mc = MassartConfig {
                    eta: cfg.noise_channel()?.map_or(0.0, |c| c.eta_bound()),
                    delta: cfg.delta,
                    big_n: xs.len(),
                };
                let out = massart_denoise_and_run(&data.class, xs, ys, train, labels, test, &mc, &rej_cfg)?;
                let exact = out.relabeled == data.f.predict_all(train)?;
                return Ok(Learner {
                    learned: Learned::Committee(out.run.classifier),
                    lambda,
                    denoise_exact: Some(exact),
                });
            }
            let run = match &cfg.base {
                Some(h) => rejectron_with_base(&data.class, h.clone(), train, test, &rej_cfg)?,
                None => rejectron_traced(&data.class, train, labels, test, &rej_cfg)?,
            };
            Ok(Learner {
                learned: Learned::Committee(run.classifier),
                lambda,
                denoise_exact: None,
            })
        }
        Algorithm::Urejectron => {
            let set = urejectron(&data.class, train, test, &rej_cfg)?;
            let h = attacked_hypothesis(cfg, &data.class, train, labels)?;
            Ok(Learner {
                learned: Learned::Pairs { h, set },
                lambda,
                denoise_exact: None,
            })
        }
        Algorithm::Distinguisher { .. } => {
            let h = attacked_hypothesis(cfg, &data.class, train, labels)?;
            let scorer = NearestNeighborScorer::new(train, test)?;
            let train_scores = score_all(&scorer, train, Origin::Train)?;
            let test_scores = score_all(&scorer, test, Origin::Test)?;
            Ok(Learner {
                learned: Learned::Scores {
                    h,
                    scorer,
                    train_scores,
                    test_scores,
                },
                lambda,
                denoise_exact: None,
            })
        }
    }
}

fn count(mask: impl Iterator<Item = bool>) -> usize {
    mask.filter(|b| *b).count()
}

/// Metrics of a learned selector; `tau` thresholds score-based selections.
pub fn measure(
    cfg: &ExperimentConfig,
    trial: usize,
    data: &TrialData,
    learner: &Learner,
    epsilon: f64,
    tau: Option<f64>,
) -> Result<TrialResult> {
    let learned = &learner.learned;
    let h = learned.base();
    let (train_sel, test_sel): (Vec<bool>, Vec<bool>) = match learned {
        Learned::Scores {
            train_scores,
            test_scores,
            ..
        } => {
            let d = threshold_scores(
                train_scores.clone(),
                test_scores.clone(),
                tau.unwrap_or(f64::NEG_INFINITY),
            );
            (d.train_selected, d.test_selected)
        }
        _ => (
            data.train.iter().map(|p| learned.selects(p)).collect::<Result<_>>()?,
            data.test.iter().map(|p| learned.selects(p)).collect::<Result<_>>()?,
        ),
    };
    let (n, m) = (data.train.len(), data.test.len());
    let h_test = h.predict_all(&data.test)?;
    let wrong: Vec<bool> = h_test.iter().zip(&data.truth).map(|(a, b)| a != b).collect();
    let selected = count(test_sel.iter().copied());
    let selected_wrong = count(test_sel.iter().zip(&wrong).map(|(s, w)| *s && *w));
    let mut rej_z = None;
    let mut false_rej = None;
    let mut delta_ham = None;
    let mut honest_rej = None;
    if let Some(z) = &data.z {
        let mut z_rejected = 0;
        let (mut untouched, mut untouched_rejected) = (0, 0);
        for (i, zp) in z.iter().enumerate() {
            let same = data.test.points().get(i) == Some(zp);
            let sel = if same {
                test_sel[i]
            } else {
                match learned {
                    Learned::Scores { scorer, .. } => {
                        use redaction::urejectron::Scorer;
                        scorer.score(zp, Origin::Other)? >= tau.unwrap_or(f64::NEG_INFINITY)
                    }
                    _ => learned.selects(zp)?,
                }
            };
            if !sel {
                z_rejected += 1;
            }
            if same {
                untouched += 1;
                if !sel {
                    untouched_rejected += 1;
                }
            }
        }
        rej_z = Some(fraction(z_rejected, z.len()));
        if z.len() == m {
            false_rej = Some(fraction(untouched_rejected, m));
            delta_ham = Some(fraction(m - untouched, m));
            honest_rej = Some(fraction(untouched_rejected, untouched));
        }
    }
    let (err_q_exact, rej_p_exact) = match (learned, &data.p, &data.q) {
        (Learned::Committee(sc), Some(p), Some(q)) => (Some(err_dist(sc, &data.f, q)?), Some(rej_dist(sc, p)?)),
        (Learned::Pairs { h, set }, Some(p), Some(q)) => {
            let r = Restricted::new(h, set);
            (Some(err_dist(&r, &data.f, q)?), Some(rej_dist(set, p)?))
        }
        _ => (None, None),
    };
    let clean = data.f.predict_all(&data.train)?;
    Ok(TrialResult {
        trial,
        seed: Seed::new(cfg.seed).derive(trial as u64, "trial").master,
        epsilon,
        lambda: learner.lambda.clone(),
        tau,
        n,
        m,
        err_test: fraction(selected_wrong, m),
        rej_test: fraction(m - selected, m),
        rej_train: fraction(count(train_sel.iter().map(|s| !s)), n),
        rej_z,
        false_rej,
        delta_ham,
        honest_rej,
        selected_error: fraction(selected_wrong, selected),
        iterations: learned.iterations(),
        iteration_bound: match learned {
            Learned::Scores { .. } => None,
            _ => iteration_bound(epsilon),
        },
        err_q_exact,
        rej_p_exact,
        mode: if n == m {
            learned.mode()
        } else {
            GuaranteeMode::Exploratory
        },
        realizable: clean == data.labels && data.class.contains(&data.f),
        denoise_exact: learner.denoise_exact,
        lb_event: data.lb_event,
    })
}

pub fn run_trial(cfg: &ExperimentConfig, trial: usize, epsilon: f64) -> Result<TrialResult> {
    let data = generate(cfg, trial)?;
    let learner = learn(cfg, &data, epsilon)?;
    let tau = match cfg.algorithm {
        Algorithm::Distinguisher { tau } => Some(tau),
        _ => None,
    };
    measure(cfg, trial, &data, &learner, epsilon, tau)
}

/// All trials of `cfg`, in trial order, run in parallel.
pub fn run_trials(cfg: &ExperimentConfig, epsilon: f64) -> Result<Vec<TrialResult>> {
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, t, epsilon))
        .collect()
}

/// Largest rate as a float, for reporting.
pub fn to_f64(r: &Rational) -> f64 {
    rational_to_f64(r)
}
