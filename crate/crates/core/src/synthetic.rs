//! Seeded samplers, label noise, test-set adversaries and the lower-bound
//! instance generators.
//!
//! Every generator is a pure function of its inputs and a [`Seed`].

use rand::seq::index;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::weighted::WeightedIndex;
use rand_distr::{Distribution, Normal};

use crate::concepts::{ConceptClass, FiniteClass, FiniteConcept, OnesConcept};
use crate::domain::{rational, rational_from_f64, rational_to_f64, Concept, Label, Point, Rational, Sample};
use crate::error::{Error, Result};
use crate::metrics::{DiscreteDistribution, LabeledDiscreteDistribution};

/// Master seed for one experiment. Streams for a given trial and purpose are
/// derived with [`Seed::derive`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Seed {
    pub master: u64,
}

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// FNV-1a over the tag bytes.
fn tag_hash(tag: &str) -> u64 {
    tag.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

impl Seed {
    pub fn new(master: u64) -> Self {
        Seed { master }
    }

    /// `mix64(mix64(master ^ mix64(trial)) ^ fnv1a(tag))`.
    pub fn derive(&self, trial: u64, tag: &str) -> Seed {
        Seed {
            master: mix64(mix64(self.master ^ mix64(trial)) ^ tag_hash(tag)),
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.master)
    }
}

/// Sampling distributions over points.
#[derive(Debug, Clone, PartialEq)]
pub enum PointDistribution {
    /// Uniform on `[lo, hi)`.
    Uniform1D {
        lo: f64,
        hi: f64,
    },
    Normal1D {
        mean: f64,
        std: f64,
    },
    /// Uniform on the square `[lo, hi)²`.
    UniformSquare {
        lo: f64,
        hi: f64,
    },
    Discrete(DiscreteDistribution),
}

impl PointDistribution {
    pub fn validate(&self) -> Result<()> {
        match *self {
            PointDistribution::Uniform1D { lo, hi } | PointDistribution::UniformSquare { lo, hi } => {
                if lo.is_finite() && hi.is_finite() && lo < hi {
                    Ok(())
                } else {
                    Err(Error::invalid("distribution", format!("bad range [{lo}, {hi})")))
                }
            }
            PointDistribution::Normal1D { mean, std } => {
                if mean.is_finite() && std.is_finite() && std > 0.0 {
                    Ok(())
                } else {
                    Err(Error::invalid("distribution", "normal needs finite mean and std > 0"))
                }
            }
            PointDistribution::Discrete(ref d) => {
                if d.is_empty() {
                    Err(Error::InvalidDistribution("empty support".into()))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// A reusable sampler: the discrete alias table is built once.
pub struct Sampler<'a> {
    dist: &'a PointDistribution,
    discrete: Option<(Vec<Point>, WeightedIndex<f64>)>,
    normal: Option<Normal<f64>>,
}

impl<'a> Sampler<'a> {
    pub fn new(dist: &'a PointDistribution) -> Result<Self> {
        dist.validate()?;
        let discrete = match dist {
            PointDistribution::Discrete(d) => {
                let (pts, ws): (Vec<Point>, Vec<f64>) = d.atoms().map(|(p, w)| (*p, rational_to_f64(w))).unzip();
                let wi = WeightedIndex::new(&ws).map_err(|e| Error::InvalidDistribution(e.to_string()))?;
                Some((pts, wi))
            }
            _ => None,
        };
        let normal = match *dist {
            PointDistribution::Normal1D { mean, std } => {
                Some(Normal::new(mean, std).map_err(|e| Error::invalid("distribution", e.to_string()))?)
            }
            _ => None,
        };
        Ok(Sampler { dist, discrete, normal })
    }

    pub fn draw(&self, rng: &mut impl Rng) -> Point {
        match (self.dist, &self.discrete, &self.normal) {
            (PointDistribution::Uniform1D { lo, hi }, _, _) => Point::Real1D(rng.random_range(*lo..*hi)),
            (PointDistribution::UniformSquare { lo, hi }, _, _) => {
                Point::Real2D(rng.random_range(*lo..*hi), rng.random_range(*lo..*hi))
            }
            (PointDistribution::Normal1D { .. }, _, Some(n)) => Point::Real1D(n.sample(rng)),
            (PointDistribution::Discrete(_), Some((pts, wi)), _) => pts[wi.sample(rng)],
            _ => unreachable!("sampler state matches its distribution"),
        }
    }

    pub fn sample(&self, n: usize, rng: &mut impl Rng) -> Sample {
        Sample::new((0..n).map(|_| self.draw(rng)).collect()).expect("sampled points are finite and homogeneous")
    }
}

/// `n` iid draws from `d`.
pub fn sample(d: &PointDistribution, n: usize, seed: Seed) -> Result<Sample> {
    Ok(Sampler::new(d)?.sample(n, &mut seed.rng()))
}

/// Per-point flip rate `η(x)`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EtaFn {
    Constant {
        eta: f64,
    },
    /// `values[i]` applies on `[breaks[i-1], breaks[i])` of the real line,
    /// with `breaks` ascending and `values.len() = breaks.len() + 1`.
    Piecewise1D {
        breaks: Vec<f64>,
        values: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseChannel {
    eta_fn: EtaFn,
    eta_bound: f64,
}

impl NoiseChannel {
    pub fn new(eta_fn: EtaFn, eta_bound: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&eta_bound) {
            return Err(Error::invalid("eta_bound", "Massart noise needs 0 <= eta < 1/2"));
        }
        let values: Vec<f64> = match &eta_fn {
            EtaFn::Constant { eta } => vec![*eta],
            EtaFn::Piecewise1D { breaks, values } => {
                if values.len() != breaks.len() + 1 || breaks.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::invalid(
                        "eta_fn",
                        "need ascending breaks and one more value than breaks",
                    ));
                }
                values.clone()
            }
        };
        if values.iter().any(|&v| !(0.0..=eta_bound).contains(&v)) {
            return Err(Error::invalid("eta_fn", format!("rates must lie in [0, {eta_bound}]")));
        }
        Ok(NoiseChannel { eta_fn, eta_bound })
    }

    pub fn constant(eta: f64) -> Result<Self> {
        NoiseChannel::new(EtaFn::Constant { eta }, eta)
    }

    pub fn eta_bound(&self) -> f64 {
        self.eta_bound
    }

    pub fn eta_fn(&self) -> &EtaFn {
        &self.eta_fn
    }

    pub fn eta(&self, p: &Point) -> Result<f64> {
        match &self.eta_fn {
            EtaFn::Constant { eta } => Ok(*eta),
            EtaFn::Piecewise1D { breaks, values } => {
                let Point::Real1D(x) = *p else {
                    return Err(Error::KindMismatch {
                        expected: crate::domain::PointKind::Real1D,
                        found: p.kind(),
                    });
                };
                Ok(values[breaks.partition_point(|&b| b <= x)])
            }
        }
    }

    /// The exact rational image of `η(x)`.
    pub fn eta_exact(&self, p: &Point) -> Result<Rational> {
        rational_from_f64(self.eta(p)?)
    }
}

/// `y = f(x)` with probability `1 - η(x)`, else `1 - f(x)`.
pub fn massart_corrupt(points: &Sample, f: &Concept, ch: &NoiseChannel, seed: Seed) -> Result<Vec<Label>> {
    let mut rng = seed.rng();
    points
        .iter()
        .map(|p| {
            let y = f.predict(p)?;
            Ok(if rng.random_bool(ch.eta(p)?) { y.flip() } else { y })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpammerOutput {
    pub sample: Sample,
    /// Distinct pool points where `h` errs, in pool order.
    pub found_errors: Vec<Point>,
    /// Entries replaced by repeated error points (a prefix of the output).
    pub adversarial: usize,
    /// Set when the pool contained no error, in which case the output is the
    /// honest sample.
    pub no_errors_found: bool,
}

/// Replaces the first `⌈mix·n⌉` entries of `honest` with round-robin copies
/// of the pool points where `h` disagrees with `truth`.
pub fn spammer_adversary(
    h: &Concept,
    truth: &Concept,
    pool: &Sample,
    honest: &Sample,
    mix_fraction: f64,
) -> Result<SpammerOutput> {
    if pool.is_empty() {
        return Err(Error::EmptyData("spammer pool"));
    }
    if !(0.0..=1.0).contains(&mix_fraction) {
        return Err(Error::invalid("mix_fraction", "must lie in [0, 1]"));
    }
    let mut found_errors: Vec<Point> = Vec::new();
    for p in pool {
        if h.predict(p)? != truth.predict(p)? && !found_errors.contains(p) {
            found_errors.push(*p);
        }
    }
    if found_errors.is_empty() {
        return Ok(SpammerOutput {
            sample: honest.clone(),
            found_errors,
            adversarial: 0,
            no_errors_found: true,
        });
    }
    let n = honest.len();
    let exact = rational_from_f64(mix_fraction)? * Rational::from_integer(n.into());
    let k = exact.ceil().to_integer().try_into().unwrap_or(n).min(n);
    let mut points = honest.points().to_vec();
    for (i, slot) in points.iter_mut().take(k).enumerate() {
        *slot = found_errors[i % found_errors.len()];
    }
    Ok(SpammerOutput {
        sample: Sample::new(points)?,
        found_errors,
        adversarial: k,
        no_errors_found: false,
    })
}

/// Test points spread over the gaps of a sorted 1-D training set where the
/// training label changes, plus the two unbounded ends; the places where
/// hypotheses consistent with the training data can disagree.
pub fn version_space_gap_adversary(train: &Sample, labels: &[Label], m: usize, seed: Seed) -> Result<Sample> {
    if train.len() != labels.len() {
        return Err(Error::LengthMismatch {
            context: "train vs labels",
            left: train.len(),
            right: labels.len(),
        });
    }
    let mut pairs: Vec<(f64, Label)> = train
        .iter()
        .zip(labels)
        .map(|(p, &y)| match p {
            Point::Real1D(x) => Ok((*x, y)),
            other => Err(Error::KindMismatch {
                expected: crate::domain::PointKind::Real1D,
                found: other.kind(),
            }),
        })
        .collect::<Result<_>>()?;
    if pairs.is_empty() {
        return Err(Error::EmptyData("version-space gap adversary"));
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (lo, hi) = (pairs[0].0, pairs[pairs.len() - 1].0);
    let width = (hi - lo).max(1.0);
    let mut gaps: Vec<(f64, f64)> = pairs
        .windows(2)
        .filter(|w| w[0].1 != w[1].1 && w[0].0 < w[1].0)
        .map(|w| (w[0].0, w[1].0))
        .collect();
    gaps.push((lo - width, lo));
    gaps.push((hi, hi + width));
    let mut rng = seed.rng();
    let pts = (0..m)
        .map(|_| {
            let (a, b) = gaps[rng.random_range(0..gaps.len())];
            // Open gap: strictly between the two training values.
            let mut x = rng.random_range(a..b);
            if x == a {
                x = a + (b - a) / 2.0;
            }
            Point::Real1D(x)
        })
        .collect();
    Sample::new(pts)
}

/// Instance of the PQ lower-bound construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PqInstance {
    /// Uniform over `Discrete(0..8n)`.
    pub p: DiscreteDistribution,
    /// Uniform over `Discrete(0..k)`.
    pub q: DiscreteDistribution,
    pub f: Concept,
    pub class: ConceptClass,
    pub k: usize,
    pub domain: usize,
}

/// `P` uniform over `8n` points, `Q` uniform over the first
/// `k = round(√(8dn))` of them and `f` uniform over indicators of exactly
/// `d` points of `[k]`.
pub fn lower_bound_pq_instance(d: usize, n: usize, seed: Seed) -> Result<PqInstance> {
    if d == 0 || n < 2 * d {
        return Err(Error::invalid(
            "n",
            format!("need d >= 1 and n >= 2d (d = {d}, n = {n})"),
        ));
    }
    let domain = 8 * n;
    let k = ((8 * d * n) as f64).sqrt().round() as usize;
    let mut rng = seed.rng();
    let ones = index::sample(&mut rng, k, d).into_vec();
    Ok(PqInstance {
        p: DiscreteDistribution::uniform_indices(0, domain)?,
        q: DiscreteDistribution::uniform_indices(0, k)?,
        f: Concept::Ones(OnesConcept::new(ones)),
        class: ConceptClass::ExactlyOnes {
            domain_size: domain,
            ones: d,
        },
        k,
        domain,
    })
}

/// Honest side of the transductive lower-bound construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TransInstance {
    pub x: Sample,
    pub z: Sample,
    pub f: Concept,
    pub class: ConceptClass,
    /// `N = 8n`; the sentinel point is `Discrete(N)`.
    pub domain: usize,
}

/// `x ~ P^n`, `z ~ P^m` with `P` uniform over `[N]`, `N = 8n`, and `f`
/// uniform over indicators of exactly `d` points of `[N]`.
pub fn lower_bound_trans_instance(d: usize, n: usize, m: usize, seed: Seed) -> Result<TransInstance> {
    if d == 0 || n < 4 * d || m < 4 * d {
        return Err(Error::invalid(
            "n",
            format!("need d >= 1 and m, n >= 4d (d = {d}, n = {n}, m = {m})"),
        ));
    }
    let domain = 8 * n;
    let mut rng = seed.rng();
    let ones = index::sample(&mut rng, domain, d).into_vec();
    let draw = |rng: &mut ChaCha8Rng, count: usize| {
        Sample::from_indices(&(0..count).map(|_| rng.random_range(0..domain)).collect::<Vec<_>>())
    };
    let x = draw(&mut rng, n);
    let z = draw(&mut rng, m);
    Ok(TransInstance {
        x,
        z,
        f: Concept::Ones(OnesConcept::new(ones)),
        class: ConceptClass::ExactlyOnes {
            domain_size: domain,
            ones: d,
        },
        domain,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransAdversaryOutput {
    pub sample: Sample,
    pub event: bool,
    pub a: usize,
    pub b: usize,
    pub r: usize,
    /// Training points (with multiplicity) that land on a one of `f`.
    pub v1: usize,
    /// Distinct zeros of `f` present in `z` but absent from `x`.
    pub v0: usize,
    pub sentinel: Point,
}

fn indices(s: &Sample, domain: usize, what: &str) -> Result<Vec<usize>> {
    s.iter()
        .map(|p| match *p {
            Point::Discrete(i) if i < domain => Ok(i),
            other => Err(Error::ConstructionMismatch(format!(
                "{what} point {other} is outside [0, {domain})"
            ))),
        })
        .collect()
}

/// The white-box adversary of the transductive lower bound.
///
/// With `a = ⌊√(md)⌋`, `b = ⌈d/2⌉`, `r = ⌊m/(a+b)⌋`: if at most `d - b`
/// training points hit a one of `f` and `z` holds at least `a` distinct
/// unseen zeros, the output is `a` of those zeros and `b` unseen ones, each
/// repeated `r` times, padded with the sentinel `N` and shuffled. Otherwise
/// every output point is the sentinel.
pub fn lower_bound_trans_adversary(
    x: &Sample,
    z: &Sample,
    f: &Concept,
    d: usize,
    m: usize,
    seed: Seed,
) -> Result<TransAdversaryOutput> {
    let n = x.len();
    let domain = 8 * n;
    if z.len() != m {
        return Err(Error::ConstructionMismatch(format!("|z| = {} but m = {m}", z.len())));
    }
    let Concept::Ones(ones) = f else {
        return Err(Error::ConstructionMismatch(
            "f must be an exactly-d-ones concept".into(),
        ));
    };
    if ones.ones().len() != d || ones.ones().iter().any(|&i| i >= domain) {
        return Err(Error::ConstructionMismatch(format!(
            "f must have exactly {d} ones inside [0, {domain})"
        )));
    }
    if d == 0 || m < d {
        return Err(Error::ConstructionMismatch("need 1 <= d <= m".into()));
    }
    let xs = indices(x, domain, "training")?;
    let zs = indices(z, domain, "test")?;
    let a = ((m * d) as f64).sqrt().floor() as usize;
    let b = d.div_ceil(2);
    let r = m / (a + b);
    let mut seen = vec![false; domain];
    for &i in &xs {
        seen[i] = true;
    }
    let v1 = xs.iter().filter(|&&i| ones.contains(i)).count();
    let mut unseen_zeros: Vec<usize> = zs.iter().copied().filter(|&i| !seen[i] && !ones.contains(i)).collect();
    unseen_zeros.sort_unstable();
    unseen_zeros.dedup();
    let v0 = unseen_zeros.len();
    let event = v1 <= d - b && v0 >= a;
    let sentinel = Point::Discrete(domain);
    let mut rng = seed.rng();
    let mut pts = vec![sentinel; m];
    if event {
        let unseen_ones: Vec<usize> = ones.ones().iter().copied().filter(|&i| !seen[i]).collect();
        let zeros: Vec<usize> = index::sample(&mut rng, v0, a)
            .into_iter()
            .map(|i| unseen_zeros[i])
            .collect();
        let picked_ones: Vec<usize> = index::sample(&mut rng, unseen_ones.len(), b)
            .into_iter()
            .map(|i| unseen_ones[i])
            .collect();
        let mut slot = 0;
        for &i in zeros.iter().chain(&picked_ones) {
            for _ in 0..r {
                pts[slot] = Point::Discrete(i);
                slot += 1;
            }
        }
        pts.shuffle(&mut rng);
    }
    Ok(TransAdversaryOutput {
        sample: Sample::new(pts)?,
        event,
        a,
        b,
        r,
        v1,
        v0,
        sentinel,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgnosticInstance {
    pub mu: LabeledDiscreteDistribution,
    pub mu_tilde: LabeledDiscreteDistribution,
    pub f_star: Concept,
    pub x_star: usize,
    /// Singletons on `Discrete(0..k+2)`.
    pub class: FiniteClass,
    pub k: usize,
    /// True when `η̃ >= √(η/8)` and the one-point construction is used.
    pub trivial: bool,
}

/// The agnostic lower-bound construction with `k = ⌊√(2/η)⌋`.
///
/// `μ` puts `η/2` on each `(x, 0)`, `x < k`, and the rest on `(k, 0)`;
/// `f` is the singleton at a uniform `x* < k` and `μ̃` is uniform over
/// `(x, f(x))`, `x < k`. When `η̃ >= √(η/8)` the instance is instead
/// `μ̃(0, 1) = η̃`, `μ̃(0, 0) = 1 - η̃` with `f` the singleton at `k + 1`,
/// which carries no mass.
pub fn agnostic_lower_instance(eta: f64, eta_tilde: f64, seed: Seed) -> Result<AgnosticInstance> {
    if !(eta > 0.0 && eta <= 0.5) {
        return Err(Error::invalid("eta", "must lie in (0, 1/2]"));
    }
    if !(0.0..=0.5).contains(&eta_tilde) {
        return Err(Error::invalid("eta_tilde", "must lie in [0, 1/2]"));
    }
    let k = (2.0 / eta).sqrt().floor() as usize;
    let domain = k + 2;
    let class = FiniteClass::singletons(domain)?;
    let eta_r = rational_from_f64(eta)?;
    let half_eta = &eta_r / rational(2, 1);
    let mut mu_support: Vec<(Point, Label)> = (0..k).map(|x| (Point::Discrete(x), Label::Zero)).collect();
    let mut mu_probs: Vec<Rational> = vec![half_eta.clone(); k];
    mu_support.push((Point::Discrete(k), Label::Zero));
    mu_probs.push(Rational::from_integer(1.into()) - &half_eta * Rational::from_integer(k.into()));
    let mu = LabeledDiscreteDistribution::new(mu_support, mu_probs)?;
    let singleton = |at: usize| {
        Concept::Finite(FiniteConcept::new(
            (0..domain).map(|i| Label::from_bool(i == at)).collect(),
        ))
    };
    let trivial = eta_tilde >= (eta / 8.0).sqrt();
    if trivial {
        let et = rational_from_f64(eta_tilde)?;
        let mu_tilde = LabeledDiscreteDistribution::new(
            vec![(Point::Discrete(0), Label::One), (Point::Discrete(0), Label::Zero)],
            vec![et.clone(), Rational::from_integer(1.into()) - et],
        )?;
        return Ok(AgnosticInstance {
            mu,
            mu_tilde,
            f_star: singleton(k + 1),
            x_star: k + 1,
            class,
            k,
            trivial,
        });
    }
    let x_star = seed.rng().random_range(0..k);
    let f_star = singleton(x_star);
    let support: Vec<(Point, Label)> = (0..k)
        .map(|x| (Point::Discrete(x), Label::from_bool(x == x_star)))
        .collect();
    let mu_tilde = LabeledDiscreteDistribution::new(support, vec![rational(1, k as i64); k])?;
    Ok(AgnosticInstance {
        mu,
        mu_tilde,
        f_star,
        x_star,
        class,
        k,
        trivial,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlendOutput {
    pub sample: Sample,
    /// Source index per entry; `0` is the `P` sample.
    pub sources: Vec<usize>,
    /// Source choices redrawn because the chosen source was used up.
    pub redraws: usize,
}

/// `n` entries, each taking the next unused element of a source chosen
/// uniformly among the `k + 1` inputs. A used-up source triggers a redraw.
pub fn blend_test_sources(p_sample: &Sample, q_samples: &[Sample], seed: Seed) -> Result<BlendOutput> {
    let n = p_sample.len();
    let mut sources: Vec<&Sample> = vec![p_sample];
    for q in q_samples {
        if q.len() != n {
            return Err(Error::LengthMismatch {
                context: "blend sources",
                left: n,
                right: q.len(),
            });
        }
        sources.push(q);
    }
    let mut rng = seed.rng();
    let mut next = vec![0usize; sources.len()];
    let mut out = Vec::with_capacity(n);
    let mut chosen = Vec::with_capacity(n);
    let mut redraws = 0;
    while out.len() < n {
        let s = rng.random_range(0..sources.len());
        if next[s] >= n {
            redraws += 1;
            continue;
        }
        out.push(sources[s].points()[next[s]]);
        next[s] += 1;
        chosen.push(s);
    }
    Ok(BlendOutput {
        sample: Sample::new(out)?,
        sources: chosen,
        redraws,
    })
}
