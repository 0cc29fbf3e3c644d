//! Certificate quantities for the intermediate-sense contractive condition
//!
//! ```text
//! b² ≤ α a² + β (a² + b²) + 2 μ β a b + ξ (+ γ D²)
//! ```
//!
//! with a = d(x, y), b = d(Tⁿx, Tⁿy) and dd = d(x − y, Tⁿx − Tⁿy). The cross
//! term is bilinear in (a, b) throughout, so every quantity here is
//! homogeneous of degree two in distances.
//!
//! The module computes the minimal correlation factor μ, the slack ξ, the
//! four-case split with its per-case bounds and the factors k, and classifies
//! mappings from the limsup of
//! `(1 + 2μₙ − βₙ) bₙ² − (αₙ + βₙ) aₙ²` over sampled pairs.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mappings::{Mapping, MappingError};
use crate::metric::{ConvexSet, MetricError, NormKind, NormedSpace, Point};
use crate::rng::CounterRng;
use crate::tolerances::{CLASSIFY_TOL, DIVERGENCE_RATIO, LIMIT_ONE_TOL, MIN_CLASSIFY_HORIZON};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertificateError {
    #[error(transparent)]
    Mapping(#[from] MappingError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("alpha_{n} = {value} is negative")]
    AlphaNegative { n: usize, value: f64 },
    #[error("beta_{n} = {value} is outside [0, 1)")]
    BetaOutOfRange { n: usize, value: f64 },
    #[error("gamma_{n} = {value} is negative")]
    GammaNegative { n: usize, value: f64 },
    #[error("mu_{n} = {mu} is outside [-1, 1]")]
    MuOutOfRange { n: usize, mu: f64 },
    #[error("mu_{n} = {mu} exceeds its bound {bound}")]
    MuAboveBound { n: usize, mu: f64, bound: f64 },
    #[error("(a = {a}, b = {b}, mu = {mu}, beta = {beta}) lies in none of the four cases")]
    OutsideCases { a: f64, b: f64, mu: f64, beta: f64 },
    #[error("inadmissible (beta = {beta}, mu = {mu}): factor denominator {denominator} is not positive")]
    InadmissibleFactor { beta: f64, mu: f64, denominator: f64 },
    #[error("the pair sampler produced no pairs")]
    SamplerExhausted,
    #[error("classification horizon {0} is below the minimum of {MIN_CLASSIFY_HORIZON}")]
    HorizonTooShort(usize),
    #[error("every sample has d(x, y) = 0")]
    DegenerateSamples,
}

pub type RuleFn = dyn Fn(usize, &Point, &Point) -> f64 + Send + Sync;

/// A user-supplied rule (n, x, y) ↦ value.
#[derive(Clone)]
pub struct CustomRule(pub Arc<RuleFn>);

impl fmt::Debug for CustomRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CustomRule(..)")
    }
}

impl PartialEq for CustomRule {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

/// A parameter sequence indexed by n ≥ 1.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamRule {
    Constant(f64),
    /// limit + (start − limit) · ratioⁿ⁻¹
    Geometric {
        start: f64,
        limit: f64,
        ratio: f64,
    },
    /// limit + scale / n
    Harmonic {
        limit: f64,
        scale: f64,
    },
    Custom(CustomRule),
}

impl ParamRule {
    pub fn value(&self, n: usize, x: &Point, y: &Point) -> f64 {
        let n = n.max(1);
        match self {
            ParamRule::Constant(v) => *v,
            ParamRule::Geometric { start, limit, ratio } => {
                limit + (start - limit) * ratio.powi((n - 1).min(i32::MAX as usize) as i32)
            }
            ParamRule::Harmonic { limit, scale } => limit + scale / n as f64,
            ParamRule::Custom(rule) => (rule.0)(n, x, y),
        }
    }

    pub fn custom(f: impl Fn(usize, &Point, &Point) -> f64 + Send + Sync + 'static) -> Self {
        ParamRule::Custom(CustomRule(Arc::new(f)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MuPolicy {
    /// The minimal feasible correlation factor of each sample.
    FromData,
    Constant(f64),
    Rule(ParamRule),
}

/// Upper bound imposed on μ when β > 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MuBound {
    /// μ ≤ (1 − β) / (2β d(x, y))
    ScaledByDistance,
    /// μ ≤ (1 − β) / (2β)
    #[default]
    Unscaled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamSequences {
    pub alpha: ParamRule,
    pub beta: ParamRule,
    pub mu: MuPolicy,
    pub gamma: ParamRule,
    pub mu_bound: MuBound,
}

impl Default for ParamSequences {
    fn default() -> Self {
        ParamSequences {
            alpha: ParamRule::Constant(1.0),
            beta: ParamRule::Constant(0.0),
            mu: MuPolicy::FromData,
            gamma: ParamRule::Constant(0.0),
            mu_bound: MuBound::Unscaled,
        }
    }
}

/// Parameter values at one (n, x, y).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamValues {
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub gamma: f64,
}

impl ParamSequences {
    pub fn constant(alpha: f64, beta: f64, mu: MuPolicy) -> Self {
        ParamSequences {
            alpha: ParamRule::Constant(alpha),
            beta: ParamRule::Constant(beta),
            mu,
            ..ParamSequences::default()
        }
    }

    /// Evaluates and checks the parameters for a sample with distances
    /// `a`, `b`, `dd`.
    pub fn evaluate(
        &self,
        n: usize,
        x: &Point,
        y: &Point,
        a: f64,
        data_mu: f64,
    ) -> Result<ParamValues, CertificateError> {
        let alpha = self.alpha.value(n, x, y);
        if !(alpha >= 0.0) {
            return Err(CertificateError::AlphaNegative { n, value: alpha });
        }
        let beta = self.beta.value(n, x, y);
        if !(0.0..1.0).contains(&beta) {
            return Err(CertificateError::BetaOutOfRange { n, value: beta });
        }
        let gamma = self.gamma.value(n, x, y);
        if !(gamma >= 0.0) {
            return Err(CertificateError::GammaNegative { n, value: gamma });
        }
        let mu = match &self.mu {
            MuPolicy::FromData => data_mu,
            MuPolicy::Constant(v) => *v,
            MuPolicy::Rule(rule) => rule.value(n, x, y),
        };
        if !(-1.0..=1.0).contains(&mu) {
            return Err(CertificateError::MuOutOfRange { n, mu });
        }
        if beta > 0.0 {
            let bound = match self.mu_bound {
                MuBound::Unscaled => (1.0 - beta) / (2.0 * beta),
                MuBound::ScaledByDistance if a > 0.0 => (1.0 - beta) / (2.0 * beta * a),
                MuBound::ScaledByDistance => f64::INFINITY,
            };
            if mu > bound {
                return Err(CertificateError::MuAboveBound { n, mu, bound });
            }
        }
        Ok(ParamValues { alpha, beta, mu, gamma })
    }
}

/// Minimal ρ ∈ [−1, 1] with dd² ≤ a² + b² + 2ρab; zero when ab = 0.
pub fn mu_from_distances(a: f64, b: f64, dd: f64) -> f64 {
    let ab = a * b;
    if ab == 0.0 {
        return 0.0;
    }
    ((dd * dd - a * a - b * b) / (2.0 * ab)).clamp(-1.0, 1.0)
}

/// Distances (a, b, dd) of a sample with images u = Tⁿx, v = Tⁿy.
pub fn sample_distances(
    space: &NormedSpace,
    x: &Point,
    y: &Point,
    u: &Point,
    v: &Point,
) -> Result<(f64, f64, f64), MetricError> {
    Ok((space.distance(x, y)?, space.distance(u, v)?, space.difference_distance(x, y, u, v)?))
}

/// Distances of a sample together with its data correlation factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleGeometry {
    pub a: f64,
    pub b: f64,
    pub dd: f64,
    pub mu: f64,
}

/// Like [`sample_distances`], plus μ. Under the euclidean norm μ is taken
/// from −⟨x − y, u − v⟩ / ab, which equals the distance formula but keeps
/// its digits when b ≪ a.
pub fn sample_geometry(
    space: &NormedSpace,
    x: &Point,
    y: &Point,
    u: &Point,
    v: &Point,
) -> Result<SampleGeometry, MetricError> {
    let (a, b, dd) = sample_distances(space, x, y, u, v)?;
    let mu = if space.norm_kind() == NormKind::Euclidean && a * b != 0.0 {
        let dot: f64 = (0..x.dim()).map(|i| (x[i] - y[i]) * (u[i] - v[i])).sum();
        (-dot / (a * b)).clamp(-1.0, 1.0)
    } else {
        mu_from_distances(a, b, dd)
    };
    Ok(SampleGeometry { a, b, dd, mu })
}

fn power_image(t: &Mapping, x: &Point, n: usize) -> Result<Point, MappingError> {
    let mut z = x.clone();
    for _ in 0..n {
        z = t.evaluate(&z)?;
    }
    Ok(z)
}

/// μₙ(x, y): the minimal correlation factor between x − y and Tⁿx − Tⁿy.
pub fn mu_min(space: &NormedSpace, t: &Mapping, x: &Point, y: &Point, n: usize) -> Result<f64, CertificateError> {
    let u = power_image(t, x, n)?;
    let v = power_image(t, y, n)?;
    Ok(sample_geometry(space, x, y, &u, &v)?.mu)
}

/// (1 − β) b² − (α + β) a² − 2μβab: how far the condition is from holding
/// without slack.
pub fn condition_deficit(p: &ParamValues, a: f64, b: f64) -> f64 {
    (1.0 - p.beta) * b * b - (p.alpha + p.beta) * a * a - 2.0 * p.mu * p.beta * a * b
}

/// ξ = max(0, deficit).
pub fn xi_slack(p: &ParamValues, a: f64, b: f64) -> f64 {
    condition_deficit(p, a, b).max(0.0)
}

/// b² ≤ αa² + β(a² + b²) + 2μβab + ξ + D_term, evaluated in the rearranged
/// form deficit ≤ ξ + D_term so that ξ = xi_slack always satisfies it.
pub fn holds(p: &ParamValues, a: f64, b: f64, xi: f64, d_term: f64) -> bool {
    condition_deficit(p, a, b) <= xi + d_term
}

/// (1 + 2μ − β) b² − (α + β) a².
pub fn intermediate_residual(p: &ParamValues, a: f64, b: f64) -> f64 {
    (1.0 + 2.0 * p.mu - p.beta) * b * b - (p.alpha + p.beta) * a * a
}

/// Checks the condition for T with slack `xi` and additive `d_term` (γD² for
/// cyclic pairs).
#[allow(clippy::too_many_arguments)]
pub fn holds_condition(
    params: &ParamSequences,
    space: &NormedSpace,
    t: &Mapping,
    x: &Point,
    y: &Point,
    n: usize,
    xi: f64,
    d_term: f64,
) -> Result<bool, CertificateError> {
    let u = power_image(t, x, n)?;
    let v = power_image(t, y, n)?;
    let g = sample_geometry(space, x, y, &u, &v)?;
    let p = params.evaluate(n, x, y, g.a, g.mu)?;
    Ok(holds(&p, g.a, g.b, xi, d_term))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseTag {
    A,
    B,
    C,
    D,
}

impl CaseTag {
    pub fn regime(self) -> Regime {
        match self {
            CaseTag::A | CaseTag::C => Regime::Expanding,
            CaseTag::B | CaseTag::D => Regime::Shrinking,
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::A => "a",
            CaseTag::B => "b",
            CaseTag::C => "c",
            CaseTag::D => "d",
        })
    }
}

impl FromStr for CaseTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "a" => Ok(CaseTag::A),
            "b" => Ok(CaseTag::B),
            "c" => Ok(CaseTag::C),
            "d" => Ok(CaseTag::D),
            other => Err(format!("unknown case tag {other:?}")),
        }
    }
}

/// Whether the pair distance grew (b ≥ a) or shrank (b < a).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Expanding,
    Shrinking,
}

impl Regime {
    pub fn of(a: f64, b: f64) -> Regime {
        if b >= a {
            Regime::Expanding
        } else {
            Regime::Shrinking
        }
    }
}

/// Splits (a, b, μ) into the four cases of the contractive condition.
///
/// Ties b = a count as expanding and μ = 0 as nonnegative. With β = 0 the
/// μ-bounds are vacuous.
pub fn classify_case(a: f64, b: f64, mu: f64, beta: f64) -> Result<CaseTag, CertificateError> {
    let outside = || CertificateError::OutsideCases { a, b, mu, beta };
    if !(0.0..1.0).contains(&beta) || !mu.is_finite() {
        return Err(outside());
    }
    let (lower, upper) = if beta == 0.0 {
        (f64::NEG_INFINITY, f64::INFINITY)
    } else {
        ((beta - 1.0) / (2.0 * beta), (1.0 - beta) / (2.0 * beta))
    };
    let expanding = Regime::of(a, b) == Regime::Expanding;
    if mu >= 0.0 {
        if mu > upper {
            return Err(outside());
        }
        Ok(if expanding { CaseTag::A } else { CaseTag::B })
    } else {
        if mu <= lower {
            return Err(outside());
        }
        Ok(if expanding { CaseTag::C } else { CaseTag::D })
    }
}

/// The two factor shapes, as (numerator, denominator).
fn factor_parts(alpha: f64, beta: f64, mu: f64, regime: Regime) -> (f64, f64) {
    // (α + β) / (1 − β(1 + 2μ))
    let inflated = (alpha + beta, 1.0 - beta * (1.0 + 2.0 * mu));
    // (α + β(1 + 2μ)) / (1 − β)
    let shifted = (alpha + beta * (1.0 + 2.0 * mu), 1.0 - beta);
    match (regime, mu >= 0.0) {
        (Regime::Expanding, true) | (Regime::Shrinking, false) => inflated,
        (Regime::Expanding, false) | (Regime::Shrinking, true) => shifted,
    }
}

/// Per-step contraction factor on squared distances.
///
/// A negative numerator is clamped to zero: the bound b² ≤ k a² + ξ′ stays
/// valid for any larger k, and k ≥ 0 is needed to chain bounds over steps.
pub fn k_factor(alpha: f64, beta: f64, mu: f64, regime: Regime) -> Result<f64, CertificateError> {
    if !(0.0..1.0).contains(&beta) {
        return Err(CertificateError::InadmissibleFactor { beta, mu, denominator: 1.0 - beta });
    }
    let (num, den) = factor_parts(alpha, beta, mu, regime);
    if !(den > 0.0) {
        return Err(CertificateError::InadmissibleFactor { beta, mu, denominator: den });
    }
    Ok(num.max(0.0) / den)
}

/// The bound b² ≤ k a² + ξ′ of one classified case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseBound {
    pub case: CaseTag,
    pub k: f64,
    /// ξ divided by the case's factor denominator.
    pub xi_normalized: f64,
}

pub fn case_bound(p: &ParamValues, a: f64, b: f64, xi: f64) -> Result<CaseBound, CertificateError> {
    let case = classify_case(a, b, p.mu, p.beta)?;
    let regime = case.regime();
    let k = k_factor(p.alpha, p.beta, p.mu, regime)?;
    let (_, den) = factor_parts(p.alpha, p.beta, p.mu, regime);
    Ok(CaseBound { case, k, xi_normalized: xi / den })
}

/// Every certificate quantity at one (x, y, n).
#[derive(Debug, Clone, PartialEq)]
pub struct CertificateSample {
    pub n: usize,
    pub x: Point,
    pub y: Point,
    /// d(x, y)
    pub a: f64,
    /// d(Tⁿx, Tⁿy)
    pub b: f64,
    /// d(x − y, Tⁿx − Tⁿy)
    pub dd: f64,
    pub params: ParamValues,
    pub mu: f64,
    pub xi: f64,
    pub k: f64,
    pub xi_normalized: f64,
    pub case_tag: CaseTag,
    /// (1 + 2μ − β) b² − (α + β) a²
    pub s: f64,
}

impl CertificateSample {
    /// Builds the sample from already computed images u = Tⁿx, v = Tⁿy.
    #[allow(clippy::too_many_arguments)]
    pub fn from_images(
        space: &NormedSpace,
        params: &ParamSequences,
        n: usize,
        x: &Point,
        y: &Point,
        u: &Point,
        v: &Point,
    ) -> Result<Self, CertificateError> {
        let SampleGeometry { a, b, dd, mu } = sample_geometry(space, x, y, u, v)?;
        let p = params.evaluate(n, x, y, a, mu)?;
        let xi = xi_slack(&p, a, b);
        let bound = case_bound(&p, a, b, xi)?;
        Ok(CertificateSample {
            n,
            x: x.clone(),
            y: y.clone(),
            a,
            b,
            dd,
            params: p,
            mu: p.mu,
            xi,
            k: bound.k,
            xi_normalized: bound.xi_normalized,
            case_tag: bound.case,
            s: intermediate_residual(&p, a, b),
        })
    }

    pub fn compute(
        space: &NormedSpace,
        t: &Mapping,
        params: &ParamSequences,
        x: &Point,
        y: &Point,
        n: usize,
    ) -> Result<Self, CertificateError> {
        let u = power_image(t, x, n)?;
        let v = power_image(t, y, n)?;
        Self::from_images(space, params, n, x, y, &u, &v)
    }

    /// Sandwich (a − b)² ≤ dd² ≤ (a + b)² to relative `rel`, ξ ≥ 0, μ ∈ [−1, 1].
    pub fn invariants_hold(&self, rel: f64) -> bool {
        sandwich_holds(self.a, self.b, self.dd, rel) && self.xi >= 0.0 && (-1.0..=1.0).contains(&self.mu)
    }
}

/// (a − b)² ≤ dd² ≤ (a + b)², with slack `rel · (a + b)²` on both sides.
pub fn sandwich_holds(a: f64, b: f64, dd: f64, rel: f64) -> bool {
    let hi = (a + b) * (a + b);
    let slack = rel * hi;
    let dd2 = dd * dd;
    (a - b) * (a - b) <= dd2 + slack && dd2 <= hi + slack
}

/// Source of (x, y) pairs for classification.
#[derive(Debug, Clone, PartialEq)]
pub enum PairSampler {
    Fixed(Vec<(Point, Point)>),
    /// `count` pairs with x drawn from `x_region` and y from `y_region`.
    Regions {
        x_region: ConvexSet,
        y_region: ConvexSet,
        count: usize,
        seed: u64,
    },
}

impl PairSampler {
    pub fn pairs(&self) -> Result<Vec<(Point, Point)>, CertificateError> {
        let pairs = match self {
            PairSampler::Fixed(p) => p.clone(),
            PairSampler::Regions { x_region, y_region, count, seed } => {
                let rng = CounterRng::new(*seed);
                let mut xs = rng.substream(1);
                let mut ys = rng.substream(2);
                (0..*count)
                    .map(|_| Ok((x_region.sample(&mut xs)?, y_region.sample(&mut ys)?)))
                    .collect::<Result<Vec<_>, MetricError>>()?
            }
        };
        if pairs.is_empty() {
            return Err(CertificateError::SamplerExhausted);
        }
        Ok(pairs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    BetaStrictPseudocontractiveIS,
    PseudocontractiveIS,
    BetaStrictContractiveIS,
    ContractiveIS,
    AsymptoticallyNonexpansive,
    Unclassified,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::BetaStrictPseudocontractiveIS => "beta_strict_pseudocontractive_is",
            Verdict::PseudocontractiveIS => "pseudocontractive_is",
            Verdict::BetaStrictContractiveIS => "beta_strict_contractive_is",
            Verdict::ContractiveIS => "contractive_is",
            Verdict::AsymptoticallyNonexpansive => "asymptotically_nonexpansive",
            Verdict::Unclassified => "unclassified",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub verdict: Verdict,
    pub beta_limit: f64,
    pub alpha_limit: f64,
    pub limsup_estimate: f64,
    /// sₙ for n = 1..=N (max over pairs).
    pub s_series: Vec<f64>,
    /// Some orbit pair blew up before the horizon.
    pub diverged: bool,
    /// Ordered by n, then by pair index.
    pub evidence: Vec<CertificateSample>,
}

/// Samples one pair for n = 1..=horizon. The flag reports divergence,
/// at which point the series stops early.
pub fn pair_series(
    space: &NormedSpace,
    t: &Mapping,
    params: &ParamSequences,
    x: &Point,
    y: &Point,
    horizon: usize,
) -> Result<(Vec<CertificateSample>, bool), CertificateError> {
    let mut u = x.clone();
    let mut v = y.clone();
    let mut out = Vec::with_capacity(horizon);
    for n in 1..=horizon {
        u = match t.evaluate(&u) {
            Ok(p) => p,
            Err(MappingError::NonFiniteImage) => return Ok((out, true)),
            Err(e) => return Err(e.into()),
        };
        v = match t.evaluate(&v) {
            Ok(p) => p,
            Err(MappingError::NonFiniteImage) => return Ok((out, true)),
            Err(e) => return Err(e.into()),
        };
        let sample = CertificateSample::from_images(space, params, n, x, y, &u, &v)?;
        let blown = !sample.b.is_finite()
            || !sample.s.is_finite()
            || (sample.a > 0.0 && sample.b > DIVERGENCE_RATIO * sample.a);
        out.push(sample);
        if blown {
            return Ok((out, true));
        }
    }
    Ok((out, false))
}

/// Classifies T from sₙ = maxₓᵧ (1 + 2μₙ − βₙ) bₙ² − (αₙ + βₙ) aₙ² for
/// n = 1..=horizon, using the maximum over the last quarter of n as the
/// limsup estimate and `tol` as its threshold.
///
/// Verdicts, after requiring limsup ≤ tol and no divergence:
/// α∞ < 1 gives β-strict contractive (contractive if β∞ = 1); α∞ = 1 with
/// β∞ = 1 gives pseudocontractive; α∞ = 1 with αₙ + 2βₙ(1 + μₙ) → 1 gives
/// asymptotically nonexpansive; α∞ = 1 otherwise gives β-strict
/// pseudocontractive. Anything else is unclassified.
pub fn classify_mapping_with(
    space: &NormedSpace,
    t: &Mapping,
    params: &ParamSequences,
    sampler: &PairSampler,
    horizon: usize,
    tol: f64,
) -> Result<Classification, CertificateError> {
    if horizon < MIN_CLASSIFY_HORIZON {
        return Err(CertificateError::HorizonTooShort(horizon));
    }
    let pairs = sampler.pairs()?;
    let runs: Vec<(Vec<CertificateSample>, bool)> =
        pairs.par_iter().map(|(x, y)| pair_series(space, t, params, x, y, horizon)).collect::<Result<_, _>>()?;

    let diverged = runs.iter().any(|(_, d)| *d);
    let mut evidence = Vec::new();
    let mut s_series = Vec::with_capacity(horizon);
    for n in 1..=horizon {
        let mut s_n = f64::NEG_INFINITY;
        for (samples, _) in &runs {
            if let Some(sample) = samples.get(n - 1) {
                s_n = s_n.max(sample.s);
                evidence.push(sample.clone());
            }
        }
        if s_n == f64::NEG_INFINITY {
            break;
        }
        s_series.push(s_n);
    }

    let tail_start = horizon - horizon.div_ceil(4);
    let limsup_estimate =
        if diverged { f64::INFINITY } else { s_series[tail_start..].iter().copied().fold(f64::NEG_INFINITY, f64::max) };

    let last: Vec<&CertificateSample> = runs.iter().filter_map(|(s, _)| s.last()).collect();
    let alpha_limit = last.iter().map(|s| s.params.alpha).fold(f64::NEG_INFINITY, f64::max);
    let beta_limit = last.iter().map(|s| s.params.beta).fold(f64::NEG_INFINITY, f64::max);
    let nonexpansive_sum = last.iter().all(|s| {
        let p = s.params;
        (p.alpha + 2.0 * p.beta * (1.0 + p.mu) - 1.0).abs() <= LIMIT_ONE_TOL
    });

    let beta_is_one = (beta_limit - 1.0).abs() <= LIMIT_ONE_TOL;
    let alpha_is_one = (alpha_limit - 1.0).abs() <= LIMIT_ONE_TOL;
    let verdict = if diverged || !(limsup_estimate <= tol) {
        Verdict::Unclassified
    } else if (0.0..1.0 - LIMIT_ONE_TOL).contains(&alpha_limit) {
        if beta_is_one {
            Verdict::ContractiveIS
        } else {
            Verdict::BetaStrictContractiveIS
        }
    } else if alpha_is_one {
        if beta_is_one {
            Verdict::PseudocontractiveIS
        } else if nonexpansive_sum {
            Verdict::AsymptoticallyNonexpansive
        } else {
            Verdict::BetaStrictPseudocontractiveIS
        }
    } else {
        Verdict::Unclassified
    };

    Ok(Classification { verdict, beta_limit, alpha_limit, limsup_estimate, s_series, diverged, evidence })
}

pub fn classify_mapping(
    space: &NormedSpace,
    t: &Mapping,
    params: &ParamSequences,
    sampler: &PairSampler,
    horizon: usize,
) -> Result<Classification, CertificateError> {
    classify_mapping_with(space, t, params, sampler, horizon, CLASSIFY_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaFit {
    pub n: usize,
    pub alpha: f64,
}

/// Smallest α̂ₙ ≥ 0 such that the condition holds with ξ = 0 on every sample,
/// with μ taken from the data.
pub fn fit_minimal_alpha(
    space: &NormedSpace,
    t: &Mapping,
    samples: &[(Point, Point)],
    beta: f64,
    n_range: RangeInclusive<usize>,
) -> Result<Vec<AlphaFit>, CertificateError> {
    if !(0.0..1.0).contains(&beta) {
        return Err(CertificateError::BetaOutOfRange { n: *n_range.start(), value: beta });
    }
    let mut a_values = Vec::with_capacity(samples.len());
    for (x, y) in samples {
        a_values.push(space.distance(x, y)?);
    }
    if !a_values.iter().any(|&a| a > 0.0) {
        return Err(CertificateError::DegenerateSamples);
    }
    let mut images: Vec<(Point, Point)> = samples.to_vec();
    let mut step = 0usize;
    let mut table = Vec::new();
    for n in n_range {
        while step < n {
            for (u, v) in images.iter_mut() {
                *u = t.evaluate(u)?;
                *v = t.evaluate(v)?;
            }
            step += 1;
        }
        let mut rows = Vec::with_capacity(samples.len());
        for ((x, y), (u, v)) in samples.iter().zip(&images) {
            let g = sample_geometry(space, x, y, u, v)?;
            rows.push((g.a, g.b, g.mu));
        }
        let mut alpha = rows
            .iter()
            .filter(|(a, _, _)| *a > 0.0)
            .map(|&(a, b, mu)| ((1.0 - beta) * b * b - beta * a * a - 2.0 * mu * beta * a * b) / (a * a))
            .fold(0.0_f64, f64::max);
        // Undo rounding so the fitted α satisfies the condition exactly.
        while !rows.iter().all(|&(a, b, mu)| holds(&ParamValues { alpha, beta, mu, gamma: 0.0 }, a, b, 0.0, 0.0)) {
            alpha = alpha.next_up();
        }
        table.push(AlphaFit { n, alpha });
    }
    Ok(table)
}

/// One-step certificates along an orbit pair: step j certifies
/// (Tʲ⁻¹x, Tʲ⁻¹y) ↦ (Tʲx, Tʲy) with parameters at index j.
#[derive(Debug, Clone, PartialEq)]
pub struct StepChain {
    pub steps: Vec<CertificateSample>,
    /// d(Tʲx, Tʲy)² for j = 0..=N.
    pub distances_sq: Vec<f64>,
    /// Chained bound Bⱼ = kⱼ Bⱼ₋₁ + ξ′ⱼ with B₀ = d(x, y)².
    pub bounds: Vec<f64>,
}

pub fn step_chain(
    space: &NormedSpace,
    t: &Mapping,
    params: &ParamSequences,
    x: &Point,
    y: &Point,
    steps: usize,
) -> Result<StepChain, CertificateError> {
    let d0 = space.distance(x, y)?;
    let mut chain = StepChain { steps: Vec::with_capacity(steps), distances_sq: vec![d0 * d0], bounds: vec![d0 * d0] };
    let mut u = x.clone();
    let mut v = y.clone();
    for j in 1..=steps {
        let nu = t.evaluate(&u)?;
        let nv = t.evaluate(&v)?;
        let sample = CertificateSample::from_images(space, params, j, &u, &v, &nu, &nv)?;
        let prev = chain.bounds[j - 1];
        chain.bounds.push(sample.k * prev + sample.xi_normalized);
        chain.distances_sq.push(sample.b * sample.b);
        chain.steps.push(sample);
        u = nu;
        v = nv;
    }
    Ok(chain)
}
