//! Experiment configuration: the TOML document schema and its validation into
//! library objects.
//!
//! ```toml
//! [space]
//! dimension = 1
//! norm = "euclidean"          # "max", or { p = 3.0 }
//!
//! [sets.A]
//! kind = "box"
//! lo = [1.0]
//! hi = [2.0]
//!
//! [mapping]
//! kind = "affine"             # scaled_rotation, projected_affine, cyclic
//! q = [0.5]                   # row-major
//! c = [1.0]
//!
//! [params]
//! alpha = 1.0                 # or { kind = "geometric", start, limit, ratio }
//! beta = 0.0                  #    { kind = "harmonic", limit, scale }
//! mu = "from_data"            # or a number, or a rule table
//! gamma = 0.0
//! mu_bound = "unscaled"       # or "scaled_by_distance"
//!
//! [run]
//! mode = "orbit"              # proximity, certify, classify, sweep
//! starts = [[0.0]]
//! seed = 7
//! ```

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::certificates::{MuBound, MuPolicy, PairSampler, ParamRule, ParamSequences};
use crate::mappings::{make_two_cyclic, Mapping, Matrix, Tiebreak};
use crate::metric::{ConvexSet, Halfspace, NormKind, NormedSpace, Point};
use crate::tolerances::{
    CLASSIFY_TOL, DEFAULT_MAX_ITER, FIXED_POINT_TOL, MAX_DIMENSION, MAX_ITER_CAP, MIN_CLASSIFY_HORIZON,
    PROXIMITY_GAP_TOL,
};

/// Horizon used by certify/classify/sweep when `n_max` is not given.
pub const DEFAULT_HORIZON: usize = 32;
/// Pair count used by certify/classify/sweep when `samples` is not given.
pub const DEFAULT_SAMPLES: usize = 32;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("malformed config: {0}")]
    Parse(String),
    #[error("invalid config:\n  - {}", .0.join("\n  - "))]
    Invalid(Vec<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Orbit,
    Proximity,
    Certify,
    Classify,
    Sweep,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Orbit => "orbit",
            Mode::Proximity => "proximity",
            Mode::Certify => "certify",
            Mode::Classify => "classify",
            Mode::Sweep => "sweep",
        }
    }

    pub fn is_sampled(self) -> bool {
        matches!(self, Mode::Certify | Mode::Classify | Mode::Sweep)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormName {
    Euclidean,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NormSpec {
    Named(NormName),
    P { p: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub dimension: usize,
    #[serde(default = "default_norm")]
    pub norm: NormSpec,
}

fn default_norm() -> NormSpec {
    NormSpec::Named(NormName::Euclidean)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetSpec {
    Ball { center: Vec<f64>, radius: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Halfspaces { normals: Vec<Vec<f64>>, offsets: Vec<f64>, witness: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TiebreakSpec {
    PreferA,
    PreferB,
}

fn yes() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MappingSpec {
    Affine {
        q: Vec<f64>,
        c: Vec<f64>,
    },
    ScaledRotation {
        angle: f64,
        scale: f64,
    },
    ProjectedAffine {
        target: String,
        q: Vec<f64>,
        c: Vec<f64>,
    },
    Cyclic {
        a: String,
        b: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tiebreak: Option<TiebreakSpec>,
        #[serde(default = "yes", skip_serializing_if = "is_true")]
        project_images: bool,
        forward: Box<MappingSpec>,
        backward: Box<MappingSpec>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RuleTable {
    Geometric { start: f64, limit: f64, ratio: f64 },
    Harmonic { limit: f64, scale: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RuleSpec {
    Constant(f64),
    Table(RuleTable),
}

impl RuleSpec {
    fn rule(&self) -> ParamRule {
        match self {
            RuleSpec::Constant(v) => ParamRule::Constant(*v),
            RuleSpec::Table(RuleTable::Geometric { start, limit, ratio }) => {
                ParamRule::Geometric { start: *start, limit: *limit, ratio: *ratio }
            }
            RuleSpec::Table(RuleTable::Harmonic { limit, scale }) => {
                ParamRule::Harmonic { limit: *limit, scale: *scale }
            }
        }
    }

    /// Closed hull of the values taken for n ≥ 1, plus whether the limit end
    /// is only approached (never attained).
    fn range(&self) -> Result<(f64, f64, bool), String> {
        match self {
            RuleSpec::Constant(v) => Ok((*v, *v, false)),
            RuleSpec::Table(RuleTable::Geometric { start, limit, ratio }) => {
                if !(0.0..1.0).contains(ratio) {
                    return Err(format!("geometric ratio must lie in [0, 1), got {ratio}"));
                }
                Ok((start.min(*limit), start.max(*limit), *ratio > 0.0 && start != limit))
            }
            RuleSpec::Table(RuleTable::Harmonic { limit, scale }) => {
                let first = limit + scale;
                Ok((first.min(*limit), first.max(*limit), *scale != 0.0))
            }
        }
    }

    fn values_finite(&self) -> bool {
        match self {
            RuleSpec::Constant(v) => v.is_finite(),
            RuleSpec::Table(RuleTable::Geometric { start, limit, ratio }) => {
                start.is_finite() && limit.is_finite() && ratio.is_finite()
            }
            RuleSpec::Table(RuleTable::Harmonic { limit, scale }) => limit.is_finite() && scale.is_finite(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MuName {
    FromData,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MuSpec {
    Named(MuName),
    Rule(RuleSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum MuBoundSpec {
    ScaledByDistance,
    #[default]
    Unscaled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    #[serde(default = "one")]
    pub alpha: RuleSpec,
    #[serde(default = "zero")]
    pub beta: RuleSpec,
    #[serde(default = "from_data")]
    pub mu: MuSpec,
    #[serde(default = "zero")]
    pub gamma: RuleSpec,
    #[serde(default)]
    pub mu_bound: MuBoundSpec,
}

fn one() -> RuleSpec {
    RuleSpec::Constant(1.0)
}

fn zero() -> RuleSpec {
    RuleSpec::Constant(0.0)
}

fn from_data() -> MuSpec {
    MuSpec::Named(MuName::FromData)
}

impl Default for ParamsSpec {
    fn default() -> Self {
        ParamsSpec { alpha: one(), beta: zero(), mu: from_data(), gamma: zero(), mu_bound: MuBoundSpec::Unscaled }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    Alpha,
    Beta,
    Mu,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub starts: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Set the x of each sampled pair is drawn from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_x: Option<String>,
    /// Set the y of each sampled pair is drawn from (defaults to `sample_x`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_y: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

/// The configuration document as written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    pub space: SpaceSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sets: BTreeMap<String, SetSpec>,
    pub mapping: MappingSpec,
    #[serde(default)]
    pub params: ParamsSpec,
    #[serde(default)]
    pub run: RunSpec,
}

/// Command-line overrides applied to a document before validation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub mode: Option<Mode>,
    pub seed: Option<u64>,
    pub max_iter: Option<usize>,
    pub tol: Option<f64>,
}

impl ConfigDoc {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config documents always serialize")
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(m) = o.mode {
            self.run.mode = Some(m);
        }
        if let Some(s) = o.seed {
            self.run.seed = Some(s);
        }
        if let Some(n) = o.max_iter {
            self.run.n_max = Some(n);
        }
        if let Some(t) = o.tol {
            self.run.tol = Some(t);
        }
    }

    /// SHA-256 of the canonical serialization.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }
}

/// Resolved run settings with defaults filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSettings {
    pub mode: Mode,
    pub starts: Vec<Point>,
    pub n_max: usize,
    pub tol: f64,
    pub gap_tol: f64,
    pub samples: usize,
    pub seed: Option<u64>,
    pub sample_x: ConvexSet,
    pub sample_y: ConvexSet,
    pub sweep: Option<SweepSpec>,
}

impl RunSettings {
    pub fn sampler(&self) -> PairSampler {
        PairSampler::Regions {
            x_region: self.sample_x.clone(),
            y_region: self.sample_y.clone(),
            count: self.samples,
            seed: self.seed.unwrap_or(0),
        }
    }
}

/// A fully validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub doc: ConfigDoc,
    pub space: NormedSpace,
    pub sets: BTreeMap<String, ConvexSet>,
    pub mapping: Mapping,
    pub params: ParamSequences,
    pub run: RunSettings,
}

impl ExperimentConfig {
    pub fn to_toml(&self) -> String {
        self.doc.to_toml()
    }

    pub fn digest(&self) -> String {
        self.doc.digest()
    }
}

pub fn load_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    validate(ConfigDoc::parse(text)?)
}

pub fn load_config_with(text: &str, overrides: &Overrides) -> Result<ExperimentConfig, ConfigError> {
    let mut doc = ConfigDoc::parse(text)?;
    doc.apply(overrides);
    validate(doc)
}

struct Validator {
    dim: usize,
    errors: Vec<String>,
}

impl Validator {
    fn point(&mut self, what: &str, v: &[f64]) -> Option<Point> {
        if v.len() != self.dim {
            self.errors.push(format!("{what}: expected {} coordinates, found {}", self.dim, v.len()));
            return None;
        }
        match Point::new(v.to_vec()) {
            Ok(p) => Some(p),
            Err(e) => {
                self.errors.push(format!("{what}: {e}"));
                None
            }
        }
    }

    fn matrix(&mut self, what: &str, q: &[f64]) -> Option<Matrix> {
        match Matrix::from_row_major(self.dim, q.to_vec()) {
            Ok(m) => Some(m),
            Err(e) => {
                self.errors.push(format!("{what}: {e}"));
                None
            }
        }
    }

    fn set(&mut self, name: &str, spec: &SetSpec) -> Option<ConvexSet> {
        let what = format!("sets.{name}");
        let built = match spec {
            SetSpec::Ball { center, radius } => {
                let c = self.point(&format!("{what}.center"), center)?;
                ConvexSet::ball(c, *radius)
            }
            SetSpec::Box { lo, hi } => {
                let lo = self.point(&format!("{what}.lo"), lo);
                let hi = self.point(&format!("{what}.hi"), hi);
                ConvexSet::boxed(lo?, hi?)
            }
            SetSpec::Halfspaces { normals, offsets, witness } => {
                if normals.len() != offsets.len() {
                    self.errors.push(format!("{what}: {} normals but {} offsets", normals.len(), offsets.len()));
                    return None;
                }
                let w = self.point(&format!("{what}.witness"), witness);
                let mut hs = Vec::new();
                for (i, (nrm, off)) in normals.iter().zip(offsets).enumerate() {
                    let n = self.point(&format!("{what}.normals[{i}]"), nrm)?;
                    hs.push(Halfspace { normal: n, offset: *off });
                }
                ConvexSet::halfspaces(hs, w?)
            }
        };
        match built {
            Ok(s) => Some(s),
            Err(e) => {
                self.errors.push(format!("{what}: {e}"));
                None
            }
        }
    }

    fn lookup<'a>(
        &mut self,
        what: &str,
        name: &str,
        sets: &'a BTreeMap<String, ConvexSet>,
        declared: &BTreeMap<String, SetSpec>,
    ) -> Option<&'a ConvexSet> {
        match sets.get(name) {
            Some(s) => Some(s),
            None => {
                // Sets that failed their own validation were already reported.
                if !declared.contains_key(name) {
                    self.errors.push(format!("{what}: undefined set {name:?}"));
                }
                None
            }
        }
    }

    fn mapping(
        &mut self,
        what: &str,
        spec: &MappingSpec,
        sets: &BTreeMap<String, ConvexSet>,
        declared: &BTreeMap<String, SetSpec>,
        nested: bool,
    ) -> Option<Mapping> {
        match spec {
            MappingSpec::Affine { q, c } => {
                let q = self.matrix(&format!("{what}.q"), q);
                let c = self.point(&format!("{what}.c"), c);
                Some(Mapping::Affine { q: q?, c: c? })
            }
            MappingSpec::ScaledRotation { angle, scale } => {
                if self.dim < 2 {
                    self.errors.push(format!("{what}: scaled_rotation needs dimension >= 2"));
                    return None;
                }
                if !angle.is_finite() || !scale.is_finite() {
                    self.errors.push(format!("{what}: angle and scale must be finite"));
                    return None;
                }
                Some(Mapping::ScaledRotation { angle: *angle, scale: *scale })
            }
            MappingSpec::ProjectedAffine { target, q, c } => {
                let t = self.lookup(&format!("{what}.target"), target, sets, declared).cloned();
                let q = self.matrix(&format!("{what}.q"), q);
                let c = self.point(&format!("{what}.c"), c);
                Some(Mapping::ProjectedAffine { target: t?, q: q?, c: c? })
            }
            MappingSpec::Cyclic { a, b, tiebreak, project_images, forward, backward } => {
                if nested {
                    self.errors.push(format!("{what}: cyclic maps cannot be nested"));
                    return None;
                }
                let sa = self.lookup(&format!("{what}.a"), a, sets, declared).cloned();
                let sb = self.lookup(&format!("{what}.b"), b, sets, declared).cloned();
                let f = self.mapping(&format!("{what}.forward"), forward, sets, declared, true);
                let g = self.mapping(&format!("{what}.backward"), backward, sets, declared, true);
                let tb = tiebreak.map(|t| match t {
                    TiebreakSpec::PreferA => Tiebreak::PreferA,
                    TiebreakSpec::PreferB => Tiebreak::PreferB,
                });
                match make_two_cyclic(sa?, sb?, f?, g?, tb) {
                    Ok(mut pair) => {
                        pair.project_images = *project_images;
                        Some(Mapping::Cyclic(Box::new(pair)))
                    }
                    Err(e) => {
                        self.errors.push(format!("{what}: {e}"));
                        None
                    }
                }
            }
        }
    }

    fn rule_in(&mut self, what: &str, spec: &RuleSpec, lo: f64, hi: f64, hi_open: bool, note: &str) {
        if !spec.values_finite() {
            self.errors.push(format!("{what}: values must be finite"));
            return;
        }
        let (min, max, approached) = match spec.range() {
            Ok(r) => r,
            Err(e) => {
                self.errors.push(format!("{what}: {e}"));
                return;
            }
        };
        let max_ok = if hi_open {
            // Sequences may tend to the open end as long as they never reach it.
            max < hi || (max == hi && approached && spec_tends_up_to(spec, hi))
        } else {
            max <= hi
        };
        if min < lo || !max_ok {
            self.errors.push(format!("{what}: values range over [{min}, {max}], outside {note}"));
        }
    }
}

/// True when the rule's limit equals `hi` and it starts strictly below it.
fn spec_tends_up_to(spec: &RuleSpec, hi: f64) -> bool {
    match spec {
        RuleSpec::Constant(_) => false,
        RuleSpec::Table(RuleTable::Geometric { start, limit, .. }) => *limit == hi && *start < hi,
        RuleSpec::Table(RuleTable::Harmonic { limit, scale }) => *limit == hi && *scale < 0.0,
    }
}

/// Validates a document, reporting every failure at once.
pub fn validate(doc: ConfigDoc) -> Result<ExperimentConfig, ConfigError> {
    let dim = doc.space.dimension;
    let mut v = Validator { dim, errors: Vec::new() };
    if dim == 0 || dim > MAX_DIMENSION {
        v.errors.push(format!("space.dimension must lie in 1..={MAX_DIMENSION}, got {dim}"));
        return Err(ConfigError::Invalid(v.errors));
    }
    let norm = match doc.space.norm {
        NormSpec::Named(NormName::Euclidean) => NormKind::Euclidean,
        NormSpec::Named(NormName::Max) => NormKind::Max,
        NormSpec::P { p } => NormKind::PNorm(p),
    };
    let space = match NormedSpace::new(dim, norm) {
        Ok(s) => Some(s),
        Err(e) => {
            v.errors.push(format!("space.norm: {e}"));
            None
        }
    };

    let mut sets = BTreeMap::new();
    for (name, spec) in &doc.sets {
        if let Some(s) = v.set(name, spec) {
            sets.insert(name.clone(), s);
        }
    }
    let mapping = v.mapping("mapping", &doc.mapping, &sets, &doc.sets, false);

    let ps = &doc.params;
    v.rule_in("params.alpha", &ps.alpha, 0.0, f64::INFINITY, false, "[0, inf)");
    v.rule_in("params.beta", &ps.beta, 0.0, 1.0, true, "the admissible range beta_n in [0, 1)");
    v.rule_in("params.gamma", &ps.gamma, 0.0, f64::INFINITY, false, "[0, inf)");
    let mu = match &ps.mu {
        MuSpec::Named(MuName::FromData) => MuPolicy::FromData,
        MuSpec::Rule(r) => {
            v.rule_in("params.mu", r, -1.0, 1.0, false, "[-1, 1]");
            match r {
                RuleSpec::Constant(c) => MuPolicy::Constant(*c),
                RuleSpec::Table(_) => MuPolicy::Rule(r.rule()),
            }
        }
    };
    let params = ParamSequences {
        alpha: ps.alpha.rule(),
        beta: ps.beta.rule(),
        mu,
        gamma: ps.gamma.rule(),
        mu_bound: match ps.mu_bound {
            MuBoundSpec::ScaledByDistance => MuBound::ScaledByDistance,
            MuBoundSpec::Unscaled => MuBound::Unscaled,
        },
    };

    let run = &doc.run;
    let mode = run.mode.unwrap_or(Mode::Orbit);
    let mut starts = Vec::new();
    for (i, s) in run.starts.iter().enumerate() {
        if let Some(p) = v.point(&format!("run.starts[{i}]"), s) {
            starts.push(p);
        }
    }
    if matches!(mode, Mode::Orbit | Mode::Proximity) && run.starts.is_empty() {
        v.errors.push(format!("run.starts: {mode} mode needs at least one start"));
    }
    if mode == Mode::Proximity && !matches!(doc.mapping, MappingSpec::Cyclic { .. }) {
        v.errors.push("mapping: proximity mode needs a cyclic mapping".into());
    }
    if mode.is_sampled() && run.seed.is_none() {
        v.errors.push(format!("run.seed: missing seed for sampled mode {mode}"));
    }
    if mode == Mode::Sweep {
        match &run.sweep {
            None => v.errors.push("run.sweep: sweep mode needs a sweep table".into()),
            Some(s) if s.values.is_empty() => v.errors.push("run.sweep.values: empty".into()),
            Some(s) if s.values.iter().any(|x| !x.is_finite()) => {
                v.errors.push("run.sweep.values: values must be finite".into())
            }
            Some(_) => {}
        }
    }
    let n_max = run.n_max.unwrap_or(if mode.is_sampled() { DEFAULT_HORIZON } else { DEFAULT_MAX_ITER });
    if n_max == 0 || n_max > MAX_ITER_CAP {
        v.errors.push(format!("run.n_max must lie in 1..={MAX_ITER_CAP}, got {n_max}"));
    }
    if matches!(mode, Mode::Classify | Mode::Sweep) && n_max < MIN_CLASSIFY_HORIZON {
        v.errors.push(format!("run.n_max: classification needs at least {MIN_CLASSIFY_HORIZON}, got {n_max}"));
    }
    let tol = run.tol.unwrap_or(if mode.is_sampled() { CLASSIFY_TOL } else { FIXED_POINT_TOL });
    if !(tol > 0.0) || !tol.is_finite() {
        v.errors.push(format!("run.tol must be positive, got {tol}"));
    }
    let gap_tol = run.gap_tol.unwrap_or(PROXIMITY_GAP_TOL);
    if !(gap_tol > 0.0) || !gap_tol.is_finite() {
        v.errors.push(format!("run.gap_tol must be positive, got {gap_tol}"));
    }
    let samples = run.samples.unwrap_or(DEFAULT_SAMPLES);
    if mode.is_sampled() && samples == 0 {
        v.errors.push("run.samples must be positive".into());
    }

    let default_region = || {
        ConvexSet::boxed(Point::new(vec![-1.0; dim]).expect("finite"), Point::new(vec![1.0; dim]).expect("finite"))
            .expect("ordered box")
    };
    let cyclic_sets = match &mapping {
        Some(Mapping::Cyclic(pair)) => Some((pair.a.clone(), pair.b.clone())),
        _ => None,
    };
    let sample_x = match &run.sample_x {
        Some(name) => v.lookup("run.sample_x", name, &sets, &doc.sets).cloned(),
        None => Some(cyclic_sets.as_ref().map(|(a, _)| a.clone()).unwrap_or_else(default_region)),
    };
    let sample_y = match (&run.sample_y, &run.sample_x) {
        (Some(name), _) => v.lookup("run.sample_y", name, &sets, &doc.sets).cloned(),
        (None, Some(_)) => sample_x.clone(),
        (None, None) => Some(cyclic_sets.as_ref().map(|(_, b)| b.clone()).unwrap_or_else(default_region)),
    };

    if !v.errors.is_empty() {
        return Err(ConfigError::Invalid(v.errors));
    }
    let (Some(space), Some(mapping), Some(sample_x), Some(sample_y)) = (space, mapping, sample_x, sample_y) else {
        return Err(ConfigError::Invalid(vec!["config could not be resolved".into()]));
    };
    let run = RunSettings {
        mode,
        starts,
        n_max,
        tol,
        gap_tol,
        samples,
        seed: run.seed,
        sample_x,
        sample_y,
        sweep: run.sweep.clone(),
    };
    Ok(ExperimentConfig { doc, space, sets, mapping, params, run })
}
