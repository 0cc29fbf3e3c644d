//! Executes a validated experiment and assembles its report.

use rayon::prelude::*;
use thiserror::Error;

use crate::certificates::{
    classify_mapping_with, holds, pair_series, CertificateError, CertificateSample, Classification, MuPolicy,
    ParamRule, ParamSequences,
};
use crate::mappings::Mapping;
use crate::metric::{set_distance, Point};
use crate::orbit::{best_proximity_run, run_to_fixed_point, OrbitError, OrbitTrace, OrbitVerdict};

use super::config::{ExperimentConfig, Mode, SweepParameter};
use super::report::{ReportRecord, ReportSection, TraceRow};

/// A runtime failure, annotated with the mode and (when known) the step n.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("{mode} run failed{}: {message}", .n.map(|n| format!(" at n = {n}")).unwrap_or_default())]
pub struct RunError {
    pub mode: Mode,
    pub n: Option<usize>,
    pub message: String,
}

impl RunError {
    fn certificate(mode: Mode, e: CertificateError) -> Self {
        let n = match &e {
            CertificateError::AlphaNegative { n, .. }
            | CertificateError::BetaOutOfRange { n, .. }
            | CertificateError::GammaNegative { n, .. }
            | CertificateError::MuOutOfRange { n, .. }
            | CertificateError::MuAboveBound { n, .. } => Some(*n),
            _ => None,
        };
        RunError { mode, n, message: e.to_string() }
    }

    fn at(mode: Mode, n: usize, e: CertificateError) -> Self {
        RunError { n: Some(n), ..Self::certificate(mode, e) }
    }

    fn orbit(mode: Mode, e: OrbitError) -> Self {
        RunError { mode, n: None, message: e.to_string() }
    }
}

/// Rows for the pair (x₀, x₁) against (xₙ, xₙ₊₁) along an orbit.
fn orbit_rows(cfg: &ExperimentConfig, mode: Mode, points: &[Point]) -> Result<Vec<TraceRow>, RunError> {
    if points.len() < 3 {
        return Ok(Vec::new());
    }
    (1..points.len() - 1)
        .map(|n| {
            CertificateSample::from_images(
                &cfg.space,
                &cfg.params,
                n,
                &points[0],
                &points[1],
                &points[n],
                &points[n + 1],
            )
            .map(|s| TraceRow::from(&s))
            .map_err(|e| RunError::at(mode, n, e))
        })
        .collect()
}

fn orbit_section(cfg: &ExperimentConfig, i: usize, trace: &OrbitTrace) -> Result<ReportSection, RunError> {
    let mut section = ReportSection { label: format!("start_{i}"), ..Default::default() };
    section.scalars.insert("iterations_used".into(), trace.iterations_used as f64);
    if let Some(last) = trace.self_distances.last() {
        section.scalars.insert("final_step".into(), *last);
    }
    match &trace.verdict {
        OrbitVerdict::FixedPoint(z) => {
            let tz = cfg.mapping.evaluate(z).map_err(|e| RunError::orbit(Mode::Orbit, e.into()))?;
            let residual = cfg.space.distance(z, &tz).map_err(|e| RunError::orbit(Mode::Orbit, e.into()))?;
            section.verdict = "fixed_point".into();
            section.achieved = true;
            section.scalars.insert("fixed_point_residual".into(), residual);
            section.vectors.insert("fixed_point".into(), z.coords().to_vec());
        }
        OrbitVerdict::ProximityCycle { .. } | OrbitVerdict::NoConvergence => {
            section.verdict = "no_convergence".into();
        }
    }
    section.rows = orbit_rows(cfg, Mode::Orbit, &trace.points)?;
    Ok(section)
}

fn run_orbit(cfg: &ExperimentConfig) -> Result<Vec<ReportSection>, RunError> {
    cfg.run
        .starts
        .iter()
        .enumerate()
        .map(|(i, x0)| {
            let trace = run_to_fixed_point(&cfg.space, &cfg.mapping, x0, cfg.run.tol, cfg.run.n_max)
                .map_err(|e| RunError::orbit(Mode::Orbit, e))?;
            orbit_section(cfg, i, &trace)
        })
        .collect()
}

fn run_proximity(cfg: &ExperimentConfig) -> Result<Vec<ReportSection>, RunError> {
    let Mapping::Cyclic(pair) = &cfg.mapping else {
        return Err(RunError { mode: Mode::Proximity, n: None, message: "mapping is not cyclic".into() });
    };
    let mut sections = Vec::new();
    for (i, x0) in cfg.run.starts.iter().enumerate() {
        let mut section = ReportSection { label: format!("start_{i}"), ..Default::default() };
        match best_proximity_run(&cfg.space, pair, x0, cfg.run.tol, cfg.run.n_max) {
            Ok(rep) => {
                section.achieved = rep.gap.abs() <= cfg.run.gap_tol && rep.parity_ok;
                section.verdict = if section.achieved { "proximity_cycle" } else { "gap_not_closed" }.into();
                for (k, v) in [
                    ("pair_distance", rep.pair_distance),
                    ("set_distance", rep.set_distance),
                    ("gap", rep.gap),
                    ("parity_iterations", rep.parity_iterations as f64),
                    ("continuity_residual", rep.continuity_residual),
                    ("parity_ok", if rep.parity_ok { 1.0 } else { 0.0 }),
                ] {
                    section.scalars.insert(k.into(), v);
                }
                section.vectors.insert("z1".into(), rep.z1.coords().to_vec());
                section.vectors.insert("z2".into(), rep.z2.coords().to_vec());
                section.rows = orbit_rows(cfg, Mode::Proximity, &rep.trace.points)?;
            }
            Err(OrbitError::ParityNotStabilized(n)) => {
                section.verdict = "no_convergence".into();
                section.scalars.insert("parity_iterations".into(), n as f64);
            }
            Err(e) => return Err(RunError::orbit(Mode::Proximity, e)),
        }
        sections.push(section);
    }
    Ok(sections)
}

fn run_certify(cfg: &ExperimentConfig) -> Result<Vec<ReportSection>, RunError> {
    let mode = Mode::Certify;
    let pairs = cfg.run.sampler().pairs().map_err(|e| RunError::certificate(mode, e))?;
    let horizon = cfg.run.n_max;
    let runs: Vec<(Vec<CertificateSample>, bool)> = pairs
        .par_iter()
        .map(|(x, y)| pair_series(&cfg.space, &cfg.mapping, &cfg.params, x, y, horizon))
        .collect::<Result<_, _>>()
        .map_err(|e| RunError::certificate(mode, e))?;

    // γ·D² only matters for cyclic maps, where D = dist(A, B).
    let d_sq = match &cfg.mapping {
        Mapping::Cyclic(pair) => {
            let d = set_distance(&cfg.space, &pair.a, &pair.b).map_err(|e| RunError::certificate(mode, e.into()))?;
            d * d
        }
        _ => 0.0,
    };
    let tail_start = horizon - horizon.div_ceil(4);
    let mut rows = Vec::new();
    let mut xi_tail = 0.0f64;
    let mut xi_max = 0.0f64;
    let mut k_max = 0.0f64;
    let mut total = 0usize;
    let mut without_slack = 0usize;
    for n in 1..=horizon {
        for (samples, _) in &runs {
            if let Some(s) = samples.get(n - 1) {
                rows.push(TraceRow::from(s));
                total += 1;
                xi_max = xi_max.max(s.xi);
                k_max = k_max.max(s.k);
                // Slack left over once the γ·D² allowance is used up.
                if n > tail_start {
                    xi_tail = xi_tail.max(s.xi - s.params.gamma * d_sq);
                }
                if holds(&s.params, s.a, s.b, 0.0, s.params.gamma * d_sq) {
                    without_slack += 1;
                }
            }
        }
    }
    let diverged = runs.iter().any(|(_, d)| *d);
    let achieved = !diverged && xi_tail <= cfg.run.tol;
    let mut section = ReportSection {
        label: "certificate".into(),
        verdict: if diverged {
            "diverged"
        } else if achieved {
            "slack_vanishes"
        } else {
            "slack_persists"
        }
        .into(),
        achieved,
        rows,
        ..Default::default()
    };
    for (k, v) in [
        ("max_xi", xi_max),
        ("max_excess_slack_tail", xi_tail),
        ("max_k", k_max),
        ("fraction_without_slack", if total == 0 { 0.0 } else { without_slack as f64 / total as f64 }),
        ("set_distance_sq", d_sq),
        ("samples", total as f64),
    ] {
        section.scalars.insert(k.into(), v);
    }
    Ok(vec![section])
}

fn classification_section(label: String, c: &Classification) -> ReportSection {
    let mut section = ReportSection {
        label,
        verdict: c.verdict.as_str().into(),
        achieved: c.verdict != crate::certificates::Verdict::Unclassified,
        rows: c.evidence.iter().map(TraceRow::from).collect(),
        ..Default::default()
    };
    for (k, v) in [
        ("limsup_estimate", c.limsup_estimate),
        ("alpha_limit", c.alpha_limit),
        ("beta_limit", c.beta_limit),
        ("diverged", if c.diverged { 1.0 } else { 0.0 }),
    ] {
        section.scalars.insert(k.into(), v);
    }
    section.vectors.insert("s_series".into(), c.s_series.clone());
    section
}

fn classify(cfg: &ExperimentConfig, mode: Mode, params: &ParamSequences) -> Result<Classification, RunError> {
    classify_mapping_with(&cfg.space, &cfg.mapping, params, &cfg.run.sampler(), cfg.run.n_max, cfg.run.tol)
        .map_err(|e| RunError::certificate(mode, e))
}

fn run_classify(cfg: &ExperimentConfig) -> Result<Vec<ReportSection>, RunError> {
    let c = classify(cfg, Mode::Classify, &cfg.params)?;
    Ok(vec![classification_section("classification".into(), &c)])
}

fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<ReportSection>, RunError> {
    let Some(sweep) = &cfg.run.sweep else {
        return Err(RunError { mode: Mode::Sweep, n: None, message: "no sweep table".into() });
    };
    sweep
        .values
        .par_iter()
        .enumerate()
        .map(|(i, &value)| {
            let mut params = cfg.params.clone();
            match sweep.parameter {
                SweepParameter::Alpha => params.alpha = ParamRule::Constant(value),
                SweepParameter::Beta => params.beta = ParamRule::Constant(value),
                SweepParameter::Mu => params.mu = MuPolicy::Constant(value),
            }
            let c = classify(cfg, Mode::Sweep, &params)?;
            let mut section = classification_section(format!("sweep_{i}"), &c);
            section.scalars.insert("value".into(), value);
            // Every completed point counts; the verdict itself is the data.
            section.achieved = true;
            Ok(section)
        })
        .collect()
}

/// Runs the configured mode. Sections are deterministic for a fixed config.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ReportRecord, RunError> {
    let mode = cfg.run.mode;
    log::info!("running {mode} with config digest {}", cfg.digest());
    let sections = match mode {
        Mode::Orbit => run_orbit(cfg)?,
        Mode::Proximity => run_proximity(cfg)?,
        Mode::Certify => run_certify(cfg)?,
        Mode::Classify => run_classify(cfg)?,
        Mode::Sweep => run_sweep(cfg)?,
    };
    let achieved = sections.iter().all(|s| s.achieved);
    let verdict = match mode {
        Mode::Sweep => "completed".to_string(),
        _ => {
            let mut verdicts: Vec<&str> = sections.iter().map(|s| s.verdict.as_str()).collect();
            verdicts.dedup();
            if verdicts.len() == 1 {
                verdicts[0].to_string()
            } else {
                "mixed".to_string()
            }
        }
    };
    log::debug!("{mode} finished: {verdict}");
    Ok(ReportRecord { config_digest: cfg.digest(), mode, verdict, achieved, sections })
}
