//! Picard orbits: distance traces, fixed points, best proximity pairs and
//! uniqueness probes.

use thiserror::Error;

use crate::mappings::{CyclicPair, Mapping, MappingError, Side};
use crate::metric::{set_distance_with, MetricError, NormedSpace, Point};
use crate::tolerances::{MEMBERSHIP_TOL, PARITY_WINDOW, SET_DISTANCE_MAX_ITER, SET_DISTANCE_TOL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OrbitError {
    #[error(transparent)]
    Mapping(#[from] MappingError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("parity subsequences did not stabilise within {0} iterations")]
    ParityNotStabilized(usize),
    #[error("run from start {0} did not reach a fixed point")]
    NoConvergence(usize),
    #[error("uniqueness needs at least two starts, got {0}")]
    TooFewStarts(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub enum OrbitVerdict {
    FixedPoint(Point),
    ProximityCycle { z1: Point, z2: Point, gap: f64 },
    NoConvergence,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitTrace {
    pub points: Vec<Point>,
    /// d(points[k], points[k + 1]).
    pub self_distances: Vec<f64>,
    pub verdict: OrbitVerdict,
    /// Index n at which d(Tⁿx₀, Tⁿ⁺¹x₀) first met the tolerance.
    pub iterations_used: usize,
}

impl OrbitTrace {
    /// d(xₙ, xₙ₊ₘ₊₁) at the last index n where it can be formed.
    pub fn telescoping_residual(&self, space: &NormedSpace, m: usize) -> Option<f64> {
        let len = self.points.len();
        if len < m + 2 {
            return None;
        }
        let n = len - m - 2;
        space.distance(&self.points[n], &self.points[n + m + 1]).ok()
    }
}

/// [d(x, y), d(Tx, Ty), …, d(Tᴺx, Tᴺy)].
pub fn pair_distance_trace(
    space: &NormedSpace,
    t: &Mapping,
    x: &Point,
    y: &Point,
    n: usize,
) -> Result<Vec<f64>, OrbitError> {
    let mut u = x.clone();
    let mut v = y.clone();
    let mut out = Vec::with_capacity(n + 1);
    out.push(space.distance(&u, &v)?);
    for _ in 0..n {
        u = t.evaluate(&u)?;
        v = t.evaluate(&v)?;
        out.push(space.distance(&u, &v)?);
    }
    Ok(out)
}

/// Iterates until d(xₙ, xₙ₊₁) ≤ tol and the candidate z = xₙ₊₁ also has
/// d(z, Tz) ≤ tol; otherwise reports no convergence after `max_iter` steps.
pub fn run_to_fixed_point(
    space: &NormedSpace,
    t: &Mapping,
    x0: &Point,
    tol: f64,
    max_iter: usize,
) -> Result<OrbitTrace, OrbitError> {
    if !(tol > 0.0) {
        return Err(OrbitError::BadTolerance(tol));
    }
    space.check(x0)?;
    let mut points = vec![x0.clone()];
    let mut self_distances = Vec::new();
    let mut next = t.evaluate(x0)?;
    for n in 0..max_iter {
        let step = space.distance(&points[n], &next)?;
        points.push(next);
        self_distances.push(step);
        let z = &points[n + 1];
        let tz = t.evaluate(z)?;
        if step <= tol {
            let residual = space.distance(z, &tz)?;
            if residual <= tol {
                let z = z.clone();
                return Ok(OrbitTrace {
                    points,
                    self_distances,
                    verdict: OrbitVerdict::FixedPoint(z),
                    iterations_used: n,
                });
            }
        }
        next = tz;
    }
    Ok(OrbitTrace { points, self_distances, verdict: OrbitVerdict::NoConvergence, iterations_used: max_iter })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProximityReport {
    /// Limit of the A-side subsequence.
    pub z1: Point,
    /// Limit of the B-side subsequence.
    pub z2: Point,
    pub pair_distance: f64,
    pub set_distance: f64,
    /// pair_distance − set_distance.
    pub gap: f64,
    /// Iterations run until both parity subsequences stabilised.
    pub parity_iterations: usize,
    /// d(z2, T z1).
    pub continuity_residual: f64,
    /// Every A-parity iterate lay in A and every B-parity iterate in B.
    pub parity_ok: bool,
    pub trace: OrbitTrace,
}

/// Iterates a cyclic map until the even and odd subsequences are both Cauchy
/// to `tol` over [`PARITY_WINDOW`] consecutive same-parity steps, then
/// reports their limits against dist(A, B).
pub fn best_proximity_run(
    space: &NormedSpace,
    pair: &CyclicPair,
    x0: &Point,
    tol: f64,
    max_iter: usize,
) -> Result<ProximityReport, OrbitError> {
    if !(tol > 0.0) {
        return Err(OrbitError::BadTolerance(tol));
    }
    space.check(x0)?;
    let start_side = pair.side_of(x0)?;
    let side_at = |k: usize| if k.is_multiple_of(2) { start_side } else { start_side.other() };

    let mut points = vec![x0.clone()];
    let mut self_distances = Vec::new();
    let mut parity_ok = true;
    let mut streak = 0usize;
    let mut stabilized_at = None;
    for k in 0..max_iter {
        let next = pair.evaluate(&points[k])?;
        self_distances.push(space.distance(&points[k], &next)?);
        points.push(next);
        let idx = k + 1;
        if !pair.set(side_at(idx)).contains(&points[idx], MEMBERSHIP_TOL) {
            parity_ok = false;
        }
        if idx >= 2 {
            let step = space.distance(&points[idx - 2], &points[idx])?;
            streak = if step <= tol { streak + 1 } else { 0 };
            if streak >= 2 * PARITY_WINDOW {
                stabilized_at = Some(idx);
                break;
            }
        }
    }
    let Some(last) = stabilized_at else {
        return Err(OrbitError::ParityNotStabilized(max_iter));
    };

    let (ia, ib) = if side_at(last) == Side::A { (last, last - 1) } else { (last - 1, last) };
    let z1 = points[ia].clone();
    let z2 = points[ib].clone();
    let pair_distance = space.distance(&z1, &z2)?;
    let set = set_distance_with(space, &pair.a, &pair.b, SET_DISTANCE_TOL, SET_DISTANCE_MAX_ITER)?;
    let gap = pair_distance - set.distance;
    let continuity_residual = space.distance(&z2, &pair.evaluate(&z1)?)?;
    Ok(ProximityReport {
        z1: z1.clone(),
        z2: z2.clone(),
        pair_distance,
        set_distance: set.distance,
        gap,
        parity_iterations: last,
        continuity_residual,
        parity_ok,
        trace: OrbitTrace {
            points,
            self_distances,
            verdict: OrbitVerdict::ProximityCycle { z1, z2, gap },
            iterations_used: last,
        },
    })
}

/// True iff every start reaches a fixed point and all limits agree within
/// 10·tol.
pub fn uniqueness_probe(
    space: &NormedSpace,
    t: &Mapping,
    starts: &[Point],
    tol: f64,
    max_iter: usize,
) -> Result<bool, OrbitError> {
    if starts.len() < 2 {
        return Err(OrbitError::TooFewStarts(starts.len()));
    }
    let mut limits = Vec::with_capacity(starts.len());
    for (i, x0) in starts.iter().enumerate() {
        match run_to_fixed_point(space, t, x0, tol, max_iter)?.verdict {
            OrbitVerdict::FixedPoint(z) => limits.push(z),
            _ => return Err(OrbitError::NoConvergence(i)),
        }
    }
    for i in 0..limits.len() {
        for j in i + 1..limits.len() {
            if space.distance(&limits[i], &limits[j])? > 10.0 * tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
