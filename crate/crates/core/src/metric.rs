//! Finite-dimensional normed spaces, convex sets and their projections.
//!
//! The metric is always the one induced by the norm, d(x, y) = ‖x − y‖, so it
//! is homogeneous and translation invariant. Projections onto sets are
//! euclidean regardless of the norm chosen for distances; the sets are the
//! same point sets under every norm and euclidean projections are unique.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::CounterRng;
use crate::tolerances::{
    MEMBERSHIP_TOL, PROJECTION_GAP_TOL, PROJECTION_MAX_SWEEPS, SET_DISTANCE_MAX_ITER, SET_DISTANCE_TOL,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point has no coordinates")]
    EmptyPoint,
    #[error("coordinate {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },
    #[error("invalid norm: {0}")]
    InvalidNorm(String),
    #[error("invalid set: {0}")]
    InvalidSet(String),
    #[error("halfspace projection did not settle within {sweeps} sweeps")]
    ProjectionDiverged { sweeps: usize },
    #[error("alternating projections did not stabilise within {iterations} iterations")]
    SetDistanceDiverged { iterations: usize },
}

/// A point of ℝᵈ with finite coordinates.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self, MetricError> {
        if coords.is_empty() {
            return Err(MetricError::EmptyPoint);
        }
        if let Some((index, &value)) = coords.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(MetricError::NonFinite { index, value });
        }
        Ok(Point(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Point(vec![0.0; dim.max(1)])
    }

    pub fn scalar(v: f64) -> Self {
        Point(vec![v])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn add(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: f64) -> Point {
        Point(self.0.iter().map(|a| a * s).collect())
    }

    pub fn dot(&self, other: &Point) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Euclidean length, used by projections.
    pub fn euclidean_norm(&self) -> f64 {
        euclidean(&self.0)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub(crate) fn from_vec_unchecked(v: Vec<f64>) -> Point {
        Point(v)
    }
}

impl Deref for Point {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = MetricError;

    fn try_from(v: Vec<f64>) -> Result<Self, Self::Error> {
        Point::new(v)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Vec<f64> {
        p.0
    }
}

fn euclidean(v: &[f64]) -> f64 {
    let scale = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * v.iter().map(|x| (x / scale).powi(2)).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    Euclidean,
    /// ℓₚ norm with p ≥ 1.
    PNorm(f64),
    Max,
}

impl NormKind {
    pub fn eval(&self, v: &[f64]) -> f64 {
        match *self {
            NormKind::Euclidean => euclidean(v),
            NormKind::Max => v.iter().fold(0.0_f64, |m, x| m.max(x.abs())),
            NormKind::PNorm(1.0) => v.iter().map(|x| x.abs()).sum(),
            NormKind::PNorm(2.0) => euclidean(v),
            NormKind::PNorm(p) => {
                let scale = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
                if scale == 0.0 {
                    return 0.0;
                }
                let s: f64 = v.iter().map(|x| (x.abs() / scale).powf(p)).sum();
                scale * s.powf(1.0 / p)
            }
        }
    }
}

/// The ambient space ℝᵈ together with its norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormedSpace {
    dimension: usize,
    norm: NormKind,
}

impl NormedSpace {
    pub fn new(dimension: usize, norm: NormKind) -> Result<Self, MetricError> {
        if dimension == 0 {
            return Err(MetricError::InvalidNorm("dimension must be positive".into()));
        }
        if let NormKind::PNorm(p) = norm {
            if !(p >= 1.0) || !p.is_finite() {
                return Err(MetricError::InvalidNorm(format!("p-norm needs finite p >= 1, got {p}")));
            }
        }
        Ok(NormedSpace { dimension, norm })
    }

    pub fn euclidean(dimension: usize) -> Self {
        NormedSpace::new(dimension, NormKind::Euclidean).expect("positive dimension")
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn norm_kind(&self) -> NormKind {
        self.norm
    }

    pub fn check(&self, x: &Point) -> Result<(), MetricError> {
        if x.dim() != self.dimension {
            return Err(MetricError::DimensionMismatch { expected: self.dimension, found: x.dim() });
        }
        Ok(())
    }

    pub fn norm(&self, v: &Point) -> Result<f64, MetricError> {
        self.check(v)?;
        Ok(self.norm.eval(v))
    }

    /// d(x, y) = ‖x − y‖.
    pub fn distance(&self, x: &Point, y: &Point) -> Result<f64, MetricError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.norm.eval(&x.sub(y)))
    }

    /// d(x − y, u − v): the distance between two difference vectors.
    ///
    /// With u = Tⁿx and v = Tⁿy this is ‖(I − Tⁿ)x − (I − Tⁿ)y‖ and it always
    /// lies between |d(x,y) − d(u,v)| and d(x,y) + d(u,v).
    pub fn difference_distance(&self, x: &Point, y: &Point, u: &Point, v: &Point) -> Result<f64, MetricError> {
        for p in [x, y, u, v] {
            self.check(p)?;
        }
        let diff: Vec<f64> = (0..self.dimension).map(|i| (x[i] - y[i]) - (u[i] - v[i])).collect();
        Ok(self.norm.eval(&diff))
    }
}

/// Closed halfspace {z : normal · z ≤ offset}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Point,
    pub offset: f64,
}

impl Halfspace {
    /// Signed euclidean distance past the boundary (≤ 0 inside).
    fn violation(&self, x: &[f64]) -> f64 {
        let nn = self.normal.euclidean_norm();
        (dot(&self.normal, x) - self.offset) / nn
    }

    fn project_into(&self, x: &mut [f64]) {
        let excess = dot(&self.normal, x) - self.offset;
        if excess > 0.0 {
            let nn2 = dot(&self.normal, &self.normal);
            let t = excess / nn2;
            for (xi, ni) in x.iter_mut().zip(self.normal.iter()) {
                *xi -= t * ni;
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nonempty closed convex subsets of ℝᵈ.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexSet {
    Ball {
        center: Point,
        radius: f64,
    },
    Box {
        lo: Point,
        hi: Point,
    },
    /// Intersection of halfspaces; `witness` strictly satisfies all of them.
    Halfspaces {
        constraints: Vec<Halfspace>,
        witness: Point,
    },
}

impl ConvexSet {
    pub fn ball(center: Point, radius: f64) -> Result<Self, MetricError> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(MetricError::InvalidSet(format!("ball radius must be positive, got {radius}")));
        }
        Ok(ConvexSet::Ball { center, radius })
    }

    pub fn boxed(lo: Point, hi: Point) -> Result<Self, MetricError> {
        if lo.dim() != hi.dim() {
            return Err(MetricError::DimensionMismatch { expected: lo.dim(), found: hi.dim() });
        }
        if let Some(i) = (0..lo.dim()).find(|&i| lo[i] > hi[i]) {
            return Err(MetricError::InvalidSet(format!("box has lo[{i}] = {} > hi[{i}] = {}", lo[i], hi[i])));
        }
        Ok(ConvexSet::Box { lo, hi })
    }

    /// Closed interval [lo, hi] in ℝ.
    pub fn interval(lo: f64, hi: f64) -> Result<Self, MetricError> {
        ConvexSet::boxed(Point::new(vec![lo])?, Point::new(vec![hi])?)
    }

    pub fn halfspaces(constraints: Vec<Halfspace>, witness: Point) -> Result<Self, MetricError> {
        if constraints.is_empty() {
            return Err(MetricError::InvalidSet("halfspace intersection needs at least one halfspace".into()));
        }
        for (i, h) in constraints.iter().enumerate() {
            if h.normal.dim() != witness.dim() {
                return Err(MetricError::DimensionMismatch { expected: witness.dim(), found: h.normal.dim() });
            }
            if h.normal.euclidean_norm() == 0.0 {
                return Err(MetricError::InvalidSet(format!("halfspace {i} has a zero normal")));
            }
            if !h.offset.is_finite() {
                return Err(MetricError::InvalidSet(format!("halfspace {i} has a non-finite offset")));
            }
            if !(h.violation(&witness) < 0.0) {
                return Err(MetricError::InvalidSet(format!("witness does not strictly satisfy halfspace {i}")));
            }
        }
        Ok(ConvexSet::Halfspaces { constraints, witness })
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexSet::Ball { center, .. } => center.dim(),
            ConvexSet::Box { lo, .. } => lo.dim(),
            ConvexSet::Halfspaces { witness, .. } => witness.dim(),
        }
    }

    /// A known member of the set.
    pub fn anchor(&self) -> Point {
        match self {
            ConvexSet::Ball { center, .. } => center.clone(),
            ConvexSet::Box { lo, hi } => lo.add(hi).scale(0.5),
            ConvexSet::Halfspaces { witness, .. } => witness.clone(),
        }
    }

    /// Euclidean distance from `x` to the set, estimated from below by the
    /// largest violated constraint for halfspace intersections.
    pub fn violation(&self, x: &Point) -> f64 {
        match self {
            ConvexSet::Ball { center, radius } => (x.sub(center).euclidean_norm() - radius).max(0.0),
            ConvexSet::Box { lo, hi } => {
                let excess: Vec<f64> = (0..x.dim()).map(|i| (lo[i] - x[i]).max(x[i] - hi[i]).max(0.0)).collect();
                euclidean(&excess)
            }
            ConvexSet::Halfspaces { constraints, .. } => {
                constraints.iter().map(|h| h.violation(x)).fold(0.0_f64, f64::max)
            }
        }
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        x.dim() == self.dim() && self.violation(x) <= tol
    }

    /// Euclidean projection onto the set.
    ///
    /// Balls and boxes use closed forms. Halfspace intersections run Dykstra's
    /// cyclic projection until a sweep moves the iterate by at most
    /// [`PROJECTION_GAP_TOL`] and every constraint holds to that tolerance.
    pub fn project(&self, x: &Point) -> Result<Point, MetricError> {
        if x.dim() != self.dim() {
            return Err(MetricError::DimensionMismatch { expected: self.dim(), found: x.dim() });
        }
        match self {
            ConvexSet::Ball { center, radius } => {
                let off = x.sub(center);
                let r = off.euclidean_norm();
                if r <= radius + MEMBERSHIP_TOL {
                    Ok(x.clone())
                } else {
                    Ok(center.add(&off.scale(radius / r)))
                }
            }
            ConvexSet::Box { lo, hi } => Ok(Point((0..x.dim()).map(|i| x[i].clamp(lo[i], hi[i])).collect())),
            ConvexSet::Halfspaces { constraints, .. } => {
                if self.violation(x) <= MEMBERSHIP_TOL {
                    return Ok(x.clone());
                }
                dykstra(constraints, x)
            }
        }
    }

    /// Draws a point of the set. Balls and boxes are sampled uniformly;
    /// halfspace intersections project a gaussian cloud around the witness.
    pub fn sample(&self, rng: &mut CounterRng) -> Result<Point, MetricError> {
        match self {
            ConvexSet::Ball { center, radius } => {
                let d = center.dim();
                let dir: Vec<f64> = loop {
                    let g: Vec<f64> = (0..d).map(|_| rng.normal()).collect();
                    if euclidean(&g) > 1e-12 {
                        break g;
                    }
                };
                let len = euclidean(&dir);
                let r = radius * rng.next_f64().powf(1.0 / d as f64);
                Ok(Point((0..d).map(|i| center[i] + r * dir[i] / len).collect()))
            }
            ConvexSet::Box { lo, hi } => Ok(Point((0..lo.dim()).map(|i| rng.uniform(lo[i], hi[i])).collect())),
            ConvexSet::Halfspaces { witness, .. } => {
                let spread = 1.0 + witness.euclidean_norm();
                let g = Point((0..witness.dim()).map(|i| witness[i] + spread * rng.normal()).collect());
                self.project(&g)
            }
        }
    }
}

fn dykstra(constraints: &[Halfspace], x0: &Point) -> Result<Point, MetricError> {
    let d = x0.dim();
    let mut x = x0.0.clone();
    let mut increments = vec![vec![0.0; d]; constraints.len()];
    let mut y = vec![0.0; d];
    for _ in 0..PROJECTION_MAX_SWEEPS {
        let prev = x.clone();
        for (h, p) in constraints.iter().zip(increments.iter_mut()) {
            for i in 0..d {
                y[i] = x[i] + p[i];
            }
            x.copy_from_slice(&y);
            h.project_into(&mut x);
            for i in 0..d {
                p[i] = y[i] - x[i];
            }
        }
        let moved = euclidean(&x.iter().zip(&prev).map(|(a, b)| a - b).collect::<Vec<_>>());
        let worst = constraints.iter().map(|h| h.violation(&x)).fold(0.0_f64, f64::max);
        if moved <= PROJECTION_GAP_TOL && worst <= PROJECTION_GAP_TOL {
            return Ok(Point(x));
        }
    }
    Err(MetricError::ProjectionDiverged { sweeps: PROJECTION_MAX_SWEEPS })
}

/// A nearest pair between two sets as found by alternating projections.
#[derive(Debug, Clone, PartialEq)]
pub struct SetDistance {
    pub a: Point,
    pub b: Point,
    pub distance: f64,
    pub iterations: usize,
}

/// dist(A, B) by alternating projections, stopped when two successive pair
/// distances differ by at most `tol`.
///
/// Under a non-euclidean norm the pair is the euclidean best pair and the
/// reported value is its distance in the chosen norm.
pub fn set_distance_with(
    space: &NormedSpace,
    a_set: &ConvexSet,
    b_set: &ConvexSet,
    tol: f64,
    max_iter: usize,
) -> Result<SetDistance, MetricError> {
    for s in [a_set, b_set] {
        if s.dim() != space.dimension() {
            return Err(MetricError::DimensionMismatch { expected: space.dimension(), found: s.dim() });
        }
    }
    let mut a = a_set.project(&b_set.anchor())?;
    let mut prev = f64::INFINITY;
    for it in 1..=max_iter {
        let b = b_set.project(&a)?;
        let dist = space.distance(&a, &b)?;
        if (prev - dist).abs() <= tol {
            return Ok(SetDistance { a, b, distance: dist, iterations: it });
        }
        prev = dist;
        a = a_set.project(&b)?;
    }
    Err(MetricError::SetDistanceDiverged { iterations: max_iter })
}

pub fn set_distance(space: &NormedSpace, a: &ConvexSet, b: &ConvexSet) -> Result<f64, MetricError> {
    Ok(set_distance_with(space, a, b, SET_DISTANCE_TOL, SET_DISTANCE_MAX_ITER)?.distance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn p(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    #[test]
    fn point_rejects_bad_coordinates() {
        assert_eq!(Point::new(vec![]), Err(MetricError::EmptyPoint));
        assert!(matches!(Point::new(vec![1.0, f64::NAN]), Err(MetricError::NonFinite { index: 1, .. })));
        assert!(Point::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn distance_examples() {
        let e2 = NormedSpace::euclidean(2);
        assert_eq!(e2.distance(&p(&[3.0, 4.0]), &p(&[0.0, 0.0])).unwrap(), 5.0);
        assert_eq!(e2.distance(&p(&[1.5, -2.0]), &p(&[1.5, -2.0])).unwrap(), 0.0);

        // (1 + 1)^(1/3) evaluated independently.
        let p3 = NormedSpace::new(3, NormKind::PNorm(3.0)).unwrap();
        let d = p3.distance(&p(&[1.0, 1.0, 0.0]), &p(&[0.0, 0.0, 0.0])).unwrap();
        assert_abs_diff_eq!(d, 1.259_921_049_894_873_2, epsilon = 1e-14);

        let mx = NormedSpace::new(2, NormKind::Max).unwrap();
        assert_eq!(mx.distance(&p(&[1.0, -3.0]), &p(&[0.0, 0.0])).unwrap(), 3.0);
    }

    #[test]
    fn distance_dimension_mismatch() {
        let e2 = NormedSpace::euclidean(2);
        assert_eq!(
            e2.distance(&p(&[1.0]), &p(&[0.0, 0.0])),
            Err(MetricError::DimensionMismatch { expected: 2, found: 1 })
        );
    }

    #[test]
    fn invalid_norms() {
        assert!(NormedSpace::new(0, NormKind::Euclidean).is_err());
        assert!(NormedSpace::new(2, NormKind::PNorm(0.5)).is_err());
        assert!(NormedSpace::new(2, NormKind::PNorm(f64::NAN)).is_err());
    }

    #[test]
    fn difference_distance_examples() {
        let e2 = NormedSpace::euclidean(2);
        let z = p(&[0.0, 0.0]);
        let d = e2.difference_distance(&p(&[1.0, 0.0]), &z, &p(&[0.0, 1.0]), &z).unwrap();
        assert_abs_diff_eq!(d, 2f64.sqrt(), epsilon = 1e-15);

        let x = p(&[0.3, -1.0]);
        let y = p(&[2.0, 5.0]);
        assert_eq!(e2.difference_distance(&x, &y, &x, &y).unwrap(), 0.0);

        let e1 = NormedSpace::euclidean(1);
        let d = e1.difference_distance(&p(&[1.0]), &p(&[0.0]), &p(&[-1.0]), &p(&[0.0])).unwrap();
        assert_eq!(d, 2.0);
    }

    #[test]
    fn projection_examples() {
        let ball = ConvexSet::ball(p(&[0.0, 0.0]), 1.0).unwrap();
        assert_eq!(ball.project(&p(&[2.0, 0.0])).unwrap(), p(&[1.0, 0.0]));
        let inside = p(&[0.2, -0.3]);
        assert_eq!(ball.project(&inside).unwrap(), inside);

        let bx = ConvexSet::boxed(p(&[0.0, 0.0]), p(&[1.0, 1.0])).unwrap();
        assert_eq!(bx.project(&p(&[2.0, -1.0])).unwrap(), p(&[1.0, 0.0]));
        assert_eq!(bx.project(&p(&[0.5, 0.5])).unwrap(), p(&[0.5, 0.5]));
    }

    #[test]
    fn halfspace_projection_is_nearest_point() {
        // Quadrant {x ≤ 0, y ≤ 0}: the nearest point to (2, 3) is the corner.
        let set = ConvexSet::halfspaces(
            vec![Halfspace { normal: p(&[1.0, 0.0]), offset: 0.0 }, Halfspace { normal: p(&[0.0, 1.0]), offset: 0.0 }],
            p(&[-1.0, -1.0]),
        )
        .unwrap();
        let q = set.project(&p(&[2.0, 3.0])).unwrap();
        assert_abs_diff_eq!(q[0], 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(q[1], 0.0, epsilon = 1e-9);

        // Wedge y ≤ x, y ≤ −x + 2 (apex (1,1)); the point (1, 3) projects to the apex,
        // which plain alternating projections would not return.
        let wedge = ConvexSet::halfspaces(
            vec![Halfspace { normal: p(&[-1.0, 1.0]), offset: 0.0 }, Halfspace { normal: p(&[1.0, 1.0]), offset: 2.0 }],
            p(&[1.0, 0.0]),
        )
        .unwrap();
        let q = wedge.project(&p(&[1.0, 3.0])).unwrap();
        assert_abs_diff_eq!(q[0], 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(q[1], 1.0, epsilon = 1e-8);
        assert!(wedge.contains(&q, MEMBERSHIP_TOL));
    }

    #[test]
    fn invalid_sets() {
        assert!(ConvexSet::ball(p(&[0.0]), 0.0).is_err());
        assert!(ConvexSet::ball(p(&[0.0]), -1.0).is_err());
        assert!(ConvexSet::boxed(p(&[1.0, 0.0]), p(&[0.0, 1.0])).is_err());
        assert!(ConvexSet::boxed(p(&[1.0]), p(&[0.0, 1.0])).is_err());
        // Witness on the boundary is not strict.
        let h = Halfspace { normal: p(&[1.0]), offset: 0.0 };
        assert!(ConvexSet::halfspaces(vec![h.clone()], p(&[0.0])).is_err());
        assert!(ConvexSet::halfspaces(vec![h], p(&[-0.5])).is_ok());
        assert!(ConvexSet::halfspaces(vec![], p(&[0.0])).is_err());
        let zero = Halfspace { normal: p(&[0.0]), offset: 1.0 };
        assert!(ConvexSet::halfspaces(vec![zero], p(&[0.0])).is_err());
    }

    #[test]
    fn set_distance_examples() {
        let e2 = NormedSpace::euclidean(2);
        let a = ConvexSet::ball(p(&[0.0, 0.0]), 1.0).unwrap();
        let b = ConvexSet::ball(p(&[4.0, 0.0]), 1.0).unwrap();
        assert_abs_diff_eq!(set_distance(&e2, &a, &b).unwrap(), 2.0, epsilon = 1e-12);

        let b1 = ConvexSet::boxed(p(&[0.0, 0.0]), p(&[2.0, 2.0])).unwrap();
        let b2 = ConvexSet::boxed(p(&[1.0, 1.0]), p(&[3.0, 3.0])).unwrap();
        assert_eq!(set_distance(&e2, &b1, &b2).unwrap(), 0.0);

        let e1 = NormedSpace::euclidean(1);
        let ia = ConvexSet::interval(1.0, 2.0).unwrap();
        let ib = ConvexSet::interval(-2.0, -1.0).unwrap();
        assert_eq!(set_distance(&e1, &ia, &ib).unwrap(), 2.0);
        assert_eq!(set_distance(&e1, &ib, &ia).unwrap(), 2.0);
    }

    #[test]
    fn set_distance_with_halfspaces_and_ball() {
        // Halfplane x ≤ 0 and the unit ball centred at (3, 1): distance 2.
        let e2 = NormedSpace::euclidean(2);
        let h =
            ConvexSet::halfspaces(vec![Halfspace { normal: p(&[1.0, 0.0]), offset: 0.0 }], p(&[-1.0, 0.0])).unwrap();
        let ball = ConvexSet::ball(p(&[3.0, 1.0]), 1.0).unwrap();
        let ab = set_distance(&e2, &h, &ball).unwrap();
        let ba = set_distance(&e2, &ball, &h).unwrap();
        assert_abs_diff_eq!(ab, 2.0, epsilon = 1e-8);
        assert_abs_diff_eq!(ab, ba, epsilon = 1e-8);
    }

    #[test]
    fn samples_are_members() {
        let mut rng = CounterRng::new(3);
        let sets = [
            ConvexSet::ball(p(&[1.0, 2.0, 3.0]), 0.5).unwrap(),
            ConvexSet::boxed(p(&[0.0, -1.0, 2.0]), p(&[1.0, 1.0, 2.0])).unwrap(),
            ConvexSet::halfspaces(
                vec![
                    Halfspace { normal: p(&[1.0, 1.0, 1.0]), offset: 1.0 },
                    Halfspace { normal: p(&[-1.0, 0.0, 0.0]), offset: 0.0 },
                ],
                p(&[0.1, 0.0, 0.0]),
            )
            .unwrap(),
        ];
        for s in &sets {
            for _ in 0..200 {
                let x = s.sample(&mut rng).unwrap();
                assert!(s.contains(&x, MEMBERSHIP_TOL), "{x:?} not in {s:?}");
            }
        }
    }
}
