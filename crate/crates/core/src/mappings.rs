//! Self-mappings of ℝᵈ and 2-cyclic self-mappings on A ∪ B.

use thiserror::Error;

use crate::metric::{ConvexSet, MetricError, Point};
use crate::rng::CounterRng;
use crate::tolerances::MEMBERSHIP_TOL;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MappingError {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("{0}")]
    InvalidDescriptor(String),
    #[error("point {0:?} lies in neither A nor B")]
    OutsideDomain(Point),
    #[error("degenerate cyclic pair: {0}")]
    Degenerate(String),
    #[error("image became non-finite")]
    NonFiniteImage,
}

/// Dense square matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_row_major(dim: usize, data: Vec<f64>) -> Result<Self, MappingError> {
        if dim == 0 || data.len() != dim * dim {
            return Err(MappingError::InvalidDescriptor(format!(
                "matrix of dimension {dim} needs {} entries, got {}",
                dim * dim,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(MappingError::InvalidDescriptor("matrix entries must be finite".into()));
        }
        Ok(Matrix { dim, data })
    }

    pub fn identity(dim: usize) -> Self {
        Matrix::scaled_identity(dim, 1.0)
    }

    pub fn scaled_identity(dim: usize, s: f64) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = s;
        }
        Matrix { dim, data }
    }

    /// `scale` times the rotation by `angle` in the plane of the first two
    /// coordinates, `scale` times the identity on the rest.
    pub fn scaled_rotation(dim: usize, angle: f64, scale: f64) -> Result<Self, MappingError> {
        if dim < 2 {
            return Err(MappingError::InvalidDescriptor("rotation needs dimension >= 2".into()));
        }
        let mut m = Matrix::scaled_identity(dim, scale);
        let (s, c) = angle.sin_cos();
        m.data[0] = scale * c;
        m.data[1] = -scale * s;
        m.data[dim] = scale * s;
        m.data[dim + 1] = scale * c;
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row_major(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.dim + col]
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.data.chunks_exact(self.dim).map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }
}

/// Which side of a cyclic pair a point is routed to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tiebreak {
    PreferA,
    PreferB,
}

/// A self-mapping T.
#[derive(Debug, Clone, PartialEq)]
pub enum Mapping {
    /// x ↦ Qx + c.
    Affine {
        q: Matrix,
        c: Point,
    },
    /// x ↦ scale · R(angle) x with R rotating the first coordinate plane.
    ScaledRotation {
        angle: f64,
        scale: f64,
    },
    /// x ↦ P_target(Qx + c).
    ProjectedAffine {
        target: ConvexSet,
        q: Matrix,
        c: Point,
    },
    Cyclic(Box<CyclicPair>),
}

impl Mapping {
    pub fn affine(q: Matrix, c: Point) -> Result<Self, MappingError> {
        if q.dim() != c.dim() {
            return Err(MetricError::DimensionMismatch { expected: q.dim(), found: c.dim() }.into());
        }
        Ok(Mapping::Affine { q, c })
    }

    /// x ↦ λx + c in any dimension.
    pub fn scaled_shift(lambda: f64, c: Point) -> Self {
        Mapping::Affine { q: Matrix::scaled_identity(c.dim(), lambda), c }
    }

    pub fn identity(dim: usize) -> Self {
        Mapping::scaled_shift(1.0, Point::zeros(dim))
    }

    /// x ↦ c.
    pub fn constant(c: Point) -> Self {
        Mapping::scaled_shift(0.0, c)
    }

    pub fn projected_affine(target: ConvexSet, q: Matrix, c: Point) -> Result<Self, MappingError> {
        if q.dim() != c.dim() || target.dim() != c.dim() {
            return Err(MappingError::InvalidDescriptor(
                "projected affine map: matrix, offset and target dimensions differ".into(),
            ));
        }
        Ok(Mapping::ProjectedAffine { target, q, c })
    }

    /// Dimension the mapping is tied to, if any.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Mapping::Affine { q, .. } | Mapping::ProjectedAffine { q, .. } => Some(q.dim()),
            Mapping::ScaledRotation { .. } => None,
            Mapping::Cyclic(pair) => Some(pair.a.dim()),
        }
    }

    pub fn evaluate(&self, x: &Point) -> Result<Point, MappingError> {
        let check = |d: usize| {
            if x.dim() != d {
                Err(MappingError::Metric(MetricError::DimensionMismatch { expected: d, found: x.dim() }))
            } else {
                Ok(())
            }
        };
        let image = match self {
            Mapping::Affine { q, c } => {
                check(q.dim())?;
                affine_image(q, c, x)
            }
            Mapping::ScaledRotation { angle, scale } => {
                let m = Matrix::scaled_rotation(x.dim(), *angle, *scale)?;
                Point::from_vec_unchecked(m.mul_vec(x))
            }
            Mapping::ProjectedAffine { target, q, c } => {
                check(q.dim())?;
                let y = affine_image(q, c, x);
                if !y.is_finite() {
                    return Err(MappingError::NonFiniteImage);
                }
                target.project(&y)?
            }
            Mapping::Cyclic(pair) => return pair.evaluate(x),
        };
        if !image.is_finite() {
            return Err(MappingError::NonFiniteImage);
        }
        Ok(image)
    }
}

fn affine_image(q: &Matrix, c: &Point, x: &Point) -> Point {
    let mut v = q.mul_vec(x);
    for (vi, ci) in v.iter_mut().zip(c.iter()) {
        *vi += ci;
    }
    Point::from_vec_unchecked(v)
}

/// [x₀, Tx₀, …, Tᴺx₀].
pub fn orbit(t: &Mapping, x0: &Point, n: usize) -> Result<Vec<Point>, MappingError> {
    let mut points = Vec::with_capacity(n + 1);
    points.push(x0.clone());
    for k in 0..n {
        let next = t.evaluate(&points[k])?;
        points.push(next);
    }
    Ok(points)
}

/// A 2-cyclic self-mapping on A ∪ B: A-side points go through `forward`,
/// B-side points through `backward`.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicPair {
    pub a: ConvexSet,
    pub b: ConvexSet,
    pub forward: Mapping,
    pub backward: Mapping,
    pub tiebreak: Tiebreak,
    /// When set, images are projected into the target set so T(A) ⊆ B and
    /// T(B) ⊆ A hold by construction.
    pub project_images: bool,
}

impl CyclicPair {
    /// Routes a point to the side whose map applies.
    pub fn side_of(&self, x: &Point) -> Result<Side, MappingError> {
        let in_a = self.a.contains(x, MEMBERSHIP_TOL);
        let in_b = self.b.contains(x, MEMBERSHIP_TOL);
        match (in_a, in_b) {
            (true, true) => Ok(match self.tiebreak {
                Tiebreak::PreferA => Side::A,
                Tiebreak::PreferB => Side::B,
            }),
            (true, false) => Ok(Side::A),
            (false, true) => Ok(Side::B),
            (false, false) => Err(MappingError::OutsideDomain(x.clone())),
        }
    }

    pub fn set(&self, side: Side) -> &ConvexSet {
        match side {
            Side::A => &self.a,
            Side::B => &self.b,
        }
    }

    pub fn evaluate(&self, x: &Point) -> Result<Point, MappingError> {
        let (map, target) = match self.side_of(x)? {
            Side::A => (&self.forward, &self.b),
            Side::B => (&self.backward, &self.a),
        };
        let y = map.evaluate(x)?;
        if self.project_images {
            Ok(target.project(&y)?)
        } else {
            Ok(y)
        }
    }

    /// Same maps without the projection into the target set; its cyclicity is
    /// whatever the maps deliver and has to be checked by sampling.
    pub fn trusting(
        a: ConvexSet,
        b: ConvexSet,
        forward: Mapping,
        backward: Mapping,
        tiebreak: Tiebreak,
    ) -> Result<Self, MappingError> {
        let mut pair = make_two_cyclic(a, b, forward, backward, Some(tiebreak))?;
        pair.project_images = false;
        Ok(pair)
    }
}

/// Builds the cyclic map x ↦ P_B(forward x) on A and x ↦ P_A(backward x) on B.
///
/// A tiebreak is required when A and B are the same set; otherwise points in
/// A ∩ B default to the A side.
pub fn make_two_cyclic(
    a: ConvexSet,
    b: ConvexSet,
    forward: Mapping,
    backward: Mapping,
    tiebreak: Option<Tiebreak>,
) -> Result<CyclicPair, MappingError> {
    if a.dim() != b.dim() {
        return Err(MetricError::DimensionMismatch { expected: a.dim(), found: b.dim() }.into());
    }
    for m in [&forward, &backward] {
        if matches!(m, Mapping::Cyclic(_)) {
            return Err(MappingError::Degenerate("forward and backward maps cannot be cyclic".into()));
        }
        if let Some(d) = m.dim() {
            if d != a.dim() {
                return Err(MetricError::DimensionMismatch { expected: a.dim(), found: d }.into());
            }
        }
    }
    if a == b && tiebreak.is_none() {
        return Err(MappingError::Degenerate("A and B coincide and no tiebreak was given".into()));
    }
    Ok(CyclicPair { a, b, forward, backward, tiebreak: tiebreak.unwrap_or(Tiebreak::PreferA), project_images: true })
}

/// Samples `samples` points from each of A and B and checks that each lands
/// on the opposite side. Points routed by the tiebreak are checked against the
/// side they were routed to.
pub fn verify_cyclicity(pair: &CyclicPair, samples: usize, seed: u64) -> bool {
    let rng = CounterRng::new(seed);
    for (tag, set) in [(0xA, &pair.a), (0xB, &pair.b)] {
        let mut stream = rng.substream(tag);
        for _ in 0..samples {
            let Ok(x) = set.sample(&mut stream) else { return false };
            let Ok(side) = pair.side_of(&x) else { return false };
            match pair.evaluate(&x) {
                Ok(y) if pair.set(side.other()).contains(&y, MEMBERSHIP_TOL) => {}
                _ => return false,
            }
        }
    }
    true
}
