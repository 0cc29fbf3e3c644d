//! Default tolerances and iteration caps.
//!
//! Every threshold used by the library and its acceptance suite lives here so
//! that a run is reproducible from the configuration alone.

/// Membership slack for "x lies in S" checks (routing, cyclicity, parity).
pub const MEMBERSHIP_TOL: f64 = 1e-10;

/// Gap tolerance for the cyclic projection onto halfspace intersections.
pub const PROJECTION_GAP_TOL: f64 = 1e-10;

/// Sweep cap for the cyclic projection onto halfspace intersections.
pub const PROJECTION_MAX_SWEEPS: usize = 100_000;

/// Stop alternating projections once successive distances differ by less.
pub const SET_DISTANCE_TOL: f64 = 1e-8;

/// Iteration cap for alternating projections between two sets.
pub const SET_DISTANCE_MAX_ITER: usize = 100_000;

/// Default stopping tolerance on d(Tⁿx, Tⁿ⁺¹x) for fixed-point runs.
pub const FIXED_POINT_TOL: f64 = 1e-9;

/// Default tolerance on |pair distance − set distance| for proximity runs.
pub const PROXIMITY_GAP_TOL: f64 = 1e-6;

/// Default iteration budget for orbit runs.
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Hard ceiling for configurable iteration budgets.
pub const MAX_ITER_CAP: usize = 1_000_000;

/// Consecutive same-parity steps below tolerance required for stabilization.
pub const PARITY_WINDOW: usize = 5;

/// Tolerance on the limsup estimate when classifying a mapping.
pub const CLASSIFY_TOL: f64 = 1e-7;

/// Tolerance for recognising a limit of exactly 1 (β → 1, α → 1).
pub const LIMIT_ONE_TOL: f64 = 1e-6;

/// Smallest admissible horizon for classification.
pub const MIN_CLASSIFY_HORIZON: usize = 16;

/// Pair-distance growth ratio b/a beyond which an orbit counts as divergent.
pub const DIVERGENCE_RATIO: f64 = 1e6;

/// Largest supported dimension for configured experiments.
pub const MAX_DIMENSION: usize = 64;
