//! Numerical toolkit for cyclic and intermediate-sense contractive mappings
//! on finite-dimensional normed spaces.
//!
//! * [`metric`]: points, norms, closed convex sets, projections, set distance.
//! * [`mappings`]: affine and rotation maps, projected maps, two-cyclic maps.
//! * [`certificates`]: the contractive condition with its correlation factor,
//!   case analysis, one-step and chained bounds, and classification.
//! * [`orbit`]: Picard iteration to fixed points and best proximity pairs.
//! * [`harness`]: TOML-configured experiments with CSV/JSON traces.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certificates;
pub mod harness;
pub mod mappings;
pub mod metric;
pub mod orbit;
pub mod rng;
pub mod tolerances;

pub use certificates::{
    classify_mapping, mu_min, CaseTag, CertificateSample, Classification, PairSampler, ParamRule, ParamSequences,
    Verdict,
};
pub use mappings::{make_two_cyclic, CyclicPair, Mapping, Matrix};
pub use metric::{set_distance, ConvexSet, NormKind, NormedSpace, Point};
pub use orbit::{best_proximity_run, run_to_fixed_point, OrbitTrace, OrbitVerdict, ProximityReport};
pub use rng::CounterRng;
