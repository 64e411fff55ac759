//! Determinant maximization over the secondary cone and exact certification.

pub mod barrier;
pub mod certify;
pub mod problem;
pub mod reference;
pub mod subspace;

pub use barrier::{barrier_derivatives, log_det_derivatives, optimize, optimize_from, BarrierOptions, FloatOptimum};
pub use certify::{certify, evaluate_regulators, interior_point, rationalize, Certificate, InteriorWitness, Rationalized, THETA_THRESHOLD};
pub use problem::{OptimizationProblem, RadiusConstraint, RestrictedRegulator, SimplexOrbit};
pub use reference::{reference_diagnostic, reference_q_tilde, ReferenceDiagnostic};
pub use subspace::{identity_coordinates, invariant_subspace, InvariantSubspace};
