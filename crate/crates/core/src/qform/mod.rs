//! Quadratic-form geometry: shells, circumspheres, moment forms and densities.

pub mod density;
pub mod geometry;
pub mod shell;

pub use density::{compare_density_to_decimal, kappa_sq_enclosure, pi_enclosure, DensityComparison, Verdict, PI_DIGITS};
pub use geometry::{
    apollonius_radius_sq, circumradius_sq_determinant, circumradius_sq_from_gram, circumsphere_solve,
    covering_bound_sq, covering_density_sq_ratio, edge_gram, gamma_sq, min_on_det_surface, moment_form,
    Circumsphere, MomentForm, Simplex,
};
pub use shell::{enumerate_shell, fold_lattice_vectors, homogeneous_minimum, Region, Shell};
