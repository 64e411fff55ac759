//! E8 in standard coordinates: shells, Delone cells, diagonal classes,
//! symmetric triangulations and their regulators.

pub mod bounds;
pub mod cells;
pub mod classes;
pub mod facets;
pub mod feasibility;
pub mod model;
pub mod orbits;
pub mod point;
pub mod regulators;
pub mod triangulation;

pub use bounds::{e8_bounds, e8_covering_radius_sq, e8_moment_form, E8Bounds};
pub use cells::{
    adjacency, cross_polytope, delone_simplex, neighbor_counts, simplex_representatives, simplices_of_subdivision,
    split_cross_polytope, Cell, CrossPolytope, DeloneSimplexE8,
};
pub use classes::{diagonal_classes, ClassType, DiagonalClass};
pub use facets::{facet_count, FacetOrbit, FacetReport, RowCertificate};
pub use feasibility::{delone_feasible, Feasibility};
pub use model::{build_model, E8Model};
pub use orbits::{apply_hah, g_orbits, GOrbit};
pub use point::E8Point;
pub use regulators::{regulators, regulators_of, type3_regulators, RefinedTriangulation, Regulator, RegulatorKind, RegulatorSet};
pub use triangulation::{candidate_triangulations, PeriodicTriangulation, SimplexSource, TriSimplex, I1, I2};
