pub mod design;
pub mod golay;
pub mod model;

pub use design::{
    design_identity_check, design_identity_check_shell, leech_gamma_sq, leech_moment_form, moment_form_from_profile,
    second_moment, lower_bound_certificate, DesignCheck, SimplexEdgeProfile, LowerBoundReport, LEECH_A24_PROFILE,
};
pub use golay::{generator_from_golay, golay_codewords, octads};
pub use model::{build_leech, build_leech_in, shell_count, LeechModel};
