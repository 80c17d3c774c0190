//! Geometric measures of correlations for two-mode Gaussian states.
//!
//! * [`gaussian`]: covariance algebra (physicality, invariants, standard
//!   form, measurement seeds, conditional states, overlaps).
//! * [`measures`]: Gaussian geometric discord (numeric and closed form),
//!   its product-state variant, and geometric quadrature correlations.
//! * [`families`]: squeezed thermal families with closed-form discord.
//! * [`sampling`]: seeded random physical states.
//! * [`experiments`]: CSV tables behind the command-line front end.

// `!(x >= lo)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exec;
pub mod experiments;
pub mod families;
pub mod gaussian;
pub mod measures;
pub mod optimize;
pub mod sampling;
pub mod svg;

pub use error::{Error, Result};
pub use exec::Execution;
pub use families::{
    discord_low_family, discord_up_family, make_low_family, make_pure_tmss, make_sts,
    make_total_correlated, make_up_family, FamilyKind, StsFamilyPoint,
};
pub use gaussian::{
    gaussian_overlap, mean_energy_per_mode, posterior_covariance, purity, seed_covariance,
    symplectic_invariants, to_standard_form, validate_physical, PhysicalityReport, SeedParams,
    SingleModeCovariance, StandardForm, SymplecticInvariants, TwoModeCovariance, PHYSICAL_TOL,
    SYMMETRY_TOL,
};
pub use measures::{
    ggd, ggd_alternative, ggd_alternative_warm, ggd_numeric, ggd_sts_closed, gqc_invariant,
    gqc_numeric, gqc_standard_form, hs_residual, hs_residual_theta0, MeasureResult,
    OptimizerOptions, ProductParams,
};
