//! Generator data and its polynomial expansions.

mod builtins;
mod expand;
mod field;
mod generator;
mod levy;
mod validate;

pub use builtins::{
    black_scholes, heston_jump, heston_mean_trajectory, local_vol_jump, merton, HestonJumpParams,
};
pub use expand::{
    expand_hermite, expand_taylor, expand_time_taylor, hermite_basis, hermite_gram, hermite_he,
    ExpandedModel, ExpansionPoint, ModelSnapshot, Trajectory,
};
pub use field::{Field, SpatialFunction};
pub use generator::{generator_from_sde, martingale_drift, KernelTerm, ModelSpec};
pub use levy::{
    check_strip, exponential_compensator, gaussian_levy_family, GaussianJumps, LevyExponent,
    LevyExponentFamily,
};
pub use validate::{validate_model, Diagnostics, Issue};
