//! Reference characteristic functions: the closed form for the stochastic
//! volatility model with variance-proportional jumps, its Riccati ODE
//! counterpart, and the constant-coefficient jump diffusion.

mod heston;
mod merton;
mod pricing;

pub use crate::model::HestonJumpParams;
pub use heston::{
    heston_jump_cd, heston_jump_cf, heston_jump_cf_with, heston_jump_psi, heston_jump_riccati_cf,
    rk4_converged, CfSettings,
};
pub use merton::merton_cf;
pub use pricing::{exact_delta, exact_gamma, exact_iv, exact_price, exact_report};
