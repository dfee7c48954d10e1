//! Fourier inversion of characteristic-function approximations into prices,
//! Greeks and implied volatilities.

pub mod black_scholes;
pub mod fourier;
pub mod payoff;

pub use black_scholes::{bs_delta, bs_gamma, bs_price, implied_vol, norm_cdf};
pub use fourier::{
    delta, fourier_price, gamma, price, CfSymbol, FourierSymbol, OrderTerm, PriceReport,
    PriceRequest, QuadratureSpec,
};
pub use payoff::{OptionKind, PayoffTransform};
