use crate::error::Result;
use crate::model::HestonJumpParams;
use crate::pricer::{
    fourier_price, implied_vol, CfSymbol, PayoffTransform, PriceReport, PriceRequest,
    QuadratureSpec,
};

use super::heston::{heston_jump_cf_with, CfSettings};

/// Fourier price of a call on `(x, z)` under the closed-form characteristic
/// function, with the same quadrature as the expansion pricer.
#[allow(clippy::too_many_arguments)]
pub fn exact_report(
    p: &HestonJumpParams,
    t: f64,
    x: f64,
    z: f64,
    horizon: f64,
    log_strikes: &[f64],
    quad: &QuadratureSpec,
    cfg: &CfSettings,
) -> Result<Vec<PriceReport>> {
    let sym = CfSymbol::new(2, |xi, s: &[f64]| {
        heston_jump_cf_with(p, t, s[0], s[1], horizon, xi, cfg)
    });
    let requests: Vec<PriceRequest> = log_strikes
        .iter()
        .map(|&k| PriceRequest {
            payoff: PayoffTransform::call(k),
            x: vec![x, z],
        })
        .collect();
    fourier_price(&sym, &requests, quad)
}

fn single(p: &HestonJumpParams, t: f64, x: f64, horizon: f64, k: f64) -> Result<PriceReport> {
    Ok(exact_report(
        p,
        t,
        x,
        p.z0,
        horizon,
        &[k],
        &QuadratureSpec::default(),
        &CfSettings::default(),
    )?
    .remove(0))
}

/// Exact call price at variance `p.z0`.
pub fn exact_price(p: &HestonJumpParams, t: f64, x: f64, horizon: f64, k: f64) -> Result<f64> {
    Ok(single(p, t, x, horizon, k)?.price())
}

pub fn exact_delta(p: &HestonJumpParams, t: f64, x: f64, horizon: f64, k: f64) -> Result<f64> {
    Ok(single(p, t, x, horizon, k)?.delta())
}

pub fn exact_gamma(p: &HestonJumpParams, t: f64, x: f64, horizon: f64, k: f64) -> Result<f64> {
    Ok(single(p, t, x, horizon, k)?.gamma())
}

/// Black–Scholes implied volatility of [`exact_price`].
pub fn exact_iv(p: &HestonJumpParams, t: f64, x: f64, horizon: f64, k: f64) -> Result<f64> {
    implied_vol(exact_price(p, t, x, horizon, k)?, x, k, horizon - t)
}
