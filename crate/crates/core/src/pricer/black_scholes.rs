use roots::{find_root_brent, SimpleConvergency};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

const VOL_BRACKET: (f64, f64) = (1e-6, 5.0);

/// Standard normal CDF, accurate in both tails.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

fn d1(x: f64, k: f64, tau: f64, sigma: f64) -> f64 {
    let sq = sigma * tau.sqrt();
    (x - k) / sq + 0.5 * sq
}

/// Zero-rate call price `e^x N(d₁) − e^k N(d₂)` on log-spot `x`, log-strike `k`.
pub fn bs_price(x: f64, k: f64, tau: f64, sigma: f64) -> f64 {
    let d1 = d1(x, k, tau, sigma);
    let d2 = d1 - sigma * tau.sqrt();
    x.exp() * norm_cdf(d1) - k.exp() * norm_cdf(d2)
}

/// `∂C/∂S = N(d₁)`.
pub fn bs_delta(x: f64, k: f64, tau: f64, sigma: f64) -> f64 {
    norm_cdf(d1(x, k, tau, sigma))
}

/// `∂²C/∂S² = φ(d₁) / (S σ √τ)`.
pub fn bs_gamma(x: f64, k: f64, tau: f64, sigma: f64) -> f64 {
    norm_pdf(d1(x, k, tau, sigma)) / (x.exp() * sigma * tau.sqrt())
}

/// Black–Scholes volatility reproducing a zero-rate call price.
pub fn implied_vol(price: f64, x: f64, k: f64, tau: f64) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "time to maturity must be positive (got {tau})"
        )));
    }
    let lower = (x.exp() - k.exp()).max(0.0);
    let upper = x.exp();
    if !(price > lower && price < upper) {
        return Err(Error::PriceOutOfBounds {
            price,
            lower,
            upper,
        });
    }
    let f = |s: f64| bs_price(x, k, tau, s) / price - 1.0;
    let (lo, hi) = VOL_BRACKET;
    if f(lo) > 0.0 || f(hi) < 0.0 {
        return Err(Error::PriceOutOfBounds {
            price,
            lower,
            upper,
        });
    }
    let mut conv = SimpleConvergency {
        eps: 1e-15,
        max_iter: 500,
    };
    let sigma = find_root_brent(lo, hi, f, &mut conv)
        .map_err(|e| Error::Numerical(format!("implied vol: {e:?}")))?;
    if f(sigma).abs() > 1e-10 {
        return Err(Error::Numerical(format!(
            "implied vol relative residual {:e} above 1e-10",
            f(sigma).abs()
        )));
    }
    Ok(sigma)
}
