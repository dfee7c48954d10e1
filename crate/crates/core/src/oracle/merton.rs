use num_complex::Complex64;

use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `E[e^{iξX_T} | X_t = x]` for a Lévy log-price with volatility `σ` and
/// Gaussian jumps `(λ, m, s)`, drift chosen so that `e^X` is a martingale.
#[allow(clippy::too_many_arguments)]
pub fn merton_cf(
    sigma: f64,
    intensity: f64,
    jump_mean: f64,
    jump_std: f64,
    t: f64,
    x: f64,
    horizon: f64,
    xi: Complex64,
) -> Result<Complex64> {
    if !(sigma >= 0.0) || !(intensity >= 0.0) || !(jump_std >= 0.0) || !(horizon >= t) {
        return Err(Error::InvalidParameter(
            "merton_cf needs σ, λ, s ≥ 0 and T ≥ t".into(),
        ));
    }
    let (m, s2) = (jump_mean, jump_std * jump_std);
    let compensator = intensity * ((m + 0.5 * s2).exp() - 1.0 - m);
    let mu = -0.5 * sigma * sigma - compensator;
    let jump = intensity * ((I * m * xi - 0.5 * s2 * xi * xi).exp() - 1.0 - I * m * xi);
    let psi = I * mu * xi - 0.5 * sigma * sigma * xi * xi + jump;
    Ok((I * xi * x + (horizon - t) * psi).exp())
}
