use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::expand::Trajectory;
use super::field::Field;
use super::generator::{generator_from_sde, martingale_drift, KernelTerm, ModelSpec};
use super::levy::gaussian_levy_family;
use crate::error::{Error, Result};
use crate::jets::MultiIndex;

/// Log-price `X` and variance `Z` with Gaussian jumps in `X` arriving at
/// rate proportional to `Z`:
///
/// ```text
/// dX = μ Z dt + √Z dW + dJ,   dZ = κ(θ − Z) dt + δ √Z dB,   d⟨W, B⟩ = ρ dt
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HestonJumpParams {
    pub kappa: f64,
    pub theta: f64,
    pub delta: f64,
    pub rho: f64,
    /// Jump intensity per unit of variance.
    pub intensity: f64,
    pub jump_mean: f64,
    pub jump_std: f64,
    /// Initial log-price.
    pub x0: f64,
    /// Initial variance.
    pub z0: f64,
}

impl Default for HestonJumpParams {
    fn default() -> Self {
        HestonJumpParams {
            kappa: 1.15,
            theta: 0.04,
            delta: 0.2,
            rho: -0.7,
            intensity: 2.0,
            jump_mean: -0.1,
            jump_std: 0.2,
            x0: 0.0,
            z0: 0.04,
        }
    }
}

impl HestonJumpParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.kappa,
            self.theta,
            self.delta,
            self.rho,
            self.intensity,
            self.jump_mean,
            self.jump_std,
            self.x0,
            self.z0,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("non-finite model parameter".into()));
        }
        if self.kappa <= 0.0 || self.theta <= 0.0 || self.delta <= 0.0 {
            return Err(Error::InvalidParameter(
                "κ, θ and δ must be positive".into(),
            ));
        }
        if self.rho.abs() > 1.0 {
            return Err(Error::InvalidParameter(format!(
                "|ρ| = {} exceeds one",
                self.rho.abs()
            )));
        }
        if self.intensity < 0.0 || self.jump_std < 0.0 {
            return Err(Error::InvalidParameter(
                "jump intensity and std dev must be non-negative".into(),
            ));
        }
        if self.z0 < 0.0 {
            return Err(Error::InvalidParameter(
                "initial variance must be non-negative".into(),
            ));
        }
        Ok(())
    }

    /// `∫ (e^ζ − 1 − ζ) ν(dζ)` per unit of variance.
    pub fn jump_compensator(&self) -> f64 {
        let (m, s) = (self.jump_mean, self.jump_std);
        self.intensity * ((m + 0.5 * s * s).exp() - 1.0 - m)
    }
}

/// Geometric Brownian motion in log-price with zero rates.
pub fn black_scholes(sigma: f64) -> Result<ModelSpec> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "volatility must be positive (got {sigma})"
        )));
    }
    let s2 = Field::constant(1, sigma * sigma);
    let mu = martingale_drift(&s2, &[], &Field::zero(1), 0)?;
    generator_from_sde(vec![mu], vec![vec![s2]], Field::zero(1), vec![])
}

/// Constant-coefficient jump diffusion with Gaussian jumps.
pub fn merton(sigma: f64, intensity: f64, jump_mean: f64, jump_std: f64) -> Result<ModelSpec> {
    if !(sigma >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "volatility must be non-negative (got {sigma})"
        )));
    }
    let s2 = Field::constant(1, sigma * sigma);
    let fam = gaussian_levy_family(1, 0, intensity, jump_mean, jump_std)?;
    let kernel = vec![KernelTerm::new(Field::constant(1, 1.0), fam)];
    let mu = martingale_drift(&s2, &kernel, &Field::zero(1), 0)?;
    generator_from_sde(vec![mu], vec![vec![s2]], Field::zero(1), kernel)
}

/// Stochastic volatility with variance-proportional Gaussian jumps; state `(x, z)`.
pub fn heston_jump(p: &HestonJumpParams) -> Result<ModelSpec> {
    p.validate()?;
    let z = Field::polynomial(2, vec![(MultiIndex::from([0, 1]), 1.0)]);
    let fam = gaussian_levy_family(2, 0, p.intensity, p.jump_mean, p.jump_std)?;
    let kernel = vec![KernelTerm::new(z.clone(), fam)];
    let mu_x = martingale_drift(&z, &kernel, &Field::zero(2), 0)?;
    let mu_z = Field::affine(p.kappa * p.theta, &[0.0, -p.kappa]);
    let diffusion = vec![
        vec![z.clone(), z.scaled(p.rho * p.delta)],
        vec![z.scaled(p.rho * p.delta), z.scaled(p.delta * p.delta)],
    ];
    generator_from_sde(vec![mu_x, mu_z], diffusion, Field::zero(2), kernel)
}

/// `x̄(t) = (x₀, θ + (z₀ − θ) e^{−κt})`, the mean path of the variance.
pub fn heston_mean_trajectory(p: &HestonJumpParams) -> Trajectory {
    let p = *p;
    Arc::new(move |t| vec![p.x0, p.theta + (p.z0 - p.theta) * (-p.kappa * t).exp()])
}

/// One-dimensional local volatility with state-dependent jump intensity:
/// `σ²(x) = v₀ + v₁ x`, jump rate `λ₀ + λ₁ x` with Gaussian sizes `(m, s)`,
/// drift chosen so `e^X` is a martingale.
pub fn local_vol_jump(
    variance: (f64, f64),
    intensity: (f64, f64),
    jump_mean: f64,
    jump_std: f64,
) -> Result<ModelSpec> {
    let s2 = Field::affine(variance.0, &[variance.1]);
    let fam = gaussian_levy_family(1, 0, 1.0, jump_mean, jump_std)?;
    let kernel = vec![KernelTerm::new(
        Field::affine(intensity.0, &[intensity.1]),
        fam,
    )];
    let mu = martingale_drift(&s2, &kernel, &Field::zero(1), 0)?;
    generator_from_sde(vec![mu], vec![vec![s2]], Field::zero(1), kernel)
}
