use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::HestonJumpParams;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Numerical safeguards of [`heston_jump_cf_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfSettings {
    /// Initial number of τ-steps used to follow the logarithm's branch.
    pub branch_grid: usize,
    /// `|1 − g e^{−dτ}|` below this is treated as a pole of `D`.
    pub pole_tol: f64,
    /// Deliberately lands the logarithm on the wrong sheet (self-test only).
    pub inject_branch_fault: bool,
}

impl Default for CfSettings {
    fn default() -> Self {
        CfSettings {
            branch_grid: 16,
            pole_tol: 1e-12,
            inject_branch_fault: false,
        }
    }
}

/// Log-price exponent per unit variance:
/// `ψ(ξ) = iμξ − ξ²/2 + λ(e^{imξ − s²ξ²/2} − 1 − imξ)`, with the martingale
/// drift `μ = −½ − λ(e^{m+s²/2} − 1 − m)`.
pub fn heston_jump_psi(p: &HestonJumpParams, xi: Complex64) -> Complex64 {
    let (m, s) = (p.jump_mean, p.jump_std);
    let mu = -0.5 - p.jump_compensator();
    let jump = p.intensity * ((I * m * xi - 0.5 * s * s * xi * xi).exp() - 1.0 - I * m * xi);
    I * mu * xi - 0.5 * xi * xi + jump
}

/// `E[e^{iξ X_T} | X_t = x, Z_t = z]` for the stochastic-volatility model
/// with variance-proportional Gaussian jumps.
pub fn heston_jump_cf(
    p: &HestonJumpParams,
    t: f64,
    x: f64,
    z: f64,
    horizon: f64,
    xi: Complex64,
) -> Result<Complex64> {
    heston_jump_cf_with(p, t, x, z, horizon, xi, &CfSettings::default())
}

/// `(C(τ, ξ), D(τ, ξ))` so that the CF equals `e^{iξx + C + zD}`.
pub fn heston_jump_cd(
    p: &HestonJumpParams,
    tau: f64,
    xi: Complex64,
    cfg: &CfSettings,
) -> Result<(Complex64, Complex64)> {
    p.validate()?;
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "time to maturity must be ≥ 0 (got {tau})"
        )));
    }
    if !xi.re.is_finite() || !xi.im.is_finite() {
        return Err(Error::InvalidParameter(
            "non-finite Fourier variable".into(),
        ));
    }
    let d2 = p.delta * p.delta;
    let a = p.kappa - p.rho * p.delta * I * xi;
    let d = (a * a - 2.0 * d2 * heston_jump_psi(p, xi)).sqrt();
    let d = if d.re < 0.0 { -d } else { d };
    let apd = a + d;
    if apd.norm() < cfg.pole_tol {
        return Err(Error::Numerical(format!(
            "degenerate Riccati roots at ξ = {xi}"
        )));
    }
    let g = (a - d) / apd;
    let ratio = |s: f64| (1.0 - g * (-d * s).exp()) / (1.0 - g);
    let den = 1.0 - g * (-d * tau).exp();
    if den.norm() < cfg.pole_tol || (1.0 - g).norm() < cfg.pole_tol {
        return Err(Error::Numerical(format!(
            "D(τ, ξ) has a pole near ξ = {xi}, τ = {tau}"
        )));
    }
    let mut log = continuous_log(ratio, tau, cfg)?;
    if cfg.inject_branch_fault {
        log += 2.0 * PI * I;
    }
    let dd = (a - d) / d2 * (1.0 - (-d * tau).exp()) / den;
    let cc = p.kappa * p.theta / d2 * ((a - d) * tau - 2.0 * log);
    Ok((cc, dd))
}

pub fn heston_jump_cf_with(
    p: &HestonJumpParams,
    t: f64,
    x: f64,
    z: f64,
    horizon: f64,
    xi: Complex64,
    cfg: &CfSettings,
) -> Result<Complex64> {
    let (c, d) = heston_jump_cd(p, horizon - t, xi, cfg)?;
    let v = (I * xi * x + c + z * d).exp();
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::Numerical(format!(
            "characteristic function overflow at ξ = {xi}"
        )));
    }
    Ok(v)
}

/// `log L(τ)` continued from `L(0) = 1` along `[0, τ]`, refining any step
/// whose phase increment is too large to attribute to one sheet.
fn continuous_log<F: Fn(f64) -> Complex64>(l: F, tau: f64, cfg: &CfSettings) -> Result<Complex64> {
    let n = cfg.branch_grid.max(1);
    let mut phase = 0.0;
    let mut prev = Complex64::new(1.0, 0.0);
    let h = tau / n as f64;
    for k in 1..=n {
        let (s0, s1) = ((k - 1) as f64 * h, k as f64 * h);
        phase += phase_increment(&l, s0, s1, prev, 0, cfg)?;
        prev = l(s1);
    }
    let end = l(tau);
    if end.norm() < cfg.pole_tol {
        return Err(Error::Numerical("logarithm of zero in C(τ, ξ)".into()));
    }
    Ok(Complex64::new(end.norm().ln(), phase))
}

fn phase_increment<F: Fn(f64) -> Complex64>(
    l: &F,
    s0: f64,
    s1: f64,
    v0: Complex64,
    depth: u32,
    cfg: &CfSettings,
) -> Result<f64> {
    let v1 = l(s1);
    if v1.norm() < cfg.pole_tol {
        return Err(Error::Numerical(format!(
            "logarithm argument vanishes at τ = {s1}"
        )));
    }
    let step = (v1 / v0).arg();
    if step.abs() < 0.5 * PI {
        return Ok(step);
    }
    if depth >= 30 {
        return Err(Error::Branch(format!(
            "phase jumps by {step:.3} rad within τ ∈ [{s0:e}, {s1:e}]"
        )));
    }
    let mid = 0.5 * (s0 + s1);
    let vm = l(mid);
    Ok(phase_increment(l, s0, mid, v0, depth + 1, cfg)?
        + phase_increment(l, mid, s1, vm, depth + 1, cfg)?)
}

/// The same characteristic function by integrating the Riccati system
/// `B' = ψ + (ρδiξ − κ)B + ½δ²B²`, `A' = κθB` with classical Runge–Kutta,
/// doubling the step count until successive results agree to `tol`.
pub fn heston_jump_riccati_cf(
    p: &HestonJumpParams,
    t: f64,
    x: f64,
    z: f64,
    horizon: f64,
    xi: Complex64,
    tol: f64,
) -> Result<Complex64> {
    p.validate()?;
    let psi = heston_jump_psi(p, xi);
    let lin = p.rho * p.delta * I * xi - p.kappa;
    let quad = 0.5 * p.delta * p.delta;
    let kt = p.kappa * p.theta;
    let rhs = move |_: f64, y: [Complex64; 2]| -> [Complex64; 2] {
        let b = y[1];
        [kt * b, psi + lin * b + quad * b * b]
    };
    let y = rk4_converged(rhs, horizon - t, tol)?;
    Ok((I * xi * x + y[0] + z * y[1]).exp())
}

/// Integrates `y' = f(τ, y)` from `y(0) = 0` to `τ` with RK4, doubling the
/// number of steps until two successive solutions differ by less than `tol`
/// (relative to `max(1, |y|)`).
pub fn rk4_converged<const N: usize, F>(f: F, tau: f64, tol: f64) -> Result<[Complex64; N]>
where
    F: Fn(f64, [Complex64; N]) -> [Complex64; N],
{
    let mut steps = 64usize;
    let mut prev = rk4(&f, tau, steps);
    while steps < (1 << 22) {
        steps *= 2;
        let cur = rk4(&f, tau, steps);
        let scale = cur.iter().map(|c| c.norm()).fold(1.0, f64::max);
        let diff = cur
            .iter()
            .zip(&prev)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if !diff.is_finite() {
            return Err(Error::Numerical("Riccati solution blew up".into()));
        }
        if diff < tol * scale {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Numerical(format!(
        "Riccati integration did not reach tolerance {tol}"
    )))
}

fn rk4<const N: usize, F>(f: &F, tau: f64, steps: usize) -> [Complex64; N]
where
    F: Fn(f64, [Complex64; N]) -> [Complex64; N],
{
    let h = tau / steps as f64;
    let mut y = [Complex64::new(0.0, 0.0); N];
    let axpy = |y: &[Complex64; N], k: &[Complex64; N], c: f64| {
        let mut out = *y;
        for (o, k) in out.iter_mut().zip(k) {
            *o += k * c;
        }
        out
    };
    for i in 0..steps {
        let s = i as f64 * h;
        let k1 = f(s, y);
        let k2 = f(s + 0.5 * h, axpy(&y, &k1, 0.5 * h));
        let k3 = f(s + 0.5 * h, axpy(&y, &k2, 0.5 * h));
        let k4 = f(s + h, axpy(&y, &k3, h));
        for j in 0..N {
            y[j] += (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]) * (h / 6.0);
        }
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn normalisation_and_martingale() {
        let p = HestonJumpParams::default();
        let one = heston_jump_cf(&p, 0.0, 0.3, 0.05, 1.0, c(0.0, 0.0)).unwrap();
        assert!((one - 1.0).norm() < 1e-14);
        let ex = heston_jump_cf(&p, 0.0, 0.3, 0.05, 1.0, c(0.0, -1.0)).unwrap();
        assert!((ex - c(0.3f64.exp(), 0.0)).norm() < 1e-10);
    }

    #[test]
    fn agrees_with_riccati_integration() {
        let p = HestonJumpParams::default();
        for (xi, tau) in [
            (c(1.0, -1.5), 0.25),
            (c(-7.0, -1.5), 1.0),
            (c(20.0, 0.0), 0.5),
        ] {
            let a = heston_jump_cf(&p, 0.0, 0.0, p.theta, tau, xi).unwrap();
            let b = heston_jump_riccati_cf(&p, 0.0, 0.0, p.theta, tau, xi, 1e-12).unwrap();
            assert!(
                (a - b).norm() <= 1e-9 * b.norm().max(1e-300),
                "{xi} {tau}: {a} vs {b}"
            );
        }
    }

    #[test]
    fn injected_branch_fault_changes_value() {
        let p = HestonJumpParams::default();
        let xi = c(3.0, -1.5);
        let good = heston_jump_cf(&p, 0.0, 0.0, p.theta, 1.0, xi).unwrap();
        let cfg = CfSettings {
            inject_branch_fault: true,
            ..Default::default()
        };
        let bad = heston_jump_cf_with(&p, 0.0, 0.0, p.theta, 1.0, xi, &cfg).unwrap();
        assert!((good - bad).norm() > 1e-3 * good.norm());
    }
}
