//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

pub mod props;

use std::f64::consts::PI;

use levy_expansion::expansion::{CharApprox, SimplexSpec};
use levy_expansion::model::{expand_taylor, heston_jump, HestonJumpParams};
use levy_expansion::oracle::rk4_converged;
use levy_expansion::quadrature::{gauss_hermite_normal, gauss_legendre};
use levy_expansion::Complex64;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn heston_approx(p: &HestonJumpParams, order: usize, point: [f64; 2], tau: f64) -> CharApprox {
    let em = expand_taylor(&heston_jump(p).unwrap(), order, &point).unwrap();
    CharApprox::new(&em, 0.0, tau, SimplexSpec::default()).unwrap()
}

// ---------------------------------------------------------------------------
// Truncated power series in ε (degree ≤ 2).

#[derive(Clone, Copy, Debug, Default)]
struct Eps([Complex64; 3]);

impl Eps {
    fn constant(a: Complex64) -> Self {
        Eps([a, c(0.0, 0.0), c(0.0, 0.0)])
    }
    fn linear(a: Complex64, b: Complex64) -> Self {
        Eps([a, b, c(0.0, 0.0)])
    }
    fn add(self, o: Eps) -> Eps {
        Eps([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
    fn mul(self, o: Eps) -> Eps {
        let (a, b) = (self.0, o.0);
        Eps([
            a[0] * b[0],
            a[0] * b[1] + a[1] * b[0],
            a[0] * b[2] + a[1] * b[1] + a[2] * b[0],
        ])
    }
}

/// `(P̂₁/P̂₀, P̂₂/P̂₀)` for the stochastic-volatility model expanded in `z`
/// about `z_bar`, from the ε-deformed affine family
/// `a_α^ε(z) = p_α + q_α z̄ + ε q_α (z − z̄)` whose exact CF is
/// `exp(iξx + A^ε(τ) + z B^ε(τ))`. Expanding `A^ε, B^ε` to second order in ε
/// gives the order-1 and order-2 terms. Also returns `P̂₀`.
pub fn eps_riccati_terms(
    p: &HestonJumpParams,
    z_bar: f64,
    tau: f64,
    xi: Complex64,
    x: f64,
    z: f64,
) -> (Complex64, Complex64, Complex64) {
    let (m, s2) = (p.jump_mean, p.jump_std * p.jump_std);
    let psi_j = p.intensity * ((I * m * xi - 0.5 * s2 * xi * xi).exp() - 1.0 - I * m * xi);
    let mu = -0.5 - p.intensity * ((m + 0.5 * s2).exp() - 1.0 - m);
    let ix = I * xi;
    // (p_α, q_α, exponent of i ξ, exponent of B) with the jump term as α = 0 times ψ
    let terms: [(f64, f64, u32, u32, Complex64); 6] = [
        (0.0, mu, 1, 0, c(1.0, 0.0)),
        (0.0, 0.5, 2, 0, c(1.0, 0.0)),
        (0.0, p.rho * p.delta, 1, 1, c(1.0, 0.0)),
        (p.kappa * p.theta, -p.kappa, 0, 1, c(1.0, 0.0)),
        (0.0, 0.5 * p.delta * p.delta, 0, 2, c(1.0, 0.0)),
        (0.0, 1.0, 0, 0, psi_j),
    ];
    let rhs = move |_: f64, y: [Complex64; 6]| -> [Complex64; 6] {
        let b = Eps([y[3], y[4], y[5]]);
        let mut da = Eps::default();
        let mut db = Eps::default();
        for &(pa, qa, ex, eb, extra) in &terms {
            let mut w = Eps::constant(ix.powu(ex) * extra);
            for _ in 0..eb {
                w = w.mul(b);
            }
            let ca = Eps::linear(c(pa + qa * z_bar, 0.0), c(-qa * z_bar, 0.0));
            let cb = Eps::linear(c(0.0, 0.0), c(qa, 0.0));
            da = da.add(ca.mul(w));
            db = db.add(cb.mul(w));
        }
        [da.0[0], da.0[1], da.0[2], db.0[0], db.0[1], db.0[2]]
    };
    let y = rk4_converged(rhs, tau, 1e-13).unwrap();
    let p0 = (ix * x + y[0] + z * y[3]).exp();
    let r1 = y[1] + z * y[4];
    let r2 = y[2] + z * y[5] + 0.5 * r1 * r1;
    (p0, r1, r2)
}

// ---------------------------------------------------------------------------
// Brute-force Duhamel construction of u₁ for the one-dimensional
// local-volatility model with state-dependent Gaussian jumps:
//   σ²(x) = v0 + v1 x,  λ(x) = l0 + l1 x,  jumps N(m, s²),
//   μ(x) = −½σ²(x) − λ(x)(e^{m+s²/2} − 1 − m).

#[derive(Clone, Copy, Debug)]
pub struct LocalVolToy {
    pub v0: f64,
    pub v1: f64,
    pub l0: f64,
    pub l1: f64,
    pub m: f64,
    pub s: f64,
}

impl LocalVolToy {
    fn kj(&self) -> f64 {
        (self.m + 0.5 * self.s * self.s).exp() - 1.0 - self.m
    }

    /// Frozen coefficients `(a₂, a₁, λ)` and their x-slopes at `x̄`.
    fn frozen(&self, x_bar: f64) -> ([f64; 3], [f64; 3]) {
        let a2 = 0.5 * (self.v0 + self.v1 * x_bar);
        let lam = self.l0 + self.l1 * x_bar;
        let a1 = -a2 - lam * self.kj();
        (
            [a2, a1, lam],
            [0.5 * self.v1, -0.5 * self.v1 - self.l1 * self.kj(), self.l1],
        )
    }

    /// Lévy exponent of the frozen generator: `E[e^{iuL_τ}] = e^{τψ₀(u)}`.
    fn psi0(&self, x_bar: f64, u: Complex64) -> Complex64 {
        let ([a2, a1, lam], _) = self.frozen(x_bar);
        let jump = (I * self.m * u - 0.5 * self.s * self.s * u * u).exp() - 1.0 - I * self.m * u;
        -a2 * u * u + I * a1 * u + lam * jump
    }
}

fn cutoff(a2: f64, tau: f64) -> f64 {
    (40.0 / (a2 * tau)).sqrt() + 20.0
}

/// `u₀ = P₀(t,T)φ` and the Duhamel term
/// `u₁(t,x) = ∫_t^T P₀(t,s) A₁ P₀(s,T) φ ds` for a call with log-strike `k`,
/// where `A₁ = (x − x̄)[a₂' ∂² + a₁' ∂ + λ' J]`. Returns `(u₀, u₁)`.
pub fn duhamel_u1(
    toy: &LocalVolToy,
    x_bar: f64,
    x: f64,
    k: f64,
    tau: f64,
    s_nodes: usize,
) -> (f64, f64) {
    let ([a2, ..], [d2, d1, dl]) = toy.frozen(x_bar);
    let h: f64 = 1e-3;
    let reach: f64 = 1.5;
    let gh = gauss_hermite_normal(20).unwrap();
    let jump_span = gh
        .nodes
        .iter()
        .map(|n| (toy.m + toy.s * n).abs())
        .fold(0.0, f64::max);
    let n_out = (reach / h).round() as i64;
    let n_in = ((reach + jump_span) / h).ceil() as i64 + 4;
    let grid = |n: i64| -> Vec<f64> { (-n..=n).map(|j| x + j as f64 * h).collect() };
    let ys_in = grid(n_in);
    let ys_out = grid(n_out);
    let damp = 1.5;

    // w(y) = (1/π) Re ∫₀^∞ e^{−iuy} ĥ(u) e^{τψ₀(−u)} du on Im u = damp
    let price_grid = |tau_left: f64| -> Vec<f64> {
        let cut = cutoff(a2, tau_left);
        let rule = gauss_legendre(32).unwrap();
        let panels = (cut / 4.0).ceil() as usize;
        let mut acc = vec![c(0.0, 0.0); ys_in.len()];
        for j in 0..panels {
            let (a, b) = (4.0 * j as f64, 4.0 * (j + 1) as f64);
            for (ur, wq) in rule.mapped(a, b) {
                let u = c(ur, damp);
                let hat = (k * (1.0 + I * u)).exp() / (I * u * (1.0 + I * u));
                let base = hat * (tau_left * toy.psi0(x_bar, -u)).exp() * wq;
                let mut e = (-I * u * ys_in[0]).exp();
                let step = (-I * u * h).exp();
                for v in acc.iter_mut() {
                    *v += base * e;
                    e *= step;
                }
            }
        }
        acc.iter().map(|v| v.re / PI).collect()
    };

    // transition density of the frozen process, p(τ, z) = (1/π) Re ∫₀^∞ e^{−iuz + τψ₀(u)} du
    let density = |tau_s: f64, z0: f64, n: usize| -> Vec<f64> {
        let cut = cutoff(a2, tau_s);
        let rule = gauss_legendre(32).unwrap();
        let panels = (cut / 4.0).ceil() as usize;
        let mut acc = vec![c(0.0, 0.0); n];
        for j in 0..panels {
            let (a, b) = (4.0 * j as f64, 4.0 * (j + 1) as f64);
            for (ur, wq) in rule.mapped(a, b) {
                let u = c(ur, 0.0);
                let base = (tau_s * toy.psi0(x_bar, u)).exp() * wq;
                let mut e = (-I * u * z0).exp();
                let step = (-I * u * h).exp();
                for v in acc.iter_mut() {
                    *v += base * e;
                    e *= step;
                }
            }
        }
        acc.iter().map(|v| v.re / PI).collect()
    };

    let interp = |w: &[f64], y: f64| -> f64 {
        // cubic Lagrange on the uniform inner grid
        let pos = (y - ys_in[0]) / h;
        let j = (pos.floor() as i64 - 1).clamp(0, w.len() as i64 - 4) as usize;
        let t = pos - j as f64;
        let l = [
            -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0,
            t * (t - 2.0) * (t - 3.0) / 2.0,
            -t * (t - 1.0) * (t - 3.0) / 2.0,
            t * (t - 1.0) * (t - 2.0) / 6.0,
        ];
        (0..4).map(|q| l[q] * w[j + q]).sum()
    };

    let u0 = {
        let w = price_grid(tau);
        w[n_in as usize]
    };

    let srule = gauss_legendre(s_nodes).unwrap();
    let mut u1 = 0.0;
    for (s, ws) in srule.mapped(0.0, tau) {
        let w = price_grid(tau - s);
        let off = (n_in - n_out) as usize;
        // A₁ w on the outer grid
        let g: Vec<f64> = ys_out
            .iter()
            .enumerate()
            .map(|(i, &y)| {
                let j = i + off;
                let (wm2, wm1, w0, wp1, wp2) = (w[j - 2], w[j - 1], w[j], w[j + 1], w[j + 2]);
                let dw = (-wp2 + 8.0 * wp1 - 8.0 * wm1 + wm2) / (12.0 * h);
                let ddw = (-wp2 + 16.0 * wp1 - 30.0 * w0 + 16.0 * wm1 - wm2) / (12.0 * h * h);
                let jump: f64 = gh
                    .nodes
                    .iter()
                    .zip(&gh.weights)
                    .map(|(n, wt)| {
                        let z = toy.m + toy.s * n;
                        wt * (interp(&w, y + z) - w0 - z * dw)
                    })
                    .sum();
                (y - x_bar) * (d2 * ddw + d1 * dw + dl * jump)
            })
            .collect();
        // P₀(0, s) g at x: ∫ g(y) p(s, y − x) dy, trapezoid on the outer grid
        let p = density(s, ys_out[0] - x, ys_out.len());
        let inner: f64 = g.iter().zip(&p).map(|(a, b)| a * b).sum::<f64>() * h;
        u1 += ws * inner;
    }
    (u0, u1)
}
