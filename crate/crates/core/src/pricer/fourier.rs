use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::payoff::PayoffTransform;
use crate::error::{Error, Result};
use crate::expansion::{CharApprox, SymbolTerms};
use crate::jets::MultiIndex;
use crate::quadrature::gauss_legendre;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Contour and truncation settings for the Fourier inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// `Im ξ₁` along the integration contour.
    pub shift: f64,
    /// Fixed truncation `Ξ`; chosen from the integrand envelope when `None`.
    pub half_width: Option<f64>,
    /// Gauss–Legendre nodes per panel.
    pub panel_nodes: usize,
    /// Upper bound on the width of one panel.
    pub max_panel_width: f64,
    /// Envelope level at which the integrand is truncated.
    pub truncation_tol: f64,
    /// Largest admissible automatic `Ξ`.
    pub max_half_width: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            shift: -1.5,
            half_width: None,
            panel_nodes: 64,
            max_panel_width: 10.0,
            truncation_tol: 1e-14,
            max_half_width: 1e5,
        }
    }
}

/// A family of Fourier-side terms `P̂_n(ξ)` that can be inverted.
pub trait FourierSymbol: Sync {
    type Node: Send;

    fn dim(&self) -> usize;

    /// Number of terms `n = 0, 1, …`.
    fn terms(&self) -> usize;

    /// Per-ξ precomputation shared by every request.
    fn prepare(&self, xi: &[Complex64]) -> Result<Self::Node>;

    /// `∂^m_{x₁} P̂_n(x)` for `m = 0, 1, 2` and every `n`.
    fn derivatives(&self, node: &Self::Node, x: &[f64]) -> Result<Vec<[Complex64; 3]>>;

    /// `|P̂₀(ξ; x)|`, used to locate the truncation point cheaply.
    fn magnitude(&self, xi: &[Complex64], x: &[f64]) -> Result<f64>;
}

impl FourierSymbol for CharApprox {
    type Node = SymbolTerms;

    fn dim(&self) -> usize {
        CharApprox::dim(self)
    }

    fn terms(&self) -> usize {
        self.order() + 1
    }

    fn prepare(&self, xi: &[Complex64]) -> Result<SymbolTerms> {
        CharApprox::terms(self, xi)
    }

    fn derivatives(&self, node: &SymbolTerms, x: &[f64]) -> Result<Vec<[Complex64; 3]>> {
        let p0 = node.p0(x);
        let iz = I * node.xi[0];
        let e1 = MultiIndex::unit(self.dim(), 0);
        let e2 = e1.add(&e1);
        Ok(node
            .q
            .iter()
            .map(|q| {
                let (q0, q1, q2) = (q.eval(x), q.diff(&e1).eval(x), q.diff(&e2).eval(x));
                [
                    p0 * q0,
                    p0 * (iz * q0 + q1),
                    p0 * (iz * iz * q0 + 2.0 * iz * q1 + q2),
                ]
            })
            .collect())
    }

    fn magnitude(&self, xi: &[Complex64], x: &[f64]) -> Result<f64> {
        let ix: f64 = xi.iter().zip(x).map(|(z, xv)| (I * z * xv).re).sum();
        Ok((self.phi0(xi)?.re + ix).exp())
    }
}

/// A single closed-form characteristic function `ξ₁ ↦ P̂(ξ₁; x)` in the
/// log-price coordinate.
pub struct CfSymbol<F> {
    dim: usize,
    cf: F,
}

impl<F> CfSymbol<F>
where
    F: Fn(Complex64, &[f64]) -> Result<Complex64> + Sync,
{
    pub fn new(dim: usize, cf: F) -> Self {
        CfSymbol { dim, cf }
    }
}

impl<F> FourierSymbol for CfSymbol<F>
where
    F: Fn(Complex64, &[f64]) -> Result<Complex64> + Sync,
{
    type Node = Complex64;

    fn dim(&self) -> usize {
        self.dim
    }

    fn terms(&self) -> usize {
        1
    }

    fn prepare(&self, xi: &[Complex64]) -> Result<Complex64> {
        Ok(xi[0])
    }

    fn derivatives(&self, xi: &Complex64, x: &[f64]) -> Result<Vec<[Complex64; 3]>> {
        let v = (self.cf)(*xi, x)?;
        let iz = I * xi;
        Ok(vec![[v, iz * v, iz * iz * v]])
    }

    fn magnitude(&self, xi: &[Complex64], x: &[f64]) -> Result<f64> {
        Ok((self.cf)(xi[0], x)?.norm())
    }
}

/// One inversion request: a payoff observed at state `x`.
#[derive(Debug, Clone)]
pub struct PriceRequest {
    pub payoff: PayoffTransform,
    pub x: Vec<f64>,
}

/// `u_n` together with its first two `x₁`-derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderTerm {
    pub value: f64,
    pub dx: f64,
    pub dxx: f64,
    /// Imaginary part of the inverted value (should vanish).
    pub imag: f64,
}

/// Result of one inversion request.
#[derive(Debug, Clone)]
pub struct PriceReport {
    pub payoff: PayoffTransform,
    pub x: Vec<f64>,
    pub terms: Vec<OrderTerm>,
    pub half_width: f64,
    pub nodes: usize,
}

impl PriceReport {
    fn through(&self, n: usize) -> OrderTerm {
        let mut acc = OrderTerm {
            value: 0.0,
            dx: 0.0,
            dxx: 0.0,
            imag: 0.0,
        };
        for t in self.terms.iter().take(n + 1) {
            acc.value += t.value;
            acc.dx += t.dx;
            acc.dxx += t.dxx;
            acc.imag += t.imag;
        }
        acc
    }

    fn top(&self) -> usize {
        self.terms.len() - 1
    }

    /// `ū_n = Σ_{m ≤ n} u_m`.
    pub fn price_through(&self, n: usize) -> f64 {
        self.through(n).value
    }

    pub fn price(&self) -> f64 {
        self.price_through(self.top())
    }

    /// `Δ = e^{−x₁} ∂_{x₁} ū_n`.
    pub fn delta_through(&self, n: usize) -> f64 {
        (-self.x[0]).exp() * self.through(n).dx
    }

    pub fn delta(&self) -> f64 {
        self.delta_through(self.top())
    }

    /// `Γ = e^{−2x₁} (∂²_{x₁} − ∂_{x₁}) ū_n`.
    pub fn gamma_through(&self, n: usize) -> f64 {
        let t = self.through(n);
        (-2.0 * self.x[0]).exp() * (t.dxx - t.dx)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma_through(self.top())
    }

    /// Largest `|Im u_n|` over all orders.
    pub fn max_imag(&self) -> f64 {
        self.terms.iter().map(|t| t.imag.abs()).fold(0.0, f64::max)
    }
}

/// `(ξ₁, 0, …, 0)` on the contour.
fn lift(dim: usize, xr: f64, shift: f64) -> Vec<Complex64> {
    let mut xi = vec![ZERO; dim];
    xi[0] = Complex64::new(xr, shift);
    xi
}

fn envelope<S: FourierSymbol>(
    sym: &S,
    req: &PriceRequest,
    spec: &QuadratureSpec,
    xr: f64,
) -> Result<f64> {
    let growth = (1.0 + xr.abs()).powi(2 * (sym.terms() as i32 - 1));
    let mut worst = 0.0f64;
    for side in [xr, -xr] {
        let xi = lift(sym.dim(), side, spec.shift);
        let ph = req.payoff.transform(-xi[0])?.norm();
        worst = worst.max(sym.magnitude(&xi, &req.x)? * ph * growth);
    }
    Ok(worst)
}

/// Smallest `Ξ` (on a doubling-then-linear search) beyond which the
/// integrand envelope stays below the truncation tolerance.
fn truncation<S: FourierSymbol>(sym: &S, req: &PriceRequest, spec: &QuadratureSpec) -> Result<f64> {
    let below = |xr: f64| -> Result<bool> {
        let e = envelope(sym, req, spec, xr)?;
        Ok(e.is_finite() && e < spec.truncation_tol)
    };
    let mut hi = 8.0;
    while !(below(hi)? && below(1.5 * hi)?) {
        hi *= 2.0;
        if hi > spec.max_half_width {
            return Err(Error::Quadrature(format!(
                "integrand still above {:e} at |ξ| = {}; truncation residual too large",
                spec.truncation_tol, spec.max_half_width
            )));
        }
    }
    let lo = hi / 2.0;
    let steps = 16;
    for j in 1..=steps {
        let xr = lo + (hi - lo) * j as f64 / steps as f64;
        if below(xr)? {
            return Ok(xr);
        }
    }
    Ok(hi)
}

/// Inverts `Σ_n P̂_n` for every request along `Im ξ₁ = shift`, evaluating
/// the symbol once per quadrature node for all requests.
pub fn fourier_price<S: FourierSymbol>(
    sym: &S,
    requests: &[PriceRequest],
    spec: &QuadratureSpec,
) -> Result<Vec<PriceReport>> {
    if requests.is_empty() {
        return Ok(Vec::new());
    }
    if spec.panel_nodes == 0 || !(spec.max_panel_width > 0.0) {
        return Err(Error::Quadrature("panel settings must be positive".into()));
    }
    for r in requests {
        r.payoff.check_contour(spec.shift)?;
        if r.x.len() != sym.dim() {
            return Err(Error::Dimension {
                expected: sym.dim(),
                got: r.x.len(),
            });
        }
    }
    let half_width = match spec.half_width {
        Some(h) if h > 0.0 => h,
        Some(h) => {
            return Err(Error::Quadrature(format!(
                "truncation Ξ = {h} must be positive"
            )))
        }
        None => {
            let mut h = 0.0f64;
            for r in requests {
                h = h.max(truncation(sym, r, spec)?);
            }
            h
        }
    };
    let panels = (half_width / spec.max_panel_width).ceil().max(1.0) as usize;
    let width = half_width / panels as f64;
    let rule = gauss_legendre(spec.panel_nodes)?;
    let mut nodes = Vec::with_capacity(2 * panels * rule.len());
    for p in 0..2 * panels {
        let a = -half_width + p as f64 * width;
        nodes.extend(rule.mapped(a, a + width));
    }
    let n_terms = sym.terms();
    let dim = sym.dim();
    let contributions: Vec<Vec<Vec<[Complex64; 3]>>> = nodes
        .par_iter()
        .map(|&(xr, w)| {
            let xi = lift(dim, xr, spec.shift);
            let node = sym.prepare(&xi)?;
            requests
                .iter()
                .map(|r| {
                    let ph = r.payoff.transform(-xi[0])? * w;
                    Ok(sym
                        .derivatives(&node, &r.x)?
                        .into_iter()
                        .map(|d| [d[0] * ph, d[1] * ph, d[2] * ph])
                        .collect())
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let norm = 1.0 / (2.0 * PI);
    let mut reports = Vec::with_capacity(requests.len());
    for (ri, r) in requests.iter().enumerate() {
        let mut sums = vec![[ZERO; 3]; n_terms];
        for c in &contributions {
            for (s, v) in sums.iter_mut().zip(&c[ri]) {
                for m in 0..3 {
                    s[m] += v[m];
                }
            }
        }
        let terms: Vec<OrderTerm> = sums
            .iter()
            .map(|s| OrderTerm {
                value: s[0].re * norm,
                dx: s[1].re * norm,
                dxx: s[2].re * norm,
                imag: s[0].im * norm,
            })
            .collect();
        for (n, t) in terms.iter().enumerate() {
            if !t.value.is_finite() || !t.dx.is_finite() || !t.dxx.is_finite() {
                return Err(Error::Numerical(format!(
                    "non-finite order-{n} term for {}",
                    r.payoff.label()
                )));
            }
            if t.imag.abs() > 1e-8 * t.value.abs() + 1e-13 {
                return Err(Error::Numerical(format!(
                    "order-{n} term for {} has imaginary part {:e} (real part {:e})",
                    r.payoff.label(),
                    t.imag,
                    t.value
                )));
            }
        }
        reports.push(PriceReport {
            payoff: r.payoff,
            x: r.x.clone(),
            terms,
            half_width,
            nodes: nodes.len(),
        });
    }
    Ok(reports)
}

/// Order-by-order price of one payoff under an expanded model.
pub fn price(
    ca: &CharApprox,
    payoff: PayoffTransform,
    x: &[f64],
    spec: &QuadratureSpec,
) -> Result<PriceReport> {
    let req = PriceRequest {
        payoff,
        x: x.to_vec(),
    };
    Ok(fourier_price(ca, &[req], spec)?.remove(0))
}

/// `Δ` of the full-order approximation.
pub fn delta(
    ca: &CharApprox,
    payoff: PayoffTransform,
    x: &[f64],
    spec: &QuadratureSpec,
) -> Result<f64> {
    Ok(price(ca, payoff, x, spec)?.delta())
}

/// `Γ` of the full-order approximation.
pub fn gamma(
    ca: &CharApprox,
    payoff: PayoffTransform,
    x: &[f64],
    spec: &QuadratureSpec,
) -> Result<f64> {
    Ok(price(ca, payoff, x, spec)?.gamma())
}
