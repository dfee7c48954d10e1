use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;

use super::plan::{GTerm, JumpIntegral, NodeData, SimplexSpec, TimePlan};
use crate::error::{Error, Result};
use crate::jets::{Jet, MonomialSpace, MultiIndex, XPoly};
use crate::model::{check_strip, ExpandedModel};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `M̂ᵢ f = (Fᵢ + xᵢ) f − i ∂_{ξᵢ} f`, the conjugated form of
/// `e^{−iξ·x} M̂ᵢ e^{iξ·x}`.
pub fn mhat_apply(i: usize, f: &Jet, fvec: &[Jet]) -> Result<Jet> {
    let df = f.diff(i)?;
    let xi = XPoly::variable(f.space().clone(), i);
    f.mul(&fvec[i])?.add(&f.mul_xpoly(&xi)?)?.add(&df.scale(-I))
}

/// `q_n(x, ξ)` for every `n ≤ N` together with `Φ₀(t, T, ξ)`, so that
/// `P̂_n(t, x, T, ξ) = e^{iξ·x + Φ₀} q_n(x, ξ)`.
#[derive(Debug, Clone)]
pub struct SymbolTerms {
    pub xi: Vec<Complex64>,
    pub phi0: Complex64,
    /// `q[0] ≡ 1`.
    pub q: Vec<XPoly>,
}

impl SymbolTerms {
    pub fn p0(&self, x: &[f64]) -> Complex64 {
        let ix: Complex64 = self.xi.iter().zip(x).map(|(z, xi)| I * z * xi).sum();
        (ix + self.phi0).exp()
    }

    /// `P̂_n(t, x, T, ξ)`.
    pub fn phat(&self, n: usize, x: &[f64]) -> Complex64 {
        self.p0(x) * self.q[n].eval(x)
    }

    /// `Σ_{n ≤ order} P̂_n`.
    pub fn sum_through(&self, order: usize, x: &[f64]) -> Complex64 {
        let q: Complex64 = self.q.iter().take(order + 1).map(|p| p.eval(x)).sum();
        self.p0(x) * q
    }
}

/// Characteristic-function approximation of order `N` for fixed `(t, T)`.
///
/// Building it precomputes every ξ-independent quantity; [`CharApprox::terms`]
/// is then a pure function of `ξ` and may be called concurrently.
#[derive(Debug, Clone)]
pub struct CharApprox {
    model: ExpandedModel,
    plan: Arc<TimePlan>,
    spec: SimplexSpec,
}

/// Per-ξ jets shared by every time node.
struct XiContext {
    space: Arc<MonomialSpace>,
    base: Vec<Complex64>,
    order: usize,
    /// `(iξ)^α` in the order of `plan.alphas`.
    ipow: Vec<Jet>,
    /// `ψ̄_m(ξ)` jets for time-homogeneous families.
    psi: Vec<Option<Jet>>,
    /// F-jets per tree node, filled on first use.
    fcache: HashMap<usize, Vec<Jet>>,
}

impl CharApprox {
    pub fn new(model: &ExpandedModel, t: f64, horizon: f64, spec: SimplexSpec) -> Result<Self> {
        let plan = TimePlan::build(model, t, horizon, &spec)?;
        Ok(CharApprox {
            model: model.clone(),
            plan: Arc::new(plan),
            spec,
        })
    }

    pub fn order(&self) -> usize {
        self.plan.order
    }

    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    pub fn t(&self) -> f64 {
        self.plan.t
    }

    pub fn horizon(&self) -> f64 {
        self.plan.horizon
    }

    pub fn model(&self) -> &ExpandedModel {
        &self.model
    }

    /// Number of simplex time nodes in the precomputed tree.
    pub fn time_nodes(&self) -> usize {
        self.plan.nodes.len()
    }

    fn context(&self, xi: &[Complex64], order: usize) -> Result<XiContext> {
        if xi.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: xi.len(),
            });
        }
        if xi.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter(
                "non-finite Fourier variable".into(),
            ));
        }
        for fam in self.model.families() {
            check_strip(&**fam, xi)?;
        }
        let space = self.model.space().clone();
        let variables: Vec<Jet> = (0..xi.len())
            .map(|i| Jet::variable(space.clone(), order, xi, i).scale(I))
            .collect();
        let ipow = self
            .plan
            .alphas
            .iter()
            .map(|alpha| {
                let mut acc = Jet::one(space.clone(), order, xi);
                for (i, &e) in alpha.entries().iter().enumerate() {
                    for _ in 0..e {
                        acc = acc.mul(&variables[i])?;
                    }
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        let psi = self
            .model
            .families()
            .iter()
            .map(|fam| {
                if fam.is_time_homogeneous() {
                    let p = fam.partials(self.plan.t, xi, order, &space)?;
                    Ok(Some(Jet::from_partials_slice(
                        space.clone(),
                        order,
                        xi,
                        &p,
                    )?))
                } else {
                    Ok(None)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(XiContext {
            space,
            base: xi.to_vec(),
            order,
            ipow,
            psi,
            fcache: HashMap::new(),
        })
    }

    fn psi_jet(&self, ctx: &XiContext, m: usize, s: f64) -> Result<Jet> {
        if let Some(j) = &ctx.psi[m] {
            return Ok(j.clone());
        }
        let fam = &self.model.families()[m];
        let p = fam.partials(s, &ctx.base, ctx.order, &ctx.space)?;
        Jet::from_partials_slice(ctx.space.clone(), ctx.order, &ctx.base, &p)
    }

    /// Jet of `Φ₀(t, s, ·)` about the context's base point.
    fn phi0_jet(&self, ctx: &XiContext, node: &NodeData) -> Result<Jet> {
        let mut acc = Jet::zero(ctx.space.clone(), ctx.order, &ctx.base);
        for (ip, a) in ctx.ipow.iter().zip(&node.a_int) {
            if *a != Complex64::new(0.0, 0.0) {
                acc = acc.add(&ip.scale(*a))?;
            }
        }
        for (m, ji) in node.jump_int.iter().enumerate() {
            match ji {
                JumpIntegral::Factor(w) => {
                    if *w != 0.0 {
                        acc =
                            acc.add(&self.psi_jet(ctx, m, node.s)?.scale(Complex64::new(*w, 0.0)))?;
                    }
                }
                JumpIntegral::Nodes(pts) => {
                    for &(r, w) in pts {
                        acc = acc.add(&self.psi_jet(ctx, m, r)?.scale(Complex64::new(w, 0.0)))?;
                    }
                }
            }
        }
        Ok(acc)
    }

    fn f_jets(&self, ctx: &XiContext, node: &NodeData) -> Result<Vec<Jet>> {
        let phi = self.phi0_jet(ctx, node)?;
        (0..self.dim())
            .map(|i| Ok(phi.diff(i)?.scale(-I)))
            .collect()
    }

    /// `Φ₀(t, T, ξ)`.
    pub fn phi0(&self, xi: &[Complex64]) -> Result<Complex64> {
        let ctx = self.context(xi, 0)?;
        Ok(self.phi0_jet(&ctx, &self.plan.terminal)?.scalar_coeff(0))
    }

    /// `F(ξ, t, s) = −i∇_ξ Φ₀(t, s, ξ)` as jets of order `order − 1` about `ξ*`.
    pub fn f_vector(&self, xi_star: &[Complex64], s: f64, order: usize) -> Result<Vec<Jet>> {
        let ctx = self.context(xi_star, order)?;
        let node = self.node_at(s)?;
        self.f_jets(&ctx, &node)
    }

    /// `Ĝ_j(t, s) f` with model data frozen at time `s`.
    pub fn ghat_apply(&self, j: usize, s: f64, f: &Jet) -> Result<Jet> {
        if j == 0 || j > self.order() {
            return Err(Error::InvalidParameter(format!(
                "Ĝ index {j} outside 1..={}",
                self.order()
            )));
        }
        let ctx = self.context(f.base(), f.order())?;
        let node = self.node_at(s)?;
        let fvec = self.f_jets(&ctx, &node)?;
        self.ghat(&ctx, &node.g[j - 1], node.s, f, &fvec)
    }

    fn node_at(&self, s: f64) -> Result<NodeData> {
        if !(s >= self.plan.t && s <= self.plan.horizon) {
            return Err(Error::InvalidParameter(format!(
                "time {s} outside [{}, {}]",
                self.plan.t, self.plan.horizon
            )));
        }
        TimePlan::probe(&self.model, self.plan.t, s, &self.spec)
    }

    fn ghat(&self, ctx: &XiContext, terms: &[GTerm], s: f64, f: &Jet, fvec: &[Jet]) -> Result<Jet> {
        let mut powers: HashMap<MultiIndex, Jet> = HashMap::new();
        powers.insert(MultiIndex::zero(self.dim()), f.clone());
        let mut acc: Option<Jet> = None;
        for term in terms {
            let mf = mhat_power(&mut powers, &term.gamma, fvec)?;
            let mut coeff = Jet::zero(ctx.space.clone(), ctx.order, &ctx.base);
            for &(ai, c) in &term.alpha {
                coeff = coeff.add(&ctx.ipow[ai].scale(c))?;
            }
            for &(m, c) in &term.kernel {
                coeff = coeff.add(&self.psi_jet(ctx, m, s)?.scale(c))?;
            }
            let contrib = coeff.mul(&mf)?;
            acc = Some(match acc {
                Some(a) => a.add(&contrib)?,
                None => contrib,
            });
        }
        Ok(acc.unwrap_or_else(|| {
            Jet::zero(ctx.space.clone(), f.order().saturating_sub(1), &ctx.base)
        }))
    }

    /// Conjugated symbols `L̂_n` for `n = 1..=N` as jets about `ξ*`, applying
    /// `Ĝ(t, t₁)` first and `Ĝ(t, t_k)` last in each composition.
    pub fn lhat_all(&self, xi_star: &[Complex64]) -> Result<Vec<Option<Jet>>> {
        let n_max = self.order();
        let mut ctx = self.context(xi_star, n_max)?;
        let mut acc: Vec<Option<Jet>> = vec![None; n_max + 1];
        if n_max == 0 {
            return Ok(acc);
        }
        let one = Jet::one(ctx.space.clone(), n_max, xi_star);
        self.descend(&mut ctx, &self.plan.roots, 0, &one, 1.0, &mut acc)?;
        Ok(acc)
    }

    fn descend(
        &self,
        ctx: &mut XiContext,
        children: &[usize],
        n: usize,
        f: &Jet,
        weight: f64,
        acc: &mut [Option<Jet>],
    ) -> Result<()> {
        let n_max = self.order();
        for &c in children {
            let node = &self.plan.nodes[c];
            let w = weight * node.weight;
            if !ctx.fcache.contains_key(&c) {
                let fv = self.f_jets(ctx, &node.data)?;
                ctx.fcache.insert(c, fv);
            }
            let fvec = ctx.fcache[&c].clone();
            for j in 1..=(n_max - n) {
                let g = self.ghat(ctx, &node.data.g[j - 1], node.data.s, f, &fvec)?;
                let scaled = g.scale(Complex64::new(w, 0.0));
                acc[n + j] = Some(match acc[n + j].take() {
                    Some(a) => a.add(&scaled)?,
                    None => scaled,
                });
                if n + j < n_max && !node.children.is_empty() {
                    self.descend(ctx, &node.children, n + j, &g, w, acc)?;
                }
            }
        }
        Ok(())
    }

    /// `L̂_n` about `ξ*`; its order-0 coefficient is `q_n(·, ξ*)`.
    pub fn lhat_symbol(&self, n: usize, xi_star: &[Complex64]) -> Result<Jet> {
        if n == 0 || n > self.order() {
            return Err(Error::InvalidParameter(format!(
                "order {n} outside 1..={}",
                self.order()
            )));
        }
        let space = self.model.space().clone();
        Ok(self.lhat_all(xi_star)?[n]
            .take()
            .unwrap_or_else(|| Jet::zero(space, self.order() - n, xi_star)))
    }

    /// `Φ₀` and every `q_n` at one Fourier point.
    pub fn terms(&self, xi: &[Complex64]) -> Result<SymbolTerms> {
        let phi0 = self.phi0(xi)?;
        let space = self.model.space().clone();
        let lhat = self.lhat_all(xi)?;
        let mut q = vec![XPoly::constant(space.clone(), Complex64::new(1.0, 0.0))];
        for l in lhat.into_iter().skip(1) {
            q.push(match l {
                Some(j) => j.value(),
                None => XPoly::zero(space.clone(), 0),
            });
        }
        if q.iter().any(|p| {
            p.coeffs()
                .iter()
                .any(|c| !c.re.is_finite() || !c.im.is_finite())
        }) || !phi0.re.is_finite()
            || !phi0.im.is_finite()
        {
            return Err(Error::Numerical(format!("non-finite symbol at ξ = {xi:?}")));
        }
        Ok(SymbolTerms {
            xi: xi.to_vec(),
            phi0,
            q,
        })
    }

    /// `P̂_n(t, x, T, ξ)`.
    pub fn phat(&self, n: usize, x: &[f64], xi: &[Complex64]) -> Result<Complex64> {
        if n > self.order() {
            return Err(Error::InvalidParameter(format!(
                "order {n} exceeds {}",
                self.order()
            )));
        }
        Ok(self.terms(xi)?.phat(n, x))
    }
}

/// `M̂^γ f`, memoized over the lattice of lower powers.
fn mhat_power(
    powers: &mut HashMap<MultiIndex, Jet>,
    gamma: &MultiIndex,
    fvec: &[Jet],
) -> Result<Jet> {
    if let Some(j) = powers.get(gamma) {
        return Ok(j.clone());
    }
    let i = gamma
        .entries()
        .iter()
        .position(|&e| e > 0)
        .expect("zero power is seeded");
    let lower = gamma
        .checked_sub(&MultiIndex::unit(gamma.dim(), i))
        .expect("entry is positive");
    let prev = mhat_power(powers, &lower, fvec)?;
    let out = mhat_apply(i, &prev, fvec)?;
    powers.insert(gamma.clone(), out.clone());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        black_scholes, expand_taylor, heston_jump, local_vol_jump, merton, HestonJumpParams,
    };
    use crate::oracle::heston_jump_cf;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn black_scholes_phi0() {
        let sigma: f64 = 0.2;
        let em = expand_taylor(&black_scholes(sigma).unwrap(), 2, &[0.0]).unwrap();
        let ca = CharApprox::new(&em, 0.0, 0.25, SimplexSpec::default()).unwrap();
        let xi = c(0.7, -1.5);
        let expected = (-xi * xi - I * xi) * sigma * sigma * 0.25 / 2.0;
        assert!((ca.phi0(&[xi]).unwrap() - expected).norm() < 1e-14);
        let terms = ca.terms(&[xi]).unwrap();
        assert!(terms.q[1].is_zero() && terms.q[2].is_zero());
    }

    #[test]
    fn black_scholes_f_vector() {
        let sigma2 = 0.04;
        let em = expand_taylor(&black_scholes(0.2).unwrap(), 2, &[0.0]).unwrap();
        let ca = CharApprox::new(&em, 0.0, 1.0, SimplexSpec::default()).unwrap();
        let xi = c(0.3, -1.2);
        let f = ca.f_vector(&[xi], 0.6, 2).unwrap();
        let expected = (-sigma2 / 2.0 + I * sigma2 * xi) * 0.6;
        assert!((f[0].scalar_coeff(0) - expected).norm() < 1e-15);
        assert!((f[0].scalar_coeff(1) - I * sigma2 * 0.6).norm() < 1e-15);
    }

    #[test]
    fn merton_higher_orders_vanish() {
        let em = expand_taylor(&merton(0.15, 1.0, -0.05, 0.1).unwrap(), 3, &[0.0]).unwrap();
        let ca = CharApprox::new(&em, 0.0, 0.5, SimplexSpec::default()).unwrap();
        let t = ca.terms(&[c(2.0, -1.5)]).unwrap();
        assert!(t.q.iter().skip(1).all(|q| q.is_zero()));
    }

    #[test]
    fn mhat_on_one_gives_f_plus_x() {
        let em = expand_taylor(&black_scholes(0.2).unwrap(), 2, &[0.0]).unwrap();
        let ca = CharApprox::new(&em, 0.0, 1.0, SimplexSpec::default()).unwrap();
        let xi = [c(0.4, -1.5)];
        let fvec = ca.f_vector(&xi, 0.5, 2).unwrap();
        let one = Jet::one(em.space().clone(), 2, &xi);
        let r = mhat_apply(0, &one, &fvec).unwrap();
        let v = r.value();
        assert!((v.eval(&[0.3]) - (fvec[0].scalar_coeff(0) + 0.3)).norm() < 1e-15);
    }

    #[test]
    fn local_vol_ghat_matches_hand_evaluation() {
        // a₂(x) = ½(v₀ + v₁x) → a_{2,1}(x) = ½v₁x at x̄ = 0; no jumps
        let (v0, v1) = (0.04, 0.02);
        let m = local_vol_jump((v0, v1), (0.0, 0.0), 0.0, 0.1).unwrap();
        let em = expand_taylor(&m, 1, &[0.0]).unwrap();
        let ca = CharApprox::new(&em, 0.0, 1.0, SimplexSpec::default()).unwrap();
        let xi = [c(0.8, -1.5)];
        let one = Jet::one(em.space().clone(), 1, &xi);
        let g = ca.ghat_apply(1, 0.4, &one).unwrap();
        let fv = ca.f_vector(&xi, 0.4, 1).unwrap();
        let x = 0.25;
        // drift a₁ = −½σ²(x) contributes (iξ)(−½v₁)(F + x)
        let iz = I * xi[0];
        let expected = (iz * iz * 0.5 * v1 + iz * (-0.5 * v1)) * (fv[0].scalar_coeff(0) + x);
        assert!((g.value().eval(&[x]) - expected).norm() < 1e-15);
    }

    #[test]
    fn vanishes_at_zero_frequency() {
        let p = HestonJumpParams::default();
        let em = expand_taylor(&heston_jump(&p).unwrap(), 3, &[0.0, p.theta]).unwrap();
        let ca = CharApprox::new(&em, 0.0, 0.7, SimplexSpec::default()).unwrap();
        let t = ca.terms(&[c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(t.phi0.norm() < 1e-15);
        for n in 1..=3 {
            for x in [[0.0, 0.04], [0.3, 0.09]] {
                assert!(t.q[n].eval(&x).norm() < 1e-15, "order {n}");
            }
        }
    }

    #[test]
    fn second_order_tracks_exact_heston_jump() {
        let p = HestonJumpParams::default();
        let em = expand_taylor(&heston_jump(&p).unwrap(), 2, &[0.0, p.theta]).unwrap();
        let ca = CharApprox::new(&em, 0.0, 0.25, SimplexSpec::default()).unwrap();
        let xi = c(1.0, -1.5);
        let t = ca.terms(&[xi, c(0.0, 0.0)]).unwrap();
        let approx = t.sum_through(2, &[0.0, p.theta]);
        let exact = heston_jump_cf(&p, 0.0, 0.0, p.theta, 0.25, xi).unwrap();
        assert!(
            (approx - exact).norm() <= 2e-3 * exact.norm(),
            "{approx} vs {exact}"
        );
    }

    #[test]
    fn exact_fast_path_matches_full_quadrature() {
        let p = HestonJumpParams::default();
        let em = expand_taylor(&heston_jump(&p).unwrap(), 3, &[0.0, p.theta]).unwrap();
        let fast = CharApprox::new(&em, 0.0, 0.5, SimplexSpec::default()).unwrap();
        let slow = CharApprox::new(
            &em,
            0.0,
            0.5,
            SimplexSpec {
                exact_homogeneous: false,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(fast.time_nodes() < slow.time_nodes());
        let xi = [c(-3.0, -1.5), c(0.0, 0.0)];
        let (a, b) = (fast.terms(&xi).unwrap(), slow.terms(&xi).unwrap());
        assert!((a.phi0 - b.phi0).norm() < 1e-13);
        for n in 1..=3 {
            let x = [0.1, 0.06];
            let (u, v) = (a.q[n].eval(&x), b.q[n].eval(&x));
            assert!(
                (u - v).norm() < 1e-12 * (1.0 + v.norm()),
                "order {n}: {u} vs {v}"
            );
        }
    }
}
