use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jets::MultiIndex;
use crate::model::{ExpandedModel, ModelSnapshot};
use crate::quadrature::gauss_legendre;

/// Quadrature settings for the time integrals of the symbol engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexSpec {
    /// Gauss–Legendre nodes per simplex axis.
    pub nodes: usize,
    /// Nodes for `∫ a_{α,0}` and `∫ ψ₀` when coefficients vary in time.
    pub phi0_nodes: usize,
    /// Use the exact low-node rule when the expanded model is time homogeneous.
    pub exact_homogeneous: bool,
}

impl Default for SimplexSpec {
    fn default() -> Self {
        SimplexSpec {
            nodes: 12,
            phi0_nodes: 32,
            exact_homogeneous: true,
        }
    }
}

/// `∫_t^s w_{0,m}(r) ψ̄_m(r, ξ) dr`, either a plain factor (time-homogeneous
/// family) or a weighted list of times at which `ψ̄_m` must be evaluated.
#[derive(Debug, Clone)]
pub(crate) enum JumpIntegral {
    Factor(f64),
    Nodes(Vec<(f64, f64)>),
}

/// `Σ_α coeff·(iξ)^α + Σ_m coeff·ψ̄_m(s, ξ)` multiplying `M̂^γ` in `Ĝ_j`.
#[derive(Debug, Clone)]
pub(crate) struct GTerm {
    pub gamma: MultiIndex,
    pub alpha: Vec<(usize, Complex64)>,
    pub kernel: Vec<(usize, Complex64)>,
}

/// Everything about one time `s` the engine needs, independent of `ξ`.
#[derive(Debug, Clone)]
pub(crate) struct NodeData {
    pub s: f64,
    /// `∫_t^s a_{α,0}` in the order of [`TimePlan::alphas`].
    pub a_int: Vec<Complex64>,
    /// Per kernel term.
    pub jump_int: Vec<JumpIntegral>,
    /// `g[j-1]` lists the terms of `Ĝ_j(t, s)`.
    pub g: Vec<Vec<GTerm>>,
}

#[derive(Debug, Clone)]
pub(crate) struct TimeNode {
    pub weight: f64,
    pub children: Vec<usize>,
    pub data: NodeData,
}

/// ξ-independent precomputation for one `(t, T)` pair: a tree of simplex
/// quadrature nodes `t ≤ t₁ ≤ … ≤ t_k ≤ T` with model data at each node.
#[derive(Debug, Clone)]
pub(crate) struct TimePlan {
    pub t: f64,
    pub horizon: f64,
    pub order: usize,
    pub alphas: Vec<MultiIndex>,
    pub nodes: Vec<TimeNode>,
    /// Children of the root `t`.
    pub roots: Vec<usize>,
    pub terminal: NodeData,
}

impl TimePlan {
    pub fn build(em: &ExpandedModel, t: f64, horizon: f64, spec: &SimplexSpec) -> Result<Self> {
        if !(horizon >= t) || !t.is_finite() || !horizon.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "need finite t ≤ T (got t = {t}, T = {horizon})"
            )));
        }
        let order = em.order();
        let homogeneous = em.is_time_homogeneous() && spec.exact_homogeneous;
        let per_axis = if homogeneous { order + 1 } else { spec.nodes };
        if per_axis == 0 || spec.phi0_nodes == 0 {
            return Err(Error::Quadrature("node counts must be positive".into()));
        }
        let alphas = MultiIndex::all_up_to(em.dim(), 2);
        let mut b = Builder::new(em, t, horizon, spec, per_axis);
        let roots = if order >= 1 && horizon > t {
            b.level(t, 1)?
        } else {
            Vec::new()
        };
        let terminal = b.node_data(horizon)?;
        Ok(TimePlan {
            t,
            horizon,
            order,
            alphas,
            nodes: b.nodes,
            roots,
            terminal,
        })
    }

    /// Model data at a single time `s ∈ [t, T]`.
    pub fn probe(em: &ExpandedModel, t: f64, s: f64, spec: &SimplexSpec) -> Result<NodeData> {
        Builder::new(em, t, s, spec, 1).node_data(s)
    }
}

struct Builder<'a> {
    em: &'a ExpandedModel,
    t: f64,
    horizon: f64,
    order: usize,
    alphas: Vec<MultiIndex>,
    homogeneous: bool,
    phi0_nodes: usize,
    per_axis: usize,
    nodes: Vec<TimeNode>,
    // snapshot reused at every node of a time-homogeneous model
    base: Option<ModelSnapshot>,
}

impl<'a> Builder<'a> {
    fn new(
        em: &'a ExpandedModel,
        t: f64,
        horizon: f64,
        spec: &SimplexSpec,
        per_axis: usize,
    ) -> Self {
        Builder {
            em,
            t,
            horizon,
            order: em.order(),
            alphas: MultiIndex::all_up_to(em.dim(), 2),
            homogeneous: em.is_time_homogeneous() && spec.exact_homogeneous,
            phi0_nodes: spec.phi0_nodes,
            per_axis,
            nodes: Vec::new(),
            base: None,
        }
    }

    fn level(&mut self, from: f64, depth: usize) -> Result<Vec<usize>> {
        let rule = gauss_legendre(self.per_axis)?;
        let mut ids = Vec::with_capacity(rule.len());
        for (s, w) in rule.mapped(from, self.horizon) {
            let data = self.node_data(s)?;
            let id = self.nodes.len();
            self.nodes.push(TimeNode {
                weight: w,
                children: Vec::new(),
                data,
            });
            if depth < self.order {
                let children = self.level(s, depth + 1)?;
                self.nodes[id].children = children;
            }
            ids.push(id);
        }
        Ok(ids)
    }

    fn snapshot(&mut self, s: f64) -> Result<ModelSnapshot> {
        if self.homogeneous {
            if self.base.is_none() {
                self.base = Some(self.em.snapshot(self.t)?);
            }
            return Ok(self.base.clone().expect("cached above"));
        }
        self.em.snapshot(s)
    }

    fn node_data(&mut self, s: f64) -> Result<NodeData> {
        let snap = self.snapshot(s)?;
        let (a_int, jump_int) = self.integrals(s)?;
        let g = (1..=self.order).map(|j| self.g_terms(&snap, j)).collect();
        Ok(NodeData {
            s,
            a_int,
            jump_int,
            g,
        })
    }

    /// `∫_t^s a_{α,0}` and the jump integrals of `ψ₀`.
    fn integrals(&mut self, s: f64) -> Result<(Vec<Complex64>, Vec<JumpIntegral>)> {
        let len = s - self.t;
        let families = self.em.families().to_vec();
        if self.homogeneous || len == 0.0 {
            let snap = self.snapshot(self.t)?;
            let a = self
                .alphas
                .iter()
                .map(|al| leading(&snap, al) * len)
                .collect();
            let j = snap
                .kernel
                .iter()
                .map(|(_, w)| JumpIntegral::Factor(w[0].coeffs()[0].re * len))
                .collect();
            return Ok((a, j));
        }
        let rule = gauss_legendre(self.phi0_nodes)?;
        let mut a = vec![Complex64::new(0.0, 0.0); self.alphas.len()];
        let mut jump: Vec<Vec<(f64, f64)>> = vec![Vec::new(); families.len()];
        for (r, w) in rule.mapped(self.t, s) {
            let snap = self.em.snapshot(r)?;
            for (acc, al) in a.iter_mut().zip(&self.alphas) {
                *acc += leading(&snap, al) * w;
            }
            for (m, (_, wt)) in snap.kernel.iter().enumerate() {
                jump[m].push((r, w * wt[0].coeffs()[0].re));
            }
        }
        let jump_int = jump
            .into_iter()
            .enumerate()
            .map(|(m, pts)| {
                if families[m].is_time_homogeneous() {
                    JumpIntegral::Factor(pts.iter().map(|p| p.1).sum())
                } else {
                    JumpIntegral::Nodes(pts)
                }
            })
            .collect();
        Ok((a, jump_int))
    }

    fn g_terms(&self, snap: &ModelSnapshot, j: usize) -> Vec<GTerm> {
        let mut map: BTreeMap<MultiIndex, GTerm> = BTreeMap::new();
        for (ai, (alpha, orders)) in snap.coefficients.iter().enumerate() {
            debug_assert_eq!(alpha, &self.alphas[ai]);
            for (gamma, c) in orders[j].terms() {
                g_entry(&mut map, gamma).alpha.push((ai, c));
            }
        }
        for (m, orders) in &snap.kernel {
            for (gamma, c) in orders[j].terms() {
                g_entry(&mut map, gamma).kernel.push((*m, c));
            }
        }
        map.into_values().collect()
    }
}

fn g_entry<'m>(map: &'m mut BTreeMap<MultiIndex, GTerm>, gamma: &MultiIndex) -> &'m mut GTerm {
    map.entry(gamma.clone()).or_insert_with(|| GTerm {
        gamma: gamma.clone(),
        alpha: Vec::new(),
        kernel: Vec::new(),
    })
}

fn leading(snap: &ModelSnapshot, alpha: &MultiIndex) -> Complex64 {
    snap.coefficients
        .iter()
        .find(|(a, _)| a == alpha)
        .map_or(Complex64::new(0.0, 0.0), |(_, o)| o[0].coeffs()[0])
}
