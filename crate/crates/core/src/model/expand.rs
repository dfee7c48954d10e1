use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::field::Field;
use super::generator::ModelSpec;
use super::levy::LevyExponentFamily;
use crate::error::{Error, Result};
use crate::jets::{MonomialSpace, MultiIndex, XPoly};
use crate::quadrature::gauss_hermite_normal;

/// Time-dependent expansion point `x̄(t)`.
pub type Trajectory = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

type OrdersFn = Arc<dyn Fn(f64) -> Result<Vec<XPoly>> + Send + Sync>;

/// Where and how a model was expanded.
#[derive(Clone)]
pub enum ExpansionPoint {
    Taylor {
        point: Vec<f64>,
    },
    TimeTaylor {
        trajectory: Trajectory,
    },
    Hermite {
        center: Vec<f64>,
        variance: Vec<f64>,
        nodes: usize,
    },
}

impl fmt::Debug for ExpansionPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpansionPoint::Taylor { point } => write!(f, "Taylor at {point:?}"),
            ExpansionPoint::TimeTaylor { trajectory } => {
                write!(
                    f,
                    "time-Taylor along trajectory (x̄(0) = {:?})",
                    trajectory(0.0)
                )
            }
            ExpansionPoint::Hermite {
                center,
                variance,
                nodes,
            } => write!(
                f,
                "Hermite at {center:?}, variance {variance:?}, {nodes} nodes"
            ),
        }
    }
}

/// The orders `0..=N` of one expanded function, fixed or time-varying.
#[derive(Clone)]
enum Profile {
    Constant(Vec<XPoly>),
    Varying(OrdersFn),
}

impl Profile {
    fn at(&self, t: f64) -> Result<Vec<XPoly>> {
        match self {
            Profile::Constant(v) => Ok(v.clone()),
            Profile::Varying(f) => f(t),
        }
    }
}

/// All expanded quantities frozen at one instant.
#[derive(Clone, Debug)]
pub struct ModelSnapshot {
    pub t: f64,
    /// `(α, [a_{α,0}, …, a_{α,N}])` for every `|α| ≤ 2`.
    pub coefficients: Vec<(MultiIndex, Vec<XPoly>)>,
    /// `(m, [w_{0,m}, …, w_{N,m}])` with `w_{n,m}(x) = Σ_β c_{n,β,m} x^β`.
    pub kernel: Vec<(usize, Vec<XPoly>)>,
}

/// The families `a_{α,n}` and `ν_n = Σ_β x^β Σ_m c_{n,β,m} ν̄_m` of an
/// `N`th-order polynomial expansion.
#[derive(Clone)]
pub struct ExpandedModel {
    dim: usize,
    order: usize,
    space: Arc<MonomialSpace>,
    coefficients: Vec<(MultiIndex, Profile)>,
    kernel: Vec<(usize, Profile)>,
    families: Vec<LevyExponentFamily>,
    point: ExpansionPoint,
    homogeneous: bool,
}

impl fmt::Debug for ExpandedModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExpandedModel")
            .field("dim", &self.dim)
            .field("order", &self.order)
            .field("point", &self.point)
            .field("kernel_terms", &self.kernel.len())
            .field("time_homogeneous", &self.homogeneous)
            .finish()
    }
}

impl ExpandedModel {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Monomial space shared by every polynomial this model produces.
    pub fn space(&self) -> &Arc<MonomialSpace> {
        &self.space
    }

    pub fn families(&self) -> &[LevyExponentFamily] {
        &self.families
    }

    pub fn expansion_point(&self) -> &ExpansionPoint {
        &self.point
    }

    /// True when no expanded quantity depends on time.
    pub fn is_time_homogeneous(&self) -> bool {
        self.homogeneous
    }

    pub fn snapshot(&self, t: f64) -> Result<ModelSnapshot> {
        let coefficients = self
            .coefficients
            .iter()
            .map(|(a, p)| Ok((a.clone(), p.at(t)?)))
            .collect::<Result<_>>()?;
        let kernel = self
            .kernel
            .iter()
            .map(|(m, p)| Ok((*m, p.at(t)?)))
            .collect::<Result<_>>()?;
        Ok(ModelSnapshot {
            t,
            coefficients,
            kernel,
        })
    }

    /// `a_{α,n}(t, ·)`.
    pub fn coefficient(&self, n: usize, alpha: &MultiIndex, t: f64) -> Result<XPoly> {
        self.check_order(n)?;
        let (_, p) = self
            .coefficients
            .iter()
            .find(|(a, _)| a == alpha)
            .ok_or_else(|| Error::Structure(format!("no generator coefficient {alpha:?}")))?;
        Ok(p.at(t)?.swap_remove(n))
    }

    /// `Σ_β c_{n,β,m}(t) x^β` for kernel term `m`.
    pub fn kernel_weight(&self, n: usize, m: usize, t: f64) -> Result<XPoly> {
        self.check_order(n)?;
        let (_, p) = self
            .kernel
            .get(m)
            .ok_or_else(|| Error::Structure(format!("no kernel term {m}")))?;
        Ok(p.at(t)?.swap_remove(n))
    }

    /// `(β, c_{n,β,m}(t), m)` triples of `ν_n`.
    pub fn kernel_terms(&self, n: usize, t: f64) -> Result<Vec<(MultiIndex, f64, usize)>> {
        let mut out = Vec::new();
        for m in 0..self.kernel.len() {
            let w = self.kernel_weight(n, m, t)?;
            out.extend(w.terms().map(|(b, c)| (b.clone(), c.re, self.kernel[m].0)));
        }
        Ok(out)
    }

    fn check_order(&self, n: usize) -> Result<()> {
        if n > self.order {
            return Err(Error::InvalidParameter(format!(
                "order {n} exceeds expansion order {}",
                self.order
            )));
        }
        Ok(())
    }
}

/// Expansion about a fixed point `x̄`.
pub fn expand_taylor(model: &ModelSpec, order: usize, point: &[f64]) -> Result<ExpandedModel> {
    check_point(model, point)?;
    let p = point.to_vec();
    build(
        model,
        order,
        ExpansionPoint::Taylor { point: p.clone() },
        true,
        move |f, t, space| taylor_orders(f, t, &p, order, space),
    )
}

/// Expansion about a moving point `x̄(t)`.
pub fn expand_time_taylor(
    model: &ModelSpec,
    order: usize,
    trajectory: Trajectory,
) -> Result<ExpandedModel> {
    check_point(model, &trajectory(0.0))?;
    let tr = trajectory.clone();
    build(
        model,
        order,
        ExpansionPoint::TimeTaylor { trajectory },
        false,
        move |f, t, space| taylor_orders(f, t, &tr(t), order, space),
    )
}

/// Projection onto Hermite polynomials orthonormal for the Gaussian weight
/// `N(x̄, diag(variance))`, using `nodes` Gauss–Hermite points per axis.
pub fn expand_hermite(
    model: &ModelSpec,
    order: usize,
    center: &[f64],
    variance: &[f64],
    nodes: usize,
) -> Result<ExpandedModel> {
    check_point(model, center)?;
    if variance.len() != center.len() {
        return Err(Error::Dimension {
            expected: center.len(),
            got: variance.len(),
        });
    }
    if variance.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidParameter(
            "Hermite weight variance must be positive".into(),
        ));
    }
    if nodes < order + 1 {
        return Err(Error::Quadrature(format!(
            "{nodes} Gauss–Hermite nodes cannot integrate degree-{} products exactly (need ≥ {})",
            2 * order,
            order + 1
        )));
    }
    let c = center.to_vec();
    let sd: Vec<f64> = variance.iter().map(|v| v.sqrt()).collect();
    let point = ExpansionPoint::Hermite {
        center: c.clone(),
        variance: variance.to_vec(),
        nodes,
    };
    build(model, order, point, true, move |f, t, space| {
        hermite_orders(f, t, &c, &sd, nodes, order, space)
    })
}

fn check_point(model: &ModelSpec, point: &[f64]) -> Result<()> {
    if point.len() != model.dim() {
        return Err(Error::Dimension {
            expected: model.dim(),
            got: point.len(),
        });
    }
    Ok(())
}

fn build<E>(
    model: &ModelSpec,
    order: usize,
    point: ExpansionPoint,
    fixed_point: bool,
    expand: E,
) -> Result<ExpandedModel>
where
    E: Fn(&Field, f64, &Arc<MonomialSpace>) -> Result<Vec<XPoly>> + Send + Sync + 'static,
{
    let dim = model.dim();
    let space = MonomialSpace::shared(dim, order.max(1));
    let expand = Arc::new(expand);
    let profile = |f: &Field| -> Result<Profile> {
        // evaluating at t = 0 surfaces missing derivatives eagerly
        let at0 = expand(f, 0.0, &space)?;
        if fixed_point && f.is_time_homogeneous() {
            Ok(Profile::Constant(at0))
        } else {
            let (f, e, s) = (f.clone(), expand.clone(), space.clone());
            Ok(Profile::Varying(Arc::new(move |t| e(&f, t, &s))))
        }
    };
    let coefficients = model
        .coefficients()
        .map(|(a, f)| Ok((a.clone(), profile(f)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut families = Vec::new();
    let mut kernel = Vec::new();
    for (m, k) in model.kernel().iter().enumerate() {
        families.push(k.family.clone());
        kernel.push((m, profile(&k.weight)?));
    }
    let homogeneous = model.is_time_homogeneous() && fixed_point;
    Ok(ExpandedModel {
        dim,
        order,
        space,
        coefficients,
        kernel,
        families,
        point,
        homogeneous,
    })
}

fn re(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// `Π_i (x_i − p_i)^{β_i}` re-expanded in monomials.
fn shifted_monomial(space: &Arc<MonomialSpace>, beta: &MultiIndex, p: &[f64]) -> Result<XPoly> {
    let mut out = XPoly::constant(space.clone(), re(1.0));
    for (i, &e) in beta.entries().iter().enumerate() {
        if e > 0 {
            out = out.mul(&univariate_shifted(space, i, p[i], &binomial_row(e))?)?;
        }
    }
    Ok(out)
}

/// `Σ_j coeffs[j] (x_i − p)^j`, with `coeffs[j]` already holding the weights
/// for powers of `(x_i − p)`.
fn univariate_shifted(
    space: &Arc<MonomialSpace>,
    i: usize,
    p: f64,
    coeffs: &[f64],
) -> Result<XPoly> {
    // expand (x − p)^j = Σ_k C(j,k) x^k (−p)^{j−k}
    let d = space.dim();
    let mut terms = Vec::new();
    for (j, &c) in coeffs.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let row = binomial_coefficients(j);
        for (k, b) in row.iter().enumerate() {
            let mut mono = vec![0; d];
            mono[i] = k as u32;
            terms.push((MultiIndex::new(mono), re(c * b * (-p).powi((j - k) as i32))));
        }
    }
    XPoly::from_terms(space.clone(), terms)
}

/// Coefficient vector selecting `(x − p)^e` alone.
fn binomial_row(e: u32) -> Vec<f64> {
    let mut v = vec![0.0; e as usize + 1];
    v[e as usize] = 1.0;
    v
}

fn binomial_coefficients(n: usize) -> Vec<f64> {
    let mut row = vec![1.0; n + 1];
    for k in 1..n {
        row[k] = row[k - 1] * (n - k + 1) as f64 / k as f64;
    }
    row
}

fn taylor_orders(
    f: &Field,
    t: f64,
    p: &[f64],
    order: usize,
    space: &Arc<MonomialSpace>,
) -> Result<Vec<XPoly>> {
    let d = space.dim();
    (0..=order)
        .map(|n| {
            let mut acc = XPoly::zero(space.clone(), n);
            for beta in MultiIndex::all_of_degree(d, n as u32) {
                let dv = f.derivative(t, p, &beta).ok_or_else(|| {
                    Error::MissingDerivative(format!("D^{beta:?} at {p:?} (t = {t})"))
                })?;
                if dv != 0.0 {
                    acc = acc.add(
                        &shifted_monomial(space, &beta, p)?.scale(re(dv / beta.factorial())),
                    )?;
                }
            }
            Ok(acc)
        })
        .collect()
}

/// Coefficients of the probabilists' Hermite polynomial `He_k(y)`, lowest first.
pub fn hermite_he(k: usize) -> Vec<f64> {
    let mut prev = vec![1.0];
    if k == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 1.0];
    for n in 1..k {
        // He_{n+1} = y He_n − n He_{n−1}
        let mut next = vec![0.0; n + 2];
        for (j, c) in cur.iter().enumerate() {
            next[j + 1] += c;
        }
        for (j, c) in prev.iter().enumerate() {
            next[j] -= n as f64 * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Orthonormal Hermite polynomial `H_β(x − x̄)` for the weight
/// `N(x̄, diag(sd²))`, as a monomial polynomial in `x`.
pub fn hermite_basis(
    space: &Arc<MonomialSpace>,
    beta: &MultiIndex,
    center: &[f64],
    sd: &[f64],
) -> Result<XPoly> {
    let mut out = XPoly::constant(space.clone(), re(1.0));
    for (i, &e) in beta.entries().iter().enumerate() {
        if e == 0 {
            continue;
        }
        let fact = MultiIndex::new(vec![e]).factorial().sqrt();
        let coeffs: Vec<f64> = hermite_he(e as usize)
            .iter()
            .enumerate()
            .map(|(j, c)| c / sd[i].powi(j as i32) / fact)
            .collect();
        out = out.mul(&univariate_shifted(space, i, center[i], &coeffs)?)?;
    }
    Ok(out)
}

/// Tensor Gauss–Hermite nodes for `N(center, diag(sd²))`.
fn tensor_nodes(center: &[f64], sd: &[f64], nodes: usize) -> Result<Vec<(Vec<f64>, f64)>> {
    let rule = gauss_hermite_normal(nodes)?;
    let d = center.len();
    let mut out = vec![(Vec::with_capacity(d), 1.0)];
    for i in 0..d {
        let mut next = Vec::with_capacity(out.len() * rule.len());
        for (x, w) in &out {
            for (y, v) in rule.nodes.iter().zip(&rule.weights) {
                let mut x2 = x.clone();
                x2.push(center[i] + sd[i] * y);
                next.push((x2, w * v));
            }
        }
        out = next;
    }
    Ok(out)
}

fn hermite_orders(
    f: &Field,
    t: f64,
    center: &[f64],
    sd: &[f64],
    nodes: usize,
    order: usize,
    space: &Arc<MonomialSpace>,
) -> Result<Vec<XPoly>> {
    let grid = tensor_nodes(center, sd, nodes)?;
    let values: Vec<f64> = grid.iter().map(|(x, _)| f.value(t, x)).collect();
    let d = space.dim();
    (0..=order)
        .map(|n| {
            let mut acc = XPoly::zero(space.clone(), n);
            for beta in MultiIndex::all_of_degree(d, n as u32) {
                let h = hermite_basis(space, &beta, center, sd)?;
                let proj: f64 = grid
                    .iter()
                    .zip(&values)
                    .map(|((x, w), v)| w * v * h.eval(x).re)
                    .sum();
                if proj != 0.0 {
                    acc = acc.add(&h.scale(re(proj)))?;
                }
            }
            Ok(acc)
        })
        .collect()
}

/// `⟨H_a, H_b⟩_Γ` over all `|a|, |b| ≤ max_degree`, by tensor Gauss–Hermite
/// quadrature with `nodes` points per axis.
pub fn hermite_gram(
    dim: usize,
    max_degree: usize,
    center: &[f64],
    variance: &[f64],
    nodes: usize,
) -> Result<Vec<Vec<f64>>> {
    let space = MonomialSpace::shared(dim, (2 * max_degree).max(1));
    let sd: Vec<f64> = variance.iter().map(|v| v.sqrt()).collect();
    let grid = tensor_nodes(center, &sd, nodes)?;
    let basis = MultiIndex::all_up_to(dim, max_degree as u32)
        .iter()
        .map(|b| hermite_basis(&space, b, center, &sd))
        .collect::<Result<Vec<_>>>()?;
    let vals: Vec<Vec<f64>> = basis
        .iter()
        .map(|h| grid.iter().map(|(x, _)| h.eval(x).re).collect())
        .collect();
    Ok(vals
        .iter()
        .map(|a| {
            vals.iter()
                .map(|b| {
                    grid.iter()
                        .zip(a.iter().zip(b))
                        .map(|((_, w), (u, v))| w * u * v)
                        .sum()
                })
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::generator::KernelTerm;
    use crate::model::levy::gaussian_levy_family;

    fn single_coefficient_model(f: Field) -> ModelSpec {
        let d = f.dim();
        ModelSpec::new(
            d,
            vec![(MultiIndex::unit(d, 0).add(&MultiIndex::unit(d, 0)), f)],
            vec![],
        )
        .unwrap()
    }

    fn a2(em: &ExpandedModel, n: usize, t: f64) -> XPoly {
        em.coefficient(n, &MultiIndex::from([2]), t).unwrap()
    }

    #[test]
    fn taylor_of_square_at_origin() {
        let m = single_coefficient_model(Field::polynomial(1, vec![(MultiIndex::from([2]), 1.0)]));
        let em = expand_taylor(&m, 2, &[0.0]).unwrap();
        assert!(a2(&em, 0, 0.0).is_zero());
        assert!(a2(&em, 1, 0.0).is_zero());
        assert_eq!(a2(&em, 2, 0.0).coeff(&MultiIndex::from([2])), re(1.0));
    }

    #[test]
    fn taylor_reconstructs_polynomials_away_from_origin() {
        let f = Field::polynomial(
            2,
            vec![
                (MultiIndex::from([0, 0]), 0.3),
                (MultiIndex::from([1, 1]), -1.2),
                (MultiIndex::from([0, 2]), 0.7),
                (MultiIndex::from([1, 0]), 2.0),
            ],
        );
        let m = ModelSpec::new(2, vec![(MultiIndex::from([2, 0]), f.clone())], vec![]).unwrap();
        let em = expand_taylor(&m, 2, &[0.4, -0.9]).unwrap();
        for x in [[0.0, 0.0], [1.3, -0.2], [-2.0, 0.5]] {
            let s: Complex64 = (0..=2)
                .map(|n| {
                    em.coefficient(n, &MultiIndex::from([2, 0]), 0.0)
                        .unwrap()
                        .eval(&x)
                })
                .sum();
            assert!((s.re - f.value(0.0, &x)).abs() < 1e-13);
        }
    }

    #[test]
    fn time_taylor_follows_trajectory() {
        // a(t, x) = x, x̄(t) = t
        let m = single_coefficient_model(Field::polynomial(1, vec![(MultiIndex::from([1]), 1.0)]));
        let em = expand_time_taylor(&m, 1, Arc::new(|t| vec![t])).unwrap();
        let t = 0.37;
        assert!((a2(&em, 0, t).eval(&[5.0]).re - t).abs() < 1e-15);
        assert!((a2(&em, 1, t).eval(&[5.0]).re - (5.0 - t)).abs() < 1e-15);
        assert!(!em.is_time_homogeneous());
    }

    #[test]
    fn missing_derivative_is_reported() {
        let m = single_coefficient_model(Field::value_only(1, true, |_, x| x[0].abs()));
        assert!(matches!(
            expand_taylor(&m, 1, &[0.5]),
            Err(Error::MissingDerivative(_))
        ));
        assert!(expand_hermite(&m, 2, &[0.0], &[1.0], 8).is_ok());
    }

    #[test]
    fn hermite_reproduces_square() {
        let m = single_coefficient_model(Field::polynomial(1, vec![(MultiIndex::from([2]), 1.0)]));
        let em = expand_hermite(&m, 2, &[0.0], &[1.0], 8).unwrap();
        for x in [-1.5, 0.0, 0.8, 3.0] {
            let s: f64 = (0..=2).map(|n| a2(&em, n, 0.0).eval(&[x]).re).sum();
            assert!((s - x * x).abs() < 1e-12);
        }
    }

    #[test]
    fn hermite_of_abs_has_no_linear_term() {
        let m = single_coefficient_model(Field::value_only(1, true, |_, x| x[0].abs()));
        let em = expand_hermite(&m, 2, &[0.0], &[1.0], 40).unwrap();
        assert!(a2(&em, 1, 0.0).coeffs().iter().all(|c| c.norm() < 1e-14));
    }

    #[test]
    fn hermite_node_count_is_checked() {
        let m = single_coefficient_model(Field::constant(1, 1.0));
        assert!(matches!(
            expand_hermite(&m, 3, &[0.0], &[1.0], 3),
            Err(Error::Quadrature(_))
        ));
    }

    #[test]
    fn hermite_gram_is_identity() {
        let g = hermite_gram(2, 4, &[0.3, -0.1], &[0.5, 2.0], 12).unwrap();
        for (i, row) in g.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((v - e).abs() < 1e-10, "({i},{j}) = {v}");
            }
        }
    }

    #[test]
    fn linear_kernel_factor_is_split_exactly() {
        let fam = gaussian_levy_family(2, 0, 2.0, -0.1, 0.2).unwrap();
        let g = Field::polynomial(2, vec![(MultiIndex::from([0, 1]), 1.0)]);
        let m = ModelSpec::new(2, vec![], vec![KernelTerm::new(g, fam)]).unwrap();
        let zbar = 0.04;
        let em = expand_taylor(&m, 3, &[0.0, zbar]).unwrap();
        let w0 = em.kernel_weight(0, 0, 0.0).unwrap();
        let w1 = em.kernel_weight(1, 0, 0.0).unwrap();
        assert_eq!(w0.effective_degree(), 0);
        assert!((w0.eval(&[0.0, 0.0]).re - zbar).abs() < 1e-16);
        assert!((w1.eval(&[0.2, 0.1]).re - (0.1 - zbar)).abs() < 1e-16);
        assert!(em.kernel_weight(2, 0, 0.0).unwrap().is_zero());
        assert!(em.kernel_weight(3, 0, 0.0).unwrap().is_zero());
    }
}
