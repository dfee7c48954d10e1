use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;

use super::{MonomialSpace, MultiIndex, XPoly};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Truncated multivariate Taylor expansion in `ξ` about a complex base point
/// `ξ*`, with coefficients that are polynomials in `x`:
///
/// ```text
/// f(ξ) ≈ Σ_{|β| ≤ K} c_β(x) (ξ − ξ*)^β
/// ```
///
/// Storage is flat: coefficient `β` (by graded-lex position) occupies the
/// block `[β·n_x, (β+1)·n_x)` where `n_x` counts monomials in `x` up to the
/// jet's x-degree bound. The same [`MonomialSpace`] indexes both variables.
#[derive(Clone, Debug)]
pub struct Jet {
    space: Arc<MonomialSpace>,
    order: usize,
    xdeg: usize,
    base: Vec<Complex64>,
    data: Vec<Complex64>,
}

impl Jet {
    pub fn zero(space: Arc<MonomialSpace>, order: usize, base: &[Complex64]) -> Self {
        Self::zero_with_xdeg(space, order, 0, base)
    }

    fn zero_with_xdeg(
        space: Arc<MonomialSpace>,
        order: usize,
        xdeg: usize,
        base: &[Complex64],
    ) -> Self {
        assert!(order <= space.max_degree() && xdeg <= space.max_degree());
        assert_eq!(base.len(), space.dim());
        let n = space.count(order) * space.count(xdeg);
        Jet {
            space,
            order,
            xdeg,
            base: base.to_vec(),
            data: vec![ZERO; n],
        }
    }

    pub fn constant(
        space: Arc<MonomialSpace>,
        order: usize,
        base: &[Complex64],
        c: Complex64,
    ) -> Self {
        let mut j = Self::zero(space, order, base);
        j.data[0] = c;
        j
    }

    /// The multiplicative identity.
    pub fn one(space: Arc<MonomialSpace>, order: usize, base: &[Complex64]) -> Self {
        Self::constant(space, order, base, Complex64::new(1.0, 0.0))
    }

    /// The coordinate function `ξ_i`.
    pub fn variable(space: Arc<MonomialSpace>, order: usize, base: &[Complex64], i: usize) -> Self {
        let mut j = Self::constant(space, order, base, base[i]);
        if order >= 1 {
            let d = j.space.dim();
            let idx = j
                .space
                .index_of(&MultiIndex::unit(d, i))
                .expect("unit index");
            j.data[idx] = Complex64::new(1.0, 0.0);
        }
        j
    }

    /// Jet whose `β`-coefficient is `partials[β]/β!`, with `partials` listed in
    /// graded-lex order for every `|β| ≤ order`.
    pub fn from_partials_slice(
        space: Arc<MonomialSpace>,
        order: usize,
        base: &[Complex64],
        partials: &[Complex64],
    ) -> Result<Self> {
        let n = space.count(order);
        if partials.len() < n {
            return Err(Error::Structure(format!(
                "expected {n} partial derivatives, got {}",
                partials.len()
            )));
        }
        let mut j = Self::zero(space, order, base);
        for (b, p) in partials.iter().take(n).enumerate() {
            j.data[b] = p / j.space.term(b).factorial();
        }
        Ok(j)
    }

    /// A constant-in-`x` jet from scalar Taylor coefficients `c_β` (not partials).
    pub fn from_taylor_coeffs(
        space: Arc<MonomialSpace>,
        order: usize,
        base: &[Complex64],
        coeffs: &[Complex64],
    ) -> Self {
        let mut j = Self::zero(space, order, base);
        let n = j.data.len().min(coeffs.len());
        j.data[..n].copy_from_slice(&coeffs[..n]);
        j
    }

    /// Every `x`-coefficient is the same XPoly: `p(x) · 1`.
    pub fn from_xpoly(order: usize, base: &[Complex64], p: &XPoly) -> Self {
        let mut j = Self::zero_with_xdeg(p.space().clone(), order, p.degree_bound(), base);
        let nx = j.nx();
        j.data[..nx].copy_from_slice(p.coeffs());
        j
    }

    pub fn space(&self) -> &Arc<MonomialSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn xdeg(&self) -> usize {
        self.xdeg
    }

    pub fn base(&self) -> &[Complex64] {
        &self.base
    }

    #[inline]
    fn nx(&self) -> usize {
        self.space.count(self.xdeg)
    }

    #[inline]
    fn nb(&self) -> usize {
        self.space.count(self.order)
    }

    /// `c_β` as a polynomial in `x`.
    pub fn coeff(&self, beta: &MultiIndex) -> XPoly {
        let nx = self.nx();
        match self.space.index_of(beta) {
            Some(b) if b < self.nb() => XPoly::from_raw(
                self.space.clone(),
                self.xdeg,
                self.data[b * nx..(b + 1) * nx].to_vec(),
            ),
            _ => XPoly::zero(self.space.clone(), 0),
        }
    }

    /// `c_0`, the value at `ξ*`.
    pub fn value(&self) -> XPoly {
        XPoly::from_raw(
            self.space.clone(),
            self.xdeg,
            self.data[..self.nx()].to_vec(),
        )
    }

    /// Scalar `c_β` for a jet that is constant in `x`.
    pub fn scalar_coeff(&self, b: usize) -> Complex64 {
        self.data[b * self.nx()]
    }

    /// Evaluates the truncated polynomial in `ξ` at a point.
    pub fn eval(&self, xi: &[Complex64]) -> XPoly {
        let nx = self.nx();
        let h: Vec<Complex64> = xi.iter().zip(&self.base).map(|(a, b)| a - b).collect();
        let mut out = vec![ZERO; nx];
        for b in 0..self.nb() {
            let beta = self.space.term(b);
            let w: Complex64 = beta
                .entries()
                .iter()
                .zip(&h)
                .map(|(&e, hi)| hi.powu(e))
                .product();
            for (o, c) in out.iter_mut().zip(&self.data[b * nx..(b + 1) * nx]) {
                *o += c * w;
            }
        }
        XPoly::from_raw(self.space.clone(), self.xdeg, out)
    }

    fn check(&self, other: &Jet) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        if self.base != other.base {
            return Err(Error::Structure("jets have different base points".into()));
        }
        if !Arc::ptr_eq(&self.space, &other.space) {
            return Err(Error::Structure(
                "jets live in different monomial spaces".into(),
            ));
        }
        Ok(())
    }

    /// Re-lays the coefficients with a larger x-degree bound.
    fn widened(&self, xdeg: usize) -> Jet {
        if xdeg == self.xdeg {
            return self.clone();
        }
        let mut out = Jet::zero_with_xdeg(self.space.clone(), self.order, xdeg, &self.base);
        let (nx_old, nx_new) = (self.nx(), out.nx());
        for b in 0..self.nb() {
            out.data[b * nx_new..b * nx_new + nx_old]
                .copy_from_slice(&self.data[b * nx_old..(b + 1) * nx_old]);
        }
        out
    }

    pub fn truncate(&self, order: usize) -> Jet {
        if order >= self.order {
            return self.clone();
        }
        let n = self.space.count(order) * self.nx();
        Jet {
            space: self.space.clone(),
            order,
            xdeg: self.xdeg,
            base: self.base.clone(),
            data: self.data[..n].to_vec(),
        }
    }

    /// Sum, truncated at the smaller order; x-degree bound is the larger one.
    pub fn add(&self, other: &Jet) -> Result<Jet> {
        self.check(other)?;
        let order = self.order.min(other.order);
        let xdeg = self.xdeg.max(other.xdeg);
        let mut out = self.truncate(order).widened(xdeg);
        let nx_out = out.nx();
        let nx_o = other.nx();
        for b in 0..out.nb() {
            for (o, c) in out.data[b * nx_out..b * nx_out + nx_o]
                .iter_mut()
                .zip(&other.data[b * nx_o..(b + 1) * nx_o])
            {
                *o += c;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> Jet {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|c| *c *= s);
        out
    }

    pub fn sub(&self, other: &Jet) -> Result<Jet> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Truncated Cauchy product. The order is the smaller of the two orders
    /// and the x-degree bound is the sum of the operands' bounds.
    pub fn mul(&self, other: &Jet) -> Result<Jet> {
        self.check(other)?;
        let order = self.order.min(other.order);
        let xdeg = self.xdeg + other.xdeg;
        if xdeg > self.space.max_degree() {
            return Err(Error::Structure(format!(
                "x-degree {xdeg} exceeds monomial space bound {}",
                self.space.max_degree()
            )));
        }
        let mut out = Jet::zero_with_xdeg(self.space.clone(), order, xdeg, &self.base);
        let nb = out.nb();
        let (na_x, nb_x, no_x) = (self.nx(), other.nx(), out.nx());
        let space = &*self.space;
        for i in 0..nb {
            let a_blk = &self.data[i * na_x..(i + 1) * na_x];
            if a_blk.iter().all(|c| *c == ZERO) {
                continue;
            }
            for j in 0..nb {
                let k = match space.product_index(i, j) {
                    Some(k) if k < nb => k,
                    _ => continue,
                };
                let b_blk = &other.data[j * nb_x..(j + 1) * nb_x];
                let o_blk = &mut out.data[k * no_x..(k + 1) * no_x];
                for (p, a) in a_blk.iter().enumerate() {
                    if *a == ZERO {
                        continue;
                    }
                    for (q, b) in b_blk.iter().enumerate() {
                        if *b == ZERO {
                            continue;
                        }
                        let r = space.product_index(p, q).expect("x-degree checked");
                        o_blk[r] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Multiplies every coefficient by a polynomial in `x`.
    pub fn mul_xpoly(&self, p: &XPoly) -> Result<Jet> {
        let lifted = Jet::from_xpoly(self.order, &self.base, p);
        if !Arc::ptr_eq(&self.space, p.space()) {
            return Err(Error::Structure(
                "polynomial lives in a different monomial space".into(),
            ));
        }
        self.mul(&lifted)
    }

    /// `∂_{ξ_i}`: shifts coefficients down one order with factorial weights.
    pub fn diff(&self, i: usize) -> Result<Jet> {
        if self.order == 0 {
            return Err(Error::OrderUnderflow);
        }
        if i >= self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: i + 1,
            });
        }
        let order = self.order - 1;
        let mut out = Jet::zero_with_xdeg(self.space.clone(), order, self.xdeg, &self.base);
        let nx = self.nx();
        for b in 0..out.nb() {
            let up = self
                .space
                .raised_index(i, b)
                .expect("raised index within order");
            let w = f64::from(self.space.term(b).get(i) + 1);
            for (o, c) in out.data[b * nx..(b + 1) * nx]
                .iter_mut()
                .zip(&self.data[up * nx..(up + 1) * nx])
            {
                *o = c * w;
            }
        }
        Ok(out)
    }

    /// Coefficientwise comparison; missing entries count as zero.
    pub fn max_abs_diff(&self, other: &Jet) -> f64 {
        let order = self.order.max(other.order);
        let mut worst = 0.0f64;
        for b in 0..self.space.count(order) {
            let beta = self.space.term(b);
            let pa = self.coeff(beta);
            let pb = other.coeff(beta);
            let n = pa.coeffs().len().max(pb.coeffs().len());
            for k in 0..n {
                let a = pa.coeffs().get(k).copied().unwrap_or_default();
                let c = pb.coeffs().get(k).copied().unwrap_or_default();
                worst = worst.max((a - c).norm());
            }
        }
        worst
    }
}

/// Truncated product of two jets sharing dimension and base point.
pub fn jet_mul(a: &Jet, b: &Jet) -> Result<Jet> {
    a.mul(b)
}

/// `∂_{ξ_i} a` as a jet of one lower order.
pub fn jet_diff(a: &Jet, i: usize) -> Result<Jet> {
    a.diff(i)
}

/// Jet from a map of partial derivatives `∂^β f(ξ*)`; every `|β| ≤ order`
/// must be present.
pub fn jet_from_partials(
    partials: &HashMap<MultiIndex, Complex64>,
    order: usize,
    base: &[Complex64],
) -> Result<Jet> {
    let dim = base.len();
    let space = MonomialSpace::shared(dim, order.max(1));
    let mut flat = Vec::with_capacity(space.count(order));
    for b in 0..space.count(order) {
        let beta = space.term(b);
        let p = partials
            .get(beta)
            .ok_or_else(|| Error::Structure(format!("missing partial derivative {beta:?}")))?;
        flat.push(*p);
    }
    Jet::from_partials_slice(space, order, base, &flat)
}
