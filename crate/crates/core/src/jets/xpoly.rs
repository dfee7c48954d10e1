use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::{MonomialSpace, MultiIndex};
use crate::error::{Error, Result};

/// Complex-coefficient polynomial in the state variable `x ∈ ℝ^d`.
///
/// Coefficients are stored densely in graded-lex order; every stored
/// monomial has degree `≤ degree_bound`.
#[derive(Clone)]
pub struct XPoly {
    space: Arc<MonomialSpace>,
    degree: usize,
    coeffs: Vec<Complex64>,
}

impl XPoly {
    pub fn zero(space: Arc<MonomialSpace>, degree: usize) -> Self {
        assert!(
            degree <= space.max_degree(),
            "degree exceeds monomial space"
        );
        let n = space.count(degree);
        XPoly {
            space,
            degree,
            coeffs: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn constant(space: Arc<MonomialSpace>, c: Complex64) -> Self {
        let mut p = Self::zero(space, 0);
        p.coeffs[0] = c;
        p
    }

    /// `c · x^α`
    pub fn monomial(space: Arc<MonomialSpace>, alpha: &MultiIndex, c: Complex64) -> Result<Self> {
        let idx = space
            .index_of(alpha)
            .ok_or_else(|| Error::Structure(format!("monomial {alpha:?} outside space")))?;
        let mut p = Self::zero(space, alpha.degree() as usize);
        p.coeffs[idx] = c;
        Ok(p)
    }

    /// The coordinate function `x_i`.
    pub fn variable(space: Arc<MonomialSpace>, i: usize) -> Self {
        let d = space.dim();
        Self::monomial(space, &MultiIndex::unit(d, i), Complex64::new(1.0, 0.0))
            .expect("unit monomial is always representable")
    }

    /// Builds a polynomial from `(α, c_α)` pairs; repeated indices accumulate.
    pub fn from_terms<I>(space: Arc<MonomialSpace>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        let terms: Vec<_> = terms.into_iter().collect();
        let degree = terms
            .iter()
            .map(|(a, _)| a.degree() as usize)
            .max()
            .unwrap_or(0);
        if degree > space.max_degree() {
            return Err(Error::Structure(format!(
                "degree {degree} exceeds space bound {}",
                space.max_degree()
            )));
        }
        let mut p = Self::zero(space, degree);
        for (a, c) in terms {
            let idx = p
                .space
                .index_of(&a)
                .ok_or_else(|| Error::Structure(format!("monomial {a:?} outside space")))?;
            p.coeffs[idx] += c;
        }
        Ok(p)
    }

    pub(crate) fn from_raw(
        space: Arc<MonomialSpace>,
        degree: usize,
        coeffs: Vec<Complex64>,
    ) -> Self {
        debug_assert_eq!(coeffs.len(), space.count(degree));
        XPoly {
            space,
            degree,
            coeffs,
        }
    }

    pub fn space(&self) -> &Arc<MonomialSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn degree_bound(&self) -> usize {
        self.degree
    }

    /// Actual degree of the highest nonzero monomial (0 for the zero polynomial).
    pub fn effective_degree(&self) -> usize {
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .find(|(_, c)| c.norm() != 0.0)
            .map_or(0, |(i, _)| self.space.degree_of(i))
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Complex64 {
        match self.space.index_of(alpha) {
            Some(i) if i < self.coeffs.len() => self.coeffs[i],
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// Nonzero `(α, c_α)` pairs in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() != 0.0)
            .map(move |(i, c)| (self.space.term(i), *c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }

    /// `Σ_β c_β x^β`.
    pub fn eval(&self, x: &[f64]) -> Complex64 {
        assert_eq!(x.len(), self.dim(), "evaluation point has wrong dimension");
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() != 0.0)
            .map(|(i, c)| c * self.space.term(i).pow(x))
            .sum()
    }

    /// Formal partial derivative `D^α_x p`.
    pub fn diff(&self, alpha: &MultiIndex) -> XPoly {
        let a = alpha.degree() as usize;
        let degree = self.degree.saturating_sub(a);
        let mut out = XPoly::zero(self.space.clone(), degree);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            let beta = self.space.term(i);
            if let Some(rest) = beta.checked_sub(alpha) {
                // β!/(β−α)!
                let w = beta.factorial() / rest.factorial();
                let j = self.space.index_of(&rest).expect("lower monomial in space");
                out.coeffs[j] += c * w;
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> XPoly {
        XPoly {
            space: self.space.clone(),
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &XPoly) -> Result<XPoly> {
        self.check(other)?;
        let degree = self.degree.max(other.degree);
        let mut out = XPoly::zero(self.space.clone(), degree);
        for (o, c) in out.coeffs.iter_mut().zip(&self.coeffs) {
            *o += c;
        }
        for (o, c) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *o += c;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &XPoly) -> Result<XPoly> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Product with degree bound equal to the sum of the operands' bounds.
    pub fn mul(&self, other: &XPoly) -> Result<XPoly> {
        self.check(other)?;
        let degree = self.degree + other.degree;
        if degree > self.space.max_degree() {
            return Err(Error::Structure(format!(
                "product degree {degree} exceeds space bound {}",
                self.space.max_degree()
            )));
        }
        let mut out = XPoly::zero(self.space.clone(), degree);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.norm() == 0.0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let k = self
                    .space
                    .product_index(i, j)
                    .expect("degree checked above");
                out.coeffs[k] += a * b;
            }
        }
        Ok(out)
    }

    fn check(&self, other: &XPoly) -> Result<()> {
        if !Arc::ptr_eq(&self.space, &other.space) && self.dim() != other.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }
}

impl PartialEq for XPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|i| {
            let a = self.coeffs.get(i).copied().unwrap_or_default();
            let b = other.coeffs.get(i).copied().unwrap_or_default();
            a == b
        })
    }
}

impl fmt::Debug for XPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<_> = self.terms().map(|(a, c)| format!("{c}·x^{a:?}")).collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Free-function form of [`XPoly::diff`].
pub fn xpoly_diff(p: &XPoly, alpha: &MultiIndex) -> XPoly {
    p.diff(alpha)
}

/// Free-function form of [`XPoly::eval`].
pub fn xpoly_eval(p: &XPoly, x: &[f64]) -> Complex64 {
    p.eval(x)
}
