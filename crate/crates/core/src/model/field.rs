use std::fmt;
use std::sync::Arc;

use crate::jets::MultiIndex;

/// A real function of time and state with (optionally) analytic x-partials.
pub trait SpatialFunction: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, t: f64, x: &[f64]) -> f64;

    /// `D^β_x f(t, x)`, or `None` when no derivative information is available.
    fn derivative(&self, t: f64, x: &[f64], beta: &MultiIndex) -> Option<f64>;

    fn is_time_homogeneous(&self) -> bool;
}

/// Shared handle to a [`SpatialFunction`].
#[derive(Clone)]
pub struct Field(Arc<dyn SpatialFunction>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field(dim={})", self.dim())
    }
}

impl Field {
    pub fn new<F: SpatialFunction + 'static>(f: F) -> Self {
        Field(Arc::new(f))
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self::polynomial(dim, vec![(MultiIndex::zero(dim), c)])
    }

    pub fn zero(dim: usize) -> Self {
        Self::polynomial(dim, Vec::new())
    }

    /// Time-homogeneous polynomial `Σ c_α x^α`.
    pub fn polynomial(dim: usize, terms: Vec<(MultiIndex, f64)>) -> Self {
        Field::new(Polynomial { dim, terms })
    }

    /// `c₀ + Σ cᵢ xᵢ`.
    pub fn affine(constant: f64, slopes: &[f64]) -> Self {
        let dim = slopes.len();
        let mut terms = vec![(MultiIndex::zero(dim), constant)];
        terms.extend(
            slopes
                .iter()
                .enumerate()
                .map(|(i, &s)| (MultiIndex::unit(dim, i), s)),
        );
        Self::polynomial(dim, terms)
    }

    /// User-supplied value and derivative callbacks.
    pub fn from_fns<V, D>(dim: usize, time_homogeneous: bool, value: V, derivative: D) -> Self
    where
        V: Fn(f64, &[f64]) -> f64 + Send + Sync + 'static,
        D: Fn(f64, &[f64], &MultiIndex) -> Option<f64> + Send + Sync + 'static,
    {
        Field::new(Closure {
            dim,
            homogeneous: time_homogeneous,
            value: Box::new(value),
            derivative: Box::new(derivative),
        })
    }

    /// A function known only through its values (usable by the Hermite scheme).
    pub fn value_only<V>(dim: usize, time_homogeneous: bool, value: V) -> Self
    where
        V: Fn(f64, &[f64]) -> f64 + Send + Sync + 'static,
    {
        Self::from_fns(dim, time_homogeneous, value, |_, _, _| None)
    }

    /// `c · f`.
    pub fn scaled(&self, c: f64) -> Self {
        Self::linear_combination(vec![(c, self.clone())])
    }

    /// `Σ cₖ fₖ`; all terms must share a dimension.
    pub fn linear_combination(terms: Vec<(f64, Field)>) -> Self {
        let dim = terms.first().map_or(0, |(_, f)| f.dim());
        Field::new(Linear { dim, terms })
    }

    /// `s(t) · f(t, x)`.
    pub fn time_scaled<S>(&self, scale: S) -> Self
    where
        S: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Field::new(TimeScaled {
            inner: self.clone(),
            scale: Box::new(scale),
        })
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn value(&self, t: f64, x: &[f64]) -> f64 {
        self.0.value(t, x)
    }

    pub fn derivative(&self, t: f64, x: &[f64], beta: &MultiIndex) -> Option<f64> {
        if beta.degree() == 0 {
            return Some(self.0.value(t, x));
        }
        self.0.derivative(t, x, beta)
    }

    pub fn is_time_homogeneous(&self) -> bool {
        self.0.is_time_homogeneous()
    }
}

struct Polynomial {
    dim: usize,
    terms: Vec<(MultiIndex, f64)>,
}

impl SpatialFunction for Polynomial {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, _t: f64, x: &[f64]) -> f64 {
        self.terms.iter().map(|(a, c)| c * a.pow(x)).sum()
    }

    fn derivative(&self, _t: f64, x: &[f64], beta: &MultiIndex) -> Option<f64> {
        Some(
            self.terms
                .iter()
                .filter_map(|(a, c)| {
                    a.checked_sub(beta)
                        .map(|rest| c * a.factorial() / rest.factorial() * rest.pow(x))
                })
                .sum(),
        )
    }

    fn is_time_homogeneous(&self) -> bool {
        true
    }
}

type ValueFn = Box<dyn Fn(f64, &[f64]) -> f64 + Send + Sync>;
type DerivFn = Box<dyn Fn(f64, &[f64], &MultiIndex) -> Option<f64> + Send + Sync>;

struct Closure {
    dim: usize,
    homogeneous: bool,
    value: ValueFn,
    derivative: DerivFn,
}

impl SpatialFunction for Closure {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, t: f64, x: &[f64]) -> f64 {
        (self.value)(t, x)
    }

    fn derivative(&self, t: f64, x: &[f64], beta: &MultiIndex) -> Option<f64> {
        (self.derivative)(t, x, beta)
    }

    fn is_time_homogeneous(&self) -> bool {
        self.homogeneous
    }
}

struct Linear {
    dim: usize,
    terms: Vec<(f64, Field)>,
}

impl SpatialFunction for Linear {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, t: f64, x: &[f64]) -> f64 {
        self.terms.iter().map(|(c, f)| c * f.value(t, x)).sum()
    }

    fn derivative(&self, t: f64, x: &[f64], beta: &MultiIndex) -> Option<f64> {
        self.terms
            .iter()
            .map(|(c, f)| f.derivative(t, x, beta).map(|d| c * d))
            .sum()
    }

    fn is_time_homogeneous(&self) -> bool {
        self.terms.iter().all(|(_, f)| f.is_time_homogeneous())
    }
}

struct TimeScaled {
    inner: Field,
    scale: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl SpatialFunction for TimeScaled {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn value(&self, t: f64, x: &[f64]) -> f64 {
        (self.scale)(t) * self.inner.value(t, x)
    }

    fn derivative(&self, t: f64, x: &[f64], beta: &MultiIndex) -> Option<f64> {
        self.inner
            .derivative(t, x, beta)
            .map(|d| (self.scale)(t) * d)
    }

    fn is_time_homogeneous(&self) -> bool {
        false
    }
}
