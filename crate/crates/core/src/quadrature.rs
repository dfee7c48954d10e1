//! Gauss–Legendre and Gauss–Hermite rules, cached per node count.
//!
//! Node generation is delegated to `gauss-quad`; this module only adds
//! interval mapping, the standard-normal form of the Hermite rule and a
//! process-wide cache.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use gauss_quad::hermite::GaussHermite;
use gauss_quad::legendre::GaussLegendre;
use std::sync::LazyLock;

use crate::error::{Error, Result};

/// Nodes and weights on a reference domain.
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Legendre nodes mapped to `[a, b]`, weights scaled by the Jacobian.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }
}

static LEGENDRE: LazyLock<Mutex<HashMap<usize, Arc<Rule>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));
static HERMITE: LazyLock<Mutex<HashMap<usize, Arc<Rule>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// `n`-point Gauss–Legendre rule on `[-1, 1]`, sorted by node.
pub fn gauss_legendre(n: usize) -> Result<Arc<Rule>> {
    if n == 1 {
        return Ok(Arc::new(Rule {
            nodes: vec![0.0],
            weights: vec![2.0],
        }));
    }
    let mut cache = LEGENDRE.lock().expect("quadrature cache poisoned");
    if let Some(r) = cache.get(&n) {
        return Ok(r.clone());
    }
    let gl = GaussLegendre::new(n).map_err(|e| Error::Quadrature(e.to_string()))?;
    let mut pairs: Vec<(f64, f64)> = gl.into_iter().collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let rule = Arc::new(Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    });
    cache.insert(n, rule.clone());
    Ok(rule)
}

/// `n`-point Gauss–Hermite rule for the standard normal weight:
/// `E[f(Y)] ≈ Σ wᵢ f(yᵢ)`, `Y ~ N(0,1)`, weights summing to one.
pub fn gauss_hermite_normal(n: usize) -> Result<Arc<Rule>> {
    if n == 1 {
        return Ok(Arc::new(Rule {
            nodes: vec![0.0],
            weights: vec![1.0],
        }));
    }
    let mut cache = HERMITE.lock().expect("quadrature cache poisoned");
    if let Some(r) = cache.get(&n) {
        return Ok(r.clone());
    }
    let gh = GaussHermite::new(n).map_err(|e| Error::Quadrature(e.to_string()))?;
    let mut pairs: Vec<(f64, f64)> = gh.into_iter().collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let norm = std::f64::consts::PI.sqrt();
    let sqrt2 = std::f64::consts::SQRT_2;
    let rule = Arc::new(Rule {
        nodes: pairs.iter().map(|p| sqrt2 * p.0).collect(),
        weights: pairs.iter().map(|p| p.1 / norm).collect(),
    });
    cache.insert(n, rule.clone());
    Ok(rule)
}

/// Integrates over `[a, b]` with an `n`-point Legendre rule.
pub fn integrate<F: FnMut(f64) -> f64>(n: usize, a: f64, b: f64, mut f: F) -> Result<f64> {
    let rule = gauss_legendre(n)?;
    Ok(rule.mapped(a, b).map(|(x, w)| w * f(x)).sum())
}
