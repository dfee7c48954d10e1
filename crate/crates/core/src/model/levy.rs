use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jets::MonomialSpace;

/// `ψ̄(t, ξ) = ∫ (e^{iξ·z} − 1 − iξ·z) ν̄(t, dz)` for a fixed Lévy measure `ν̄`.
///
/// Implementations must satisfy `ψ̄(t, 0) = 0` and `∇ψ̄(t, 0) = 0`.
pub trait LevyExponent: Send + Sync {
    fn dim(&self) -> usize;

    /// `∂^β_ξ ψ̄(t, ξ)` for every `|β| ≤ order`, listed in the graded-lex
    /// order of `space`.
    fn partials(
        &self,
        t: f64,
        xi: &[Complex64],
        order: usize,
        space: &MonomialSpace,
    ) -> Result<Vec<Complex64>>;

    /// Half-widths of the strip `|Im ξ_i| < s_i` on which `ψ̄` is analytic.
    fn strip(&self) -> Vec<f64>;

    fn is_time_homogeneous(&self) -> bool;

    fn value(&self, t: f64, xi: &[Complex64]) -> Result<Complex64> {
        let space = MonomialSpace::shared(self.dim(), 1);
        Ok(self.partials(t, xi, 0, &space)?[0])
    }
}

/// Shared handle to a Lévy exponent.
pub type LevyExponentFamily = Arc<dyn LevyExponent>;

/// Rejects `ξ` outside the analyticity strip of `family`.
pub fn check_strip(family: &dyn LevyExponent, xi: &[Complex64]) -> Result<()> {
    for (axis, (z, s)) in xi.iter().zip(family.strip()).enumerate() {
        if z.im.abs() >= s {
            return Err(Error::Strip {
                axis,
                requested: z.im.abs(),
                strip: s,
            });
        }
    }
    Ok(())
}

/// Gaussian jumps of intensity `λ`, mean `m` and standard deviation `s`
/// along one coordinate axis:
/// `ψ̄(ξ) = λ (e^{i m ξ_a − s² ξ_a²/2} − 1 − i m ξ_a)`.
#[derive(Debug, Clone)]
pub struct GaussianJumps {
    pub dim: usize,
    pub axis: usize,
    pub intensity: f64,
    pub mean: f64,
    pub std_dev: f64,
}

impl GaussianJumps {
    pub fn new(dim: usize, axis: usize, intensity: f64, mean: f64, std_dev: f64) -> Result<Self> {
        if axis >= dim {
            return Err(Error::Dimension {
                expected: dim,
                got: axis + 1,
            });
        }
        if intensity < 0.0 || std_dev < 0.0 || !mean.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gaussian jumps need intensity ≥ 0 and std dev ≥ 0 (got {intensity}, {std_dev})"
            )));
        }
        Ok(GaussianJumps {
            dim,
            axis,
            intensity,
            mean,
            std_dev,
        })
    }

    /// Univariate derivatives `dᵏ/duᵏ ψ̄` at `u`, `k = 0..=order`.
    pub fn univariate(&self, u: Complex64, order: usize) -> Vec<Complex64> {
        let i = Complex64::i();
        let (m, s2) = (self.mean, self.std_dev * self.std_dev);
        // exponent g(u + h) = g0 + g1 h + g2 h²
        let g0 = i * m * u - 0.5 * s2 * u * u;
        let g1 = i * m - s2 * u;
        let g2 = Complex64::new(-0.5 * s2, 0.0);
        let mut y = vec![g0.exp()];
        for k in 1..=order {
            let mut acc = g1 * y[k - 1];
            if k >= 2 {
                acc += 2.0 * g2 * y[k - 2];
            }
            y.push(acc / k as f64);
        }
        let mut fact = 1.0;
        let mut out = Vec::with_capacity(order + 1);
        for (k, yk) in y.iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            let mut d = yk * fact;
            match k {
                0 => d -= 1.0 + i * m * u,
                1 => d -= i * m,
                _ => {}
            }
            out.push(self.intensity * d);
        }
        out
    }
}

impl LevyExponent for GaussianJumps {
    fn dim(&self) -> usize {
        self.dim
    }

    fn partials(
        &self,
        _t: f64,
        xi: &[Complex64],
        order: usize,
        space: &MonomialSpace,
    ) -> Result<Vec<Complex64>> {
        if xi.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: xi.len(),
            });
        }
        let uni = self.univariate(xi[self.axis], order);
        let n = space.count(order);
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (b, o) in out.iter_mut().enumerate() {
            let beta = space.term(b);
            let k = beta.get(self.axis) as usize;
            if beta.degree() as usize == k {
                *o = uni[k];
            }
        }
        Ok(out)
    }

    fn strip(&self) -> Vec<f64> {
        vec![f64::INFINITY; self.dim]
    }

    fn is_time_homogeneous(&self) -> bool {
        true
    }
}

/// Gaussian jump family on coordinate `axis` of a `dim`-dimensional state.
pub fn gaussian_levy_family(
    dim: usize,
    axis: usize,
    intensity: f64,
    mean: f64,
    std_dev: f64,
) -> Result<LevyExponentFamily> {
    Ok(Arc::new(GaussianJumps::new(
        dim, axis, intensity, mean, std_dev,
    )?))
}

/// `ψ̄(−i eᵢ)`, the exponential compensator of the jumps along axis `i`.
pub fn exponential_compensator(family: &dyn LevyExponent, t: f64, i: usize) -> Result<f64> {
    let mut xi = vec![Complex64::new(0.0, 0.0); family.dim()];
    xi[i] = Complex64::new(0.0, -1.0);
    let strip = family.strip();
    if strip[i] <= 1.0 {
        return Err(Error::Strip {
            axis: i,
            requested: 1.0,
            strip: strip[i],
        });
    }
    Ok(family.value(t, &xi)?.re)
}
