use std::collections::BTreeMap;
use std::fmt;

use super::field::Field;
use super::levy::{exponential_compensator, LevyExponentFamily};
use crate::error::{Error, Result};
use crate::jets::MultiIndex;

/// One separable kernel contribution `g(t, x) · ν̄(t, dz)`.
#[derive(Clone)]
pub struct KernelTerm {
    pub weight: Field,
    pub family: LevyExponentFamily,
}

impl KernelTerm {
    pub fn new(weight: Field, family: LevyExponentFamily) -> Self {
        KernelTerm { weight, family }
    }
}

impl fmt::Debug for KernelTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KernelTerm")
            .field("weight", &self.weight)
            .field("family_dim", &self.family.dim())
            .finish()
    }
}

/// The generator
/// `A(t) = ∫ ν(t,x,dz)(e^{z·∇} − 1 − z·∇) + Σ_{|α|≤2} a_α(t,x) D^α`.
///
/// The killing rate enters as `a_0 = −λ`; its sign is the caller's choice.
#[derive(Clone, Debug)]
pub struct ModelSpec {
    dim: usize,
    coefficients: BTreeMap<MultiIndex, Field>,
    kernel: Vec<KernelTerm>,
}

impl ModelSpec {
    /// Missing `|α| ≤ 2` coefficients default to zero.
    pub fn new(
        dim: usize,
        coefficients: Vec<(MultiIndex, Field)>,
        kernel: Vec<KernelTerm>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "state dimension must be positive".into(),
            ));
        }
        let mut map = BTreeMap::new();
        for (alpha, f) in coefficients {
            if alpha.dim() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: alpha.dim(),
                });
            }
            if alpha.degree() > 2 {
                return Err(Error::InvalidParameter(format!(
                    "generator coefficient {alpha:?} has order above two"
                )));
            }
            if f.dim() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: f.dim(),
                });
            }
            if map.insert(alpha.clone(), f).is_some() {
                return Err(Error::InvalidParameter(format!(
                    "coefficient {alpha:?} given twice"
                )));
            }
        }
        for alpha in MultiIndex::all_up_to(dim, 2) {
            map.entry(alpha).or_insert_with(|| Field::zero(dim));
        }
        for k in &kernel {
            if k.weight.dim() != dim || k.family.dim() != dim {
                return Err(Error::Dimension {
                    expected: dim,
                    got: k.weight.dim().max(k.family.dim()),
                });
            }
        }
        Ok(ModelSpec {
            dim,
            coefficients: map,
            kernel,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> &Field {
        &self.coefficients[alpha]
    }

    /// All `(α, a_α)` with `|α| ≤ 2` in graded-lex order.
    pub fn coefficients(&self) -> impl Iterator<Item = (&MultiIndex, &Field)> {
        self.coefficients.iter()
    }

    pub fn kernel(&self) -> &[KernelTerm] {
        &self.kernel
    }

    pub fn is_time_homogeneous(&self) -> bool {
        self.coefficients.values().all(Field::is_time_homogeneous)
            && self
                .kernel
                .iter()
                .all(|k| k.weight.is_time_homogeneous() && k.family.is_time_homogeneous())
    }
}

/// Maps SDE data to generator coefficients: `a_{eᵢ} = μᵢ`,
/// `a_{2eᵢ} = ½Σᵢᵢ`, `a_{eᵢ+eⱼ} = Σᵢⱼ` (`i < j`), `a_0 = −λ`.
///
/// Only the upper triangle of `diffusion` (`Σ = σσᵀ`) is read.
pub fn generator_from_sde(
    drift: Vec<Field>,
    diffusion: Vec<Vec<Field>>,
    killing: Field,
    kernel: Vec<KernelTerm>,
) -> Result<ModelSpec> {
    let d = drift.len();
    if diffusion.len() != d || diffusion.iter().any(|row| row.len() != d) {
        return Err(Error::Dimension {
            expected: d,
            got: diffusion.len(),
        });
    }
    let mut coeffs = vec![(MultiIndex::zero(d), killing.scaled(-1.0))];
    for (i, mu) in drift.into_iter().enumerate() {
        coeffs.push((MultiIndex::unit(d, i), mu));
    }
    for (i, row) in diffusion.iter().enumerate() {
        for (j, entry) in row.iter().enumerate().skip(i) {
            let alpha = MultiIndex::unit(d, i).add(&MultiIndex::unit(d, j));
            let w = if i == j { 0.5 } else { 1.0 };
            coeffs.push((alpha, entry.scaled(w)));
        }
    }
    ModelSpec::new(d, coeffs, kernel)
}

/// Drift making `e^{Xᵢ}` a martingale after discounting at rate `γ`:
/// `μᵢ = γ − Σ_m g_m ψ̄_m(−i eᵢ) − ½Σᵢᵢ`.
pub fn martingale_drift(
    diffusion_ii: &Field,
    kernel: &[KernelTerm],
    discount: &Field,
    i: usize,
) -> Result<Field> {
    let mut terms = vec![(1.0, discount.clone()), (-0.5, diffusion_ii.clone())];
    for k in kernel {
        if i >= k.family.dim() {
            return Err(Error::Dimension {
                expected: k.family.dim(),
                got: i + 1,
            });
        }
        let c0 = exponential_compensator(&*k.family, 0.0, i)?;
        if k.family.is_time_homogeneous() {
            terms.push((-c0, k.weight.clone()));
        } else {
            let fam = k.family.clone();
            terms.push((
                -1.0,
                k.weight.time_scaled(move |t| {
                    exponential_compensator(&*fam, t, i).expect("strip checked at construction")
                }),
            ));
        }
    }
    Ok(Field::linear_combination(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::levy::gaussian_levy_family;

    #[test]
    fn unit_diffusion_maps_to_half_laplacian() {
        let m = generator_from_sde(
            vec![Field::zero(1)],
            vec![vec![Field::constant(1, 1.0)]],
            Field::zero(1),
            vec![],
        )
        .unwrap();
        assert_eq!(
            m.coefficient(&MultiIndex::from([2])).value(0.0, &[0.3]),
            0.5
        );
        assert_eq!(
            m.coefficient(&MultiIndex::from([1])).value(0.0, &[0.3]),
            0.0
        );
        assert_eq!(
            m.coefficient(&MultiIndex::from([0])).value(0.0, &[0.3]),
            0.0
        );
    }

    #[test]
    fn pure_diffusion_martingale_drift() {
        let s2 = Field::constant(1, 0.09);
        let mu = martingale_drift(&s2, &[], &Field::zero(1), 0).unwrap();
        assert!((mu.value(0.0, &[0.0]) + 0.045).abs() < 1e-15);
    }

    #[test]
    fn gaussian_compensator_agrees_with_density_integral() {
        let (lam, m, s) = (2.0, -0.1, 0.2);
        let fam = gaussian_levy_family(1, 0, lam, m, s).unwrap();
        let k = KernelTerm::new(Field::constant(1, 1.0), fam);
        let mu = martingale_drift(&Field::zero(1), &[k], &Field::zero(1), 0).unwrap();
        // ∫ (e^ζ − 1 − ζ) λ φ(ζ; m, s) dζ by brute-force midpoint sum
        let n = 200_000;
        let (lo, hi) = (m - 12.0 * s, m + 12.0 * s);
        let h = (hi - lo) / n as f64;
        let integral: f64 = (0..n)
            .map(|k| {
                let z = lo + (k as f64 + 0.5) * h;
                let dens = (-(z - m).powi(2) / (2.0 * s * s)).exp()
                    / (s * (2.0 * std::f64::consts::PI).sqrt());
                (z.exp() - 1.0 - z) * dens * h
            })
            .sum::<f64>()
            * lam;
        assert!((mu.value(0.0, &[0.0]) + integral).abs() < 1e-10);
    }

    #[test]
    fn off_diagonal_diffusion_is_not_halved() {
        let c = |v| Field::constant(2, v);
        let m = generator_from_sde(
            vec![c(0.0), c(0.0)],
            vec![vec![c(1.0), c(0.3)], vec![c(0.3), c(2.0)]],
            c(0.0),
            vec![],
        )
        .unwrap();
        assert_eq!(
            m.coefficient(&MultiIndex::from([1, 1]))
                .value(0.0, &[0.0, 0.0]),
            0.3
        );
        assert_eq!(
            m.coefficient(&MultiIndex::from([0, 2]))
                .value(0.0, &[0.0, 0.0]),
            1.0
        );
    }
}
