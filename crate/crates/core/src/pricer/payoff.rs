use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptionKind {
    Call,
    Put,
}

/// European payoff on the log-price coordinate `x₁`, with log-strike `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoffTransform {
    pub kind: OptionKind,
    pub log_strike: f64,
}

impl PayoffTransform {
    pub fn call(log_strike: f64) -> Self {
        PayoffTransform {
            kind: OptionKind::Call,
            log_strike,
        }
    }

    pub fn put(log_strike: f64) -> Self {
        PayoffTransform {
            kind: OptionKind::Put,
            log_strike,
        }
    }

    pub fn label(&self) -> String {
        let kind = match self.kind {
            OptionKind::Call => "call",
            OptionKind::Put => "put",
        };
        format!("{kind} k={}", self.log_strike)
    }

    pub fn payoff(&self, x: f64) -> f64 {
        let (s, k) = (x.exp(), self.log_strike.exp());
        match self.kind {
            OptionKind::Call => (s - k).max(0.0),
            OptionKind::Put => (k - s).max(0.0),
        }
    }

    /// `φ̂(ξ) = ∫ φ(x) e^{iξx} dx = e^{k + ikξ} / (iξ − ξ²)`, defined for
    /// `Im ξ > 1` (call) or `Im ξ < 0` (put).
    pub fn transform(&self, xi: Complex64) -> Result<Complex64> {
        let ok = match self.kind {
            OptionKind::Call => xi.im > 1.0,
            OptionKind::Put => xi.im < 0.0,
        };
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "{} transform undefined at Im ξ = {}",
                self.label(),
                xi.im
            )));
        }
        let k = self.log_strike;
        Ok((k + I * k * xi).exp() / (I * xi - xi * xi))
    }

    /// Rejects pricing contours `Im ξ = shift` on which `φ̂(−ξ)` is undefined.
    pub fn check_contour(&self, shift: f64) -> Result<()> {
        let ok = match self.kind {
            OptionKind::Call => shift < -1.0,
            OptionKind::Put => shift > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "contour Im ξ = {shift} not admissible for {} (need {})",
                self.label(),
                match self.kind {
                    OptionKind::Call => "Im ξ < −1",
                    OptionKind::Put => "Im ξ > 0",
                }
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn call_transform_at_negated_argument() {
        let k = 0.1;
        let xi = Complex64::new(0.7, -1.5);
        let v = PayoffTransform::call(k).transform(-xi).unwrap();
        let expected = -(k - I * k * xi).exp() / (I * xi + xi * xi);
        assert!((v - expected).norm() < 1e-14);
    }

    #[test]
    fn call_transform_matches_numerical_integral() {
        let k = -0.05;
        let xi = Complex64::new(0.4, 1.8);
        let phi = PayoffTransform::call(k);
        // ∫_k^L (e^x − e^k) e^{iξx} dx by midpoint rule
        let (n, hi) = (400_000, k + 40.0);
        let h = (hi - k) / n as f64;
        let num: Complex64 = (0..n)
            .map(|j| {
                let x = k + (j as f64 + 0.5) * h;
                (I * xi * x).exp() * phi.payoff(x) * h
            })
            .sum();
        assert!((num - phi.transform(xi).unwrap()).norm() < 1e-7);
    }

    #[test]
    fn contour_constraints() {
        assert!(PayoffTransform::call(0.0).check_contour(-1.5).is_ok());
        assert!(PayoffTransform::call(0.0).check_contour(-0.5).is_err());
        assert!(PayoffTransform::put(0.0).check_contour(0.5).is_ok());
    }
}
