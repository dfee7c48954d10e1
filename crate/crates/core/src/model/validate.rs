use std::fmt;

use super::expand::ExpandedModel;

/// A single violated expansion assumption.
#[derive(Debug, Clone, PartialEq)]
pub enum Issue {
    /// An order-0 quantity depends on `x`.
    StateDependentLeadingTerm { what: String, t: f64 },
    /// The order-0 jump weight is negative.
    NegativeLeadingKernel { term: usize, t: f64, weight: f64 },
    /// The contour leaves the strip of analyticity of a jump family.
    StripTooNarrow {
        term: usize,
        axis: usize,
        strip: f64,
        shift: f64,
    },
    /// The model could not be evaluated at all.
    Evaluation { t: f64, message: String },
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::StateDependentLeadingTerm { what, t } => {
                write!(f, "{what} at order 0 depends on x (t = {t})")
            }
            Issue::NegativeLeadingKernel { term, t, weight } => {
                write!(
                    f,
                    "order-0 weight of kernel term {term} is {weight} < 0 at t = {t}"
                )
            }
            Issue::StripTooNarrow {
                term,
                axis,
                strip,
                shift,
            } => write!(
                f,
                "kernel term {term}: contour shift {shift} on axis {axis} exceeds strip {strip}"
            ),
            Issue::Evaluation { t, message } => {
                write!(f, "evaluation failed at t = {t}: {message}")
            }
        }
    }
}

/// Outcome of [`validate_model`].
#[derive(Debug, Clone, Default)]
pub struct Diagnostics {
    pub issues: Vec<Issue>,
    pub times_checked: Vec<f64>,
}

impl Diagnostics {
    pub fn passed(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Checks that the order-0 generator is state independent, that the order-0
/// jump weights are non-negative on a grid over `[0, horizon]`, and that
/// each jump family is analytic on the pricing contour `Im ξ = shift`.
pub fn validate_model(em: &ExpandedModel, horizon: f64, contour_shift: &[f64]) -> Diagnostics {
    let mut diag = Diagnostics::default();
    let steps = if em.is_time_homogeneous() { 0 } else { 20 };
    for k in 0..=steps {
        let t = if steps == 0 {
            0.0
        } else {
            horizon * k as f64 / steps as f64
        };
        diag.times_checked.push(t);
        let snap = match em.snapshot(t) {
            Ok(s) => s,
            Err(e) => {
                diag.issues.push(Issue::Evaluation {
                    t,
                    message: e.to_string(),
                });
                continue;
            }
        };
        for (alpha, orders) in &snap.coefficients {
            if orders[0].effective_degree() > 0 {
                diag.issues.push(Issue::StateDependentLeadingTerm {
                    what: format!("a_{alpha:?}"),
                    t,
                });
            }
        }
        for (m, orders) in &snap.kernel {
            let w0 = &orders[0];
            if w0.effective_degree() > 0 {
                diag.issues.push(Issue::StateDependentLeadingTerm {
                    what: format!("kernel term {m}"),
                    t,
                });
            }
            let weight = w0.coeffs()[0].re;
            if weight < 0.0 {
                diag.issues.push(Issue::NegativeLeadingKernel {
                    term: *m,
                    t,
                    weight,
                });
            }
        }
    }
    for (m, fam) in em.families().iter().enumerate() {
        for (axis, (&strip, &shift)) in fam.strip().iter().zip(contour_shift).enumerate() {
            if shift.abs() >= strip {
                diag.issues.push(Issue::StripTooNarrow {
                    term: m,
                    axis,
                    strip,
                    shift: shift.abs(),
                });
            }
        }
    }
    diag
}
