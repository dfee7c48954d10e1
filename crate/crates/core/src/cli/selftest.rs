use std::time::{Duration, Instant};

use num_complex::Complex64;

use crate::error::Result;
use crate::expansion::{mhat_apply, CharApprox, SimplexSpec};
use crate::jets::{Jet, MonomialSpace, MultiIndex};
use crate::model::{
    black_scholes, expand_hermite, expand_taylor, hermite_gram, heston_jump, local_vol_jump,
    HestonJumpParams,
};
use crate::oracle::{exact_report, heston_jump_cf_with, heston_jump_riccati_cf, CfSettings};
use crate::pricer::{bs_price, implied_vol, price, PayoffTransform, QuadratureSpec};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SelftestOptions {
    /// Puts the reference characteristic function on the wrong logarithm
    /// sheet; the oracle suite must then fail.
    pub inject_branch_fault: bool,
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct SelftestReport {
    pub checks: Vec<CheckOutcome>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{tag} {:<28} {:>8.1} ms  {}\n",
                c.name,
                c.elapsed.as_secs_f64() * 1e3,
                c.detail
            ));
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        out.push_str(&format!(
            "{} checks, {} failed\n",
            self.checks.len(),
            failed
        ));
        out
    }
}

type Check = fn(&SelftestOptions) -> std::result::Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn sample_jets() -> Result<(Jet, Jet, Jet)> {
    let space = MonomialSpace::shared(2, 3);
    let base = [c(0.3, -1.2), c(-0.4, 0.1)];
    let v0 = Jet::variable(space.clone(), 3, &base, 0);
    let v1 = Jet::variable(space.clone(), 3, &base, 1);
    let f = v0.mul(&v1)?.add(&v0.scale(c(2.0, 0.5)))?;
    let g = v1
        .mul(&v1)?
        .add(&Jet::constant(space.clone(), 3, &base, c(1.0, -1.0)))?;
    let h = v0.mul(&v0)?.mul(&v1)?.scale(c(0.0, 1.0));
    Ok((f, g, h))
}

fn jets_leibniz(_: &SelftestOptions) -> std::result::Result<String, String> {
    let (f, g, _) = lift(sample_jets())?;
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        let lhs = lift(f.mul(&g).and_then(|p| p.diff(i)))?;
        let rhs = lift((|| {
            f.diff(i)?
                .mul(&g.truncate(2))?
                .add(&f.truncate(2).mul(&g.diff(i)?)?)
        })())?;
        worst = worst.max(lhs.max_abs_diff(&rhs));
    }
    ensure(worst < 1e-12, || format!("Leibniz defect {worst:e}"))?;
    Ok(format!("max defect {worst:.1e}"))
}

fn jets_algebra(_: &SelftestOptions) -> std::result::Result<String, String> {
    let (f, g, h) = lift(sample_jets())?;
    let comm = lift(f.mul(&g))?.max_abs_diff(&lift(g.mul(&f))?);
    let assoc = lift(f.mul(&g).and_then(|p| p.mul(&h)))?
        .max_abs_diff(&lift(g.mul(&h).and_then(|p| f.mul(&p)))?);
    ensure(comm < 1e-12 && assoc < 1e-12, || {
        format!("commutativity {comm:e}, associativity {assoc:e}")
    })?;
    Ok(format!("defects {comm:.1e} / {assoc:.1e}"))
}

fn heston_approx(order: usize, tau: f64) -> Result<CharApprox> {
    let p = HestonJumpParams::default();
    let em = expand_taylor(&heston_jump(&p)?, order, &[p.x0, p.z0])?;
    CharApprox::new(&em, 0.0, tau, SimplexSpec::default())
}

fn mhat_commute(_: &SelftestOptions) -> std::result::Result<String, String> {
    let ca = lift(heston_approx(3, 0.5))?;
    let xi = [c(0.8, -1.5), c(0.0, 0.0)];
    let fvec = lift(ca.f_vector(&xi, 0.3, 3))?;
    let one = Jet::one(fvec[0].space().clone(), 3, &xi);
    let f1: Vec<Jet> = fvec.iter().map(|j| j.truncate(1)).collect();
    let ab = lift(mhat_apply(1, &one, &fvec).and_then(|j| mhat_apply(0, &j, &f1)))?;
    let ba = lift(mhat_apply(0, &one, &fvec).and_then(|j| mhat_apply(1, &j, &f1)))?;
    let d = ab.max_abs_diff(&ba);
    ensure(d < 1e-12, || format!("[M̂₀, M̂₁] defect {d:e}"))?;
    Ok(format!("defect {d:.1e}"))
}

fn hermite_orthonormal(_: &SelftestOptions) -> std::result::Result<String, String> {
    let g = lift(hermite_gram(2, 3, &[0.1, 0.04], &[0.02, 0.0004], 6))?;
    let mut worst: f64 = 0.0;
    for (i, row) in g.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            worst = worst.max((v - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    ensure(worst < 1e-10, || format!("Gram defect {worst:e}"))?;
    Ok(format!("Gram defect {worst:.1e}"))
}

fn polynomial_reconstruction(_: &SelftestOptions) -> std::result::Result<String, String> {
    let model = lift(local_vol_jump((0.04, 0.02), (1.0, 0.5), -0.05, 0.1))?;
    let a2 = MultiIndex::from([2]);
    let taylor = lift(expand_taylor(&model, 1, &[0.3]))?;
    let hermite = lift(expand_hermite(&model, 1, &[0.3], &[0.05], 4))?;
    let mut worst: f64 = 0.0;
    for em in [&taylor, &hermite] {
        for x in [-0.5, 0.0, 0.7] {
            let mut sum = Complex64::new(0.0, 0.0);
            for n in 0..=1 {
                sum += lift(em.coefficient(n, &a2, 0.0))?.eval(&[x]);
            }
            let exact = model.coefficient(&a2).value(0.0, &[x]);
            worst = worst.max((sum - exact).norm());
        }
    }
    ensure(worst < 1e-12, || format!("reconstruction defect {worst:e}"))?;
    Ok(format!("defect {worst:.1e}"))
}

fn zeroth_order_exactness(_: &SelftestOptions) -> std::result::Result<String, String> {
    let em = lift(expand_taylor(&lift(black_scholes(0.2))?, 3, &[0.0]))?;
    let ca = lift(CharApprox::new(&em, 0.0, 0.25, SimplexSpec::default()))?;
    let r = lift(price(
        &ca,
        PayoffTransform::call(0.05),
        &[0.0],
        &QuadratureSpec::default(),
    ))?;
    let higher = r
        .terms
        .iter()
        .skip(1)
        .map(|t| t.value.abs())
        .fold(0.0, f64::max);
    let err = (r.price() - bs_price(0.0, 0.05, 0.25, 0.2)).abs();
    ensure(higher < 1e-12 && err < 1e-8, || {
        format!("higher terms {higher:e}, price error {err:e}")
    })?;
    Ok(format!("price error {err:.1e}"))
}

fn vanishing_at_origin(_: &SelftestOptions) -> std::result::Result<String, String> {
    let ca = lift(heston_approx(3, 0.5))?;
    let terms = lift(ca.terms(&[c(0.0, 0.0), c(0.0, 0.0)]))?;
    let p = HestonJumpParams::default();
    let worst = (1..=3)
        .map(|n| terms.phat(n, &[0.1, p.z0 * 1.3]).norm())
        .fold(0.0, f64::max);
    ensure(worst < 1e-12, || format!("|P̂ₙ(0)| = {worst:e}"))?;
    Ok(format!("max |P̂ₙ(0)| {worst:.1e}"))
}

fn oracle_identities(opts: &SelftestOptions) -> std::result::Result<String, String> {
    let p = HestonJumpParams::default();
    let cfg = CfSettings {
        inject_branch_fault: opts.inject_branch_fault,
        ..CfSettings::default()
    };
    let x = 0.15;
    let one = lift(heston_jump_cf_with(
        &p,
        0.0,
        x,
        p.z0,
        1.0,
        c(0.0, 0.0),
        &cfg,
    ))?;
    let mart = lift(heston_jump_cf_with(
        &p,
        0.0,
        x,
        p.z0,
        1.0,
        c(0.0, -1.0),
        &cfg,
    ))?;
    let (e0, e1) = ((one - 1.0).norm(), (mart - x.exp()).norm());
    ensure(e0 < 1e-14 && e1 < 1e-10, || {
        format!("CF(0) − 1 = {e0:e}, CF(−i) − eˣ = {e1:e}")
    })?;
    Ok(format!("defects {e0:.1e} / {e1:.1e}"))
}

fn oracle_riccati(opts: &SelftestOptions) -> std::result::Result<String, String> {
    let p = HestonJumpParams::default();
    let cfg = CfSettings {
        inject_branch_fault: opts.inject_branch_fault,
        ..CfSettings::default()
    };
    let mut worst: f64 = 0.0;
    for (xi, tau) in [
        (c(1.0, -1.5), 0.25),
        (c(-6.0, -1.5), 1.0),
        (c(15.0, 0.0), 0.5),
        (c(3.0, -0.5), 2.0),
    ] {
        let a = lift(heston_jump_cf_with(&p, 0.0, 0.0, p.z0, tau, xi, &cfg))?;
        let b = lift(heston_jump_riccati_cf(&p, 0.0, 0.0, p.z0, tau, xi, 1e-12))?;
        worst = worst.max((a - b).norm() / b.norm());
    }
    ensure(worst < 1e-8, || {
        format!("closed form vs Riccati relative gap {worst:e}")
    })?;
    Ok(format!("relative gap {worst:.1e}"))
}

fn contour_invariance(_: &SelftestOptions) -> std::result::Result<String, String> {
    let ca = lift(heston_approx(2, 0.25))?;
    let p = HestonJumpParams::default();
    let at = |shift: f64| {
        let q = QuadratureSpec {
            shift,
            ..QuadratureSpec::default()
        };
        price(&ca, PayoffTransform::call(0.05), &[0.0, p.z0], &q).map(|r| r.price())
    };
    let d = (lift(at(-1.25))? - lift(at(-2.0))?).abs();
    ensure(d < 1e-8, || {
        format!("price moved by {d:e} between contours")
    })?;
    Ok(format!("difference {d:.1e}"))
}

fn greeks_finite_differences(_: &SelftestOptions) -> std::result::Result<String, String> {
    let p = HestonJumpParams::default();
    let (x, h, k) = (0.05, 1e-4, 0.0);
    let q = QuadratureSpec::default();
    let cf = CfSettings::default();
    let rep = |x: f64| exact_report(&p, 0.0, x, p.z0, 0.5, &[k], &q, &cf).map(|mut r| r.remove(0));
    let (lo, mid, hi) = (lift(rep(x - h))?, lift(rep(x))?, lift(rep(x + h))?);
    let (ux, uxx) = (
        (hi.price() - lo.price()) / (2.0 * h),
        (hi.price() - 2.0 * mid.price() + lo.price()) / (h * h),
    );
    let fd_delta = (-x).exp() * ux;
    let fd_gamma = (-2.0 * x).exp() * (uxx - ux);
    let (ed, eg) = (
        (mid.delta() - fd_delta).abs(),
        (mid.gamma() - fd_gamma).abs(),
    );
    ensure(ed < 1e-5 && eg < 1e-3, || {
        format!("Δ gap {ed:e}, Γ gap {eg:e}")
    })?;
    Ok(format!("Δ gap {ed:.1e}, Γ gap {eg:.1e}"))
}

fn reference_smile_point(_: &SelftestOptions) -> std::result::Result<String, String> {
    let p = HestonJumpParams::default();
    let q = QuadratureSpec::default();
    let exact = lift(exact_report(
        &p,
        0.0,
        0.0,
        p.z0,
        0.25,
        &[0.0],
        &q,
        &CfSettings::default(),
    ))?
    .remove(0);
    let ca = lift(heston_approx(2, 0.25))?;
    let approx = lift(price(&ca, PayoffTransform::call(0.0), &[0.0, p.z0], &q))?;
    let s = lift(implied_vol(exact.price(), 0.0, 0.0, 0.25))?;
    let sb = lift(implied_vol(approx.price(), 0.0, 0.0, 0.25))?;
    ensure(
        (s - 0.2028).abs() <= 2e-4 && (sb - 0.2025).abs() <= 5e-4,
        || format!("σ = {s:.5}, σ̄₂ = {sb:.5}"),
    )?;
    Ok(format!("σ = {s:.4}, σ̄₂ = {sb:.4}"))
}

const CHECKS: &[(&str, Check)] = &[
    ("jets/leibniz", jets_leibniz),
    ("jets/algebra", jets_algebra),
    ("expansion/mhat-commute", mhat_commute),
    ("expansion/vanish-at-origin", vanishing_at_origin),
    ("model/hermite-gram", hermite_orthonormal),
    ("model/reconstruction", polynomial_reconstruction),
    ("pricer/zeroth-order", zeroth_order_exactness),
    ("pricer/contour-invariance", contour_invariance),
    ("oracle/identities", oracle_identities),
    ("oracle/riccati", oracle_riccati),
    ("oracle/greeks-fd", greeks_finite_differences),
    ("pricer/reference-smile", reference_smile_point),
];

/// Runs every invariant check and collects the outcomes.
pub fn run_selftest(opts: &SelftestOptions) -> SelftestReport {
    let checks = CHECKS
        .iter()
        .map(|(name, check)| {
            let start = Instant::now();
            let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| check(opts)));
            let (passed, detail) = match outcome {
                Ok(Ok(d)) => (true, d),
                Ok(Err(d)) => (false, d),
                Err(_) => (false, "panicked".to_string()),
            };
            CheckOutcome {
                name,
                passed,
                detail,
                elapsed: start.elapsed(),
            }
        })
        .collect();
    SelftestReport { checks }
}
