//! Randomised invariant suites, runnable from `#[test]`s and from the
//! acceptance harness alike.

use levy_expansion::expansion::{mhat_apply, CharApprox, SimplexSpec};
use levy_expansion::jets::{Jet, MonomialSpace, MultiIndex, XPoly};
use levy_expansion::model::{
    expand_hermite, expand_taylor, hermite_gram, heston_jump, Field, HestonJumpParams, ModelSpec,
};
use levy_expansion::pricer::{price, PayoffTransform, QuadratureSpec};
use levy_expansion::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn cplx() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| Complex64::new(a, b))
}

const ORDER: usize = 3;

/// Random jet of order 3 in two ξ-variables whose coefficients are
/// polynomials of degree ≤ 1 in x.
fn jet() -> impl Strategy<Value = Jet> {
    (
        prop::collection::vec(cplx(), 10),
        prop::collection::vec(cplx(), 10),
        prop::collection::vec(cplx(), 10),
    )
        .prop_map(|(c0, c1, c2)| {
            let space = MonomialSpace::shared(2, ORDER);
            let base = [Complex64::new(0.4, -1.5), Complex64::new(-0.3, 0.0)];
            let x0 = XPoly::variable(space.clone(), 0);
            let x1 = XPoly::variable(space.clone(), 1);
            let a = Jet::from_taylor_coeffs(space.clone(), ORDER, &base, &c0);
            let b = Jet::from_taylor_coeffs(space.clone(), ORDER, &base, &c1)
                .mul_xpoly(&x0)
                .unwrap();
            let d = Jet::from_taylor_coeffs(space, ORDER, &base, &c2)
                .mul_xpoly(&x1)
                .unwrap();
            a.add(&b).unwrap().add(&d).unwrap()
        })
}

fn tol(ok: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(cases)
        .run(&strategy, test)
        .map_err(|e| e.to_string())
}

pub fn jet_leibniz() -> Result<(), String> {
    run(64, (jet(), jet(), 0..2usize), |(f, g, i)| {
        let lhs = f.mul(&g).unwrap().diff(i).unwrap();
        let rhs = f
            .diff(i)
            .unwrap()
            .mul(&g.truncate(ORDER - 1))
            .unwrap()
            .add(&f.truncate(ORDER - 1).mul(&g.diff(i).unwrap()).unwrap())
            .unwrap();
        let d = lhs.max_abs_diff(&rhs);
        tol(d < 1e-12, || format!("Leibniz defect {d:e}"))
    })
}

pub fn jet_ring_laws() -> Result<(), String> {
    run(64, (jet(), jet(), jet()), |(f, g, h)| {
        let comm = f.mul(&g).unwrap().max_abs_diff(&g.mul(&f).unwrap());
        let assoc = f
            .mul(&g)
            .unwrap()
            .mul(&h)
            .unwrap()
            .max_abs_diff(&f.mul(&g.mul(&h).unwrap()).unwrap());
        let dist = f
            .mul(&g.add(&h).unwrap())
            .unwrap()
            .max_abs_diff(&f.mul(&g).unwrap().add(&f.mul(&h).unwrap()).unwrap());
        tol(comm < 1e-12 && assoc < 1e-12 && dist < 1e-12, || {
            format!("commutativity {comm:e}, associativity {assoc:e}, distributivity {dist:e}")
        })
    })
}

fn heston_params() -> impl Strategy<Value = HestonJumpParams> {
    (
        0.5..3.0f64,
        0.02..0.1f64,
        0.1..0.5f64,
        -0.9..0.9f64,
        0.0..3.0f64,
        -0.2..0.1f64,
        0.05..0.3f64,
    )
        .prop_map(
            |(kappa, theta, delta, rho, intensity, jump_mean, jump_std)| HestonJumpParams {
                kappa,
                theta,
                delta,
                rho,
                intensity,
                jump_mean,
                jump_std,
                x0: 0.0,
                z0: theta,
            },
        )
}

fn approx(p: &HestonJumpParams, order: usize, tau: f64) -> CharApprox {
    let em = expand_taylor(&heston_jump(p).unwrap(), order, &[p.x0, p.z0]).unwrap();
    CharApprox::new(&em, 0.0, tau, SimplexSpec::default()).unwrap()
}

pub fn mhat_commutes() -> Result<(), String> {
    let strat = (
        heston_params(),
        -5.0..5.0f64,
        -2.0..0.0f64,
        0.05..1.0f64,
        0.0..1.0f64,
        prop::collection::vec(cplx(), 10),
    );
    run(24, strat, |(p, xr, xi_im, tau, frac, coeffs)| {
        let ca = approx(&p, ORDER, tau);
        let xi = [Complex64::new(xr, xi_im), Complex64::new(0.0, 0.0)];
        let fvec = ca.f_vector(&xi, frac * tau, ORDER).unwrap();
        let f = Jet::from_taylor_coeffs(fvec[0].space().clone(), ORDER, &xi, &coeffs);
        let f_low: Vec<Jet> = fvec.iter().map(|j| j.truncate(ORDER - 2)).collect();
        let ab = mhat_apply(0, &mhat_apply(1, &f, &fvec).unwrap(), &f_low).unwrap();
        let ba = mhat_apply(1, &mhat_apply(0, &f, &fvec).unwrap(), &f_low).unwrap();
        let scale = 1.0 + ab.max_abs_diff(&Jet::zero(f.space().clone(), 0, &xi));
        let d = ab.max_abs_diff(&ba) / scale;
        tol(d < 1e-12, || format!("[M̂₀, M̂₁] defect {d:e}"))
    })
}

pub fn symbols_vanish_at_origin() -> Result<(), String> {
    let strat = (heston_params(), 0.05..1.0f64, -0.3..0.3f64, 0.5..2.0f64);
    run(24, strat, |(p, tau, x, zf)| {
        let ca = approx(&p, 3, tau);
        let zero = Complex64::new(0.0, 0.0);
        let t = ca.terms(&[zero, zero]).unwrap();
        let worst = (1..=3)
            .map(|n| t.phat(n, &[x, p.z0 * zf]).norm())
            .fold(0.0, f64::max);
        tol(worst < 1e-12, || format!("|P̂ₙ(0)| = {worst:e}"))
    })
}

pub fn contour_invariance() -> Result<(), String> {
    let strat = (heston_params(), 0.1..1.0f64, -0.2..0.2f64);
    run(12, strat, |(p, tau, k)| {
        let ca = approx(&p, 2, tau);
        let at = |shift: f64| {
            let q = QuadratureSpec {
                shift,
                ..QuadratureSpec::default()
            };
            price(&ca, PayoffTransform::call(k), &[0.0, p.z0], &q)
                .unwrap()
                .price()
        };
        let (a, b) = (at(-1.25), at(-2.0));
        tol((a - b).abs() < 1e-8, || {
            format!("contours disagree: {a} vs {b}")
        })
    })
}

pub fn greeks_match_finite_differences() -> Result<(), String> {
    let strat = (heston_params(), 0.1..1.0f64, -0.15..0.15f64);
    run(12, strat, |(p, tau, x)| {
        let ca = approx(&p, 2, tau);
        let h = 1e-4;
        let q = QuadratureSpec::default();
        let at = |s: f64| price(&ca, PayoffTransform::call(0.0), &[s, p.z0], &q).unwrap();
        let (lo, mid, hi) = (at(x - h), at(x), at(x + h));
        let (spot, up, dn) = (x.exp(), (x + h).exp(), (x - h).exp());
        // finite differences in the spot S = eˣ on the non-uniform grid it induces
        let fd_delta = (hi.price() - lo.price()) / (up - dn);
        let d_up = (hi.price() - mid.price()) / (up - spot);
        let d_dn = (mid.price() - lo.price()) / (spot - dn);
        let fd_gamma = 2.0 * (d_up - d_dn) / (up - dn);
        let (ed, eg) = (
            (mid.delta() - fd_delta).abs(),
            (mid.gamma() - fd_gamma).abs(),
        );
        tol(ed < 1e-5 && eg < 1e-3, || {
            format!("Δ gap {ed:e}, Γ gap {eg:e}")
        })
    })
}

pub fn hermite_gram_is_identity() -> Result<(), String> {
    let strat = (
        1..=2usize,
        0..=3usize,
        -0.5..0.5f64,
        0.1..0.3f64,
        1e-4..0.1f64,
        1e-4..0.1f64,
    );
    run(32, strat, |(dim, deg, c0, c1, v0, v1)| {
        let center = [c0, c1];
        let var = [v0, v1];
        let g = hermite_gram(dim, deg, &center[..dim], &var[..dim], deg + 2).unwrap();
        let mut worst: f64 = 0.0;
        for (i, row) in g.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                worst = worst.max((v - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
        tol(worst < 1e-10, || format!("Gram defect {worst:e}"))
    })
}

pub fn polynomial_reconstruction() -> Result<(), String> {
    let strat = (
        1..=3usize,
        prop::collection::vec(-1.0..1.0f64, 4),
        -0.5..0.5f64,
        1e-3..0.2f64,
        prop::collection::vec(-1.0..1.0f64, 3),
    );
    run(32, strat, |(order, coeffs, center, var, probes)| {
        let terms: Vec<(MultiIndex, f64)> = (0..=order)
            .map(|k| (MultiIndex::new(vec![k as u32]), coeffs[k]))
            .collect();
        let a2 = MultiIndex::new(vec![2]);
        let model =
            ModelSpec::new(1, vec![(a2.clone(), Field::polynomial(1, terms))], vec![]).unwrap();
        let taylor = expand_taylor(&model, order, &[center]).unwrap();
        let hermite = expand_hermite(&model, order, &[center], &[var], order + 2).unwrap();
        let mut worst: f64 = 0.0;
        for em in [&taylor, &hermite] {
            for &x in &probes {
                let sum: Complex64 = (0..=order)
                    .map(|n| em.coefficient(n, &a2, 0.0).unwrap().eval(&[x]))
                    .sum();
                worst = worst.max((sum - model.coefficient(&a2).value(0.0, &[x])).norm());
            }
        }
        tol(worst < 1e-10, || format!("reconstruction defect {worst:e}"))
    })
}

pub fn conjugate_symmetry() -> Result<(), String> {
    let strat = (
        heston_params(),
        0.05..1.0f64,
        0.0..10.0f64,
        -0.2..0.2f64,
        0.5..2.0f64,
    );
    run(24, strat, |(p, tau, xr, x, zf)| {
        let ca = approx(&p, 3, tau);
        let zero = Complex64::new(0.0, 0.0);
        let plus = ca.terms(&[Complex64::new(xr, 0.0), zero]).unwrap();
        let minus = ca.terms(&[Complex64::new(-xr, 0.0), zero]).unwrap();
        let s = [x, p.z0 * zf];
        let worst = (0..=3)
            .map(|n| (plus.phat(n, &s) - minus.phat(n, &s).conj()).norm())
            .fold(0.0, f64::max);
        tol(worst < 1e-12, || {
            format!("conjugate symmetry defect {worst:e}")
        })
    })
}

pub type Suite = (&'static str, fn() -> Result<(), String>);

pub const SUITES: &[Suite] = &[
    ("jet Leibniz rule", jet_leibniz),
    ("jet commutativity/associativity", jet_ring_laws),
    ("M̂ component commutativity", mhat_commutes),
    ("P̂ₙ(ξ=0) = 0 for n ≥ 1", symbols_vanish_at_origin),
    ("contour invariance", contour_invariance),
    (
        "Greeks vs finite differences",
        greeks_match_finite_differences,
    ),
    ("Hermite Gram matrix = identity", hermite_gram_is_identity),
    (
        "Taylor/Hermite polynomial reconstruction",
        polynomial_reconstruction,
    ),
    ("conjugate symmetry on the real axis", conjugate_symmetry),
];
