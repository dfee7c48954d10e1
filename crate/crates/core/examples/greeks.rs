//! Delta and Gamma from the expansion, checked against the closed form and a
//! finite-difference bump of the expansion price.

use levy_expansion::expansion::{CharApprox, SimplexSpec};
use levy_expansion::model::{expand_taylor, heston_jump, HestonJumpParams};
use levy_expansion::oracle::{exact_delta, exact_gamma};
use levy_expansion::pricer::{price, PayoffTransform, QuadratureSpec};

fn main() -> levy_expansion::Result<()> {
    let p = HestonJumpParams::default();
    let (tau, k, h) = (0.5, 0.0, 1e-3);
    let model = heston_jump(&p)?;
    let quad = QuadratureSpec::default();

    println!(
        "{:>6} {:>9} {:>9} {:>9} {:>9} {:>9}",
        "x", "Δ exact", "Δ̄₂", "Γ exact", "Γ̄₂", "Γ̄₂ bump"
    );
    for x in [-0.1, 0.0, 0.1] {
        let em = expand_taylor(&model, 2, &[x, p.z0])?;
        let ca = CharApprox::new(&em, 0.0, tau, SimplexSpec::default())?;
        let at = |s: f64| price(&ca, PayoffTransform::call(k), &[s, p.z0], &quad);
        let (lo, mid, hi) = (at(x - h)?, at(x)?, at(x + h)?);
        let ux = (hi.price() - lo.price()) / (2.0 * h);
        let uxx = (hi.price() - 2.0 * mid.price() + lo.price()) / (h * h);
        let bump = (-2.0 * x).exp() * (uxx - ux);
        println!(
            "{x:>6.2} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {bump:>9.4}",
            exact_delta(&p, 0.0, x, tau, k)?,
            mid.delta(),
            exact_gamma(&p, 0.0, x, tau, k)?,
            mid.gamma()
        );
    }
    Ok(())
}
