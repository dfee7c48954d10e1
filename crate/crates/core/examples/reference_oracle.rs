//! The closed-form characteristic function against its Riccati ODE, and the
//! branch guard catching a logarithm placed on the wrong sheet.

use levy_expansion::oracle::{
    heston_jump_cf_with, heston_jump_riccati_cf, CfSettings, HestonJumpParams,
};
use levy_expansion::Complex64;

fn main() -> levy_expansion::Result<()> {
    let p = HestonJumpParams::default();
    let clean = CfSettings::default();
    let faulty = CfSettings {
        inject_branch_fault: true,
        ..clean
    };
    for (xi, tau) in [
        (Complex64::new(1.0, -1.5), 0.25),
        (Complex64::new(12.0, -1.5), 2.0),
    ] {
        let ode = heston_jump_riccati_cf(&p, 0.0, 0.0, p.z0, tau, xi, 1e-12)?;
        let good = heston_jump_cf_with(&p, 0.0, 0.0, p.z0, tau, xi, &clean)?;
        let bad = heston_jump_cf_with(&p, 0.0, 0.0, p.z0, tau, xi, &faulty)?;
        println!(
            "ξ = {xi}, τ = {tau}: |closed − ode| = {:.1e}, with branch fault = {:.1e}",
            (good - ode).norm() / ode.norm(),
            (bad - ode).norm() / ode.norm()
        );
    }
    Ok(())
}
