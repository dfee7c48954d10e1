//! The Fourier-side terms P̂ₙ(ξ) on their own: how the partial sums approach
//! the closed-form characteristic function as the order grows.

use levy_expansion::expansion::{CharApprox, SimplexSpec};
use levy_expansion::model::{expand_taylor, heston_jump, HestonJumpParams};
use levy_expansion::oracle::heston_jump_cf;
use levy_expansion::Complex64;

fn main() -> levy_expansion::Result<()> {
    let p = HestonJumpParams::default();
    let tau = 0.25;
    let em = expand_taylor(&heston_jump(&p)?, 4, &[p.x0, p.z0])?;
    let ca = CharApprox::new(&em, 0.0, tau, SimplexSpec::default())?;
    println!("time nodes in plan: {}", ca.time_nodes());

    // a state away from the expansion point so the corrections matter
    let state = [0.0, 0.06];
    for xi_r in [0.5, 2.0, 8.0] {
        let xi = Complex64::new(xi_r, -1.5);
        let exact = heston_jump_cf(&p, 0.0, state[0], state[1], tau, xi)?;
        let terms = ca.terms(&[xi, Complex64::new(0.0, 0.0)])?;
        print!("ξ = {xi:.2}: ");
        for n in 0..=4 {
            let err = (terms.sum_through(n, &state) - exact).norm() / exact.norm();
            print!(" N={n} {err:.2e}");
        }
        println!();
    }
    Ok(())
}
