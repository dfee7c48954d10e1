//! Implied-volatility smile of the stochastic-volatility model with
//! variance-driven jumps: closed form vs the second-order expansion.

use levy_expansion::expansion::{CharApprox, SimplexSpec};
use levy_expansion::model::{expand_taylor, heston_jump, HestonJumpParams};
use levy_expansion::oracle::{exact_report, CfSettings};
use levy_expansion::pricer::{
    fourier_price, implied_vol, PayoffTransform, PriceRequest, QuadratureSpec,
};

fn main() -> levy_expansion::Result<()> {
    let p = HestonJumpParams::default();
    let state = [p.x0, p.z0];
    let strikes: Vec<f64> = (0..9).map(|i| -0.2 + 0.05 * i as f64).collect();
    let quad = QuadratureSpec::default();

    for tau in [0.1, 0.25, 0.5, 1.0] {
        let em = expand_taylor(&heston_jump(&p)?, 2, &state)?;
        let ca = CharApprox::new(&em, 0.0, tau, SimplexSpec::default())?;
        let requests: Vec<PriceRequest> = strikes
            .iter()
            .map(|&k| PriceRequest {
                payoff: PayoffTransform::call(k),
                x: state.to_vec(),
            })
            .collect();
        let approx = fourier_price(&ca, &requests, &quad)?;
        let exact = exact_report(
            &p,
            0.0,
            p.x0,
            p.z0,
            tau,
            &strikes,
            &quad,
            &CfSettings::default(),
        )?;

        println!("T = {tau}");
        println!(
            "{:>7} {:>8} {:>8} {:>8}",
            "k - x", "exact", "order 0", "order 2"
        );
        for ((k, a), e) in strikes.iter().zip(&approx).zip(&exact) {
            println!(
                "{k:>7.2} {:>8.4} {:>8.4} {:>8.4}",
                implied_vol(e.price(), p.x0, *k, tau)?,
                implied_vol(a.price_through(0), p.x0, *k, tau)?,
                implied_vol(a.price(), p.x0, *k, tau)?
            );
        }
    }
    Ok(())
}
