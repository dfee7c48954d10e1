//! Constant coefficients: the zeroth-order term is already exact, and the
//! inverted price reproduces the input volatility.

use levy_expansion::expansion::{CharApprox, SimplexSpec};
use levy_expansion::model::{black_scholes, expand_taylor};
use levy_expansion::pricer::{bs_price, implied_vol, price, PayoffTransform, QuadratureSpec};

fn main() -> levy_expansion::Result<()> {
    let (sigma, tau, x) = (0.2, 0.25, 0.0);
    let em = expand_taylor(&black_scholes(sigma)?, 3, &[x])?;
    let ca = CharApprox::new(&em, 0.0, tau, SimplexSpec::default())?;

    println!(
        "{:>6} {:>14} {:>14} {:>10} {:>10}",
        "k", "fourier", "closed form", "|u1..u3|", "iv"
    );
    for k in [-0.2, -0.1, 0.0, 0.1, 0.2] {
        let r = price(
            &ca,
            PayoffTransform::call(k),
            &[x],
            &QuadratureSpec::default(),
        )?;
        let higher: f64 = r.terms[1..].iter().map(|t| t.value.abs()).sum();
        let iv = implied_vol(r.price(), x, k, tau)?;
        println!(
            "{k:>6.2} {:>14.10} {:>14.10} {higher:>10.1e} {iv:>10.6}",
            r.price(),
            bs_price(x, k, tau, sigma)
        );
    }
    Ok(())
}
