//! One-dimensional local volatility with state-dependent jump intensity,
//! priced order by order under the three expansion schemes. Every coefficient
//! is affine in `x`, so all three schemes recover it exactly and agree.

use std::sync::Arc;

use levy_expansion::expansion::{CharApprox, SimplexSpec};
use levy_expansion::model::{
    expand_hermite, expand_taylor, expand_time_taylor, local_vol_jump, validate_model,
};
use levy_expansion::pricer::{implied_vol, price, PayoffTransform, QuadratureSpec};

fn main() -> levy_expansion::Result<()> {
    let model = local_vol_jump((0.04, 0.02), (1.0, 0.5), -0.05, 0.1)?;
    let (x, tau, k) = (0.0, 0.25, 0.0);
    let order = 3;

    let schemes = [
        ("taylor", expand_taylor(&model, order, &[x])?),
        (
            "time-taylor",
            expand_time_taylor(&model, order, Arc::new(move |_| vec![x]))?,
        ),
        (
            "hermite",
            expand_hermite(&model, order, &[x], &[0.04 * tau], order + 3)?,
        ),
    ];
    for (name, em) in &schemes {
        let diag = validate_model(em, tau, &[-1.5]);
        assert!(diag.passed(), "{name}: {diag:?}");
        let ca = CharApprox::new(em, 0.0, tau, SimplexSpec::default())?;
        let r = price(
            &ca,
            PayoffTransform::call(k),
            &[x],
            &QuadratureSpec::default(),
        )?;
        let terms: Vec<String> = r
            .terms
            .iter()
            .map(|t| format!("{:+.3e}", t.value))
            .collect();
        println!(
            "{name:>12}: u_n = [{}]  price {:.8}  iv {:.6}",
            terms.join(", "),
            r.price(),
            implied_vol(r.price(), x, k, tau)?
        );
    }
    Ok(())
}
