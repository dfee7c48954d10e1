//! A model assembled from SDE data: CEV-style volatility with a
//! time-dependent jump intensity, expanded around a moving point.

use std::sync::Arc;

use levy_expansion::expansion::{CharApprox, SimplexSpec};
use levy_expansion::jets::MultiIndex;
use levy_expansion::model::{
    expand_time_taylor, gaussian_levy_family, generator_from_sde, martingale_drift, Field,
    KernelTerm,
};
use levy_expansion::pricer::{implied_vol, price, PayoffTransform, QuadratureSpec};

fn main() -> levy_expansion::Result<()> {
    // σ²(x) = 0.04 e^{−0.6 x}; derivatives are known in closed form
    let (v, beta) = (0.04, -0.6);
    let s2 = Field::from_fns(
        1,
        true,
        move |_, x| v * (beta * x[0]).exp(),
        move |_, x, b: &MultiIndex| Some(v * beta.powi(b.get(0) as i32) * (beta * x[0]).exp()),
    );
    let intensity = Field::constant(1, 1.0).time_scaled(|t| 0.5 + t);
    let kernel = vec![KernelTerm::new(
        intensity,
        gaussian_levy_family(1, 0, 1.0, -0.08, 0.12)?,
    )];
    let mu = martingale_drift(&s2, &kernel, &Field::zero(1), 0)?;
    let model = generator_from_sde(vec![mu], vec![vec![s2]], Field::zero(1), kernel)?;

    let (x, tau) = (0.0, 0.5);
    let em = expand_time_taylor(&model, 2, Arc::new(move |_| vec![x]))?;
    let ca = CharApprox::new(&em, 0.0, tau, SimplexSpec::default())?;
    for k in [-0.2, 0.0, 0.2] {
        let r = price(
            &ca,
            PayoffTransform::call(k),
            &[x],
            &QuadratureSpec::default(),
        )?;
        println!(
            "k = {k:+.1}: ū₀ = {:.6}  ū₂ = {:.6}  σ̄₂ = {:.4}",
            r.price_through(0),
            r.price(),
            implied_vol(r.price(), x, k, tau)?
        );
    }
    Ok(())
}
