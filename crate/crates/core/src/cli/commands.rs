use rayon::prelude::*;

use super::config::RunConfig;
use super::table::Table;
use crate::error::{Error, Result};
use crate::oracle::CfSettings;
use crate::pricer::{
    fourier_price, implied_vol, CfSymbol, OptionKind, PayoffTransform, PriceReport, PriceRequest,
};

fn payoff(kind: OptionKind, k: f64) -> PayoffTransform {
    match kind {
        OptionKind::Call => PayoffTransform::call(k),
        OptionKind::Put => PayoffTransform::put(k),
    }
}

/// Implied volatility of a call or put price (puts via parity at zero rates).
/// Prices outside the no-arbitrage bounds map to NaN.
fn iv_cell(kind: OptionKind, price: f64, x: f64, k: f64, tau: f64) -> Result<f64> {
    let call = match kind {
        OptionKind::Call => price,
        OptionKind::Put => price + x.exp() - k.exp(),
    };
    match implied_vol(call, x, k, tau) {
        Ok(v) => Ok(v),
        Err(Error::PriceOutOfBounds { .. }) => Ok(f64::NAN),
        Err(e) => Err(e),
    }
}

fn header_meta(cfg: &RunConfig, command: &str) -> Vec<String> {
    let q = cfg.quadrature_spec();
    vec![
        format!("levyx {command}"),
        format!("config {}", cfg.to_json()),
        format!(
            "tolerances truncation_tol={:e} contour_im={} panel_nodes={} max_panel_width={} iv_residual=1e-10 imag_check=1e-8",
            q.truncation_tol, q.shift, q.panel_nodes, q.max_panel_width
        ),
        "nan marks prices outside no-arbitrage bounds".into(),
    ]
}

fn approx_reports(
    cfg: &RunConfig,
    state: &[f64],
    horizon: f64,
    strikes: &[f64],
    kind: OptionKind,
) -> Result<Vec<PriceReport>> {
    let ca = cfg.approximation(state, horizon)?;
    let reqs: Vec<PriceRequest> = strikes
        .iter()
        .map(|&k| PriceRequest {
            payoff: payoff(kind, k),
            x: state.to_vec(),
        })
        .collect();
    fourier_price(&ca, &reqs, &cfg.quadrature_spec())
}

fn exact_reports(
    cfg: &RunConfig,
    horizon: f64,
    requests: &[PriceRequest],
    cf: CfSettings,
) -> Result<Vec<PriceReport>> {
    let sym = CfSymbol::new(cfg.dim(), cfg.exact_cf(horizon, cf)?);
    fourier_price(&sym, requests, &cfg.quadrature_spec())
}

/// Per-order terms `u₀ … u_N`, `ū_N` and its implied volatility for every
/// maturity and strike offset, with the reference price where one exists.
pub fn cmd_price(cfg: &RunConfig) -> Result<Table> {
    cfg.validate()?;
    let x = cfg.spot();
    let state = cfg.state(x);
    let strikes: Vec<f64> = cfg.strike_offsets.iter().map(|o| x + o).collect();
    let has_exact = cfg
        .exact_cf(cfg.maturities[0], CfSettings::default())
        .is_ok();
    let mut header: Vec<String> = vec!["T".into(), "k".into()];
    header.extend((0..=cfg.order).map(|n| format!("u_{n}")));
    header.extend(["price".into(), "iv".into()]);
    if has_exact {
        header.extend(["price_exact".into(), "iv_exact".into()]);
    }
    let blocks: Vec<Vec<Vec<f64>>> = cfg
        .maturities
        .par_iter()
        .map(|&horizon| {
            let tau = horizon - cfg.t;
            let approx = approx_reports(cfg, &state, horizon, &strikes, cfg.payoff)?;
            let exact = if has_exact {
                let reqs: Vec<PriceRequest> = approx
                    .iter()
                    .map(|r| PriceRequest {
                        payoff: r.payoff,
                        x: state.clone(),
                    })
                    .collect();
                Some(exact_reports(cfg, horizon, &reqs, CfSettings::default())?)
            } else {
                None
            };
            let mut rows = Vec::new();
            for (i, (r, &k)) in approx.iter().zip(&strikes).enumerate() {
                let mut row = vec![horizon, k];
                row.extend(r.terms.iter().map(|t| t.value));
                row.push(r.price());
                row.push(iv_cell(cfg.payoff, r.price(), x, k, tau)?);
                if let Some(e) = &exact {
                    let p = e[i].price();
                    row.push(p);
                    row.push(iv_cell(cfg.payoff, p, x, k, tau)?);
                }
                rows.push(row);
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(&[]);
    table.header = header;
    table.meta = header_meta(cfg, "price");
    table.rows = blocks.into_iter().flatten().collect();
    Ok(table)
}

/// Reference and approximate implied volatilities over maturities and
/// strike offsets.
pub fn cmd_iv_table(cfg: &RunConfig) -> Result<Table> {
    cfg.validate()?;
    let x = cfg.spot();
    let state = cfg.state(x);
    let strikes: Vec<f64> = cfg.strike_offsets.iter().map(|o| x + o).collect();
    let blocks: Vec<Vec<Vec<f64>>> = cfg
        .maturities
        .par_iter()
        .map(|&horizon| {
            let tau = horizon - cfg.t;
            let approx = approx_reports(cfg, &state, horizon, &strikes, OptionKind::Call)?;
            let reqs: Vec<PriceRequest> = strikes
                .iter()
                .map(|&k| PriceRequest {
                    payoff: PayoffTransform::call(k),
                    x: state.clone(),
                })
                .collect();
            let exact = exact_reports(cfg, horizon, &reqs, CfSettings::default())?;
            let mut rows = Vec::new();
            for ((a, e), (&k, &off)) in approx
                .iter()
                .zip(&exact)
                .zip(strikes.iter().zip(&cfg.strike_offsets))
            {
                let s = iv_cell(OptionKind::Call, e.price(), x, k, tau)?;
                let sb = iv_cell(OptionKind::Call, a.price(), x, k, tau)?;
                rows.push(vec![horizon, off, s, sb, ((sb - s) / s).abs()]);
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(&["T", "k_minus_x", "sigma_exact", "sigma_bar", "rel_err"]);
    table.meta = header_meta(cfg, "iv-table");
    table.rows = blocks.into_iter().flatten().collect();
    Ok(table)
}

/// Reference and approximate Delta and Gamma over maturities and log-spots at
/// the fixed log-strike `greeks_strike`.
pub fn cmd_greeks_table(cfg: &RunConfig) -> Result<Table> {
    cfg.validate()?;
    let k = cfg.greeks_strike;
    let cells: Vec<(f64, f64)> = cfg
        .maturities
        .iter()
        .flat_map(|&h| cfg.spots.iter().map(move |&x| (h, x)))
        .collect();
    let rows: Vec<Vec<f64>> = cells
        .par_iter()
        .map(|&(horizon, x)| {
            let state = cfg.state(x);
            let a = approx_reports(cfg, &state, horizon, &[k], OptionKind::Call)?.remove(0);
            let req = PriceRequest {
                payoff: PayoffTransform::call(k),
                x: state.clone(),
            };
            let e = exact_reports(cfg, horizon, &[req], CfSettings::default())?.remove(0);
            let (d, db, g, gb) = (e.delta(), a.delta(), e.gamma(), a.gamma());
            Ok(vec![
                horizon,
                x,
                d,
                db,
                ((db - d) / d).abs(),
                g,
                gb,
                ((gb - g) / g).abs(),
            ])
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(&[
        "T",
        "x",
        "delta_exact",
        "delta_bar",
        "delta_rel_err",
        "gamma_exact",
        "gamma_bar",
        "gamma_rel_err",
    ]);
    table.meta = header_meta(cfg, "greeks-table");
    table.rows = rows;
    Ok(table)
}

/// Implied-volatility smiles `(k, σ, σ̄_N)` on a uniform log-strike grid for
/// each maturity. The reference column is NaN when no closed form exists.
pub fn cmd_smile(cfg: &RunConfig) -> Result<Table> {
    cfg.validate()?;
    let x = cfg.spot();
    let state = cfg.state(x);
    let sm = &cfg.smile;
    let strikes: Vec<f64> = (0..sm.points)
        .map(|j| x + sm.from + (sm.to - sm.from) * j as f64 / (sm.points - 1) as f64)
        .collect();
    let has_exact = cfg
        .exact_cf(cfg.maturities[0], CfSettings::default())
        .is_ok();
    let blocks: Vec<Vec<Vec<f64>>> = cfg
        .maturities
        .par_iter()
        .map(|&horizon| {
            let tau = horizon - cfg.t;
            let approx = approx_reports(cfg, &state, horizon, &strikes, OptionKind::Call)?;
            let exact = if has_exact {
                let reqs: Vec<PriceRequest> = strikes
                    .iter()
                    .map(|&k| PriceRequest {
                        payoff: PayoffTransform::call(k),
                        x: state.clone(),
                    })
                    .collect();
                Some(exact_reports(cfg, horizon, &reqs, CfSettings::default())?)
            } else {
                None
            };
            let mut rows = Vec::new();
            for (i, (a, &k)) in approx.iter().zip(&strikes).enumerate() {
                let s = match &exact {
                    Some(e) => iv_cell(OptionKind::Call, e[i].price(), x, k, tau)?,
                    None => f64::NAN,
                };
                rows.push(vec![
                    horizon,
                    k,
                    s,
                    iv_cell(OptionKind::Call, a.price(), x, k, tau)?,
                ]);
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(&["T", "k", "sigma_exact", "sigma_bar"]);
    table.meta = header_meta(cfg, "smile");
    table.rows = blocks.into_iter().flatten().collect();
    Ok(table)
}
