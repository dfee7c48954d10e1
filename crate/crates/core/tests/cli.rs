use std::process::Command;

use levy_expansion::cli::{cmd_greeks_table, cmd_iv_table, cmd_price, ModelConfig, RunConfig};
use levy_expansion::pricer::bs_price;

fn levyx() -> Command {
    Command::new(env!("CARGO_BIN_EXE_levyx"))
}

#[test]
fn black_scholes_price_column() {
    let cfg = RunConfig {
        model: ModelConfig::BlackScholes {
            sigma: 0.2,
            x0: 0.0,
        },
        maturities: vec![0.25],
        strike_offsets: vec![0.0],
        ..RunConfig::default()
    };
    let t = cmd_price(&cfg).unwrap();
    let price = t.column("price").unwrap()[0];
    assert!((price - bs_price(0.0, 0.0, 0.25, 0.2)).abs() < 1e-10);
    assert!((t.column("iv").unwrap()[0] - 0.2).abs() < 1e-7);
}

#[test]
fn heston_default_at_the_money_vol() {
    let cfg = RunConfig {
        maturities: vec![0.25],
        strike_offsets: vec![0.0],
        ..RunConfig::default()
    };
    let t = cmd_price(&cfg).unwrap();
    assert!((t.column("iv").unwrap()[0] - 0.2025).abs() < 5e-4);
}

#[test]
fn iv_table_reference_cells() {
    let cfg = RunConfig {
        maturities: vec![0.1, 1.0],
        ..RunConfig::default()
    };
    let t = cmd_iv_table(&cfg).unwrap();
    let row = |tau: f64, off: f64| {
        t.rows
            .iter()
            .find(|r| (r[0] - tau).abs() < 1e-12 && (r[1] - off).abs() < 1e-12)
            .unwrap()
            .clone()
    };
    let r = row(0.1, -0.2);
    assert!((r[2] - 0.2797).abs() < 2e-4 && (r[3] - 0.2795).abs() < 5e-4);
    assert!((row(1.0, 0.2)[4] - 0.0096).abs() < 5e-4);
}

#[test]
fn greeks_table_reference_cell() {
    let cfg = RunConfig {
        maturities: vec![0.25],
        spots: vec![0.0],
        ..RunConfig::default()
    };
    let t = cmd_greeks_table(&cfg).unwrap();
    assert!((t.column("delta_exact").unwrap()[0] - 0.5559).abs() < 5e-4);
    assert!((t.column("delta_bar").unwrap()[0] - 0.5552).abs() < 5e-4);
}

#[test]
fn csv_is_deterministic() {
    let cfg = RunConfig {
        maturities: vec![0.5],
        ..RunConfig::default()
    };
    assert_eq!(
        cmd_iv_table(&cfg).unwrap().to_csv(),
        cmd_iv_table(&cfg).unwrap().to_csv()
    );
}

#[test]
fn binary_exit_codes() {
    let dir = std::env::temp_dir().join(format!("levyx-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"model": {"name": "heston_jump", "rho": 2.0}}"#).unwrap();
    let out = levyx()
        .args(["price", "--config"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ρ"));

    let unknown = dir.join("unknown.json");
    std::fs::write(&unknown, r#"{"maturity": [1.0]}"#).unwrap();
    assert_eq!(
        levyx()
            .args(["price", "--config"])
            .arg(&unknown)
            .status()
            .unwrap()
            .code(),
        Some(1)
    );

    let csv = dir.join("out.csv");
    let ok = levyx()
        .args([
            "price",
            "--order",
            "1",
            "--scheme",
            "time-taylor",
            "--quad-nodes",
            "48",
            "--contour-im",
            "-1.75",
            "--out",
        ])
        .arg(&csv)
        .status()
        .unwrap();
    assert_eq!(ok.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.lines().any(|l| l.starts_with("T,k,u_0,u_1,price,iv")));

    assert_eq!(
        levyx()
            .args(["price", "--contour-im", "-0.5"])
            .status()
            .unwrap()
            .code(),
        Some(1)
    );
    assert_eq!(levyx().args(["bogus"]).status().unwrap().code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn selftest_fault_injection_fails() {
    let out = levyx()
        .args(["selftest", "--inject-branch-fault"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL oracle/riccati"));
}
