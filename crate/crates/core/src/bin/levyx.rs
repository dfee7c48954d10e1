use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use levy_expansion::cli::{
    cmd_greeks_table, cmd_iv_table, cmd_price, cmd_smile, run_selftest, RunConfig, Scheme,
    SelftestOptions, Table,
};
use levy_expansion::Error;

#[derive(Parser)]
#[command(
    name = "levyx",
    version,
    about = "Expansion-based option prices, Greeks and implied vols"
)]
struct Cli {
    /// JSON run configuration (defaults are used when absent).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Expansion order N.
    #[arg(long, global = true)]
    order: Option<usize>,
    #[arg(long, global = true, value_enum)]
    scheme: Option<Scheme>,
    /// Write CSV here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Gauss–Legendre nodes per Fourier panel.
    #[arg(long, global = true)]
    quad_nodes: Option<usize>,
    /// Imaginary part of the Fourier contour.
    #[arg(long, global = true, allow_hyphen_values = true)]
    contour_im: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-order price terms, total price and implied vol.
    Price,
    /// Reference vs approximate implied volatilities.
    IvTable,
    /// Reference vs approximate Delta and Gamma.
    GreeksTable,
    /// Smile data for plotting.
    Smile,
    /// Runs the built-in invariant checks.
    Selftest {
        #[arg(long, hide = true)]
        inject_branch_fault: bool,
    },
}

fn load(cli: &Cli) -> levy_expansion::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(n) = cli.order {
        cfg.order = n;
    }
    if let Some(s) = cli.scheme {
        cfg.scheme = s;
    }
    if let Some(n) = cli.quad_nodes {
        cfg.quadrature.panel_nodes = n;
    }
    if let Some(v) = cli.contour_im {
        cfg.quadrature.contour_im = v;
    }
    if let Some(p) = &cli.out {
        cfg.out = Some(p.display().to_string());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(table: &Table, cfg: &RunConfig) -> levy_expansion::Result<()> {
    let csv = table.to_csv();
    match &cfg.out {
        Some(p) => {
            std::fs::write(p, csv).map_err(|e| Error::Config(format!("cannot write {p}: {e}")))
        }
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("levyx: {e}");
    if e.is_validation() {
        ExitCode::from(1)
    } else {
        ExitCode::from(2)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Command::Selftest {
        inject_branch_fault,
    } = cli.command
    {
        let report = run_selftest(&SelftestOptions {
            inject_branch_fault,
        });
        print!("{}", report.render());
        return if report.passed() {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(2)
        };
    }
    let cfg = match load(&cli) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let table = match cli.command {
        Command::Price => cmd_price(&cfg),
        Command::IvTable => cmd_iv_table(&cfg),
        Command::GreeksTable => cmd_greeks_table(&cfg),
        Command::Smile => cmd_smile(&cfg),
        Command::Selftest { .. } => unreachable!(),
    };
    match table.and_then(|t| emit(&t, &cfg)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
