//! Configuration, table commands and the self-test behind the `levyx` binary.

mod commands;
mod config;
mod selftest;
mod table;

pub use commands::{cmd_greeks_table, cmd_iv_table, cmd_price, cmd_smile};
pub use config::{
    ExactCf, HermiteConfig, ModelConfig, QuadratureConfig, RunConfig, Scheme, SmileConfig,
};
pub use selftest::{run_selftest, CheckOutcome, SelftestOptions, SelftestReport};
pub use table::{sig6, Table};
