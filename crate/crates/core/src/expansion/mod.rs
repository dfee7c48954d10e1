//! The symbol engine: `Φ₀`, the conjugated operators `M̂` and `Ĝ_j`, and the
//! characteristic-function terms `P̂_n` of an expanded model.

mod engine;
mod index_sets;
mod plan;

pub use engine::{mhat_apply, CharApprox, SymbolTerms};
pub use index_sets::index_sets;
pub use plan::SimplexSpec;
