//! Truncated Taylor jets in the Fourier variable with polynomial-in-state
//! coefficients.
//!
//! The symbol engine represents every function of `ξ` it touches as a
//! [`Jet`] about the current quadrature node. Conjugated symbol operators
//! (`F(ξ) + x − i∂_ξ`) then reduce to multiplication, addition, and the
//! coefficient shift of [`Jet::diff`].

mod jet;
mod multi_index;
mod space;
mod xpoly;

pub use jet::{jet_diff, jet_from_partials, jet_mul, Jet};
pub use multi_index::MultiIndex;
pub use space::MonomialSpace;
pub use xpoly::{xpoly_diff, xpoly_eval, XPoly};
