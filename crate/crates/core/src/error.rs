use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Operands of a jet or polynomial operation do not share structure.
    #[error("structural mismatch: {0}")]
    Structure(String),

    /// A ξ-derivative was requested from a jet whose order is already zero.
    #[error("jet order underflow: cannot differentiate a jet of order 0")]
    OrderUnderflow,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("missing derivative data: {0}")]
    MissingDerivative(String),

    /// The Fourier variable left the strip where the Lévy exponent is analytic.
    #[error(
        "analyticity strip violated: |Im ξ_{axis}| = {requested} exceeds strip half-width {strip}"
    )]
    Strip {
        axis: usize,
        requested: f64,
        strip: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature: {0}")]
    Quadrature(String),

    #[error("price {price} outside no-arbitrage bounds ({lower}, {upper})")]
    PriceOutOfBounds { price: f64, lower: f64, upper: f64 },

    /// Complex logarithm could not be continued without ambiguity.
    #[error("branch discontinuity in characteristic function: {0}")]
    Branch(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("configuration: {0}")]
    Config(String),
}

impl Error {
    /// Validation problems (bad input) as opposed to numerical breakdowns.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_)
                | Error::Config(_)
                | Error::Dimension { .. }
                | Error::Strip { .. }
                | Error::PriceOutOfBounds { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
