use num_complex::Complex64;

/// Errors shared across the crate.
///
/// Numerical failures carry enough state to diagnose them (best iterate,
/// residual) rather than just a message.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// A symbol failed validation (one-sided, zero extremal coefficient, ...).
    #[error("invalid symbol: {0}")]
    Symbol(String),

    /// An argument is outside an operation's domain (z = 0, empty interval, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A polynomial collapsed below degree 1 after coefficient stripping.
    #[error("degenerate polynomial: degree {degree} after stripping")]
    DegeneratePolynomial { degree: usize },

    /// The simultaneous root iteration stalled above the residual target.
    /// `best` holds the last iterate so callers can inspect how close it got.
    #[error("root iteration did not converge: residual {residual:.3e} after {iterations} iterations")]
    RootConvergence {
        iterations: usize,
        residual: f64,
        best: Vec<Complex64>,
    },

    /// An operation needed more roots than the polynomial has.
    #[error("need at least {needed} roots, got {got}")]
    RootArity { needed: usize, got: usize },

    /// A membership test could not be decided because the solve at `lambda` failed.
    #[error("membership test failed at lambda = {lambda}: {source}")]
    Membership {
        lambda: Complex64,
        #[source]
        source: Box<Error>,
    },

    /// A coordinate fell outside the fixed-point frame's safe integer range.
    #[error("coordinate ({x}, {y}) overflows the fixed-point frame")]
    FrameOverflow { x: f64, y: f64 },

    /// A ring or point list is too small or otherwise unusable.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A configuration value is out of range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Malformed input data (JSON schema violations, duplicate exponents, ...).
    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
