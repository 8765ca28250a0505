use thiserror::Error;

/// Errors raised by the implicitization pipeline.
///
/// Variants fall into two groups: input errors (malformed polynomials,
/// unusable polytopes, bad job files) and mathematical failures (the
/// Euler-characteristic search never terminates, the minors have a constant
/// gcd, ...). The CLI maps them to distinct exit codes via [`Error::is_input_error`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("non-integer exponent at position {pos}")]
    NonIntegerExponent { pos: usize },

    #[error("all input polynomials are zero")]
    AllZero,

    #[error("degenerate polytope (dimension {dim}); a two-dimensional polytope is required")]
    DegeneratePolytope { dim: usize },

    #[error("exponent ({0}, {1}) lies outside the scaled polytope d*Q")]
    NotContained(i64, i64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("toric ideal configuration has {points} lattice points, above the cap of {cap}")]
    CapExceeded { points: usize, cap: usize },

    #[error("Koszul index p = {0} out of range 1..=3")]
    KoszulIndex(usize),

    #[error("Euler characteristic did not vanish for nu <= {cap}")]
    NuCapExceeded { cap: usize, table: String },

    #[error("representation matrix has no columns (degenerate parametrization)")]
    NoColumns,

    #[error("representation matrix is not generically of full row rank ({rank} < {rows})")]
    RankDeficient { rank: usize, rows: usize },

    #[error("gcd of maximal minors is constant; the matrix does not represent a surface")]
    ConstantGcd,

    #[error("interpolation failed: {0}")]
    Interpolation(String),

    #[error("retry budget exhausted: {0}")]
    RetriesExhausted(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by malformed or unusable input, as opposed to
    /// mathematical failures of the pipeline.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::NonIntegerExponent { .. }
                | Error::AllZero
                | Error::DegeneratePolytope { .. }
                | Error::NotContained(..)
                | Error::Dimension(_)
                | Error::CapExceeded { .. }
                | Error::KoszulIndex(_)
                | Error::Input(_)
                | Error::Io(_)
                | Error::Json(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
