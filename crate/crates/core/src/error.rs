use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The deformation parameter is unusable (q = 0, q = 1, non-finite, or |q| >= 1 where a
    /// convergent q-series is required).
    #[error("invalid q parameter: {0}")]
    InvalidQ(String),

    /// An argument lies outside the domain of the requested function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation at a pole.
    #[error("pole at s = {0}")]
    Pole(String),

    /// A series did not reach its tolerance within the configured term budget.
    #[error("truncation failure after {terms} terms (last tail bound {tail_bound:e})")]
    Truncation { terms: usize, tail_bound: f64 },

    /// Reciprocal of a power series with vanishing constant term.
    #[error("singular series: constant coefficient is zero")]
    SingularSeries,

    /// A recurrence whose leading coefficient vanishes (q a root of unity).
    #[error("singular recurrence at n = {0}")]
    SingularRecurrence(usize),

    /// Two independent evaluation routes disagreed beyond their tolerance.
    #[error("internal consistency fault in {what}: residual {residual:e} exceeds {tol:e}")]
    Consistency {
        what: String,
        residual: f64,
        tol: f64,
    },

    /// Invalid configuration value.
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
