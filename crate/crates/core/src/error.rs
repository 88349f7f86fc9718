use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("grid too coarse: need at least {required} nodes, got {actual}")]
    GridTooCoarse { required: usize, actual: usize },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// One of the nondegeneracy conditions fails, so the linear problem has
    /// no unique integral solution.
    #[error("degenerate problem: {0}")]
    Degenerate(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("no Lipschitz constant supplied and estimation is disabled")]
    MissingLipschitz,

    #[error("right-hand side is not finite at node {index} (t = {t}, x = {x})")]
    NonFiniteRhs { index: usize, t: f64, x: f64 },

    #[error("not applicable: {0}")]
    NotApplicable(String),
}
