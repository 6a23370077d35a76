use thiserror::Error;

/// Errors surfaced by solvers, root finders and mesh construction.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("degenerate triangle at index {index} (area {area:.3e})")]
    DegenerateTriangle { index: usize, area: f64 },

    #[error("no sign change found for {what} in ({lo}, {hi})")]
    RootBracketing { what: String, lo: f64, hi: f64 },

    #[error("c = {c} lies within the guard band of eigenvalue {eigenvalue}")]
    NearEigenvalue { c: f64, eigenvalue: f64 },

    #[error("singular factorization: pivot {index} is {pivot:.3e}")]
    SingularFactorization { index: usize, pivot: f64 },

    #[error("{what} failed to converge (residual {residual:.3e})")]
    ConvergenceFailure { what: String, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn require_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be finite, got {x}")))
    }
}
