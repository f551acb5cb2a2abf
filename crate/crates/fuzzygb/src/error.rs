use thiserror::Error;

/// Errors raised by matrix construction, the eigensolver and the surface
/// builders. The CLI maps `Config`/`Domain` to exit code 2 and everything
/// else to exit code 3.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}x{0} vs {1}x{1}")]
    ShapeMismatch(usize, usize),

    #[error("non-finite entry at ({row},{col})")]
    NonFinite { row: usize, col: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("not hermitian: asymmetry {asymmetry:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { asymmetry: f64, tol: f64 },

    #[error("eigensolver failed to converge after {iterations} QL iterations")]
    EigenNoConvergence { iterations: usize },

    #[error("not positive semidefinite: eigenvalue {eigenvalue:.6e} below -{tol:.3e}")]
    NotPsd { eigenvalue: f64, tol: f64 },

    #[error("gamma factor singular: min eigenvalue {min_eigenvalue:.6e} not above {tol:.3e}")]
    SingularGamma { min_eigenvalue: f64, tol: f64 },

    #[error("not diagonal: off-diagonal magnitude {magnitude:.3e} exceeds {tol:.3e}")]
    NotDiagonal { magnitude: f64, tol: f64 },

    #[error("inadmissible representation: w_{index}^2 = {value:.6e} is negative")]
    Inadmissible { index: usize, value: f64 },

    #[error("closure violated: |w_N^2| = {value:.6e} exceeds {tol:.3e}")]
    ClosureViolated { value: f64, tol: f64 },

    #[error("commutation residual {residual:.3e} exceeds {tol:.3e}")]
    CommutationResidual { residual: f64, tol: f64 },

    #[error("embedding carries no normal vectors")]
    MissingNormals,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by bad user input rather than numerics.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Domain(_))
    }
}
