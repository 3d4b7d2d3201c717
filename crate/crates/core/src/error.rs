use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max |A - A*| = {0:e})")]
    NotHermitian(f64),
    #[error("Jacobi sweeps did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("bad dimension: {0}")]
    BadDimension(String),
    #[error("k = {k} is outside 1..{n}")]
    BadK { k: usize, n: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("recipe {0} is not available here")]
    BadRecipe(String),
    #[error("operation requires n = 2k (got n = {n}, k = {k})")]
    RequiresN2k { n: usize, k: usize },
    #[error("linear map is not bijective (numeric rank {rank} < {dim})")]
    NotBijective { rank: usize, dim: usize },
    #[error("canonical form constraint violated: {0}")]
    FormConstraintViolated(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub(crate) fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k >= n {
        Err(Error::BadK { k, n })
    } else {
        Ok(())
    }
}
