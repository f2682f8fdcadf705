use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("not a projection: {0}")]
    NotAProjection(String),
    #[error("matrix is not hermitian (‖M − M*‖ = {0:.3e})")]
    NotHermitian(f64),
    #[error("tolerance violated: {0}")]
    ToleranceViolated(String),
    #[error("projections are not pairwise orthogonal: {0}")]
    NotOrthogonal(String),
    #[error("generators {i} and {j} do not commute (‖[p,q]‖ = {norm:.3e})")]
    NotCommuting { i: usize, j: usize, norm: f64 },
    #[error("element does not lie in the context: {0}")]
    NotInContext(String),
    #[error("invalid density state: {0}")]
    InvalidState(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("inputs belong to different bases")]
    MixedBase,
    #[error("enumeration budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("document error: {0}")]
    Document(String),
}
