use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library reports. Display strings start with the
/// variant name so command-line diagnostics are greppable.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("SyntaxError at position {position}: expected {}", expected.join(" | "))]
    Syntax {
        position: usize,
        expected: Vec<String>,
    },

    #[error("UnknownIdentifier `{name}` at position {position}")]
    UnknownIdentifier { name: String, position: usize },

    #[error("DomainError: {0}")]
    Domain(String),

    #[error("InvalidLambda: lambda = {0} must lie in (0, pi/2)")]
    InvalidLambda(f64),

    #[error("InvalidProblem: {0}")]
    InvalidProblem(String),

    #[error("NearResonanceError: eps = {eps} gives theta = {theta}, within {distance:.3e} of {nearest_m}*pi (lambda = {lambda})")]
    NearResonance {
        eps: f64,
        theta: f64,
        nearest_m: u64,
        distance: f64,
        lambda: f64,
    },

    #[error("BudgetExceeded: {required} panels required, cap is {cap}")]
    BudgetExceeded { required: f64, cap: u64 },

    #[error("SingularSystem: zero pivot in row {row}")]
    SingularSystem { row: usize },

    #[error("DegenerateFit: {0}")]
    DegenerateFit(String),

    #[error("InvalidArgument: {0}")]
    InvalidArgument(String),
}
