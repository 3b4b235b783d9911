use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unsupported radical: {0}")]
    UnsupportedRadical(String),
    #[error("expression is not polynomial in the split variables {0}")]
    NotPolynomialInSplitVars(String),
    #[error("expression is singular at the sampled point")]
    SingularPoint,
    #[error("radical does not evaluate to a rational number")]
    IrrationalValue,
    #[error("no value for symbol {0}")]
    UnboundSymbol(String),
}
