use jetlie_kernel::KernelError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("invalid name `{0}`: names are identifiers without `_`")]
    BadName(String),
    #[error("jet order {found} exceeds {limit}")]
    OrderExceeded { found: u32, limit: u32 },
    #[error("`{0}` is not a base coordinate of space `{1}`")]
    NotBaseCoordinate(String, String),
    #[error("coefficient of field `{0}` depends on jet coordinate `{1}`")]
    JetInCoefficient(String, String),
    #[error("field `{0}` has a zero-order part and cannot be prolonged")]
    MultiplierNotProlongable(String),
    #[error("fields live on different spaces: `{0}` and `{1}`")]
    SpaceMismatch(String, String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("inconsistent table entry for [{0}, {1}]")]
    InconsistentTable(String, String),
    #[error("singular Jacobian in transformation `{0}`")]
    SingularJacobian(String),
    #[error("no derivative map for `{0}`")]
    MissingDerivativeMap(String),
    #[error("transformation `{0}` is not the identity at parameter 0 (coordinate `{1}`)")]
    NotIdentityAtZero(String, String),
    #[error("solved form of `{0}` does not satisfy equation {1}")]
    InconsistentSolvedForm(String, usize),
    #[error("cannot solve equation {0} for `{1}`")]
    NotSolvable(usize, String),
    #[error("solved leading derivative `{0}` remains in a residual")]
    LeadingDerivativeRemains(String),
    #[error("no nonsingular point found after retries")]
    DegeneratePoint,
    #[error("rank differs between seeds: {0} vs {1}")]
    RankUnstable(usize, usize),
    #[error("symbolic zero contradicted by evaluation for `{0}`")]
    CrossCheckFailed(String),
    #[error("unknown catalog key `{0}`")]
    UnknownKey(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
}
