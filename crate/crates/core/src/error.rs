use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("structures need at least one linear order (p > 0)")]
    ZeroArity,
    #[error("expected {expected} linear orders, found {found}")]
    WrongOrderCount { expected: usize, found: usize },
    #[error("element {element} is outside the ground set of size {size}")]
    ElementOutOfRange { element: usize, size: usize },
    #[error("partial order contains the reflexive pair ({0}, {0})")]
    ReflexivePair(usize),
    #[error("partial order has a cycle through {0}")]
    Cycle(usize),
    #[error("partial order is not transitively closed: ({0}, {1}) and ({1}, {2}) present but ({0}, {2}) missing")]
    NotTransitive(usize, usize, usize),
    #[error("linear order {index} is not a permutation of the ground set")]
    NotPermutation { index: usize },
    #[error("linear order {index} does not extend P: ({below}, {above}) in P but not in the order")]
    OrderDoesNotExtend { index: usize, below: usize, above: usize },
    #[error("element {0} is not in the ground set")]
    NotSubset(usize),
    #[error("arity mismatch: p = {left} vs p = {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("linear orders live on different ground sets")]
    GroundSetMismatch,
    #[error("not a rigid surjection: {0}")]
    NotRigid(String),
    #[error("anchor violation: {0}")]
    Anchor(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("infeasible: {what} needs {needed}, ceiling is {limit}")]
    Infeasible { what: String, needed: String, limit: String },
    #[error("no embedding of X into Y exists")]
    NoEmbedding,
    #[error("no verified witness up to size bound {0}")]
    NotFound(usize),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("postcondition failed: {0}")]
    Postcondition(String),
}

impl Error {
    /// Guard refusals, as opposed to malformed input or violated preconditions.
    pub fn is_infeasible(&self) -> bool {
        matches!(self, Error::Infeasible { .. } | Error::NotFound(_))
    }

    pub(crate) fn infeasible(what: impl Into<String>, needed: impl ToString, limit: impl ToString) -> Self {
        Error::Infeasible {
            what: what.into(),
            needed: needed.to_string(),
            limit: limit.to_string(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}
