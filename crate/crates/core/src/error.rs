use thiserror::Error;

use crate::matroid::ElementId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element {0} is not in the ground set")]
    OutsideGround(ElementId),

    #[error("element {0} appears more than once in the query set")]
    DuplicateElement(ElementId),

    #[error("element {0} must not belong to the blocking set")]
    ElementInSet(ElementId),

    #[error("contracted set is dependent")]
    DependentContraction,

    #[error("set is not a basis of the matroid")]
    NotABasis,

    #[error("invalid parameter: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("enumeration guard exceeded: {size} elements (limit {limit})")]
    Capacity { size: usize, limit: usize },

    #[error("invalid instance: {0}")]
    Validation(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// True for failures of the filesystem or output layer, as opposed to bad
    /// configuration or algorithm errors.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_) | Error::Csv(_))
    }
}
