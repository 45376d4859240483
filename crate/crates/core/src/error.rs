use thiserror::Error;

/// Every failure mode of the workbench.
///
/// The variants line up with the CLI exit-code contract: `Coverage` and
/// `Capability` are "cannot decide at this scale" (exit 3), the rest are
/// usage or input errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("singular matrix")]
    Singular,
    #[error("element does not belong to group {group}: {detail}")]
    Ownership { group: String, detail: String },
    #[error("capability error: {0}")]
    Capability(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("({h}, {k}) is outside the domain of the local actions")]
    OutOfDomain { h: String, k: String },
    #[error("coverage error: {0}")]
    Coverage(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("subset is not invariant: {0}")]
    NotInvariant(String),
    #[error("measure has a zero-weight unit: {0}")]
    Support(String),
    #[error("representation error: {0}")]
    Representation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors that mean the question cannot be answered inside the
    /// enumerated window, as opposed to malformed input.
    pub fn is_coverage(&self) -> bool {
        matches!(self, Error::Coverage(_) | Error::Capability(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
