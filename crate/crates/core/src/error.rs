use crate::field::FieldError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(&'static str),
    #[error("could not sample a usable instance after {attempts} attempts")]
    SeedFailure { attempts: u32 },
    #[error("independent instances disagree: {0}")]
    VerificationMismatch(String),
    #[error("law of cogeny violated: {0}")]
    CogenyViolation(String),
    #[error("unknown object id {0}")]
    UnknownId(u32),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("cannot parse pedigree: {0}")]
    PedigreeParse(String),
    #[error("format mismatch: {0}")]
    FormatMismatch(String),
    #[error("snapshot was written for a different configuration (expected digest {expected}, found {found})")]
    ConfigDigestMismatch { expected: String, found: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures that are artifacts of one random instance and go away on resampling.
    pub fn is_resamplable(&self) -> bool {
        matches!(
            self,
            Error::DegenerateConfiguration(_) | Error::Field(FieldError::DivisionByZero)
        )
    }
}
