use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("invalid density: {0}")]
    InvalidDensity(String),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("projection onto a subspace without support: {0}")]
    ZeroMassProjection(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("parse error at {locus}: {message}")]
    Parse { locus: String, message: String },
}

impl Error {
    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::InvalidParams(_) => "invalid-params",
            Error::InvalidProfile(_) => "invalid-profile",
            Error::InvalidDensity(_) => "invalid-density",
            Error::InvalidConfig(_) => "invalid-config",
            Error::ZeroMassProjection(_) => "zero-mass-projection",
            Error::ResourceLimit(_) => "resource-limit",
            Error::Parse { .. } => "parse",
        }
    }

    pub(crate) fn parse(locus: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            locus: locus.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
