use thiserror::Error;

/// Errors raised by the geometric and combinatorial routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("range error: {0}")]
    Range(String),
    /// The evaluated holonomy is parabolic or elliptic.
    #[error("not a closed geodesic: |trace| = {trace} <= 2")]
    NotGeodesic { trace: f64 },
    #[error("unsupported surface: {0}")]
    UnsupportedSurface(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(GeomError::Domain(msg.into()))
}
