use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported dimension {0}: only n = 2 and n = 3 are implemented")]
    UnsupportedDimension(usize),

    #[error("grid resolution must be a positive even integer, got {0}")]
    InvalidResolution(usize),

    #[error("p must lie in (−inf,0)∪(0,1), got {0}")]
    InvalidP(f64),

    #[error("kernel exponent must exceed -1 for integrability, got {0}")]
    NonIntegrableKernel(f64),

    #[error("body is unbounded in direction {0:?}")]
    Unbounded([f64; 3]),

    #[error("facet normals span only a {0}-dimensional subspace; the Wulff shape is unbounded")]
    NotSpanning(usize),

    #[error("support values must be positive, got {0}")]
    NonPositiveSupport(f64),

    #[error("radial values must be positive, got {0}")]
    NonPositiveRadial(f64),

    #[error("matrix is not unimodular: |det - 1| = {0:e}")]
    NotUnimodular(f64),

    #[error("body must have volume 2, got {0}; rescale it first")]
    VolumeNotTwo(f64),

    #[error("values are not even: node {0} differs from its antipode")]
    NotEven(usize),

    #[error("invalid subspace: {0}")]
    InvalidSubspace(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("file not found: {0}")]
    Missing(String),

    #[error("malformed {path}: {message}")]
    Malformed { path: String, message: String },

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
