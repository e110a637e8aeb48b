use std::path::PathBuf;

/// Errors produced by the modvar library.
#[derive(thiserror::Error, Debug)]
pub enum Error {
    #[error("non-finite value: {0}")]
    NonFinite(&'static str),

    #[error("invalid axis: {0}")]
    InvalidAxis(String),

    #[error("invalid optics configuration: {0}")]
    InvalidOptics(String),

    #[error("empty map")]
    EmptyMap,

    #[error("incomplete grid: {0}")]
    IncompleteGrid(String),

    #[error("non-uniform detector grid: {0}")]
    NonUniformGrid(String),

    #[error("negative counts at line {line}")]
    NegativeCounts { line: usize },

    #[error("missing metadata key `{0}`")]
    MissingMetadata(&'static str),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("grid too coarse for period: step {step} vs period {period}")]
    GridTooCoarse { step: f64, period: f64 },

    #[error("remainder bins finer than the grid: bin width {width} < step {step}")]
    BinsTooFine { step: f64, width: f64 },

    #[error("mismatched bin widths: {0} vs {1}")]
    MismatchedWidths(f64, f64),

    #[error("mismatched scale factor: near ell={near}, far ell={far}")]
    MismatchedScale { near: f64, far: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for failures caused by the filesystem rather than the data.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
