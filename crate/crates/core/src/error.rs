//! Error types shared across the toolkit.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("corrupt NIfTI header: sizeof_hdr is {found}, expected 348 in either endianness")]
    BadHeaderSize { found: i32 },

    #[error("unsupported NIfTI magic {magic:?}; only single-file \"n+1\" volumes are supported")]
    BadMagic { magic: [u8; 4] },

    #[error("unsupported NIfTI datatype code {code}")]
    UnsupportedDatatype { code: i16 },

    #[error("volume is not 3D: dim[0] = {ndim} with non-singleton trailing dimensions")]
    NotThreeDimensional { ndim: i16 },

    #[error("file truncated: expected {expected} bytes of voxel data, found {found}")]
    TruncatedData { expected: usize, found: usize },

    #[error("voxel value {value} at index ({x}, {y}, {z}) is not integral (rounding error {err:e})")]
    NonIntegralVoxel {
        value: f64,
        err: f64,
        x: usize,
        y: usize,
        z: usize,
    },

    #[error("invalid vertebra label code {code} at voxel ({x}, {y}, {z})")]
    InvalidLabelAt { code: i64, x: usize, y: usize, z: usize },

    #[error("invalid vertebra label code {code}")]
    InvalidLabel { code: i64 },

    #[error("non-positive voxel spacing {spacing:?}")]
    BadSpacing { spacing: [f64; 3] },

    #[error("affine matrix is not invertible")]
    SingularAffine,

    #[error("duplicate centroid label {code}")]
    DuplicateCentroid { code: u8 },

    #[error("non-finite centroid coordinate for label {code}")]
    NonFiniteCentroid { code: u8 },

    #[error("voxel-space centroids require a reference volume")]
    MissingReferenceVolume,

    #[error("malformed centroid file: {reason}")]
    BadCentroidFile { reason: String },

    #[error("grid mismatch: dims {dims_a:?} vs {dims_b:?}, spacing {spacing_a:?} vs {spacing_b:?}")]
    GridMismatch {
        dims_a: [usize; 3],
        dims_b: [usize; 3],
        spacing_a: [f64; 3],
        spacing_b: [f64; 3],
    },

    #[error("label {code} is absent from the volume")]
    LabelAbsent { code: u8 },

    #[error("empty input: {what}")]
    EmptyInput { what: &'static str },

    #[error("paired samples differ in length: {left} vs {right}")]
    SampleLengthMismatch { left: usize, right: usize },

    #[error("scan id sets do not match: {reason}")]
    ScanSetMismatch { reason: String },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
