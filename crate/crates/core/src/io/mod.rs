//! File parsing and serialization: NIfTI-1 volumes and centroid JSON.

pub mod ctd;
pub mod nifti;

pub use ctd::{load_centroids, CentroidSpace};
pub use nifti::load_label_volume;
