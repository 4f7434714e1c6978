//! Benchmark evaluation toolkit for multi-vertebra labelling and segmentation
//! of 3D CT label volumes.

pub mod centroids;
pub mod error;
pub mod geom;
pub mod io;
pub mod label;
pub mod synth;
pub mod volume;

pub use centroids::CentroidSet;
pub use error::{Error, Result};
pub use geom::{Affine, Point3};
pub use label::{Region, VertebraLabel};
pub use volume::LabelVolume;
