//! Boundary-voxel surface extraction.
//!
//! A voxel belongs to its label's surface when at least one of its six
//! face neighbors carries a different code; volume borders count as
//! different. Surface points are the world-mm centers of those voxels.

use crate::geom::Point3;
use crate::label::VertebraLabel;
use crate::volume::LabelVolume;
use crate::{Error, Result};

/// Boundary-voxel centers (world mm) for one label.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfacePoints {
    pub label: VertebraLabel,
    pub points: Vec<Point3>,
}

/// Extracts the surface of `label`; errors if the label is absent.
pub fn extract_surface(volume: &LabelVolume, label: VertebraLabel) -> Result<SurfacePoints> {
    let mut surfaces = extract_surfaces(volume, &[label]);
    let points = surfaces.remove(&label.code()).unwrap_or_default();
    if points.is_empty() {
        return Err(Error::LabelAbsent { code: label.code() });
    }
    Ok(SurfacePoints { label, points })
}

/// Extracts surfaces for several labels in one pass over the volume.
/// Labels absent from the volume simply yield no entry.
pub fn extract_surfaces(
    volume: &LabelVolume,
    labels: &[VertebraLabel],
) -> std::collections::BTreeMap<u8, Vec<Point3>> {
    let mut wanted = [false; 29];
    for l in labels {
        wanted[l.code() as usize] = true;
    }
    let mut out: std::collections::BTreeMap<u8, Vec<Point3>> = std::collections::BTreeMap::new();

    let [nx, ny, nz] = volume.dims();
    let voxels = volume.voxels();
    let stride_y = nx;
    let stride_z = nx * ny;

    for z in 0..nz {
        for y in 0..ny {
            let row = stride_y * y + stride_z * z;
            for x in 0..nx {
                let idx = row + x;
                let code = voxels[idx];
                if code == 0 || !wanted[code as usize] {
                    continue;
                }
                let boundary = (x == 0 || voxels[idx - 1] != code)
                    || (x + 1 == nx || voxels[idx + 1] != code)
                    || (y == 0 || voxels[idx - stride_y] != code)
                    || (y + 1 == ny || voxels[idx + stride_y] != code)
                    || (z == 0 || voxels[idx - stride_z] != code)
                    || (z + 1 == nz || voxels[idx + stride_z] != code);
                if boundary {
                    out.entry(code).or_default().push(volume.voxel_center(x, y, z));
                }
            }
        }
    }
    out
}
