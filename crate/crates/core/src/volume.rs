//! Dense 3D label volumes.

use std::collections::BTreeSet;

use crate::geom::{Affine, Point3};
use crate::label::VertebraLabel;
use crate::{Error, Result};

/// A 3D integer label grid with voxel spacing and a voxel-to-world affine.
///
/// Voxels are stored x-fastest (`index = x + nx * (y + ny * z)`), matching
/// the on-disk NIfTI layout. Code 0 is background; every nonzero code is a
/// valid [`VertebraLabel`].
#[derive(Debug, Clone, PartialEq)]
pub struct LabelVolume {
    dims: [usize; 3],
    spacing: [f64; 3],
    affine: Affine,
    voxels: Vec<u8>,
}

impl LabelVolume {
    /// Validates invariants: positive dims/spacing, invertible affine,
    /// voxel count matching dims, all nonzero codes valid.
    pub fn new(
        dims: [usize; 3],
        spacing: [f64; 3],
        affine: Affine,
        voxels: Vec<u8>,
    ) -> Result<Self> {
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::invalid(format!("zero-sized volume dims {dims:?}")));
        }
        if spacing.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
            return Err(Error::BadSpacing { spacing });
        }
        if !affine.is_invertible() {
            return Err(Error::SingularAffine);
        }
        let expected = dims[0] * dims[1] * dims[2];
        if voxels.len() != expected {
            return Err(Error::invalid(format!(
                "voxel buffer holds {} values, dims {:?} require {}",
                voxels.len(),
                dims,
                expected
            )));
        }
        if let Some(pos) = voxels.iter().position(|&v| v != 0 && !VertebraLabel::is_valid_code(v)) {
            let (x, y, z) = unflatten(pos, dims);
            return Err(Error::InvalidLabelAt { code: voxels[pos] as i64, x, y, z });
        }
        Ok(LabelVolume { dims, spacing, affine, voxels })
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn spacing(&self) -> [f64; 3] {
        self.spacing
    }

    pub fn affine(&self) -> &Affine {
        &self.affine
    }

    pub fn voxels(&self) -> &[u8] {
        &self.voxels
    }

    pub fn voxel_count(&self) -> usize {
        self.voxels.len()
    }

    #[inline]
    pub fn index_of(&self, x: usize, y: usize, z: usize) -> usize {
        x + self.dims[0] * (y + self.dims[1] * z)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, z: usize) -> u8 {
        self.voxels[self.index_of(x, y, z)]
    }

    /// World-mm center of the voxel at integer index (x, y, z).
    pub fn voxel_center(&self, x: usize, y: usize, z: usize) -> Point3 {
        self.affine.apply([x as f64, y as f64, z as f64])
    }

    /// Distinct nonzero labels present, in ascending code order.
    pub fn labels(&self) -> Vec<VertebraLabel> {
        let codes: BTreeSet<u8> = self.voxels.iter().copied().filter(|&v| v != 0).collect();
        codes
            .into_iter()
            .map(|c| VertebraLabel::new(c).expect("validated at construction"))
            .collect()
    }

    /// Number of voxels carrying each label, indexed by code (0..=28).
    pub fn label_counts(&self) -> [u64; 29] {
        let mut counts = [0u64; 29];
        for &v in &self.voxels {
            counts[v as usize] += 1;
        }
        counts
    }

    /// Checks that `other` shares this volume's grid: equal dims and spacing
    /// within `tol` mm per axis. Comparisons never resample.
    pub fn check_same_grid(&self, other: &LabelVolume, tol: f64) -> Result<()> {
        let spacing_ok = self
            .spacing
            .iter()
            .zip(&other.spacing)
            .all(|(a, b)| (a - b).abs() <= tol);
        if self.dims != other.dims || !spacing_ok {
            return Err(Error::GridMismatch {
                dims_a: self.dims,
                dims_b: other.dims,
                spacing_a: self.spacing,
                spacing_b: other.spacing,
            });
        }
        Ok(())
    }

    /// Returns a copy with every voxel code mapped through `f` (0 stays 0;
    /// `None` clears the voxel to background). Used by the label-shift probe.
    pub fn relabeled(&self, f: impl Fn(u8) -> Option<u8>) -> Result<LabelVolume> {
        let voxels = self
            .voxels
            .iter()
            .map(|&v| if v == 0 { 0 } else { f(v).unwrap_or(0) })
            .collect();
        LabelVolume::new(self.dims, self.spacing, self.affine, voxels)
    }
}

fn unflatten(index: usize, dims: [usize; 3]) -> (usize, usize, usize) {
    let x = index % dims[0];
    let y = (index / dims[0]) % dims[1];
    let z = index / (dims[0] * dims[1]);
    (x, y, z)
}
