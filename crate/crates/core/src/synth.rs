//! Deterministic synthetic phantoms: paired label volumes and centroid sets
//! for tests, oracle checks, and benchmarks.
//!
//! Phantoms are axis-aligned labelled boxes stacked along the cranio-caudal
//! axis (world +z = cranial), so every derived metric value can be computed
//! by hand. Realism is a non-goal.

use std::io::Write;
use std::path::Path;

use byteorder::{LittleEndian, WriteBytesExt};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::centroids::CentroidSet;
use crate::geom::{Affine, Point3};
use crate::label::VertebraLabel;
use crate::volume::LabelVolume;
use crate::{Error, Result};

/// Default cap on generated volume size (voxels).
pub const DEFAULT_VOXEL_BUDGET: usize = 1 << 28;

/// Parameters for [`make_phantom`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhantomSpec {
    /// Vertebrae to generate, anatomically ordered (cranial first).
    pub labels: Vec<VertebraLabel>,
    /// Box size per vertebra, in voxels.
    pub vertebra_size_vox: [usize; 3],
    /// Background gap between consecutive boxes along the stacking axis, in voxels.
    pub gap_vox: usize,
    /// Voxel spacing in mm.
    pub spacing: [f64; 3],
    /// Seed for derived perturbations; the base phantom ignores it.
    #[serde(default)]
    pub seed: u64,
    /// Margin of background voxels around the stack.
    #[serde(default = "default_margin")]
    pub margin_vox: usize,
    /// Upper bound on total voxels.
    #[serde(default = "default_budget")]
    pub voxel_budget: usize,
}

fn default_margin() -> usize {
    2
}

fn default_budget() -> usize {
    DEFAULT_VOXEL_BUDGET
}

impl PhantomSpec {
    pub fn validate(&self) -> Result<()> {
        if self.labels.is_empty() {
            return Err(Error::EmptyInput { what: "phantom label list" });
        }
        if self.vertebra_size_vox.iter().any(|&s| s == 0) {
            return Err(Error::invalid("vertebra_size_vox components must be positive"));
        }
        if self.spacing.iter().any(|&s| !(s > 0.0)) {
            return Err(Error::BadSpacing { spacing: self.spacing });
        }
        let mut idx: Vec<usize> = self.labels.iter().map(|l| l.anatomical_index()).collect();
        let sorted = idx.windows(2).all(|w| w[0] < w[1]);
        idx.dedup();
        if !sorted || idx.len() != self.labels.len() {
            return Err(Error::invalid("phantom labels must be unique and anatomically ordered"));
        }
        Ok(())
    }
}

/// Builds the phantom volume and its exact centroid set.
///
/// The first label sits at the cranial (high-z) end; consecutive box centers
/// are `size_z + gap` voxels apart along z.
pub fn make_phantom(spec: &PhantomSpec) -> Result<(LabelVolume, CentroidSet)> {
    spec.validate()?;
    let [sx, sy, sz] = spec.vertebra_size_vox;
    let n = spec.labels.len();
    let margin = spec.margin_vox;

    let dims = [
        sx + 2 * margin,
        sy + 2 * margin,
        n * sz + (n - 1) * spec.gap_vox + 2 * margin,
    ];
    let total = dims[0] * dims[1] * dims[2];
    if total > spec.voxel_budget {
        return Err(Error::invalid(format!(
            "phantom would need {total} voxels, budget is {}",
            spec.voxel_budget
        )));
    }

    let affine = Affine::from_diagonal_spacing(spec.spacing);
    let mut voxels = vec![0u8; total];
    let mut centroids = CentroidSet::new();

    for (i, label) in spec.labels.iter().enumerate() {
        // Stack cranial-to-caudal: later labels at lower z.
        let z0 = margin + (n - 1 - i) * (sz + spec.gap_vox);
        for z in z0..z0 + sz {
            for y in margin..margin + sy {
                let row = dims[0] * (y + dims[1] * z);
                voxels[row + margin..row + margin + sx].fill(label.code());
            }
        }
        let center_vox = [
            margin as f64 + (sx as f64 - 1.0) / 2.0,
            margin as f64 + (sy as f64 - 1.0) / 2.0,
            z0 as f64 + (sz as f64 - 1.0) / 2.0,
        ];
        centroids.insert(*label, affine.apply(center_vox))?;
    }

    let volume = LabelVolume::new(dims, spec.spacing, affine, voxels)?;
    Ok((volume, centroids))
}

/// Adds seeded isotropic Gaussian noise (std `sigma_mm` per axis) to every
/// centroid. Deterministic for a fixed seed; `sigma_mm == 0` is the identity.
pub fn perturb_centroids(ctd: &CentroidSet, sigma_mm: f64, seed: u64) -> Result<CentroidSet> {
    if !(sigma_mm >= 0.0) {
        return Err(Error::invalid(format!("sigma_mm must be >= 0, got {sigma_mm}")));
    }
    if sigma_mm == 0.0 {
        return Ok(ctd.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma_mm).expect("sigma validated");
    let mut out = CentroidSet::new();
    for (label, p) in ctd.iter() {
        let noise = Point3::new(
            normal.sample(&mut rng),
            normal.sample(&mut rng),
            normal.sample(&mut rng),
        );
        out.insert(label, p.add(&noise))?;
    }
    Ok(out)
}

/// Writes a volume as a single-file NIfTI-1: little-endian, datatype 4
/// (int16), sform-coded affine. Paths ending in `.gz` are gzip-compressed.
///
/// This is the one reference encoding used for fixtures and the `synth`
/// subcommand; general NIfTI writing is out of scope.
pub fn write_nifti(path: impl AsRef<Path>, volume: &LabelVolume) -> Result<()> {
    let path = path.as_ref();
    let bytes = nifti_bytes(volume)?;
    let gz = path.extension().map(|e| e == "gz").unwrap_or(false);
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer: Box<dyn Write> = if gz {
        Box::new(flate2::write::GzEncoder::new(file, flate2::Compression::fast()))
    } else {
        Box::new(std::io::BufWriter::new(file))
    };
    writer.write_all(&bytes).map_err(|e| Error::io(path, e))?;
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Encodes a volume into NIfTI-1 bytes (header + int16 voxel data).
pub fn nifti_bytes(volume: &LabelVolume) -> Result<Vec<u8>> {
    let dims = volume.dims();
    for d in dims {
        if d > i16::MAX as usize {
            return Err(Error::invalid(format!("dimension {d} exceeds NIfTI-1 int16 range")));
        }
    }
    let mut header = vec![0u8; 348];
    let mut w = &mut header[..];

    w.write_i32::<LittleEndian>(348).unwrap(); // sizeof_hdr
    w = &mut header[40..];
    w.write_i16::<LittleEndian>(3).unwrap(); // dim[0]
    w.write_i16::<LittleEndian>(dims[0] as i16).unwrap();
    w.write_i16::<LittleEndian>(dims[1] as i16).unwrap();
    w.write_i16::<LittleEndian>(dims[2] as i16).unwrap();
    for _ in 0..4 {
        w.write_i16::<LittleEndian>(1).unwrap();
    }

    let mut w = &mut header[70..];
    w.write_i16::<LittleEndian>(4).unwrap(); // datatype: int16
    w.write_i16::<LittleEndian>(16).unwrap(); // bitpix

    let spacing = volume.spacing();
    let mut w = &mut header[76..];
    w.write_f32::<LittleEndian>(1.0).unwrap(); // pixdim[0] (qfac)
    w.write_f32::<LittleEndian>(spacing[0] as f32).unwrap();
    w.write_f32::<LittleEndian>(spacing[1] as f32).unwrap();
    w.write_f32::<LittleEndian>(spacing[2] as f32).unwrap();

    let mut w = &mut header[108..];
    w.write_f32::<LittleEndian>(352.0).unwrap(); // vox_offset
    w.write_f32::<LittleEndian>(1.0).unwrap(); // scl_slope
    w.write_f32::<LittleEndian>(0.0).unwrap(); // scl_inter

    let mut w = &mut header[252..];
    w.write_i16::<LittleEndian>(0).unwrap(); // qform_code
    w.write_i16::<LittleEndian>(2).unwrap(); // sform_code: aligned

    let m = volume.affine().m;
    let mut w = &mut header[280..];
    for row in 0..3 {
        for col in 0..4 {
            w.write_f32::<LittleEndian>(m[row][col] as f32).unwrap();
        }
    }

    header[344..348].copy_from_slice(b"n+1\0");

    let mut out = Vec::with_capacity(352 + volume.voxel_count() * 2);
    out.extend_from_slice(&header);
    out.extend_from_slice(&[0u8; 4]); // pad to vox_offset 352
    for &v in volume.voxels() {
        out.write_i16::<LittleEndian>(v as i16).unwrap();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(code: u8) -> VertebraLabel {
        VertebraLabel::new(code).unwrap()
    }

    fn lumbar_spec() -> PhantomSpec {
        PhantomSpec {
            labels: (20..=24).map(l).collect(),
            vertebra_size_vox: [10, 10, 10],
            gap_vox: 5,
            spacing: [1.0, 1.0, 1.0],
            seed: 0,
            margin_vox: 2,
            voxel_budget: DEFAULT_VOXEL_BUDGET,
        }
    }

    #[test]
    fn consecutive_centroid_distance_matches_geometry() {
        let (_, ctd) = make_phantom(&lumbar_spec()).unwrap();
        let ordered = ctd.iter_anatomical();
        for pair in ordered.windows(2) {
            let d = pair[0].1.distance(&pair[1].1);
            assert!((d - 15.0).abs() < 1e-12, "expected 15 mm, got {d}");
        }
    }

    #[test]
    fn single_label_box_center() {
        let spec = PhantomSpec { labels: vec![l(20)], ..lumbar_spec() };
        let (vol, ctd) = make_phantom(&spec).unwrap();
        assert_eq!(vol.labels().len(), 1);
        let p = ctd.get(l(20)).unwrap();
        // margin 2 + (10-1)/2 = 6.5 voxels at 1 mm spacing
        assert_eq!((p.x, p.y, p.z), (6.5, 6.5, 6.5));
    }

    #[test]
    fn deterministic_in_seed() {
        let (va, ca) = make_phantom(&lumbar_spec()).unwrap();
        let (vb, cb) = make_phantom(&lumbar_spec()).unwrap();
        assert_eq!(va, vb);
        assert_eq!(ca, cb);
    }

    #[test]
    fn rejects_unordered_labels() {
        let spec = PhantomSpec { labels: vec![l(21), l(20)], ..lumbar_spec() };
        assert!(make_phantom(&spec).is_err());
    }

    #[test]
    fn respects_voxel_budget() {
        let spec = PhantomSpec { voxel_budget: 10, ..lumbar_spec() };
        assert!(make_phantom(&spec).is_err());
    }

    #[test]
    fn perturbation_is_seeded_and_sigma_zero_is_identity() {
        let (_, ctd) = make_phantom(&lumbar_spec()).unwrap();
        assert_eq!(perturb_centroids(&ctd, 0.0, 7).unwrap(), ctd);
        let a = perturb_centroids(&ctd, 1.0, 7).unwrap();
        let b = perturb_centroids(&ctd, 1.0, 7).unwrap();
        let c = perturb_centroids(&ctd, 1.0, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn perturbation_mean_displacement_matches_chi_distribution() {
        // For isotropic sigma = 1 the displacement norm follows a chi(3)
        // distribution with mean sigma * sqrt(8 / pi) ~ 1.596.
        let labels: Vec<VertebraLabel> = VertebraLabel::all().collect();
        let mut ctd = CentroidSet::new();
        for (i, label) in labels.iter().enumerate() {
            ctd.insert(*label, Point3::new(0.0, 0.0, 40.0 * i as f64)).unwrap();
        }
        let mut total = 0.0;
        let mut count = 0usize;
        for seed in 0..40 {
            let noisy = perturb_centroids(&ctd, 1.0, seed).unwrap();
            for (label, p) in ctd.iter() {
                total += noisy.get(label).unwrap().distance(p);
                count += 1;
            }
        }
        let mean = total / count as f64;
        assert!((1.3..=1.9).contains(&mean), "mean displacement {mean}");
    }
}
