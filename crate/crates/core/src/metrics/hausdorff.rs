//! Symmetric Hausdorff distance between per-label voxel surfaces.

use std::collections::BTreeMap;

use super::kdtree::{directed_max_min_sq, KdTree};
use super::surface::extract_surfaces;
use crate::label::VertebraLabel;
use crate::volume::LabelVolume;
use crate::{Result, GRID_TOLERANCE_MM};

/// Below this size an all-pairs scan beats building a tree.
const BRUTE_FORCE_CUTOFF: usize = 24;

/// Exact symmetric Hausdorff distance (mm) between two surface point sets.
///
/// Distances are accumulated as squared values and rooted once at the end,
/// so the result is bit-identical to an all-pairs oracle doing the same.
pub fn hausdorff_between(a: &[[f64; 3]], b: &[[f64; 3]]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "surfaces must be non-empty");
    let forward = directed_sq(a, b);
    let backward = directed_sq(b, a);
    forward.max(backward).sqrt()
}

fn directed_sq(from: &[[f64; 3]], to: &[[f64; 3]]) -> f64 {
    if to.len() <= BRUTE_FORCE_CUTOFF {
        let mut worst = 0.0f64;
        for &p in from {
            let mut best = f64::INFINITY;
            for &q in to {
                let dx = p[0] - q[0];
                let dy = p[1] - q[1];
                let dz = p[2] - q[2];
                best = best.min(dx * dx + dy * dy + dz * dz);
            }
            worst = worst.max(best);
        }
        worst
    } else {
        let tree = KdTree::build(to.to_vec());
        directed_max_min_sq(from, &tree)
    }
}

/// Hausdorff distance per label present in both volumes. Labels missing
/// from either side yield no entry; the ranking-mode substitution happens
/// downstream in the scan evaluation.
pub fn hausdorff_per_label(
    gt: &LabelVolume,
    pred: &LabelVolume,
) -> Result<BTreeMap<VertebraLabel, f64>> {
    gt.check_same_grid(pred, GRID_TOLERANCE_MM)?;
    let gt_labels = gt.labels();
    let pred_labels = pred.labels();
    let shared: Vec<VertebraLabel> =
        gt_labels.iter().copied().filter(|l| pred_labels.contains(l)).collect();

    let gt_surfaces = extract_surfaces(gt, &shared);
    let pred_surfaces = extract_surfaces(pred, &shared);

    let mut out = BTreeMap::new();
    for label in shared {
        let a: Vec<[f64; 3]> = gt_surfaces[&label.code()].iter().map(|p| p.to_array()).collect();
        let b: Vec<[f64; 3]> = pred_surfaces[&label.code()].iter().map(|p| p.to_array()).collect();
        out.insert(label, hausdorff_between(&a, &b));
    }
    Ok(out)
}
