//! Per-label Dice overlap.

use std::collections::BTreeMap;

use crate::label::VertebraLabel;
use crate::volume::LabelVolume;
use crate::{Result, GRID_TOLERANCE_MM};

/// Voxel-count tallies from one joint pass over a GT/prediction pair.
#[derive(Debug, Clone)]
pub struct OverlapCounts {
    pub gt: [u64; 29],
    pub pred: [u64; 29],
    pub intersection: [u64; 29],
}

/// Counts per-label voxels and same-label agreements in a single pass.
pub fn overlap_counts(gt: &LabelVolume, pred: &LabelVolume) -> Result<OverlapCounts> {
    gt.check_same_grid(pred, GRID_TOLERANCE_MM)?;
    let mut counts = OverlapCounts { gt: [0; 29], pred: [0; 29], intersection: [0; 29] };
    for (&g, &p) in gt.voxels().iter().zip(pred.voxels()) {
        counts.gt[g as usize] += 1;
        counts.pred[p as usize] += 1;
        if g == p {
            counts.intersection[g as usize] += 1;
        }
    }
    Ok(counts)
}

impl OverlapCounts {
    /// Dice for one label code: 2|P∩T| / (|P| + |T|); zero when the
    /// prediction lacks the label entirely.
    pub fn dice(&self, code: u8) -> f64 {
        let g = self.gt[code as usize];
        let p = self.pred[code as usize];
        if g + p == 0 {
            return 0.0;
        }
        2.0 * self.intersection[code as usize] as f64 / (g + p) as f64
    }

    /// Labels present in the prediction but absent from the ground truth.
    pub fn extra_pred_labels(&self) -> Vec<VertebraLabel> {
        (1..29u8)
            .filter(|&c| VertebraLabel::is_valid_code(c) && self.pred[c as usize] > 0 && self.gt[c as usize] == 0)
            .map(|c| VertebraLabel::new(c).unwrap())
            .collect()
    }

    pub fn gt_labels(&self) -> Vec<VertebraLabel> {
        (1..29u8)
            .filter(|&c| VertebraLabel::is_valid_code(c) && self.gt[c as usize] > 0)
            .map(|c| VertebraLabel::new(c).unwrap())
            .collect()
    }
}

/// Dice per ground-truth label. Labels only in the prediction are excluded;
/// fetch them via [`OverlapCounts::extra_pred_labels`].
pub fn dice_per_label(gt: &LabelVolume, pred: &LabelVolume) -> Result<BTreeMap<VertebraLabel, f64>> {
    let counts = overlap_counts(gt, pred)?;
    Ok(counts
        .gt_labels()
        .into_iter()
        .map(|label| (label, counts.dice(label.code())))
        .collect())
}
