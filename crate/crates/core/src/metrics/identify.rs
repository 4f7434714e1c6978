//! Landmark identification: the two-clause nearest-plus-threshold rule.

use std::collections::BTreeMap;

use crate::centroids::CentroidSet;
use crate::label::VertebraLabel;
use crate::{Error, Result};

/// A vertebra counts as identified only when its same-label prediction is
/// closer than this to the true centroid.
pub const IDENTIFICATION_THRESHOLD_MM: f64 = 20.0;

/// Per-label identification outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabelIdentification {
    pub identified: bool,
    /// Distance between the same-label prediction and the true centroid;
    /// absent when the prediction carries no centroid for this label.
    pub distance_mm: Option<f64>,
}

/// Identification outcomes for every ground-truth label.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentificationResult {
    pub per_label: BTreeMap<VertebraLabel, LabelIdentification>,
}

impl IdentificationResult {
    pub fn identified_count(&self) -> usize {
        self.per_label.values().filter(|r| r.identified).count()
    }

    /// Distances of labels that have a same-label prediction.
    pub fn matched_distances(&self) -> impl Iterator<Item = f64> + '_ {
        self.per_label.values().filter_map(|r| r.distance_mm)
    }
}

/// Applies the identification rule to each ground-truth vertebra `i` that
/// has a same-label prediction: identified iff the true centroid `x_i` is
/// strictly the nearest ground-truth centroid to the prediction (ties fail)
/// and their distance is below [`IDENTIFICATION_THRESHOLD_MM`]. An empty
/// prediction set is valid input; an empty ground truth is not.
pub fn identify(gt: &CentroidSet, pred: &CentroidSet) -> Result<IdentificationResult> {
    if gt.is_empty() {
        return Err(Error::EmptyInput { what: "ground-truth centroid set" });
    }
    let mut per_label = BTreeMap::new();
    for (label, gt_point) in gt.iter() {
        let record = match pred.get(label) {
            None => LabelIdentification { identified: false, distance_mm: None },
            Some(pred_point) => {
                let distance = pred_point.distance(gt_point);
                let strictly_nearest = gt
                    .iter()
                    .filter(|(other, _)| *other != label)
                    .all(|(_, other_point)| distance < pred_point.distance(other_point));
                LabelIdentification {
                    identified: strictly_nearest && distance < IDENTIFICATION_THRESHOLD_MM,
                    distance_mm: Some(distance),
                }
            }
        };
        per_label.insert(label, record);
    }
    Ok(IdentificationResult { per_label })
}
