//! Per-vertebra centroid annotations in world millimetres.

use std::collections::BTreeMap;

use crate::geom::Point3;
use crate::label::VertebraLabel;
use crate::{Error, Result};

/// Mapping from vertebra label to its 3D centroid (world mm).
///
/// Labels are unique and coordinates finite; iteration follows ascending
/// label code.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CentroidSet {
    entries: BTreeMap<VertebraLabel, Point3>,
}

impl CentroidSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a set from (label, point) pairs, rejecting duplicates and
    /// non-finite coordinates.
    pub fn from_entries(entries: impl IntoIterator<Item = (VertebraLabel, Point3)>) -> Result<Self> {
        let mut set = CentroidSet::new();
        for (label, point) in entries {
            set.insert(label, point)?;
        }
        Ok(set)
    }

    pub fn insert(&mut self, label: VertebraLabel, point: Point3) -> Result<()> {
        if !point.is_finite() {
            return Err(Error::NonFiniteCentroid { code: label.code() });
        }
        if self.entries.contains_key(&label) {
            return Err(Error::DuplicateCentroid { code: label.code() });
        }
        self.entries.insert(label, point);
        Ok(())
    }

    pub fn get(&self, label: VertebraLabel) -> Option<&Point3> {
        self.entries.get(&label)
    }

    pub fn contains(&self, label: VertebraLabel) -> bool {
        self.entries.contains_key(&label)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Iterates in ascending label-code order.
    pub fn iter(&self) -> impl Iterator<Item = (VertebraLabel, &Point3)> {
        self.entries.iter().map(|(l, p)| (*l, p))
    }

    pub fn labels(&self) -> impl Iterator<Item = VertebraLabel> + '_ {
        self.entries.keys().copied()
    }

    /// Entries sorted by anatomical position along the spine (C1 first).
    pub fn iter_anatomical(&self) -> Vec<(VertebraLabel, Point3)> {
        let mut v: Vec<(VertebraLabel, Point3)> =
            self.entries.iter().map(|(l, p)| (*l, *p)).collect();
        v.sort_by_key(|(l, _)| l.anatomical_index());
        v
    }
}

impl FromIterator<(VertebraLabel, Point3)> for CentroidSet {
    /// Panics on duplicate labels or non-finite coordinates; use
    /// [`CentroidSet::from_entries`] for fallible construction.
    fn from_iter<T: IntoIterator<Item = (VertebraLabel, Point3)>>(iter: T) -> Self {
        CentroidSet::from_entries(iter).expect("invalid centroid entries")
    }
}
