//! Vertebra label codes and spine regions.
//!
//! Codes follow the convention C1→1 … C7→7, T1→8 … T12→19, L1→20 … L5→24,
//! with 25 for the transitional L6 and 28 for the transitional T13.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Anatomical class of a single vertebra, stored as its numeric label code.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct VertebraLabel(u8);

/// Code for the transitional L6 vertebra.
pub const L6_CODE: u8 = 25;
/// Code for the transitional T13 vertebra.
pub const T13_CODE: u8 = 28;

impl VertebraLabel {
    /// Validates `code` against the supported set {1..=25, 28}.
    pub fn new(code: u8) -> Result<Self> {
        if Self::is_valid_code(code) {
            Ok(VertebraLabel(code))
        } else {
            Err(Error::InvalidLabel { code: code as i64 })
        }
    }

    pub fn is_valid_code(code: u8) -> bool {
        (1..=25).contains(&code) || code == T13_CODE
    }

    pub fn code(self) -> u8 {
        self.0
    }

    /// All valid labels in anatomical (cranio-caudal) order.
    pub fn all() -> impl Iterator<Item = VertebraLabel> {
        ANATOMICAL_CHAIN.iter().copied().map(VertebraLabel)
    }

    /// Position of this vertebra along the cranio-caudal chain
    /// C1..C7, T1..T13, L1..L6. T13 (code 28) sits between T12 and L1.
    pub fn anatomical_index(self) -> usize {
        match self.0 {
            c @ 1..=19 => (c - 1) as usize,
            T13_CODE => 19,
            c => c as usize, // 20..=25 -> 20..=25
        }
    }

    /// Human-readable name, e.g. "C1", "T13", "L6".
    pub fn name(self) -> String {
        match self.0 {
            c @ 1..=7 => format!("C{c}"),
            c @ 8..=19 => format!("T{}", c - 7),
            T13_CODE => "T13".to_string(),
            c => format!("L{}", c - 19),
        }
    }

    pub fn region(self) -> Region {
        match self.0 {
            1..=7 => Region::Cervical,
            8..=19 | T13_CODE => Region::Thoracic,
            _ => Region::Lumbar,
        }
    }

    /// True for the anatomically rare T13 and L6 codes.
    pub fn is_transitional(self) -> bool {
        self.0 == L6_CODE || self.0 == T13_CODE
    }
}

impl TryFrom<u8> for VertebraLabel {
    type Error = Error;
    fn try_from(code: u8) -> Result<Self> {
        VertebraLabel::new(code)
    }
}

impl From<VertebraLabel> for u8 {
    fn from(label: VertebraLabel) -> u8 {
        label.0
    }
}

impl fmt::Debug for VertebraLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name(), self.0)
    }
}

impl fmt::Display for VertebraLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Label codes in cranio-caudal order; the canonical chain for sequence logic.
pub const ANATOMICAL_CHAIN: [u8; 26] = [
    1, 2, 3, 4, 5, 6, 7, // cervical
    8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, // thoracic T1..T12
    28, // transitional T13
    20, 21, 22, 23, 24, // lumbar L1..L5
    25, // transitional L6
];

/// Spine region a vertebra belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Cervical,
    Thoracic,
    Lumbar,
}

impl Region {
    pub fn name(self) -> &'static str {
        match self {
            Region::Cervical => "cervical",
            Region::Thoracic => "thoracic",
            Region::Lumbar => "lumbar",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_valid_codes_only() {
        for code in 1..=25u8 {
            assert!(VertebraLabel::new(code).is_ok());
        }
        assert!(VertebraLabel::new(T13_CODE).is_ok());
        for code in [0u8, 26, 27, 29, 100] {
            assert!(VertebraLabel::new(code).is_err());
        }
    }

    #[test]
    fn region_mapping() {
        assert_eq!(VertebraLabel::new(1).unwrap().region(), Region::Cervical);
        assert_eq!(VertebraLabel::new(7).unwrap().region(), Region::Cervical);
        assert_eq!(VertebraLabel::new(8).unwrap().region(), Region::Thoracic);
        assert_eq!(VertebraLabel::new(19).unwrap().region(), Region::Thoracic);
        // T13 is thoracic, L6 is lumbar.
        assert_eq!(VertebraLabel::new(28).unwrap().region(), Region::Thoracic);
        assert_eq!(VertebraLabel::new(25).unwrap().region(), Region::Lumbar);
        assert_eq!(VertebraLabel::new(20).unwrap().region(), Region::Lumbar);
    }

    #[test]
    fn regions_partition_all_codes() {
        let mut counts = [0usize; 3];
        for label in VertebraLabel::all() {
            counts[match label.region() {
                Region::Cervical => 0,
                Region::Thoracic => 1,
                Region::Lumbar => 2,
            }] += 1;
        }
        assert_eq!(counts, [7, 13, 6]);
    }

    #[test]
    fn anatomical_order_is_strictly_increasing() {
        let idx: Vec<usize> = VertebraLabel::all().map(|l| l.anatomical_index()).collect();
        for pair in idx.windows(2) {
            assert!(pair[0] < pair[1]);
        }
        assert_eq!(VertebraLabel::new(19).unwrap().anatomical_index() + 1,
                   VertebraLabel::new(28).unwrap().anatomical_index());
        assert_eq!(VertebraLabel::new(28).unwrap().anatomical_index() + 1,
                   VertebraLabel::new(20).unwrap().anatomical_index());
    }

    #[test]
    fn names() {
        assert_eq!(VertebraLabel::new(1).unwrap().name(), "C1");
        assert_eq!(VertebraLabel::new(8).unwrap().name(), "T1");
        assert_eq!(VertebraLabel::new(19).unwrap().name(), "T12");
        assert_eq!(VertebraLabel::new(28).unwrap().name(), "T13");
        assert_eq!(VertebraLabel::new(20).unwrap().name(), "L1");
        assert_eq!(VertebraLabel::new(25).unwrap().name(), "L6");
    }
}
