//! Centroid annotation files.
//!
//! The on-disk format is a JSON array whose recognized elements look like
//! `{"label": 20, "X": 10.0, "Y": 20.0, "Z": 30.0}`. Elements without a
//! `label` field (e.g. direction metadata) are ignored, as are unknown
//! fields within an element.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use serde_json::Value;

use crate::centroids::CentroidSet;
use crate::geom::Point3;
use crate::label::VertebraLabel;
use crate::volume::LabelVolume;
use crate::{Error, Result};

/// Coordinate frame of the numbers stored in a centroid file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CentroidSpace {
    /// Coordinates are already world millimetres.
    #[default]
    World,
    /// Coordinates are voxel indices; they are mapped through the reference
    /// volume's affine.
    Voxel,
}

/// Loads a centroid file. `volume` is required when `space` is
/// [`CentroidSpace::Voxel`] and ignored otherwise.
pub fn load_centroids(
    path: impl AsRef<Path>,
    space: CentroidSpace,
    volume: Option<&LabelVolume>,
) -> Result<CentroidSet> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let value: Value = serde_json::from_reader(BufReader::new(file))?;
    parse_centroids(&value, space, volume)
}

/// Parses an already-deserialized centroid JSON document.
pub fn parse_centroids(
    value: &Value,
    space: CentroidSpace,
    volume: Option<&LabelVolume>,
) -> Result<CentroidSet> {
    let array = value
        .as_array()
        .ok_or_else(|| Error::BadCentroidFile { reason: "top-level value is not an array".into() })?;

    let mut set = CentroidSet::new();
    for element in array {
        let Some(obj) = element.as_object() else {
            return Err(Error::BadCentroidFile {
                reason: format!("array element is not an object: {element}"),
            });
        };
        let Some(label_value) = obj.get("label") else {
            continue; // metadata element such as {"direction": [...]}
        };
        let code = label_value
            .as_i64()
            .ok_or_else(|| Error::BadCentroidFile { reason: format!("non-integer label {label_value}") })?;
        let label = u8::try_from(code)
            .ok()
            .and_then(|c| VertebraLabel::new(c).ok())
            .ok_or(Error::InvalidLabel { code })?;

        let coord = |key: &str| -> Result<f64> {
            obj.get(key)
                .and_then(Value::as_f64)
                .ok_or_else(|| Error::BadCentroidFile {
                    reason: format!("label {code}: missing or non-numeric field {key}"),
                })
        };
        let raw = Point3::new(coord("X")?, coord("Y")?, coord("Z")?);
        if !raw.is_finite() {
            return Err(Error::NonFiniteCentroid { code: label.code() });
        }

        let point = match space {
            CentroidSpace::World => raw,
            CentroidSpace::Voxel => {
                let volume = volume.ok_or(Error::MissingReferenceVolume)?;
                volume.affine().apply(raw.to_array())
            }
        };
        set.insert(label, point)?;
    }
    Ok(set)
}

/// Serializes a centroid set back to the on-disk array-of-objects format.
pub fn centroids_to_json(set: &CentroidSet) -> Value {
    let entries: Vec<Value> = set
        .iter()
        .map(|(label, p)| {
            serde_json::json!({
                "label": label.code(),
                "X": p.x,
                "Y": p.y,
                "Z": p.z,
            })
        })
        .collect();
    Value::Array(entries)
}

/// Writes a centroid set as JSON.
pub fn write_centroids(path: impl AsRef<Path>, set: &CentroidSet) -> Result<()> {
    let path = path.as_ref();
    let json = serde_json::to_string_pretty(&centroids_to_json(set))?;
    std::fs::write(path, json).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn world_space_direct_copy() {
        let v: Value = serde_json::from_str(r#"[{"label":20,"X":10,"Y":20,"Z":30}]"#).unwrap();
        let set = parse_centroids(&v, CentroidSpace::World, None).unwrap();
        assert_eq!(set.len(), 1);
        let p = set.get(VertebraLabel::new(20).unwrap()).unwrap();
        assert_eq!((p.x, p.y, p.z), (10.0, 20.0, 30.0));
    }

    #[test]
    fn metadata_elements_ignored() {
        let v: Value = serde_json::from_str(
            r#"[{"direction":["R","A","S"]},{"label":21,"X":1,"Y":2,"Z":3,"extra":true}]"#,
        )
        .unwrap();
        let set = parse_centroids(&v, CentroidSpace::World, None).unwrap();
        assert_eq!(set.len(), 1);
        assert!(set.contains(VertebraLabel::new(21).unwrap()));
    }

    #[test]
    fn duplicate_label_rejected() {
        let v: Value = serde_json::from_str(
            r#"[{"label":20,"X":0,"Y":0,"Z":0},{"label":20,"X":1,"Y":1,"Z":1}]"#,
        )
        .unwrap();
        assert!(matches!(
            parse_centroids(&v, CentroidSpace::World, None),
            Err(Error::DuplicateCentroid { code: 20 })
        ));
    }

    #[test]
    fn invalid_label_rejected() {
        let v: Value = serde_json::from_str(r#"[{"label":27,"X":0,"Y":0,"Z":0}]"#).unwrap();
        assert!(parse_centroids(&v, CentroidSpace::World, None).is_err());
    }

    #[test]
    fn voxel_space_requires_volume() {
        let v: Value = serde_json::from_str(r#"[{"label":20,"X":5,"Y":5,"Z":5}]"#).unwrap();
        assert!(matches!(
            parse_centroids(&v, CentroidSpace::Voxel, None),
            Err(Error::MissingReferenceVolume)
        ));
    }

    #[test]
    fn voxel_space_applies_affine() {
        use crate::geom::Affine;
        use crate::volume::LabelVolume;
        let vol = LabelVolume::new(
            [8, 8, 8],
            [1.0, 1.0, 2.0],
            Affine::from_diagonal_spacing([1.0, 1.0, 2.0]),
            vec![0; 512],
        )
        .unwrap();
        let v: Value = serde_json::from_str(r#"[{"label":20,"X":5,"Y":5,"Z":5}]"#).unwrap();
        let set = parse_centroids(&v, CentroidSpace::Voxel, Some(&vol)).unwrap();
        let p = set.get(VertebraLabel::new(20).unwrap()).unwrap();
        assert_eq!((p.x, p.y, p.z), (5.0, 5.0, 10.0));
    }

    #[test]
    fn order_insensitive() {
        let a: Value =
            serde_json::from_str(r#"[{"label":20,"X":0,"Y":0,"Z":0},{"label":21,"X":1,"Y":1,"Z":1}]"#)
                .unwrap();
        let b: Value =
            serde_json::from_str(r#"[{"label":21,"X":1,"Y":1,"Z":1},{"label":20,"X":0,"Y":0,"Z":0}]"#)
                .unwrap();
        let sa = parse_centroids(&a, CentroidSpace::World, None).unwrap();
        let sb = parse_centroids(&b, CentroidSpace::World, None).unwrap();
        assert_eq!(sa, sb);
    }
}
