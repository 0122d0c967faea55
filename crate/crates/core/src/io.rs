//! The JSON point-set file format.
//!
//! ```json
//! {"field": {"kind": "prime", "p": 7}, "dim": 2, "label": "demo",
//!  "points": [["1", "0"], ["0", "1"]]}
//! ```
//!
//! Coordinates are scalar strings (`"3"`, `"-1/2"`), so both backends share
//! one exact format.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, PointSet};
use crate::scalar::{FieldSpec, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSetFile {
    pub field: FieldSpec,
    pub dim: usize,
    #[serde(default)]
    pub label: String,
    pub points: Vec<Vec<String>>,
}

impl PointSetFile {
    pub fn from_set(set: &PointSet) -> Self {
        PointSetFile {
            field: set.field(),
            dim: set.dim(),
            label: set.label().to_string(),
            points: set
                .points()
                .iter()
                .map(|p| p.coords().iter().map(|c| c.to_string()).collect())
                .collect(),
        }
    }

    pub fn into_set(self) -> Result<PointSet> {
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(i, row)| {
                if row.len() != self.dim {
                    return Err(Error::DimensionMismatch {
                        expected: self.dim,
                        found: row.len(),
                    });
                }
                row.iter()
                    .map(|c| Scalar::parse(c, self.field))
                    .collect::<Result<Vec<_>>>()
                    .map(Point::new)
                    .map_err(|e| Error::Parse(format!("point {i}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(self.field, self.dim, points, self.label)
    }
}

pub fn parse_point_set(text: &str) -> Result<PointSet> {
    serde_json::from_str::<PointSetFile>(text)?.into_set()
}

/// Canonical form: pretty JSON, points in stored order, trailing newline.
pub fn point_set_to_json(set: &PointSet) -> Result<String> {
    let mut text = serde_json::to_string_pretty(&PointSetFile::from_set(set))?;
    text.push('\n');
    Ok(text)
}

pub fn load_point_set(path: impl AsRef<Path>) -> Result<PointSet> {
    parse_point_set(&fs::read_to_string(path)?)
}

pub fn save_point_set(set: &PointSet, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, point_set_to_json(set)?)?;
    Ok(())
}
