//! File formats: space files, coefficient files, initial conditions and
//! trajectory CSV.
//!
//! Structured documents are JSON. A space file looks like
//!
//! ```json
//! { "name": "cycle-4", "points": [1, 2, 3, 4], "edges": [[1, 2], [2, 3], [3, 4], [4, 1]] }
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::parabolic::{CoefficientError, CoefficientMatrix, Field, Trajectory};
use crate::space::{DigitalSpace, PointId, SpaceError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Space {
        path: PathBuf,
        #[source]
        source: SpaceError,
    },
    #[error(transparent)]
    Coefficients(#[from] CoefficientError),
    #[error("{path}: point {point} is not in the space")]
    UnknownPoint { path: PathBuf, point: PointId },
    #[error("{path}: {message}")]
    Csv { path: PathBuf, message: String },
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, FormatError> {
    let text = fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| FormatError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FormatError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable value");
    text.push('\n');
    fs::write(path, text).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// On-disk form of a [`DigitalSpace`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceFile {
    pub name: String,
    pub points: Vec<u32>,
    pub edges: Vec<[u32; 2]>,
}

impl SpaceFile {
    pub fn from_space(name: impl Into<String>, g: &DigitalSpace) -> Self {
        SpaceFile {
            name: name.into(),
            points: g.points().iter().map(|p| p.0).collect(),
            edges: g.edges().into_iter().map(|(a, b)| [a.0, b.0]).collect(),
        }
    }

    /// Validates the document; duplicate edges are rejected.
    pub fn to_space(&self) -> Result<DigitalSpace, SpaceError> {
        DigitalSpace::new_strict(
            self.points.iter().copied(),
            self.edges.iter().map(|&[a, b]| (a, b)),
        )
    }

    pub fn read(path: &Path) -> Result<Self, FormatError> {
        read_json(path)
    }

    pub fn write(&self, path: &Path) -> Result<(), FormatError> {
        write_json(path, self)
    }
}

pub fn read_space(path: &Path) -> Result<(String, DigitalSpace), FormatError> {
    let file = SpaceFile::read(path)?;
    let space = file.to_space().map_err(|source| FormatError::Space {
        path: path.to_path_buf(),
        source,
    })?;
    Ok((file.name, space))
}

/// Coefficient file: explicit sparse entries or a scheme resolved against a
/// space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoefficientFile {
    Scheme { scheme: Scheme, w: f64 },
    Entries { entries: Vec<(u32, u32, f64)> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    LazyUniform,
}

impl CoefficientFile {
    pub fn read(path: &Path) -> Result<Self, FormatError> {
        read_json(path)
    }

    pub fn write(&self, path: &Path) -> Result<(), FormatError> {
        write_json(path, self)
    }

    pub fn resolve(&self, space: &DigitalSpace) -> Result<CoefficientMatrix, CoefficientError> {
        match *self {
            CoefficientFile::Scheme {
                scheme: Scheme::LazyUniform,
                w,
            } => CoefficientMatrix::lazy_uniform(space, w),
            CoefficientFile::Entries { ref entries } => CoefficientMatrix::from_entries(
                space,
                entries.iter().map(|&(p, k, v)| (PointId(p), PointId(k), v)),
            ),
        }
    }

    pub fn from_matrix(c: &CoefficientMatrix) -> Self {
        CoefficientFile::Entries {
            entries: c.entries().map(|(p, k, v)| (p.0, k.0, v)).collect(),
        }
    }
}

/// Initial condition: point label to value; absent points are zero.
pub type InitialCondition = BTreeMap<u32, f64>;

pub fn read_initial(path: &Path) -> Result<InitialCondition, FormatError> {
    read_json(path)
}

pub fn initial_field(
    space: &DigitalSpace,
    init: &InitialCondition,
    path: &Path,
) -> Result<Field, FormatError> {
    let mut f = Field::zeros(space);
    for (&p, &v) in init {
        let i = space.index_of(PointId(p)).ok_or(FormatError::UnknownPoint {
            path: path.to_path_buf(),
            point: PointId(p),
        })?;
        f.values[i] = v;
    }
    Ok(f)
}

/// 17 significant digits; parses back to the identical `f64`.
pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `t,f_<label>,...` with one row per time step.
pub fn write_trajectory_csv(
    path: &Path,
    space: &DigitalSpace,
    traj: &Trajectory,
) -> Result<(), FormatError> {
    let csv_err = |e: csv::Error| FormatError::Csv {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    let mut header = vec!["t".to_string()];
    header.extend(space.points().iter().map(|p| format!("f_{p}")));
    w.write_record(&header).map_err(csv_err)?;
    for f in traj.fields() {
        let mut row = vec![f.t.to_string()];
        row.extend(f.values.iter().map(|&x| format_value(x)));
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parsed trajectory CSV: point labels from the header and one row per step.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryTable {
    pub labels: Vec<PointId>,
    pub times: Vec<u64>,
    pub rows: Vec<Vec<f64>>,
}

pub fn read_trajectory_csv(path: &Path) -> Result<TrajectoryTable, FormatError> {
    let err = |message: String| FormatError::Csv {
        path: path.to_path_buf(),
        message,
    };
    let mut r = csv::Reader::from_path(path).map_err(|e| err(e.to_string()))?;
    let headers = r.headers().map_err(|e| err(e.to_string()))?.clone();
    if headers.get(0) != Some("t") {
        return Err(err("first column must be `t`".into()));
    }
    let labels = headers
        .iter()
        .skip(1)
        .map(|h| {
            h.strip_prefix("f_")
                .and_then(|s| s.parse().ok())
                .map(PointId)
                .ok_or_else(|| err(format!("bad column header `{h}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut times = Vec::new();
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| err(e.to_string()))?;
        let bad = |s: &str| err(format!("row {}: cannot parse `{s}`", line + 2));
        let t = rec.get(0).unwrap_or("");
        times.push(t.parse().map_err(|_| bad(t))?);
        rows.push(
            rec.iter()
                .skip(1)
                .map(|s| s.parse::<f64>().map_err(|_| bad(s)))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    Ok(TrajectoryTable {
        labels,
        times,
        rows,
    })
}

/// Two-column `t value` text for plotting one point's history.
pub fn write_point_series(
    path: &Path,
    space: &DigitalSpace,
    traj: &Trajectory,
    point: PointId,
) -> Result<(), FormatError> {
    let i = space.index_of(point).ok_or(FormatError::UnknownPoint {
        path: path.to_path_buf(),
        point,
    })?;
    let mut text = format!("# t f_{point}\n");
    for f in traj.fields() {
        text.push_str(&format!("{} {}\n", f.t, format_value(f.values[i])));
    }
    fs::write(path, text).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_file_forms() {
        let scheme: CoefficientFile =
            serde_json::from_str(r#"{"scheme": "lazy_uniform", "w": 0.03}"#).unwrap();
        assert_eq!(
            scheme,
            CoefficientFile::Scheme {
                scheme: Scheme::LazyUniform,
                w: 0.03
            }
        );
        let entries: CoefficientFile =
            serde_json::from_str(r#"{"entries": [[1, 1, 0.5], [2, 1, 0.5]]}"#).unwrap();
        assert_eq!(
            entries,
            CoefficientFile::Entries {
                entries: vec![(1, 1, 0.5), (2, 1, 0.5)]
            }
        );
    }

    #[test]
    fn format_value_round_trips() {
        for x in [0.1, 1.0 / 3.0, 10.56, 1e-300, -2.5e17, 0.0] {
            assert_eq!(format_value(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn space_file_rejects_duplicates_and_reports_position() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        fs::write(&path, "{\"name\": \"x\",\n \"points\": [1, 2],\n \"edges\": [[1, 2], [2, 1]]}")
            .unwrap();
        assert!(matches!(
            read_space(&path),
            Err(FormatError::Space {
                source: SpaceError::DuplicateEdge(..),
                ..
            })
        ));
        fs::write(&path, "{\"name\": \"x\",\n \"points\": [1, 2,\n}").unwrap();
        match read_space(&path) {
            Err(FormatError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }
}
