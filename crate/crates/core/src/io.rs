//! JSON encodings shared by the library and the command-line pipeline.
//!
//! Complex numbers serialize as `[re, im]` pairs and matrices as row-major
//! nested arrays, so files stay diffable and language-neutral. serde_json
//! prints shortest round-tripping decimals, which preserves every f64 bit
//! through a save/load cycle.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::EstimationReport;
use crate::frame::OperatorFrame;
use crate::group::GroupRepSpec;
use crate::matrix::{C64, OperatorMatrix};

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

fn unpair(p: [f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

/// Dense complex matrix: `{"dim": d, "entries": [[[re,im], ...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl MatrixJson {
    pub fn from_matrix(a: &OperatorMatrix) -> Self {
        let d = a.dim();
        let entries = (0..d)
            .map(|r| (0..d).map(|c| pair(a[(r, c)])).collect())
            .collect();
        MatrixJson { dim: d, entries }
    }

    pub fn to_matrix(&self) -> Result<OperatorMatrix> {
        if self.dim == 0
            || self.entries.len() != self.dim
            || self.entries.iter().any(|row| row.len() != self.dim)
        {
            return Err(Error::BadShape { dim: self.dim });
        }
        let flat: Vec<C64> = self
            .entries
            .iter()
            .flat_map(|row| row.iter().map(|&p| unpair(p)))
            .collect();
        OperatorMatrix::from_vec(self.dim, flat)
    }
}

/// Covariant-family tag attached to a frame file, enough to rebuild the
/// fiducial state and run family-specific diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupMetaJson {
    pub family: String,
    pub alpha: [f64; 2],
}

impl GroupMetaJson {
    pub fn zd(alpha: C64) -> Self {
        GroupMetaJson {
            family: "zd".to_string(),
            alpha: pair(alpha),
        }
    }

    pub fn alpha(&self) -> C64 {
        unpair(self.alpha)
    }
}

/// Weighted operator list: `{"dim", "weights", "elements"}` plus an
/// optional `"role": "dual"` marker and optional group metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameJson {
    pub dim: usize,
    pub weights: Vec<f64>,
    pub elements: Vec<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub role: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupMetaJson>,
}

impl FrameJson {
    pub fn from_frame(frame: &OperatorFrame) -> Self {
        FrameJson {
            dim: frame.system_dim(),
            weights: frame.weights().to_vec(),
            elements: frame.elements().iter().map(MatrixJson::from_matrix).collect(),
            role: None,
            group: None,
        }
    }

    pub fn with_role(mut self, role: &str) -> Self {
        self.role = Some(role.to_string());
        self
    }

    pub fn with_group(mut self, group: GroupMetaJson) -> Self {
        self.group = Some(group);
        self
    }

    pub fn to_frame(&self) -> Result<OperatorFrame> {
        let elements = self
            .elements
            .iter()
            .map(|m| m.to_matrix())
            .collect::<Result<Vec<_>>>()?;
        let frame = OperatorFrame::new(self.weights.clone(), elements)?;
        if frame.system_dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: frame.system_dim(),
            });
        }
        Ok(frame)
    }
}

/// Group representation input: `"kind"` selects between an explicit
/// weighted unitary list and a doubled-space projector decomposition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepSpecJson {
    pub dim: usize,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitaries: Option<Vec<MatrixJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projectors: Option<Vec<MatrixJson>>,
}

impl RepSpecJson {
    pub fn from_spec(spec: &GroupRepSpec) -> Self {
        match spec {
            GroupRepSpec::FiniteList {
                dim,
                unitaries,
                weights,
            } => RepSpecJson {
                dim: *dim,
                kind: "finite-list".to_string(),
                unitaries: Some(unitaries.iter().map(MatrixJson::from_matrix).collect()),
                weights: Some(weights.clone()),
                projectors: None,
            },
            GroupRepSpec::SubspaceDecomposition { dim, projectors } => RepSpecJson {
                dim: *dim,
                kind: "subspace-decomposition".to_string(),
                unitaries: None,
                weights: None,
                projectors: Some(projectors.iter().map(MatrixJson::from_matrix).collect()),
            },
        }
    }

    pub fn to_spec(&self) -> Result<GroupRepSpec> {
        let matrices = |items: &Option<Vec<MatrixJson>>, what: &str| -> Result<Vec<OperatorMatrix>> {
            items
                .as_ref()
                .ok_or_else(|| {
                    Error::InvalidParameter(format!("kind {:?} requires {what}", self.kind))
                })?
                .iter()
                .map(|m| m.to_matrix())
                .collect()
        };
        let spec = match self.kind.as_str() {
            "finite-list" => GroupRepSpec::FiniteList {
                dim: self.dim,
                unitaries: matrices(&self.unitaries, "unitaries")?,
                weights: self
                    .weights
                    .clone()
                    .ok_or_else(|| Error::InvalidParameter("finite-list requires weights".into()))?,
            },
            "subspace-decomposition" => GroupRepSpec::SubspaceDecomposition {
                dim: self.dim,
                projectors: matrices(&self.projectors, "projectors")?,
            },
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown representation kind {other:?}"
                )))
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Estimation result: `{"operator", "estimate", "std_error", "exact",
/// "shots", "seed"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportJson {
    pub operator: String,
    pub estimate: [f64; 2],
    pub std_error: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<[f64; 2]>,
    pub shots: u64,
    pub seed: u64,
}

impl ReportJson {
    pub fn from_report(report: &EstimationReport) -> Self {
        ReportJson {
            operator: report.operator_id.clone(),
            estimate: pair(report.estimate),
            std_error: report.std_error,
            exact: report.exact.map(pair),
            shots: report.shots,
            seed: report.seed,
        }
    }
}

/// Pretty-prints any serializable value to a file, newline-terminated.
pub fn save_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Parses a JSON file into the requested type.
pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}
