//! Problem files: a JSON object with the objective, the affine constraints,
//! the interior point and a recursive cone description.
//!
//! ```json
//! {
//!   "dimension": 3,
//!   "objective": [1.0, 0.0, 0.0],
//!   "affine": { "rows": [[1.0, 1.0, 1.0]], "rhs": [3.0] },
//!   "interior_point": [1.0, 1.0, 1.0],
//!   "cone": { "type": "orthant", "dim": 3 },
//!   "metadata": { "known_optimum": 0.0 }
//! }
//! ```
//!
//! PSD blocks use the packed svec coordinates of the library (row-major
//! lower triangle, off-diagonals scaled by √2); only the order is stored in
//! the cone object.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cones::{ConeSpec, ProductBlock};
use crate::error::Error;
use crate::linalg::Matrix;
use crate::reformulate::HPInstance;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{context}: {message}")]
pub struct SchemaError {
    pub context: String,
    pub message: String,
}

impl SchemaError {
    fn new(context: impl Into<String>, message: impl Into<String>) -> Self {
        Self { context: context.into(), message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineSection {
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub known_optimum: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator_seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockFile {
    pub start: usize,
    pub len: usize,
    pub cone: ConeFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConeFile {
    Orthant { dim: usize },
    Halfspace { a: Vec<f64> },
    Quadratic { matrix: Vec<Vec<f64>> },
    Psd { order: usize },
    Intersection { parts: Vec<ConeFile> },
    Product { blocks: Vec<BlockFile> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub dimension: usize,
    pub objective: Vec<f64>,
    pub affine: AffineSection,
    pub interior_point: Vec<f64>,
    pub cone: ConeFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

impl ConeFile {
    fn to_spec(&self, path: &str) -> Result<ConeSpec, SchemaError> {
        Ok(match self {
            ConeFile::Orthant { dim } => ConeSpec::Orthant { dim: *dim },
            ConeFile::Halfspace { a } => ConeSpec::Halfspace { a: a.clone() },
            ConeFile::Quadratic { matrix } => {
                let n = matrix.len();
                if matrix.iter().any(|r| r.len() != n) {
                    return Err(SchemaError::new(format!("{path}.matrix"), "matrix is not square"));
                }
                let b = Matrix::from_rows(matrix).map_err(|e| SchemaError::new(format!("{path}.matrix"), e.to_string()))?;
                if !b.is_symmetric(1e-12) {
                    return Err(SchemaError::new(format!("{path}.matrix"), "matrix is not symmetric"));
                }
                ConeSpec::Quadratic { b }
            }
            ConeFile::Psd { order } => ConeSpec::Psd { order: *order },
            ConeFile::Intersection { parts } => ConeSpec::Intersection {
                parts: parts
                    .iter()
                    .enumerate()
                    .map(|(i, p)| p.to_spec(&format!("{path}.parts[{i}]")))
                    .collect::<Result<_, _>>()?,
            },
            ConeFile::Product { blocks } => ConeSpec::Product {
                blocks: blocks
                    .iter()
                    .enumerate()
                    .map(|(i, b)| {
                        Ok(ProductBlock {
                            start: b.start,
                            len: b.len,
                            cone: b.cone.to_spec(&format!("{path}.blocks[{i}].cone"))?,
                        })
                    })
                    .collect::<Result<_, SchemaError>>()?,
            },
        })
    }

    pub fn from_spec(spec: &ConeSpec) -> Self {
        match spec {
            ConeSpec::Orthant { dim } => ConeFile::Orthant { dim: *dim },
            ConeSpec::Halfspace { a } => ConeFile::Halfspace { a: a.clone() },
            ConeSpec::Quadratic { b } => ConeFile::Quadratic { matrix: b.to_rows() },
            ConeSpec::Psd { order } => ConeFile::Psd { order: *order },
            ConeSpec::Intersection { parts } => {
                ConeFile::Intersection { parts: parts.iter().map(ConeFile::from_spec).collect() }
            }
            ConeSpec::Product { blocks } => ConeFile::Product {
                blocks: blocks
                    .iter()
                    .map(|b| BlockFile { start: b.start, len: b.len, cone: ConeFile::from_spec(&b.cone) })
                    .collect(),
            },
        }
    }
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, SchemaError> {
        serde_json::from_str(text)
            .map_err(|e| SchemaError::new(format!("line {} column {}", e.line(), e.column()), e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("problem files always serialize");
        s.push('\n');
        s
    }

    pub fn cone_spec(&self) -> Result<ConeSpec, SchemaError> {
        self.cone.to_spec("cone")
    }

    /// Structural checks that do not need any numerics.
    pub fn check_schema(&self) -> Result<ConeSpec, SchemaError> {
        let d = self.dimension;
        if self.objective.len() != d {
            return Err(SchemaError::new("objective", format!("length {} != dimension {d}", self.objective.len())));
        }
        if self.interior_point.len() != d {
            return Err(SchemaError::new(
                "interior_point",
                format!("length {} != dimension {d}", self.interior_point.len()),
            ));
        }
        if self.affine.rows.len() != self.affine.rhs.len() {
            return Err(SchemaError::new(
                "affine",
                format!("{} rows but {} rhs entries", self.affine.rows.len(), self.affine.rhs.len()),
            ));
        }
        if let Some(i) = self.affine.rows.iter().position(|r| r.len() != d) {
            return Err(SchemaError::new(format!("affine.rows[{i}]"), format!("row length != dimension {d}")));
        }
        let spec = self.cone_spec()?;
        let cd = spec.dim().map_err(|e| SchemaError::new("cone", e.to_string()))?;
        if cd != d {
            return Err(SchemaError::new("cone", format!("cone dimension {cd} != dimension {d}")));
        }
        Ok(spec)
    }

    pub fn to_instance(&self) -> Result<HPInstance, FileError> {
        let spec = self.check_schema()?;
        Ok(HPInstance::new(
            self.objective.clone(),
            self.affine.rows.clone(),
            self.affine.rhs.clone(),
            self.interior_point.clone(),
            spec,
        )?)
    }

    pub fn from_instance(inst: &HPInstance, metadata: Option<Metadata>) -> Self {
        Self {
            dimension: inst.dim(),
            objective: inst.c().to_vec(),
            affine: AffineSection { rows: inst.a_rows().to_vec(), rhs: inst.b().to_vec() },
            interior_point: inst.e().to_vec(),
            cone: ConeFile::from_spec(inst.cone_spec()),
            metadata,
        }
    }

    pub fn known_optimum(&self) -> Option<f64> {
        self.metadata.as_ref().and_then(|m| m.known_optimum)
    }
}

/// Failure to turn a file into a validated instance.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FileError {
    #[error("schema error at {0}")]
    Schema(#[from] SchemaError),
    #[error(transparent)]
    Model(#[from] Error),
}

pub fn parse_problem(text: &str) -> Result<HPInstance, FileError> {
    ProblemFile::parse(text)?.to_instance()
}

pub fn serialize_problem(inst: &HPInstance) -> String {
    ProblemFile::from_instance(inst, None).to_text()
}

#[cfg(test)]
mod tests {
    use super::*;

    const LP: &str = r#"{
        "dimension": 2,
        "objective": [1.0, 0.0],
        "affine": { "rows": [], "rhs": [] },
        "interior_point": [1.0, 1.0],
        "cone": { "type": "orthant", "dim": 2 }
    }"#;

    #[test]
    fn round_trip() {
        let inst = parse_problem(LP).unwrap();
        let text = serialize_problem(&inst);
        let again = parse_problem(&text).unwrap();
        assert_eq!(serialize_problem(&again), text);
        assert_eq!(again.c(), inst.c());
        assert_eq!(again.cone_spec(), inst.cone_spec());
    }

    #[test]
    fn missing_interior_point() {
        let text = LP.replace(r#""interior_point": [1.0, 1.0],"#, "");
        let err = ProblemFile::parse(&text).unwrap_err();
        assert!(err.message.contains("interior_point"), "{err}");
    }

    #[test]
    fn unknown_field_rejected() {
        let text = LP.replace(r#""dimension": 2,"#, r#""dimension": 2, "colour": 1,"#);
        assert!(ProblemFile::parse(&text).is_err());
        let text = LP.replace(r#""dim": 2"#, r#""dim": 2, "extra": true"#);
        assert!(ProblemFile::parse(&text).is_err());
    }

    #[test]
    fn nonsymmetric_quadratic_rejected() {
        let text = LP.replace(
            r#"{ "type": "orthant", "dim": 2 }"#,
            r#"{ "type": "quadratic", "matrix": [[-1.0, 0.5], [0.0, 1.0]] }"#,
        );
        let pf = ProblemFile::parse(&text).unwrap();
        let err = pf.check_schema().unwrap_err();
        assert_eq!(err.context, "cone.matrix");
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let text = LP.replace(r#""objective": [1.0, 0.0]"#, r#""objective": [1.0]"#);
        let err = ProblemFile::parse(&text).unwrap().check_schema().unwrap_err();
        assert_eq!(err.context, "objective");
    }
}
