//! Reading JSON inputs with errors that name the offending field.

use std::path::{Path, PathBuf};

use milef_core::exactgeom::{hull, vertices};
use milef_core::zoo::FormulationBundle;
use milef_core::{Error, HPolyhedron, QMatrix, Rational, VPolytope};
use milef_core::milef::Milef;
use serde::de::DeserializeOwned;
use serde_json::Value;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("reading {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: invalid JSON at `{field}`: {message}")]
    Json { path: PathBuf, field: String, message: String },
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::ResourceCap { .. }) => 3,
            _ => 1,
        }
    }
}

fn read_value(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|e| CliError::Json {
        path: path.into(),
        field: ".".into(),
        message: e.to_string(),
    })
}

fn decode<T: DeserializeOwned>(path: &Path, v: Value) -> Result<T, CliError> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let field = e.path().to_string();
        CliError::Json { path: path.into(), field, message: e.into_inner().to_string() }
    })
}

/// A formulation, given either bare or inside a bundle.
pub fn read_milef(path: &Path) -> Result<Milef, CliError> {
    let v = read_value(path)?;
    if v.get("milef").is_some() {
        Ok(decode::<FormulationBundle>(path, v)?.milef)
    } else {
        decode(path, v)
    }
}

pub fn read_bundle(path: &Path) -> Result<FormulationBundle, CliError> {
    decode(path, read_value(path)?)
}

/// A polytope given by vertices (`"vertices"` key) or by inequalities.
pub enum Body {
    V(VPolytope),
    H(HPolyhedron),
}

impl Body {
    pub fn into_v(self) -> Result<VPolytope, CliError> {
        match self {
            Body::V(p) => Ok(p),
            Body::H(h) => Ok(vertices(&h)?),
        }
    }

    pub fn into_h(self) -> Result<HPolyhedron, CliError> {
        match self {
            Body::V(p) => Ok(hull(&p.vertices)?),
            Body::H(h) => Ok(h),
        }
    }
}

pub fn read_body(path: &Path) -> Result<Body, CliError> {
    let v = read_value(path)?;
    if v.get("vertices").is_some() {
        Ok(Body::V(decode(path, v)?))
    } else {
        Ok(Body::H(decode(path, v)?))
    }
}

pub fn read_polytope(path: &Path) -> Result<VPolytope, CliError> {
    read_body(path)?.into_v()
}

/// A matrix as a list of rows of rationals.
pub fn read_matrix(path: &Path) -> Result<QMatrix, CliError> {
    let rows: Vec<Vec<Rational>> = decode(path, read_value(path)?)?;
    let cols = rows.first().map_or(0, Vec::len);
    if let Some(i) = rows.iter().position(|r| r.len() != cols) {
        return Err(CliError::Json {
            path: path.into(),
            field: format!("[{i}]"),
            message: format!("row has {} entries, expected {cols}", rows[i].len()),
        });
    }
    Ok(QMatrix::from_rows(&rows, cols))
}
