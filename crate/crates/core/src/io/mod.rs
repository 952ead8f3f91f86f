//! Text formats: complexes, covers and certificates as TOML documents.
//!
//! Every document carries `schema_version`. Rationals are strings `"p/q"`
//! in lowest terms (integers without the denominator). Tables keyed by
//! vertex use the decimal vertex id as key.

mod certificate;
mod complex;
mod cover;

pub use certificate::{
    CertificateDoc, KkmCertificateDoc, PrismCertificateDoc, RecheckFailure, RecheckSummary,
};
pub use complex::ComplexFile;
pub use cover::CoverFile;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::classify::WitnessError;
use crate::cover::CoverError;
use crate::rational::ParseRationalError;
use crate::search::{RecheckError, SearchError};
use crate::simplicial::{TopologyError, VertexId};

pub const SCHEMA_VERSION: u32 = 1;

/// Where a diagnostic points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Location {
    pub file: String,
    pub line: Option<usize>,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "{}:{}", self.file, l),
            None => f.write_str(&self.file),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValidationError {
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Recheck(#[from] RecheckError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error("vertex {vertex} is not a vertex of the complex")]
    UnknownVertex { vertex: VertexId },
    #[error("dimension is declared as {declared} but the facets have dimension {found}")]
    DimensionMismatch { declared: usize, found: usize },
    #[error("vertex list and facets disagree about vertex {vertex}")]
    VertexListMismatch { vertex: VertexId },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IoError {
    #[error("{file}: {message}")]
    Read { file: String, message: String },
    #[error("{location}: {message}")]
    Parse { location: Location, message: String },
    #[error("{location}: {error}")]
    Validation {
        location: Location,
        error: ValidationError,
    },
}

impl IoError {
    pub fn location(&self) -> Option<&Location> {
        match self {
            IoError::Read { .. } => None,
            IoError::Parse { location, .. } | IoError::Validation { location, .. } => Some(location),
        }
    }
}

pub(crate) fn read(path: &Path) -> Result<(String, String), IoError> {
    let file = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| IoError::Read {
        file: file.clone(),
        message: e.to_string(),
    })?;
    Ok((text, file))
}

/// 1-based line of a byte offset.
pub(crate) fn line_of(text: &str, offset: usize) -> usize {
    text.as_bytes()[..offset.min(text.len())].iter().filter(|&&b| b == b'\n').count() + 1
}

pub(crate) fn parse_error(file: &str, text: &str, e: toml::de::Error) -> IoError {
    IoError::Parse {
        location: Location {
            file: file.to_string(),
            line: e.span().map(|s| line_of(text, s.start)),
        },
        message: e.message().to_string(),
    }
}

pub(crate) fn at(file: &str, line: Option<usize>, message: impl Into<String>) -> IoError {
    IoError::Parse {
        location: Location {
            file: file.to_string(),
            line,
        },
        message: message.into(),
    }
}

pub(crate) fn invalid(file: &str, line: Option<usize>, error: impl Into<ValidationError>) -> IoError {
    IoError::Validation {
        location: Location {
            file: file.to_string(),
            line,
        },
        error: error.into(),
    }
}

pub(crate) fn check_schema(file: &str, text: &str, version: &toml::Spanned<u32>) -> Result<(), IoError> {
    if *version.get_ref() != SCHEMA_VERSION {
        return Err(at(
            file,
            Some(line_of(text, version.span().start)),
            format!("unsupported schema_version {}, expected {SCHEMA_VERSION}", version.get_ref()),
        ));
    }
    Ok(())
}

pub(crate) fn parse_vertex_key(file: &str, line: Option<usize>, key: &str) -> Result<VertexId, IoError> {
    key.parse()
        .map_err(|_| at(file, line, format!("table key {key:?} is not a vertex id")))
}

pub(crate) fn rational_error(file: &str, line: Option<usize>, e: ParseRationalError) -> IoError {
    at(file, line, e.to_string())
}

/// Serializes a vertex-keyed map with keys in numeric order.
pub(crate) struct VertexTable<'a, T>(pub &'a BTreeMap<VertexId, T>);

impl<T: Serialize> Serialize for VertexTable<'_, T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(&k.to_string(), v)?;
        }
        map.end()
    }
}

pub(crate) fn serialize_vertex_table<T: Serialize, S: Serializer>(
    m: &BTreeMap<VertexId, T>,
    s: S,
) -> Result<S::Ok, S::Error> {
    VertexTable(m).serialize(s)
}

pub(crate) fn serialize_opt_vertex_table<T: Serialize, S: Serializer>(
    m: &Option<BTreeMap<VertexId, T>>,
    s: S,
) -> Result<S::Ok, S::Error> {
    match m {
        Some(m) => VertexTable(m).serialize(s),
        None => s.serialize_none(),
    }
}

pub(crate) fn to_toml<T: Serialize>(value: &T) -> String {
    toml::to_string(value).expect("documents serialize to TOML")
}
