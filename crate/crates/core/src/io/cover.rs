use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use toml::Spanned;

use super::{
    check_schema, invalid, line_of, parse_error, parse_vertex_key, rational_error, read,
    serialize_opt_vertex_table, serialize_vertex_table, to_toml, IoError, ValidationError, SCHEMA_VERSION,
};
use crate::cover::{default_partition, Cover, CoverError, LabelSet, PartitionOfUnity};
use crate::rational::{format_rational, parse_rational};
use crate::simplicial::VertexId;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCover {
    schema_version: Spanned<u32>,
    num_sets: Spanned<usize>,
    labels: Spanned<BTreeMap<String, Spanned<Vec<usize>>>>,
    #[serde(default)]
    weights: Option<BTreeMap<String, Spanned<Vec<String>>>>,
}

#[derive(Serialize)]
struct CoverOut {
    schema_version: u32,
    num_sets: usize,
    #[serde(serialize_with = "serialize_vertex_table")]
    labels: BTreeMap<VertexId, Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "serialize_opt_vertex_table")]
    weights: Option<BTreeMap<VertexId, Vec<String>>>,
}

/// A cover file: labels per vertex and, optionally, a partition of unity.
#[derive(Clone, Debug)]
pub struct CoverFile {
    pub cover: Cover,
    pub partition: Option<PartitionOfUnity>,
    file: String,
    table_line: Option<usize>,
    label_lines: BTreeMap<VertexId, usize>,
    weight_lines: BTreeMap<VertexId, usize>,
}

impl CoverFile {
    pub fn load(path: &Path) -> Result<Self, IoError> {
        let (text, file) = read(path)?;
        Self::parse(&text, &file)
    }

    pub fn parse(text: &str, file: &str) -> Result<Self, IoError> {
        let raw: RawCover = toml::from_str(text).map_err(|e| parse_error(file, text, e))?;
        check_schema(file, text, &raw.schema_version)?;
        let num_sets = *raw.num_sets.get_ref();
        let mut out = Self {
            cover: Cover::new(num_sets, BTreeMap::new())
                .map_err(|e| invalid(file, Some(line_of(text, raw.num_sets.span().start)), e))?,
            partition: None,
            file: file.to_string(),
            table_line: Some(line_of(text, raw.labels.span().start)),
            label_lines: BTreeMap::new(),
            weight_lines: BTreeMap::new(),
        };
        let mut labels = BTreeMap::new();
        for (key, value) in raw.labels.get_ref() {
            let l = line_of(text, value.span().start);
            let v = parse_vertex_key(file, Some(l), key)?;
            out.label_lines.insert(v, l);
            let mut set = LabelSet::EMPTY;
            for &i in value.get_ref() {
                if i >= num_sets {
                    return Err(invalid(
                        file,
                        Some(l),
                        CoverError::LabelOutOfRange {
                            vertex: v,
                            label: i,
                            num_sets,
                        },
                    ));
                }
                set = set.union(LabelSet::singleton(i));
            }
            labels.insert(v, set);
        }
        out.cover = Cover::new(num_sets, labels).map_err(|e| out.cover_error(e))?;

        if let Some(weights) = &raw.weights {
            let mut map = BTreeMap::new();
            for (key, value) in weights {
                let l = line_of(text, value.span().start);
                let v = parse_vertex_key(file, Some(l), key)?;
                out.weight_lines.insert(v, l);
                let w = value
                    .get_ref()
                    .iter()
                    .map(|s| parse_rational(s).map_err(|e| rational_error(file, Some(l), e)))
                    .collect::<Result<Vec<_>, _>>()?;
                map.insert(v, w);
            }
            if let Some(&v) = out.cover.label_map().keys().find(|v| !map.contains_key(v)) {
                return Err(out.cover_error(CoverError::MissingVertex { vertex: v }));
            }
            if let Some(&v) = map.keys().find(|v| out.cover.labels(**v).is_none()) {
                let l = out.weight_lines.get(&v).copied();
                return Err(invalid(file, l, ValidationError::UnknownVertex { vertex: v }));
            }
            let phi = PartitionOfUnity::new(num_sets, map).map_err(|e| out.cover_error(e))?;
            phi.check_subordinate(&out.cover).map_err(|e| out.cover_error(e))?;
            out.partition = Some(phi);
        }
        Ok(out)
    }

    pub fn file(&self) -> &str {
        &self.file
    }

    /// The stored partition, or the uniform one.
    pub fn partition_or_default(&self) -> PartitionOfUnity {
        self.partition.clone().unwrap_or_else(|| default_partition(&self.cover))
    }

    /// Line of the entry for `vertex`, preferring the weights table for
    /// weight errors.
    pub fn line_of_vertex(&self, vertex: VertexId, weights: bool) -> Option<usize> {
        let table = if weights { &self.weight_lines } else { &self.label_lines };
        table.get(&vertex).or_else(|| self.label_lines.get(&vertex)).copied()
    }

    /// Attaches a diagnostic to the line of the vertex it names.
    pub fn cover_error(&self, e: CoverError) -> IoError {
        let line = match &e {
            CoverError::LabelOutOfRange { vertex, .. } | CoverError::EmptyLabels { vertex } => {
                self.line_of_vertex(*vertex, false)
            }
            CoverError::WeightLength { vertex, .. }
            | CoverError::NegativeWeight { vertex, .. }
            | CoverError::WeightSum { vertex, .. }
            | CoverError::NotSubordinate { vertex, .. } => self.line_of_vertex(*vertex, true),
            CoverError::MissingVertex { .. } => self.table_line,
            _ => None,
        };
        invalid(&self.file, line, e)
    }

    /// Diagnostic for an error naming `vertex`, at its line in this file.
    pub fn error_at_vertex(&self, vertex: VertexId, e: impl Into<ValidationError>) -> IoError {
        invalid(&self.file, self.line_of_vertex(vertex, false).or(self.table_line), e)
    }

    /// Fails unless the labelled vertices are exactly `expected`.
    pub fn check_vertices(&self, expected: &BTreeSet<VertexId>) -> Result<(), IoError> {
        if let Some(v) = self.cover.vertices().find(|v| !expected.contains(v)) {
            return Err(self.error_at_vertex(v, ValidationError::UnknownVertex { vertex: v }));
        }
        if let Some(&v) = expected.iter().find(|v| self.cover.labels(**v).is_none()) {
            return Err(invalid(&self.file, self.table_line, CoverError::MissingVertex { vertex: v }));
        }
        Ok(())
    }

    pub fn from_cover(cover: &Cover, partition: Option<&PartitionOfUnity>) -> Self {
        Self {
            cover: cover.clone(),
            partition: partition.cloned(),
            file: String::from("<generated>"),
            table_line: None,
            label_lines: BTreeMap::new(),
            weight_lines: BTreeMap::new(),
        }
    }

    pub fn to_toml(&self) -> String {
        to_toml(&CoverOut {
            schema_version: SCHEMA_VERSION,
            num_sets: self.cover.num_sets(),
            labels: self.cover.label_map().iter().map(|(v, s)| (*v, s.to_vec())).collect(),
            weights: self.partition.as_ref().map(|p| {
                p.weight_map()
                    .iter()
                    .map(|(v, w)| (*v, w.iter().map(format_rational).collect()))
                    .collect()
            }),
        })
    }

    pub fn same_content(&self, other: &Self) -> bool {
        self.cover == other.cover && self.partition == other.partition
    }
}
