//! Self-contained certificates: each embeds the complex and covers it
//! speaks about, so re-checking needs no other input.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Duration;

use num_bigint::BigUint;
use serde::de::Deserializer;
use serde::{Deserialize, Serialize};

use super::{at, line_of, parse_error, read, serialize_vertex_table, to_toml, IoError, ValidationError, SCHEMA_VERSION};
use crate::classify::{validate_prism_witness, PrismWitness};
use crate::cover::{Cover, LabelSet};
use crate::search::{recheck, Certificate, ExtensionProblem, LabelMode, PruneRecord, Verdict};
use crate::simplicial::{oriented_from_facets, prism, OrientedPseudomanifold, Simplex, VertexId};

fn deserialize_vertex_table<'de, D, T>(d: D) -> Result<BTreeMap<VertexId, T>, D::Error>
where
    D: Deserializer<'de>,
    T: Deserialize<'de>,
{
    let raw = BTreeMap::<String, T>::deserialize(d)?;
    raw.into_iter()
        .map(|(k, v)| {
            k.parse()
                .map(|k| (k, v))
                .map_err(|_| serde::de::Error::custom(format!("table key {k:?} is not a vertex id")))
        })
        .collect()
}

/// An oriented complex: facets ascending, signs relative to them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSection {
    pub dimension: usize,
    pub vertices: Vec<VertexId>,
    pub facets: Vec<Simplex>,
    pub orientation: Vec<i8>,
}

impl ComplexSection {
    pub fn from_manifold(m: &OrientedPseudomanifold) -> Self {
        Self {
            dimension: m.dim(),
            vertices: m.complex().vertices().to_vec(),
            facets: m.facets().to_vec(),
            orientation: m.signs().to_vec(),
        }
    }

    pub fn manifold(&self) -> Result<OrientedPseudomanifold, ValidationError> {
        let mut facets = Vec::with_capacity(self.facets.len());
        let mut signs = Vec::with_capacity(self.facets.len());
        if self.orientation.len() != self.facets.len() {
            return Err(crate::simplicial::TopologyError::SignCountMismatch {
                facets: self.facets.len(),
                signs: self.orientation.len(),
            }
            .into());
        }
        for (f, &s) in self.facets.iter().zip(&self.orientation) {
            let mut sorted = f.clone();
            sorted.sort_unstable();
            facets.push(sorted);
            signs.push(s * crate::rational::sort_sign(f));
        }
        let m = oriented_from_facets(facets, signs)?;
        if m.dim() != self.dimension {
            return Err(ValidationError::DimensionMismatch {
                declared: self.dimension,
                found: m.dim(),
            });
        }
        if let Some(&vertex) = m
            .complex()
            .vertices()
            .iter()
            .find(|v| !self.vertices.contains(v))
            .or_else(|| self.vertices.iter().find(|v| !m.complex().contains_vertex(**v)))
        {
            return Err(ValidationError::VertexListMismatch { vertex });
        }
        Ok(m)
    }
}

/// Labels per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelsSection {
    pub num_sets: usize,
    #[serde(serialize_with = "serialize_vertex_table", deserialize_with = "deserialize_vertex_table")]
    pub labels: BTreeMap<VertexId, Vec<usize>>,
}

impl LabelsSection {
    pub fn from_cover(c: &Cover) -> Self {
        Self {
            num_sets: c.num_sets(),
            labels: c.label_map().iter().map(|(v, s)| (*v, s.to_vec())).collect(),
        }
    }

    pub fn cover(&self) -> Result<Cover, ValidationError> {
        Ok(Cover::from_lists(self.num_sets, self.labels.iter().map(|(v, l)| (*v, l.clone())))?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PruneDoc {
    pub prefix: Vec<Vec<usize>>,
    pub facet: Simplex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KkmCertificateDoc {
    pub verdict: Verdict,
    pub mode: LabelMode,
    pub nodes: u64,
    pub budget: u64,
    /// Decimal count of assignments of allowed sets to the free vertices.
    pub space_size: String,
    pub free_vertices: Vec<VertexId>,
    pub complex: ComplexSection,
    pub boundary_cover: LabelsSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<LabelsSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub exhaustion: Vec<PruneDoc>,
}

impl KkmCertificateDoc {
    pub fn new(p: &ExtensionProblem, c: &Certificate) -> Self {
        Self {
            verdict: c.verdict,
            mode: c.mode,
            nodes: c.nodes,
            budget: c.budget,
            space_size: c.space_size.to_string(),
            free_vertices: p.free_vertices().to_vec(),
            complex: ComplexSection::from_manifold(p.ambient()),
            boundary_cover: LabelsSection::from_cover(p.boundary_cover()),
            witness: c.witness.as_ref().map(LabelsSection::from_cover),
            exhaustion: c
                .exhaustion
                .iter()
                .map(|r| PruneDoc {
                    prefix: r.prefix.iter().map(|s| s.to_vec()).collect(),
                    facet: r.facet.clone(),
                })
                .collect(),
        }
    }

    pub fn problem(&self) -> Result<ExtensionProblem, ValidationError> {
        let m = self.complex.manifold()?;
        let p = ExtensionProblem::new(m, self.boundary_cover.cover()?, self.mode)?;
        if p.free_vertices() != self.free_vertices.as_slice() {
            let vertex = p
                .free_vertices()
                .iter()
                .chain(&self.free_vertices)
                .find(|v| !(p.free_vertices().contains(v) && self.free_vertices.contains(v)))
                .copied()
                .unwrap_or_default();
            return Err(ValidationError::VertexListMismatch { vertex });
        }
        Ok(p)
    }

    pub fn certificate(&self) -> Result<Certificate, ValidationError> {
        let label_set = |l: &[usize]| l.iter().copied().collect::<LabelSet>();
        Ok(Certificate {
            verdict: self.verdict,
            mode: self.mode,
            witness: self.witness.as_ref().map(LabelsSection::cover).transpose()?,
            exhaustion: self
                .exhaustion
                .iter()
                .map(|r| PruneRecord {
                    prefix: r.prefix.iter().map(|l| label_set(l)).collect(),
                    facet: r.facet.clone(),
                })
                .collect(),
            nodes: self.nodes,
            budget: self.budget,
            space_size: self.space_size.parse::<BigUint>().unwrap_or_default(),
            elapsed: Duration::ZERO,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrismCertificateDoc {
    /// Barycentric subdivisions applied to the base before the prism.
    pub subdivisions: usize,
    pub base: ComplexSection,
    pub first: LabelsSection,
    pub second: LabelsSection,
    pub cover: LabelsSection,
}

impl PrismCertificateDoc {
    pub fn new(w: &PrismWitness) -> Self {
        Self {
            subdivisions: w.subdivisions,
            base: ComplexSection::from_manifold(&w.prism.base),
            first: LabelsSection::from_cover(&w.first),
            second: LabelsSection::from_cover(&w.second),
            cover: LabelsSection::from_cover(&w.cover),
        }
    }

    pub fn witness(&self) -> Result<PrismWitness, ValidationError> {
        let base = self.base.manifold()?;
        Ok(PrismWitness {
            prism: prism(&base, None)?,
            cover: self.cover.cover()?,
            first: self.first.cover()?,
            second: self.second.cover()?,
            subdivisions: self.subdivisions,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateDoc {
    Kkm(KkmCertificateDoc),
    PrismWitness(PrismCertificateDoc),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecheckSummary {
    pub kind: &'static str,
    pub verdict: Option<Verdict>,
}

/// Why a certificate could not be accepted.
pub type RecheckFailure = ValidationError;

#[derive(Serialize)]
struct Wrapper<'a> {
    schema_version: u32,
    certificate: &'a CertificateDoc,
}

impl CertificateDoc {
    pub fn kind(&self) -> &'static str {
        match self {
            CertificateDoc::Kkm(_) => "kkm",
            CertificateDoc::PrismWitness(_) => "prism_witness",
        }
    }

    /// A standalone document with the certificate under `[certificate]`.
    pub fn to_toml(&self) -> String {
        to_toml(&Wrapper {
            schema_version: SCHEMA_VERSION,
            certificate: self,
        })
    }

    pub fn load(path: &Path) -> Result<Self, IoError> {
        let (text, file) = read(path)?;
        Self::parse(&text, &file)
    }

    /// Reads the `[certificate]` table of any document that has one, such
    /// as a report from the search or homotopy commands.
    pub fn parse(text: &str, file: &str) -> Result<Self, IoError> {
        let mut table: toml::Table = toml::from_str(text).map_err(|e| parse_error(file, text, e))?;
        match table.get("schema_version") {
            Some(toml::Value::Integer(v)) if *v == i64::from(SCHEMA_VERSION) => {}
            Some(v) => return Err(at(file, None, format!("unsupported schema_version {v}"))),
            None => return Err(at(file, Some(1), "missing schema_version")),
        }
        let line = text
            .lines()
            .position(|l| l.trim_start().starts_with("[certificate"))
            .map(|i| i + 1);
        let value = table
            .remove("certificate")
            .ok_or_else(|| at(file, None, "document has no [certificate] table"))?;
        value
            .try_into()
            .map_err(|e: toml::de::Error| at(file, line.or(Some(line_of(text, 0))), e.message().to_string()))
    }

    /// Checks the certificate without repeating any search.
    pub fn recheck(&self) -> Result<RecheckSummary, RecheckFailure> {
        match self {
            CertificateDoc::Kkm(doc) => {
                let p = doc.problem()?;
                let c = doc.certificate()?;
                recheck(&p, &c)?;
                Ok(RecheckSummary {
                    kind: self.kind(),
                    verdict: Some(c.verdict),
                })
            }
            CertificateDoc::PrismWitness(doc) => {
                validate_prism_witness(&doc.witness()?)?;
                Ok(RecheckSummary {
                    kind: self.kind(),
                    verdict: None,
                })
            }
        }
    }
}
