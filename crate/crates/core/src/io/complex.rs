use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use toml::Spanned;

use super::{
    at, check_schema, invalid, line_of, parse_error, parse_vertex_key, rational_error, read,
    serialize_opt_vertex_table, to_toml, IoError, ValidationError, SCHEMA_VERSION,
};
use crate::rational::{format_rational, parse_rational, sort_sign, Rational};
use crate::simplicial::{
    build_complex, validate_oriented, validate_pseudomanifold, GeometricRealization, OrientedPseudomanifold,
    SimplicialComplex, Simplex, TopologyError, VertexId,
};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComplex {
    schema_version: Spanned<u32>,
    dimension: Spanned<usize>,
    vertices: Spanned<Vec<VertexId>>,
    facets: Vec<Spanned<Vec<VertexId>>>,
    #[serde(default)]
    orientation: Option<Spanned<Vec<i8>>>,
    #[serde(default)]
    coordinates: Option<BTreeMap<String, Spanned<Vec<String>>>>,
    #[serde(default)]
    carriers: Option<BTreeMap<String, Spanned<Vec<VertexId>>>>,
}

#[derive(Serialize)]
struct ComplexOut<'a> {
    schema_version: u32,
    dimension: usize,
    vertices: &'a [VertexId],
    facets: &'a [Simplex],
    #[serde(skip_serializing_if = "Option::is_none")]
    orientation: Option<&'a [i8]>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "serialize_opt_vertex_table")]
    coordinates: Option<BTreeMap<VertexId, Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "serialize_opt_vertex_table")]
    carriers: Option<BTreeMap<VertexId, Simplex>>,
}

/// A complex file: the complex, an optional prescribed orientation,
/// optional vertex coordinates and optional carrier faces (for subdivided
/// simplices in the Sperner setting).
#[derive(Clone, Debug)]
pub struct ComplexFile {
    pub complex: SimplicialComplex,
    /// Facet signs relative to ascending tuples, in the complex's facet order.
    pub orientation: Option<Vec<i8>>,
    pub coordinates: Option<BTreeMap<VertexId, Vec<Rational>>>,
    pub carriers: Option<BTreeMap<VertexId, Simplex>>,
    file: String,
    facet_lines: Vec<(Vec<VertexId>, usize)>,
    coordinate_lines: BTreeMap<VertexId, usize>,
}

impl ComplexFile {
    pub fn load(path: &Path) -> Result<Self, IoError> {
        let (text, file) = read(path)?;
        Self::parse(&text, &file)
    }

    /// Parses a complex document; `file` names it in diagnostics.
    ///
    /// Facets may be listed in any vertex order. When `orientation` is
    /// given, entry `i` orients facet `i` as its listed tuple (`1`) or the
    /// opposite (`-1`).
    pub fn parse(text: &str, file: &str) -> Result<Self, IoError> {
        let raw: RawComplex = toml::from_str(text).map_err(|e| parse_error(file, text, e))?;
        check_schema(file, text, &raw.schema_version)?;
        let line = |span: std::ops::Range<usize>| Some(line_of(text, span.start));
        let facet_lines: Vec<(Vec<VertexId>, usize)> = raw
            .facets
            .iter()
            .map(|f| (f.get_ref().clone(), line_of(text, f.span().start)))
            .collect();
        let mut out = Self {
            complex: build_complex(vec![vec![0]]).expect("a point is a complex"),
            orientation: None,
            coordinates: None,
            carriers: None,
            file: file.to_string(),
            facet_lines,
            coordinate_lines: BTreeMap::new(),
        };
        let facets: Vec<Vec<VertexId>> = out.facet_lines.iter().map(|(f, _)| f.clone()).collect();
        out.complex = build_complex(facets.clone()).map_err(|e| out.topology_error(e))?;

        if out.complex.dim() != *raw.dimension.get_ref() {
            return Err(invalid(
                file,
                line(raw.dimension.span()),
                ValidationError::DimensionMismatch {
                    declared: *raw.dimension.get_ref(),
                    found: out.complex.dim(),
                },
            ));
        }
        let listed: BTreeSet<VertexId> = raw.vertices.get_ref().iter().copied().collect();
        let actual: BTreeSet<VertexId> = out.complex.vertices().iter().copied().collect();
        if let Some(&vertex) = listed.symmetric_difference(&actual).next() {
            return Err(invalid(
                file,
                line(raw.vertices.span()),
                ValidationError::VertexListMismatch { vertex },
            ));
        }
        if listed.len() != raw.vertices.get_ref().len() {
            return Err(at(file, line(raw.vertices.span()), "vertex list repeats a vertex"));
        }

        if let Some(o) = &raw.orientation {
            let l = line(o.span());
            let signs = o.get_ref();
            if signs.len() != facets.len() {
                return Err(invalid(
                    file,
                    l,
                    TopologyError::SignCountMismatch {
                        facets: facets.len(),
                        signs: signs.len(),
                    },
                ));
            }
            if let Some(index) = signs.iter().position(|s| *s != 1 && *s != -1) {
                return Err(invalid(file, l, TopologyError::InvalidSign { index }));
            }
            let by_facet: BTreeMap<Simplex, i8> = facets
                .iter()
                .zip(signs)
                .map(|(f, &s)| {
                    let mut sorted = f.clone();
                    sorted.sort_unstable();
                    (sorted, s * sort_sign(f))
                })
                .collect();
            out.orientation = Some(out.complex.facets().iter().map(|f| by_facet[f]).collect());
        }

        if let Some(coords) = &raw.coordinates {
            let mut map = BTreeMap::new();
            for (key, value) in coords {
                let l = line(value.span());
                let v = parse_vertex_key(file, l, key)?;
                let c = value
                    .get_ref()
                    .iter()
                    .map(|s| parse_rational(s).map_err(|e| rational_error(file, l, e)))
                    .collect::<Result<Vec<_>, _>>()?;
                if !actual.contains(&v) {
                    return Err(invalid(file, l, ValidationError::UnknownVertex { vertex: v }));
                }
                out.coordinate_lines.insert(v, l.unwrap_or(0));
                map.insert(v, c);
            }
            out.coordinates = Some(map);
        }

        if let Some(carriers) = &raw.carriers {
            let mut map = BTreeMap::new();
            for (key, value) in carriers {
                let l = line(value.span());
                let v = parse_vertex_key(file, l, key)?;
                if !actual.contains(&v) {
                    return Err(invalid(file, l, ValidationError::UnknownVertex { vertex: v }));
                }
                let mut face = value.get_ref().clone();
                face.sort_unstable();
                face.dedup();
                map.insert(v, face);
            }
            out.carriers = Some(map);
        }
        Ok(out)
    }

    pub fn file(&self) -> &str {
        &self.file
    }

    /// Validates the complex as an oriented pseudomanifold, using the
    /// prescribed orientation when there is one.
    pub fn manifold(&self, want_closed: bool) -> Result<OrientedPseudomanifold, IoError> {
        let r = match &self.orientation {
            Some(signs) => validate_oriented(self.complex.clone(), signs.clone(), want_closed),
            None => validate_pseudomanifold(self.complex.clone(), want_closed),
        };
        r.map_err(|e| self.topology_error(e))
    }

    pub fn realization(&self) -> Result<Option<GeometricRealization>, IoError> {
        match &self.coordinates {
            None => Ok(None),
            Some(c) => GeometricRealization::new(&self.complex, c.clone())
                .map(Some)
                .map_err(|e| self.topology_error(e)),
        }
    }

    /// Attaches a diagnostic to the line of the facet or vertex it names.
    pub fn topology_error(&self, e: TopologyError) -> IoError {
        let sorted = |f: &[VertexId]| {
            let mut s = f.to_vec();
            s.sort_unstable();
            s
        };
        let line = match &e {
            TopologyError::MixedDimension { index, .. } => self.facet_lines.get(*index).map(|x| x.1),
            TopologyError::DuplicateFacet { facet } => {
                let target = sorted(facet);
                self.facet_lines.iter().rev().find(|(f, _)| sorted(f) == target).map(|x| x.1)
            }
            TopologyError::DegenerateFacet { facet } | TopologyError::AffinelyDependent { facet } => {
                let target = sorted(facet);
                self.facet_lines.iter().find(|(f, _)| sorted(f) == target).map(|x| x.1)
            }
            TopologyError::NotPseudomanifold { face, .. } | TopologyError::IncoherentOrientation { face } => self
                .facet_lines
                .iter()
                .find(|(f, _)| face.iter().all(|v| f.contains(v)))
                .map(|x| x.1),
            TopologyError::MissingCoordinates { vertex } | TopologyError::CoordinateLength { vertex, .. } => {
                self.coordinate_lines.get(vertex).copied()
            }
            _ => None,
        };
        invalid(&self.file, line, e)
    }

    /// Document for an oriented pseudomanifold; the orientation is always
    /// written out.
    pub fn from_manifold(
        m: &OrientedPseudomanifold,
        realization: Option<&GeometricRealization>,
        carriers: Option<&BTreeMap<VertexId, Simplex>>,
    ) -> Self {
        Self {
            complex: m.complex().clone(),
            orientation: Some(m.signs().to_vec()),
            coordinates: realization.map(|r| {
                m.complex()
                    .vertices()
                    .iter()
                    .map(|v| (*v, r.coords(*v).expect("realization covers the complex").to_vec()))
                    .collect()
            }),
            carriers: carriers.cloned(),
            file: String::from("<generated>"),
            facet_lines: Vec::new(),
            coordinate_lines: BTreeMap::new(),
        }
    }

    pub fn to_toml(&self) -> String {
        to_toml(&ComplexOut {
            schema_version: SCHEMA_VERSION,
            dimension: self.complex.dim(),
            vertices: self.complex.vertices(),
            facets: self.complex.facets(),
            orientation: self.orientation.as_deref(),
            coordinates: self
                .coordinates
                .as_ref()
                .map(|c| c.iter().map(|(v, x)| (*v, x.iter().map(format_rational).collect())).collect()),
            carriers: self.carriers.clone(),
        })
    }

    /// Equality of everything a document says, ignoring where it came from.
    pub fn same_content(&self, other: &Self) -> bool {
        self.complex == other.complex
            && self.orientation == other.orientation
            && self.coordinates == other.coordinates
            && self.carriers == other.carriers
    }
}
