use std::collections::{BTreeMap, BTreeSet};

use super::TopologyError;

pub type VertexId = u32;

/// A simplex as an ascending list of vertex ids.
pub type Simplex = Vec<VertexId>;

/// Pure simplicial complex given by its facets. Lower faces are implied.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    dim: usize,
    vertices: Vec<VertexId>,
    facets: Vec<Simplex>,
}

/// Validates a facet list and returns the complex in canonical order
/// (each facet ascending, facets sorted lexicographically).
pub fn build_complex<I, F>(facets: I) -> Result<SimplicialComplex, TopologyError>
where
    I: IntoIterator<Item = F>,
    F: IntoIterator<Item = VertexId>,
{
    let raw: Vec<Vec<VertexId>> = facets
        .into_iter()
        .map(|f| f.into_iter().collect())
        .collect();
    let Some(first) = raw.first() else {
        return Err(TopologyError::EmptyComplex);
    };
    let size = first.len();
    if size == 0 {
        return Err(TopologyError::EmptyComplex);
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(raw.len());
    for (index, f) in raw.iter().enumerate() {
        if f.len() != size {
            return Err(TopologyError::MixedDimension {
                expected: size - 1,
                found: f.len().saturating_sub(1),
                index,
            });
        }
        let mut s = f.clone();
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) {
            return Err(TopologyError::DegenerateFacet { facet: f.clone() });
        }
        if !seen.insert(s.clone()) {
            return Err(TopologyError::DuplicateFacet { facet: s });
        }
        out.push(s);
    }
    out.sort();
    let vertices: BTreeSet<VertexId> = out.iter().flatten().copied().collect();
    Ok(SimplicialComplex {
        dim: size - 1,
        vertices: vertices.into_iter().collect(),
        facets: out,
    })
}

impl SimplicialComplex {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn max_vertex(&self) -> VertexId {
        *self.vertices.last().expect("complexes are nonempty")
    }

    pub fn facet_index(&self, facet: &[VertexId]) -> Option<usize> {
        self.facets.binary_search_by(|f| f.as_slice().cmp(facet)).ok()
    }

    /// All faces of dimension `k`, sorted.
    pub fn faces(&self, k: usize) -> Vec<Simplex> {
        if k > self.dim {
            return Vec::new();
        }
        let mut set = BTreeSet::new();
        for f in &self.facets {
            for_each_subset(f, k + 1, |s| {
                set.insert(s.to_vec());
            });
        }
        set.into_iter().collect()
    }

    /// Faces of every dimension, grouped by dimension.
    pub fn all_faces(&self) -> Vec<Vec<Simplex>> {
        (0..=self.dim).map(|k| self.faces(k)).collect()
    }

    /// Codimension-one faces together with the facets containing them:
    /// `face -> [(facet index, position of the omitted vertex)]`.
    pub fn ridge_incidence(&self) -> BTreeMap<Simplex, Vec<(usize, usize)>> {
        let mut map: BTreeMap<Simplex, Vec<(usize, usize)>> = BTreeMap::new();
        if self.dim == 0 {
            return map;
        }
        for (fi, f) in self.facets.iter().enumerate() {
            for pos in 0..f.len() {
                let mut face = f.clone();
                face.remove(pos);
                map.entry(face).or_default().push((fi, pos));
            }
        }
        map
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.all_faces()
            .iter()
            .enumerate()
            .map(|(k, fs)| if k % 2 == 0 { fs.len() as i64 } else { -(fs.len() as i64) })
            .sum()
    }

    /// Relabels vertices by rank (smallest id becomes 0, and so on).
    pub fn canonical_relabeling(&self) -> BTreeMap<VertexId, VertexId> {
        self.vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as VertexId))
            .collect()
    }
}

/// Calls `f` on every `k`-element subset of the ascending slice `s`, in
/// lexicographic order.
pub(crate) fn for_each_subset(s: &[VertexId], k: usize, mut f: impl FnMut(&[VertexId])) {
    fn rec(
        s: &[VertexId],
        k: usize,
        start: usize,
        buf: &mut Vec<VertexId>,
        f: &mut dyn FnMut(&[VertexId]),
    ) {
        if buf.len() == k {
            f(buf);
            return;
        }
        let need = k - buf.len();
        for i in start..=s.len() - need {
            buf.push(s[i]);
            rec(s, k, i + 1, buf, f);
            buf.pop();
        }
    }
    if k > s.len() {
        return;
    }
    let mut buf = Vec::with_capacity(k);
    rec(s, k, 0, &mut buf, &mut f);
}

/// Facets of the boundary of the standard simplex on vertices `0..=dim+1`.
pub fn sphere_facets(dim: usize) -> Vec<Simplex> {
    let n = dim as VertexId + 2;
    (0..n)
        .rev()
        .map(|skip| (0..n).filter(|&v| v != skip).collect())
        .collect()
}

/// The single-facet complex on vertices `0..=dim`.
pub fn simplex_facets(dim: usize) -> Vec<Simplex> {
    vec![(0..=dim as VertexId).collect()]
}
