//! Covers as per-vertex label sets, partitions of unity, and the PL map into
//! the standard simplex that they induce.
//!
//! Set `U_i` of a cover is the union of the open stars of the vertices whose
//! label set contains `i`. A point lies in `U_i` exactly when its carrier has
//! an `i`-labelled vertex, so the sets have empty common intersection exactly
//! when no simplex sees every label.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{format_rational, Rational};
use crate::simplicial::{
    OrientedPseudomanifold, SimplicialComplex, Simplex, Subdivision, VertexId,
};

/// Largest supported number of sets.
pub const MAX_SETS: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoverError {
    #[error("number of sets {num_sets} is outside 1..={MAX_SETS}")]
    BadSetCount { num_sets: usize },
    #[error("vertex {vertex} has label {label}, but there are only {num_sets} sets")]
    LabelOutOfRange {
        vertex: VertexId,
        label: usize,
        num_sets: usize,
    },
    #[error("vertex {vertex} has an empty label set")]
    EmptyLabels { vertex: VertexId },
    #[error("vertex {vertex} has no labels")]
    MissingVertex { vertex: VertexId },
    #[error("vertex {vertex} has {found} weights, expected {expected}")]
    WeightLength {
        vertex: VertexId,
        expected: usize,
        found: usize,
    },
    #[error("vertex {vertex} has negative weight at index {index}")]
    NegativeWeight { vertex: VertexId, index: usize },
    #[error("weights of vertex {vertex} sum to {}", format_rational(.sum))]
    WeightSum { vertex: VertexId, sum: Rational },
    #[error("vertex {vertex} has positive weight at {index}, which is not one of its labels")]
    NotSubordinate { vertex: VertexId, index: usize },
    #[error("cover has {cover} sets but the partition has {partition}")]
    SetCountMismatch { cover: usize, partition: usize },
}

/// A nonempty subset of `{0, .., 31}` as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LabelSet(u32);

impl LabelSet {
    pub const EMPTY: LabelSet = LabelSet(0);

    pub fn from_bits(bits: u32) -> Self {
        LabelSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        LabelSet(1 << i)
    }

    /// All of `0..num_sets`.
    pub fn full(num_sets: usize) -> Self {
        if num_sets >= 32 {
            LabelSet(u32::MAX)
        } else {
            LabelSet((1u32 << num_sets) - 1)
        }
    }

    pub fn contains(self, i: usize) -> bool {
        i < 32 && self.0 & (1 << i) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: Self) -> Self {
        LabelSet(self.0 | other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.0 & (1 << i) != 0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for LabelSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter()
            .fold(LabelSet::EMPTY, |acc, i| acc.union(LabelSet::singleton(i)))
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cover {
    num_sets: usize,
    labels: BTreeMap<VertexId, LabelSet>,
}

impl Cover {
    pub fn new(
        num_sets: usize,
        labels: BTreeMap<VertexId, LabelSet>,
    ) -> Result<Self, CoverError> {
        if num_sets == 0 || num_sets > MAX_SETS {
            return Err(CoverError::BadSetCount { num_sets });
        }
        let full = LabelSet::full(num_sets);
        for (&vertex, &set) in &labels {
            if set.is_empty() {
                return Err(CoverError::EmptyLabels { vertex });
            }
            if !set.is_subset(full) {
                let label = set.iter().find(|&i| i >= num_sets).unwrap_or(num_sets);
                return Err(CoverError::LabelOutOfRange {
                    vertex,
                    label,
                    num_sets,
                });
            }
        }
        Ok(Self { num_sets, labels })
    }

    /// Builds a cover from label lists.
    pub fn from_lists<I, L>(num_sets: usize, labels: I) -> Result<Self, CoverError>
    where
        I: IntoIterator<Item = (VertexId, L)>,
        L: IntoIterator<Item = usize>,
    {
        let mut map = BTreeMap::new();
        for (v, list) in labels {
            let list: Vec<usize> = list.into_iter().collect();
            if let Some(&label) = list.iter().find(|&&i| i >= num_sets.min(MAX_SETS)) {
                return Err(CoverError::LabelOutOfRange {
                    vertex: v,
                    label,
                    num_sets,
                });
            }
            map.insert(v, list.into_iter().collect());
        }
        Self::new(num_sets, map)
    }

    pub fn num_sets(&self) -> usize {
        self.num_sets
    }

    pub fn labels(&self, v: VertexId) -> Option<LabelSet> {
        self.labels.get(&v).copied()
    }

    pub fn label_map(&self) -> &BTreeMap<VertexId, LabelSet> {
        &self.labels
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.labels.keys().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Fails unless every vertex of `k` is labelled.
    pub fn check_defined_on(&self, k: &SimplicialComplex) -> Result<(), CoverError> {
        match k.vertices().iter().find(|v| !self.labels.contains_key(v)) {
            Some(&vertex) => Err(CoverError::MissingVertex { vertex }),
            None => Ok(()),
        }
    }

    /// Union of the label sets of `simplex`.
    pub fn union_on(&self, simplex: &[VertexId]) -> LabelSet {
        simplex
            .iter()
            .filter_map(|v| self.labels.get(v))
            .fold(LabelSet::EMPTY, |acc, &s| acc.union(s))
    }

    /// Renames vertices; vertices outside `map` are dropped.
    pub fn relabel_vertices(&self, map: &BTreeMap<VertexId, VertexId>) -> Cover {
        Cover {
            num_sets: self.num_sets,
            labels: self
                .labels
                .iter()
                .filter_map(|(v, &s)| map.get(v).map(|&w| (w, s)))
                .collect(),
        }
    }

    /// Applies a permutation of the index set to every label.
    pub fn permute_labels(&self, perm: &[usize]) -> Cover {
        Cover {
            num_sets: self.num_sets,
            labels: self
                .labels
                .iter()
                .map(|(&v, s)| (v, s.iter().map(|i| perm[i]).collect()))
                .collect(),
        }
    }

    /// Union of two covers with the same set count; `other` wins on overlap.
    pub fn merged(&self, other: &Cover) -> Result<Cover, CoverError> {
        if self.num_sets != other.num_sets {
            return Err(CoverError::SetCountMismatch {
                cover: self.num_sets,
                partition: other.num_sets,
            });
        }
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().map(|(&v, &s)| (v, s)));
        Ok(Cover {
            num_sets: self.num_sets,
            labels,
        })
    }
}

/// A simplex of `k` whose vertices jointly carry every label, if any.
///
/// The simplex returned is a minimal covering face of the first covering
/// facet, so it names exactly the vertices responsible.
pub fn covering_simplex(k: &SimplicialComplex, c: &Cover) -> Result<Option<Simplex>, CoverError> {
    c.check_defined_on(k)?;
    let full = LabelSet::full(c.num_sets());
    Ok(first_full_face(k.facets(), full, |v| c.labels(v).unwrap_or_default()))
}

pub(crate) fn first_full_face(
    facets: &[Simplex],
    full: LabelSet,
    labels: impl Fn(VertexId) -> LabelSet,
) -> Option<Simplex> {
    let union = |s: &[VertexId]| s.iter().fold(LabelSet::EMPTY, |a, &v| a.union(labels(v)));
    let facet = facets.iter().find(|f| union(f) == full)?;
    let mut face = facet.clone();
    let mut i = 0;
    while i < face.len() {
        let mut smaller = face.clone();
        smaller.remove(i);
        if union(&smaller) == full {
            face = smaller;
        } else {
            i += 1;
        }
    }
    Some(face)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionOfUnity {
    num_sets: usize,
    weights: BTreeMap<VertexId, Vec<Rational>>,
}

impl PartitionOfUnity {
    /// Checks lengths, nonnegativity and that each vector sums to one.
    pub fn new(
        num_sets: usize,
        weights: BTreeMap<VertexId, Vec<Rational>>,
    ) -> Result<Self, CoverError> {
        for (&vertex, w) in &weights {
            if w.len() != num_sets {
                return Err(CoverError::WeightLength {
                    vertex,
                    expected: num_sets,
                    found: w.len(),
                });
            }
            if let Some(index) = w.iter().position(|x| *x < Rational::zero()) {
                return Err(CoverError::NegativeWeight { vertex, index });
            }
            let sum: Rational = w.iter().sum();
            if !sum.is_one() {
                return Err(CoverError::WeightSum { vertex, sum });
            }
        }
        Ok(Self { num_sets, weights })
    }

    pub fn num_sets(&self) -> usize {
        self.num_sets
    }

    pub fn weights(&self, v: VertexId) -> Option<&[Rational]> {
        self.weights.get(&v).map(Vec::as_slice)
    }

    pub fn weight_map(&self) -> &BTreeMap<VertexId, Vec<Rational>> {
        &self.weights
    }

    /// Indices with positive weight at `v`.
    pub fn support(&self, v: VertexId) -> Option<LabelSet> {
        self.weights.get(&v).map(|w| support_of(w))
    }

    /// Every vertex of `c` has weights, and positive weight only on labels.
    pub fn check_subordinate(&self, c: &Cover) -> Result<(), CoverError> {
        if self.num_sets != c.num_sets() {
            return Err(CoverError::SetCountMismatch {
                cover: c.num_sets(),
                partition: self.num_sets,
            });
        }
        for (&vertex, &labels) in c.label_map() {
            let w = self
                .weights
                .get(&vertex)
                .ok_or(CoverError::MissingVertex { vertex })?;
            if let Some(index) = (0..w.len()).find(|&i| !w[i].is_zero() && !labels.contains(i)) {
                return Err(CoverError::NotSubordinate { vertex, index });
            }
        }
        Ok(())
    }
}

fn support_of(w: &[Rational]) -> LabelSet {
    w.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, _)| i)
        .collect()
}

/// Uniform weights over each vertex's labels.
pub fn default_partition(c: &Cover) -> PartitionOfUnity {
    let weights = c
        .label_map()
        .iter()
        .map(|(&v, &s)| {
            let share = Rational::new(1.into(), (s.len() as i64).into());
            let w = (0..c.num_sets())
                .map(|i| if s.contains(i) { share.clone() } else { Rational::zero() })
                .collect();
            (v, w)
        })
        .collect();
    PartitionOfUnity {
        num_sets: c.num_sets(),
        weights,
    }
}

/// Map from an oriented pseudomanifold into the standard simplex with
/// `num_sets` vertices, affine on each simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLMap {
    source: OrientedPseudomanifold,
    num_sets: usize,
    images: BTreeMap<VertexId, Vec<Rational>>,
}

impl PLMap {
    /// Direct construction from vertex images, which must be points of the
    /// simplex given by barycentric coordinates.
    pub fn from_images(
        source: OrientedPseudomanifold,
        num_sets: usize,
        images: BTreeMap<VertexId, Vec<Rational>>,
    ) -> Result<Self, CoverError> {
        let p = PartitionOfUnity::new(num_sets, images)?;
        if let Some(&vertex) = source
            .complex()
            .vertices()
            .iter()
            .find(|v| !p.weights.contains_key(v))
        {
            return Err(CoverError::MissingVertex { vertex });
        }
        Ok(Self {
            source,
            num_sets,
            images: p.weights,
        })
    }

    pub fn source(&self) -> &OrientedPseudomanifold {
        &self.source
    }

    /// Number of target vertices; the target simplex has dimension one less.
    pub fn num_sets(&self) -> usize {
        self.num_sets
    }

    pub fn image(&self, v: VertexId) -> &[Rational] {
        &self.images[&v]
    }

    pub fn images(&self) -> &BTreeMap<VertexId, Vec<Rational>> {
        &self.images
    }

    /// Same map with the orientation of the source reversed.
    pub fn with_reversed_source(&self) -> Self {
        Self {
            source: self.source.reversed(),
            ..self.clone()
        }
    }

    /// The cover read off the supports of the vertex images.
    pub fn support_cover(&self) -> Cover {
        Cover {
            num_sets: self.num_sets,
            labels: self
                .images
                .iter()
                .map(|(&v, w)| (v, support_of(w)))
                .collect(),
        }
    }
}

/// The map `x -> sum_i phi_i(x) v_i`.
pub fn pl_map(
    m: &OrientedPseudomanifold,
    c: &Cover,
    phi: &PartitionOfUnity,
) -> Result<PLMap, CoverError> {
    c.check_defined_on(m.complex())?;
    phi.check_subordinate(c)?;
    let images = m
        .complex()
        .vertices()
        .iter()
        .map(|v| (*v, phi.weights[v].clone()))
        .collect();
    Ok(PLMap {
        source: m.clone(),
        num_sets: c.num_sets(),
        images,
    })
}

/// `Ok(())` when every simplex misses some coordinate entirely, so the map
/// lands in the boundary; otherwise a minimal simplex whose image meets the
/// interior.
pub fn image_in_boundary(f: &PLMap) -> Result<(), Simplex> {
    let full = LabelSet::full(f.num_sets);
    match first_full_face(f.source.facets(), full, |v| support_of(&f.images[&v])) {
        Some(s) => Err(s),
        None => Ok(()),
    }
}

/// The labels of `c` on `vertices`.
pub fn restrict_cover(
    c: &Cover,
    vertices: impl IntoIterator<Item = VertexId>,
) -> Result<Cover, CoverError> {
    let mut labels = BTreeMap::new();
    for v in vertices {
        let s = c.labels(v).ok_or(CoverError::MissingVertex { vertex: v })?;
        labels.insert(v, s);
    }
    Ok(Cover {
        num_sets: c.num_sets,
        labels,
    })
}

/// Cover and partition reproducing a vertex map into the simplex with
/// `num_sets` vertices.
pub fn simplicial_map_as_cover(
    num_sets: usize,
    vertex_map: &BTreeMap<VertexId, usize>,
) -> Result<(Cover, PartitionOfUnity), CoverError> {
    let cover = Cover::from_lists(num_sets, vertex_map.iter().map(|(&v, &i)| (v, [i])))?;
    let phi = default_partition(&cover);
    Ok((cover, phi))
}

/// Pushes a cover and partition through a subdivision. Each new vertex gets
/// the weights of its position in the old simplex, so the PL map is
/// unchanged, and its labels are the support of those weights.
pub fn subdivide_cover(
    phi: &PartitionOfUnity,
    sub: &Subdivision,
) -> Result<(Cover, PartitionOfUnity), CoverError> {
    let weights = sub.transport(&phi.weights).ok_or_else(|| {
        let vertex = sub
            .points
            .values()
            .flat_map(|w| w.keys())
            .find(|u| !phi.weights.contains_key(u))
            .copied()
            .unwrap_or_default();
        CoverError::MissingVertex { vertex }
    })?;
    let labels = weights.iter().map(|(&v, w)| (v, support_of(w))).collect();
    let cover = Cover::new(phi.num_sets, labels)?;
    let phi = PartitionOfUnity::new(phi.num_sets, weights)?;
    Ok((cover, phi))
}
