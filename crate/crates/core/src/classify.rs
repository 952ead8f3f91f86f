//! Homotopy and cobordism verdicts for pairs of covers, each with the
//! evidence it rests on.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::cover::{covering_simplex, default_partition, pl_map, restrict_cover, subdivide_cover, Cover, CoverError};
use crate::invariants::{degree, InvariantError};
use crate::simplicial::{
    barycentric_subdivide, boundary_of, homology, prism, OrientedPseudomanifold, Prism, Simplex, TopologyError,
    VertexId,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("input cover {which} has a covering simplex {simplex:?}")]
    CoveringSimplexInInput { which: usize, simplex: Simplex },
    #[error("manifolds have dimensions {first} and {second}")]
    DimensionMismatch { first: usize, second: usize },
    #[error("covers use {first} and {second} sets")]
    SetCountMismatch { first: usize, second: usize },
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Homotopic,
    Cobordant,
    Distinct,
    NullCobordant,
    Unknown,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Homotopic => "homotopic",
            Relation::Cobordant => "cobordant",
            Relation::Distinct => "distinct",
            Relation::NullCobordant => "null_cobordant",
            Relation::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Basis {
    Witness,
    Invariant,
    Theorem,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Witness => "witness",
            Basis::Invariant => "invariant",
            Basis::Theorem => "theorem",
        })
    }
}

/// Results quoted rather than computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TheoremTag {
    /// Maps from a homology `m`-sphere to the `n`-sphere with `m != n` are
    /// null-cobordant.
    UnequalDimensionSpheres,
}

impl fmt::Display for TheoremTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TheoremTag::UnequalDimensionSpheres => "unequal_dimension_spheres",
        })
    }
}

/// Why no verdict could be reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Undecided {
    /// The source is not certified as a homology sphere.
    NotSphere,
    /// The two sources are not the same oriented complex up to relabelling.
    DifferentComplexes,
    /// Source dimension and set count do not match, and nothing else applies.
    DimensionGap,
}

impl fmt::Display for Undecided {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Undecided::NotSphere => "not_sphere",
            Undecided::DifferentComplexes => "different_complexes",
            Undecided::DimensionGap => "dimension_gap",
        })
    }
}

/// A cover on the prism over `base` restricting to `first` on the bottom
/// copy and `second` on the top copy. When `subdivisions > 0`, `base`,
/// `first` and `second` are the subdivided inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrismWitness {
    pub prism: Prism,
    pub cover: Cover,
    pub first: Cover,
    pub second: Cover,
    pub subdivisions: usize,
}

/// A cover `cover` on `manifold` whose boundary is the reversed first
/// source followed by the second, embedded by the two vertex maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CobordismWitness {
    pub manifold: OrientedPseudomanifold,
    pub cover: Cover,
    pub incoming: BTreeMap<VertexId, VertexId>,
    pub outgoing: BTreeMap<VertexId, VertexId>,
}

impl PrismWitness {
    pub fn as_cobordism(&self) -> CobordismWitness {
        CobordismWitness {
            manifold: self.prism.manifold.clone(),
            cover: self.cover.clone(),
            incoming: self.prism.layer_ids(crate::simplicial::Layer::Bottom),
            outgoing: self.prism.layer_ids(crate::simplicial::Layer::Top),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    Prism(Box<PrismWitness>),
    /// Degrees of the covers compared; `second` is absent for a single cover.
    Degrees {
        first: i64,
        second: Option<i64>,
        spheres_certified: bool,
    },
    Theorem(TheoremTag),
    Undecided(Undecided),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationVerdict {
    pub relation: Relation,
    pub evidence: Evidence,
}

impl ClassificationVerdict {
    pub fn basis(&self) -> Option<Basis> {
        match self.evidence {
            Evidence::Prism(_) => Some(Basis::Witness),
            Evidence::Degrees { .. } => Some(Basis::Invariant),
            Evidence::Theorem(_) => Some(Basis::Theorem),
            Evidence::Undecided(_) => None,
        }
    }

    fn unknown(why: Undecided) -> Self {
        Self {
            relation: Relation::Unknown,
            evidence: Evidence::Undecided(why),
        }
    }

    fn degrees(relation: Relation, first: i64, second: Option<i64>, spheres_certified: bool) -> Self {
        Self {
            relation,
            evidence: Evidence::Degrees {
                first,
                second,
                spheres_certified,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WitnessError {
    #[error("witness cover has a covering simplex {simplex:?}")]
    Covered { simplex: Simplex },
    #[error("witness boundary does not match the two ends")]
    BoundaryMismatch,
    #[error("witness cover differs from the end cover at vertex {vertex}")]
    RestrictionMismatch { vertex: VertexId },
    #[error("end embeddings overlap or are not injective")]
    BadEmbedding,
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

pub fn is_homology_sphere(m: &OrientedPseudomanifold) -> Result<bool, TopologyError> {
    let d = m.dim();
    Ok(m.is_closed() && homology(m.complex(), d)?.is_sphere(d))
}

/// Same oriented complex after renaming each vertex set by rank.
pub fn same_complex(a: &OrientedPseudomanifold, b: &OrientedPseudomanifold) -> bool {
    if a.complex().vertices().len() != b.complex().vertices().len() || a.dim() != b.dim() {
        return false;
    }
    let ra = a.relabel(&a.complex().canonical_relabeling());
    let rb = b.relabel(&b.complex().canonical_relabeling());
    matches!((ra, rb), (Ok(x), Ok(y)) if x == y)
}

fn check_input(m: &OrientedPseudomanifold, c: &Cover, which: usize) -> Result<(), ClassifyError> {
    if let Some(simplex) = covering_simplex(m.complex(), c)? {
        return Err(ClassifyError::CoveringSimplexInInput { which, simplex });
    }
    Ok(())
}

fn cover_degree(m: &OrientedPseudomanifold, c: &Cover) -> Result<i64, ClassifyError> {
    Ok(degree(&pl_map(m, c, &default_partition(c))?)?.degree)
}

/// The prism cover with `s1` below and `s2` above, if it has no covering
/// simplex.
pub fn prism_witness(
    m: &OrientedPseudomanifold,
    s1: &Cover,
    s2: &Cover,
    subdivisions: usize,
) -> Result<Option<PrismWitness>, ClassifyError> {
    let p = prism(m, None)?;
    let top = p.layer_ids(crate::simplicial::Layer::Top);
    let cover = s1.merged(&s2.relabel_vertices(&top))?;
    if covering_simplex(p.manifold.complex(), &cover)?.is_some() {
        return Ok(None);
    }
    Ok(Some(PrismWitness {
        prism: p,
        cover,
        first: s1.clone(),
        second: s2.clone(),
        subdivisions,
    }))
}

/// Decides whether two covers of a closed pseudomanifold are homotopic.
///
/// A prism cover is tried first, then degrees are compared. When the
/// degrees agree, up to `max_subdivisions` barycentric subdivisions are
/// tried for a prism witness before falling back on the sphere rule.
pub fn covers_homotopic(
    m: &OrientedPseudomanifold,
    s1: &Cover,
    s2: &Cover,
    max_subdivisions: usize,
) -> Result<ClassificationVerdict, ClassifyError> {
    if !m.is_closed() {
        return Err(TopologyError::NotClosed.into());
    }
    if s1.num_sets() != s2.num_sets() {
        return Err(ClassifyError::SetCountMismatch {
            first: s1.num_sets(),
            second: s2.num_sets(),
        });
    }
    check_input(m, s1, 1)?;
    check_input(m, s2, 2)?;
    if let Some(w) = prism_witness(m, s1, s2, 0)? {
        return Ok(ClassificationVerdict {
            relation: Relation::Homotopic,
            evidence: Evidence::Prism(Box::new(w)),
        });
    }
    let degrees = if s1.num_sets() == m.dim() + 2 {
        let (d1, d2) = (cover_degree(m, s1)?, cover_degree(m, s2)?);
        if d1 != d2 {
            let spheres = is_homology_sphere(m)?;
            return Ok(ClassificationVerdict::degrees(Relation::Distinct, d1, Some(d2), spheres));
        }
        Some(d1)
    } else {
        None
    };
    if max_subdivisions > 0 {
        let (p1, p2) = (default_partition(s1), default_partition(s2));
        for times in 1..=max_subdivisions {
            let (sm, sub) = barycentric_subdivide(m, times)?;
            let (c1, _) = subdivide_cover(&p1, &sub)?;
            let (c2, _) = subdivide_cover(&p2, &sub)?;
            if let Some(w) = prism_witness(&sm, &c1, &c2, times)? {
                return Ok(ClassificationVerdict {
                    relation: Relation::Homotopic,
                    evidence: Evidence::Prism(Box::new(w)),
                });
            }
        }
    }
    match degrees {
        Some(d) if is_homology_sphere(m)? => Ok(ClassificationVerdict::degrees(Relation::Homotopic, d, Some(d), true)),
        Some(_) => Ok(ClassificationVerdict::unknown(Undecided::NotSphere)),
        None => Ok(ClassificationVerdict::unknown(Undecided::DimensionGap)),
    }
}

/// Decides whether two covers with the same number of sets are cobordant.
pub fn covers_cobordant(
    m1: &OrientedPseudomanifold,
    s1: &Cover,
    m2: &OrientedPseudomanifold,
    s2: &Cover,
) -> Result<ClassificationVerdict, ClassifyError> {
    if m1.dim() != m2.dim() {
        return Err(ClassifyError::DimensionMismatch {
            first: m1.dim(),
            second: m2.dim(),
        });
    }
    if s1.num_sets() != s2.num_sets() {
        return Err(ClassifyError::SetCountMismatch {
            first: s1.num_sets(),
            second: s2.num_sets(),
        });
    }
    for m in [m1, m2] {
        if !m.is_closed() {
            return Err(TopologyError::NotClosed.into());
        }
    }
    check_input(m1, s1, 1)?;
    check_input(m2, s2, 2)?;
    let dim = m1.dim();
    let spheres = is_homology_sphere(m1)? && is_homology_sphere(m2)?;
    if s1.num_sets() == dim + 2 {
        let (d1, d2) = (cover_degree(m1, s1)?, cover_degree(m2, s2)?);
        if d1 == d2 {
            if same_complex(m1, m2) {
                return Ok(ClassificationVerdict::degrees(Relation::Cobordant, d1, Some(d2), spheres));
            }
            return Ok(ClassificationVerdict::unknown(Undecided::DifferentComplexes));
        }
        if spheres {
            return Ok(ClassificationVerdict::degrees(Relation::Distinct, d1, Some(d2), true));
        }
        return Ok(ClassificationVerdict::unknown(Undecided::NotSphere));
    }
    if spheres {
        return Ok(ClassificationVerdict {
            relation: Relation::Cobordant,
            evidence: Evidence::Theorem(TheoremTag::UnequalDimensionSpheres),
        });
    }
    Ok(ClassificationVerdict::unknown(Undecided::NotSphere))
}

/// Decides whether a single cover is cobordant to the empty one.
///
/// In the equal-dimension case this is degree zero. Otherwise the source
/// must be a certified homology sphere, in either direction of the gap: a
/// general manifold of low dimension need not bound at all.
pub fn null_cobordance(m: &OrientedPseudomanifold, s: &Cover) -> Result<ClassificationVerdict, ClassifyError> {
    if !m.is_closed() {
        return Err(TopologyError::NotClosed.into());
    }
    check_input(m, s, 1)?;
    if s.num_sets() == m.dim() + 2 {
        let d = cover_degree(m, s)?;
        let relation = if d == 0 { Relation::NullCobordant } else { Relation::Distinct };
        return Ok(ClassificationVerdict::degrees(relation, d, None, is_homology_sphere(m)?));
    }
    if is_homology_sphere(m)? {
        return Ok(ClassificationVerdict {
            relation: Relation::NullCobordant,
            evidence: Evidence::Theorem(TheoremTag::UnequalDimensionSpheres),
        });
    }
    Ok(ClassificationVerdict::unknown(Undecided::NotSphere))
}

/// Checks that a prism witness restricts to its two ends and has no
/// covering simplex.
pub fn validate_prism_witness(w: &PrismWitness) -> Result<(), WitnessError> {
    validate_cobordism_witness(&w.as_cobordism(), &w.prism.base, &w.first, &w.prism.base, &w.second)
}

/// Checks a cobordism witness: its boundary is the reversed first end plus
/// the second end, its cover has no covering simplex, and it restricts to
/// `s1` and `s2`.
pub fn validate_cobordism_witness(
    w: &CobordismWitness,
    m1: &OrientedPseudomanifold,
    s1: &Cover,
    m2: &OrientedPseudomanifold,
    s2: &Cover,
) -> Result<(), WitnessError> {
    let img1: BTreeSet<VertexId> = w.incoming.values().copied().collect();
    let img2: BTreeSet<VertexId> = w.outgoing.values().copied().collect();
    if img1.len() != w.incoming.len() || img2.len() != w.outgoing.len() || !img1.is_disjoint(&img2) {
        return Err(WitnessError::BadEmbedding);
    }
    let a = m1.relabel(&w.incoming)?.reversed();
    let b = m2.relabel(&w.outgoing)?;
    let mut expected: BTreeSet<(Simplex, i8)> = a.oriented_facets().map(|(f, s)| (f.clone(), s)).collect();
    expected.extend(b.oriented_facets().map(|(f, s)| (f.clone(), s)));
    let boundary = boundary_of(&w.manifold)?;
    let actual: BTreeSet<(Simplex, i8)> = boundary.oriented_facets().map(|(f, s)| (f.clone(), s)).collect();
    if actual != expected {
        return Err(WitnessError::BoundaryMismatch);
    }
    if let Some(simplex) = covering_simplex(w.manifold.complex(), &w.cover)? {
        return Err(WitnessError::Covered { simplex });
    }
    for (emb, s) in [(&w.incoming, s1), (&w.outgoing, s2)] {
        let r = restrict_cover(&w.cover, emb.values().copied())?;
        for (v, image) in emb {
            if s.labels(*v) != r.labels(*image) {
                return Err(WitnessError::RestrictionMismatch { vertex: *v });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{build_complex, sphere_facets, validate_pseudomanifold};

    fn sphere(n: usize) -> OrientedPseudomanifold {
        validate_pseudomanifold(build_complex(sphere_facets(n)).unwrap(), true).unwrap()
    }

    fn singletons(num_sets: usize, labels: &[usize]) -> Cover {
        Cover::from_lists(num_sets, labels.iter().enumerate().map(|(v, &l)| (v as u32, [l]))).unwrap()
    }

    #[test]
    fn identical_covers_have_a_prism_witness() {
        let m = sphere(2);
        let c = singletons(4, &[0, 1, 2, 3]);
        let v = covers_homotopic(&m, &c, &c, 0).unwrap();
        assert_eq!(v.relation, Relation::Homotopic);
        let Evidence::Prism(w) = &v.evidence else { panic!("expected a witness") };
        validate_prism_witness(w).unwrap();
    }

    #[test]
    fn opposite_degrees_are_distinct() {
        let m = sphere(2);
        let v = covers_homotopic(&m, &singletons(4, &[0, 1, 2, 3]), &singletons(4, &[1, 0, 2, 3]), 0).unwrap();
        assert_eq!(v.relation, Relation::Distinct);
        assert_eq!(
            v.evidence,
            Evidence::Degrees {
                first: 1,
                second: Some(-1),
                spheres_certified: true
            }
        );
    }

    #[test]
    fn null_cobordance_by_degree() {
        let m = sphere(1);
        assert_eq!(null_cobordance(&m, &singletons(3, &[0, 1, 2])).unwrap().relation, Relation::Distinct);
        let v = null_cobordance(&m, &singletons(3, &[0, 1, 1])).unwrap();
        assert_eq!(v.relation, Relation::NullCobordant);
        assert_eq!(v.basis(), Some(Basis::Invariant));
    }

    #[test]
    fn unequal_dimensions_use_the_theorem() {
        // the 2-sphere mapped to the circle
        let m = sphere(2);
        let v = null_cobordance(&m, &singletons(3, &[0, 0, 1, 1])).unwrap();
        assert_eq!(v.relation, Relation::NullCobordant);
        assert_eq!(v.basis(), Some(Basis::Theorem));
        let c = covers_cobordant(&m, &singletons(3, &[0, 0, 1, 1]), &m, &singletons(3, &[0, 0, 0, 1])).unwrap();
        assert_eq!(c.relation, Relation::Cobordant);
    }

    #[test]
    fn covering_input_is_rejected() {
        let m = sphere(1);
        let bad = Cover::from_lists(3, [(0, vec![0, 1, 2]), (1, vec![0]), (2, vec![1])]).unwrap();
        assert!(matches!(
            covers_homotopic(&m, &bad, &bad, 0),
            Err(ClassifyError::CoveringSimplexInInput { which: 1, .. })
        ));
    }

    #[test]
    fn tampered_witness_fails() {
        let m = sphere(1);
        let c = singletons(3, &[0, 1, 2]);
        let w = prism_witness(&m, &c, &c, 0).unwrap().unwrap();
        let mut bad = w.clone();
        bad.second = singletons(3, &[0, 2, 1]);
        assert!(matches!(validate_prism_witness(&bad), Err(WitnessError::RestrictionMismatch { .. })));
        let mut bad = w.clone();
        bad.prism.manifold = bad.prism.manifold.reversed();
        assert_eq!(validate_prism_witness(&bad), Err(WitnessError::BoundaryMismatch));
    }
}
