//! Exhaustive search for label extensions over the interior of a manifold
//! with boundary, with certificates that can be checked without repeating
//! the search.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};

use super::SearchError;
use crate::cover::{covering_simplex, first_full_face, Cover, LabelSet};
use crate::exec::par_range;
use crate::simplicial::{OrientedPseudomanifold, Simplex, VertexId};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Which label sets a free vertex may take.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelMode {
    /// One label per vertex, as in the Sperner setting.
    Singleton,
    /// Any nonempty set of labels.
    Subsets,
}

impl LabelMode {
    /// Allowed label sets in search order.
    pub fn domain(self, num_sets: usize) -> Vec<LabelSet> {
        match self {
            LabelMode::Singleton => (0..num_sets).map(LabelSet::singleton).collect(),
            LabelMode::Subsets => (1..=LabelSet::full(num_sets).bits()).map(LabelSet::from_bits).collect(),
        }
    }
}

/// Extend `boundary_cover` from the boundary of `ambient` to its interior
/// vertices without creating a simplex that sees every label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionProblem {
    ambient: OrientedPseudomanifold,
    boundary_cover: Cover,
    free_vertices: Vec<VertexId>,
    mode: LabelMode,
}

impl ExtensionProblem {
    pub fn new(
        ambient: OrientedPseudomanifold,
        boundary_cover: Cover,
        mode: LabelMode,
    ) -> Result<Self, SearchError> {
        let boundary = ambient.boundary_vertices();
        for &v in &boundary {
            if boundary_cover.labels(v).is_none() {
                return Err(SearchError::UnlabelledBoundaryVertex { vertex: v });
            }
        }
        if let Some(v) = boundary_cover.vertices().find(|v| !boundary.contains(v)) {
            return Err(SearchError::NotBoundaryVertex { vertex: v });
        }
        let full = LabelSet::full(boundary_cover.num_sets());
        let labels = |v| boundary_cover.labels(v).unwrap_or_default();
        if let Some(simplex) = first_full_face(ambient.boundary_faces(), full, labels) {
            return Err(SearchError::BoundaryCovered { simplex });
        }
        let free_vertices = ambient.interior_vertices();
        Ok(Self {
            ambient,
            boundary_cover,
            free_vertices,
            mode,
        })
    }

    pub fn ambient(&self) -> &OrientedPseudomanifold {
        &self.ambient
    }

    pub fn boundary_cover(&self) -> &Cover {
        &self.boundary_cover
    }

    pub fn free_vertices(&self) -> &[VertexId] {
        &self.free_vertices
    }

    pub fn mode(&self) -> LabelMode {
        self.mode
    }

    pub fn num_sets(&self) -> usize {
        self.boundary_cover.num_sets()
    }

    /// Number of assignments of allowed sets to the free vertices.
    pub fn space_size(&self) -> BigUint {
        let b = BigUint::from(self.mode.domain(self.num_sets()).len());
        b.pow(self.free_vertices.len())
    }

    /// The boundary cover extended by `assignment` (in free-vertex order).
    pub fn extension(&self, assignment: &[LabelSet]) -> Cover {
        let mut labels = self.boundary_cover.label_map().clone();
        labels.extend(self.free_vertices.iter().copied().zip(assignment.iter().copied()));
        Cover::new(self.num_sets(), labels).expect("labels drawn from the domain")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Every extension has a covering simplex.
    Obstructed,
    /// Some extension has none.
    Extendable,
    /// The node budget ran out first.
    Inconclusive,
}

/// One pruned branch: every completion of `prefix` (labels of the first
/// free vertices, in order) makes `facet` a covering simplex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PruneRecord {
    pub prefix: Vec<LabelSet>,
    pub facet: Simplex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub mode: LabelMode,
    /// Extension without a covering simplex, for `Extendable`.
    pub witness: Option<Cover>,
    /// Pruned branches in search order, for `Obstructed`. Together they
    /// partition the assignment space.
    pub exhaustion: Vec<PruneRecord>,
    /// Label assignments tried.
    pub nodes: u64,
    pub budget: u64,
    pub space_size: BigUint,
    /// Wall-clock time; not part of any serialized form.
    pub elapsed: Duration,
}

impl Certificate {
    pub fn is_complete(&self) -> bool {
        self.verdict != Verdict::Inconclusive
    }
}

struct Frame<'a> {
    problem: &'a ExtensionProblem,
    domain: Vec<LabelSet>,
    full: LabelSet,
    /// Per facet: union of boundary labels and the positions of its free
    /// vertices in the search order.
    facets: Vec<(LabelSet, Vec<usize>)>,
    /// Facets touching each free vertex, by search position.
    touching: Vec<Vec<usize>>,
}

impl<'a> Frame<'a> {
    fn new(problem: &'a ExtensionProblem) -> Self {
        let pos: BTreeMap<VertexId, usize> = problem
            .free_vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let mut touching = vec![Vec::new(); pos.len()];
        let facets: Vec<(LabelSet, Vec<usize>)> = problem
            .ambient
            .facets()
            .iter()
            .enumerate()
            .map(|(fi, f)| {
                let mut fixed = LabelSet::EMPTY;
                let mut free = Vec::new();
                for v in f {
                    match pos.get(v) {
                        Some(&p) => {
                            free.push(p);
                            touching[p].push(fi);
                        }
                        None => fixed = fixed.union(problem.boundary_cover.labels(*v).unwrap()),
                    }
                }
                (fixed, free)
            })
            .collect();
        Self {
            problem,
            domain: problem.mode.domain(problem.num_sets()),
            full: LabelSet::full(problem.num_sets()),
            facets,
            touching,
        }
    }

    /// First facet among those touching position `depth - 1` (or all facets
    /// at the root) that is covered by the assigned prefix.
    fn covered_facet(&self, assigned: &[LabelSet]) -> Option<usize> {
        let check = |fi: usize| {
            let (fixed, free) = &self.facets[fi];
            let u = free
                .iter()
                .filter(|&&p| p < assigned.len())
                .fold(*fixed, |acc, &p| acc.union(assigned[p]));
            u == self.full
        };
        match assigned.len() {
            0 => (0..self.facets.len()).find(|&fi| check(fi)),
            d => self.touching[d - 1].iter().copied().find(|&fi| check(fi)),
        }
    }
}

enum Outcome {
    Witness(Vec<LabelSet>),
    Exhausted,
    OverBudget,
}

struct Dfs<'f, 'a> {
    frame: &'f Frame<'a>,
    nodes: u64,
    budget: u64,
    records: Vec<PruneRecord>,
    assigned: Vec<LabelSet>,
}

impl Dfs<'_, '_> {
    fn run(&mut self) -> Outcome {
        let depth = self.assigned.len();
        if let Some(fi) = self.frame.covered_facet(&self.assigned) {
            self.records.push(PruneRecord {
                prefix: self.assigned.clone(),
                facet: self.frame.problem.ambient.facets()[fi].clone(),
            });
            return Outcome::Exhausted;
        }
        if depth == self.frame.problem.free_vertices.len() {
            return Outcome::Witness(self.assigned.clone());
        }
        for &label in &self.frame.domain {
            if self.nodes >= self.budget {
                return Outcome::OverBudget;
            }
            self.nodes += 1;
            self.assigned.push(label);
            let r = self.run();
            self.assigned.pop();
            match r {
                Outcome::Exhausted => {}
                other => return other,
            }
        }
        Outcome::Exhausted
    }
}

/// Decides whether the boundary cover extends over the interior without a
/// covering simplex. Free vertices are assigned in id order and labels in
/// ascending order; a branch is cut as soon as a facet sees every label.
pub fn verify_kkm(p: &ExtensionProblem, budget: u64) -> Certificate {
    let start = Instant::now();
    let frame = Frame::new(p);
    let finish = |verdict, witness: Option<Vec<LabelSet>>, records, nodes| Certificate {
        verdict,
        mode: p.mode,
        witness: witness.map(|w| p.extension(&w)),
        exhaustion: if verdict == Verdict::Obstructed { records } else { Vec::new() },
        nodes,
        budget,
        space_size: p.space_size(),
        elapsed: start.elapsed(),
    };

    // Root: a facet may already be covered by boundary labels alone, and
    // with no free vertices the boundary cover is the only candidate.
    let mut root = Dfs {
        frame: &frame,
        nodes: 0,
        budget,
        records: Vec::new(),
        assigned: Vec::new(),
    };
    if frame.covered_facet(&[]).is_some() || p.free_vertices.is_empty() {
        return match root.run() {
            Outcome::Witness(w) => finish(Verdict::Extendable, Some(w), Vec::new(), 0),
            _ => finish(Verdict::Obstructed, None, root.records, 0),
        };
    }

    // Subtrees below the first free vertex run independently, each with the
    // whole budget, and are merged in search order so the result matches a
    // sequential run node for node.
    let subtrees = par_range(frame.domain.len(), |i| {
        let mut dfs = Dfs {
            frame: &frame,
            nodes: 1,
            budget,
            records: Vec::new(),
            assigned: vec![frame.domain[i]],
        };
        let outcome = dfs.run();
        (outcome, dfs.nodes, dfs.records)
    });
    let mut nodes = 0u64;
    let mut records = Vec::new();
    for (outcome, n, recs) in subtrees {
        if nodes + n > budget || matches!(outcome, Outcome::OverBudget) {
            return finish(Verdict::Inconclusive, None, Vec::new(), budget);
        }
        nodes += n;
        match outcome {
            Outcome::Witness(w) => return finish(Verdict::Extendable, Some(w), Vec::new(), nodes),
            Outcome::Exhausted => records.extend(recs),
            Outcome::OverBudget => unreachable!(),
        }
    }
    finish(Verdict::Obstructed, None, records, nodes)
}

/// The first extension in search order with no covering simplex.
///
/// `Ok(None)` only says that no extension exists on this triangulation;
/// another manifold with the same boundary may still admit one.
pub fn find_extension(p: &ExtensionProblem, budget: u64) -> Result<Option<Cover>, SearchError> {
    let cert = verify_kkm(p, budget);
    match cert.verdict {
        Verdict::Extendable => Ok(cert.witness),
        Verdict::Obstructed => Ok(None),
        Verdict::Inconclusive => Err(SearchError::BudgetExceeded { budget }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RecheckError {
    #[error("witness has a covering simplex {simplex:?}")]
    WitnessCovered { simplex: Simplex },
    #[error("witness changes the boundary label of vertex {vertex}")]
    WitnessChangesBoundary { vertex: VertexId },
    #[error("witness is missing vertex {vertex} or labels it outside the search mode")]
    WitnessIncomplete { vertex: VertexId },
    #[error("verdict {verdict:?} lacks its evidence")]
    MissingEvidence { verdict: Verdict },
    #[error("pruned branch {index} has an invalid prefix")]
    BadPrefix { index: usize },
    #[error("pruned branches {index} and {next} are out of order or nested")]
    NotPrefixFree { index: usize, next: usize },
    #[error("pruned branches cover {covered} of {total} assignments")]
    IncompleteExhaustion { covered: BigUint, total: BigUint },
    #[error("facet {facet:?} of pruned branch {index} is not covered")]
    FacetNotCovered { index: usize, facet: Simplex },
    #[error("space size {claimed} does not match {actual}")]
    SpaceSize { claimed: BigUint, actual: BigUint },
    #[error("node count {nodes} exceeds the budget {budget}")]
    NodesOverBudget { nodes: u64, budget: u64 },
}

/// Checks a certificate against its problem without searching.
pub fn recheck(p: &ExtensionProblem, cert: &Certificate) -> Result<(), RecheckError> {
    if cert.space_size != p.space_size() {
        return Err(RecheckError::SpaceSize {
            claimed: cert.space_size.clone(),
            actual: p.space_size(),
        });
    }
    if cert.nodes > cert.budget {
        return Err(RecheckError::NodesOverBudget {
            nodes: cert.nodes,
            budget: cert.budget,
        });
    }
    match cert.verdict {
        Verdict::Inconclusive => Ok(()),
        Verdict::Extendable => {
            let w = cert.witness.as_ref().ok_or(RecheckError::MissingEvidence {
                verdict: cert.verdict,
            })?;
            check_witness(p, w)
        }
        Verdict::Obstructed => check_exhaustion(p, &cert.exhaustion),
    }
}

pub fn check_witness(p: &ExtensionProblem, w: &Cover) -> Result<(), RecheckError> {
    for (v, s) in p.boundary_cover.label_map() {
        if w.labels(*v) != Some(*s) {
            return Err(RecheckError::WitnessChangesBoundary { vertex: *v });
        }
    }
    let domain = p.mode.domain(p.num_sets());
    for &v in &p.free_vertices {
        match w.labels(v) {
            Some(s) if domain.contains(&s) => {}
            _ => return Err(RecheckError::WitnessIncomplete { vertex: v }),
        }
    }
    if let Some(&vertex) = w.label_map().keys().find(|v| !p.ambient.complex().contains_vertex(**v)) {
        return Err(RecheckError::WitnessIncomplete { vertex });
    }
    if w.num_sets() != p.num_sets() {
        return Err(RecheckError::WitnessIncomplete {
            vertex: p.free_vertices.first().copied().unwrap_or_default(),
        });
    }
    match covering_simplex(p.ambient.complex(), w) {
        Ok(None) => Ok(()),
        Ok(Some(simplex)) => Err(RecheckError::WitnessCovered { simplex }),
        Err(_) => Err(RecheckError::WitnessIncomplete {
            vertex: p.free_vertices.first().copied().unwrap_or_default(),
        }),
    }
}

fn check_exhaustion(p: &ExtensionProblem, records: &[PruneRecord]) -> Result<(), RecheckError> {
    if records.is_empty() {
        return Err(RecheckError::MissingEvidence {
            verdict: Verdict::Obstructed,
        });
    }
    let domain = p.mode.domain(p.num_sets());
    let rank: BTreeMap<LabelSet, usize> = domain.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let depth = p.free_vertices.len();
    let b = BigUint::from(domain.len());
    let mut covered = BigUint::zero();
    let full = LabelSet::full(p.num_sets());
    let mut keys: Vec<Vec<usize>> = Vec::with_capacity(records.len());
    for (index, r) in records.iter().enumerate() {
        if r.prefix.len() > depth {
            return Err(RecheckError::BadPrefix { index });
        }
        let key: Option<Vec<usize>> = r.prefix.iter().map(|s| rank.get(s).copied()).collect();
        let key = key.ok_or(RecheckError::BadPrefix { index })?;
        covered += b.clone().pow(depth - r.prefix.len());
        // the recorded facet must see every label under the prefix alone
        if p.ambient.complex().facet_index(&r.facet).is_none() {
            return Err(RecheckError::FacetNotCovered {
                index,
                facet: r.facet.clone(),
            });
        }
        let u = r.facet.iter().fold(LabelSet::EMPTY, |acc, v| {
            let s = match p.free_vertices.iter().position(|w| w == v) {
                Some(i) if i < r.prefix.len() => r.prefix[i],
                Some(_) => LabelSet::EMPTY,
                None => p.boundary_cover.labels(*v).unwrap_or_default(),
            };
            acc.union(s)
        });
        if u != full {
            return Err(RecheckError::FacetNotCovered {
                index,
                facet: r.facet.clone(),
            });
        }
        keys.push(key);
    }
    // Strictly increasing and no prefix of its successor: in lexicographic
    // order a nested pair would have to be adjacent.
    for i in 1..keys.len() {
        let (a, c) = (&keys[i - 1], &keys[i]);
        if a >= c || c.starts_with(a) {
            return Err(RecheckError::NotPrefixFree { index: i - 1, next: i });
        }
    }
    let total = b.pow(depth);
    if covered != total {
        return Err(RecheckError::IncompleteExhaustion { covered, total });
    }
    debug_assert!(!covered.is_zero() || total.is_one());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{build_complex, simplex_facets, validate_pseudomanifold};

    /// Cone over a hexagon: boundary 0..6, apex 6.
    fn hexagon_cone() -> OrientedPseudomanifold {
        let facets: Vec<Vec<u32>> = (0..6).map(|i| vec![i, (i + 1) % 6, 6]).collect();
        validate_pseudomanifold(build_complex(facets).unwrap(), false).unwrap()
    }

    fn boundary(labels: [usize; 6]) -> Cover {
        Cover::from_lists(3, labels.iter().enumerate().map(|(v, &l)| (v as u32, [l]))).unwrap()
    }

    #[test]
    fn degree_one_hexagon_is_obstructed() {
        let p = ExtensionProblem::new(hexagon_cone(), boundary([0, 0, 1, 1, 2, 2]), LabelMode::Singleton)
            .unwrap();
        let c = verify_kkm(&p, DEFAULT_BUDGET);
        assert_eq!(c.verdict, Verdict::Obstructed);
        assert_eq!(c.nodes, 3);
        assert_eq!(c.exhaustion.len(), 3);
        recheck(&p, &c).unwrap();
    }

    #[test]
    fn unused_label_extends() {
        let p = ExtensionProblem::new(hexagon_cone(), boundary([0, 1, 0, 1, 0, 1]), LabelMode::Singleton)
            .unwrap();
        let c = verify_kkm(&p, DEFAULT_BUDGET);
        assert_eq!(c.verdict, Verdict::Extendable);
        let w = c.witness.clone().unwrap();
        assert_eq!(w.labels(6), Some(LabelSet::singleton(0)));
        recheck(&p, &c).unwrap();
        assert_eq!(find_extension(&p, DEFAULT_BUDGET).unwrap(), Some(w));
    }

    #[test]
    fn no_free_vertices() {
        let disc = validate_pseudomanifold(build_complex(simplex_facets(2)).unwrap(), false).unwrap();
        let c = Cover::from_lists(3, [(0, [0]), (1, [1]), (2, [1])]).unwrap();
        let p = ExtensionProblem::new(disc.clone(), c.clone(), LabelMode::Singleton).unwrap();
        let cert = verify_kkm(&p, DEFAULT_BUDGET);
        assert_eq!(cert.verdict, Verdict::Extendable);
        assert_eq!(cert.witness, Some(c));
        recheck(&p, &cert).unwrap();

        // all three labels on the boundary of a single triangle: the
        // boundary itself is fine but the triangle is covered
        let c = Cover::from_lists(3, [(0, [0]), (1, [1]), (2, [2])]).unwrap();
        let p = ExtensionProblem::new(disc, c, LabelMode::Singleton).unwrap();
        let cert = verify_kkm(&p, DEFAULT_BUDGET);
        assert_eq!(cert.verdict, Verdict::Obstructed);
        assert_eq!(cert.exhaustion[0].prefix, Vec::new());
        recheck(&p, &cert).unwrap();
    }

    #[test]
    fn budget_makes_it_inconclusive() {
        let p = ExtensionProblem::new(hexagon_cone(), boundary([0, 0, 1, 1, 2, 2]), LabelMode::Subsets)
            .unwrap();
        let c = verify_kkm(&p, 2);
        assert_eq!(c.verdict, Verdict::Inconclusive);
        assert_eq!(c.nodes, 2);
        assert!(matches!(find_extension(&p, 2), Err(SearchError::BudgetExceeded { budget: 2 })));
    }

    #[test]
    fn tampered_certificates_fail() {
        let p = ExtensionProblem::new(hexagon_cone(), boundary([0, 1, 0, 1, 0, 1]), LabelMode::Singleton)
            .unwrap();
        let mut c = verify_kkm(&p, DEFAULT_BUDGET);
        let w = c.witness.as_ref().unwrap();
        let mut labels = w.label_map().clone();
        labels.insert(6, LabelSet::singleton(2));
        c.witness = Some(Cover::new(3, labels).unwrap());
        assert!(matches!(recheck(&p, &c), Err(RecheckError::WitnessCovered { .. })));

        let p = ExtensionProblem::new(hexagon_cone(), boundary([0, 0, 1, 1, 2, 2]), LabelMode::Singleton)
            .unwrap();
        let mut c = verify_kkm(&p, DEFAULT_BUDGET);
        c.exhaustion.pop();
        assert!(matches!(recheck(&p, &c), Err(RecheckError::IncompleteExhaustion { .. })));
    }

    #[test]
    fn boundary_must_not_be_covered() {
        let facets: Vec<Vec<u32>> = (0..6).map(|i| vec![i, (i + 1) % 6, 6]).collect();
        let m = validate_pseudomanifold(build_complex(facets).unwrap(), false).unwrap();
        let c = Cover::from_lists(3, (0..6).map(|v| (v, vec![0, 1, 2]))).unwrap();
        assert!(matches!(
            ExtensionProblem::new(m, c, LabelMode::Singleton),
            Err(SearchError::BoundaryCovered { .. })
        ));
    }
}
