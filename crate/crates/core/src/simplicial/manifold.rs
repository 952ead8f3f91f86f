use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::complex::{build_complex, SimplicialComplex, Simplex, VertexId};
use super::TopologyError;
use crate::rational::sort_sign;

/// Orientation induced on the face obtained by deleting the vertex at
/// `pos` from a `dim`-simplex whose ascending tuple carries `facet_sign`.
///
/// Convention: the face tuple followed by the deleted vertex reproduces the
/// orientation of the facet. On the standard simplex `[0, ..., d]` this
/// makes the face `[0, ..., d-1]` positive, so the boundary of a positively
/// oriented simplex is the canonical orientation of the sphere it bounds.
pub fn induced_sign(facet_sign: i8, dim: usize, pos: usize) -> i8 {
    if (dim - pos).is_multiple_of(2) {
        facet_sign
    } else {
        -facet_sign
    }
}

/// A pure complex in which every ridge lies in one or two facets, with a
/// coherent orientation: each facet carries a sign relative to its ascending
/// vertex tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrientedPseudomanifold {
    complex: SimplicialComplex,
    signs: Vec<i8>,
    boundary: Vec<Simplex>,
}

impl OrientedPseudomanifold {
    /// Checks the ridge condition and orientation coherence. Connectivity is
    /// not required here (boundaries of cylinders are disconnected).
    pub fn with_orientation(
        complex: SimplicialComplex,
        signs: Vec<i8>,
    ) -> Result<Self, TopologyError> {
        if signs.len() != complex.num_facets() {
            return Err(TopologyError::SignCountMismatch {
                facets: complex.num_facets(),
                signs: signs.len(),
            });
        }
        if let Some(bad) = signs.iter().position(|s| *s != 1 && *s != -1) {
            return Err(TopologyError::InvalidSign { index: bad });
        }
        let d = complex.dim();
        let mut boundary = Vec::new();
        for (face, inc) in complex.ridge_incidence() {
            match inc.as_slice() {
                [_] => boundary.push(face),
                [(f1, p1), (f2, p2)] => {
                    let a = induced_sign(signs[*f1], d, *p1);
                    let b = induced_sign(signs[*f2], d, *p2);
                    if a + b != 0 {
                        return Err(TopologyError::IncoherentOrientation { face });
                    }
                }
                more => {
                    return Err(TopologyError::NotPseudomanifold {
                        face,
                        count: more.len(),
                    })
                }
            }
        }
        Ok(Self {
            complex,
            signs,
            boundary,
        })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.complex.dim()
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn facets(&self) -> &[Simplex] {
        self.complex.facets()
    }

    pub fn oriented_facets(&self) -> impl Iterator<Item = (&Simplex, i8)> + '_ {
        self.complex.facets().iter().zip(self.signs.iter().copied())
    }

    pub fn is_closed(&self) -> bool {
        self.boundary.is_empty()
    }

    pub fn boundary_faces(&self) -> &[Simplex] {
        &self.boundary
    }

    pub fn boundary_vertices(&self) -> BTreeSet<VertexId> {
        self.boundary.iter().flatten().copied().collect()
    }

    pub fn interior_vertices(&self) -> Vec<VertexId> {
        let b = self.boundary_vertices();
        self.complex
            .vertices()
            .iter()
            .copied()
            .filter(|v| !b.contains(v))
            .collect()
    }

    /// Same complex with every facet sign flipped.
    pub fn reversed(&self) -> Self {
        Self {
            complex: self.complex.clone(),
            signs: self.signs.iter().map(|s| -s).collect(),
            boundary: self.boundary.clone(),
        }
    }

    /// Orientation of a facet as an explicit vertex tuple: the ascending
    /// tuple, with the last two entries swapped when the sign is negative.
    pub fn orientation_tuple(&self, index: usize) -> Vec<VertexId> {
        let mut t = self.complex.facets()[index].clone();
        if self.signs[index] < 0 && t.len() >= 2 {
            let n = t.len();
            t.swap(n - 2, n - 1);
        }
        t
    }

    /// Facet index groups connected through interior ridges, ordered by
    /// smallest facet index.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.complex.num_facets();
        let adj = facet_adjacency(&self.complex);
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(f) = queue.pop_front() {
                comp.push(f);
                for &(g, _, _) in &adj[f] {
                    if !seen[g] {
                        seen[g] = true;
                        queue.push_back(g);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Sub-pseudomanifold spanned by the given facets.
    pub fn sub_manifold(&self, facet_indices: &[usize]) -> Result<Self, TopologyError> {
        let facets: Vec<Simplex> = facet_indices
            .iter()
            .map(|&i| self.complex.facets()[i].clone())
            .collect();
        let k = build_complex(facets)?;
        let signs = k
            .facets()
            .iter()
            .map(|f| self.signs[self.complex.facet_index(f).expect("facet present")])
            .collect();
        Self::with_orientation(k, signs)
    }

    /// Connected pieces as separate pseudomanifolds.
    pub fn component_manifolds(&self) -> Vec<Self> {
        self.components()
            .iter()
            .map(|c| self.sub_manifold(c).expect("components of a valid pseudomanifold"))
            .collect()
    }

    /// Renames vertices. The map must be injective on the vertex set.
    pub fn relabel(&self, map: &BTreeMap<VertexId, VertexId>) -> Result<Self, TopologyError> {
        let mut facets = Vec::new();
        let mut signs = Vec::new();
        for (f, s) in self.oriented_facets() {
            let image: Vec<VertexId> = f
                .iter()
                .map(|v| {
                    map.get(v)
                        .copied()
                        .ok_or(TopologyError::MissingVertex { vertex: *v })
                })
                .collect::<Result<_, _>>()?;
            let sign = s * sort_sign(&image);
            let mut sorted = image;
            sorted.sort_unstable();
            facets.push(sorted);
            signs.push(sign);
        }
        oriented_from_facets(facets, signs)
    }
}

/// Builds a pseudomanifold from ascending facets and their signs, in any order.
pub fn oriented_from_facets(
    facets: Vec<Simplex>,
    signs: Vec<i8>,
) -> Result<OrientedPseudomanifold, TopologyError> {
    let lookup: BTreeMap<Simplex, i8> = facets.iter().cloned().zip(signs).collect();
    let k = build_complex(facets)?;
    let signs = k.facets().iter().map(|f| lookup[f]).collect();
    OrientedPseudomanifold::with_orientation(k, signs)
}

/// `adj[f] = [(g, pos in f, pos in g)]` across interior ridges.
fn facet_adjacency(k: &SimplicialComplex) -> Vec<Vec<(usize, usize, usize)>> {
    let mut adj = vec![Vec::new(); k.num_facets()];
    for inc in k.ridge_incidence().values() {
        if let [(f1, p1), (f2, p2)] = inc.as_slice() {
            adj[*f1].push((*f2, *p1, *p2));
            adj[*f2].push((*f1, *p2, *p1));
        }
    }
    adj
}

/// Validates `k` as a strongly connected orientable pseudomanifold and
/// chooses its orientation with the first facet positive.
pub fn validate_pseudomanifold(
    k: SimplicialComplex,
    want_closed: bool,
) -> Result<OrientedPseudomanifold, TopologyError> {
    if k.dim() == 0 {
        return Err(TopologyError::DimensionTooLow { dim: 0, need: 1 });
    }
    for (face, inc) in k.ridge_incidence() {
        if inc.len() > 2 {
            return Err(TopologyError::NotPseudomanifold {
                face,
                count: inc.len(),
            });
        }
    }
    let adj = facet_adjacency(&k);
    let n = k.num_facets();
    let mut signs = vec![0i8; n];
    signs[0] = 1;
    let mut queue = VecDeque::from([0usize]);
    let mut reached = 1;
    let mut orientable = true;
    while let Some(f) = queue.pop_front() {
        for &(g, pf, pg) in &adj[f] {
            // The two induced signs on the shared ridge must cancel.
            let want = if (pf + pg) % 2 == 0 { -signs[f] } else { signs[f] };
            if signs[g] == 0 {
                signs[g] = want;
                reached += 1;
                queue.push_back(g);
            } else if signs[g] != want {
                orientable = false;
            }
        }
    }
    if reached != n {
        let comps = OrientedPseudomanifold {
            complex: k.clone(),
            signs: vec![1; n],
            boundary: Vec::new(),
        }
        .components()
        .len();
        return Err(TopologyError::NotStronglyConnected { components: comps });
    }
    if !orientable {
        return Err(TopologyError::NonOrientable);
    }
    let m = OrientedPseudomanifold::with_orientation(k, signs)?;
    if want_closed && !m.is_closed() {
        return Err(TopologyError::HasBoundary {
            faces: m.boundary.len(),
        });
    }
    Ok(m)
}

/// Validates a complex whose orientation is prescribed.
pub fn validate_oriented(
    k: SimplicialComplex,
    signs: Vec<i8>,
    want_closed: bool,
) -> Result<OrientedPseudomanifold, TopologyError> {
    // Run the unoriented checks first so errors are reported in the same order.
    validate_pseudomanifold(k.clone(), false)?;
    let m = OrientedPseudomanifold::with_orientation(k, signs)?;
    if want_closed && !m.is_closed() {
        return Err(TopologyError::HasBoundary {
            faces: m.boundary.len(),
        });
    }
    Ok(m)
}

/// Boundary with the induced orientation; see [`induced_sign`].
pub fn boundary_of(m: &OrientedPseudomanifold) -> Result<OrientedPseudomanifold, TopologyError> {
    if m.is_closed() {
        return Err(TopologyError::EmptyBoundary);
    }
    let d = m.dim();
    let bset: BTreeSet<&Simplex> = m.boundary.iter().collect();
    let mut facets = Vec::new();
    let mut signs = Vec::new();
    for (f, s) in m.oriented_facets() {
        for pos in 0..f.len() {
            let mut face = f.clone();
            face.remove(pos);
            if bset.contains(&face) {
                facets.push(face);
                signs.push(induced_sign(s, d, pos));
            }
        }
    }
    oriented_from_facets(facets, signs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::complex::{simplex_facets, sphere_facets};

    pub(crate) fn rp2() -> SimplicialComplex {
        build_complex(vec![
            vec![1, 2, 3],
            vec![1, 2, 4],
            vec![1, 3, 5],
            vec![1, 4, 6],
            vec![1, 5, 6],
            vec![2, 3, 6],
            vec![2, 4, 5],
            vec![2, 5, 6],
            vec![3, 4, 5],
            vec![3, 4, 6],
        ])
        .unwrap()
    }

    #[test]
    fn sphere_is_closed_and_orientable() {
        let m = validate_pseudomanifold(build_complex(sphere_facets(2)).unwrap(), true).unwrap();
        assert!(m.is_closed());
        assert_eq!(m.signs()[0], 1);
    }

    #[test]
    fn rp2_is_non_orientable() {
        assert!(matches!(
            validate_pseudomanifold(rp2(), true),
            Err(TopologyError::NonOrientable)
        ));
    }

    #[test]
    fn rp2_brute_force_has_no_coherent_orientation() {
        let k = rp2();
        let n = k.num_facets();
        let coherent = (0u32..1 << n).filter(|mask| {
            let signs = (0..n)
                .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
                .collect();
            OrientedPseudomanifold::with_orientation(k.clone(), signs).is_ok()
        });
        assert_eq!(coherent.count(), 0);
    }

    #[test]
    fn disc_has_three_boundary_edges() {
        let m = validate_pseudomanifold(build_complex(simplex_facets(2)).unwrap(), false).unwrap();
        assert_eq!(m.boundary_faces(), &[vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert!(matches!(
            validate_pseudomanifold(build_complex(simplex_facets(2)).unwrap(), true),
            Err(TopologyError::HasBoundary { faces: 3 })
        ));
    }

    #[test]
    fn boundary_of_simplex_is_canonical_sphere() {
        for d in 2..=4 {
            let solid = validate_pseudomanifold(build_complex(simplex_facets(d)).unwrap(), false)
                .unwrap();
            let b = boundary_of(&solid).unwrap();
            let canonical =
                validate_pseudomanifold(build_complex(sphere_facets(d - 1)).unwrap(), true)
                    .unwrap();
            assert_eq!(b, canonical, "dimension {d}");
        }
    }

    #[test]
    fn closed_has_no_boundary() {
        let m = validate_pseudomanifold(build_complex(sphere_facets(2)).unwrap(), true).unwrap();
        assert!(matches!(boundary_of(&m), Err(TopologyError::EmptyBoundary)));
    }

    #[test]
    fn two_discs_sharing_a_vertex_are_not_connected() {
        let k = build_complex(vec![vec![0, 1, 2], vec![0, 3, 4]]).unwrap();
        assert!(matches!(
            validate_pseudomanifold(k, false),
            Err(TopologyError::NotStronglyConnected { components: 2 })
        ));
    }

    #[test]
    fn three_triangles_on_an_edge() {
        let k = build_complex(vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 1, 4]]).unwrap();
        assert!(matches!(
            validate_pseudomanifold(k, false),
            Err(TopologyError::NotPseudomanifold { count: 3, .. })
        ));
    }

    #[test]
    fn relabel_preserves_orientation_class() {
        let m = validate_pseudomanifold(build_complex(sphere_facets(2)).unwrap(), true).unwrap();
        let map: BTreeMap<VertexId, VertexId> = [(0, 10), (1, 11), (2, 12), (3, 13)].into();
        let r = m.relabel(&map).unwrap();
        assert_eq!(r.signs(), m.signs());
        let swap: BTreeMap<VertexId, VertexId> = [(0, 1), (1, 0), (2, 2), (3, 3)].into();
        let s = m.relabel(&swap).unwrap();
        assert_eq!(s, m.reversed());
    }
}
