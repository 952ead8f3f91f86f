use std::collections::BTreeMap;

use num_traits::Zero;

use super::complex::{Simplex, VertexId};
use super::manifold::{oriented_from_facets, OrientedPseudomanifold};
use super::TopologyError;
use crate::rational::{sort_sign, Rational};

/// Where the vertices of a subdivision sit inside the original complex.
///
/// Each vertex is an affine combination of original vertices; its support
/// is the carrier face it subdivides. Original vertices map to themselves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdivision {
    pub points: BTreeMap<VertexId, BTreeMap<VertexId, Rational>>,
}

impl Subdivision {
    fn identity(vertices: &[VertexId]) -> Self {
        Self {
            points: vertices
                .iter()
                .map(|&v| (v, BTreeMap::from([(v, Rational::from_integer(1.into()))])))
                .collect(),
        }
    }

    /// Smallest face of the original complex containing `v`.
    pub fn carrier(&self, v: VertexId) -> Option<Simplex> {
        self.points.get(&v).map(|w| w.keys().copied().collect())
    }

    pub fn carriers(&self) -> BTreeMap<VertexId, Simplex> {
        self.points
            .iter()
            .map(|(&v, w)| (v, w.keys().copied().collect()))
            .collect()
    }

    /// Pushes an affine vertex-valued function on the original complex
    /// forward to the subdivision.
    pub fn transport(
        &self,
        values: &BTreeMap<VertexId, Vec<Rational>>,
    ) -> Option<BTreeMap<VertexId, Vec<Rational>>> {
        let mut out = BTreeMap::new();
        for (&v, weights) in &self.points {
            let mut acc: Option<Vec<Rational>> = None;
            for (u, w) in weights {
                let val = values.get(u)?;
                let acc = acc.get_or_insert_with(|| vec![Rational::zero(); val.len()]);
                for (a, x) in acc.iter_mut().zip(val) {
                    *a += w * x;
                }
            }
            out.insert(v, acc?);
        }
        Some(out)
    }
}

/// Iterated barycentric subdivision.
///
/// New vertices receive ids above the current maximum, assigned face by
/// face in (dimension, lexicographic) order. Orientation is transported so
/// that each new facet inside an old facet carries the old orientation.
pub fn barycentric_subdivide(
    m: &OrientedPseudomanifold,
    times: usize,
) -> Result<(OrientedPseudomanifold, Subdivision), TopologyError> {
    if times == 0 {
        return Err(TopologyError::ZeroSubdivisions);
    }
    let mut current = m.clone();
    let mut sub = Subdivision::identity(m.complex().vertices());
    for _ in 0..times {
        let (next, parents) = subdivide_once(&current)?;
        let mut points = BTreeMap::new();
        for (v, face) in parents {
            let share = Rational::new(1.into(), (face.len() as i64).into());
            let mut acc: BTreeMap<VertexId, Rational> = BTreeMap::new();
            for u in &face {
                for (orig, w) in &sub.points[u] {
                    *acc.entry(*orig).or_insert_with(Rational::zero) += &share * w;
                }
            }
            points.insert(v, acc);
        }
        sub = Subdivision { points };
        current = next;
    }
    Ok((current, sub))
}

/// One barycentric subdivision step; returns each vertex's parent face.
fn subdivide_once(
    m: &OrientedPseudomanifold,
) -> Result<(OrientedPseudomanifold, BTreeMap<VertexId, Simplex>), TopologyError> {
    let k = m.complex();
    let mut next_id = k.max_vertex() + 1;
    let mut bary: BTreeMap<Simplex, VertexId> = BTreeMap::new();
    for face_list in k.all_faces() {
        for face in face_list {
            let id = if face.len() == 1 {
                face[0]
            } else {
                let id = next_id;
                next_id += 1;
                id
            };
            bary.insert(face, id);
        }
    }
    let parents: BTreeMap<VertexId, Simplex> =
        bary.iter().map(|(f, &v)| (v, f.clone())).collect();

    let mut facets = Vec::new();
    let mut signs = Vec::new();
    for (f, s) in m.oriented_facets() {
        for_each_permutation(f.len(), |perm| {
            let mut tuple = Vec::with_capacity(f.len());
            let mut chain: Vec<VertexId> = Vec::with_capacity(f.len());
            for &p in perm {
                chain.push(f[p]);
                let mut face = chain.clone();
                face.sort_unstable();
                tuple.push(bary[&face]);
            }
            let sign = s * sort_sign(perm) * sort_sign(&tuple);
            tuple.sort_unstable();
            facets.push(tuple);
            signs.push(sign);
        });
    }
    Ok((oriented_from_facets(facets, signs)?, parents))
}

fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    fn rec(used: &mut Vec<bool>, buf: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        let n = used.len();
        if buf.len() == n {
            f(buf);
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                buf.push(i);
                rec(used, buf, f);
                buf.pop();
                used[i] = false;
            }
        }
    }
    rec(&mut vec![false; n], &mut Vec::with_capacity(n), &mut f);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::simplicial::complex::{build_complex, simplex_facets, sphere_facets};
    use crate::simplicial::manifold::validate_pseudomanifold;

    fn closed_sphere(n: usize) -> OrientedPseudomanifold {
        validate_pseudomanifold(build_complex(sphere_facets(n)).unwrap(), true).unwrap()
    }

    #[test]
    fn circle_edges_split() {
        let (s, sub) = barycentric_subdivide(&closed_sphere(1), 1).unwrap();
        assert_eq!(s.complex().num_facets(), 6);
        assert_eq!(s.complex().vertices().len(), 6);
        assert!(s.is_closed());
        assert_eq!(sub.carrier(3), Some(vec![0, 1]));
    }

    #[test]
    fn triangle_splits_into_six() {
        let disc = validate_pseudomanifold(build_complex(simplex_facets(2)).unwrap(), false)
            .unwrap();
        let (s, sub) = barycentric_subdivide(&disc, 1).unwrap();
        assert_eq!(s.complex().num_facets(), 6);
        assert_eq!(s.boundary_faces().len(), 6);
        // barycenter of the triangle
        let centre = sub.points.iter().find(|(_, w)| w.len() == 3).unwrap().1;
        assert!(centre.values().all(|w| *w == ratio(1, 3)));
    }

    #[test]
    fn euler_characteristic_is_preserved() {
        for n in 1..=3 {
            let m = closed_sphere(n);
            let (s, _) = barycentric_subdivide(&m, 1).unwrap();
            assert_eq!(
                s.complex().euler_characteristic(),
                m.complex().euler_characteristic()
            );
        }
    }

    #[test]
    fn twice_subdivided_carriers_compose() {
        let disc = validate_pseudomanifold(build_complex(simplex_facets(2)).unwrap(), false)
            .unwrap();
        let (s, sub) = barycentric_subdivide(&disc, 2).unwrap();
        assert_eq!(s.complex().num_facets(), 36);
        assert_eq!(s.complex().vertices().len(), 25);
        for w in sub.points.values() {
            let total: Rational = w.values().cloned().sum();
            assert_eq!(total, ratio(1, 1));
        }
    }
}
