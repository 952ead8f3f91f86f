use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::complex::{SimplicialComplex, VertexId};
use super::TopologyError;
use crate::rational::{rank, solve, Rational};

/// Exact rational coordinates for the vertices of a complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricRealization {
    ambient: usize,
    coords: BTreeMap<VertexId, Vec<Rational>>,
}

impl GeometricRealization {
    /// Checks that every vertex has coordinates of one common length and
    /// that every facet is affinely independent. Extra vertices are kept.
    pub fn new(
        k: &SimplicialComplex,
        coords: BTreeMap<VertexId, Vec<Rational>>,
    ) -> Result<Self, TopologyError> {
        let ambient = match coords.get(&k.vertices()[0]) {
            Some(c) => c.len(),
            None => {
                return Err(TopologyError::MissingCoordinates {
                    vertex: k.vertices()[0],
                })
            }
        };
        for &v in k.vertices() {
            let c = coords
                .get(&v)
                .ok_or(TopologyError::MissingCoordinates { vertex: v })?;
            if c.len() != ambient {
                return Err(TopologyError::CoordinateLength {
                    vertex: v,
                    expected: ambient,
                    found: c.len(),
                });
            }
        }
        let real = Self { ambient, coords };
        for f in k.facets() {
            let base = &real.coords[&f[0]];
            let diffs: Vec<Vec<Rational>> = f[1..]
                .iter()
                .map(|v| real.coords[v].iter().zip(base).map(|(a, b)| a - b).collect())
                .collect();
            if rank(&diffs) != f.len() - 1 {
                return Err(TopologyError::AffinelyDependent { facet: f.clone() });
            }
        }
        Ok(real)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn coords(&self, v: VertexId) -> Option<&[Rational]> {
        self.coords.get(&v).map(Vec::as_slice)
    }

    pub fn all_coords(&self) -> &BTreeMap<VertexId, Vec<Rational>> {
        &self.coords
    }

    /// The point with barycentric coordinates `bary` in `simplex`.
    pub fn point(&self, simplex: &[VertexId], bary: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.ambient];
        for (v, w) in simplex.iter().zip(bary) {
            for (o, x) in out.iter_mut().zip(&self.coords[v]) {
                *o += w * x;
            }
        }
        out
    }

    /// The vector `a` with `<a, v> = 1` at every vertex of a facet spanning
    /// a hyperplane that misses the origin. Needs `ambient == facet.len()`.
    pub fn supporting_functional(&self, facet: &[VertexId]) -> Option<Vec<Rational>> {
        if facet.len() != self.ambient {
            return None;
        }
        let m: Vec<Vec<Rational>> = facet.iter().map(|v| self.coords[v].clone()).collect();
        solve(&m, &vec![Rational::one(); facet.len()])
    }
}
