use std::collections::BTreeMap;

use super::complex::{Simplex, VertexId};
use super::manifold::{oriented_from_facets, OrientedPseudomanifold};
use super::TopologyError;
use crate::rational::sort_sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Layer {
    Bottom,
    Top,
}

/// Staircase triangulation of `|M| x [0, 1]`.
///
/// Bottom vertices keep their ids; the top copy of `v` is `v + offset`.
/// The boundary is the top copy with the orientation of `M` together with
/// the bottom copy with the opposite orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prism {
    pub manifold: OrientedPseudomanifold,
    pub base: OrientedPseudomanifold,
    pub offset: VertexId,
}

impl Prism {
    pub fn bottom(&self, v: VertexId) -> VertexId {
        v
    }

    pub fn top(&self, v: VertexId) -> VertexId {
        v + self.offset
    }

    /// Original vertex and layer of a prism vertex.
    pub fn original(&self, w: VertexId) -> (VertexId, Layer) {
        if w >= self.offset {
            (w - self.offset, Layer::Top)
        } else {
            (w, Layer::Bottom)
        }
    }

    /// Map from base vertices to their copies on `layer`.
    pub fn layer_ids(&self, layer: Layer) -> BTreeMap<VertexId, VertexId> {
        self.base
            .complex()
            .vertices()
            .iter()
            .map(|&v| {
                let w = match layer {
                    Layer::Bottom => self.bottom(v),
                    Layer::Top => self.top(v),
                };
                (v, w)
            })
            .collect()
    }
}

/// Builds the prism over a closed pseudomanifold. `vertex_order` fixes the
/// staircase; the default is ascending vertex id.
pub fn prism(
    m: &OrientedPseudomanifold,
    vertex_order: Option<&[VertexId]>,
) -> Result<Prism, TopologyError> {
    if !m.is_closed() {
        return Err(TopologyError::NotClosed);
    }
    let rank: BTreeMap<VertexId, usize> = match vertex_order {
        Some(order) => {
            let r: BTreeMap<VertexId, usize> =
                order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
            if r.len() != order.len() {
                return Err(TopologyError::BadVertexOrder);
            }
            if let Some(&v) = m.complex().vertices().iter().find(|v| !r.contains_key(v)) {
                return Err(TopologyError::MissingVertex { vertex: v });
            }
            r
        }
        None => m
            .complex()
            .vertices()
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect(),
    };
    let offset = m.complex().max_vertex() + 1;
    let d = m.dim();
    let mut facets: Vec<Simplex> = Vec::new();
    let mut signs = Vec::new();
    for (f, s) in m.oriented_facets() {
        let mut ordered = f.clone();
        ordered.sort_by_key(|v| rank[v]);
        // orientation of the ordered tuple
        let s_ordered = s * sort_sign(&ordered);
        for i in 0..=d {
            let mut tuple: Vec<VertexId> = ordered[..=i].to_vec();
            tuple.extend(ordered[i..].iter().map(|v| v + offset));
            // Alternating staircase signs, normalised so that the top face
            // of the first simplex carries the orientation of M.
            let mut eps = s_ordered;
            if (d + 1 + i) % 2 == 1 {
                eps = -eps;
            }
            let sign = eps * sort_sign(&tuple);
            tuple.sort_unstable();
            facets.push(tuple);
            signs.push(sign);
        }
    }
    Ok(Prism {
        manifold: oriented_from_facets(facets, signs)?,
        base: m.clone(),
        offset,
    })
}
