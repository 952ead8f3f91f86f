use std::collections::BTreeMap;

use super::SearchError;
use crate::cover::Cover;
use crate::rational::sort_sign;
use crate::simplicial::{OrientedPseudomanifold, Simplex, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpernerCount {
    /// Fully labelled facets, in facet order.
    pub fully_labelled: Vec<Simplex>,
    pub unsigned: usize,
    /// Sum over fully labelled facets of the orientation sign of the
    /// labelling relative to the ascending order of labels.
    pub signed: i64,
}

/// Counts fully labelled facets of a triangulated `n`-simplex.
///
/// `carriers` gives, for every vertex, the face of the simplex on `0..=n`
/// it lies in; vertex labels must be single and lie in the carrier.
pub fn sperner_count(
    t: &OrientedPseudomanifold,
    carriers: &BTreeMap<VertexId, Simplex>,
    c: &Cover,
) -> Result<SpernerCount, SearchError> {
    let n = t.dim();
    c.check_defined_on(t.complex())?;
    for &v in t.complex().vertices() {
        let carrier = carriers.get(&v).ok_or(SearchError::MissingCarrier { vertex: v })?;
        if carrier.is_empty() || carrier.iter().any(|&i| i as usize > n) {
            return Err(SearchError::BadCarrier {
                vertex: v,
                carrier: carrier.clone(),
                dim: n,
            });
        }
        let labels = c.labels(v).expect("checked above");
        if labels.len() != 1 {
            return Err(SearchError::NotSingleton { vertex: v });
        }
        let label = labels.iter().next().unwrap();
        if !carrier.contains(&(label as VertexId)) {
            return Err(SearchError::NotSperner {
                vertex: v,
                label,
                carrier: carrier.clone(),
            });
        }
    }
    let mut fully_labelled = Vec::new();
    let mut signed = 0i64;
    for (f, s) in t.oriented_facets() {
        let labels: Vec<usize> = f.iter().map(|&v| c.labels(v).unwrap().iter().next().unwrap()).collect();
        let mut seen = labels.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() == n + 1 {
            signed += i64::from(s * sort_sign(&labels));
            fully_labelled.push(f.clone());
        }
    }
    Ok(SpernerCount {
        unsigned: fully_labelled.len(),
        fully_labelled,
        signed,
    })
}
