//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use coverdeg::cover::{covering_simplex, default_partition, pl_map, Cover, LabelSet, PartitionOfUnity};
use coverdeg::invariants::degree;
use coverdeg::rational::Rational;
use coverdeg::simplicial::{barycentric_subdivide, boundary_of, OrientedPseudomanifold, VertexId};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Boundary of the `(n+1)`-simplex, subdivided `times` times.
pub fn subdivided_sphere(n: usize, times: usize) -> OrientedPseudomanifold {
    barycentric_subdivide(&coverdeg::fixtures::sphere(n), times).unwrap().0
}

/// A random singleton labelling. With at most `dim+1` vertices per simplex
/// and `dim+2` sets this never has a covering simplex.
pub fn random_singletons(m: &OrientedPseudomanifold, num_sets: usize, rng: &mut impl Rng) -> Cover {
    Cover::from_lists(
        num_sets,
        m.complex().vertices().iter().map(|&v| (v, [rng.random_range(0..num_sets)])),
    )
    .unwrap()
}

/// Random label additions and removals that keep the cover free of covering
/// simplices. Each step is a straight-line homotopy of the induced map, so
/// the class is preserved.
pub fn walk(m: &OrientedPseudomanifold, c: &Cover, steps: usize, rng: &mut impl Rng) -> Cover {
    let mut labels: BTreeMap<VertexId, LabelSet> = c.label_map().clone();
    let vertices = m.complex().vertices();
    for _ in 0..steps {
        let v = *vertices.choose(rng).unwrap();
        let l = rng.random_range(0..c.num_sets());
        let cur = labels[&v];
        let next = if cur.contains(l) {
            if cur.len() == 1 {
                continue;
            }
            LabelSet::from_bits(cur.bits() & !(1 << l))
        } else {
            cur.union(LabelSet::singleton(l))
        };
        labels.insert(v, next);
        let trial = Cover::new(c.num_sets(), labels.clone()).unwrap();
        if covering_simplex(m.complex(), &trial).unwrap().is_some() {
            labels.insert(v, cur);
        }
    }
    Cover::new(c.num_sets(), labels).unwrap()
}

/// A random cover of a once-subdivided `n`-sphere with `n+2` sets.
pub fn random_cover(m: &OrientedPseudomanifold, rng: &mut impl Rng) -> Cover {
    let base = random_singletons(m, m.dim() + 2, rng);
    walk(m, &base, 3 * m.complex().vertices().len(), rng)
}

/// A random partition of unity subordinate to `c` whose supports are the
/// label sets.
pub fn random_partition(c: &Cover, rng: &mut impl Rng) -> PartitionOfUnity {
    let weights = c
        .label_map()
        .iter()
        .map(|(&v, s)| {
            let raw: Vec<i64> = (0..c.num_sets())
                .map(|i| if s.contains(i) { rng.random_range(1..=50) } else { 0 })
                .collect();
            let total: i64 = raw.iter().sum();
            (v, raw.iter().map(|&w| Rational::new(w.into(), total.into())).collect())
        })
        .collect();
    PartitionOfUnity::new(c.num_sets(), weights).unwrap()
}

pub fn cover_degree(m: &OrientedPseudomanifold, c: &Cover) -> i64 {
    degree(&pl_map(m, c, &default_partition(c)).unwrap()).unwrap().degree
}

/// Degree of a cover restricted to the boundary of `m`.
pub fn boundary_degree(m: &OrientedPseudomanifold, c: &Cover) -> i64 {
    let b = boundary_of(m).unwrap();
    let r = coverdeg::cover::restrict_cover(c, b.complex().vertices().iter().copied()).unwrap();
    cover_degree(&b, &r)
}
