mod common;

use std::collections::BTreeMap;

use coverdeg::cover::{default_partition, pl_map, subdivide_cover};
use coverdeg::fixtures::{constant_cover, identity_cover, sphere};
use coverdeg::invariants::{degree, degree_at, linking_number, preimage_curve, regular_value_candidates};
use coverdeg::rational::Rational;
use coverdeg::simplicial::{barycentric_subdivide, Layer};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn anchors() {
    for n in 1..=3 {
        let m = sphere(n);
        assert_eq!(common::cover_degree(&m, &identity_cover(n)), 1);
        assert_eq!(common::cover_degree(&m, &constant_cover(n)), 0);
    }
}

/// Winding number of a labelled cycle, counted by hand: every step
/// `i -> i+1 (mod 3)` adds a third of a turn.
fn winding(labels: &[usize]) -> i64 {
    let mut thirds = 0i64;
    for k in 0..labels.len() {
        let (a, b) = (labels[k], labels[(k + 1) % labels.len()]);
        thirds += match (b + 3 - a) % 3 {
            1 => 1,
            2 => -1,
            _ => 0,
        };
    }
    thirds / 3
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// On a polygon the degree is the winding number of the label sequence.
    #[test]
    fn circle_degree_is_winding_number(labels in prop::collection::vec(0usize..3, 3..16)) {
        let len = labels.len() as u32;
        let facets: Vec<Vec<u32>> = (0..len).map(|i| vec![i, (i + 1) % len]).collect();
        let m = coverdeg::simplicial::validate_pseudomanifold(coverdeg::simplicial::build_complex(facets).unwrap(), true).unwrap();
        let c = coverdeg::cover::Cover::from_lists(3, labels.iter().enumerate().map(|(v, &l)| (v as u32, [l]))).unwrap();
        // orientation of facet {i, i+1} as stored may be either way; reorient
        // along the cycle direction
        let forward = m.oriented_facets().any(|(f, s)| f == &vec![0, 1] && s > 0);
        let want = if forward { winding(&labels) } else { -winding(&labels) };
        prop_assert_eq!(common::cover_degree(&m, &c), want);
    }

    #[test]
    fn degree_is_independent_of_choices(seed in any::<u64>(), n in 1usize..=2) {
        let mut rng = common::rng(seed);
        let m = common::subdivided_sphere(n, 1);
        let c = common::random_cover(&m, &mut rng);
        let phi = common::random_partition(&c, &mut rng);
        let f = pl_map(&m, &c, &phi).unwrap();
        let d = degree(&f).unwrap().degree;

        // every regular candidate agrees
        for y in regular_value_candidates(n + 2).take(3 * (n + 2)) {
            if let Some(r) = degree_at(&f, &y) {
                prop_assert_eq!(r.degree, d);
            }
        }
        prop_assert_eq!(common::cover_degree(&m, &c), d);
        prop_assert_eq!(degree(&f.with_reversed_source()).unwrap().degree, -d);

        // relabelling source vertices
        let shuffle: BTreeMap<u32, u32> = m.complex().vertices().iter().map(|&v| (v, 1000 - 3 * v)).collect();
        let mm = m.relabel(&shuffle).unwrap();
        prop_assert_eq!(common::cover_degree(&mm, &c.relabel_vertices(&shuffle)), d);

        // subdivision
        let (sm, sub) = barycentric_subdivide(&m, 1).unwrap();
        let (sc, sphi) = subdivide_cover(&phi, &sub).unwrap();
        prop_assert_eq!(degree(&pl_map(&sm, &sc, &sphi).unwrap()).unwrap().degree, d);
    }

    /// Arcs of a prism homotopy join the two ends with opposite signs, so
    /// the end degrees agree.
    #[test]
    fn prism_arcs_pair_end_preimages(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let m = common::subdivided_sphere(1, 1);
        let s1 = common::random_cover(&m, &mut rng);
        let s2 = common::walk(&m, &s1, 8, &mut rng);
        let Some(w) = coverdeg::classify::prism_witness(&m, &s1, &s2, 0).unwrap() else {
            return Ok(());
        };
        let f = pl_map(&w.prism.manifold, &w.cover, &default_partition(&w.cover)).unwrap();
        let curve = preimage_curve(&f, 0).unwrap();
        let top = |p: &coverdeg::invariants::CurvePoint| p.face.iter().all(|&v| w.prism.original(v).1 == Layer::Top);
        let mut ends = [0i64; 2];
        for arc in curve.arcs() {
            let (a, b) = arc.end_signs.unwrap();
            prop_assert_eq!(a + b, 0);
            ends[usize::from(top(&arc.points[0]))] += i64::from(a);
            ends[usize::from(top(arc.points.last().unwrap()))] += i64::from(b);
        }
        let d1 = common::cover_degree(&m, &s1);
        prop_assert_eq!(ends[0], -d1);
        prop_assert_eq!(ends[1], common::cover_degree(&m, &s2));
    }

    #[test]
    fn linking_is_symmetric_and_frame_invariant(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let mut poly = |k: usize| -> Vec<Vec<Rational>> {
            (0..k).map(|_| (0..3).map(|_| Rational::from_integer(rng.random_range(-6i64..=6).into())).collect()).collect()
        };
        let a = poly(4);
        let b = poly(5);
        let (Ok(ab), Ok(ba)) = (linking_number(&a, &b), linking_number(&b, &a)) else {
            return Ok(());
        };
        prop_assert_eq!(ab.linking_number, ba.linking_number);
        // a shear with determinant one moves the projection direction
        let t = |p: &Vec<Rational>| vec![&p[0] + &p[1] * Rational::from_integer(2.into()), p[1].clone() + &p[2], p[2].clone()];
        let ta: Vec<_> = a.iter().map(t).collect();
        let tb: Vec<_> = b.iter().map(t).collect();
        prop_assert_eq!(linking_number(&ta, &tb).unwrap().linking_number, ab.linking_number);
    }
}
