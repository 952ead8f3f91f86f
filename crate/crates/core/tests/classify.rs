mod common;

use coverdeg::classify::{
    covers_cobordant, covers_homotopic, null_cobordance, validate_cobordism_witness, validate_prism_witness, Basis,
    Evidence, Relation, TheoremTag,
};
use coverdeg::cover::{pl_map, Cover};
use coverdeg::fixtures::{hopf, identity_cover, sphere};
use coverdeg::invariants::hopf_invariant;
use proptest::prelude::*;

#[test]
fn hopf_map_is_essential_yet_null_cobordant() {
    let h = hopf();
    let f = pl_map(&h.manifold, &h.cover, &h.partition).unwrap();
    assert_eq!(hopf_invariant(&f, Some(&h.realization)).unwrap().invariant.abs(), 1);
    let v = null_cobordance(&h.manifold, &h.cover).unwrap();
    assert_eq!(v.relation, Relation::NullCobordant);
    assert_eq!(v.evidence, Evidence::Theorem(TheoremTag::UnequalDimensionSpheres));
}

#[test]
fn reversed_identity_is_distinct_but_not_null() {
    let m = sphere(2);
    let swapped = identity_cover(2).permute_labels(&[1, 0, 2, 3]);
    let v = covers_homotopic(&m, &identity_cover(2), &swapped, 1).unwrap();
    assert_eq!(v.relation, Relation::Distinct);
    assert_eq!(null_cobordance(&m, &swapped).unwrap().relation, Relation::Distinct);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn verdicts_agree_with_degrees(seed in any::<u64>(), n in 1usize..=2, same_class: bool) {
        let mut rng = common::rng(seed);
        let m = common::subdivided_sphere(n, 1);
        let s1 = common::random_cover(&m, &mut rng);
        let s2 = if same_class { common::walk(&m, &s1, 10, &mut rng) } else { common::random_cover(&m, &mut rng) };
        let (d1, d2) = (common::cover_degree(&m, &s1), common::cover_degree(&m, &s2));
        let v = covers_homotopic(&m, &s1, &s2, 0).unwrap();
        match v.relation {
            Relation::Homotopic => prop_assert_eq!(d1, d2),
            Relation::Distinct => prop_assert_ne!(d1, d2),
            r => prop_assert!(false, "unexpected {}", r),
        }
        if let Evidence::Prism(w) = &v.evidence {
            validate_prism_witness(w).unwrap();
            validate_cobordism_witness(&w.as_cobordism(), &m, &s1, &m, &s2).unwrap();
            prop_assert_eq!(covers_cobordant(&m, &s1, &m, &s2).unwrap().relation, Relation::Cobordant);
        }
        let c = covers_cobordant(&m, &s1, &m, &s2).unwrap();
        prop_assert_eq!(c.relation == Relation::Cobordant, d1 == d2);
        prop_assert_eq!(c.basis(), Some(Basis::Invariant));
    }

    #[test]
    fn tampered_prism_witness_fails(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let m = common::subdivided_sphere(1, 1);
        let s1 = common::random_cover(&m, &mut rng);
        let s2 = common::walk(&m, &s1, 6, &mut rng);
        let Some(mut w) = coverdeg::classify::prism_witness(&m, &s1, &s2, 0).unwrap() else { return Ok(()) };
        // flip one bottom label to something else: restriction must fail
        let v = *m.complex().vertices().first().unwrap();
        let old = w.cover.labels(v).unwrap();
        let new = (old.to_vec()[0] + 1) % 3;
        let mut labels = w.cover.label_map().clone();
        labels.insert(v, coverdeg::cover::LabelSet::singleton(new));
        w.cover = Cover::new(3, labels).unwrap();
        prop_assert!(validate_prism_witness(&w).is_err());
    }
}
