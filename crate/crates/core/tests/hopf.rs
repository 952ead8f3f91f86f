use coverdeg::cover::{covering_simplex, pl_map};
use coverdeg::fixtures::hopf;
use coverdeg::invariants::{hopf_invariant, preimage_curve, HopfSetup, InvariantError};
use coverdeg::simplicial::homology;

#[test]
fn fixture_is_a_simplicial_map_from_a_homology_three_sphere() {
    let h = hopf();
    assert_eq!(h.manifold.complex().vertices().len(), 15);
    assert!(homology(h.manifold.complex(), 3).unwrap().is_sphere(3));
    assert!(h.manifold.is_closed());
    assert_eq!(covering_simplex(h.manifold.complex(), &h.cover).unwrap(), None);
    // every vertex goes to a vertex of the target
    assert!(h.cover.label_map().values().all(|s| s.len() == 1));
    let images: std::collections::BTreeSet<usize> = h.vertex_map.values().copied().collect();
    assert_eq!(images.len(), 4);
}

#[test]
fn invariant_is_one_and_pole_independent() {
    let h = hopf();
    let f = pl_map(&h.manifold, &h.cover, &h.partition).unwrap();
    let r = hopf_invariant(&f, Some(&h.realization)).unwrap();
    assert_eq!(r.invariant.abs(), 1);

    let setup = HopfSetup::new(&f, Some(&h.realization)).unwrap();
    let (i, j, _) = setup.first_usable_pair().unwrap();
    let poles = setup.valid_poles(i, j, 5);
    assert_eq!(poles.len(), 5);
    for p in &poles {
        assert_eq!(setup.invariant_with_pole(i, j, p).unwrap().invariant, r.invariant);
    }
}

#[test]
fn fibres_are_disjoint_loops_and_pairs_agree() {
    let h = hopf();
    let f = pl_map(&h.manifold, &h.cover, &h.partition).unwrap();
    let a = preimage_curve(&f, 0).unwrap();
    let b = preimage_curve(&f, a.regular_value.candidate + 1).unwrap();
    assert_ne!(a.regular_value, b.regular_value);
    assert!(a.arcs().next().is_none() && b.arcs().next().is_none());
    assert!(a.loops().count() >= 1 && b.loops().count() >= 1);
    for pa in a.components.iter().flat_map(|c| &c.points) {
        assert!(!b.components.iter().flat_map(|c| &c.points).any(|pb| pb == pa));
    }

    let setup = HopfSetup::new(&f, Some(&h.realization)).unwrap();
    let expected = hopf_invariant(&f, Some(&h.realization)).unwrap().invariant;
    let mut checked = 0;
    'pairs: for x in 0..setup.fibres.len() {
        for y in x + 1..setup.fibres.len() {
            if let Some(p) = setup.valid_poles(x, y, 1).pop() {
                assert_eq!(setup.invariant_with_pole(x, y, &p).unwrap().invariant, expected);
                checked += 1;
                if checked == 3 {
                    break 'pairs;
                }
            }
        }
    }
    assert_eq!(checked, 3);
}

#[test]
fn reflecting_the_target_keeps_the_invariant() {
    // Swapping two target vertices is a degree -1 map of the 2-sphere; the
    // invariant scales by the square of the degree.
    let h = hopf();
    let f = pl_map(&h.manifold, &h.cover, &h.partition).unwrap();
    let g_cover = h.cover.permute_labels(&[1, 0, 2, 3]);
    let g = pl_map(&h.manifold, &g_cover, &coverdeg::cover::default_partition(&g_cover)).unwrap();
    let hf = hopf_invariant(&f, Some(&h.realization)).unwrap().invariant;
    let hg = hopf_invariant(&g, Some(&h.realization)).unwrap().invariant;
    assert_eq!(hg, hf);
}

#[test]
fn constant_map_has_invariant_zero() {
    let h = hopf();
    let c = coverdeg::cover::Cover::from_lists(4, h.vertex_map.keys().map(|&v| (v, [0]))).unwrap();
    let f = pl_map(&h.manifold, &c, &coverdeg::cover::default_partition(&c)).unwrap();
    assert_eq!(hopf_invariant(&f, Some(&h.realization)).unwrap().invariant, 0);
    assert_eq!(hopf_invariant(&f, None).unwrap_err(), InvariantError::NoRealization);
}
