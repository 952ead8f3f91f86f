mod common;

use std::collections::BTreeMap;

use coverdeg::cover::{covering_simplex, restrict_cover, Cover};
use coverdeg::fixtures::{hexagon_boundary_cover, hexagon_cone, sperner_labels, subdivided_simplex};
use coverdeg::search::{
    check_witness, find_extension, recheck, sperner_count, verify_kkm, ExtensionProblem, LabelMode, SearchError,
    Verdict, DEFAULT_BUDGET,
};
use num_bigint::BigUint;
use proptest::prelude::*;
use rand::Rng;

/// Brute force over every singleton assignment of the free vertices.
fn brute_force_extendable(p: &ExtensionProblem) -> bool {
    let k = p.free_vertices().len();
    let domain = LabelMode::Singleton.domain(p.num_sets());
    let total = domain.len().pow(k as u32);
    (0..total).any(|mut code| {
        let assignment: Vec<_> = (0..k)
            .map(|_| {
                let d = domain[code % domain.len()];
                code /= domain.len();
                d
            })
            .collect();
        covering_simplex(p.ambient().complex(), &p.extension(&assignment)).unwrap().is_none()
    })
}

fn disc_problem(labels: &BTreeMap<u32, usize>, times: usize, mode: LabelMode) -> ExtensionProblem {
    let (disc, _) = subdivided_simplex(2, times);
    let c = Cover::from_lists(3, labels.iter().map(|(&v, &l)| (v, [l]))).unwrap();
    ExtensionProblem::new(disc, c, mode).unwrap()
}

#[test]
fn hexagon_agrees_with_brute_force_everywhere() {
    let m = hexagon_cone();
    for code in 0..729usize {
        let labels: [usize; 6] = std::array::from_fn(|i| code / 3usize.pow(i as u32) % 3);
        let c = hexagon_boundary_cover(labels);
        let p = ExtensionProblem::new(m.clone(), c, LabelMode::Singleton).unwrap();
        let cert = verify_kkm(&p, DEFAULT_BUDGET);
        recheck(&p, &cert).unwrap();
        assert_eq!(cert.verdict == Verdict::Extendable, brute_force_extendable(&p), "{labels:?}");
        let deg = common::boundary_degree(p.ambient(), &p.extension(&[LabelMode::Singleton.domain(3)[0]]));
        if deg != 0 {
            assert_eq!(cert.verdict, Verdict::Obstructed, "{labels:?}");
        }
    }
}

#[test]
fn singleton_witnesses_stay_valid_in_subsets_mode() {
    let c = hexagon_boundary_cover([0, 0, 1, 1, 0, 1]);
    let single = ExtensionProblem::new(hexagon_cone(), c.clone(), LabelMode::Singleton).unwrap();
    let subsets = ExtensionProblem::new(hexagon_cone(), c, LabelMode::Subsets).unwrap();
    let w = find_extension(&single, DEFAULT_BUDGET).unwrap().unwrap();
    check_witness(&subsets, &w).unwrap();
    assert_eq!(subsets.space_size(), BigUint::from(7u32));
    let cert = verify_kkm(&subsets, DEFAULT_BUDGET);
    assert_eq!(cert.verdict, Verdict::Extendable);
    recheck(&subsets, &cert).unwrap();
}

#[test]
fn budget_exhaustion_is_an_error_for_find_extension() {
    let c = hexagon_boundary_cover([0, 0, 1, 1, 2, 2]);
    let p = ExtensionProblem::new(hexagon_cone(), c, LabelMode::Singleton).unwrap();
    assert_eq!(find_extension(&p, 1), Err(SearchError::BudgetExceeded { budget: 1 }));
    let cert = verify_kkm(&p, 1);
    assert_eq!((cert.verdict, cert.nodes), (Verdict::Inconclusive, 1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sperner_parity_and_signed_count(seed in any::<u64>(), times in 0usize..=2, n in 2usize..=3) {
        prop_assume!(n == 2 || times <= 1);
        let mut rng = common::rng(seed);
        let (t, carriers) = subdivided_simplex(n, times);
        let c = Cover::from_lists(n + 1, carriers.iter().map(|(&v, f)| (v, [f[rng.random_range(0..f.len())] as usize]))).unwrap();
        let count = sperner_count(&t, &carriers, &c).unwrap();
        prop_assert_eq!(count.unsigned % 2, 1);
        prop_assert_eq!(count.signed, common::boundary_degree(&t, &c));
        prop_assert_eq!(count.signed.abs(), 1);
        let canonical = sperner_labels(n, &carriers);
        prop_assert_eq!(sperner_count(&t, &carriers, &canonical).unwrap().signed, count.signed);
    }

    /// Twice-subdivided triangle, random boundary labels: the certificate
    /// rechecks, and a nonzero boundary degree always obstructs.
    #[test]
    fn kkm_certificates_recheck(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let (disc, _) = subdivided_simplex(2, 2);
        let labels: BTreeMap<u32, usize> = disc.boundary_vertices().into_iter().map(|v| (v, rng.random_range(0..3))).collect();
        let p = disc_problem(&labels, 2, LabelMode::Singleton);
        let cert = verify_kkm(&p, DEFAULT_BUDGET);
        prop_assert!(cert.is_complete());
        recheck(&p, &cert).unwrap();
        let boundary = p.boundary_cover().clone();
        let deg = common::boundary_degree(p.ambient(), &p.extension(&vec![LabelMode::Singleton.domain(3)[0]; p.free_vertices().len()]));
        if deg != 0 {
            prop_assert_eq!(cert.verdict, Verdict::Obstructed);
        }
        if let Some(w) = &cert.witness {
            prop_assert!(covering_simplex(p.ambient().complex(), w).unwrap().is_none());
            prop_assert_eq!(restrict_cover(w, boundary.vertices()).unwrap(), boundary);
        }
    }
}
