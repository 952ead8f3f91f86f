mod common;

use std::collections::BTreeMap;

use coverdeg::cover::{covering_simplex, Cover};
use coverdeg::fixtures::{fixture_files, subdivided_simplex};
use coverdeg::io::{CertificateDoc, ComplexFile, CoverFile, KkmCertificateDoc, PrismCertificateDoc};
use coverdeg::search::{verify_kkm, ExtensionProblem, LabelMode, Verdict, DEFAULT_BUDGET};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn fixtures_round_trip() {
    for (name, text) in fixture_files() {
        if let Ok(c) = CoverFile::parse(&text, &name) {
            let back = CoverFile::parse(&c.to_toml(), &name).unwrap();
            assert!(back.same_content(&c), "{name}");
            assert_eq!(back.to_toml(), text, "{name}");
        } else {
            let c = ComplexFile::parse(&text, &name).unwrap();
            let back = ComplexFile::parse(&c.to_toml(), &name).unwrap();
            assert!(back.same_content(&c), "{name}");
        }
    }
}

#[test]
fn rationals_are_never_floats() {
    let text = "schema_version = 1\nnum_sets = 3\n[labels]\n0 = [0, 1]\n[weights]\n0 = [\"0.5\", \"1/2\", \"0\"]\n";
    assert!(CoverFile::parse(text, "f.toml").is_err());
}

fn problem(seed: u64) -> (ExtensionProblem, coverdeg::search::Certificate) {
    let mut rng = common::rng(seed);
    let (disc, _) = subdivided_simplex(2, 2);
    let b = Cover::from_lists(3, disc.boundary_vertices().into_iter().map(|v| (v, [rng.random_range(0..3)]))).unwrap();
    let p = ExtensionProblem::new(disc, b, LabelMode::Singleton).unwrap();
    let c = verify_kkm(&p, DEFAULT_BUDGET);
    (p, c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Every single-label change of an emitted witness is accepted exactly
    /// when it keeps the witness valid.
    #[test]
    fn recheck_rejects_breaking_mutations(seed in any::<u64>(), pick in any::<usize>(), label in 0usize..3) {
        let (p, c) = problem(seed);
        let doc = KkmCertificateDoc::new(&p, &c);
        prop_assert!(CertificateDoc::Kkm(doc.clone()).recheck().is_ok());
        let text = CertificateDoc::Kkm(doc.clone()).to_toml();
        prop_assert_eq!(CertificateDoc::parse(&text, "c").unwrap(), CertificateDoc::Kkm(doc.clone()));

        match c.verdict {
            Verdict::Extendable => {
                let mut bad = doc.clone();
                let w = bad.witness.as_mut().unwrap();
                let vertices: Vec<u32> = w.labels.keys().copied().collect();
                let v = vertices[pick % vertices.len()];
                if w.labels[&v] == vec![label] {
                    return Ok(());
                }
                w.labels.insert(v, vec![label]);
                let mutated = w.cover().unwrap();
                let on_boundary = p.boundary_cover().labels(v).is_some();
                let breaks = on_boundary || covering_simplex(p.ambient().complex(), &mutated).unwrap().is_some();
                prop_assert_eq!(CertificateDoc::Kkm(bad).recheck().is_err(), breaks);
            }
            Verdict::Obstructed => {
                let mut bad = doc.clone();
                let i = pick % bad.exhaustion.len();
                if bad.exhaustion.len() > 1 {
                    bad.exhaustion.remove(i);
                } else {
                    bad.exhaustion[i].facet = vec![];
                }
                prop_assert!(CertificateDoc::Kkm(bad).recheck().is_err());
                let mut bad = doc.clone();
                bad.exhaustion[i].prefix.push(vec![label]);
                prop_assert!(CertificateDoc::Kkm(bad).recheck().is_err());
            }
            Verdict::Inconclusive => prop_assert!(false, "budget too small"),
        }
        let mut bad = doc.clone();
        bad.nodes = bad.budget + 1;
        prop_assert!(CertificateDoc::Kkm(bad).recheck().is_err());
        let mut bad = doc.clone();
        bad.space_size.push('0');
        prop_assert!(CertificateDoc::Kkm(bad).recheck().is_err());
        let mut bad = doc;
        bad.verdict = match c.verdict {
            Verdict::Extendable => Verdict::Obstructed,
            _ => Verdict::Extendable,
        };
        prop_assert!(CertificateDoc::Kkm(bad).recheck().is_err());
    }

    #[test]
    fn prism_certificates_round_trip(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let m = common::subdivided_sphere(1, 1);
        let s1 = common::random_cover(&m, &mut rng);
        let s2 = common::walk(&m, &s1, 6, &mut rng);
        let Some(w) = coverdeg::classify::prism_witness(&m, &s1, &s2, 0).unwrap() else { return Ok(()) };
        let doc = CertificateDoc::PrismWitness(PrismCertificateDoc::new(&w));
        let back = CertificateDoc::parse(&doc.to_toml(), "w").unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert!(back.recheck().is_ok());
        let CertificateDoc::PrismWitness(mut bad) = back else { unreachable!() };
        let top: BTreeMap<u32, Vec<usize>> = bad.second.labels.clone();
        let (&v, l) = top.iter().next().unwrap();
        bad.second.labels.insert(v, vec![(l[0] + 1) % 3]);
        prop_assert!(CertificateDoc::PrismWitness(bad).recheck().is_err());
    }
}
