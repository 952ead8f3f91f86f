//! Parallel kernels on the default rayon pool against a one-thread pool.
//! Build with `--no-default-features` to time the sequential fallback.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use coverdeg::cover::{default_partition, pl_map, restrict_cover, subdivide_cover, PLMap};
use coverdeg::fixtures::{hopf, identity_cover, sperner_labels, sphere, subdivided_simplex};
use coverdeg::invariants::{degree, hopf_invariant};
use coverdeg::search::{verify_kkm, ExtensionProblem, LabelMode, DEFAULT_BUDGET};
use coverdeg::simplicial::barycentric_subdivide;

fn subdivided_identity(n: usize, times: usize) -> PLMap {
    let m = sphere(n);
    let c = identity_cover(n);
    let (sm, sub) = barycentric_subdivide(&m, times).unwrap();
    let (sc, sphi) = subdivide_cover(&default_partition(&c), &sub).unwrap();
    pl_map(&sm, &sc, &sphi).unwrap()
}

fn sperner_problem() -> ExtensionProblem {
    let (disc, carriers) = subdivided_simplex(2, 2);
    let labels = sperner_labels(2, &carriers);
    let boundary = restrict_cover(&labels, disc.boundary_vertices()).unwrap();
    ExtensionProblem::new(disc, boundary, LabelMode::Singleton).unwrap()
}

#[cfg(feature = "parallel")]
fn pools() -> Vec<(String, rayon::ThreadPool)> {
    let mut sizes = vec![1, 2, 4, rayon::current_num_threads()];
    sizes.sort_unstable();
    sizes.dedup();
    sizes
        .into_iter()
        .map(|n| (format!("{n}-threads"), rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap()))
        .collect()
}

#[cfg(feature = "parallel")]
fn run<R: Send>(c: &mut Criterion, group: &str, f: impl Fn() -> R + Sync) {
    let mut g = c.benchmark_group(group);
    g.sample_size(10);
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| pool.install(&f)));
    }
    g.finish();
}

#[cfg(not(feature = "parallel"))]
fn run<R>(c: &mut Criterion, group: &str, f: impl Fn() -> R) {
    let mut g = c.benchmark_group(group);
    g.sample_size(10);
    g.bench_function(BenchmarkId::from_parameter("sequential"), |b| b.iter(&f));
    g.finish();
}

fn sweeps(c: &mut Criterion) {
    let s2 = subdivided_identity(2, 3);
    run(c, "degree/S2 subdivided 3x", || degree(&s2).unwrap().degree);
    let s3 = subdivided_identity(3, 1);
    run(c, "degree/S3 subdivided 1x", || degree(&s3).unwrap().degree);

    let h = hopf();
    let f = pl_map(&h.manifold, &h.cover, &h.partition).unwrap();
    run(c, "hopf invariant", || hopf_invariant(&f, Some(&h.realization)).unwrap().invariant);

    let p = sperner_problem();
    run(c, "kkm/Sperner disc subdivided 2x", || verify_kkm(&p, DEFAULT_BUDGET).nodes);
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
