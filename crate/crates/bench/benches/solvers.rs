use criterion::{criterion_group, criterion_main, Criterion};

use admlab_core::deligne::verify_all;
use admlab_core::graph::{parse_graph, PointRef};
use admlab_core::green::{canonical_measure, green_solve};
use admlab_core::invariants::run_checks;
use admlab_core::rational::rat;
use admlab_core::{circuit, sweep};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn theta_text() -> &'static str {
    "vertex u genus=0\nvertex w genus=0\n\
     edge a u w length=1\nedge b u w length=1\nedge c u w length=1\n"
}

fn bench_resistance(c: &mut Criterion) {
    let graph = parse_graph(theta_text()).unwrap();
    let x = PointRef::edge_point("a", rat(1, 3));
    let y = PointRef::edge_point("b", rat(2, 3));
    c.bench_function("resistance_theta_interior", |b| {
        b.iter(|| circuit::resistance(&graph, &x, &y).unwrap())
    });
}

fn bench_green_solve(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cfg = sweep::SweepConfig::default();
    let graph = sweep::random_graph(&mut rng, &cfg);
    let mu = canonical_measure(&graph).unwrap();
    let y = PointRef::vertex(graph.vertices()[0].id.clone());
    c.bench_function("green_solve_random_graph", |b| {
        b.iter(|| green_solve(&graph, &mu, &y).unwrap())
    });
}

fn bench_invariants(c: &mut Criterion) {
    let graph = parse_graph(theta_text()).unwrap();
    c.bench_function("run_checks_theta", |b| {
        b.iter(|| run_checks(&graph).unwrap())
    });
}

fn bench_identities(c: &mut Criterion) {
    c.bench_function("verify_all_identities", |b| {
        b.iter(|| verify_all().unwrap())
    });
}

criterion_group!(
    benches,
    bench_resistance,
    bench_green_solve,
    bench_invariants,
    bench_identities
);
criterion_main!(benches);
