use bcg::objectives::{generate, Family, RegionSpec};
use bcg::weak_sep::WeakSeparation;
use bcg::{FeasibleRegion, InstanceSpec, Point, Region};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

fn direction(rng: &mut ChaCha8Rng, n: usize) -> Point {
    Point::from_fn(n, |_, _| rng.random_range(-1.0..1.0))
}

fn lmo(c: &mut Criterion) {
    let mut group = c.benchmark_group("lmo");
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let regions = [
        ("simplex_1000", Region::simplex(1000).unwrap()),
        ("l1_ball_1000", Region::l1_ball(1000, 1.0).unwrap()),
        ("cube_1000", Region::cube(1000).unwrap()),
        ("birkhoff_20", Region::birkhoff(20).unwrap()),
        ("birkhoff_50", Region::birkhoff(50).unwrap()),
    ];
    for (name, region) in &regions {
        let dir = direction(&mut rng, region.dim());
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| region.lmo(black_box(&dir)).unwrap())
        });
    }
    let dag = generate(&InstanceSpec::new(
        Family::StructuredRegression {
            region: RegionSpec::DagPath {
                layers: 30,
                width: 20,
                arc_prob: 0.3,
            },
            m: 10,
        },
        0,
    ))
    .unwrap()
    .region;
    let dir = direction(&mut rng, dag.dim());
    group.bench_function(BenchmarkId::from_parameter("dag_30x20"), |b| {
        b.iter(|| dag.lmo(black_box(&dir)).unwrap())
    });
    group.finish();
}

fn weak_separation(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let region = Region::birkhoff(20).unwrap();
    let mut ws = WeakSeparation::new(None);
    let dirs: Vec<Point> = (0..50).map(|_| direction(&mut rng, region.dim())).collect();
    for d in &dirs {
        ws.exact(&region, d).unwrap();
    }
    let x = region.start_vertex().to_dense();
    let active = vec![region.start_vertex()];
    let c0 = direction(&mut rng, region.dim());
    c.bench_function("weak_sep/birkhoff_20_cached", |b| {
        b.iter(|| ws.separate(&region, &active, black_box(&c0), &x, 1e-3, 1.0).unwrap())
    });
}

criterion_group!(benches, lmo, weak_separation);
criterion_main!(benches);
