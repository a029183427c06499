use bcg::objectives::{generate, Family, RegionSpec};
use bcg::solvers::{baseline, bcg, Baseline};
use bcg::{InstanceSpec, SolverConfig};
use criterion::{criterion_group, criterion_main, Criterion};

fn solvers(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    group.sample_size(10);
    let cases = [
        ("simplex_50", Family::SimplexQuadratic { k: 50 }),
        (
            "lasso_200x400",
            Family::Lasso {
                m: 200,
                n: 400,
                nnz: 20,
                scale: 5.0,
            },
        ),
        (
            "birkhoff_10",
            Family::StructuredRegression {
                region: RegionSpec::Birkhoff { n: 10 },
                m: 200,
            },
        ),
    ];
    let cfg = SolverConfig {
        eps: 1e-6,
        max_iter: 2_000,
        ..SolverConfig::default()
    };
    for (name, family) in cases {
        let inst = generate(&InstanceSpec::new(family, 0)).unwrap();
        group.bench_function(format!("bcg/{name}"), |b| {
            b.iter(|| bcg(&inst.objective, &inst.region, inst.start.clone(), &cfg).unwrap())
        });
        group.bench_function(format!("pcg/{name}"), |b| {
            b.iter(|| {
                baseline(
                    Baseline::PairwiseFW,
                    &inst.objective,
                    &inst.region,
                    inst.start.clone(),
                    &cfg,
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, solvers);
criterion_main!(benches);
