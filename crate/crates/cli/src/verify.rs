use anyhow::Result;
use bcg::diagnostics::{
    curvature_estimate, dual_gap, gradient_check, random_point, random_vertices, restricted_smoothness_bound,
    simplicial_curvature_estimate, BoundReport,
};
use bcg::objectives::{generate, Family, RegionSpec};
use bcg::sigd::{sigd_step, SigdMode};
use bcg::solvers::bcg;
use bcg::{ActiveSet, FeasibleRegion, InstanceSpec, LineSearch, SolverConfig, StepKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_families() -> Vec<(&'static str, Family)> {
    vec![
        ("simplex", Family::SimplexQuadratic { k: 8 }),
        (
            "cube",
            Family::StructuredRegression {
                region: RegionSpec::Cube { n: 6 },
                m: 10,
            },
        ),
        (
            "l1_ball",
            Family::Lasso {
                m: 10,
                n: 12,
                nnz: 3,
                scale: 3.0,
            },
        ),
        (
            "birkhoff",
            Family::StructuredRegression {
                region: RegionSpec::Birkhoff { n: 4 },
                m: 20,
            },
        ),
        (
            "dagpath",
            Family::StructuredRegression {
                region: RegionSpec::DagPath {
                    layers: 4,
                    width: 3,
                    arc_prob: 0.6,
                },
                m: 15,
            },
        ),
    ]
}

/// Diagnostics suite over small seeded instances of every region: gradient checks,
/// the `L_{f_S} <= L·D²·|S|/4` cap, sampled curvature against twice the sampled
/// simplicial curvature, the per-step simplex descent guarantee, and the
/// `dual gap <= 2Φ` certificates of BCG runs.
pub fn verify_suite(seed: u64) -> Result<Vec<BoundReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (name, family) in small_families() {
        let inst = generate(&InstanceSpec::new(family, seed))?;
        let (obj, region) = (&inst.objective, &inst.region);

        let pts = (0..3)
            .map(|_| random_point(region, &mut rng, 4))
            .collect::<bcg::Result<Vec<_>>>()?;
        let mut r = gradient_check(obj, &pts);
        r.name = format!("{name}/{}", r.name);
        out.push(r);

        let verts = random_vertices(region, &mut rng, 4 * region.affine_dim().max(2))?;
        let mut worst: Option<BoundReport> = None;
        for _ in 0..20 {
            let size = rng.random_range(1..=verts.len());
            let s = bcg::diagnostics::random_subset(&verts, size, &mut rng);
            let rep = restricted_smoothness_bound(obj, region, &s)?;
            if worst.as_ref().is_none_or(|w| rep.slack < w.slack) {
                worst = Some(rep);
            }
        }
        if let Some(mut w) = worst {
            w.name = format!("{name}/{}", w.name);
            out.push(w);
        }

        let c = curvature_estimate(obj, region, 200, &mut rng)?;
        let (cd, _) = simplicial_curvature_estimate(obj, region, 50, &mut rng)?;
        out.push(BoundReport::new(
            format!("{name}/sampled_curvature_vs_twice_sampled_simplicial"),
            c,
            2.0 * cd,
            1e-9 * (1.0 + cd),
        ));

        let run = bcg(
            obj,
            region,
            inst.start.clone(),
            &SolverConfig {
                eps: 1e-6,
                ..SolverConfig::default()
            },
        )?;
        let mut worst = BoundReport::new(format!("{name}/certificate_dual_gap_vs_twice_phi"), 0.0, 0.0, 0.0);
        for cert in &run.certificates {
            let gap = dual_gap(obj, region, &cert.iterate)?;
            let rep = BoundReport::new(worst.name.clone(), gap, 2.0 * cert.phi, 1e-12 * (1.0 + cert.phi));
            if rep.slack < worst.slack || cert.iter == 0 {
                worst = rep;
            }
        }
        out.push(worst);
        out.push(BoundReport::new(
            format!("{name}/run_violations"),
            run.violations.len() as f64,
            0.0,
            0.0,
        ));

        let mut worst: Option<BoundReport> = None;
        for _ in 0..30 {
            let size = rng.random_range(2..=verts.len().max(2));
            let atoms = bcg::diagnostics::random_subset(&verts, size, &mut rng);
            if atoms.len() < 2 {
                continue;
            }
            let w: Vec<f64> = atoms.iter().map(|_| rng.random_range(0.05..1.0)).collect();
            let total: f64 = w.iter().sum();
            let mut set = ActiveSet::new(atoms.clone(), w.iter().map(|v| v / total).collect())?;
            let ls = obj.restricted_smoothness(&atoms)?;
            let g = bcg::Objective::gradient(obj, set.iterate());
            let gap = set.local_extremes(&g).local_gap();
            let fx = bcg::Objective::value(obj, set.iterate());
            let step = sigd_step(obj, &mut set, SigdMode::Vanilla, LineSearch::default())?;
            if step.kind != StepKind::Descent || ls <= 0.0 {
                continue;
            }
            let bound = gap * gap / (4.0 * ls);
            // progress >= bound, written as bound <= progress.
            let rep = BoundReport::new(
                format!("{name}/simplex_descent_progress"),
                bound,
                step.progress,
                1e-9 * (1.0 + fx.abs()),
            );
            if worst.as_ref().is_none_or(|w| rep.slack < w.slack) {
                worst = Some(rep);
            }
        }
        out.extend(worst);
    }
    Ok(out)
}
