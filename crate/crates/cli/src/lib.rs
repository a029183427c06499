//! Benchmark harness: seeded experiments, CSV traces, run summaries, a sparsity
//! table and a diagnostics suite.

mod artifacts;
mod sparsity;
mod verify;

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use bcg::objectives::{generate, Family, Instance, RegionSpec};
use bcg::solvers::{baseline, bcg as run_bcg, post_optimize, standalone_sigd, Baseline};
use bcg::{InstanceSpec, Region, RunResult, SolverConfig};
use serde::{Deserialize, Serialize};

pub use artifacts::{plot_script, summarize, write_trace_csv, PostSummary, Summary, CSV_HEADER};
pub use sparsity::{sparsity_table, SparsityRow, SparsitySpec, SparsityTable};
pub use verify::verify_suite;

/// Algorithms selectable from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Bcg,
    /// Lazy pairwise Frank-Wolfe.
    Lpcg,
    /// Pairwise Frank-Wolfe.
    Pcg,
    /// Away-step Frank-Wolfe.
    Acg,
    /// Vanilla Frank-Wolfe.
    Cg,
    /// Stand-alone simplex gradient descent (simplex family only).
    Sigd,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Bcg => "bcg",
            Algo::Lpcg => "lpcg",
            Algo::Pcg => "pcg",
            Algo::Acg => "acg",
            Algo::Cg => "cg",
            Algo::Sigd => "sigd",
        }
    }

    fn baseline(self) -> Option<Baseline> {
        match self {
            Algo::Lpcg => Some(Baseline::LazyPairwiseFW),
            Algo::Pcg => Some(Baseline::PairwiseFW),
            Algo::Acg => Some(Baseline::AwayFW),
            Algo::Cg => Some(Baseline::VanillaFW),
            Algo::Bcg | Algo::Sigd => None,
        }
    }
}

/// Problem families exposed by `bench run`, with default sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FamilyName {
    Lasso,
    Signal,
    Birkhoff,
    Dagpath,
    Simplex,
}

impl FamilyName {
    /// The instance family; `size` overrides the main dimension.
    pub fn family(self, size: Option<usize>) -> Family {
        match self {
            FamilyName::Lasso => {
                let n = size.unwrap_or(400);
                Family::Lasso {
                    m: n / 2,
                    n,
                    nnz: (n / 20).max(1),
                    scale: 5.0,
                }
            }
            FamilyName::Signal => {
                let n = size.unwrap_or(1000);
                Family::SignalRecovery {
                    m: n / 2,
                    n,
                    density: 0.05,
                    sigma: 0.05,
                    tau: None,
                }
            }
            FamilyName::Birkhoff => {
                let n = size.unwrap_or(20);
                Family::StructuredRegression {
                    region: RegionSpec::Birkhoff { n },
                    m: 2 * n * n,
                }
            }
            FamilyName::Dagpath => {
                let layers = size.unwrap_or(10);
                Family::StructuredRegression {
                    region: RegionSpec::DagPath {
                        layers,
                        width: 8,
                        arc_prob: 0.5,
                    },
                    m: 200,
                }
            }
            FamilyName::Simplex => Family::SimplexQuadratic { k: size.unwrap_or(20) },
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub instance: InstanceSpec,
    pub algos: Vec<Algo>,
    pub config: SolverConfig,
    /// Also re-solve over the hull of each final active set.
    pub post_opt: bool,
    pub out: PathBuf,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.algos.is_empty() {
            bail!("at least one algorithm is required");
        }
        for (i, a) in self.algos.iter().enumerate() {
            if self.algos[..i].contains(a) {
                bail!("algorithm {} listed twice", a.name());
            }
        }
        if self.algos.contains(&Algo::Sigd) && !matches!(self.instance.family, Family::SimplexQuadratic { .. }) {
            bail!("sigd runs only on the simplex family");
        }
        self.config.validate()?;
        Ok(())
    }
}

/// Result of one algorithm inside an experiment.
#[derive(Clone, Debug)]
pub struct AlgoRun {
    pub algo: Algo,
    pub run: RunResult,
    pub post: Option<RunResult>,
    pub summary: Summary,
}

#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub runs: Vec<AlgoRun>,
}

impl ExperimentReport {
    /// Invariant violations detected in any run, prefixed by the algorithm name.
    pub fn violations(&self) -> Vec<String> {
        self.runs
            .iter()
            .flat_map(|r| {
                let post = r
                    .post
                    .iter()
                    .flat_map(|p| p.violations.iter())
                    .map(move |v| format!("{} (post-opt): {v}", r.algo.name()));
                r.run
                    .violations
                    .iter()
                    .map(move |v| format!("{}: {v}", r.algo.name()))
                    .chain(post)
            })
            .collect()
    }
}

/// Runs one algorithm on a generated instance.
pub fn run_algo(algo: Algo, inst: &Instance, config: &SolverConfig) -> Result<RunResult> {
    let run = match (algo, algo.baseline()) {
        (_, Some(b)) => baseline(b, &inst.objective, &inst.region, inst.start.clone(), config)?,
        (Algo::Bcg, None) => run_bcg(&inst.objective, &inst.region, inst.start.clone(), config)?,
        (_, None) => match inst.region {
            Region::Simplex { k } => standalone_sigd(&inst.objective, k, config)?,
            _ => bail!("sigd runs only over the probability simplex"),
        },
    };
    Ok(run)
}

/// Generates the instance, runs every algorithm concurrently and writes, per
/// algorithm, `<algo>.csv` and `<algo>.json` (plus `<algo>_post.csv` with
/// post-optimization), along with `spec.json` and `plot.gp`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    spec.validate()?;
    let inst = generate(&spec.instance)?;
    fs::create_dir_all(&spec.out).with_context(|| format!("creating {}", spec.out.display()))?;
    fs::write(spec.out.join("spec.json"), serde_json::to_string_pretty(spec)?)?;

    let results: Vec<Result<AlgoRun>> = std::thread::scope(|s| {
        let handles: Vec<_> = spec
            .algos
            .iter()
            .map(|&algo| {
                let inst = &inst;
                s.spawn(move || -> Result<AlgoRun> {
                    let run = run_algo(algo, inst, &spec.config).with_context(|| format!("running {}", algo.name()))?;
                    let post = if spec.post_opt {
                        Some(post_optimize(&inst.objective, &run, &spec.config)?)
                    } else {
                        None
                    };
                    let summary = summarize(algo, &inst.objective, &run, post.as_ref());
                    let dir = &spec.out;
                    write_trace_csv(fs::File::create(dir.join(format!("{}.csv", algo.name())))?, &run.trace)?;
                    if let Some(p) = &post {
                        write_trace_csv(
                            fs::File::create(dir.join(format!("{}_post.csv", algo.name())))?,
                            &p.trace,
                        )?;
                    }
                    fs::write(
                        dir.join(format!("{}.json", algo.name())),
                        serde_json::to_string_pretty(&summary)?,
                    )?;
                    Ok(AlgoRun {
                        algo,
                        run,
                        post,
                        summary,
                    })
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect()
    });
    let runs = results.into_iter().collect::<Result<Vec<_>>>()?;
    fs::write(spec.out.join("plot.gp"), plot_script(&spec.algos))?;
    Ok(ExperimentReport { runs })
}
