use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use bcg::diagnostics::write_json_lines;
use bcg::{InstanceSpec, SolverConfig};
use bcg_cli::{run_experiment, sparsity_table, verify_suite, Algo, ExperimentSpec, FamilyName, SparsitySpec};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bench", about = "Benchmarks for blended conditional gradients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run algorithms on one seeded instance and write traces and summaries.
    Run(RunArgs),
    /// Run the diagnostics suite and print one JSON report per line.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Active-set sizes before and after sparsification on Birkhoff structured regression.
    SparsityTable(SparsityArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    family: FamilyName,
    /// Main problem dimension; each family has a default.
    #[arg(long)]
    size: Option<usize>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "bcg")]
    algo: Vec<Algo>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Weak-separation accuracy.
    #[arg(long = "K", default_value_t = 1.0)]
    accuracy: f64,
    #[arg(long, default_value_t = 1e-8)]
    eps: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iter: usize,
    /// Seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    exact_gap: bool,
    #[arg(long)]
    pairwise_blend: bool,
    #[arg(long, value_name = "EPS0")]
    promote_drops: Option<f64>,
    #[arg(long)]
    post_opt: bool,
    #[arg(long)]
    fixed_steps: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SparsityArgs {
    /// Birkhoff polytope size.
    #[arg(long, default_value_t = 20)]
    n: usize,
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
    #[arg(long, default_value_t = 1e-9)]
    eps: f64,
    #[arg(long, default_value_t = 1e-2)]
    eps0: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Run(a) => {
            let spec = ExperimentSpec {
                instance: InstanceSpec::new(a.family.family(a.size), a.seed),
                algos: a.algo,
                config: SolverConfig {
                    accuracy: a.accuracy,
                    eps: a.eps,
                    max_iter: a.max_iter,
                    time_limit: a.time_limit,
                    drop_promotion_eps0: a.promote_drops,
                    pairwise_blend: a.pairwise_blend,
                    fixed_steps: a.fixed_steps,
                    exact_gap: a.exact_gap,
                    seed: a.seed,
                    ..SolverConfig::default()
                },
                post_opt: a.post_opt,
                out: a.out,
            };
            let report = run_experiment(&spec)?;
            for r in &report.runs {
                let s = &r.summary;
                println!(
                    "{:5} f={:.10e} |S|={} iters={} lmo={} termination={:?}",
                    r.algo.name(),
                    s.final_f,
                    s.final_active_size,
                    s.iterations,
                    s.lmo_calls,
                    s.termination
                );
            }
            let violations = report.violations();
            for v in &violations {
                eprintln!("violation: {v}");
            }
            Ok(violations.is_empty())
        }
        Command::Verify { seed } => {
            let reports = verify_suite(seed)?;
            write_json_lines(std::io::stdout().lock(), &reports)?;
            Ok(reports.iter().all(|r| r.satisfied))
        }
        Command::SparsityTable(a) => {
            let spec = SparsitySpec {
                n: a.n,
                seeds: (0..a.seeds).collect(),
                config: SolverConfig {
                    eps: a.eps,
                    max_iter: a.max_iter,
                    ..SolverConfig::default()
                },
                eps0: a.eps0,
            };
            let table = sparsity_table(&spec)?;
            print!("{}", table.to_markdown());
            if let Some(dir) = a.out {
                std::fs::create_dir_all(&dir)?;
                table.write_csv(std::fs::File::create(dir.join("sparsity.csv"))?)?;
                std::fs::write(dir.join("sparsity.md"), table.to_markdown())?;
            }
            Ok(table.rows.iter().all(|r| r.post_within_gap))
        }
    }
}

fn main() -> ExitCode {
    // Exit code 2 is reserved for invariant violations, so usage errors exit with 1.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::FAILURE;
        }
        Err(e) => e.exit(),
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
