use std::fmt::Write as _;
use std::io::Write;

use anyhow::Result;
use bcg::objectives::{generate, Family, RegionSpec};
use bcg::solvers::post_optimize;
use bcg::{InstanceSpec, SolverConfig};
use serde::{Deserialize, Serialize};

use crate::artifacts::pct_change;
use crate::{run_algo, Algo};

/// Structured regression over `Birkhoff(n)` with a matched iteration budget.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SparsitySpec {
    pub n: usize,
    pub seeds: Vec<u64>,
    /// Shared by all algorithms; `max_iter` is the matched budget.
    pub config: SolverConfig,
    /// Drop promotion bound used for the BCG column.
    pub eps0: f64,
}

impl Default for SparsitySpec {
    fn default() -> Self {
        SparsitySpec {
            n: 20,
            seeds: (0..10).collect(),
            config: SolverConfig {
                eps: 1e-9,
                max_iter: 1000,
                ..SolverConfig::default()
            },
            eps0: 1e-2,
        }
    }
}

/// Active-set sizes of one algorithm on one seed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SparsityRow {
    pub seed: u64,
    pub algo: Algo,
    pub vanilla_size: usize,
    /// `None` for algorithms without drop promotion.
    pub promoted_size: Option<usize>,
    /// Post-optimized size, applied to the promoted run when there is one.
    pub sparsified_size: usize,
    pub vanilla_f: f64,
    pub sparsified_f: f64,
    pub f_change_pct: f64,
    /// Dual gap `d₀` handed to post-optimization.
    pub d0: f64,
    /// Post-optimization raised `f` by at most `d₀`.
    pub post_within_gap: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SparsityTable {
    pub rows: Vec<SparsityRow>,
}

pub const SPARSITY_ALGOS: [Algo; 3] = [Algo::Pcg, Algo::Lpcg, Algo::Bcg];

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

fn rows_for_seed(spec: &SparsitySpec, seed: u64) -> Result<Vec<SparsityRow>> {
    let family = Family::StructuredRegression {
        region: RegionSpec::Birkhoff { n: spec.n },
        m: 2 * spec.n * spec.n,
    };
    let inst = generate(&InstanceSpec::new(family, seed))?;
    let obj = &inst.objective;
    let mut rows = Vec::new();
    for algo in SPARSITY_ALGOS {
        let vanilla = run_algo(algo, &inst, &spec.config)?;
        let promoted = if algo == Algo::Bcg {
            let cfg = SolverConfig {
                drop_promotion_eps0: Some(spec.eps0),
                ..spec.config.clone()
            };
            Some(run_algo(algo, &inst, &cfg)?)
        } else {
            None
        };
        let base = promoted.as_ref().unwrap_or(&vanilla);
        let post = post_optimize(obj, base, &spec.config)?;
        let (f_base, f_post) = (base.final_value(obj), post.final_value(obj));
        let vanilla_f = vanilla.final_value(obj);
        rows.push(SparsityRow {
            seed,
            algo,
            vanilla_size: vanilla.final_set.len(),
            promoted_size: promoted.as_ref().map(|p| p.final_set.len()),
            sparsified_size: post.final_set.len(),
            vanilla_f,
            sparsified_f: f_post,
            f_change_pct: pct_change(vanilla_f, f_post),
            d0: base.final_dual_gap,
            post_within_gap: f_post <= f_base + base.final_dual_gap + 1e-12 * (1.0 + f_base.abs()),
        });
    }
    Ok(rows)
}

/// Runs every seed concurrently; rows are ordered by seed, then algorithm.
pub fn sparsity_table(spec: &SparsitySpec) -> Result<SparsityTable> {
    spec.config.validate()?;
    let per_seed: Vec<Result<Vec<SparsityRow>>> = std::thread::scope(|s| {
        let handles: Vec<_> = spec
            .seeds
            .iter()
            .map(|&seed| s.spawn(move || rows_for_seed(spec, seed)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sparsity worker panicked"))
            .collect()
    });
    let mut rows = Vec::new();
    for r in per_seed {
        rows.extend(r?);
    }
    Ok(SparsityTable { rows })
}

impl SparsityTable {
    fn of(&self, algo: Algo) -> impl Iterator<Item = &SparsityRow> {
        self.rows.iter().filter(move |r| r.algo == algo)
    }

    pub fn median_vanilla_size(&self, algo: Algo) -> f64 {
        median(self.of(algo).map(|r| r.vanilla_size as f64).collect())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Markdown table of medians over seeds.
    pub fn to_markdown(&self) -> String {
        let mut s = String::from(
            "| algo | vanilla | drop promotion | promotion + post-opt | Δf (%) |\n|---|---:|---:|---:|---:|\n",
        );
        for algo in SPARSITY_ALGOS {
            let rows: Vec<&SparsityRow> = self.of(algo).collect();
            if rows.is_empty() {
                continue;
            }
            let promoted = if rows.iter().all(|r| r.promoted_size.is_some()) {
                format!(
                    "{}",
                    median(rows.iter().map(|r| r.promoted_size.unwrap_or(0) as f64).collect())
                )
            } else {
                "n/a".to_string()
            };
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {:.2} |",
                algo.name(),
                median(rows.iter().map(|r| r.vanilla_size as f64).collect()),
                promoted,
                median(rows.iter().map(|r| r.sparsified_size as f64).collect()),
                median(rows.iter().map(|r| r.f_change_pct).collect()),
            );
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!(median(vec![]).is_nan());
    }

    #[test]
    fn small_table_has_a_row_per_algo_and_seed() {
        let spec = SparsitySpec {
            n: 4,
            seeds: vec![0, 1],
            config: SolverConfig {
                max_iter: 200,
                eps: 1e-6,
                ..SolverConfig::default()
            },
            eps0: 1e-2,
        };
        let table = sparsity_table(&spec).unwrap();
        assert_eq!(table.rows.len(), 6);
        assert!(table.rows.iter().all(|r| r.post_within_gap));
        assert!(table
            .rows
            .iter()
            .all(|r| r.sparsified_size <= r.promoted_size.unwrap_or(r.vanilla_size)));
        let md = table.to_markdown();
        assert_eq!(md.lines().count(), 5);
        assert!(md.contains("n/a"));
    }
}
