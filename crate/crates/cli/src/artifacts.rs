use std::collections::BTreeMap;
use std::io::Write;

use anyhow::Result;
use bcg::{IterationRecord, Objective, RunResult, StepKind, Termination};
use serde::{Deserialize, Serialize};

use crate::Algo;

pub const CSV_HEADER: [&str; 9] = [
    "iter",
    "elapsed_s",
    "f_value",
    "phi",
    "dual_gap",
    "step_type",
    "active_size",
    "lmo_calls",
    "cache_hits",
];

/// Writes a trace with the frozen header. `dual_gap` is empty when not computed.
pub fn write_trace_csv<W: Write>(out: W, trace: &[IterationRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in trace {
        w.write_record([
            r.iter.to_string(),
            r.elapsed.to_string(),
            r.f_value.to_string(),
            r.phi.to_string(),
            r.dual_gap.map(|g| g.to_string()).unwrap_or_default(),
            r.step.as_str().to_string(),
            r.active_size.to_string(),
            r.lmo_calls.to_string(),
            r.cache_hits.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PostSummary {
    pub final_f: f64,
    pub final_active_size: usize,
    pub iterations: usize,
    /// Relative change of `f` against the original run, in percent.
    pub f_change_pct: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub algo: Algo,
    pub termination: Termination,
    pub iterations: usize,
    pub final_f: f64,
    pub final_active_size: usize,
    pub final_phi: f64,
    pub final_dual_gap: f64,
    pub steps: BTreeMap<String, usize>,
    pub lmo_calls: u64,
    pub cache_hits: u64,
    pub violations: Vec<String>,
    pub post_opt: Option<PostSummary>,
}

pub fn pct_change(before: f64, after: f64) -> f64 {
    if before == after {
        0.0
    } else {
        100.0 * (after - before) / before.abs().max(f64::MIN_POSITIVE)
    }
}

pub fn summarize(algo: Algo, obj: &dyn Objective, run: &RunResult, post: Option<&RunResult>) -> Summary {
    let final_f = run.final_value(obj);
    let steps = [
        StepKind::FrankWolfe,
        StepKind::GapStep,
        StepKind::Descent,
        StepKind::Drop,
    ]
    .into_iter()
    .map(|k| (k.as_str().to_string(), run.count(k)))
    .collect();
    Summary {
        algo,
        termination: run.termination,
        iterations: run.trace.len(),
        final_f,
        final_active_size: run.final_set.len(),
        final_phi: run.phi_final,
        final_dual_gap: run.final_dual_gap,
        steps,
        lmo_calls: run.lmo_calls(),
        cache_hits: run.cache_hits(),
        violations: run.violations.clone(),
        post_opt: post.map(|p| {
            let f = p.final_value(obj);
            PostSummary {
                final_f: f,
                final_active_size: p.final_set.len(),
                iterations: p.trace.len(),
                f_change_pct: pct_change(final_f, f),
            }
        }),
    }
}

/// Gnuplot script drawing log₂ f and log₂ Φ against iterations and time.
pub fn plot_script(algos: &[Algo]) -> String {
    let mut s = String::from(
        "set datafile separator ','\nset key autotitle columnhead\nset terminal pngcairo size 1200,800\nset output 'plot.png'\nset multiplot layout 2,2\n",
    );
    let panels = [
        ("iteration", 1, "log2 f", 3),
        ("time (s)", 2, "log2 f", 3),
        ("iteration", 1, "log2 phi", 4),
        ("time (s)", 2, "log2 phi", 4),
    ];
    for (xl, xc, yl, yc) in panels {
        s.push_str(&format!("set xlabel '{xl}'\nset ylabel '{yl}'\nplot "));
        let series: Vec<String> = algos
            .iter()
            .map(|a| {
                format!(
                    "'{0}.csv' using {xc}:(log(${yc})/log(2)) with lines title '{0}'",
                    a.name()
                )
            })
            .collect();
        s.push_str(&series.join(", \\\n     "));
        s.push('\n');
    }
    s.push_str("unset multiplot\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use bcg::solvers::bcg;
    use bcg::{FeasibleRegion, Point, QuadraticObjective, Region, SolverConfig};

    #[test]
    fn header_is_frozen() {
        let mut buf = Vec::new();
        write_trace_csv(&mut buf, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "iter,elapsed_s,f_value,phi,dual_gap,step_type,active_size,lmo_calls,cache_hits\n"
        );
    }

    #[test]
    fn rows_leave_dual_gap_empty_without_exact_gap() {
        let region = Region::simplex(3).unwrap();
        let obj = QuadraticObjective::linear(Point::from_vec(vec![1.0, -1.0, 0.0]));
        let run = bcg(&obj, &region, region.start_vertex(), &SolverConfig::default()).unwrap();
        let mut buf = Vec::new();
        write_trace_csv(&mut buf, &run.trace).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let first = text.lines().nth(1).unwrap();
        let cols: Vec<&str> = first.split(',').collect();
        assert_eq!(cols.len(), 9);
        assert_eq!(cols[4], "");
        assert_eq!(cols[5], "fw");
        let summary = summarize(Algo::Bcg, &obj, &run, None);
        assert_eq!(summary.steps["fw"], 1);
        assert_eq!(summary.final_active_size, 1);
    }

    #[test]
    fn plot_script_references_every_trace() {
        let s = plot_script(&[Algo::Bcg, Algo::Pcg]);
        assert!(s.contains("'bcg.csv'") && s.contains("'pcg.csv'"));
        assert_eq!(s.lines().filter(|l| l.starts_with("plot ")).count(), 4);
    }

    #[test]
    fn pct_change_handles_equal_values() {
        assert_eq!(pct_change(2.0, 2.0), 0.0);
        assert!((pct_change(2.0, 2.5) - 25.0).abs() < 1e-12);
    }
}
