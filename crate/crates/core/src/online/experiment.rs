use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::arrival::{generate_arrival, ArrivalKind};
use super::sim::{online_color, reference_bound, StrategyConfig, StrategyKind};
use crate::coloring::Coloring;
use crate::error::{Error, Result};
use crate::formulas::chi_kcf_closed;
use crate::verify::verify_kcf;

pub const EXPERIMENT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub n_values: Vec<usize>,
    pub k: usize,
    pub strategies: Vec<StrategyKind>,
    pub orders: Vec<ArrivalKind>,
    pub trials: usize,
    pub seed: u64,
    /// Keep each trial's final coloring in the report.
    #[serde(default)]
    pub keep_colorings: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub cell: usize,
    pub trial: usize,
    pub n: usize,
    pub k: usize,
    pub strategy: StrategyKind,
    pub order: String,
    /// Seed derived for this trial from the experiment seed.
    pub trial_seed: u64,
    pub colors_used: usize,
    pub chi_kcf: u32,
    pub verified: bool,
    pub bound: f64,
    pub ratio: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coloring: Option<Coloring>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub cell: usize,
    pub n: usize,
    pub k: usize,
    pub strategy: StrategyKind,
    pub order: String,
    pub trials: usize,
    pub min: usize,
    pub mean: f64,
    pub max: usize,
    pub p95: usize,
    pub q: usize,
    pub bound: f64,
    pub ratio_min: f64,
    pub ratio_mean: f64,
    pub ratio_max: f64,
    pub all_verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub seed: u64,
    pub k: usize,
    pub trials: usize,
    pub cells: Vec<CellSummary>,
    pub rows: Vec<TrialRow>,
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `trial` in cell `cell`; independent of scheduling.
pub fn derive_seed(seed: u64, cell: usize, trial: usize) -> u64 {
    mix(mix(mix(seed) ^ cell as u64) ^ trial as u64)
}

/// Nearest-rank percentile of sorted data.
fn percentile(sorted: &[usize], pct: usize) -> usize {
    let rank = (pct * sorted.len()).div_ceil(100).max(1);
    sorted[rank - 1]
}

/// Runs every `(n, order, strategy)` cell for `trials` trials.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    if spec.n_values.is_empty() || spec.strategies.is_empty() || spec.orders.is_empty() {
        return Err(Error::EmptyDomain("experiment has no cells"));
    }
    if spec.trials == 0 {
        return Err(Error::domain("trials must be at least 1"));
    }
    if spec.k == 0 {
        return Err(Error::domain("k must be at least 1"));
    }
    let mut cells = Vec::new();
    for &n in &spec.n_values {
        for order in &spec.orders {
            for &strategy in &spec.strategies {
                cells.push((n, order, strategy));
            }
        }
    }
    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..spec.trials).map(move |t| (c, t)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(cell, trial)| {
            let (n, order, kind) = cells[cell];
            let trial_seed = derive_seed(spec.seed, cell, trial);
            let arrival = generate_arrival(n, order, trial_seed)?;
            let strategy = StrategyConfig {
                kind,
                k: spec.k,
                seed: Some(trial_seed),
                palette_cap: None,
            };
            let rep = online_color(&arrival, &strategy)?;
            let verified = verify_kcf(&rep.coloring, spec.k)?.ok();
            Ok(TrialRow {
                cell,
                trial,
                n,
                k: spec.k,
                strategy: kind,
                order: order.to_string(),
                trial_seed,
                colors_used: rep.colors_used,
                chi_kcf: chi_kcf_closed(n as u64, spec.k)?,
                verified,
                bound: rep.bound,
                ratio: ratio(rep.colors_used, rep.bound),
                coloring: spec.keep_colorings.then_some(rep.coloring),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let q = spec.k + 1;
    let summaries = cells
        .iter()
        .enumerate()
        .map(|(cell, &(n, order, strategy))| {
            let cell_rows = &rows[cell * spec.trials..(cell + 1) * spec.trials];
            let mut used: Vec<usize> = cell_rows.iter().map(|r| r.colors_used).collect();
            used.sort_unstable();
            let bound = reference_bound(n, q);
            let mean = used.iter().sum::<usize>() as f64 / used.len() as f64;
            let min = used[0];
            let max = used[used.len() - 1];
            CellSummary {
                cell,
                n,
                k: spec.k,
                strategy,
                order: order.to_string(),
                trials: spec.trials,
                min,
                mean,
                max,
                p95: percentile(&used, 95),
                q,
                bound,
                ratio_min: ratio(min, bound),
                ratio_mean: if bound > 0.0 { mean / bound } else { 0.0 },
                ratio_max: ratio(max, bound),
                all_verified: cell_rows.iter().all(|r| r.verified),
            }
        })
        .collect();
    Ok(ExperimentReport {
        schema_version: EXPERIMENT_SCHEMA_VERSION,
        seed: spec.seed,
        k: spec.k,
        trials: spec.trials,
        cells: summaries,
        rows,
    })
}

/// `colors / bound`, or 0 when the bound vanishes (n = 1).
fn ratio(colors: usize, bound: f64) -> f64 {
    if bound > 0.0 {
        colors as f64 / bound
    } else {
        0.0
    }
}

fn csv_err(e: impl std::fmt::Display) -> Error {
    Error::Domain(format!("csv output: {e}"))
}

fn f6(x: f64) -> String {
    format!("{x:.6}")
}

impl ExperimentReport {
    /// One row per trial, with the experiment seed in every row.
    pub fn write_trials_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record([
            "schema_version",
            "seed",
            "cell",
            "trial",
            "n",
            "k",
            "strategy",
            "order",
            "trial_seed",
            "colors_used",
            "chi_kcf",
            "verified",
            "bound",
            "ratio",
            "coloring",
        ])
        .map_err(csv_err)?;
        for r in &self.rows {
            w.write_record([
                self.schema_version.to_string(),
                self.seed.to_string(),
                r.cell.to_string(),
                r.trial.to_string(),
                r.n.to_string(),
                r.k.to_string(),
                r.strategy.to_string(),
                r.order.clone(),
                r.trial_seed.to_string(),
                r.colors_used.to_string(),
                r.chi_kcf.to_string(),
                r.verified.to_string(),
                f6(r.bound),
                f6(r.ratio),
                r.coloring.as_ref().map(|c| c.to_string()).unwrap_or_default(),
            ])
            .map_err(csv_err)?;
        }
        w.flush().map_err(csv_err)
    }

    /// One row per cell.
    pub fn write_summary_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record([
            "schema_version",
            "seed",
            "cell",
            "n",
            "k",
            "strategy",
            "order",
            "trials",
            "min",
            "mean",
            "max",
            "p95",
            "q",
            "bound",
            "ratio_min",
            "ratio_mean",
            "ratio_max",
            "all_verified",
        ])
        .map_err(csv_err)?;
        for c in &self.cells {
            w.write_record([
                self.schema_version.to_string(),
                self.seed.to_string(),
                c.cell.to_string(),
                c.n.to_string(),
                c.k.to_string(),
                c.strategy.to_string(),
                c.order.clone(),
                c.trials.to_string(),
                c.min.to_string(),
                f6(c.mean),
                c.max.to_string(),
                c.p95.to_string(),
                c.q.to_string(),
                f6(c.bound),
                f6(c.ratio_min),
                f6(c.ratio_mean),
                f6(c.ratio_max),
                c.all_verified.to_string(),
            ])
            .map_err(csv_err)?;
        }
        w.flush().map_err(csv_err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(trials: usize) -> ExperimentSpec {
        ExperimentSpec {
            n_values: vec![16, 40],
            k: 2,
            strategies: vec![StrategyKind::FirstFit, StrategyKind::RandomFit],
            orders: ArrivalKind::standard().to_vec(),
            trials,
            seed: 7,
            keep_colorings: true,
        }
    }

    #[test]
    fn report_shape_and_validity() {
        let rep = run_experiment(&spec(3)).unwrap();
        assert_eq!(rep.cells.len(), 16);
        assert_eq!(rep.rows.len(), 48);
        for r in &rep.rows {
            assert!(r.verified);
            assert!(r.colors_used >= r.chi_kcf as usize);
        }
        for c in &rep.cells {
            assert!(c.min as f64 <= c.mean && c.mean <= c.max as f64);
            assert!(c.min <= c.p95 && c.p95 <= c.max);
        }
    }

    #[test]
    fn deterministic_cells_collapse() {
        let mut s = spec(1);
        s.strategies = vec![StrategyKind::FirstFit];
        s.orders = vec![ArrivalKind::Sorted];
        let rep = run_experiment(&s).unwrap();
        for c in &rep.cells {
            assert_eq!(c.min, c.max);
            assert_eq!(c.mean, c.min as f64);
        }
    }

    #[test]
    fn reproducible_bytes() {
        let a = run_experiment(&spec(2)).unwrap();
        let b = run_experiment(&spec(2)).unwrap();
        let (mut x, mut y) = (Vec::new(), Vec::new());
        a.write_trials_csv(&mut x).unwrap();
        b.write_trials_csv(&mut y).unwrap();
        assert_eq!(x, y);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn percentiles() {
        let v: Vec<usize> = (1..=100).collect();
        assert_eq!(percentile(&v, 95), 95);
        assert_eq!(percentile(&[4], 95), 4);
        assert_eq!(percentile(&[1, 2, 3], 95), 3);
    }

    #[test]
    fn empty_cells_rejected() {
        let mut s = spec(1);
        s.orders.clear();
        assert!(run_experiment(&s).is_err());
        let mut s = spec(0);
        s.orders = vec![ArrivalKind::Sorted];
        assert!(run_experiment(&s).is_err());
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(1, 0, 0), derive_seed(1, 0, 1));
        assert_ne!(derive_seed(1, 0, 1), derive_seed(1, 1, 0));
        assert_eq!(derive_seed(5, 3, 2), derive_seed(5, 3, 2));
    }
}
