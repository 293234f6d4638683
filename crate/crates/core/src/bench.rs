//! Repeated planning over seeds with per-trial CSV rows and aggregate
//! success statistics.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::env::Environment;
use crate::planner::{plan, PlannerParams};
use crate::scenario::Scenario;
use crate::topology::{uvd_deformable, Path};
use crate::Result;

pub const CSV_HEADER: &str = "trial,seed,time_prm_ms,time_cluster_ms,time_dfs_ms,time_filter_ms,n_paths,lengths,matched_refs";

/// Paths averaged by the n-shortest quality metric.
pub const DEFAULT_N_SHORTEST: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub time_prm_ms: f64,
    pub time_cluster_ms: f64,
    pub time_dfs_ms: f64,
    pub time_filter_ms: f64,
    /// Ascending.
    pub lengths: Vec<f64>,
    /// Ids of the reference paths matched by at least one output path.
    pub matched_refs: Vec<usize>,
    /// Planner error kind, when the trial failed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl TrialRecord {
    pub fn n_paths(&self) -> usize {
        self.lengths.len()
    }

    pub fn total_ms(&self) -> f64 {
        self.time_prm_ms + self.time_cluster_ms + self.time_dfs_ms + self.time_filter_ms
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub scenario: String,
    pub trials: Vec<TrialRecord>,
    /// Percent of trials matching each reference path.
    pub success_rates: Vec<f64>,
    pub best: usize,
    pub mean_paths: f64,
    pub std_paths: f64,
    pub n_shortest: usize,
    /// Mean length of the `n_shortest` shortest paths over trials that found
    /// at least that many; `None` when no trial did.
    pub mean_n_shortest_length: Option<f64>,
    pub mean_time_ms: f64,
}

impl BenchReport {
    pub fn from_trials(
        scenario: &str,
        trials: Vec<TrialRecord>,
        references: usize,
        n_shortest: usize,
    ) -> Self {
        let n = trials.len().max(1) as f64;
        let success_rates = (0..references)
            .map(|r| {
                100.0
                    * trials
                        .iter()
                        .filter(|t| t.matched_refs.contains(&r))
                        .count() as f64
                    / n
            })
            .collect();
        let counts: Vec<f64> = trials.iter().map(|t| t.n_paths() as f64).collect();
        let mean = counts.iter().sum::<f64>() / n;
        let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / n;
        let quality: Vec<f64> = trials
            .iter()
            .filter(|t| n_shortest > 0 && t.n_paths() >= n_shortest)
            .map(|t| t.lengths[..n_shortest].iter().sum::<f64>() / n_shortest as f64)
            .collect();
        Self {
            scenario: scenario.to_string(),
            best: trials.iter().map(TrialRecord::n_paths).max().unwrap_or(0),
            success_rates,
            mean_paths: mean,
            std_paths: var.sqrt(),
            n_shortest,
            mean_n_shortest_length: (!quality.is_empty())
                .then(|| quality.iter().sum::<f64>() / quality.len() as f64),
            mean_time_ms: trials.iter().map(TrialRecord::total_ms).sum::<f64>() / n,
            trials,
        }
    }

    /// One row per trial under [`CSV_HEADER`]; list fields are
    /// semicolon-joined.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for t in &self.trials {
            let lengths: Vec<String> = t.lengths.iter().map(|l| format!("{l:.6}")).collect();
            let refs: Vec<String> = t.matched_refs.iter().map(usize::to_string).collect();
            writeln!(
                out,
                "{},{},{:.3},{:.3},{:.3},{:.3},{},{},{}",
                t.trial,
                t.seed,
                t.time_prm_ms,
                t.time_cluster_ms,
                t.time_dfs_ms,
                t.time_filter_ms,
                t.n_paths(),
                lengths.join(";"),
                refs.join(";")
            )
            .expect("writing to a string");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Table-style summary: success rates, then best / mean ± std /
    /// n-shortest.
    pub fn summary(&self) -> String {
        let rates: Vec<String> = self
            .success_rates
            .iter()
            .enumerate()
            .map(|(i, r)| format!("pi{} {r:.0}%", i + 1))
            .collect();
        let quality = match self.mean_n_shortest_length {
            Some(q) => format!("{q:.2}"),
            None => "N/A".into(),
        };
        format!(
            "{}: {} trials, {:.1} ms mean; best {}, average {:.2}±{:.2}, {}-shortest {}{}{}",
            self.scenario,
            self.trials.len(),
            self.mean_time_ms,
            self.best,
            self.mean_paths,
            self.std_paths,
            self.n_shortest,
            quality,
            if rates.is_empty() { "" } else { "; " },
            rates.join(", ")
        )
    }
}

/// Ids of the `references` deformable to at least one of `paths`.
pub fn match_references(
    env: &Environment,
    paths: &[Path],
    references: &[Path],
    delta_d: f64,
) -> Result<Vec<usize>> {
    let mut matched = Vec::new();
    for (i, r) in references.iter().enumerate() {
        for p in paths {
            if uvd_deformable(env, p, r, delta_d)? {
                matched.push(i);
                break;
            }
        }
    }
    Ok(matched)
}

/// Runs one planner call with `params` and scores it against `references`.
/// Planner errors become a record with no paths whose roadmap time is the
/// wall time until the failure; query and connectivity errors arise there.
pub fn run_trial(
    env: &Environment,
    scenario: &Scenario,
    params: &PlannerParams,
    trial: usize,
    references: &[Path],
) -> Result<TrialRecord> {
    let ms = |d: std::time::Duration| d.as_secs_f64() * 1e3;
    let started = std::time::Instant::now();
    match plan(env, &scenario.start, &scenario.goal, params) {
        Ok(out) => {
            let scoring_env = env.with_clearance(params.clearance)?;
            let t = out.stats.times;
            Ok(TrialRecord {
                trial,
                seed: params.seed,
                time_prm_ms: ms(t.prm),
                time_cluster_ms: ms(t.cluster),
                time_dfs_ms: ms(t.dfs),
                time_filter_ms: ms(t.filter),
                lengths: out.paths.iter().map(Path::length).collect(),
                matched_refs: match_references(
                    &scoring_env,
                    &out.paths,
                    references,
                    params.delta_d,
                )?,
                error: None,
            })
        }
        Err(e)
            if matches!(
                e,
                crate::Error::Io(_) | crate::Error::Json(_) | crate::Error::InvalidParams(_)
            ) =>
        {
            Err(e)
        }
        Err(e) => Ok(TrialRecord {
            trial,
            seed: params.seed,
            time_prm_ms: ms(started.elapsed()),
            time_cluster_ms: 0.0,
            time_dfs_ms: 0.0,
            time_filter_ms: 0.0,
            lengths: Vec::new(),
            matched_refs: Vec::new(),
            error: Some(e.kind().to_string()),
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchOptions {
    pub trials: usize,
    pub seed_base: u64,
    pub n_shortest: usize,
    /// Zero every timing column so repeated runs give identical bytes.
    pub zero_timings: bool,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            trials: 100,
            seed_base: 0,
            n_shortest: DEFAULT_N_SHORTEST,
            zero_timings: false,
        }
    }
}

/// Trial `i` plans with seed `seed_base + i`.
pub fn run_bench(
    env: &Environment,
    scenario: &Scenario,
    params: &PlannerParams,
    opts: &BenchOptions,
) -> Result<BenchReport> {
    let references = scenario.reference_paths.clone().unwrap_or_default();
    let trials = (0..opts.trials)
        .into_par_iter()
        .map(|i| {
            let p = PlannerParams {
                seed: opts.seed_base.wrapping_add(i as u64),
                ..*params
            };
            let mut rec = run_trial(env, scenario, &p, i, &references)?;
            if opts.zero_timings {
                rec.time_prm_ms = 0.0;
                rec.time_cluster_ms = 0.0;
                rec.time_dfs_ms = 0.0;
                rec.time_filter_ms = 0.0;
            }
            Ok(rec)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BenchReport::from_trials(
        &scenario.name,
        trials,
        references.len(),
        opts.n_shortest,
    ))
}
