//! End-to-end planning: dense roadmap, clustering, sparse-graph search and
//! filtering.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::clustering::{iterate_clustering, SparseGraph};
use crate::env::Environment;
use crate::roadmap::{build_prm, PrmParams, Roadmap};
use crate::topology::{filter_paths, find_distinct_paths, Path};
use crate::{Error, Point, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlannerParams {
    pub num_samples: usize,
    pub k: usize,
    /// Maximum number of clusters.
    #[serde(rename = "M")]
    pub max_clusters: usize,
    /// Search budget as a multiple of the roadmap's shortest path length.
    pub kappa_p: f64,
    /// Pruning threshold as a multiple of the shortest filtered path.
    pub kappa_s: f64,
    pub delta_d: f64,
    pub clearance: f64,
    pub kappa_e: f64,
    pub seed: u64,
    /// Sample in the plane of the start point.
    pub planar: bool,
    /// Add the longest connection as a second sparse edge when it is not
    /// deformable to the shortest one.
    pub include_max_edges: bool,
}

impl Default for PlannerParams {
    fn default() -> Self {
        Self {
            num_samples: 500,
            k: 14,
            max_clusters: 9,
            kappa_p: 1.8,
            kappa_s: 1.5,
            delta_d: 0.1,
            clearance: 0.3,
            kappa_e: 2.0,
            seed: 0,
            planar: false,
            include_max_edges: true,
        }
    }
}

impl PlannerParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if !(self.kappa_p >= 1.0) {
            return bad(format!("kappa_p = {} must be at least 1", self.kappa_p));
        }
        if !(self.kappa_s >= 1.0) {
            return bad(format!("kappa_s = {} must be at least 1", self.kappa_s));
        }
        if !(self.delta_d > 0.0) {
            return bad(format!("delta_d = {} must be positive", self.delta_d));
        }
        if !(self.clearance >= 0.0) {
            return bad(format!(
                "clearance = {} must be non-negative",
                self.clearance
            ));
        }
        if !(self.kappa_e > 1.0) {
            return bad(format!("kappa_e = {} must exceed 1", self.kappa_e));
        }
        if self.max_clusters < 2 {
            return bad(format!("M = {} must be at least 2", self.max_clusters));
        }
        if self.k < 1 {
            return bad("k must be at least 1".into());
        }
        Ok(())
    }
}

/// Wall-clock time per stage.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StageTimes {
    pub prm: Duration,
    pub cluster: Duration,
    pub dfs: Duration,
    pub filter: Duration,
}

impl StageTimes {
    pub fn total(&self) -> Duration {
        self.prm + self.cluster + self.dfs + self.filter
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanStats {
    pub nodes: usize,
    pub edges: usize,
    pub clusters: usize,
    pub sparse_edges: usize,
    /// Shortest start-goal length in the dense roadmap.
    pub shortest_len: f64,
    /// Paths found on the sparse graph before filtering.
    pub candidates: usize,
    #[serde(skip)]
    pub times: StageTimes,
}

#[derive(Debug, Clone)]
pub struct PlanResult {
    pub paths: Vec<Path>,
    pub stats: PlanStats,
    pub roadmap: Roadmap,
    pub graph: SparseGraph,
}

impl PlanResult {
    /// Paths and counts; timings are left out so equal inputs give equal
    /// bytes.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            paths: &'a [Path],
            stats: &'a PlanStats,
        }
        serde_json::to_string_pretty(&Out {
            paths: &self.paths,
            stats: &self.stats,
        })
        .expect("plan serializes")
    }
}

pub fn plan(
    env: &Environment,
    q_start: &Point,
    q_goal: &Point,
    params: &PlannerParams,
) -> Result<PlanResult> {
    params.validate()?;
    if q_start == q_goal {
        return Err(Error::InvalidQuery(
            "query validation: start and goal coincide".into(),
        ));
    }
    let env = env.with_clearance(params.clearance)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let t = Instant::now();
    let prm = PrmParams {
        num_samples: params.num_samples,
        k: params.k,
        delta_d: params.delta_d,
        kappa_e: params.kappa_e,
        planar: params.planar,
    };
    let roadmap = build_prm(&env, q_start, q_goal, &prm, &mut rng)?;
    let shortest_len = roadmap
        .shortest_len
        .expect("connected roadmap has a shortest path");
    let time_prm = t.elapsed();

    let t = Instant::now();
    let clustering = iterate_clustering(
        &roadmap,
        &env,
        params.max_clusters,
        params.delta_d,
        params.include_max_edges,
    )?;
    let time_cluster = t.elapsed();

    let t = Instant::now();
    let (start_vertex, goal_vertex) = (0, 1);
    let candidates = find_distinct_paths(
        &clustering.graph,
        start_vertex,
        goal_vertex,
        params.kappa_p * shortest_len,
    )?;
    let time_dfs = t.elapsed();

    let t = Instant::now();
    let paths = filter_paths(&env, &candidates, params.kappa_s, params.delta_d)?;
    let time_filter = t.elapsed();

    Ok(PlanResult {
        paths,
        stats: PlanStats {
            nodes: roadmap.node_count(),
            edges: roadmap.edge_count(),
            clusters: clustering.forest.cluster_count(),
            sparse_edges: clustering.graph.edges.len(),
            shortest_len,
            candidates: candidates.len(),
            times: StageTimes {
                prm: time_prm,
                cluster: time_cluster,
                dfs: time_dfs,
                filter: time_filter,
            },
        },
        roadmap,
        graph: clustering.graph,
    })
}
