//! Brute-force ground truth for the number of distinct path classes on small
//! scenes: every simple path of a regular lattice roadmap within a length
//! budget, partitioned by uniform visibility deformation.

use crate::env::Environment;
use crate::roadmap::{dijkstra_shortest, Roadmap};
use crate::topology::{shorten_path, uvd_deformable, Path};
use crate::{Error, Point, Result};

pub const MAX_LATTICE_NODES: usize = 2000;
pub const DEFAULT_PITCH: f64 = 1.0;
/// Lattice length budget as a multiple of the lattice shortest path.
pub const DEFAULT_BUDGET_RATIO: f64 = 1.3;
pub const MAX_ENUMERATED_PATHS: usize = 2_000_000;

#[derive(Debug, Clone)]
pub struct OracleResult {
    /// Shortened representative per class, ascending by length.
    pub class_representatives: Vec<Path>,
    pub class_count: usize,
    pub lattice_nodes: usize,
    pub enumerated_paths: usize,
}

impl OracleResult {
    /// Representatives no longer than `ratio` times the shortest one, the
    /// classes a planner pruning at that ratio should report.
    pub fn classes_within(&self, ratio: f64) -> &[Path] {
        let Some(min) = self.class_representatives.first().map(Path::length) else {
            return &[];
        };
        let n = self
            .class_representatives
            .iter()
            .take_while(|p| p.length() <= ratio * min)
            .count();
        &self.class_representatives[..n]
    }
}

/// Free lattice points at `pitch`, 8-connected in the plane of the start
/// when `planar`, otherwise 26-connected. Start and goal are nodes 0 and 1,
/// linked to every visible lattice point within one diagonal step.
///
/// Lattice points and the edges between them keep the
/// [`Environment::chord_margin`] beyond the clearance, as shortcuts do, so a
/// lattice path grazing an obstacle can still be shortened.
pub fn lattice_roadmap(
    env: &Environment,
    q_start: &Point,
    q_goal: &Point,
    pitch: f64,
    planar: bool,
    delta_d: f64,
) -> Result<Roadmap> {
    if !(pitch > 0.0) {
        return Err(Error::InvalidParams(format!(
            "grid pitch {pitch} must be positive"
        )));
    }
    for q in [q_start, q_goal] {
        if !env.is_free(q) {
            return Err(Error::InvalidQuery(format!(
                "query validation: {q:?} is not free"
            )));
        }
    }
    let b = env.bounds();
    let count = |axis: usize| (b.size()[axis] / pitch).floor() as usize + 1;
    let (nx, ny) = (count(0), count(1));
    let nz = if planar { 1 } else { count(2) };
    if nx * ny * nz > 50 * MAX_LATTICE_NODES {
        return Err(Error::TooLarge(format!(
            "lattice of {} points at pitch {pitch}",
            nx * ny * nz
        )));
    }
    let coord = |i: usize, j: usize, k: usize| {
        let z = if planar {
            q_start.z
        } else {
            b.min_corner.z + k as f64 * pitch
        };
        Point::new(
            b.min_corner.x + i as f64 * pitch,
            b.min_corner.y + j as f64 * pitch,
            z,
        )
    };

    let margin = env.chord_margin(delta_d);
    let mut nodes = vec![*q_start, *q_goal];
    let mut id = vec![None; nx * ny * nz];
    let flat = |i: usize, j: usize, k: usize| (k * ny + j) * nx + i;
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let p = coord(i, j, k);
                if env.segment_free_with_margin(&p, &p, delta_d, margin) {
                    id[flat(i, j, k)] = Some(nodes.len());
                    nodes.push(p);
                }
            }
        }
    }
    if nodes.len() > MAX_LATTICE_NODES {
        return Err(Error::TooLarge(format!(
            "{} lattice nodes exceed the cap of {MAX_LATTICE_NODES}",
            nodes.len()
        )));
    }

    let dz: &[i64] = if planar { &[0] } else { &[-1, 0, 1] };
    let mut edges = Vec::new();
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let Some(u) = id[flat(i, j, k)] else { continue };
                for &dk in dz {
                    for dj in -1i64..=1 {
                        for di in -1i64..=1 {
                            let (ti, tj, tk) = (i as i64 + di, j as i64 + dj, k as i64 + dk);
                            if (di, dj, dk) <= (0, 0, 0)
                                || ti < 0
                                || tj < 0
                                || tk < 0
                                || ti >= nx as i64
                                || tj >= ny as i64
                                || tk >= nz as i64
                            {
                                continue;
                            }
                            let Some(v) = id[flat(ti as usize, tj as usize, tk as usize)] else {
                                continue;
                            };
                            if env.segment_free_with_margin(&nodes[u], &nodes[v], delta_d, margin) {
                                edges.push((u, v));
                            }
                        }
                    }
                }
            }
        }
    }
    let reach = pitch * if planar { 2f64.sqrt() } else { 3f64.sqrt() } + 1e-9;
    for (end, q) in [(0usize, q_start), (1, q_goal)] {
        for (v, p) in nodes.iter().enumerate().skip(2) {
            if (p - q).norm() <= reach && env.segment_free(q, p, delta_d) {
                edges.push((end, v));
            }
        }
    }
    let map = Roadmap::from_edges(nodes, &edges, 0, 1);
    if map.shortest_len.is_none() {
        return Err(Error::StartGoalDisconnected {
            nodes: map.node_count(),
            edges: map.edge_count(),
        });
    }
    Ok(map)
}

/// Node sequences of every simple start-goal path no longer than `budget`.
/// The exact remaining distance to the goal prunes branches that cannot
/// finish within the budget.
pub fn enumerate_simple_paths(map: &Roadmap, budget: f64, cap: usize) -> Result<Vec<Vec<usize>>> {
    let to_goal = dijkstra_shortest(&map.adjacency, map.goal).dist;
    let mut visited = vec![false; map.node_count()];
    let mut stack = vec![map.start];
    let mut out = Vec::new();
    visited[map.start] = true;
    let mut search = Search {
        map,
        to_goal: &to_goal,
        budget,
        cap,
        visited: &mut visited,
        stack: &mut stack,
        out: &mut out,
    };
    search.run(map.start, 0.0)?;
    Ok(out)
}

struct Search<'a> {
    map: &'a Roadmap,
    to_goal: &'a [f64],
    budget: f64,
    cap: usize,
    visited: &'a mut [bool],
    stack: &'a mut Vec<usize>,
    out: &'a mut Vec<Vec<usize>>,
}

impl Search<'_> {
    fn run(&mut self, v: usize, length: f64) -> Result<()> {
        if v == self.map.goal {
            if self.out.len() == self.cap {
                return Err(Error::TooLarge(format!(
                    "more than {} paths within the budget",
                    self.cap
                )));
            }
            self.out.push(self.stack.clone());
            return Ok(());
        }
        for &(w, len) in &self.map.adjacency[v] {
            let next = length + len;
            if self.visited[w] || next + self.to_goal[w] > self.budget {
                continue;
            }
            self.visited[w] = true;
            self.stack.push(w);
            self.run(w, next)?;
            self.stack.pop();
            self.visited[w] = false;
        }
        Ok(())
    }
}

/// Classes of the lattice paths within `budget_ratio` times the lattice
/// shortest length.
///
/// Paths are visited shortest first. A path deformable to a class member
/// already seen joins that class; otherwise it is shortened and starts a new
/// class unless the shortened path is deformable to an existing
/// representative. Representatives are the shortened paths.
pub fn enumerate_classes(
    env: &Environment,
    q_start: &Point,
    q_goal: &Point,
    grid_pitch: f64,
    budget_ratio: f64,
    delta_d: f64,
    planar: bool,
) -> Result<OracleResult> {
    if !(budget_ratio >= 1.0) {
        return Err(Error::InvalidParams(format!(
            "budget ratio {budget_ratio} must be at least 1"
        )));
    }
    let map = lattice_roadmap(env, q_start, q_goal, grid_pitch, planar, delta_d)?;
    let shortest = map.shortest_len.expect("connected lattice");
    let sequences = enumerate_simple_paths(
        &map,
        budget_ratio * shortest * (1.0 + 1e-12),
        MAX_ENUMERATED_PATHS,
    )?;
    let enumerated = sequences.len();
    let mut paths: Vec<Path> = sequences
        .into_iter()
        .map(|seq| Path::new(seq.into_iter().map(|i| map.nodes[i]).collect()))
        .collect::<Result<_>>()?;
    paths.sort_by(|a, b| a.length().total_cmp(&b.length()));

    // (raw members seen, shortened representative) per class
    let mut classes: Vec<(Vec<Path>, Path)> = Vec::new();
    for p in paths {
        let mut known = false;
        for (members, rep) in classes.iter_mut() {
            if uvd_deformable(env, &p, rep, delta_d)? {
                known = true;
                break;
            }
            let mut hit = false;
            for m in members.iter() {
                if uvd_deformable(env, &p, m, delta_d)? {
                    hit = true;
                    break;
                }
            }
            if hit {
                known = true;
                break;
            }
        }
        if known {
            continue;
        }
        let short = shorten_path(env, &p, delta_d);
        let mut owner = None;
        for (i, (_, rep)) in classes.iter().enumerate() {
            if uvd_deformable(env, &short, rep, delta_d)? {
                owner = Some(i);
                break;
            }
        }
        match owner {
            Some(i) => classes[i].0.push(p),
            None => classes.push((vec![p], short)),
        }
    }
    let mut reps: Vec<Path> = classes.into_iter().map(|(_, r)| r).collect();
    reps.sort_by(|a, b| a.length().total_cmp(&b.length()));
    Ok(OracleResult {
        class_count: reps.len(),
        class_representatives: reps,
        lattice_nodes: map.node_count(),
        enumerated_paths: enumerated,
    })
}
