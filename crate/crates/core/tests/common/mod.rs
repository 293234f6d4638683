//! Seeded invariant checks shared by the property tests and the acceptance
//! report. Each `*_case` builds one random instance from `seed` and compares
//! the library against an independent reference.

#![allow(dead_code)]

use ctopprm::clustering::{cluster_graph, SparseEdge, SparseGraph};
use ctopprm::env::{build_esdf, Bounds, Environment, Primitive, VoxelGrid};
use ctopprm::roadmap::Roadmap;
use ctopprm::topology::{enumerate_edge_sequences, filter_paths, uvd_deformable, Path};
use ctopprm::Point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Runs `case` on seeds `0..count` and reports the first failure.
pub fn run_suite(count: u64, case: fn(u64) -> Check) -> Check {
    for seed in 0..count {
        case(seed).map_err(|e| format!("seed {seed}: {e}"))?;
    }
    Ok(())
}

/// Bellman-Ford from one source.
fn bellman_ford(map: &Roadmap, source: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; map.node_count()];
    dist[source] = 0.0;
    for _ in 0..map.node_count() {
        let mut changed = false;
        for u in 0..map.node_count() {
            for &(v, len) in &map.adjacency[u] {
                if dist[u] + len < dist[v] {
                    dist[v] = dist[u] + len;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    dist
}

/// Random planar graph of up to 30 nodes clustered from up to 4 centroids.
/// Checks the forest labelling, that every value is the distance to the
/// nearest centroid, and that each connection's min and max costs are the
/// extremes of an exhaustive scan over the boundary edges.
pub fn forest_case(seed: u64) -> Check {
    let mut r = rng(seed);
    let n = r.gen_range(2..=30);
    let nodes: Vec<Point> = (0..n)
        .map(|_| Point::new(r.gen_range(0.0..10.0), r.gen_range(0.0..10.0), 0.0))
        .collect();
    let p = r.gen_range(0.05..0.4);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    let map = Roadmap::from_edges(nodes, &edges, 0, 1);
    let k = r.gen_range(1..=4.min(n));
    let mut centroids: Vec<usize> = Vec::new();
    while centroids.len() < k {
        let c = r.gen_range(0..n);
        if !centroids.contains(&c) {
            centroids.push(c);
        }
    }
    let (forest, connections) = cluster_graph(&map, &centroids).map_err(|e| e.to_string())?;
    forest.validate(&map)?;

    let dists: Vec<Vec<f64>> = centroids.iter().map(|&c| bellman_ford(&map, c)).collect();
    for v in 0..n {
        let nearest = dists.iter().map(|d| d[v]).fold(f64::INFINITY, f64::min);
        match forest.cluster[v] {
            Some(c)
                if (forest.value[v] - nearest).abs() > 1e-9
                    || (dists[c][v] - nearest).abs() > 1e-9 =>
            {
                return Err(format!(
                    "node {v}: value {} but nearest centroid at {nearest}",
                    forest.value[v]
                ));
            }
            None if nearest.is_finite() => {
                return Err(format!("reachable node {v} left unassigned"))
            }
            _ => {}
        }
    }

    for c in &connections {
        let (a, b) = c.pair;
        let mut costs = Vec::new();
        for u in 0..n {
            for &(v, len) in &map.adjacency[u] {
                if forest.cluster[u] == Some(a) && forest.cluster[v] == Some(b) {
                    costs.push(forest.value[u] + len + forest.value[v]);
                }
            }
        }
        let lo = costs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = costs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if (c.min_cost - lo).abs() > 1e-9 || (c.max_cost - hi).abs() > 1e-9 {
            return Err(format!(
                "pair {:?}: costs {}..{} vs scan {lo}..{hi}",
                c.pair, c.min_cost, c.max_cost
            ));
        }
        if (c.pi_min.length() - c.min_cost).abs() > 1e-9
            || c.pi_min.length() > c.pi_max.length() + 1e-9
        {
            return Err(format!(
                "pair {:?}: path lengths disagree with costs",
                c.pair
            ));
        }
        let (ca, cb) = (map.nodes[centroids[a]], map.nodes[centroids[b]]);
        for path in [&c.pi_min, &c.pi_max] {
            if *path.first() != ca || *path.last() != cb {
                return Err(format!(
                    "pair {:?}: connection does not join the centroids",
                    c.pair
                ));
            }
        }
    }
    Ok(())
}

fn two_sphere_env(r: &mut ChaCha8Rng) -> Environment {
    let b = Bounds::new(Point::new(0.0, 0.0, -1.0), Point::new(10.0, 10.0, 1.0)).unwrap();
    let prims = (0..2)
        .map(|_| {
            let c = Point::new(r.gen_range(3.0..7.0), r.gen_range(2.0..8.0), 0.0);
            Primitive::sphere(c, r.gen_range(0.5..1.5)).unwrap()
        })
        .collect();
    Environment::with_primitives(b, prims, 0.1).unwrap()
}

/// Free polyline from (0.5, 5) to (9.5, 5) through up to three random
/// waypoints, if one turns up within a few draws.
fn random_free_path(env: &Environment, r: &mut ChaCha8Rng) -> Option<Path> {
    let (s, g) = (Point::new(0.5, 5.0, 0.0), Point::new(9.5, 5.0, 0.0));
    for _ in 0..50 {
        let mut pts = vec![s];
        let mids = r.gen_range(1..=3);
        let mut xs: Vec<f64> = (0..mids).map(|_| r.gen_range(1.0..9.0)).collect();
        xs.sort_by(f64::total_cmp);
        pts.extend(
            xs.into_iter()
                .map(|x| Point::new(x, r.gen_range(0.3..9.7), 0.0)),
        );
        pts.push(g);
        if pts.windows(2).all(|w| env.segment_free(&w[0], &w[1], 0.1)) {
            return Path::new(pts).ok();
        }
    }
    None
}

/// Reflexivity and symmetry of the deformation test on a random pair.
pub fn uvd_case(seed: u64) -> Check {
    let mut r = rng(seed);
    let env = two_sphere_env(&mut r);
    let (Some(p), Some(q)) = (
        random_free_path(&env, &mut r),
        random_free_path(&env, &mut r),
    ) else {
        return Ok(());
    };
    let uvd = |a: &Path, b: &Path| uvd_deformable(&env, a, b, 0.1).map_err(|e| e.to_string());
    if !uvd(&p, &p)? || !uvd(&q, &q)? {
        return Err("a path is not deformable to itself".into());
    }
    if uvd(&p, &q)? != uvd(&q, &p)? {
        return Err("deformability is not symmetric".into());
    }
    Ok(())
}

/// Filter postconditions on a random set of 2 to 6 free paths.
pub fn filter_case(seed: u64) -> Check {
    let mut r = rng(seed);
    let env = two_sphere_env(&mut r);
    let set: Vec<Path> = (0..r.gen_range(2..=6))
        .filter_map(|_| random_free_path(&env, &mut r))
        .collect();
    if set.is_empty() {
        return Ok(());
    }
    let kappa = r.gen_range(1.0..2.0);
    let out = filter_paths(&env, &set, kappa, 0.1).map_err(|e| e.to_string())?;
    if out.is_empty() {
        return Err("nonempty input filtered to nothing".into());
    }
    let min = out[0].length();
    if set.iter().any(|p| p.length() < min - 1e-9) {
        return Err("an input is shorter than every output".into());
    }
    for (i, p) in out.iter().enumerate() {
        if p.first() != set[0].first() || p.last() != set[0].last() {
            return Err(format!("output {i} moved an endpoint"));
        }
        if p.length() > kappa * min + 1e-9 {
            return Err(format!("output {i} exceeds the pruning ratio"));
        }
        if i > 0 && p.length() < out[i - 1].length() {
            return Err("outputs are not sorted by length".into());
        }
        if !p
            .waypoints()
            .windows(2)
            .all(|w| env.segment_free(&w[0], &w[1], 0.1))
        {
            return Err(format!("output {i} collides"));
        }
        for q in &out[..i] {
            if uvd_deformable(&env, p, q, 0.1).map_err(|e| e.to_string())? {
                return Err(format!("output {i} is deformable to an earlier output"));
            }
        }
    }
    Ok(())
}

/// O(N^2) scan of every cell of the opposite occupancy.
fn brute_esdf(grid: &VoxelGrid) -> Vec<f64> {
    let [nx, ny, nz] = grid.dims;
    let cells: Vec<(usize, usize, usize)> = (0..nz)
        .flat_map(|k| (0..ny).flat_map(move |j| (0..nx).map(move |i| (i, j, k))))
        .collect();
    cells
        .iter()
        .map(|&(i, j, k)| {
            let occ = grid.occupancy[grid.index(i, j, k)];
            let best = cells
                .iter()
                .filter(|&&(a, b, c)| grid.occupancy[grid.index(a, b, c)] != occ)
                .map(|&(a, b, c)| (grid.cell_center(i, j, k) - grid.cell_center(a, b, c)).norm())
                .fold(f64::INFINITY, f64::min);
            let mag = if best.is_finite() { best } else { grid.cap() };
            if occ {
                -mag
            } else {
                mag
            }
        })
        .collect()
}

/// ESDF of a random grid of at most 16 cells per side against brute force.
pub fn esdf_case(seed: u64) -> Check {
    let mut r = rng(seed);
    // keep most grids small so the quadratic reference stays quick
    let side = if seed % 10 == 0 { 16 } else { 8 };
    let dims = [
        r.gen_range(1..=side),
        r.gen_range(1..=side),
        r.gen_range(1..=side),
    ];
    let density = r.gen_range(0.0..0.5);
    let occ = (0..dims[0] * dims[1] * dims[2])
        .map(|_| r.gen_bool(density))
        .collect();
    let grid = build_esdf(
        dims,
        occ,
        r.gen_range(0.05..1.0),
        Point::new(-1.0, 0.5, 2.0),
    )
    .map_err(|e| e.to_string())?;
    for (i, (a, b)) in grid.esdf.iter().zip(brute_esdf(&grid)).enumerate() {
        if (a - b).abs() > 1e-9 {
            return Err(format!("cell {i} of {dims:?}: {a} vs {b}"));
        }
    }
    Ok(())
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

/// Every ordering of every subset of intermediate vertices, expanded into
/// every choice among parallel edges, kept when within the budget.
fn brute_sequences(g: &SparseGraph, start: usize, goal: usize, budget: f64) -> Vec<Vec<usize>> {
    let others: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| v != start && v != goal)
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << others.len()) {
        let chosen: Vec<usize> = others
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &v)| v)
            .collect();
        for perm in permutations(&chosen) {
            let mut verts = vec![start];
            verts.extend(perm);
            verts.push(goal);
            let mut seqs: Vec<(Vec<usize>, f64)> = vec![(vec![], 0.0)];
            for w in verts.windows(2) {
                let mut next = Vec::new();
                for (seq, len) in &seqs {
                    for (id, e) in g.edges.iter().enumerate() {
                        if (e.a, e.b) == (w[0], w[1]) || (e.a, e.b) == (w[1], w[0]) {
                            let mut s = seq.clone();
                            s.push(id);
                            next.push((s, len + e.length));
                        }
                    }
                }
                seqs = next;
            }
            out.extend(
                seqs.into_iter()
                    .filter(|(_, l)| *l <= budget)
                    .map(|(s, _)| s),
            );
        }
    }
    out.sort();
    out
}

/// Search on a random multigraph of at most 8 vertices against exhaustive
/// enumeration.
pub fn dfs_case(seed: u64) -> Check {
    let mut r = rng(seed);
    let n = r.gen_range(2..=8);
    let positions: Vec<Point> = (0..n)
        .map(|i| Point::new(i as f64, r.gen_range(0.0..3.0), 0.0))
        .collect();
    let edges: Vec<SparseEdge> = (0..r.gen_range(1..=16))
        .filter_map(|_| {
            let (a, b) = (r.gen_range(0..n), r.gen_range(0..n));
            (a != b).then(|| SparseEdge {
                a,
                b,
                geometry: Path::new(vec![positions[a], positions[b]]).unwrap(),
                length: r.gen_range(0.5..3.0),
            })
        })
        .collect();
    let g = SparseGraph {
        vertices: (0..n).collect(),
        positions,
        edges,
    };
    let budget = r.gen_range(1.0..12.0);
    let mut got = enumerate_edge_sequences(&g, 0, 1, budget).map_err(|e| e.to_string())?;
    got.sort();
    let want = brute_sequences(&g, 0, 1, budget);
    if got != want {
        return Err(format!(
            "{} sequences, exhaustive enumeration gives {}",
            got.len(),
            want.len()
        ));
    }
    Ok(())
}
