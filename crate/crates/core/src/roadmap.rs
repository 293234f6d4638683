//! Dense informed roadmap over the free space.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use rand::Rng;
use serde::Serialize;

use crate::env::Environment;
use crate::kdtree::KdTree;
use crate::{Error, Point, Result, Vector};

/// Consecutive rejections tolerated before sampling gives up.
pub const MAX_REJECTIONS: usize = 1000;

/// Undirected roadmap; node 0 is the start and node 1 the goal when built by
/// [`build_prm`].
#[derive(Debug, Clone, PartialEq)]
pub struct Roadmap {
    pub nodes: Vec<Point>,
    /// Per node `(neighbour, edge length)`, sorted by neighbour id.
    pub adjacency: Vec<Vec<(usize, f64)>>,
    pub start: usize,
    pub goal: usize,
    pub shortest_len: Option<f64>,
}

#[derive(Serialize)]
struct RoadmapDump {
    nodes: Vec<[f64; 3]>,
    edges: Vec<[usize; 2]>,
    start: usize,
    goal: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    shortest_len: Option<f64>,
}

impl Roadmap {
    /// Builds a roadmap from explicit undirected edges; lengths are the
    /// Euclidean distances between the endpoints.
    pub fn from_edges(
        nodes: Vec<Point>,
        edges: &[(usize, usize)],
        start: usize,
        goal: usize,
    ) -> Self {
        let mut adjacency = vec![Vec::new(); nodes.len()];
        let mut seen = HashSet::new();
        for &(u, v) in edges {
            if u == v || !seen.insert((u.min(v), u.max(v))) {
                continue;
            }
            let len = (nodes[u] - nodes[v]).norm();
            adjacency[u].push((v, len));
            adjacency[v].push((u, len));
        }
        for list in adjacency.iter_mut() {
            list.sort_by_key(|&(n, _)| n);
        }
        let mut map = Self {
            nodes,
            adjacency,
            start,
            goal,
            shortest_len: None,
        };
        let d = dijkstra_shortest(&map.adjacency, start).dist[goal];
        map.shortest_len = d.is_finite().then_some(d);
        map
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .filter(move |(v, _)| u < *v)
                .map(move |&(v, l)| (u, v, l))
        })
    }

    /// Checks the structural invariants: free nodes, mirrored edges with
    /// Euclidean lengths, collision-free edges and no self or duplicate edges.
    pub fn validate(&self, env: &Environment, delta_d: f64) -> std::result::Result<(), String> {
        if self.adjacency.len() != self.nodes.len() {
            return Err("adjacency and node lists differ in length".into());
        }
        for (u, q) in self.nodes.iter().enumerate() {
            if !env.is_free(q) {
                return Err(format!("node {u} is not free"));
            }
        }
        for (u, list) in self.adjacency.iter().enumerate() {
            let mut prev = None;
            for &(v, len) in list {
                if v == u {
                    return Err(format!("self edge at {u}"));
                }
                if prev.is_some_and(|p| p >= v) {
                    return Err(format!("adjacency of {u} unsorted or duplicated"));
                }
                prev = Some(v);
                let expect = (self.nodes[u] - self.nodes[v]).norm();
                if (len - expect).abs() > 1e-9 {
                    return Err(format!("edge ({u},{v}) length {len} != {expect}"));
                }
                if !self.adjacency[v].iter().any(|&(w, l)| w == u && l == len) {
                    return Err(format!("edge ({u},{v}) has no mirror"));
                }
                if u < v && !env.segment_free(&self.nodes[u], &self.nodes[v], delta_d) {
                    return Err(format!("edge ({u},{v}) collides"));
                }
            }
        }
        Ok(())
    }

    /// Debug dump: `{"nodes": [[x,y,z],...], "edges": [[u,v],...], ...}`.
    pub fn to_json(&self) -> String {
        let dump = RoadmapDump {
            nodes: self.nodes.iter().map(|p| [p.x, p.y, p.z]).collect(),
            edges: self.edges().map(|(u, v, _)| [u, v]).collect(),
            start: self.start,
            goal: self.goal,
            shortest_len: self.shortest_len,
        };
        serde_json::to_string(&dump).expect("roadmap dump serializes")
    }
}

/// Parameters of the dense roadmap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrmParams {
    pub num_samples: usize,
    pub k: usize,
    pub delta_d: f64,
    /// Ratio of the spheroid's major axis to the start-goal distance.
    pub kappa_e: f64,
    /// Lock samples to the plane `z = q_start.z`.
    pub planar: bool,
}

/// Prolate spheroid with foci at start and goal (an ellipse when planar).
#[derive(Debug, Clone, Copy)]
pub struct InformedSet {
    center: Point,
    axes: [Vector; 3],
    radii: [f64; 3],
    planar: bool,
}

impl InformedSet {
    pub fn new(q_start: &Point, q_goal: &Point, kappa_e: f64, planar: bool) -> Result<Self> {
        let diff = q_goal - q_start;
        let dist = diff.norm();
        if !(dist > 0.0) {
            return Err(Error::InvalidQuery(
                "query validation: start and goal coincide".into(),
            ));
        }
        if !(kappa_e > 1.0) {
            return Err(Error::InvalidParams(format!(
                "kappa_e = {kappa_e} must exceed 1"
            )));
        }
        if planar && q_start.z != q_goal.z {
            return Err(Error::InvalidQuery(
                "query validation: planar query needs start.z == goal.z".into(),
            ));
        }
        let e1 = diff / dist;
        let e2 = if planar {
            Vector::z().cross(&e1).normalize()
        } else {
            // any unit vector orthogonal to e1
            let helper = if e1.x.abs() < 0.9 {
                Vector::x()
            } else {
                Vector::y()
            };
            e1.cross(&helper).normalize()
        };
        let e3 = e1.cross(&e2);
        let a = 0.5 * kappa_e * dist;
        let c = 0.5 * dist;
        let b = (a * a - c * c).sqrt();
        Ok(Self {
            center: nalgebra::center(q_start, q_goal),
            axes: [e1, e2, e3],
            radii: [a, b, b],
            planar,
        })
    }

    pub fn contains(&self, q: &Point) -> bool {
        let d = q - self.center;
        if self.planar && d.z.abs() > 1e-9 {
            return false;
        }
        let s: f64 = (0..3)
            .map(|i| (d.dot(&self.axes[i]) / self.radii[i]).powi(2))
            .sum();
        s <= 1.0 + 1e-9
    }

    /// Uniform draw from the spheroid interior.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let dims = if self.planar { 2 } else { 3 };
        let u = loop {
            let mut u = [0.0; 3];
            for x in u.iter_mut().take(dims) {
                *x = rng.gen_range(-1.0..1.0);
            }
            if u.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
                break u;
            }
        };
        let mut p = self.center;
        for i in 0..dims {
            p += self.axes[i] * (u[i] * self.radii[i]);
        }
        if self.planar {
            p.z = self.center.z;
        }
        p
    }
}

/// Draws `count` free configurations uniformly from the informed set
/// intersected with the bounds.
pub fn sample_informed<R: Rng + ?Sized>(
    env: &Environment,
    q_start: &Point,
    q_goal: &Point,
    count: usize,
    kappa_e: f64,
    planar: bool,
    rng: &mut R,
) -> Result<Vec<Point>> {
    let set = InformedSet::new(q_start, q_goal, kappa_e, planar)?;
    let mut out = Vec::with_capacity(count);
    let mut rejections = 0;
    while out.len() < count {
        let q = set.draw(rng);
        if env.is_free(&q) {
            out.push(q);
            rejections = 0;
        } else {
            rejections += 1;
            if rejections >= MAX_REJECTIONS {
                return Err(Error::SamplingExhausted {
                    accepted: out.len(),
                    requested: count,
                    rejections,
                });
            }
        }
    }
    Ok(out)
}

/// Informed PRM: start, goal and the samples, each connected to its `k`
/// nearest neighbours by collision-free straight segments.
///
/// Edges between samples keep the [`Environment::chord_margin`] at their
/// check points, so they are free along their whole length and any point
/// picked on a roadmap path is free. Edges at the start and goal only need
/// the clearance, since the queries may sit closer than the margin.
pub fn build_prm<R: Rng + ?Sized>(
    env: &Environment,
    q_start: &Point,
    q_goal: &Point,
    params: &PrmParams,
    rng: &mut R,
) -> Result<Roadmap> {
    if !env.is_free(q_start) {
        return Err(Error::InvalidQuery(format!(
            "query validation: start {q_start:?} is not free"
        )));
    }
    if !env.is_free(q_goal) {
        return Err(Error::InvalidQuery(format!(
            "query validation: goal {q_goal:?} is not free"
        )));
    }
    let samples = sample_informed(
        env,
        q_start,
        q_goal,
        params.num_samples,
        params.kappa_e,
        params.planar,
        rng,
    )?;
    let mut nodes = Vec::with_capacity(samples.len() + 2);
    nodes.push(*q_start);
    nodes.push(*q_goal);
    nodes.extend(samples);

    let tree = KdTree::build(&nodes);
    let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nodes.len()];
    let margin = env.chord_margin(params.delta_d);
    let mut tried = HashSet::new();
    for (u, q) in nodes.iter().enumerate() {
        for (v, len) in tree.nearest(q, params.k, Some(u)) {
            if len == 0.0 || !tried.insert((u.min(v), u.max(v))) {
                continue;
            }
            let m = if u < 2 || v < 2 { 0.0 } else { margin };
            if env.segment_free_with_margin(q, &nodes[v], params.delta_d, m) {
                adjacency[u].push((v, len));
                adjacency[v].push((u, len));
            }
        }
    }
    for list in adjacency.iter_mut() {
        list.sort_by_key(|&(n, _)| n);
    }
    let mut map = Roadmap {
        nodes,
        adjacency,
        start: 0,
        goal: 1,
        shortest_len: None,
    };
    let d = dijkstra_shortest(&map.adjacency, map.start).dist[map.goal];
    if !d.is_finite() {
        return Err(Error::StartGoalDisconnected {
            nodes: map.node_count(),
            edges: map.edge_count(),
        });
    }
    map.shortest_len = Some(d);
    Ok(map)
}

/// Min-heap entry; ties pop the lower node id first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct HeapEntry {
    pub cost: f64,
    pub node: usize,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then(other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShortestPaths {
    pub dist: Vec<f64>,
    pub parent: Vec<Option<usize>>,
}

impl ShortestPaths {
    /// Node sequence from the source to `target`, if reachable.
    pub fn path_to(&self, target: usize) -> Option<Vec<usize>> {
        if !self.dist[target].is_finite() {
            return None;
        }
        let mut seq = vec![target];
        let mut cur = target;
        while let Some(p) = self.parent[cur] {
            seq.push(p);
            cur = p;
        }
        seq.reverse();
        Some(seq)
    }
}

/// Single-source Dijkstra with a binary heap and lazy deletion.
pub fn dijkstra_shortest(adjacency: &[Vec<(usize, f64)>], source: usize) -> ShortestPaths {
    let n = adjacency.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut parent = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(HeapEntry {
        cost: 0.0,
        node: source,
    });
    while let Some(HeapEntry { cost, node }) = heap.pop() {
        if done[node] || cost > dist[node] {
            continue;
        }
        done[node] = true;
        for &(next, len) in &adjacency[node] {
            let cand = cost + len;
            if cand < dist[next] {
                dist[next] = cand;
                parent[next] = Some(node);
                heap.push(HeapEntry {
                    cost: cand,
                    node: next,
                });
            }
        }
    }
    ShortestPaths { dist, parent }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{Bounds, Primitive, Wall};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bounds() -> Bounds {
        Bounds::new(Point::new(0.0, 0.0, 0.0), Point::new(10.0, 10.0, 4.0)).unwrap()
    }

    fn params(num_samples: usize, k: usize) -> PrmParams {
        PrmParams {
            num_samples,
            k,
            delta_d: 0.1,
            kappa_e: 2.0,
            planar: false,
        }
    }

    fn bellman_ford(adjacency: &[Vec<(usize, f64)>], source: usize) -> Vec<f64> {
        let n = adjacency.len();
        let mut dist = vec![f64::INFINITY; n];
        dist[source] = 0.0;
        for _ in 0..n {
            for u in 0..n {
                for &(v, w) in &adjacency[u] {
                    if dist[u] + w < dist[v] {
                        dist[v] = dist[u] + w;
                    }
                }
            }
        }
        dist
    }

    #[test]
    fn dijkstra_on_a_path_graph() {
        let adj = vec![vec![(1, 1.0)], vec![(0, 1.0), (2, 1.0)], vec![(1, 1.0)]];
        let sp = dijkstra_shortest(&adj, 0);
        assert_eq!(sp.dist, vec![0.0, 1.0, 2.0]);
        assert_eq!(sp.path_to(2), Some(vec![0, 1, 2]));

        let single = dijkstra_shortest(&[vec![]], 0);
        assert_eq!(single.dist, vec![0.0]);
        assert_eq!(single.parent, vec![None]);
    }

    #[test]
    fn dijkstra_matches_bellman_ford() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let n = 30;
            let mut adj = vec![Vec::new(); n];
            for _ in 0..60 {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                if u != v {
                    let w = rng.gen_range(0.1..5.0);
                    adj[u].push((v, w));
                    adj[v].push((u, w));
                }
            }
            let src = rng.gen_range(0..n);
            let sp = dijkstra_shortest(&adj, src);
            let bf = bellman_ford(&adj, src);
            for (a, b) in sp.dist.iter().zip(&bf) {
                assert!((a == b) || (a - b).abs() < 1e-9);
            }
            for u in 0..n {
                for &(v, w) in &adj[u] {
                    assert!(sp.dist[v] <= sp.dist[u] + w + 1e-12);
                }
            }
        }
    }

    #[test]
    fn empty_world_minimal_roadmap() {
        let env = Environment::empty(bounds(), 0.3).unwrap();
        let s = Point::new(1.0, 1.0, 1.0);
        let g = Point::new(9.0, 8.0, 3.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let map = build_prm(&env, &s, &g, &params(0, 1), &mut rng).unwrap();
        assert_eq!(map.node_count(), 2);
        assert_eq!(map.edge_count(), 1);
        assert!((map.shortest_len.unwrap() - (g - s).norm()).abs() < 1e-12);
    }

    #[test]
    fn separating_wall_disconnects() {
        let wall = Wall::new(0, 5.0, 0.5, [0.0, 0.0], [10.0, 4.0], vec![]).unwrap();
        let env =
            Environment::with_primitives(bounds(), vec![Primitive::WallWithWindows(wall)], 0.3)
                .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let err = build_prm(
            &env,
            &Point::new(1.0, 5.0, 2.0),
            &Point::new(9.0, 5.0, 2.0),
            &params(200, 14),
            &mut rng,
        )
        .unwrap_err();
        assert!(matches!(err, Error::StartGoalDisconnected { .. }), "{err}");
    }

    #[test]
    fn empty_world_length_close_to_straight_line() {
        // planar workspace, averaged over seeds
        let env = Environment::empty(bounds(), 0.3).unwrap();
        let s = Point::new(1.0, 2.0, 2.0);
        let g = Point::new(9.0, 7.0, 2.0);
        let straight = (g - s).norm();
        let mut total = 0.0;
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = PrmParams {
                planar: true,
                ..params(50, 14)
            };
            let map = build_prm(&env, &s, &g, &p, &mut rng).unwrap();
            let l = map.shortest_len.unwrap();
            assert!(l >= straight - 1e-12);
            total += l / straight;
            map.validate(&env, 0.1).unwrap();
        }
        let mean = total / 20.0;
        assert!(mean <= 1.05, "mean ratio {mean}");
    }

    #[test]
    fn samples_respect_informed_set_and_obstacles() {
        let sphere = Primitive::sphere(Point::new(5.0, 5.0, 2.0), 1.5).unwrap();
        let env = Environment::with_primitives(bounds(), vec![sphere], 0.3).unwrap();
        let s = Point::new(2.0, 5.0, 2.0);
        let g = Point::new(8.0, 5.0, 2.0);
        let set = InformedSet::new(&s, &g, 2.0, false).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pts = sample_informed(&env, &s, &g, 10_000, 2.0, false, &mut rng).unwrap();
        assert_eq!(pts.len(), 10_000);
        assert!(pts
            .iter()
            .all(|p| env.is_free(p) && set.contains(p) && env.sdf(p) > 0.0));
        assert!(sample_informed(&env, &s, &g, 0, 2.0, false, &mut rng)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn planar_samples_stay_in_plane() {
        let env = Environment::empty(bounds(), 0.3).unwrap();
        let s = Point::new(1.0, 1.0, 2.0);
        let g = Point::new(9.0, 6.0, 2.0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pts = sample_informed(&env, &s, &g, 500, 2.0, true, &mut rng).unwrap();
        assert!(pts.iter().all(|p| p.z == 2.0));
        let set = InformedSet::new(&s, &g, 2.0, true).unwrap();
        assert!(pts.iter().all(|p| set.contains(p)));
    }

    #[test]
    fn sampling_gives_up_when_free_space_is_tiny() {
        let blocker =
            Primitive::aabb(Point::new(-1.0, -1.0, -1.0), Point::new(11.0, 11.0, 5.0)).unwrap();
        let env = Environment::with_primitives(bounds(), vec![blocker], 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let err = sample_informed(
            &env,
            &Point::new(1.0, 1.0, 1.0),
            &Point::new(2.0, 2.0, 2.0),
            3,
            2.0,
            false,
            &mut rng,
        )
        .unwrap_err();
        assert!(matches!(err, Error::SamplingExhausted { accepted: 0, .. }));
    }

    #[test]
    fn construction_is_deterministic() {
        let sphere = Primitive::sphere(Point::new(5.0, 5.0, 2.0), 1.5).unwrap();
        let env = Environment::with_primitives(bounds(), vec![sphere], 0.3).unwrap();
        let s = Point::new(1.0, 5.0, 2.0);
        let g = Point::new(9.0, 5.0, 2.0);
        let a = build_prm(
            &env,
            &s,
            &g,
            &params(300, 14),
            &mut ChaCha8Rng::seed_from_u64(4),
        )
        .unwrap();
        let b = build_prm(
            &env,
            &s,
            &g,
            &params(300, 14),
            &mut ChaCha8Rng::seed_from_u64(4),
        )
        .unwrap();
        assert_eq!(a, b);
        a.validate(&env, 0.1).unwrap();
        assert!(a.shortest_len.unwrap() >= (g - s).norm());
        let json: serde_json::Value = serde_json::from_str(&a.to_json()).unwrap();
        assert_eq!(json["nodes"].as_array().unwrap().len(), a.node_count());
        assert_eq!(json["edges"].as_array().unwrap().len(), a.edge_count());
    }
}
