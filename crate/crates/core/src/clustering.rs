//! Shortest-path-forest clustering of the dense roadmap, centroid insertion
//! where neighbouring clusters are joined by non-deformable connections, and
//! assembly of the sparse centroid graph.

use std::collections::{BTreeMap, BinaryHeap};

use serde::Serialize;

use crate::env::Environment;
use crate::roadmap::{HeapEntry, Roadmap};
use crate::topology::{uvd_deformable, Path};
use crate::{Error, Point, Result};

/// Per-node labelling of the roadmap by its nearest centroid.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterForest {
    /// Cost from the node to its own centroid.
    pub value: Vec<f64>,
    /// Cluster id (index into `centroids`), `None` when unreachable.
    pub cluster: Vec<Option<usize>>,
    pub parent: Vec<Option<usize>>,
    pub centroids: Vec<usize>,
}

impl ClusterForest {
    pub fn cluster_count(&self) -> usize {
        self.centroids.len()
    }

    /// Node sequence from `node` up to the root of its tree.
    pub fn chain(&self, node: usize) -> Vec<usize> {
        let mut seq = vec![node];
        let mut cur = node;
        while let Some(p) = self.parent[cur] {
            seq.push(p);
            cur = p;
        }
        seq
    }

    /// Forest edges `(parent, child)`.
    pub fn forest_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(n, p)| p.map(|p| (p, n)))
    }

    /// Checks the forest invariants against the roadmap it labels.
    pub fn validate(&self, roadmap: &Roadmap) -> std::result::Result<(), String> {
        let n = roadmap.node_count();
        if self.value.len() != n || self.cluster.len() != n || self.parent.len() != n {
            return Err("label vectors do not match the roadmap".into());
        }
        for (id, &c) in self.centroids.iter().enumerate() {
            if self.value[c] != 0.0 || self.cluster[c] != Some(id) || self.parent[c].is_some() {
                return Err(format!("centroid {c} is not a root of cluster {id}"));
            }
        }
        for v in 0..n {
            match (self.cluster[v], self.parent[v]) {
                (None, None) => {
                    if self.value[v].is_finite() {
                        return Err(format!("unassigned node {v} has a finite value"));
                    }
                }
                (None, Some(_)) => return Err(format!("unassigned node {v} has a parent")),
                (Some(c), parent) => {
                    if let Some(p) = parent {
                        let cost = roadmap.adjacency[p]
                            .iter()
                            .find(|&&(w, _)| w == v)
                            .map(|&(_, l)| l)
                            .ok_or_else(|| {
                                format!("parent link ({p},{v}) is not a roadmap edge")
                            })?;
                        if (self.value[p] + cost - self.value[v]).abs() > 1e-9 {
                            return Err(format!("value of {v} breaks the parent recursion"));
                        }
                        if self.cluster[p] != Some(c) {
                            return Err(format!("node {v} and its parent disagree on the cluster"));
                        }
                    } else if self.centroids.get(c) != Some(&v) {
                        return Err(format!("non-centroid node {v} has no parent"));
                    }
                    // bounded walk detects cycles
                    let mut cur = v;
                    let mut steps = 0;
                    while let Some(p) = self.parent[cur] {
                        cur = p;
                        steps += 1;
                        if steps > n {
                            return Err(format!("parent cycle through {v}"));
                        }
                    }
                    if cur != self.centroids[c] {
                        return Err(format!("chain of {v} ends at {cur}, not at its centroid"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Shortest and longest recorded centroid-to-centroid paths through the
/// boundary between clusters `pair.0 < pair.1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterConnection {
    pub pair: (usize, usize),
    /// Boundary edges `(node in pair.0, node in pair.1)`.
    pub min_bridge: (usize, usize),
    pub max_bridge: (usize, usize),
    pub min_cost: f64,
    pub max_cost: f64,
    pub min_nodes: Vec<usize>,
    pub max_nodes: Vec<usize>,
    pub pi_min: Path,
    pub pi_max: Path,
}

impl ClusterConnection {
    pub fn ratio(&self) -> f64 {
        self.pi_max.length() / self.pi_min.length()
    }
}

#[derive(Debug, Clone, Copy)]
struct BridgeRecord {
    min_bridge: (usize, usize),
    max_bridge: (usize, usize),
    min_cost: f64,
    max_cost: f64,
}

/// Multi-source Dijkstra from all centroids.
///
/// A node joins the cluster offering the strictly cheapest path (ties keep
/// the incumbent; equal heap keys pop the lower node id). Every roadmap edge
/// whose endpoints end up in different clusters is seen once, when its
/// later-settled endpoint is popped, and its cost
/// `value(v) + cost(v, n) + value(n)` updates that pair's minimum (strictly
/// smaller) and maximum (larger or equal, so equal-cost bridges are recorded
/// on distinct edges) connection.
pub fn cluster_graph(
    roadmap: &Roadmap,
    centroids: &[usize],
) -> Result<(ClusterForest, Vec<ClusterConnection>)> {
    let n = roadmap.node_count();
    if centroids.is_empty() {
        return Err(Error::InvalidParams(
            "clustering needs at least one centroid".into(),
        ));
    }
    for (i, &c) in centroids.iter().enumerate() {
        if c >= n || centroids[..i].contains(&c) {
            return Err(Error::InvalidParams(format!(
                "centroid {c} is invalid or repeated"
            )));
        }
    }
    let mut value = vec![f64::INFINITY; n];
    let mut cluster = vec![None; n];
    let mut parent = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    for (id, &c) in centroids.iter().enumerate() {
        value[c] = 0.0;
        cluster[c] = Some(id);
        heap.push(HeapEntry { cost: 0.0, node: c });
    }

    let mut records: BTreeMap<(usize, usize), BridgeRecord> = BTreeMap::new();
    while let Some(HeapEntry { cost, node: v }) = heap.pop() {
        if done[v] || cost > value[v] {
            continue;
        }
        done[v] = true;
        for &(nb, len) in &roadmap.adjacency[v] {
            let candidate = value[v] + len;
            if candidate < value[nb] {
                value[nb] = candidate;
                cluster[nb] = cluster[v];
                parent[nb] = Some(v);
                heap.push(HeapEntry {
                    cost: candidate,
                    node: nb,
                });
            } else if done[nb] && cluster[v] != cluster[nb] {
                let (cv, cn) = (cluster[v].unwrap(), cluster[nb].unwrap());
                let total = value[v] + len + value[nb];
                let (key, bridge) = if cv < cn {
                    ((cv, cn), (v, nb))
                } else {
                    ((cn, cv), (nb, v))
                };
                records
                    .entry(key)
                    .and_modify(|r| {
                        if total < r.min_cost {
                            r.min_cost = total;
                            r.min_bridge = bridge;
                        }
                        if total >= r.max_cost {
                            r.max_cost = total;
                            r.max_bridge = bridge;
                        }
                    })
                    .or_insert(BridgeRecord {
                        min_bridge: bridge,
                        max_bridge: bridge,
                        min_cost: total,
                        max_cost: total,
                    });
            }
        }
    }

    let forest = ClusterForest {
        value,
        cluster,
        parent,
        centroids: centroids.to_vec(),
    };
    let connections = records
        .into_iter()
        .map(|(pair, r)| {
            let min_nodes = bridge_nodes(&forest, r.min_bridge);
            let max_nodes = bridge_nodes(&forest, r.max_bridge);
            Ok(ClusterConnection {
                pair,
                min_bridge: r.min_bridge,
                max_bridge: r.max_bridge,
                min_cost: r.min_cost,
                max_cost: r.max_cost,
                pi_min: nodes_to_path(roadmap, &min_nodes)?,
                pi_max: nodes_to_path(roadmap, &max_nodes)?,
                min_nodes,
                max_nodes,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((forest, connections))
}

/// Centroid of the first bridge node's cluster, down its chain, across the
/// bridge and up to the other centroid.
fn bridge_nodes(forest: &ClusterForest, (a, b): (usize, usize)) -> Vec<usize> {
    let mut seq = forest.chain(a);
    seq.reverse();
    seq.extend(forest.chain(b));
    seq
}

fn nodes_to_path(roadmap: &Roadmap, nodes: &[usize]) -> Result<Path> {
    Path::new(nodes.iter().map(|&i| roadmap.nodes[i]).collect())
}

/// Outcome of one centroid insertion round.
#[derive(Debug, Clone, PartialEq)]
pub struct CentroidChoice {
    pub new_centroid: Option<usize>,
    pub can_add: bool,
    /// Deformability of `pi_min` and `pi_max` for every connection, in order.
    pub deformable: Vec<bool>,
}

/// Tests every connection's `pi_min` against its `pi_max` and, among the
/// non-deformable ones, picks the pair with the largest length ratio (ties:
/// lower pair). The new centroid is the endpoint of that pair's maximum
/// bridge with the larger forest value, ties to the lower node id. Bridge
/// endpoints that are already centroids are passed over; if no
/// non-deformable pair yields a fresh node, `can_add` is false.
pub fn add_centroid(
    env: &Environment,
    forest: &ClusterForest,
    connections: &[ClusterConnection],
    delta_d: f64,
) -> Result<CentroidChoice> {
    let deformable = connections
        .iter()
        .map(|c| {
            if c.min_bridge == c.max_bridge {
                Ok(true)
            } else {
                uvd_deformable(env, &c.pi_min, &c.pi_max, delta_d)
            }
        })
        .collect::<Result<Vec<bool>>>()?;

    let mut candidates: Vec<(f64, usize)> = connections
        .iter()
        .zip(&deformable)
        .enumerate()
        .filter(|(_, (_, &d))| !d)
        .map(|(i, (c, _))| (c.ratio(), i))
        .collect();
    candidates.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

    let new_centroid = candidates
        .iter()
        .find_map(|&(_, i)| pick_endpoint(forest, connections[i].max_bridge));
    Ok(CentroidChoice {
        new_centroid,
        can_add: new_centroid.is_some(),
        deformable,
    })
}

fn pick_endpoint(forest: &ClusterForest, (a, b): (usize, usize)) -> Option<usize> {
    let fresh = |v: usize| !forest.centroids.contains(&v);
    let (first, second) = match forest.value[a].total_cmp(&forest.value[b]) {
        std::cmp::Ordering::Greater => (a, b),
        std::cmp::Ordering::Less => (b, a),
        std::cmp::Ordering::Equal => (a.min(b), a.max(b)),
    };
    [first, second].into_iter().find(|&v| fresh(v))
}

/// Edge of the sparse graph between cluster ids `a` and `b`; the geometry
/// runs from centroid `a` to centroid `b` through the dense roadmap.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseEdge {
    pub a: usize,
    pub b: usize,
    pub geometry: Path,
    pub length: f64,
}

/// Low-order graph whose vertices are the centroids (vertex `i` is cluster
/// `i`) and whose edges carry dense-roadmap polylines.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseGraph {
    /// Roadmap node id of every vertex.
    pub vertices: Vec<usize>,
    pub positions: Vec<Point>,
    pub edges: Vec<SparseEdge>,
}

impl SparseGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// `(neighbour, edge id)` per vertex, sorted by neighbour then edge id.
    pub fn incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut inc = vec![Vec::new(); self.vertices.len()];
        for (id, e) in self.edges.iter().enumerate() {
            inc[e.a].push((e.b, id));
            if e.a != e.b {
                inc[e.b].push((e.a, id));
            }
        }
        for list in inc.iter_mut() {
            list.sort();
        }
        inc
    }

    /// Geometry of edge `id` traversed starting at vertex `from`.
    pub fn oriented_geometry(&self, id: usize, from: usize) -> Path {
        let e = &self.edges[id];
        if e.a == from {
            e.geometry.clone()
        } else {
            e.geometry.reversed()
        }
    }
}

/// One edge per neighbouring cluster pair from `pi_min`, plus a parallel
/// `pi_max` edge when the two are not deformable and `include_max` is set.
pub fn find_cluster_edges(
    forest: &ClusterForest,
    roadmap: &Roadmap,
    connections: &[ClusterConnection],
    deformable: &[bool],
    include_max: bool,
) -> SparseGraph {
    let mut edges = Vec::new();
    for (c, &d) in connections.iter().zip(deformable) {
        let (a, b) = c.pair;
        edges.push(SparseEdge {
            a,
            b,
            length: c.pi_min.length(),
            geometry: c.pi_min.clone(),
        });
        if include_max && !d {
            edges.push(SparseEdge {
                a,
                b,
                length: c.pi_max.length(),
                geometry: c.pi_max.clone(),
            });
        }
    }
    SparseGraph {
        vertices: forest.centroids.clone(),
        positions: forest.centroids.iter().map(|&v| roadmap.nodes[v]).collect(),
        edges,
    }
}

/// Final state of the clustering loop.
#[derive(Debug, Clone)]
pub struct Clustering {
    pub forest: ClusterForest,
    pub connections: Vec<ClusterConnection>,
    pub graph: SparseGraph,
    /// Number of clustering passes run.
    pub rounds: usize,
}

/// Starts from the start and goal centroids and alternates clustering with
/// centroid insertion until no centroid can be added or `max_clusters` is
/// reached. The returned forest always clusters the final centroid set.
pub fn iterate_clustering(
    roadmap: &Roadmap,
    env: &Environment,
    max_clusters: usize,
    delta_d: f64,
    include_max_edges: bool,
) -> Result<Clustering> {
    if max_clusters < 2 {
        return Err(Error::InvalidParams(format!(
            "M = {max_clusters} must be at least 2"
        )));
    }
    let mut centroids = vec![roadmap.start, roadmap.goal];
    let mut rounds = 0;
    loop {
        let (forest, connections) = cluster_graph(roadmap, &centroids)?;
        rounds += 1;
        let choice = if centroids.len() < max_clusters {
            Some(add_centroid(env, &forest, &connections, delta_d)?)
        } else {
            None
        };
        match choice {
            Some(CentroidChoice {
                new_centroid: Some(c),
                ..
            }) => centroids.push(c),
            Some(CentroidChoice { deformable, .. }) => {
                let graph = find_cluster_edges(
                    &forest,
                    roadmap,
                    &connections,
                    &deformable,
                    include_max_edges,
                );
                return Ok(Clustering {
                    forest,
                    connections,
                    graph,
                    rounds,
                });
            }
            None => {
                let deformable = connections
                    .iter()
                    .map(|c| {
                        if !include_max_edges || c.min_bridge == c.max_bridge {
                            Ok(true)
                        } else {
                            uvd_deformable(env, &c.pi_min, &c.pi_max, delta_d)
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                let graph = find_cluster_edges(
                    &forest,
                    roadmap,
                    &connections,
                    &deformable,
                    include_max_edges,
                );
                return Ok(Clustering {
                    forest,
                    connections,
                    graph,
                    rounds,
                });
            }
        }
    }
}

#[derive(Serialize)]
struct ClusteringDump {
    cluster: Vec<Option<usize>>,
    centroids: Vec<usize>,
    sparse_edges: Vec<SparseEdgeDump>,
}

#[derive(Serialize)]
struct SparseEdgeDump {
    a: usize,
    b: usize,
    length: f64,
    polyline: Vec<[f64; 3]>,
}

/// Debug dump: cluster id per node, centroid list and sparse edges.
pub fn clustering_json(forest: &ClusterForest, graph: &SparseGraph) -> String {
    let dump = ClusteringDump {
        cluster: forest.cluster.clone(),
        centroids: forest.centroids.clone(),
        sparse_edges: graph
            .edges
            .iter()
            .map(|e| SparseEdgeDump {
                a: e.a,
                b: e.b,
                length: e.length,
                polyline: e
                    .geometry
                    .waypoints()
                    .iter()
                    .map(|p| [p.x, p.y, p.z])
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string(&dump).expect("clustering dump serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{Bounds, Primitive};
    use crate::roadmap::dijkstra_shortest;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn line(n: usize) -> Roadmap {
        let nodes = (0..n).map(|i| Point::new(i as f64, 0.0, 0.0)).collect();
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Roadmap::from_edges(nodes, &edges, 0, n - 1)
    }

    /// Regular octagon of unit edges around the origin.
    fn ring() -> Roadmap {
        let r = 0.5 / (std::f64::consts::PI / 8.0).sin();
        let nodes = (0..8)
            .map(|i| {
                let t = i as f64 * std::f64::consts::PI / 4.0;
                Point::new(r * t.cos(), r * t.sin(), 0.0)
            })
            .collect();
        let edges: Vec<_> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
        Roadmap::from_edges(nodes, &edges, 0, 4)
    }

    fn ring_env(obstacle: bool) -> Environment {
        let b = Bounds::new(Point::new(-3.0, -3.0, -1.0), Point::new(3.0, 3.0, 1.0)).unwrap();
        let prims = if obstacle {
            vec![Primitive::sphere(Point::origin(), 0.6).unwrap()]
        } else {
            vec![]
        };
        Environment::with_primitives(b, prims, 0.05).unwrap()
    }

    #[test]
    fn path_graph_two_centroids() {
        let map = line(5);
        let (forest, conns) = cluster_graph(&map, &[0, 4]).unwrap();
        forest.validate(&map).unwrap();
        assert_eq!(forest.cluster[0..2], [Some(0), Some(0)]);
        assert_eq!(forest.cluster[3..5], [Some(1), Some(1)]);
        // node 2 is tied; the lower-id root settles node 1 first and claims it
        assert_eq!(forest.cluster[2], Some(0));
        assert_eq!(conns.len(), 1);
        let c = &conns[0];
        assert_eq!(c.pi_min.length(), 4.0);
        assert_eq!(c.pi_max.length(), 4.0);
        assert_eq!(c.min_nodes, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn single_centroid_matches_dijkstra() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let nodes: Vec<Point> = (0..40)
            .map(|_| Point::new(rng.gen_range(0.0..5.0), rng.gen_range(0.0..5.0), 0.0))
            .collect();
        let edges: Vec<_> = (0..120)
            .map(|_| (rng.gen_range(0..40), rng.gen_range(0..40)))
            .collect();
        let map = Roadmap::from_edges(nodes, &edges, 0, 1);
        let (forest, conns) = cluster_graph(&map, &[7]).unwrap();
        forest.validate(&map).unwrap();
        let sp = dijkstra_shortest(&map.adjacency, 7);
        for (a, b) in forest.value.iter().zip(&sp.dist) {
            assert!(a == b || (a - b).abs() < 1e-12);
        }
        assert!(conns.is_empty());
    }

    #[test]
    fn ring_records_both_arcs() {
        let map = ring();
        let (forest, conns) = cluster_graph(&map, &[0, 4]).unwrap();
        forest.validate(&map).unwrap();
        assert_eq!(conns.len(), 1);
        let c = &conns[0];
        // every simple 0 -> 4 path on the ring has four unit edges
        assert!((c.pi_min.length() - 4.0).abs() < 1e-9);
        assert!((c.pi_max.length() - 4.0).abs() < 1e-9);
        assert_ne!(c.min_bridge, c.max_bridge);
        let upper = c.min_nodes.contains(&2);
        assert_ne!(upper, c.max_nodes.contains(&2));
    }

    #[test]
    fn ring_sparse_graph_has_parallel_arcs() {
        let map = ring();
        let env = ring_env(true);
        let (forest, conns) = cluster_graph(&map, &[0, 4]).unwrap();
        let choice = add_centroid(&env, &forest, &conns, 0.05).unwrap();
        assert_eq!(choice.deformable, vec![false]);
        let graph = find_cluster_edges(&forest, &map, &conns, &choice.deformable, true);
        assert_eq!(graph.vertex_count(), 2);
        assert_eq!(graph.edges.len(), 2);
        assert_eq!(graph.positions[0], map.nodes[0]);
        for e in &graph.edges {
            assert_eq!(e.geometry.first(), &map.nodes[0]);
            assert_eq!(e.geometry.last(), &map.nodes[4]);
        }
        // restricted to minimum connections only
        let graph = find_cluster_edges(&forest, &map, &conns, &choice.deformable, false);
        assert_eq!(graph.edges.len(), 1);
        // without the obstacle the arcs are deformable: one edge
        let env = ring_env(false);
        let choice = add_centroid(&env, &forest, &conns, 0.05).unwrap();
        assert!(!choice.can_add);
        let graph = find_cluster_edges(&forest, &map, &conns, &choice.deformable, true);
        assert_eq!(graph.edges.len(), 1);
    }

    #[test]
    fn new_centroid_comes_from_the_max_bridge() {
        let map = ring();
        let env = ring_env(true);
        let (forest, conns) = cluster_graph(&map, &[0, 4]).unwrap();
        let choice = add_centroid(&env, &forest, &conns, 0.05).unwrap();
        assert!(choice.can_add);
        let c = choice.new_centroid.unwrap();
        let (a, b) = conns[0].max_bridge;
        assert!(c == a || c == b);
        let other = if c == a { b } else { a };
        assert!(
            forest.value[c] > forest.value[other]
                || (forest.value[c] == forest.value[other] && c < other)
        );
    }

    #[test]
    fn two_cluster_edge_geometry() {
        let map = line(4);
        let env = ring_env(false);
        let (forest, conns) = cluster_graph(&map, &[0, 3]).unwrap();
        let deformable = vec![true; conns.len()];
        let graph = find_cluster_edges(&forest, &map, &conns, &deformable, true);
        assert_eq!(graph.vertex_count(), 2);
        assert_eq!(graph.edges.len(), 1);
        assert_eq!(graph.edges[0].geometry.waypoints().len(), 4);
        assert_eq!(graph.edges[0].length, 3.0);
        let _ = env;
    }

    #[test]
    fn largest_ratio_wins() {
        // two pairs, both artificially non-deformable: pick the larger ratio
        let nodes = vec![
            Point::new(0.0, 0.0, 0.0),
            Point::new(10.0, 0.0, 0.0),
            Point::new(5.0, 0.0, 0.0),
        ];
        let map = Roadmap::from_edges(nodes, &[(0, 2), (1, 2)], 0, 1);
        let (forest, _) = cluster_graph(&map, &[0, 1]).unwrap();
        let p = |pts: Vec<(f64, f64)>| {
            Path::new(
                pts.into_iter()
                    .map(|(x, y)| Point::new(x, y, 0.0))
                    .collect(),
            )
            .unwrap()
        };
        let conn = |pair, ratio: f64, bridge: (usize, usize)| {
            let h = ((ratio * 10.0 / 2.0).powi(2) - 25.0).sqrt();
            ClusterConnection {
                pair,
                min_bridge: (0, 1),
                max_bridge: bridge,
                min_cost: 10.0,
                max_cost: 10.0 * ratio,
                min_nodes: vec![],
                max_nodes: vec![],
                pi_min: p(vec![(0.0, 0.0), (10.0, 0.0)]),
                pi_max: p(vec![(0.0, 0.0), (5.0, h), (10.0, 0.0)]),
            }
        };
        let conns = vec![conn((0, 1), 1.2, (0, 2)), conn((0, 2), 1.8, (2, 1))];
        let b = Bounds::new(Point::new(-1.0, -1.0, -1.0), Point::new(11.0, 10.0, 1.0)).unwrap();
        // a thin box between the straight and the bent paths
        let blocker =
            Primitive::aabb(Point::new(4.9, 0.2, -1.0), Point::new(5.1, 0.8, 1.0)).unwrap();
        let env = Environment::with_primitives(b, vec![blocker], 0.0).unwrap();
        let choice = add_centroid(&env, &forest, &conns, 0.05).unwrap();
        assert_eq!(choice.deformable, vec![false, false]);
        assert!((conns[1].ratio() - 1.8).abs() < 1e-9);
        assert_eq!(choice.new_centroid, Some(2));
    }

    #[test]
    fn empty_world_terminates_with_two_clusters() {
        let b = Bounds::new(Point::new(0.0, 0.0, 0.0), Point::new(10.0, 10.0, 2.0)).unwrap();
        let env = Environment::empty(b, 0.2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = crate::roadmap::PrmParams {
            num_samples: 200,
            k: 14,
            delta_d: 0.1,
            kappa_e: 2.0,
            planar: false,
        };
        let map = crate::roadmap::build_prm(
            &env,
            &Point::new(1.0, 1.0, 1.0),
            &Point::new(9.0, 9.0, 1.0),
            &p,
            &mut rng,
        )
        .unwrap();
        let out = iterate_clustering(&map, &env, 9, 0.1, true).unwrap();
        assert_eq!(out.forest.cluster_count(), 2);
        assert_eq!(out.graph.edges.len(), 1);
        out.forest.validate(&map).unwrap();

        let two = iterate_clustering(&map, &env, 2, 0.1, true).unwrap();
        let (forest, _) = cluster_graph(&map, &[0, 1]).unwrap();
        assert_eq!(two.rounds, 1);
        assert_eq!(two.forest, forest);
    }

    #[test]
    fn rejects_bad_centroids() {
        let map = line(3);
        assert!(cluster_graph(&map, &[]).is_err());
        assert!(cluster_graph(&map, &[0, 0]).is_err());
        assert!(cluster_graph(&map, &[5]).is_err());
    }
}
