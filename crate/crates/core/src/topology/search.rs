use crate::clustering::SparseGraph;
use crate::topology::Path;
use crate::{Error, Result};

/// Edge-id sequences of every simple vertex path from `start` to `goal`
/// whose summed edge length stays within `budget`. Parallel edges are
/// separate branches. Neighbours are expanded in ascending vertex id, then
/// edge id.
pub fn enumerate_edge_sequences(
    graph: &SparseGraph,
    start: usize,
    goal: usize,
    budget: f64,
) -> Result<Vec<Vec<usize>>> {
    let n = graph.vertex_count();
    if start >= n || goal >= n {
        return Err(Error::InvalidQuery(format!(
            "vertex out of range ({start}, {goal}) for {n} vertices"
        )));
    }
    if !(budget > 0.0) {
        return Err(Error::InvalidParams(format!(
            "search budget {budget} must be positive"
        )));
    }
    let incidence = graph.incidence();
    let mut visited = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    visited[start] = true;
    dfs(
        graph,
        &incidence,
        start,
        goal,
        0.0,
        budget,
        &mut visited,
        &mut stack,
        &mut out,
    );
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    graph: &SparseGraph,
    incidence: &[Vec<(usize, usize)>],
    v: usize,
    goal: usize,
    length: f64,
    budget: f64,
    visited: &mut [bool],
    stack: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if v == goal {
        out.push(stack.clone());
        return;
    }
    for &(w, e) in &incidence[v] {
        if visited[w] {
            continue;
        }
        let next = length + graph.edges[e].length;
        if next > budget {
            continue;
        }
        visited[w] = true;
        stack.push(e);
        dfs(graph, incidence, w, goal, next, budget, visited, stack, out);
        stack.pop();
        visited[w] = false;
    }
}

/// Concatenated geometry of every path found by [`enumerate_edge_sequences`].
pub fn find_distinct_paths(
    graph: &SparseGraph,
    start: usize,
    goal: usize,
    budget: f64,
) -> Result<Vec<Path>> {
    let sequences = enumerate_edge_sequences(graph, start, goal, budget)?;
    Ok(sequences
        .into_iter()
        .filter(|seq| !seq.is_empty())
        .map(|seq| {
            let mut at = start;
            let mut path: Option<Path> = None;
            for e in seq {
                let piece = graph.oriented_geometry(e, at);
                let edge = &graph.edges[e];
                at = if edge.a == at { edge.b } else { edge.a };
                path = Some(match path {
                    None => piece,
                    Some(p) => p.join(&piece),
                });
            }
            path.expect("nonempty sequence")
        })
        .collect())
}
