use rayon::prelude::*;

use crate::env::Environment;
use crate::topology::{uvd_deformable, Path};
use crate::Result;

/// Greedy visibility shortening: a forward pass over the path densified at
/// `delta_d`, then the same pass from the goal end on its result, repeated
/// while a round still shortens the path.
///
/// Each pass advances from the current anchor along the samples while the
/// straight segment from the anchor stays free, and emits the last sample
/// reached as the next anchor. Every chord swept on the way is free, so a
/// path is never pulled across an obstacle to a distant visible sample.
/// Shortcuts keep the extra [`Environment::chord_margin`] at their samples,
/// so they are collision-free between samples too.
pub fn shorten_path(env: &Environment, p: &Path, delta_d: f64) -> Path {
    let mut current = p.clone();
    for _ in 0..MAX_SHORTEN_ROUNDS {
        let forward = shorten_pass(env, &current, delta_d);
        let next = shorten_pass(env, &forward.reversed(), delta_d).reversed();
        let done = next.length() >= current.length() - 1e-9;
        if next.length() <= current.length() {
            current = next;
        }
        if done {
            break;
        }
    }
    current
}

const MAX_SHORTEN_ROUNDS: usize = 8;

fn shorten_pass(env: &Environment, p: &Path, delta_d: f64) -> Path {
    let samples = p.densify(delta_d);
    let last = samples.len() - 1;
    let margin = env.chord_margin(delta_d);
    let mut out = vec![samples[0]];
    let mut anchor = 0;
    while anchor < last {
        let mut next = anchor + 1;
        while next < last
            && env.segment_free_with_margin(&samples[anchor], &samples[next + 1], delta_d, margin)
        {
            next += 1;
        }
        out.push(samples[next]);
        anchor = next;
    }
    Path::new(out).expect("shortening keeps distinct endpoints")
}

/// Shortens every path, prunes those longer than `kappa_s` times the
/// shortest, and keeps, in ascending length order, each path that is not
/// deformable to any path already kept.
pub fn filter_paths(
    env: &Environment,
    paths: &[Path],
    kappa_s: f64,
    delta_d: f64,
) -> Result<Vec<Path>> {
    let mut shortened: Vec<Path> = paths
        .par_iter()
        .map(|p| shorten_path(env, p, delta_d))
        .collect();
    let Some(min) = shortened.iter().map(Path::length).min_by(f64::total_cmp) else {
        return Ok(Vec::new());
    };
    shortened.retain(|p| p.length() <= kappa_s * min);
    shortened.sort_by(|a, b| a.length().total_cmp(&b.length()));
    let mut kept: Vec<Path> = Vec::new();
    for p in shortened {
        let mut distinct = true;
        for k in &kept {
            if uvd_deformable(env, &p, k, delta_d)? {
                distinct = false;
                break;
            }
        }
        if distinct {
            kept.push(p);
        }
    }
    Ok(kept)
}
