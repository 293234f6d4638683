use crate::env::Environment;
use crate::topology::{Path, ENDPOINT_TOLERANCE};
use crate::{Error, Result};

/// Uniform visibility deformation test.
///
/// Both paths are sampled at the same `n + 1` normalized arc lengths with
/// `n = ceil(max(len1, len2) / delta_d)`; they are deformable iff every
/// segment joining matched samples is collision-free at `delta_d`. Matched
/// samples that coincide are skipped, which keeps the relation reflexive.
pub fn uvd_deformable(env: &Environment, p1: &Path, p2: &Path, delta_d: f64) -> Result<bool> {
    let gap = p1.endpoint_gap(p2);
    if gap > ENDPOINT_TOLERANCE {
        return Err(Error::EndpointMismatch { gap });
    }
    let n = (p1.length().max(p2.length()) / delta_d).ceil() as usize;
    let a = p1.resample(n);
    let b = p2.resample(n);
    let visible = |k: usize| a[k] == b[k] || env.segment_free(&a[k], &b[k], delta_d);
    // paths in different classes usually separate mid-way, so look there first
    Ok(visible(n / 2) && (0..=n).all(visible))
}
