//! Paths, uniform visibility deformation and the distinct-path pipeline:
//! enumeration on the sparse graph, shortening and final filtering.

mod filter;
mod path;
mod search;
mod uvd;

pub use filter::{filter_paths, shorten_path};
pub use path::Path;
pub use search::{enumerate_edge_sequences, find_distinct_paths};
pub use uvd::uvd_deformable;

/// Tolerance for comparing path endpoints, in meters.
pub const ENDPOINT_TOLERANCE: f64 = 1e-9;
