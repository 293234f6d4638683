//! Clustering topological PRM.
//!
//! Builds a dense informed probabilistic roadmap, clusters it into a
//! shortest-path forest whose roots are placed wherever the shortest and the
//! longest connection between two neighbouring clusters cannot be uniformly
//! visibility-deformed into each other, and searches the resulting sparse
//! graph of cluster centroids for topologically distinct start-goal paths.

pub mod bench;
pub mod clustering;
pub mod env;
pub mod error;
pub mod kdtree;
pub mod oracle;
pub mod planner;
pub mod roadmap;
pub mod scenario;
pub mod svg;
pub mod topology;

pub use error::{Error, Result};

/// Configuration / workspace point in meters.
pub type Point = nalgebra::Point3<f64>;
pub type Vector = nalgebra::Vector3<f64>;
