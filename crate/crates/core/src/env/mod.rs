//! Workspace, free space and every collision query the planner makes.
//!
//! A configuration is free iff it lies inside the (closed) bounds and its
//! signed distance to the obstacles is strictly larger than the robot
//! clearance. Segments are checked by sampling at a fixed resolution, so all
//! segment answers are exact only up to that resolution.

mod primitive;
mod voxel;

use serde::{Deserialize, Serialize};

pub use primitive::{Aabb, Primitive, Wall, Window};
pub use voxel::{build_esdf, VoxelGrid};

use crate::{Error, Point, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub min_corner: Point,
    pub max_corner: Point,
}

impl Bounds {
    pub fn new(min_corner: Point, max_corner: Point) -> Result<Self> {
        if (0..3).any(|i| !(min_corner[i] < max_corner[i])) {
            return Err(Error::BadSpec(format!(
                "bounds min {min_corner:?} must be below max {max_corner:?} on every axis"
            )));
        }
        Ok(Self {
            min_corner,
            max_corner,
        })
    }

    #[inline]
    pub fn contains(&self, q: &Point) -> bool {
        (0..3).all(|i| q[i] >= self.min_corner[i] && q[i] <= self.max_corner[i])
    }

    pub fn size(&self) -> crate::Vector {
        self.max_corner - self.min_corner
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    Primitives(Vec<Primitive>),
    Grid(VoxelGrid),
}

/// Immutable obstacle field.
#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    bounds: Bounds,
    representation: Representation,
    clearance: f64,
}

impl Environment {
    pub fn new(bounds: Bounds, representation: Representation, clearance: f64) -> Result<Self> {
        if !(clearance >= 0.0) {
            return Err(Error::BadSpec(format!(
                "clearance {clearance} must be non-negative"
            )));
        }
        if let Representation::Primitives(prims) = &representation {
            for p in prims {
                p.validate()?;
            }
        }
        Ok(Self {
            bounds,
            representation,
            clearance,
        })
    }

    pub fn with_primitives(
        bounds: Bounds,
        primitives: Vec<Primitive>,
        clearance: f64,
    ) -> Result<Self> {
        Self::new(bounds, Representation::Primitives(primitives), clearance)
    }

    pub fn empty(bounds: Bounds, clearance: f64) -> Result<Self> {
        Self::with_primitives(bounds, Vec::new(), clearance)
    }

    /// Same obstacles with a different robot radius.
    pub fn with_clearance(&self, clearance: f64) -> Result<Self> {
        Self::new(self.bounds, self.representation.clone(), clearance)
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    pub fn representation(&self) -> &Representation {
        &self.representation
    }

    pub fn clearance(&self) -> f64 {
        self.clearance
    }

    /// Signed distance to the nearest obstacle surface, negative inside.
    /// An obstacle-free field answers `f64::INFINITY`.
    pub fn sdf(&self, q: &Point) -> f64 {
        match &self.representation {
            Representation::Primitives(prims) => prims
                .iter()
                .map(|p| p.signed_distance(q))
                .fold(f64::INFINITY, f64::min),
            Representation::Grid(grid) => grid.interpolate(q),
        }
    }

    #[inline]
    pub fn is_free(&self, q: &Point) -> bool {
        self.bounds.contains(q) && self.sdf(q) > self.clearance
    }

    /// Checks `ceil(|b - a| / delta_d) + 1` evenly spaced samples on `[a, b]`,
    /// endpoints included.
    ///
    /// For analytic obstacles the field is 1-Lipschitz, so samples closer to
    /// an already-checked sample than its free margin are skipped; the answer
    /// is the same as testing every sample.
    pub fn segment_free(&self, a: &Point, b: &Point, delta_d: f64) -> bool {
        self.segment_free_with_margin(a, b, delta_d, 0.0)
    }

    /// Extra clearance that, demanded at samples at most `delta_d` apart,
    /// keeps every point between them clear as well.
    ///
    /// Along a line the distance to a convex obstacle is convex and curves by
    /// at most `1 / d` at distance `d`, so between samples it dips at most
    /// `delta_d^2 / (8 d)` below the chord. The margin doubles that bound at
    /// `d = clearance` and never exceeds the Lipschitz bound `delta_d / 2`,
    /// which is all a grid field gets.
    pub fn chord_margin(&self, delta_d: f64) -> f64 {
        let lipschitz = delta_d / 2.0;
        match self.representation {
            Representation::Primitives(_) if self.clearance > 0.0 => {
                lipschitz.min(delta_d * delta_d / (4.0 * self.clearance))
            }
            _ => lipschitz,
        }
    }

    /// [`segment_free`](Self::segment_free) against `clearance + margin`.
    /// With [`chord_margin`](Self::chord_margin) every point of the segment,
    /// not only the samples, keeps the clearance.
    pub fn segment_free_with_margin(
        &self,
        a: &Point,
        b: &Point,
        delta_d: f64,
        margin: f64,
    ) -> bool {
        debug_assert!(delta_d > 0.0);
        let clearance = self.clearance + margin;
        let free = |q: &Point| self.bounds.contains(q) && self.sdf(q) > clearance;
        if !self.bounds.contains(a) || !self.bounds.contains(b) {
            return false;
        }
        let (a, b) = ordered(a, b);
        let dir = b - a;
        let len = dir.norm();
        let n = (len / delta_d).ceil() as usize;
        if n == 0 {
            return free(&a);
        }
        let at = |i: usize| -> Point { sample(&a, &b, i, n) };
        match &self.representation {
            Representation::Primitives(_) => {
                let step = len / n as f64;
                let mut i = 0usize;
                loop {
                    let slack = self.sdf(&at(i)) - clearance;
                    if !(slack > 0.0) {
                        return false;
                    }
                    // samples strictly closer than `slack` are free
                    let skip = ((slack / step) * (1.0 - 1e-12)).ceil();
                    if skip > (n - i) as f64 {
                        return true;
                    }
                    i += (skip as usize).max(1);
                }
            }
            Representation::Grid(_) => (0..=n).all(|i| free(&at(i))),
        }
    }

    /// Reference implementation of [`segment_free`](Self::segment_free) that
    /// visits every sample.
    pub fn segment_free_dense(&self, a: &Point, b: &Point, delta_d: f64) -> bool {
        let (a, b) = ordered(a, b);
        let n = ((b - a).norm() / delta_d).ceil() as usize;
        if n == 0 {
            return self.is_free(&a);
        }
        (0..=n).all(|i| self.is_free(&sample(&a, &b, i, n)))
    }
}

/// Canonical endpoint order so both directions evaluate identical samples.
fn ordered(a: &Point, b: &Point) -> (Point, Point) {
    let key = |p: &Point| [p.x, p.y, p.z];
    if key(a).partial_cmp(&key(b)) == Some(std::cmp::Ordering::Greater) {
        (*b, *a)
    } else {
        (*a, *b)
    }
}

#[inline]
fn sample(a: &Point, b: &Point, i: usize, n: usize) -> Point {
    if i == n {
        *b
    } else {
        a + (b - a) * (i as f64 / n as f64)
    }
}
