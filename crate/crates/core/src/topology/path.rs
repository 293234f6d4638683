use serde::{Deserialize, Serialize};

use crate::{Error, Point, Result};

/// Polyline parameterized by normalized arc length.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    waypoints: Vec<Point>,
    /// Arc length at every waypoint; the last entry is the total.
    cumulative: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct PathJson {
    length: f64,
    waypoints: Vec<[f64; 3]>,
}

impl Path {
    /// Builds a path, dropping consecutive duplicate waypoints. At least two
    /// distinct waypoints must remain.
    pub fn new(waypoints: Vec<Point>) -> Result<Self> {
        let mut pts: Vec<Point> = Vec::with_capacity(waypoints.len());
        for p in waypoints {
            if pts.last() != Some(&p) {
                pts.push(p);
            }
        }
        if pts.len() < 2 {
            return Err(Error::BadSpec("a path needs two distinct waypoints".into()));
        }
        let mut cumulative = Vec::with_capacity(pts.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for w in pts.windows(2) {
            acc += (w[1] - w[0]).norm();
            cumulative.push(acc);
        }
        Ok(Self {
            waypoints: pts,
            cumulative,
        })
    }

    pub fn waypoints(&self) -> &[Point] {
        &self.waypoints
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    pub fn first(&self) -> &Point {
        &self.waypoints[0]
    }

    pub fn last(&self) -> &Point {
        self.waypoints.last().unwrap()
    }

    pub fn reversed(&self) -> Path {
        let mut w = self.waypoints.clone();
        w.reverse();
        Path::new(w).expect("reversal keeps waypoints distinct")
    }

    /// Point at normalized arc length `s` in `[0, 1]`.
    pub fn point_at(&self, s: f64) -> Point {
        let s = s.clamp(0.0, 1.0);
        if s == 1.0 {
            return *self.last();
        }
        let target = s * self.length();
        let seg = self
            .cumulative
            .partition_point(|&c| c <= target)
            .clamp(1, self.waypoints.len() - 1)
            - 1;
        self.interpolate(seg, target)
    }

    fn interpolate(&self, seg: usize, target: f64) -> Point {
        let a = self.waypoints[seg];
        let b = self.waypoints[seg + 1];
        let span = self.cumulative[seg + 1] - self.cumulative[seg];
        let t = ((target - self.cumulative[seg]) / span).clamp(0.0, 1.0);
        a + (b - a) * t
    }

    /// `n + 1` points at normalized arc lengths `k / n`, `k = 0..=n`;
    /// same values as [`point_at`](Self::point_at) in one sweep.
    pub fn resample(&self, n: usize) -> Vec<Point> {
        if n == 0 {
            return vec![self.waypoints[0]];
        }
        let total = self.length();
        let mut out = Vec::with_capacity(n + 1);
        let mut seg = 0usize;
        for k in 0..n {
            let target = (k as f64 / n as f64) * total;
            while seg + 2 < self.waypoints.len() && self.cumulative[seg + 1] <= target {
                seg += 1;
            }
            out.push(self.interpolate(seg, target));
        }
        out.push(*self.last());
        out
    }

    /// Waypoints plus evenly spaced points on every segment, so consecutive
    /// points are at most `spacing` apart and lie on the original polyline.
    pub fn densify(&self, spacing: f64) -> Vec<Point> {
        let mut out = vec![self.waypoints[0]];
        for w in self.waypoints.windows(2) {
            let len = (w[1] - w[0]).norm();
            let n = ((len / spacing).ceil() as usize).max(1);
            for i in 1..n {
                out.push(w[0] + (w[1] - w[0]) * (i as f64 / n as f64));
            }
            out.push(w[1]);
        }
        out
    }

    /// Whether both paths start and end at the same points within `tol`.
    pub fn shares_endpoints(&self, other: &Path, tol: f64) -> bool {
        self.endpoint_gap(other) <= tol
    }

    pub fn endpoint_gap(&self, other: &Path) -> f64 {
        (self.first() - other.first())
            .norm()
            .max((self.last() - other.last()).norm())
    }

    /// Concatenates `other` after `self`; `other` must start where `self` ends.
    pub fn join(&self, other: &Path) -> Path {
        let mut w = self.waypoints.clone();
        w.extend_from_slice(&other.waypoints[1..]);
        Path::new(w).expect("joined path keeps two distinct waypoints")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(PathJson::from(self)).expect("path serializes")
    }
}

impl From<&Path> for PathJson {
    fn from(p: &Path) -> Self {
        PathJson {
            length: p.length(),
            waypoints: p.waypoints.iter().map(|q| [q.x, q.y, q.z]).collect(),
        }
    }
}

impl Serialize for Path {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PathJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Path {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PathJson::deserialize(d)?;
        Path::new(
            raw.waypoints
                .into_iter()
                .map(|[x, y, z]| Point::new(x, y, z))
                .collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}
