use serde::{Deserialize, Serialize};

use crate::{Error, Point, Result, Vector};

/// Axis-aligned box, `min < max` componentwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aabb {
    pub min: Point,
    pub max: Point,
}

impl Aabb {
    pub fn new(min: Point, max: Point) -> Result<Self> {
        if (0..3).any(|i| !(min[i] < max[i])) {
            return Err(Error::BadSpec(format!(
                "box min {min:?} must be below max {max:?} on every axis"
            )));
        }
        Ok(Self { min, max })
    }

    pub fn center(&self) -> Point {
        nalgebra::center(&self.min, &self.max)
    }

    pub fn contains(&self, q: &Point) -> bool {
        (0..3).all(|i| q[i] >= self.min[i] && q[i] <= self.max[i])
    }

    /// Exact signed distance, negative inside.
    pub fn signed_distance(&self, q: &Point) -> f64 {
        let c = self.center();
        let half = (self.max - self.min) * 0.5;
        let d: Vector = (q - c).abs() - half;
        let outside = d.sup(&Vector::zeros()).norm();
        let inside = d.max().min(0.0);
        outside + inside
    }
}

/// A rectangular cut-out in a wall, in the wall's in-plane `(u, v)` coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

impl Window {
    fn overlaps(&self, other: &Window) -> bool {
        (0..2).all(|i| self.min[i] < other.max[i] && other.min[i] < self.max[i])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct WallSpec {
    axis: usize,
    center: f64,
    thickness: f64,
    face_min: [f64; 2],
    face_max: [f64; 2],
    #[serde(default)]
    windows: Vec<Window>,
}

/// Axis-aligned slab with rectangular windows cut through it.
///
/// `axis` is the wall normal. In-plane coordinates `(u, v)` are the two other
/// axes in ascending order, so a wall with normal x spans `(y, z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "WallSpec", into = "WallSpec")]
pub struct Wall {
    pub axis: usize,
    pub center: f64,
    pub thickness: f64,
    pub face_min: [f64; 2],
    pub face_max: [f64; 2],
    pub windows: Vec<Window>,
    /// Solid material as disjoint boxes.
    pieces: Vec<Aabb>,
}

impl Wall {
    pub fn new(
        axis: usize,
        center: f64,
        thickness: f64,
        face_min: [f64; 2],
        face_max: [f64; 2],
        windows: Vec<Window>,
    ) -> Result<Self> {
        if axis > 2 {
            return Err(Error::BadSpec(format!("wall axis {axis} out of range")));
        }
        if !(thickness > 0.0) {
            return Err(Error::BadSpec("wall thickness must be positive".into()));
        }
        if (0..2).any(|i| !(face_min[i] < face_max[i])) {
            return Err(Error::BadSpec("wall face rectangle is empty".into()));
        }
        for (k, w) in windows.iter().enumerate() {
            let inside = (0..2)
                .all(|i| w.min[i] < w.max[i] && w.min[i] >= face_min[i] && w.max[i] <= face_max[i]);
            if !inside {
                return Err(Error::BadSpec(format!(
                    "window {k} lies outside its wall face"
                )));
            }
            if windows[..k].iter().any(|o| o.overlaps(w)) {
                return Err(Error::BadSpec(format!(
                    "window {k} overlaps another window"
                )));
            }
        }
        let mut wall = Self {
            axis,
            center,
            thickness,
            face_min,
            face_max,
            windows,
            pieces: Vec::new(),
        };
        wall.pieces = wall.decompose();
        Ok(wall)
    }

    /// The two in-plane axes.
    pub fn plane_axes(&self) -> [usize; 2] {
        match self.axis {
            0 => [1, 2],
            1 => [0, 2],
            _ => [0, 1],
        }
    }

    pub fn pieces(&self) -> &[Aabb] {
        &self.pieces
    }

    /// Splits the face rectangle along every window edge and keeps the cells
    /// not covered by a window. Cells are disjoint, so the minimum of their
    /// distances is the exact distance to the wall from outside.
    fn decompose(&self) -> Vec<Aabb> {
        let mut cuts: [Vec<f64>; 2] = [
            vec![self.face_min[0], self.face_max[0]],
            vec![self.face_min[1], self.face_max[1]],
        ];
        for w in &self.windows {
            for i in 0..2 {
                cuts[i].push(w.min[i]);
                cuts[i].push(w.max[i]);
            }
        }
        for c in cuts.iter_mut() {
            c.sort_by(f64::total_cmp);
            c.dedup();
        }
        let [ua, va] = self.plane_axes();
        let mut pieces = Vec::new();
        for us in cuts[0].windows(2) {
            for vs in cuts[1].windows(2) {
                let mid = [(us[0] + us[1]) * 0.5, (vs[0] + vs[1]) * 0.5];
                let open = self
                    .windows
                    .iter()
                    .any(|w| (0..2).all(|i| mid[i] > w.min[i] && mid[i] < w.max[i]));
                if open {
                    continue;
                }
                let mut min = Point::origin();
                let mut max = Point::origin();
                min[self.axis] = self.center - self.thickness * 0.5;
                max[self.axis] = self.center + self.thickness * 0.5;
                min[ua] = us[0];
                max[ua] = us[1];
                min[va] = vs[0];
                max[va] = vs[1];
                pieces.push(Aabb { min, max });
            }
        }
        pieces
    }
}

impl TryFrom<WallSpec> for Wall {
    type Error = Error;

    fn try_from(s: WallSpec) -> Result<Self> {
        Wall::new(
            s.axis,
            s.center,
            s.thickness,
            s.face_min,
            s.face_max,
            s.windows,
        )
    }
}

impl From<Wall> for WallSpec {
    fn from(w: Wall) -> Self {
        WallSpec {
            axis: w.axis,
            center: w.center,
            thickness: w.thickness,
            face_min: w.face_min,
            face_max: w.face_max,
            windows: w.windows,
        }
    }
}

/// Analytic obstacle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Primitive {
    Sphere {
        center: Point,
        radius: f64,
    },
    #[serde(rename = "box")]
    AxisAlignedBox {
        min: Point,
        max: Point,
    },
    #[serde(rename = "wall")]
    WallWithWindows(Wall),
}

impl Primitive {
    pub fn sphere(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::BadSpec(format!(
                "sphere radius {radius} must be positive"
            )));
        }
        Ok(Primitive::Sphere { center, radius })
    }

    pub fn aabb(min: Point, max: Point) -> Result<Self> {
        Aabb::new(min, max)?;
        Ok(Primitive::AxisAlignedBox { min, max })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Primitive::Sphere { center, radius } => Primitive::sphere(*center, *radius).map(drop),
            Primitive::AxisAlignedBox { min, max } => Aabb::new(*min, *max).map(drop),
            Primitive::WallWithWindows(_) => Ok(()),
        }
    }

    pub fn signed_distance(&self, q: &Point) -> f64 {
        match self {
            Primitive::Sphere { center, radius } => (q - center).norm() - radius,
            Primitive::AxisAlignedBox { min, max } => Aabb {
                min: *min,
                max: *max,
            }
            .signed_distance(q),
            Primitive::WallWithWindows(wall) => wall
                .pieces
                .iter()
                .map(|p| p.signed_distance(q))
                .fold(f64::INFINITY, f64::min),
        }
    }
}
