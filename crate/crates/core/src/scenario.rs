//! Scenario files and the built-in scene families: windows, poles and a
//! two-level building.
//!
//! A scenario file is JSON:
//!
//! ```json
//! {
//!   "name": "windows 0-2-0",
//!   "bounds": {"min_corner": [0, 0, 0], "max_corner": [27, 26.7, 8]},
//!   "environment": {"primitives": [{"type": "sphere", "center": [5, 5, 4], "radius": 1}]},
//!   "start": [1, 13.35, 4],
//!   "goal": [26, 13.35, 4],
//!   "params": {"num_samples": 500, "M": 9, "kappa_p": 1.8, "planar": true},
//!   "reference_paths": [{"length": 25.0, "waypoints": [[1, 13.35, 4], [26, 13.35, 4]]}]
//! }
//! ```
//!
//! `environment` may instead be `{"voxel_file": "map.vox"}`, resolved
//! relative to the scenario file. Missing `params` fields take the planner
//! defaults; `reference_paths` is optional.

use std::path::Path as FsPath;

use serde::{Deserialize, Serialize};

use crate::env::{Bounds, Environment, Primitive, Representation, VoxelGrid, Wall, Window};
use crate::planner::PlannerParams;
use crate::topology::{shorten_path, uvd_deformable, Path};
use crate::{Error, Point, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvSpec {
    Primitives(Vec<Primitive>),
    VoxelFile(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub bounds: Bounds,
    pub environment: EnvSpec,
    pub start: Point,
    pub goal: Point,
    #[serde(default)]
    pub params: PlannerParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_paths: Option<Vec<Path>>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// Reads a scenario file; a voxel map is resolved next to it.
    pub fn load(path: &FsPath) -> Result<(Self, Environment)> {
        let scenario = Self::from_json(&std::fs::read_to_string(path)?)?;
        let env = scenario.environment(path.parent())?;
        Ok((scenario, env))
    }

    /// Environment at the scenario's clearance. `base_dir` anchors a
    /// relative voxel file path.
    pub fn environment(&self, base_dir: Option<&FsPath>) -> Result<Environment> {
        let representation = match &self.environment {
            EnvSpec::Primitives(p) => Representation::Primitives(p.clone()),
            EnvSpec::VoxelFile(file) => {
                let path = match base_dir {
                    Some(dir) => dir.join(file),
                    None => file.into(),
                };
                let reader = std::io::BufReader::new(std::fs::File::open(path)?);
                Representation::Grid(VoxelGrid::read_vox(reader)?)
            }
        };
        Environment::new(self.bounds, representation, self.params.clearance)
    }

    pub fn primitives(&self) -> &[Primitive] {
        match &self.environment {
            EnvSpec::Primitives(p) => p,
            EnvSpec::VoxelFile(_) => &[],
        }
    }

    /// Start and goal are free, and reference paths connect them, are
    /// collision-free and pairwise non-deformable.
    pub fn validate(&self, env: &Environment) -> Result<()> {
        self.params.validate()?;
        for (what, q) in [("start", &self.start), ("goal", &self.goal)] {
            if !env.is_free(q) {
                return Err(Error::BadSpec(format!("{what} {q:?} is not free")));
            }
        }
        let Some(refs) = &self.reference_paths else {
            return Ok(());
        };
        let dd = self.params.delta_d;
        for (i, p) in refs.iter().enumerate() {
            if (p.first() - self.start).norm() > 1e-9 || (p.last() - self.goal).norm() > 1e-9 {
                return Err(Error::BadSpec(format!(
                    "reference path {i} does not join start and goal"
                )));
            }
            if !p
                .waypoints()
                .windows(2)
                .all(|w| env.segment_free(&w[0], &w[1], dd))
            {
                return Err(Error::BadSpec(format!(
                    "reference path {i} is in collision"
                )));
            }
            for (j, q) in refs[..i].iter().enumerate() {
                if uvd_deformable(env, p, q, dd)? {
                    return Err(Error::BadSpec(format!(
                        "reference paths {j} and {i} are deformable"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Scene family accepted by [`generate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Window counts per wall slot, e.g. `1-3-1` or `1s-2-1s`.
    Windows(String),
    /// `count` square poles on a near-square grid, `spacing` meters apart
    /// (`None` spreads them evenly).
    Poles {
        count: usize,
        spacing: Option<f64>,
    },
    Building,
}

impl std::str::FromStr for Family {
    type Err = Error;

    /// `windows:1-3-1` (or just `1-3-1`), `poles`, `poles:9`,
    /// `poles:9:1.5`, `building`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let head = parts.next().unwrap_or_default();
        let rest: Vec<&str> = parts.collect();
        let bad = || Error::BadSpec(format!("unknown scene family {s:?}"));
        match head {
            "windows" if rest.len() == 1 => Ok(Family::Windows(rest[0].to_string())),
            "poles" if rest.len() <= 2 => {
                let count = match rest.first() {
                    Some(c) => c.parse().map_err(|_| bad())?,
                    None => 16,
                };
                let spacing = match rest.get(1) {
                    Some(v) => Some(v.parse().map_err(|_| bad())?),
                    None => None,
                };
                Ok(Family::Poles { count, spacing })
            }
            "building" if rest.is_empty() => Ok(Family::Building),
            _ if rest.is_empty() && head.contains('-') => Ok(Family::Windows(head.to_string())),
            _ => Err(bad()),
        }
    }
}

pub const WINDOWS_SIZE: [f64; 3] = [27.0, 26.7, 8.0];
pub const POLES_SIZE: [f64; 3] = [10.0, 10.0, 2.8];
pub const BUILDING_SIZE: [f64; 3] = [30.0, 20.0, 6.3];

const WALL_THICKNESS: f64 = 0.3;
const WINDOW_WIDTH: f64 = 2.5;
const POLE_WIDTH: f64 = 0.5;
/// Windows layout in meters on the default 27 m long map, scaled with the
/// map length: start and goal inset from the ends, and the largest spacing
/// between neighbouring wall slots.
const WINDOWS_START_INSET: f64 = 7.0;
const WINDOWS_WALL_PITCH: f64 = 6.0;
/// Windows on a wall are spaced at this fraction of an even spread over the
/// wall.
const WINDOW_SPREAD: f64 = 0.9;
/// Start and goal height as a fraction of the wall width, slightly off the
/// centre line so that mirror-image windows give routes of unequal length.
const START_Y: f64 = 0.47;

fn origin_bounds(size: [f64; 3]) -> Bounds {
    Bounds::new(Point::origin(), Point::new(size[0], size[1], size[2]))
        .expect("preset sizes are positive")
}

/// Builds a scene of the given family inside `dims` (the family's default
/// map size when `None`).
pub fn generate(family: &Family, dims: Option<Bounds>) -> Result<Scenario> {
    match family {
        Family::Windows(spec) => windows(spec, dims.unwrap_or_else(|| origin_bounds(WINDOWS_SIZE))),
        Family::Poles { count, spacing } => poles(
            *count,
            *spacing,
            dims.unwrap_or_else(|| origin_bounds(POLES_SIZE)),
        ),
        Family::Building => building(dims.unwrap_or_else(|| origin_bounds(BUILDING_SIZE))),
    }
}

/// One parsed wall slot of a windows spec.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Slot {
    windows: usize,
    side: bool,
}

fn parse_windows(spec: &str) -> Result<Vec<Slot>> {
    let bad = || {
        Error::BadSpec(format!(
            "windows spec {spec:?} must look like 1-3-1 or 1s-2-1s"
        ))
    };
    let slots = spec
        .split('-')
        .map(|tok| {
            let (digits, side) = match tok.strip_suffix('s') {
                Some(d) => (d, true),
                None => (tok, false),
            };
            let windows: usize = digits.parse().map_err(|_| bad())?;
            if windows > 9 || (side && windows == 0) {
                return Err(bad());
            }
            Ok(Slot { windows, side })
        })
        .collect::<Result<Vec<_>>>()?;
    if slots.is_empty() || slots.len() > 5 || slots.iter().all(|s| s.windows == 0) {
        return Err(bad());
    }
    Ok(slots)
}

/// Window centres along y for each wall slot, evenly spaced about the wall
/// centre. Side-marked walls are pushed off centre by half their window
/// spacing, alternating direction.
fn window_centres(slots: &[Slot], y0: f64, width: f64) -> Vec<Vec<f64>> {
    let mut flip = 1.0;
    slots
        .iter()
        .map(|s| {
            let pitch = WINDOW_SPREAD * width / (s.windows + 1) as f64;
            let y0 = y0 + (width - pitch * (s.windows + 1) as f64) / 2.0;
            let shift = if s.side {
                let v = flip * pitch / 2.0;
                flip = -flip;
                v
            } else {
                0.0
            };
            (1..=s.windows)
                .map(|j| y0 + j as f64 * pitch + shift)
                .collect()
        })
        .collect()
}

fn windows(spec: &str, bounds: Bounds) -> Result<Scenario> {
    let slots = parse_windows(spec)?;
    let (lo, hi) = (bounds.min_corner, bounds.max_corner);
    let size = bounds.size();
    let z = lo.z + size.z / 2.0;
    let centres = window_centres(&slots, lo.y, size.y);
    // walls fill the middle of the map and keep a meter from start and goal
    let scale = size.x / WINDOWS_SIZE[0];
    let inset = WINDOWS_START_INSET * scale;
    let span = size.x - 2.0 * inset - scale;
    let pitch = match slots.len() {
        1 => 0.0,
        n => (WINDOWS_WALL_PITCH * scale).min(span / (n - 1) as f64),
    };
    let params = PlannerParams {
        num_samples: 500,
        k: 14,
        max_clusters: 9,
        kappa_p: 1.8,
        kappa_s: 1.5,
        delta_d: 0.1,
        clearance: 0.3,
        planar: true,
        ..PlannerParams::default()
    };

    let mut walls = Vec::new();
    let mut prims = Vec::new();
    for (i, (slot, ys)) in slots.iter().zip(&centres).enumerate() {
        if slot.windows == 0 {
            continue;
        }
        let x = lo.x + size.x / 2.0 + pitch * (i as f64 - (slots.len() as f64 - 1.0) / 2.0);
        let cutouts: Vec<Window> = ys
            .iter()
            .map(|&y| Window {
                min: [y - WINDOW_WIDTH / 2.0, lo.z + 0.2 * size.z],
                max: [y + WINDOW_WIDTH / 2.0, lo.z + 0.8 * size.z],
            })
            .collect();
        prims.push(Primitive::WallWithWindows(Wall::new(
            0,
            x,
            WALL_THICKNESS,
            [lo.y, lo.z],
            [hi.y, hi.z],
            cutouts,
        )?));
        walls.push((x, ys.clone()));
    }

    let start = Point::new(lo.x + inset, lo.y + START_Y * size.y, z);
    let goal = Point::new(hi.x - inset, lo.y + START_Y * size.y, z);
    let env = Environment::with_primitives(bounds, prims.clone(), params.clearance)?;
    let references = window_references(&env, &start, &goal, &walls, params.delta_d)?;
    let scenario = Scenario {
        name: format!("windows {spec}"),
        bounds,
        environment: EnvSpec::Primitives(prims),
        start,
        goal,
        params,
        reference_paths: Some(references),
    };
    scenario.validate(&env)?;
    Ok(scenario)
}

/// One taut path per choice of a window on every wall, sorted by length.
fn window_references(
    env: &Environment,
    start: &Point,
    goal: &Point,
    walls: &[(f64, Vec<f64>)],
    delta_d: f64,
) -> Result<Vec<Path>> {
    let offset = WALL_THICKNESS / 2.0 + env.clearance() + 0.05;
    let mut combos: Vec<Vec<f64>> = vec![vec![]];
    for (_, ys) in walls {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                ys.iter().map(move |&y| {
                    let mut c = c.clone();
                    c.push(y);
                    c
                })
            })
            .collect();
    }
    let mut paths = combos
        .into_iter()
        .map(|ys| {
            let mut pts = vec![*start];
            for ((x, _), y) in walls.iter().zip(ys) {
                pts.push(Point::new(x - offset, y, start.z));
                pts.push(Point::new(x + offset, y, start.z));
            }
            pts.push(*goal);
            Ok(shorten_path(env, &Path::new(pts)?, delta_d))
        })
        .collect::<Result<Vec<_>>>()?;
    paths.sort_by(|a, b| a.length().total_cmp(&b.length()));
    Ok(paths)
}

fn poles(count: usize, spacing: Option<f64>, bounds: Bounds) -> Result<Scenario> {
    if count == 0 {
        return Err(Error::BadSpec(
            "poles family needs at least one pole".into(),
        ));
    }
    let (lo, hi) = (bounds.min_corner, bounds.max_corner);
    let size = bounds.size();
    let cols = (count as f64).sqrt().ceil() as usize;
    let rows = count.div_ceil(cols);
    let pitch = |n: usize, extent: f64| spacing.unwrap_or(extent / (n + 1) as f64);
    let (px, py) = (pitch(cols, size.x), pitch(rows, size.y));
    // grid centred in the map
    let x0 = lo.x + (size.x - px * (cols - 1) as f64) / 2.0;
    let y0 = lo.y + (size.y - py * (rows - 1) as f64) / 2.0;
    let half = POLE_WIDTH / 2.0;
    let mut prims = Vec::with_capacity(count);
    for i in 0..count {
        let (c, r) = (i % cols, i / cols);
        let (x, y) = (x0 + c as f64 * px, y0 + r as f64 * py);
        prims.push(Primitive::aabb(
            Point::new(x - half, y - half, lo.z),
            Point::new(x + half, y + half, hi.z),
        )?);
    }
    let z = lo.z + size.z / 2.0;
    let y_mid = lo.y + size.y / 2.0;
    let params = PlannerParams {
        num_samples: 300,
        k: 14,
        max_clusters: 20,
        kappa_p: 1.6,
        kappa_s: 1.2,
        delta_d: 0.2,
        clearance: 0.3,
        planar: true,
        ..PlannerParams::default()
    };
    let scenario = Scenario {
        name: format!("poles {count}"),
        bounds,
        environment: EnvSpec::Primitives(prims),
        start: Point::new(lo.x + 0.5, y_mid, z),
        goal: Point::new(hi.x - 0.5, y_mid, z),
        params,
        reference_paths: None,
    };
    scenario.validate(&scenario.environment(None)?)?;
    Ok(scenario)
}

/// Two storeys split by a slab with two stairwell openings; three
/// full-height interior walls with doors below and windows above.
fn building(bounds: Bounds) -> Result<Scenario> {
    let (lo, hi) = (bounds.min_corner, bounds.max_corner);
    let s = bounds.size();
    let t = 0.2;
    // fractions of the map size, so any dims give the same layout
    let at =
        |fx: f64, fy: f64, fz: f64| Point::new(lo.x + fx * s.x, lo.y + fy * s.y, lo.z + fz * s.z);
    let level = lo.z + s.z / 2.0;
    let door = |u0: f64, u1: f64| Window {
        min: [u0, lo.z],
        max: [u1, lo.z + 0.35 * s.z],
    };
    let window = |u0: f64, u1: f64| Window {
        min: [u0, lo.z + 0.65 * s.z],
        max: [u1, lo.z + 0.87 * s.z],
    };
    let span = |a: f64, b: f64, lo: f64, ext: f64| (lo + a * ext, lo + b * ext);

    let mut prims = Vec::new();
    let holes = [(0.12, 0.7), (0.8, 0.2)]
        .iter()
        .map(|&(fx, fy)| {
            let (x0, x1) = span(fx, fx + 0.09, lo.x, s.x);
            let (y0, y1) = span(fy, fy + 0.13, lo.y, s.y);
            Window {
                min: [x0, y0],
                max: [x1, y1],
            }
        })
        .collect();
    prims.push(Primitive::WallWithWindows(Wall::new(
        2,
        level,
        t,
        [lo.x, lo.y],
        [hi.x, hi.y],
        holes,
    )?));

    for (fx, d, w) in [
        (1.0 / 3.0, (0.15, 0.23), (0.7, 0.78)),
        (2.0 / 3.0, (0.75, 0.83), (0.25, 0.33)),
    ] {
        let (d0, d1) = span(d.0, d.1, lo.y, s.y);
        let (w0, w1) = span(w.0, w.1, lo.y, s.y);
        prims.push(Primitive::WallWithWindows(Wall::new(
            0,
            lo.x + fx * s.x,
            t,
            [lo.y, lo.z],
            [hi.y, hi.z],
            vec![door(d0, d1), window(w0, w1)],
        )?));
    }
    let mut openings = Vec::new();
    for f in [0.13, 0.5, 0.85] {
        let (a, b) = span(f, f + 0.05, lo.x, s.x);
        openings.push(door(a, b));
    }
    for f in [0.23, 0.73] {
        let (a, b) = span(f, f + 0.05, lo.x, s.x);
        openings.push(window(a, b));
    }
    prims.push(Primitive::WallWithWindows(Wall::new(
        1,
        lo.y + 0.5 * s.y,
        t,
        [lo.x, lo.z],
        [hi.x, hi.z],
        openings,
    )?));

    let params = PlannerParams {
        num_samples: 1000,
        k: 14,
        max_clusters: 20,
        kappa_p: 1.8,
        kappa_s: 1.5,
        delta_d: 0.2,
        clearance: 0.2,
        planar: false,
        ..PlannerParams::default()
    };
    let scenario = Scenario {
        name: "building".into(),
        bounds,
        environment: EnvSpec::Primitives(prims),
        start: at(0.07, 0.1, 0.2),
        goal: at(0.93, 0.9, 0.75),
        params,
        reference_paths: None,
    };
    scenario.validate(&scenario.environment(None)?)?;
    Ok(scenario)
}

/// Start and goal sit below the middle of the 6 m tall canvas of the
/// oracle scenes.
const ORACLE_START_Y: f64 = 2.6;

/// Small planar scenes with at most three obstacles whose classes the
/// oracle can enumerate exhaustively at a 1 m lattice pitch. Every corridor
/// is wide enough to hold lattice points, and the classes kept by the 1.2
/// pruning ratio are at most 1.14 times the shortest while the rest exceed
/// 1.2 by a clear gap.
pub fn oracle_scenes() -> Vec<Scenario> {
    let disk = |x: f64, y: f64, r: f64| {
        Primitive::sphere(Point::new(x, y, 1.0), r).expect("positive radius")
    };
    let block = |x0: f64, y0: f64, x1: f64, y1: f64| {
        Primitive::aabb(Point::new(x0, y0, 0.0), Point::new(x1, y1, 2.0)).expect("ordered corners")
    };
    let layouts: Vec<(&str, Vec<Primitive>)> = vec![
        ("empty", vec![]),
        ("one disk", vec![disk(5.0, 3.0, 1.0)]),
        ("offset disk", vec![disk(5.0, 3.6, 0.9)]),
        ("one block", vec![block(4.3, 2.1, 5.7, 4.1)]),
        ("two disks", vec![disk(3.5, 2.0, 0.8), disk(6.5, 3.4, 0.8)]),
        (
            "stacked disks",
            vec![disk(5.0, 0.7, 0.7), disk(5.0, 4.0, 0.5)],
        ),
        (
            "disk and block",
            vec![disk(3.5, 2.0, 0.8), block(6.0, 2.8, 7.0, 4.0)],
        ),
        (
            "two blocks",
            vec![block(3.0, 1.4, 4.0, 2.7), block(6.0, 2.6, 7.0, 3.9)],
        ),
        (
            "disks and block",
            vec![
                disk(2.8, 2.0, 0.6),
                block(4.6, 3.0, 5.4, 4.0),
                disk(7.2, 2.0, 0.6),
            ],
        ),
        (
            "three blocks",
            vec![
                block(2.6, 2.3, 3.4, 3.4),
                block(4.6, 0.0, 5.4, 1.9),
                block(6.6, 3.1, 7.4, 6.0),
            ],
        ),
    ];
    let bounds =
        Bounds::new(Point::new(0.0, 0.0, 0.0), Point::new(10.0, 6.0, 2.0)).expect("valid bounds");
    layouts
        .into_iter()
        .map(|(name, prims)| Scenario {
            name: name.to_string(),
            bounds,
            environment: EnvSpec::Primitives(prims),
            start: Point::new(0.6, ORACLE_START_Y, 1.0),
            goal: Point::new(9.4, ORACLE_START_Y, 1.0),
            params: PlannerParams {
                num_samples: 300,
                k: 14,
                max_clusters: 20,
                kappa_p: 2.0,
                kappa_s: 1.2,
                delta_d: 0.1,
                clearance: 0.2,
                planar: true,
                ..PlannerParams::default()
            },
            reference_paths: None,
        })
        .collect()
}
