//! Top-down SVG drawings of a scene, an optional roadmap and a path set.

use std::fmt::Write as _;

use crate::env::{Environment, Primitive, Representation};
use crate::roadmap::Roadmap;
use crate::topology::Path;
use crate::Point;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
    "#bcbd22", "#7f7f7f",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgOptions {
    /// Draw only obstacles cut by the plane `z = slice_z`; all of them when
    /// `None`.
    pub slice_z: Option<f64>,
    pub show_roadmap: bool,
    /// Pixels per meter.
    pub scale: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self {
            slice_z: None,
            show_roadmap: false,
            scale: 30.0,
        }
    }
}

struct Canvas {
    out: String,
    x0: f64,
    y1: f64,
    scale: f64,
}

impl Canvas {
    fn px(&self, q: &Point) -> (f64, f64) {
        ((q.x - self.x0) * self.scale, (self.y1 - q.y) * self.scale)
    }

    fn rect(&mut self, min: &Point, max: &Point, style: &str) {
        let (x, y) = self.px(&Point::new(min.x, max.y, 0.0));
        let (w, h) = ((max.x - min.x) * self.scale, (max.y - min.y) * self.scale);
        writeln!(
            self.out,
            r#"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" {style}/>"#
        )
        .unwrap();
    }

    fn circle(&mut self, c: &Point, r: f64, style: &str) {
        let (x, y) = self.px(c);
        writeln!(
            self.out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="{:.2}" {style}/>"#,
            r * self.scale
        )
        .unwrap();
    }

    fn polyline(&mut self, pts: &[Point], style: &str) {
        let coords: Vec<String> = pts
            .iter()
            .map(|q| {
                let (x, y) = self.px(q);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        writeln!(
            self.out,
            r#"<polyline points="{}" fill="none" {style}/>"#,
            coords.join(" ")
        )
        .unwrap();
    }
}

const OBSTACLE: &str = r##"fill="#555" fill-opacity="0.8" stroke="#222" stroke-width="1""##;

fn cut(min: f64, max: f64, z: Option<f64>) -> bool {
    z.map_or(true, |z| z >= min && z <= max)
}

/// Obstacles in grey, roadmap edges in light grey, paths in distinct
/// colours, start in green and goal in red.
pub fn render(
    env: &Environment,
    start: &Point,
    goal: &Point,
    paths: &[Path],
    roadmap: Option<&Roadmap>,
    opts: &SvgOptions,
) -> String {
    let b = env.bounds();
    let size = b.size();
    let (w, h) = (size.x * opts.scale, size.y * opts.scale);
    let mut c = Canvas {
        out: String::new(),
        x0: b.min_corner.x,
        y1: b.max_corner.y,
        scale: opts.scale,
    };
    writeln!(
        c.out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.2} {h:.2}">"#
    )
    .unwrap();
    c.rect(
        &b.min_corner,
        &b.max_corner,
        r##"fill="white" stroke="black" stroke-width="2""##,
    );

    match env.representation() {
        Representation::Primitives(prims) => {
            for p in prims {
                match p {
                    Primitive::Sphere { center, radius } => {
                        let r = match opts.slice_z {
                            Some(z) if (z - center.z).abs() < *radius => {
                                (radius * radius - (z - center.z).powi(2)).sqrt()
                            }
                            Some(_) => continue,
                            None => *radius,
                        };
                        c.circle(center, r, OBSTACLE);
                    }
                    Primitive::AxisAlignedBox { min, max } => {
                        if cut(min.z, max.z, opts.slice_z) {
                            c.rect(min, max, OBSTACLE);
                        }
                    }
                    Primitive::WallWithWindows(wall) => {
                        for piece in wall.pieces() {
                            if cut(piece.min.z, piece.max.z, opts.slice_z) {
                                c.rect(&piece.min, &piece.max, OBSTACLE);
                            }
                        }
                    }
                }
            }
        }
        Representation::Grid(grid) => {
            let [nx, ny, nz] = grid.dims;
            let r = grid.resolution;
            for j in 0..ny {
                for i in 0..nx {
                    let occupied = (0..nz).any(|k| {
                        let z = grid.cell_center(i, j, k).z;
                        grid.occupancy[grid.index(i, j, k)]
                            && cut(z - r / 2.0, z + r / 2.0, opts.slice_z)
                    });
                    if occupied {
                        let lo = grid.cell_center(i, j, 0)
                            - nalgebra::Vector3::new(r / 2.0, r / 2.0, 0.0);
                        let hi = lo + nalgebra::Vector3::new(r, r, 0.0);
                        c.rect(&lo, &hi, r##"fill="#555" fill-opacity="0.8""##);
                    }
                }
            }
        }
    }

    if let (Some(map), true) = (roadmap, opts.show_roadmap) {
        for (u, v, _) in map.edges() {
            c.polyline(
                &[map.nodes[u], map.nodes[v]],
                r##"stroke="#bbb" stroke-width="0.5""##,
            );
        }
        for q in &map.nodes {
            c.circle(q, 1.2 / opts.scale, r##"fill="#999""##);
        }
    }

    for (i, p) in paths.iter().enumerate() {
        let style = format!(
            r#"stroke="{}" stroke-width="2.5" stroke-linejoin="round""#,
            PALETTE[i % PALETTE.len()]
        );
        c.polyline(p.waypoints(), &style);
    }
    c.circle(
        start,
        6.0 / opts.scale,
        r##"fill="#2ca02c" stroke="black""##,
    );
    c.circle(goal, 6.0 / opts.scale, r##"fill="#d62728" stroke="black""##);
    c.out.push_str("</svg>\n");
    c.out
}
