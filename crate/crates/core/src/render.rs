//! SVG and CSV renderings of weight grids.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lattice::{minimum_weight, NodeCoord, TrianglePlacement, WeightGrid};
use crate::modular::is_prime;

/// Which nodes of the grid are drawn.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Rectangle,
    /// Nodes within graph distance `radius` of any node in `center`.
    Hexagonal {
        radius: i64,
        center: Vec<NodeCoord>,
    },
}

impl Shape {
    /// Hexagonal patch around the anchor triangle `(0,0), (1,0), (0,1)`.
    pub fn hex_around_anchor(radius: i64) -> Shape {
        Shape::Hexagonal { radius, center: TrianglePlacement::ANCHOR.vertices().to_vec() }
    }

    /// Hexagonal patch around the minimum-weight node(s) of the grid's tiling.
    pub fn hex_around_center(grid: &WeightGrid, radius: i64) -> Result<Shape> {
        Ok(Shape::Hexagonal { radius, center: minimum_weight(&grid.base())?.argmin })
    }

    fn includes(&self, v: NodeCoord) -> bool {
        match self {
            Shape::Rectangle => true,
            Shape::Hexagonal { radius, center } => center.iter().any(|c| c.distance(v) <= *radius),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coloring {
    ValueGradient,
    Residue { p: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Palette {
    /// Evenly spaced hues for residues, a warm two-stop ramp for values.
    Default,
    Gradient {
        low: String,
        high: String,
    },
    /// One color per residue class `0..p`.
    Residues(Vec<String>),
}

#[derive(Clone, Debug)]
pub struct RenderSpec {
    pub grid: WeightGrid,
    pub shape: Shape,
    pub coloring: Coloring,
    pub show_labels: bool,
    /// Circle radius in lattice units.
    pub circle_radius: f64,
    /// Pixels per lattice unit.
    pub unit: f64,
    pub palette: Palette,
}

impl RenderSpec {
    pub fn new(grid: WeightGrid) -> Self {
        RenderSpec {
            grid,
            shape: Shape::Rectangle,
            coloring: Coloring::ValueGradient,
            show_labels: false,
            circle_radius: 0.42,
            unit: 36.0,
            palette: Palette::Default,
        }
    }

    /// Nodes drawn by this spec, ordered by `(n, m)`.
    pub fn selected_nodes(&self) -> Vec<(NodeCoord, i64)> {
        self.grid.iter().filter(|(v, _)| self.shape.includes(*v)).collect()
    }
}

type Rgb = (u8, u8, u8);

fn parse_color(s: &str) -> Result<Rgb> {
    let hex = s
        .strip_prefix('#')
        .filter(|h| h.len() == 6 && h.chars().all(|c| c.is_ascii_hexdigit()))
        .ok_or_else(|| Error::invalid(format!("invalid color {s:?} (expected #rrggbb)")))?;
    let byte = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).expect("validated hex");
    Ok((byte(0), byte(2), byte(4)))
}

fn hex(c: Rgb) -> String {
    format!("#{:02x}{:02x}{:02x}", c.0, c.1, c.2)
}

fn hsl(h: f64, s: f64, l: f64) -> Rgb {
    let c = (1.0 - (2.0 * l - 1.0).abs()) * s;
    let hp = h / 60.0;
    let x = c * (1.0 - (hp % 2.0 - 1.0).abs());
    let (r, g, b) = match hp as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = l - c / 2.0;
    let to = |v: f64| ((v + m) * 255.0).round().clamp(0.0, 255.0) as u8;
    (to(r), to(g), to(b))
}

fn lerp(a: Rgb, b: Rgb, t: f64) -> Rgb {
    let mix = |x: u8, y: u8| (x as f64 + (y as f64 - x as f64) * t).round() as u8;
    (mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

enum Fill {
    Gradient { low: Rgb, high: Rgb, min: i64, max: i64 },
    Residue { p: u64, colors: Vec<Rgb> },
}

impl Fill {
    fn color(&self, w: i64) -> Rgb {
        match self {
            Fill::Gradient { low, high, min, max } => {
                let t = if max > min { (w - min) as f64 / (max - min) as f64 } else { 0.0 };
                lerp(*low, *high, t)
            }
            Fill::Residue { p, colors } => colors[w.rem_euclid(*p as i64) as usize],
        }
    }
}

fn build_fill(spec: &RenderSpec, nodes: &[(NodeCoord, i64)]) -> Result<Fill> {
    match (spec.coloring, &spec.palette) {
        (Coloring::ValueGradient, Palette::Residues(_)) => {
            Err(Error::invalid("a residue palette needs residue coloring"))
        }
        (Coloring::ValueGradient, palette) => {
            let (low, high) = match palette {
                Palette::Gradient { low, high } => (parse_color(low)?, parse_color(high)?),
                _ => ((0xff, 0xf4, 0xd6), (0xc0, 0x39, 0x2b)),
            };
            let min = nodes.iter().map(|n| n.1).min().unwrap_or(0);
            let max = nodes.iter().map(|n| n.1).max().unwrap_or(0);
            Ok(Fill::Gradient { low, high, min, max })
        }
        (Coloring::Residue { p }, palette) => {
            if !is_prime(p) {
                return Err(Error::invalid(format!("residue coloring needs a prime modulus, got {p}")));
            }
            let colors = match palette {
                Palette::Residues(list) if list.len() as u64 == p => {
                    list.iter().map(|c| parse_color(c)).collect::<Result<Vec<_>>>()?
                }
                Palette::Residues(list) => {
                    return Err(Error::invalid(format!("palette has {} colors for modulus {p}", list.len())))
                }
                Palette::Gradient { .. } => return Err(Error::invalid("a gradient palette needs value coloring")),
                Palette::Default => (0..p).map(|l| hsl(360.0 * l as f64 / p as f64, 0.65, 0.55)).collect(),
            };
            Ok(Fill::Residue { p, colors })
        }
    }
}

fn text_color(fill: Rgb) -> &'static str {
    let luma = 0.299 * fill.0 as f64 + 0.587 * fill.1 as f64 + 0.114 * fill.2 as f64;
    if luma > 140.0 {
        "#1a1a1a"
    } else {
        "#ffffff"
    }
}

/// Renders the selected nodes as an SVG 1.1 document.
///
/// Node `(m, n)` is drawn at `(m + n/2, -n·√3/2)` lattice units (y grows
/// upward in the plane, downward in SVG). Output depends only on the spec.
pub fn to_svg(spec: &RenderSpec) -> Result<String> {
    let nodes = spec.selected_nodes();
    if nodes.is_empty() {
        return Err(Error::invalid("nothing to render: the selection is empty"));
    }
    if !(spec.unit > 0.0 && spec.circle_radius > 0.0) {
        return Err(Error::invalid("unit and circle radius must be positive"));
    }
    let fill = build_fill(spec, &nodes)?;

    let points: Vec<(f64, f64)> = nodes
        .iter()
        .map(|(v, _)| {
            let (x, y) = v.to_plane();
            (x * spec.unit, -y * spec.unit)
        })
        .collect();
    let margin = spec.unit;
    let min_x = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min) - margin;
    let max_x = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max) + margin;
    let min_y = points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min) - margin;
    let max_y = points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max) + margin;

    let legend_width = match fill {
        Fill::Residue { .. } => 5.0 * spec.unit,
        Fill::Gradient { .. } => 0.0,
    };
    let width = max_x - min_x + legend_width;
    let height = max_y - min_y;
    let r = spec.circle_radius * spec.unit;
    let font = spec.unit * 0.34;

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.2}" height="{height:.2}" viewBox="0 0 {width:.2} {height:.2}">"#
    );
    let base = spec.grid.base();
    let _ = writeln!(svg, "<title>tiling of ({}, {}, {}): {} nodes</title>", base.x, base.y, base.z, nodes.len());
    let _ = writeln!(svg, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(svg, r##"<g id="nodes" stroke="#555555" stroke-width="1">"##);
    for ((v, w), (x, y)) in nodes.iter().zip(&points) {
        let _ = writeln!(
            svg,
            r#"<circle cx="{:.2}" cy="{:.2}" r="{r:.2}" fill="{}" data-m="{}" data-n="{}" data-w="{w}"/>"#,
            x - min_x,
            y - min_y,
            hex(fill.color(*w)),
            v.m,
            v.n
        );
    }
    let _ = writeln!(svg, "</g>");

    if spec.show_labels {
        let _ = writeln!(
            svg,
            r#"<g id="labels" font-family="sans-serif" font-size="{font:.2}" text-anchor="middle" dominant-baseline="central">"#
        );
        for ((_, w), (x, y)) in nodes.iter().zip(&points) {
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" fill="{}">{w}</text>"#,
                x - min_x,
                y - min_y,
                text_color(fill.color(*w))
            );
        }
        let _ = writeln!(svg, "</g>");
    }

    if let Fill::Residue { p, colors } = &fill {
        let mut present: BTreeMap<u64, usize> = BTreeMap::new();
        for (_, w) in &nodes {
            *present.entry(w.rem_euclid(*p as i64) as u64).or_default() += 1;
        }
        let x0 = max_x - min_x + spec.unit * 0.5;
        let step = (height - 2.0 * margin).max(spec.unit) / *p as f64;
        let step = step.min(spec.unit * 0.6);
        let _ = writeln!(
            svg,
            r#"<g id="legend" font-family="sans-serif" font-size="{:.2}" dominant-baseline="central">"#,
            step * 0.7
        );
        for (l, color) in colors.iter().enumerate() {
            let y = margin + step * l as f64;
            let count = present.get(&(l as u64)).copied().unwrap_or(0);
            let _ = writeln!(
                svg,
                r#"<rect x="{x0:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="{}" data-class="{l}" data-count="{count}"/>"#,
                step * 0.8,
                step * 0.8,
                hex(*color)
            );
            let _ = writeln!(
                svg,
                r##"<text x="{:.2}" y="{:.2}" fill="#1a1a1a">{l} ({count})</text>"##,
                x0 + step,
                y + step * 0.4
            );
        }
        let _ = writeln!(svg, "</g>");
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

/// CSV with header `m,n,weight`, rows ordered by `(n, m)`.
pub fn to_csv(grid: &WeightGrid) -> String {
    grid.to_csv()
}
