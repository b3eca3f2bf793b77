//! SVG rendering of sampled grids and traced nodal curves.
//!
//! Sphere grids are drawn equirectangularly (azimuth across, north pole on
//! the top edge); disc grids are drawn in the plane.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use super::grid::{SampledGrid, Surface};
use super::topology::{edge_crossing, Curves};

/// A point marker in surface coordinates: `(φ, θ)` on the sphere, `(x, y)`
/// on the disc. Positive markers are filled, negative ones hollow.
#[derive(Debug, Clone, Copy)]
pub struct Marker {
    pub at: [f64; 2],
    pub positive: bool,
}

/// A set of curves traced on a grid, drawn with one stroke style.
pub struct Layer<'a> {
    pub grid: &'a SampledGrid,
    pub curves: &'a Curves,
    pub stroke: &'a str,
    pub dashed: bool,
}

const POS_TINT: &str = "#f4d9cf";
const NEG_TINT: &str = "#d5e3f2";

struct Frame {
    surface: Surface,
    width: f64,
    height: f64,
    pad: f64,
}

impl Frame {
    fn new(surface: Surface) -> Self {
        match surface {
            Surface::Sphere => Frame { surface, width: 800.0, height: 400.0, pad: 20.0 },
            Surface::Disc { .. } => Frame { surface, width: 600.0, height: 600.0, pad: 20.0 },
        }
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        match self.surface {
            Surface::Sphere => (self.pad + p[0] / TAU * self.width, self.pad + p[1] / PI * self.height),
            Surface::Disc { radius } => {
                let s = 0.5 * self.width / radius;
                (self.pad + 0.5 * self.width + p[0] * s, self.pad + 0.5 * self.height - p[1] * s)
            }
        }
    }
}

fn nearest_sign(grid: &SampledGrid, p: [f64; 2]) -> Option<bool> {
    let (i, phi) = match grid.surface {
        Surface::Sphere => ((p[1] / PI * (grid.rows - 1) as f64).round() as usize, p[0]),
        Surface::Disc { radius } => {
            let r = p[0].hypot(p[1]);
            if r > radius {
                return None;
            }
            let phi = p[1].atan2(p[0]).rem_euclid(TAU);
            ((r / radius * (grid.rows - 1) as f64).round() as usize, phi)
        }
    };
    let j = ((phi / TAU * grid.cols as f64).floor() as usize) % grid.cols;
    let v = grid.idx(i.min(grid.rows - 1), j);
    Some(grid.values[v] > 0.0)
}

/// Render the grid's sign tint, the curve layers, markers and a caption.
pub fn render(tint: &SampledGrid, layers: &[Layer<'_>], markers: &[Marker], caption: &str) -> String {
    let frame = Frame::new(tint.surface);
    let (w, h, pad) = (frame.width, frame.height, frame.pad);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        w + 2.0 * pad,
        h + 2.0 * pad + 30.0,
        w + 2.0 * pad,
        h + 2.0 * pad + 30.0
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);

    // coarse sign raster, horizontal runs merged
    let (nx, ny) = match tint.surface {
        Surface::Sphere => (200usize, 100usize),
        Surface::Disc { .. } => (150, 150),
    };
    let (cw, ch) = (w / nx as f64, h / ny as f64);
    let _ = writeln!(out, r#"<g stroke="none">"#);
    for y in 0..ny {
        let mut run: Option<(usize, bool)> = None;
        let flush = |out: &mut String, start: usize, end: usize, s: bool| {
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                pad + start as f64 * cw,
                pad + y as f64 * ch,
                (end - start) as f64 * cw + 0.3,
                ch + 0.3,
                if s { POS_TINT } else { NEG_TINT }
            );
        };
        for x in 0..=nx {
            let sign = if x == nx {
                None
            } else {
                let (fx, fy) = ((x as f64 + 0.5) / nx as f64, (y as f64 + 0.5) / ny as f64);
                let p = match tint.surface {
                    Surface::Sphere => [fx * TAU, fy * PI],
                    Surface::Disc { radius } => [(2.0 * fx - 1.0) * radius, (1.0 - 2.0 * fy) * radius],
                };
                nearest_sign(tint, p)
            };
            match (run, sign) {
                (Some((_, s)), Some(t)) if s == t => {}
                (prev, next) => {
                    if let Some((start, s)) = prev {
                        flush(&mut out, start, x, s);
                    }
                    run = next.map(|t| (x, t));
                }
            }
        }
    }
    let _ = writeln!(out, "</g>");

    if let Surface::Disc { .. } = tint.surface {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="{:.2}" fill="none" stroke="gray"/>"#,
            pad + 0.5 * w,
            pad + 0.5 * h,
            0.5 * w
        );
    } else {
        let _ = writeln!(
            out,
            r#"<rect x="{pad}" y="{pad}" width="{w}" height="{h}" fill="none" stroke="gray"/>"#
        );
    }

    for layer in layers {
        let dash = if layer.dashed { r#" stroke-dasharray="4 3""# } else { "" };
        for curve in &layer.curves.curves {
            let mut d = String::new();
            let set: std::collections::HashSet<_> = curve.edges.iter().copied().collect();
            for &(a, b) in &layer.curves.segments {
                if !set.contains(&a) {
                    continue;
                }
                let pa = crossing_point(layer.grid, a);
                let pb = crossing_point(layer.grid, b);
                let (xa, ya) = frame.map(pa);
                let (xb, yb) = frame.map(pb);
                if (xa - xb).abs() > 0.5 * w {
                    continue;
                }
                let _ = write!(d, "M{xa:.2} {ya:.2}L{xb:.2} {yb:.2}");
            }
            let _ = writeln!(
                out,
                r#"<path d="{d}" fill="none" stroke="{}" stroke-width="1.2"{dash}/>"#,
                layer.stroke
            );
        }
    }

    for m in markers {
        let (x, y) = frame.map(m.at);
        let fill = if m.positive { "black" } else { "white" };
        let _ = writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{fill}" stroke="black"/>"#
        );
    }

    let _ = writeln!(
        out,
        r#"<text x="{pad}" y="{:.2}" font-family="sans-serif" font-size="13">{}</text>"#,
        h + 2.0 * pad + 15.0,
        escape(caption)
    );
    out.push_str("</svg>\n");
    out
}

fn crossing_point(grid: &SampledGrid, e: super::EdgeId) -> [f64; 2] {
    let (i, j) = edge_crossing(grid, e);
    grid.position(i, j)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FnSphere;
    use crate::nodal::{sample, trace_curves, FieldRef};

    #[test]
    fn renders_paths_and_markers() {
        let f = FnSphere(|p: [f64; 3]| p[2]);
        let g = sample(FieldRef::Sphere(&f), 64).unwrap();
        let c = trace_curves(&g);
        let svg = render(
            &g,
            &[Layer { grid: &g, curves: &c, stroke: "black", dashed: false }],
            &[Marker { at: [1.0, 1.0], positive: true }],
            "poles <identified>",
        );
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<path").count(), 1);
        assert!(svg.contains("&lt;identified&gt;"));
        // deterministic
        let again = render(&g, &[Layer { grid: &g, curves: &c, stroke: "black", dashed: false }], &[], "");
        assert_eq!(again, render(&g, &[Layer { grid: &g, curves: &c, stroke: "black", dashed: false }], &[], ""));
    }
}
