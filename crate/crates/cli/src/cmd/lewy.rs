use std::path::Path;

use num_complex::Complex64;
use nodal_core::bounds::BoundReport;
use nodal_core::combinat::{glue_antipodal, planar_zero_topology, PlanarDiagram};
use nodal_core::field::FnPlane;
use nodal_core::harmonics::{adaptive_lewy, LewyConstruction, LewyOptions};
use nodal_core::nodal::svg::{self, Layer};
use nodal_core::nodal::{sample, trace_curves, FieldRef};
use nodal_core::poly::MonicPolynomial;
use serde_json::json;

use super::{error_body, refine_options};
use crate::config::RunConfig;
use crate::output::{emit, envelope};
use crate::{usage, CliError};

/// Polynomial file: a `roots` or `coefficients` line, then one `re im` pair
/// per line. Coefficients run from the constant term up; the leading 1 is
/// implied. `#` starts a comment.
pub fn parse_polynomial(text: &str) -> Result<MonicPolynomial, String> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let kind = lines.next().ok_or("empty polynomial file")?;
    let mut values = Vec::new();
    for l in lines {
        let parts: Vec<&str> = l.split_whitespace().collect();
        let num = |s: &str| s.parse::<f64>().map_err(|_| format!("bad number {s:?}"));
        let z = match parts.as_slice() {
            [re] => Complex64::new(num(re)?, 0.0),
            [re, im] => Complex64::new(num(re)?, num(im)?),
            _ => return Err(format!("expected `re im`, got {l:?}")),
        };
        values.push(z);
    }
    let p = match kind {
        "roots" => MonicPolynomial::from_roots(&values),
        "coefficients" => MonicPolynomial::new(values),
        _ => return Err(format!("first line must be `roots` or `coefficients`, got {kind:?}")),
    };
    p.map_err(|e| e.to_string())
}

fn plane_svg(p: &MonicPolynomial, d: &PlanarDiagram) -> anyhow::Result<String> {
    let f = FnPlane(|x: f64, y: f64| p.eval(Complex64::new(x, y)).re);
    let grid = sample(FieldRef::Disc(&f, d.radius), d.cols)?;
    let curves = trace_curves(&grid);
    let caption = format!("Re p = 0 on |z| < {:.3}: diagram {}", d.radius, d.diagram);
    Ok(svg::render(&grid, &[Layer { grid: &grid, curves: &curves, stroke: "black", dashed: false }], &[], &caption))
}

fn sphere_svg(c: &LewyConstruction) -> String {
    let grid = &c.refined.grid;
    let curves = trace_curves(grid);
    let caption = format!(
        "lift at t = {:e}: {} components. Top and bottom edges are the poles; all points on each are identified.",
        c.spec.t, c.refined.topology.components
    );
    svg::render(grid, &[Layer { grid, curves: &curves, stroke: "black", dashed: false }], &[], &caption)
}

pub fn run(path: &Path, config: &RunConfig) -> Result<bool, CliError> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return usage(format!("reading {}: {e}", path.display())),
    };
    let p = match parse_polynomial(&text) {
        Ok(p) => p,
        Err(e) => return usage(format!("{}: {e}", path.display())),
    };
    let stem = format!("lewy-{}", path.file_stem().and_then(|s| s.to_str()).unwrap_or("poly"));
    let fail = |e: nodal_core::Error| -> Result<bool, CliError> {
        let report = envelope("lewy", config, false, json!({ "polynomial": p, "diagnostics": error_body(&e) }));
        emit(config, &stem, &report, &[])?;
        Ok(false)
    };
    let planar = match planar_zero_topology(&p) {
        Ok(d) => d,
        Err(e) => return fail(e),
    };
    let glued = glue_antipodal(&planar.diagram);
    let options = LewyOptions { t_start: config.t_start, t_floor: config.t_floor, refine: refine_options(config) };
    let lift = match adaptive_lewy(&p, &options) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let t = &lift.refined.topology;
    let n = p.degree() as u32;
    let bounds = BoundReport::new(n, t.components as u64, t.domains as u64).map_err(anyhow::Error::from)?;
    let matches = t.components == glued.components && t.nesting == glued.region_tree;
    let pass = t.stable && matches && bounds.all_ok();
    let body = json!({
        "polynomial": p,
        "planar": planar,
        "glued": glued,
        "t": lift.spec.t,
        "t_trail": lift.t_trail,
        "topology": t,
        "matches_glue": matches,
        "bounds": bounds,
    });
    let report = envelope("lewy", config, pass, body);
    let svgs = vec![
        (format!("{stem}-plane.svg"), plane_svg(&p, &planar)?),
        (format!("{stem}-sphere.svg"), sphere_svg(&lift)),
    ];
    emit(config, &stem, &report, &svgs)?;
    Ok(pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_file_formats() {
        let p = parse_polynomial("# cubic\nroots\n-1 0\n0\n1 0\n").unwrap();
        assert_eq!(p.degree(), 3);
        assert!(p.eval(Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let q = parse_polynomial("coefficients\n0 0\n").unwrap();
        assert_eq!(q, MonicPolynomial::power(1).unwrap());
        assert!(parse_polynomial("zeros\n1 0\n").is_err());
        assert!(parse_polynomial("roots\n1 x\n").is_err());
    }
}
