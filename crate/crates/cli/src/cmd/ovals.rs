use nodal_core::bounds::BoundReport;
use nodal_core::harmonics::ovals::{ovals_spec, OvalConstruction, OvalOptions};
use nodal_core::nodal::svg::{self, Layer, Marker};
use nodal_core::nodal::trace_curves;
use serde_json::json;

use super::{error_body, refine_options};
use crate::config::RunConfig;
use crate::output::{emit, envelope};
use crate::{usage, CliError};

fn svg_for(c: &OvalConstruction, n: u32) -> String {
    let grid = &c.refined.grid;
    let curves = trace_curves(grid);
    let markers: Vec<Marker> = c
        .crossings
        .iter()
        .zip(&c.rotation.signs.signs)
        .map(|(x, &s)| Marker { at: [x.phi, x.theta], positive: s > 0 })
        .collect();
    let caption = format!(
        "n = {n}, eps = {:e}: {} components. Top and bottom edges are the poles; all points on each are identified.",
        c.epsilon, c.refined.topology.components
    );
    svg::render(grid, &[Layer { grid, curves: &curves, stroke: "black", dashed: false }], &markers, &caption)
}

pub fn run(n: u32, psi: Option<f64>, config: &RunConfig) -> Result<bool, CliError> {
    if !(3..=20).contains(&n) {
        return usage(format!("ovals needs 3 <= n <= 20, got {n}"));
    }
    let options = OvalOptions {
        eps_start: config.eps_start,
        eps_floor: config.eps_floor,
        tilt_start: config.tilt_start,
        tilt_attempts: config.tilt_attempts,
        psi,
        refine: refine_options(config),
    };
    let stem = format!("ovals-{n}");
    let c = match ovals_spec(n, &options) {
        Ok(c) => c,
        Err(e) => {
            let report = envelope("ovals", config, false, json!({ "n": n, "diagnostics": error_body(&e) }));
            emit(config, &stem, &report, &[])?;
            return Ok(false);
        }
    };
    let t = &c.refined.topology;
    let bounds = BoundReport::new(n, t.components as u64, t.domains as u64).map_err(anyhow::Error::from)?;
    let count_ok = c.prediction.accepts(t.components as u64);
    let pass = count_ok && t.stable && c.rotation.signs.pass && bounds.all_ok();
    let body = json!({
        "n": n,
        "case": c.case,
        "prediction": c.prediction,
        "count_ok": count_ok,
        "epsilon": c.epsilon,
        "epsilon_trail": c.epsilon_trail,
        "rotation": {
            "psi": c.rotation.psi,
            "tilt_axis": c.rotation.tilt_axis,
            "tilt": c.rotation.tilt,
        },
        "signs": {
            "pass": c.rotation.signs.pass,
            "checked": c.rotation.signs.checked,
            "min_margin": c.rotation.signs.min_margin,
            "violations": c.rotation.signs.violations,
        },
        "topology": t,
        "bounds": bounds,
        "spec": c.spec,
    });
    let report = envelope("ovals", config, pass, body);
    let svgs = vec![(format!("{stem}.svg"), svg_for(&c, n))];
    emit(config, &stem, &report, &svgs)?;
    Ok(pass)
}
