use nodal_core::harmonics::{adaptive_planar, eval_planar, planar_topology, PlanarEigenSpec, PlanarOptions, PlanarWhich};
use nodal_core::nodal::svg::{self, Layer, Marker};
use nodal_core::nodal::{count_domains, sample, trace_curves, FieldRef, Refined, SampledGrid};
use nodal_core::specfun::{bessel_zeros, BesselOrder};
use serde_json::json;

use super::{error_body, refine_options};
use crate::config::RunConfig;
use crate::output::{emit, envelope};
use crate::{usage, CliError};

/// Points where the nodal lines of `f` cross: the origin and `(±j, 0)`
/// for the zeros `j` of `J1` inside the window, each marked with the sign
/// of `g` there.
fn crossing_markers(spec: &PlanarEigenSpec) -> anyhow::Result<Vec<Marker>> {
    let zeros = bessel_zeros(BesselOrder::J1, 60)?;
    let mut xs = vec![0.0];
    for &j in zeros.zeros.iter().take_while(|&&j| j < spec.radius) {
        xs.push(j);
        xs.push(-j);
    }
    xs.iter()
        .map(|&x| Ok(Marker { at: [x, 0.0], positive: eval_planar(spec, x, 0.0, PlanarWhich::G)? > 0.0 }))
        .collect()
}

fn render(spec: &PlanarEigenSpec, h: &Refined, f: &SampledGrid) -> anyhow::Result<String> {
    let h_curves = trace_curves(&h.grid);
    let f_curves = trace_curves(f);
    let layers = [
        Layer { grid: f, curves: &f_curves, stroke: "#555555", dashed: true },
        Layer { grid: &h.grid, curves: &h_curves, stroke: "black", dashed: false },
    ];
    let caption = format!(
        "R = {}, eps = {:e}: {} nodal domains (dashed: eps = 0)",
        spec.radius, spec.epsilon, h.topology.domains
    );
    Ok(svg::render(&h.grid, &layers, &crossing_markers(spec)?, &caption))
}

pub fn run(epsilon: Option<f64>, config: &RunConfig) -> Result<bool, CliError> {
    let base = match PlanarEigenSpec::new(config.delta1, config.delta2, epsilon.unwrap_or(0.0), config.radius) {
        Ok(s) => s,
        Err(e) => return usage(e.to_string()),
    };
    let mut refine = refine_options(config);
    refine.start_cols = refine.start_cols.max(256).min(refine.max_cols);
    let built = match epsilon {
        Some(_) => planar_topology(&base, PlanarWhich::H, refine).map(|r| (base, vec![base.epsilon], r)),
        None => {
            let options = PlanarOptions { eps_start: config.planar_eps_start, eps_floor: config.planar_eps_floor, refine };
            adaptive_planar(&base, &options).map(|c| (c.spec, c.epsilon_trail, c.refined))
        }
    };
    let (spec, trail, refined) = match built {
        Ok(b) => b,
        Err(e) => {
            let mut body = json!({ "spec": base, "diagnostics": error_body(&e) });
            // a fixed ε whose nodal lines cross still has a countable set of domains
            if epsilon.is_some() {
                let f = base.field(PlanarWhich::H);
                let grid = sample(FieldRef::Disc(&f, base.radius), refine.max_cols).map_err(anyhow::Error::from)?;
                body["domains"] = json!(count_domains(&grid).0);
            }
            let report = envelope("planar", config, false, body);
            emit(config, "planar", &report, &[])?;
            return Ok(false);
        }
    };
    let t = &refined.topology;
    // the unperturbed picture is drawn on the grid that resolved h
    let cols = refined.grid.cols;
    let f = spec.field(PlanarWhich::F);
    let unperturbed = sample(FieldRef::Disc(&f, spec.radius), cols).map_err(anyhow::Error::from)?;
    let (unperturbed_domains, _) = count_domains(&unperturbed);
    let pass = t.stable && t.domains == 2;
    let body = json!({
        "spec": spec,
        "epsilon_trail": trail,
        "topology": t,
        "unperturbed_domains": unperturbed_domains,
    });
    let report = envelope("planar", config, pass, body);
    let svgs = vec![("planar.svg".to_string(), render(&spec, &refined, &unperturbed)?)];
    emit(config, "planar", &report, &svgs)?;
    Ok(pass)
}
