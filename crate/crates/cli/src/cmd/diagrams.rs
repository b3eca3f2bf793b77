use nodal_core::combinat::{enumerate_diagrams, glue_antipodal, realize_diagram_search};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::output::{emit, envelope};
use crate::{usage, CliError};

pub fn run(n: usize, realize: bool, config: &RunConfig) -> Result<bool, CliError> {
    if !(1..=8).contains(&n) {
        return usage(format!("diagrams needs 1 <= n <= 8, got {n}"));
    }
    if realize && n > 5 {
        return usage(format!("realization search supports n <= 5, got {n}"));
    }
    let diagrams = enumerate_diagrams(n).map_err(anyhow::Error::from)?;
    let mut rows = Vec::with_capacity(diagrams.len());
    let mut pass = true;
    for (i, d) in diagrams.iter().enumerate() {
        let g = glue_antipodal(d);
        let parity_ok = g.components % 2 == n % 2;
        pass &= parity_ok;
        let mut row = json!({
            "diagram": d.to_string(),
            "canonical": d.canonical().to_string(),
            "components": g.components,
            "parity": if g.components % 2 == 1 { "odd" } else { "even" },
            "parity_ok": parity_ok,
            "regions": g.regions,
            "region_tree": g.region_tree,
        });
        if realize {
            let seed = config.seed.wrapping_add(i as u64);
            let r = realize_diagram_search(d, config.budget, seed).map_err(anyhow::Error::from)?;
            pass &= r.found;
            let roots: Vec<[f64; 2]> = r.roots.iter().map(|z| [z.re, z.im]).collect();
            let extra = json!({
                "realized": r.found,
                "trials": r.trials,
                "mismatch": r.mismatch,
                "seed": seed,
                "roots": if r.found { json!(roots) } else { Value::Null },
            });
            if let (Value::Object(row), Value::Object(extra)) = (&mut row, extra) {
                row.extend(extra);
            }
        }
        rows.push(row);
    }
    let report = envelope("diagrams", config, pass, json!({ "n": n, "count": rows.len(), "rows": rows }));
    emit(config, &format!("diagrams-{n}"), &report, &[])?;
    Ok(pass)
}
