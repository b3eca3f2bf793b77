use nodal_core::specfun::{bessel_zeros, BesselOrder};
use serde_json::json;

use crate::config::RunConfig;
use crate::output::{emit, envelope};
use crate::{usage, CliError};

pub fn dump_zeros(order: u32, count: usize, config: &RunConfig) -> Result<bool, CliError> {
    let order_enum = match BesselOrder::from_index(order) {
        Ok(o) => o,
        Err(e) => return usage(e.to_string()),
    };
    let table = match bessel_zeros(order_enum, count) {
        Ok(t) => t,
        Err(e) => return usage(e.to_string()),
    };
    let rows: Vec<_> = table.zeros.iter().enumerate().map(|(k, z)| json!({ "k": k + 1, "zero": z })).collect();
    let body = json!({ "order": order, "count": rows.len(), "min_gap": table.min_gap(), "rows": rows });
    let report = envelope("specfun dump-zeros", config, true, body);
    emit(config, &format!("zeros-j{order}"), &report, &[])?;
    Ok(true)
}
