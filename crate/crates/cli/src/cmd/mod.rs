pub mod diagrams;
pub mod lewy;
pub mod ovals;
pub mod planar;
pub mod specfun;
pub mod verify;

use nodal_core::nodal::RefineOptions;
use nodal_core::Error;
use serde_json::{json, Value};

use crate::config::RunConfig;

/// Grid schedule from the config; quick runs stop at 1024 columns.
pub fn refine_options(config: &RunConfig) -> RefineOptions {
    let max_cols = if config.quick { config.resolution.min(1024) } else { config.resolution };
    RefineOptions { start_cols: config.start_cols.min(max_cols), max_cols }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::DegenerateRotation(_) => "degenerate_rotation",
        Error::Extraction(_) => "extraction",
        Error::Singular(_) => "singular",
        Error::SearchFailed(_) => "search_failed",
        Error::Invariant(_) => "invariant",
        Error::Parse(_) => "parse",
    }
}

pub fn error_body(e: &Error) -> Value {
    json!({ "error": { "kind": error_kind(e), "message": e.to_string() } })
}
