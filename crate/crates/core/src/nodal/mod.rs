//! Sampling, nodal domain and nodal curve extraction, nesting trees,
//! antipodal classification and SVG rendering.

mod grid;
pub mod svg;
mod topology;
pub mod tree;
mod unionfind;

pub use grid::{check_cols, sample, FieldRef, SampledGrid, Surface, MAX_COLS, MIN_COLS, ZERO_TOL};
pub use topology::{
    antipodal_classify, count_components, count_domains, extract_topology, label_domains,
    nesting_forest, refine_until_stable, trace_curves, Curve, Curves, DomainLabels, EdgeId,
    NodalTopology, RefineOptions, Refined,
};
pub use unionfind::UnionFind;
