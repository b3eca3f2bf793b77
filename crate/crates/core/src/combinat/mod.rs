//! Chord diagrams, antipodal gluing, embedded forests with labels and
//! orientations, and the search for polynomials realizing a diagram.

mod diagram;
mod forest;
mod planar;
mod search;

pub use diagram::{antipodal_image, enumerate_diagrams, glue_antipodal, ChordDiagram, GluedCurveSystem};
pub use forest::{
    face_sums_ok, faces, faces_consistent, label_forest, orient_forest, random_forest, tree_orientations,
    vertex_rule_ok,
    EdgeKey, EmbeddedForest, Face, Labels, Orientation,
};
pub use planar::{planar_zero_topology, planar_zero_topology_at, PlanarDiagram, SINGULAR_MARGIN};
pub use search::{realize_diagram_search, SearchResult};
