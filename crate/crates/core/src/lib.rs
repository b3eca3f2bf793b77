//! Nodal sets of spherical harmonics and of planar solutions of `Δu = u`.
//!
//! The crate builds eigenfunction families with a prescribed nodal topology,
//! samples them on topology-aware grids, and counts and classifies the
//! resulting nodal curves and domains.
//!
//! * [`specfun`]: Legendre derivatives, normalized associated Legendre
//!   factors, Bessel `J0`/`J1` and their zeros.
//! * [`harmonics`]: spherical harmonic mixtures, Lewy lifts of planar
//!   polynomials, the many-ovals perturbations and the planar two-domain
//!   function.
//! * [`nodal`]: sampling, domain and curve extraction, nesting trees,
//!   antipodal classification, SVG output.
//! * [`combinat`]: chord diagrams, antipodal gluing, embedded forests with
//!   labels and orientations, planar zero topology and realization search.
//! * [`bounds`]: closed-form component bounds and predicted oval counts.

pub mod bounds;
pub mod combinat;
mod error;
pub mod field;
pub mod harmonics;
pub mod nodal;
pub mod poly;
pub mod specfun;

pub use error::{Error, Result};
pub use field::{PlaneField, SphereField};
