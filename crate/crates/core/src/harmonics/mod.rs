//! Eigenfunction families as scalar fields: rotated basis mixtures, Lewy
//! lifts of planar polynomials, the many-ovals perturbations and the planar
//! two-domain function.

mod lewy;
pub mod ovals;
mod planar;
mod sph;

pub use lewy::{
    adaptive_lewy, eval_lewy, rescaled_lewy, rescaled_sup_distance, LewyConstruction, LewyField, LewyLiftSpec,
    LewyOptions,
};
pub use planar::{
    adaptive_planar, bessel_mode, eval_planar, planar_surface, planar_topology, PlanarConstruction, PlanarEigenSpec,
    PlanarField, PlanarOptions, PlanarWhich, J1_GAP_BOUND,
};
pub use sph::{eval_sph, HarmonicField, HarmonicTerm, Phase, Rotation, SphericalHarmonicSpec};
