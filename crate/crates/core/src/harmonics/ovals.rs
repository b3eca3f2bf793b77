//! Perturbations `Y_n^a + ε Y_n^b ∘ R` whose nodal sets have about `n²/4`
//! ovals.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::sph::{term_sign_factor, HarmonicTerm, Phase, Rotation, SphericalHarmonicSpec};
use crate::bounds::{predicted_ovals, OvalPrediction};
use crate::error::{domain, Error, Result};
use crate::field::sphere_point;
use crate::nodal::{refine_until_stable, FieldRef, RefineOptions, Refined};
use crate::specfun::{assoc_zeros, AssocFactor};

/// Residue class of the degree, selecting the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OvalCase {
    /// `n = 4k + 3`: base order `2k+1`, perturber order `4k+2`.
    ThreeMod4 { k: u32 },
    /// `n = 4k + 1`: base order `2k`, perturber order `4k`.
    OneMod4 { k: u32 },
    /// `n = 2m`: base order `m`, perturber order `2m`.
    Even { m: u32 },
}

impl OvalCase {
    pub fn of(n: u32) -> Result<Self> {
        if n < 3 {
            return domain(format!("oval construction needs n >= 3, got {n}"));
        }
        if n as usize > crate::specfun::MAX_DEGREE {
            return domain(format!("degree {n} too large"));
        }
        Ok(match n % 4 {
            3 => OvalCase::ThreeMod4 { k: (n - 3) / 4 },
            1 => OvalCase::OneMod4 { k: (n - 1) / 4 },
            _ => OvalCase::Even { m: n / 2 },
        })
    }

    pub fn degree(self) -> u32 {
        match self {
            OvalCase::ThreeMod4 { k } => 4 * k + 3,
            OvalCase::OneMod4 { k } => 4 * k + 1,
            OvalCase::Even { m } => 2 * m,
        }
    }

    pub fn base_order(self) -> u32 {
        match self {
            OvalCase::ThreeMod4 { k } => 2 * k + 1,
            OvalCase::OneMod4 { k } => 2 * k,
            OvalCase::Even { m } => m,
        }
    }

    pub fn perturber_order(self) -> u32 {
        2 * self.base_order()
    }

    /// Midpoint of the admissible azimuthal shift interval.
    pub fn psi_midpoint(self) -> f64 {
        let p = self.perturber_order() as f64;
        match self {
            OvalCase::Even { .. } => PI / (2.0 * p),
            _ => -PI / (2.0 * p),
        }
    }
}

/// Where a crossing of the base nodal lines sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingKind {
    Upper,
    Lower,
    Equator,
    North,
    South,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub kind: CrossingKind,
    pub theta: f64,
    pub phi: f64,
}

/// Crossings of the nodal parallels and half-meridians of the base harmonic,
/// followed by the two poles.
pub fn sphere_crossings(n: u32) -> Result<Vec<Crossing>> {
    let case = OvalCase::of(n)?;
    let m = case.base_order();
    if m == 0 {
        return domain("base harmonic is zonal");
    }
    let upper = assoc_zeros(n as usize, m as usize)?;
    let equator = (n - m) % 2 == 1;
    let mut out = Vec::new();
    for j in 0..2 * m {
        let phi = PI * j as f64 / m as f64;
        for &t in &upper {
            out.push(Crossing { kind: CrossingKind::Upper, theta: t, phi });
        }
        for &t in upper.iter().rev() {
            out.push(Crossing { kind: CrossingKind::Lower, theta: PI - t, phi });
        }
        if equator {
            out.push(Crossing { kind: CrossingKind::Equator, theta: PI / 2.0, phi });
        }
    }
    out.push(Crossing { kind: CrossingKind::North, theta: 0.0, phi: 0.0 });
    out.push(Crossing { kind: CrossingKind::South, theta: PI, phi: 0.0 });
    Ok(out)
}

/// Outcome of evaluating the perturber at every crossing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignReport {
    pub pass: bool,
    pub checked: usize,
    /// Crossings where the sign pattern fails.
    pub violations: Vec<Crossing>,
    /// Smallest `|F · trig|` seen, a margin against degeneracy.
    pub min_margin: f64,
    /// `+1` or `-1` at each crossing, in input order.
    pub signs: Vec<i8>,
}

fn expected_sign(case: OvalCase, c: &Crossing, first: i8) -> i8 {
    match (case, c.kind) {
        (OvalCase::Even { .. }, _) => first,
        (_, CrossingKind::Upper | CrossingKind::North) => -1,
        (_, CrossingKind::Lower | CrossingKind::South) => 1,
        (_, CrossingKind::Equator) => {
            let phi = c.phi.rem_euclid(2.0 * PI);
            if phi > 0.0 && phi <= PI {
                1
            } else {
                -1
            }
        }
    }
}

/// Sign check of the unscaled perturbing term (the second term of `spec`) at
/// `crossings`. The `sin^b θ` factor is left out, so tilted poles are judged
/// by the sign-carrying part only.
pub fn verify_perturber_signs(spec: &SphericalHarmonicSpec, crossings: &[Crossing]) -> Result<SignReport> {
    let case = OvalCase::of(spec.degree)?;
    if spec.terms.len() != 2 || spec.terms[1].order != case.perturber_order() {
        return Err(Error::Invariant("spec is not a base-plus-perturber construction".into()));
    }
    let term = spec.terms[1].with_weight(1.0);
    let factor = AssocFactor::new(spec.degree as usize, term.order as usize)?;
    let mut signs = Vec::with_capacity(crossings.len());
    let mut min_margin = f64::INFINITY;
    for c in crossings {
        let v = term_sign_factor(&term, &factor, sphere_point(c.theta, c.phi));
        if v.abs() < 1e-12 {
            return Err(Error::DegenerateRotation(format!(
                "{:?} crossing at theta = {:.6}, phi = {:.6}",
                c.kind, c.theta, c.phi
            )));
        }
        min_margin = min_margin.min(v.abs());
        signs.push(if v > 0.0 { 1 } else { -1 });
    }
    let first = signs.first().copied().unwrap_or(1);
    let violations: Vec<Crossing> = crossings
        .iter()
        .zip(&signs)
        .filter(|(c, &s)| s != expected_sign(case, c, first))
        .map(|(c, _)| *c)
        .collect();
    Ok(SignReport { pass: violations.is_empty(), checked: crossings.len(), violations, min_margin, signs })
}

/// `Rz(ψ) ∘ T` where `T` tilts by `tilt` about the horizontal axis at
/// azimuth `axis`.
pub fn perturber_rotation(psi: f64, axis: f64, tilt: f64) -> Rotation {
    let t = Rotation::about_axis([axis.cos(), axis.sin(), 0.0], tilt);
    Rotation::about_z(psi).compose(&t)
}

/// `Y_n^a + ε Y_n^b ∘ R`.
pub fn perturbed_spec(n: u32, epsilon: f64, rotation: Rotation) -> Result<SphericalHarmonicSpec> {
    let case = OvalCase::of(n)?;
    SphericalHarmonicSpec::new(
        n,
        vec![
            HarmonicTerm::new(1.0, case.base_order(), Phase::Sin),
            HarmonicTerm::new(epsilon, case.perturber_order(), Phase::Sin).rotated(rotation),
        ],
    )
}

/// Schedules for [`ovals_spec`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OvalOptions {
    pub eps_start: f64,
    pub eps_floor: f64,
    pub tilt_start: f64,
    pub tilt_attempts: u32,
    /// Azimuthal shift; the case midpoint when `None`.
    pub psi: Option<f64>,
    pub refine: RefineOptions,
}

impl Default for OvalOptions {
    fn default() -> Self {
        Self {
            eps_start: 1e-2,
            eps_floor: 1e-8,
            tilt_start: 1e-3,
            tilt_attempts: 5,
            psi: None,
            refine: RefineOptions { start_cols: 128, max_cols: 2048 },
        }
    }
}

/// A rotation passing the sign check, with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChosenRotation {
    pub psi: f64,
    pub tilt_axis: f64,
    pub tilt: f64,
    pub rotation: Rotation,
    pub signs: SignReport,
}

/// Tilt the shifted perturber until its signs at the crossings and poles
/// follow the case pattern. Tilt axes are tried around the horizontal
/// circle starting from the x-axis; the tilt shrinks tenfold per round.
pub fn choose_rotation(n: u32, options: &OvalOptions) -> Result<ChosenRotation> {
    let case = OvalCase::of(n)?;
    let crossings = sphere_crossings(n)?;
    let psi = options.psi.unwrap_or_else(|| case.psi_midpoint());
    let steps = 16 * case.perturber_order();
    let mut last = String::from("no candidate evaluated");
    for attempt in 0..options.tilt_attempts {
        let magnitude = options.tilt_start / 10f64.powi(attempt as i32);
        for j in 0..steps {
            let axis = 2.0 * PI * j as f64 / steps as f64;
            for tilt in [magnitude, -magnitude] {
                let rotation = perturber_rotation(psi, axis, tilt);
                let spec = perturbed_spec(n, 1.0, rotation)?;
                match verify_perturber_signs(&spec, &crossings) {
                    Ok(signs) if signs.pass => {
                        return Ok(ChosenRotation { psi, tilt_axis: axis, tilt, rotation, signs })
                    }
                    Ok(signs) => last = format!("{} sign violations", signs.violations.len()),
                    Err(e @ Error::DegenerateRotation(_)) => last = e.to_string(),
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Err(Error::SearchFailed(format!("no admissible rotation for n = {n} (psi = {psi}): {last}")))
}

/// A verified perturbation with its refined topology.
pub struct OvalConstruction {
    pub case: OvalCase,
    pub prediction: OvalPrediction,
    pub spec: SphericalHarmonicSpec,
    pub epsilon: f64,
    pub rotation: ChosenRotation,
    pub crossings: Vec<Crossing>,
    /// ε values tried, largest first.
    pub epsilon_trail: Vec<f64>,
    pub refined: Refined,
}

/// Build the degree-`n` perturbation: pick the rotation, then halve ε from
/// `eps_start` until the topology is refinement-stable and unchanged at
/// `ε/2`.
pub fn ovals_spec(n: u32, options: &OvalOptions) -> Result<OvalConstruction> {
    let case = OvalCase::of(n)?;
    let prediction = predicted_ovals(n)?;
    let rotation = choose_rotation(n, options)?;
    let crossings = sphere_crossings(n)?;
    let mut eps = options.eps_start;
    let mut trail = Vec::new();
    let mut previous: Option<(f64, Refined)> = None;
    while eps >= options.eps_floor {
        trail.push(eps);
        let spec = perturbed_spec(n, eps, rotation.rotation)?;
        let field = spec.field();
        match refine_until_stable(FieldRef::Sphere(&field), options.refine) {
            Ok(r) if r.topology.stable => {
                if let Some((pe, pr)) = previous.take() {
                    if pr.topology.equivalent_antipodal(&r.topology) {
                        return Ok(OvalConstruction {
                            case,
                            prediction,
                            spec: perturbed_spec(n, pe, rotation.rotation)?,
                            epsilon: pe,
                            rotation,
                            crossings,
                            epsilon_trail: trail,
                            refined: pr,
                        });
                    }
                }
                previous = Some((eps, r));
            }
            Ok(_) | Err(Error::Extraction(_)) | Err(Error::Singular(_)) => previous = None,
            Err(e) => return Err(e),
        }
        eps /= 2.0;
    }
    Err(Error::SearchFailed(format!(
        "no stable epsilon for n = {n} down to {:e} (tried {} values)",
        options.eps_floor,
        trail.len()
    )))
}
