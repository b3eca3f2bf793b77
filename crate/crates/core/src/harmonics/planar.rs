use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PlaneField;
use crate::nodal::{refine_until_stable, FieldRef, RefineOptions, Refined, Surface};
use crate::specfun::j1;

/// Lower bound on consecutive `J1` zero gaps, checked numerically.
pub const J1_GAP_BOUND: f64 = 3.0;

/// Parameters of `h = f + ε g` with `f = J1(r) sin θ` and
/// `g(x, y) = f(x - δ1, y - δ2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarEigenSpec {
    pub delta1: f64,
    pub delta2: f64,
    pub epsilon: f64,
    pub radius: f64,
}

impl Default for PlanarEigenSpec {
    fn default() -> Self {
        Self { delta1: 0.5, delta2: 0.25, epsilon: 0.05, radius: 15.0 }
    }
}

impl PlanarEigenSpec {
    pub fn new(delta1: f64, delta2: f64, epsilon: f64, radius: f64) -> Result<Self> {
        let s = Self { delta1, delta2, epsilon, radius };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.delta2 && self.delta2 < self.delta1 && self.delta1 < J1_GAP_BOUND / 2.0) {
            return Err(Error::Invariant(format!(
                "shifts must satisfy 0 < delta2 < delta1 < {}; got delta1 = {}, delta2 = {}",
                J1_GAP_BOUND / 2.0,
                self.delta1,
                self.delta2
            )));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::Invariant("epsilon must be a finite nonnegative number".into()));
        }
        if !(self.radius > 0.0 && self.radius + 5.0 <= crate::specfun::BESSEL_MAX_ARG) {
            return Err(Error::Invariant(format!("window radius {} out of range", self.radius)));
        }
        Ok(())
    }

    pub fn with_epsilon(self, epsilon: f64) -> Self {
        Self { epsilon, ..self }
    }

    pub fn field(&self, which: PlanarWhich) -> PlanarField {
        PlanarField { spec: *self, which }
    }
}

/// Which of the three planar functions to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanarWhich {
    F,
    G,
    H,
}

/// `J1(r) sin θ = J1(r) y / r`, continuous at the origin.
pub fn bessel_mode(x: f64, y: f64) -> f64 {
    let r = x.hypot(y);
    if r < 1e-8 {
        return 0.5 * y;
    }
    j1(r) * y / r
}

#[derive(Debug, Clone, Copy)]
pub struct PlanarField {
    spec: PlanarEigenSpec,
    which: PlanarWhich,
}

impl PlaneField for PlanarField {
    fn eval(&self, x: f64, y: f64) -> f64 {
        self.eval_scaled(x, y).0
    }

    fn eval_scaled(&self, x: f64, y: f64) -> (f64, f64) {
        let s = &self.spec;
        let f = || bessel_mode(x, y);
        let g = || bessel_mode(x - s.delta1, y - s.delta2);
        match self.which {
            PlanarWhich::F => {
                let v = f();
                (v, v.abs())
            }
            PlanarWhich::G => {
                let v = g();
                (v, v.abs())
            }
            PlanarWhich::H => {
                let (a, b) = (f(), s.epsilon * g());
                (a + b, a.abs() + b.abs())
            }
        }
    }
}

/// Evaluate `f`, `g` or `h` at `(x, y)`.
pub fn eval_planar(spec: &PlanarEigenSpec, x: f64, y: f64, which: PlanarWhich) -> Result<f64> {
    spec.validate()?;
    let lim = spec.radius + 5.0;
    if x * x + y * y > lim * lim {
        return Err(Error::Domain(format!("({x}, {y}) outside the evaluation window")));
    }
    Ok(spec.field(which).eval(x, y))
}

/// Schedules for [`adaptive_planar`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanarOptions {
    pub eps_start: f64,
    pub eps_floor: f64,
    pub refine: RefineOptions,
}

impl Default for PlanarOptions {
    fn default() -> Self {
        Self { eps_start: 0.1, eps_floor: 1e-6, refine: RefineOptions { start_cols: 256, max_cols: 2048 } }
    }
}

/// `h` at the chosen ε with its refined disc topology.
pub struct PlanarConstruction {
    pub spec: PlanarEigenSpec,
    /// ε values tried, largest first.
    pub epsilon_trail: Vec<f64>,
    pub refined: Refined,
}

/// Extract the topology of `h` on the disc of radius `spec.radius`.
pub fn planar_topology(spec: &PlanarEigenSpec, which: PlanarWhich, refine: RefineOptions) -> Result<Refined> {
    spec.validate()?;
    let field = spec.field(which);
    refine_until_stable(FieldRef::Disc(&field, spec.radius), refine)
}

/// Halve ε from `eps_start` until the disc topology of `h` is
/// refinement-stable and unchanged at `ε/2`. The ε in `base` is ignored.
pub fn adaptive_planar(base: &PlanarEigenSpec, options: &PlanarOptions) -> Result<PlanarConstruction> {
    base.validate()?;
    let mut eps = options.eps_start;
    let mut trail = Vec::new();
    let mut previous: Option<(f64, Refined)> = None;
    while eps >= options.eps_floor {
        trail.push(eps);
        let spec = base.with_epsilon(eps);
        match planar_topology(&spec, PlanarWhich::H, options.refine) {
            Ok(r) if r.topology.stable => {
                if let Some((pe, pr)) = previous.take() {
                    if pr.topology.equivalent(&r.topology) {
                        return Ok(PlanarConstruction { spec: base.with_epsilon(pe), epsilon_trail: trail, refined: pr });
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
        "no stable epsilon on the disc of radius {} down to {:e}",
        base.radius, options.eps_floor
    )))
}

/// Surface of the disc window.
pub fn planar_surface(spec: &PlanarEigenSpec) -> Surface {
    Surface::Disc { radius: spec.radius }
}
