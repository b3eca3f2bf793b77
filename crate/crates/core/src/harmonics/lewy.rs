use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::field::{sphere_point, SphereField};
use crate::nodal::{refine_until_stable, FieldRef, RefineOptions, Refined};
use crate::poly::MonicPolynomial;
use crate::specfun::AssocFactor;

/// The harmonic `f_t = Re Σ_k F_n^k(cos θ) t^{n-k} a_k (sin θ e^{iφ})^k`
/// built from a monic polynomial `p(z) = Σ a_k z^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LewyLiftSpec {
    pub degree: u32,
    /// `a_0..a_{n-1}`; the leading coefficient is 1.
    pub coefficients: Vec<Complex64>,
    pub t: f64,
}

impl LewyLiftSpec {
    pub fn new(poly: &MonicPolynomial, t: f64) -> Result<Self> {
        let spec = Self { degree: poly.degree() as u32, coefficients: poly.coefficients.clone(), t };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree < 1 || self.coefficients.len() != self.degree as usize {
            return Err(Error::Invariant("lewy lift needs n >= 1 and n coefficients".into()));
        }
        if self.degree as usize > crate::specfun::MAX_DEGREE {
            return domain(format!("degree {} too large", self.degree));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(Error::Invariant(format!("scale t = {} must be positive", self.t)));
        }
        Ok(())
    }

    pub fn polynomial(&self) -> MonicPolynomial {
        MonicPolynomial { coefficients: self.coefficients.clone() }
    }

    pub fn with_t(&self, t: f64) -> Result<Self> {
        let s = Self { t, ..self.clone() };
        s.validate()?;
        Ok(s)
    }

    pub fn field(&self) -> LewyField {
        LewyField::new(self).expect("validated spec")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }
}

/// Compiled evaluator for a [`LewyLiftSpec`].
#[derive(Debug, Clone)]
pub struct LewyField {
    /// `t^{n-k} a_k` for `k = 0..=n`.
    weights: Vec<Complex64>,
    factors: Vec<AssocFactor>,
    t: f64,
}

impl LewyField {
    pub fn new(spec: &LewyLiftSpec) -> Result<Self> {
        spec.validate()?;
        let n = spec.degree as usize;
        let mut full = spec.coefficients.clone();
        full.push(Complex64::new(1.0, 0.0));
        let weights = full
            .iter()
            .enumerate()
            .map(|(k, a)| a * spec.t.powi((n - k) as i32))
            .collect();
        let factors = (0..=n).map(|k| AssocFactor::new(n, k)).collect::<Result<_>>()?;
        Ok(Self { weights, factors, t: spec.t })
    }

    /// `t^{-n} f_t(t z) = Re Σ L_k(t|z|) a_k z^k`, with
    /// `L_k(r) = F_n^k(sqrt(1 - r²))`.
    pub fn rescaled(&self, z: Complex64) -> Result<f64> {
        let r = self.t * z.norm();
        if r > 1.0 {
            return domain(format!("|t z| = {r} leaves the hemisphere chart"));
        }
        let x = (1.0 - r * r).max(0.0).sqrt();
        let n = self.factors.len() - 1;
        let mut zk = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..=n {
            // weights[k] = t^{n-k} a_k
            let a_k = self.weights[k] / self.t.powi((n - k) as i32);
            sum += self.factors[k].eval(x) * a_k * zk;
            zk *= z;
        }
        Ok(sum.re)
    }
}

impl SphereField for LewyField {
    fn eval(&self, p: [f64; 3]) -> f64 {
        self.eval_scaled(p).0
    }

    fn eval_scaled(&self, p: [f64; 3]) -> (f64, f64) {
        let z = Complex64::new(p[0], p[1]);
        let x = p[2].clamp(-1.0, 1.0);
        let mut zk = Complex64::new(1.0, 0.0);
        let mut sum = 0.0;
        let mut scale = 0.0;
        for (w, f) in self.weights.iter().zip(&self.factors) {
            let v = (f.eval(x) * w * zk).re;
            sum += v;
            scale += v.abs();
            zk *= z;
        }
        (sum, scale)
    }
}

/// Evaluate the Lewy lift at polar angle `theta` and azimuth `phi`.
pub fn eval_lewy(spec: &LewyLiftSpec, theta: f64, phi: f64) -> Result<f64> {
    Ok(LewyField::new(spec)?.eval(sphere_point(theta, phi)))
}

/// `t^{-n} f_t(t z)` for the spec's `t`.
pub fn rescaled_lewy(spec: &LewyLiftSpec, z: Complex64) -> Result<f64> {
    LewyField::new(spec)?.rescaled(z)
}

/// `sup |t^{-n} f_t(t z) - Re p(z)|` over a polar sample of `|z| ≤ radius`.
pub fn rescaled_sup_distance(spec: &LewyLiftSpec, radius: f64, samples: usize) -> Result<f64> {
    let field = LewyField::new(spec)?;
    let p = spec.polynomial();
    let mut sup = 0.0f64;
    for i in 0..=samples {
        let r = radius * i as f64 / samples as f64;
        for j in 0..(4 * samples) {
            let a = std::f64::consts::TAU * j as f64 / (4 * samples) as f64;
            let z = Complex64::from_polar(r, a);
            let d = (field.rescaled(z)? - p.eval(z).re).abs();
            sup = sup.max(d);
        }
    }
    Ok(sup)
}

/// Schedules for [`adaptive_lewy`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LewyOptions {
    pub t_start: f64,
    pub t_floor: f64,
    pub refine: RefineOptions,
}

impl Default for LewyOptions {
    fn default() -> Self {
        Self { t_start: 0.2, t_floor: 1e-3, refine: RefineOptions { start_cols: 128, max_cols: 4096 } }
    }
}

/// Lift at the chosen `t` with its refined sphere topology.
pub struct LewyConstruction {
    pub spec: LewyLiftSpec,
    /// `t` values tried, largest first.
    pub t_trail: Vec<f64>,
    pub refined: Refined,
}

/// Halve `t` from `t_start` until the sphere topology of the lift is
/// refinement-stable and unchanged at `t/2`.
pub fn adaptive_lewy(poly: &MonicPolynomial, options: &LewyOptions) -> Result<LewyConstruction> {
    let mut t = options.t_start;
    let mut trail = Vec::new();
    let mut previous: Option<(f64, Refined)> = None;
    while t >= options.t_floor {
        trail.push(t);
        let spec = LewyLiftSpec::new(poly, t)?;
        let field = spec.field();
        match refine_until_stable(FieldRef::Sphere(&field), options.refine) {
            Ok(r) if r.topology.stable => {
                if let Some((pt, pr)) = previous.take() {
                    if pr.topology.equivalent_antipodal(&r.topology) {
                        return Ok(LewyConstruction { spec: LewyLiftSpec::new(poly, pt)?, t_trail: trail, refined: pr });
                    }
                }
                previous = Some((t, r));
            }
            Ok(_) | Err(Error::Extraction(_)) | Err(Error::Singular(_)) => previous = None,
            Err(e) => return Err(e),
        }
        t /= 2.0;
    }
    Err(Error::SearchFailed(format!("no stable t down to {:e}", options.t_floor)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn linear_lift_on_equator() {
        let spec = LewyLiftSpec::new(&MonicPolynomial::power(1).unwrap(), 1.0).unwrap();
        for phi in [0.0, 0.4, 2.0, 5.5] {
            assert!((eval_lewy(&spec, FRAC_PI_2, phi).unwrap() - phi.cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn north_pole_sees_constant_term() {
        let p = MonicPolynomial::new(vec![c(0.7, -0.2), c(0.3, 0.1), c(-1.0, 0.5)]).unwrap();
        let t = 0.4;
        let spec = LewyLiftSpec::new(&p, t).unwrap();
        let v = eval_lewy(&spec, 0.0, 0.0).unwrap();
        assert!((v - 0.7 * t.powi(3)).abs() < 1e-15);
    }

    #[test]
    fn rescaled_matches_limits() {
        let p = MonicPolynomial::new(vec![c(0.25, 0.5), c(-1.0, 0.0)]).unwrap();
        let spec = LewyLiftSpec::new(&p, 1e-4).unwrap();
        assert!((rescaled_lewy(&spec, c(0.0, 0.0)).unwrap() - 0.25).abs() < 1e-12);
        assert!(rescaled_lewy(&spec.with_t(0.5).unwrap(), c(3.0, 0.0)).is_err());
        // t = 1 on the unit circle is the equator
        let one = spec.with_t(1.0).unwrap();
        for a in [0.2, 1.7, 4.0] {
            let r = rescaled_lewy(&one, Complex64::from_polar(1.0, a)).unwrap();
            assert!((r - eval_lewy(&one, FRAC_PI_2, a).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn rescaled_converges_as_t_halves() {
        let p = MonicPolynomial::new(vec![c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let mut last = f64::INFINITY;
        for t in [0.2, 0.1, 0.05] {
            let d = rescaled_sup_distance(&LewyLiftSpec::new(&p, t).unwrap(), 2.0, 24).unwrap();
            assert!(d < last);
            last = d;
        }
    }

    #[test]
    fn json_round_trip() {
        let p = MonicPolynomial::new(vec![c(0.1, 0.2), c(-0.3, 0.4)]).unwrap();
        let spec = LewyLiftSpec::new(&p, 0.125).unwrap();
        let back = LewyLiftSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(spec, back);
        let v: serde_json::Value = serde_json::from_str(&spec.to_json()).unwrap();
        assert_eq!(v["coefficients"][0].as_array().unwrap().len(), 2);
    }
}
