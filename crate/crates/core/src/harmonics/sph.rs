use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::field::{sphere_point, SphereField};
use crate::specfun::AssocFactor;

/// A proper rotation of R³ acting on evaluation points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 9]", from = "[f64; 9]")]
pub struct Rotation {
    m: [[f64; 3]; 3],
}

impl From<Rotation> for [f64; 9] {
    fn from(r: Rotation) -> Self {
        let m = r.m;
        [m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2], m[2][0], m[2][1], m[2][2]]
    }
}

impl From<[f64; 9]> for Rotation {
    fn from(a: [f64; 9]) -> Self {
        Rotation { m: [[a[0], a[1], a[2]], [a[3], a[4], a[5]], [a[6], a[7], a[8]]] }
    }
}

impl Default for Rotation {
    fn default() -> Self {
        Self::identity()
    }
}

impl Rotation {
    pub fn identity() -> Self {
        Rotation { m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] }
    }

    pub fn from_rows(m: [[f64; 3]; 3]) -> Self {
        Rotation { m }
    }

    pub fn rows(&self) -> [[f64; 3]; 3] {
        self.m
    }

    /// Rotation about the north–south axis; maps azimuth `φ` to `φ + angle`.
    pub fn about_z(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Rotation { m: [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]] }
    }

    /// Right-handed rotation by `angle` about the unit vector `axis`.
    pub fn about_axis(axis: [f64; 3], angle: f64) -> Self {
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        let [x, y, z] = [axis[0] / norm, axis[1] / norm, axis[2] / norm];
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        Rotation {
            m: [
                [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
                [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
                [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
            ],
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Rotation) -> Rotation {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..3).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        Rotation { m }
    }

    pub fn apply(&self, p: [f64; 3]) -> [f64; 3] {
        let m = &self.m;
        [
            m[0][0] * p[0] + m[0][1] * p[1] + m[0][2] * p[2],
            m[1][0] * p[0] + m[1][1] * p[1] + m[1][2] * p[2],
            m[2][0] * p[0] + m[2][1] * p[1] + m[2][2] * p[2],
        ]
    }

    /// Orthogonal with determinant `+1`, to `tol`.
    pub fn is_proper(&self, tol: f64) -> bool {
        let m = &self.m;
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| m[i][k] * m[j][k]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                if (dot - want).abs() > tol {
                    return false;
                }
            }
        }
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        (det - 1.0).abs() <= tol
    }
}

/// Azimuthal factor of a basis term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Sin,
    Cos,
}

/// `weight · sin^m θ' F_n^m(cos θ') trig(m φ')` where `(θ', φ')` is the
/// image of the evaluation point under `rotation`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicTerm {
    pub weight: f64,
    pub order: u32,
    pub phase: Phase,
    #[serde(default)]
    pub rotation: Rotation,
}

impl HarmonicTerm {
    pub fn new(weight: f64, order: u32, phase: Phase) -> Self {
        Self { weight, order, phase, rotation: Rotation::identity() }
    }

    pub fn rotated(mut self, rotation: Rotation) -> Self {
        self.rotation = rotation;
        self
    }

    pub fn with_weight(mut self, weight: f64) -> Self {
        self.weight = weight;
        self
    }
}

/// A degree-`n` spherical harmonic written as a weighted sum of rotated
/// basis terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalHarmonicSpec {
    pub degree: u32,
    pub eigenvalue: u64,
    pub terms: Vec<HarmonicTerm>,
}

impl SphericalHarmonicSpec {
    pub fn new(degree: u32, terms: Vec<HarmonicTerm>) -> Result<Self> {
        let spec = Self { degree, eigenvalue: degree as u64 * (degree as u64 + 1), terms };
        spec.validate()?;
        Ok(spec)
    }

    /// The basis harmonic `Y_n^m` with the given azimuthal phase.
    pub fn basis(degree: u32, order: u32, phase: Phase) -> Result<Self> {
        Self::new(degree, vec![HarmonicTerm::new(1.0, order, phase)])
    }

    pub fn validate(&self) -> Result<()> {
        if self.degree as usize > crate::specfun::MAX_DEGREE {
            return domain(format!("degree {} too large", self.degree));
        }
        if self.eigenvalue != self.degree as u64 * (self.degree as u64 + 1) {
            return Err(Error::Invariant("eigenvalue must equal n(n+1)".into()));
        }
        if self.terms.is_empty() || self.terms.iter().all(|t| t.weight == 0.0) {
            return Err(Error::Invariant("harmonic needs a term with nonzero weight".into()));
        }
        for t in &self.terms {
            if t.order > self.degree {
                return domain(format!("term order {} exceeds degree {}", t.order, self.degree));
            }
            if !t.rotation.is_proper(1e-12) {
                return Err(Error::Invariant("term rotation is not proper orthogonal".into()));
            }
            if !t.weight.is_finite() {
                return Err(Error::Invariant("non-finite term weight".into()));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> HarmonicField {
        HarmonicField::new(self).expect("validated spec")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    /// Standard normal weights on every basis term `Y_n^m` (cosine for
    /// `m = 0`, both phases otherwise).
    pub fn random_mixture<R: rand::Rng + ?Sized>(degree: u32, rng: &mut R) -> Result<Self> {
        let normal = rand_distr::Normal::new(0.0, 1.0).expect("valid normal");
        let mut terms = vec![HarmonicTerm::new(rand_distr::Distribution::sample(&normal, rng), 0, Phase::Cos)];
        for m in 1..=degree {
            for phase in [Phase::Cos, Phase::Sin] {
                terms.push(HarmonicTerm::new(rand_distr::Distribution::sample(&normal, rng), m, phase));
            }
        }
        Self::new(degree, terms)
    }
}

/// Compiled evaluator for a [`SphericalHarmonicSpec`].
#[derive(Debug, Clone)]
pub struct HarmonicField {
    degree: u32,
    terms: Vec<(HarmonicTerm, AssocFactor)>,
}

impl HarmonicField {
    pub fn new(spec: &SphericalHarmonicSpec) -> Result<Self> {
        spec.validate()?;
        let terms = spec
            .terms
            .iter()
            .map(|t| Ok((*t, AssocFactor::new(spec.degree as usize, t.order as usize)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { degree: spec.degree, terms })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }
}

impl SphereField for HarmonicField {
    fn eval(&self, p: [f64; 3]) -> f64 {
        self.eval_scaled(p).0
    }

    fn eval_scaled(&self, p: [f64; 3]) -> (f64, f64) {
        let mut sum = 0.0;
        let mut scale = 0.0;
        for (term, factor) in &self.terms {
            let v = term.weight * term_shape(term, factor, p);
            sum += v;
            scale += v.abs();
        }
        (sum, scale)
    }
}

/// Unweighted value of one basis term at `p`.
pub(crate) fn term_shape(term: &HarmonicTerm, factor: &AssocFactor, p: [f64; 3]) -> f64 {
    let q = term.rotation.apply(p);
    let (re, im) = cpow(q[0], q[1], term.order);
    let trig = match term.phase {
        Phase::Sin => im,
        Phase::Cos => re,
    };
    trig * factor.eval(q[2].clamp(-1.0, 1.0))
}

/// Sign-carrying part of a term at `p`: `F_n^m(cos θ') trig(m φ')`, without
/// the nonnegative `sin^m θ'` factor.
pub(crate) fn term_sign_factor(term: &HarmonicTerm, factor: &AssocFactor, p: [f64; 3]) -> f64 {
    let q = term.rotation.apply(p);
    let rho = q[0].hypot(q[1]);
    let (re, im) = if rho == 0.0 { (1.0, 0.0) } else { cpow(q[0] / rho, q[1] / rho, term.order) };
    let trig = match term.phase {
        Phase::Sin => im,
        Phase::Cos => re,
    };
    trig * factor.eval(q[2].clamp(-1.0, 1.0))
}

/// `(x + i y)^m`.
pub(crate) fn cpow(x: f64, y: f64, m: u32) -> (f64, f64) {
    let (mut re, mut im) = (1.0, 0.0);
    let (mut bre, mut bim) = (x, y);
    let mut e = m;
    while e > 0 {
        if e & 1 == 1 {
            let t = re * bre - im * bim;
            im = re * bim + im * bre;
            re = t;
        }
        let t = bre * bre - bim * bim;
        bim = 2.0 * bre * bim;
        bre = t;
        e >>= 1;
    }
    (re, im)
}

/// Evaluate a spec at polar angle `theta` and azimuth `phi`.
pub fn eval_sph(spec: &SphericalHarmonicSpec, theta: f64, phi: f64) -> Result<f64> {
    Ok(HarmonicField::new(spec)?.eval(sphere_point(theta, phi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn basis_zeros() {
        let y31 = SphericalHarmonicSpec::basis(3, 1, Phase::Sin).unwrap();
        assert_eq!(eval_sph(&y31, FRAC_PI_2, 0.0).unwrap(), 0.0);
        for n in 1..6 {
            for m in 1..=n {
                let y = SphericalHarmonicSpec::basis(n, m, Phase::Sin).unwrap();
                assert_eq!(eval_sph(&y, 0.0, 1.3).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn matches_closed_form() {
        // Y_2^1 sin: sinθ F_2^1(cosθ) sinφ with F_2^1(x) = x
        let y = SphericalHarmonicSpec::basis(2, 1, Phase::Sin).unwrap();
        let (t, p) = (0.7f64, 2.1f64);
        let expected = t.sin() * t.cos() * p.sin();
        assert!((eval_sph(&y, t, p).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn about_z_shifts_azimuth() {
        let r = Rotation::about_z(0.3);
        let term = HarmonicTerm::new(1.0, 3, Phase::Sin).rotated(r);
        let spec = SphericalHarmonicSpec::new(5, vec![term]).unwrap();
        let base = SphericalHarmonicSpec::basis(5, 3, Phase::Sin).unwrap();
        let a = eval_sph(&spec, 1.0, 0.5).unwrap();
        let b = eval_sph(&base, 1.0, 0.8).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(SphericalHarmonicSpec::basis(3, 4, Phase::Sin).is_err());
        assert!(SphericalHarmonicSpec::new(3, vec![HarmonicTerm::new(0.0, 1, Phase::Sin)]).is_err());
        let bad = Rotation::from_rows([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, -1.0]]);
        let t = HarmonicTerm::new(1.0, 1, Phase::Sin).rotated(bad);
        assert!(SphericalHarmonicSpec::new(3, vec![t]).is_err());
    }

    #[test]
    fn rotations_are_proper() {
        let r = Rotation::about_axis([0.3, -0.4, 0.8], 1.1).compose(&Rotation::about_z(-0.2));
        assert!(r.is_proper(1e-12));
    }

    #[test]
    fn json_round_trip_preserves_values() {
        let r = Rotation::about_axis([1.0, 2.0, 0.5], 0.37);
        let spec = SphericalHarmonicSpec::new(
            6,
            vec![
                HarmonicTerm::new(1.0, 3, Phase::Sin),
                HarmonicTerm::new(1.0 / 3.0, 6, Phase::Cos).rotated(r),
            ],
        )
        .unwrap();
        let back = SphericalHarmonicSpec::from_json(&spec.to_json()).unwrap();
        for (t, p) in [(0.3, 0.2), (1.9, 4.0), (PI - 0.1, 6.0)] {
            let a = eval_sph(&spec, t, p).unwrap();
            let b = eval_sph(&back, t, p).unwrap();
            assert!((a - b).abs() <= 1e-15 * a.abs().max(1e-300));
        }
        let v: serde_json::Value = serde_json::from_str(&spec.to_json()).unwrap();
        assert_eq!(v["terms"][1]["rotation"].as_array().unwrap().len(), 9);
    }
}
