//! Monic complex polynomials.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// `p(z) = a_0 + a_1 z + … + a_{n-1} z^{n-1} + z^n`; only `a_0..a_{n-1}`
/// are stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonicPolynomial {
    pub coefficients: Vec<Complex64>,
}

impl MonicPolynomial {
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.is_empty() {
            return domain("monic polynomial needs degree >= 1");
        }
        if coefficients.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return domain("non-finite coefficient");
        }
        Ok(Self { coefficients })
    }

    /// `∏ (z - r)`.
    pub fn from_roots(roots: &[Complex64]) -> Result<Self> {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (i, &ci) in c.iter().enumerate() {
                next[i + 1] += ci;
                next[i] -= ci * r;
            }
            c = next;
        }
        c.pop();
        Self::new(c)
    }

    /// `z^n`.
    pub fn power(n: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len()
    }

    /// All coefficients including the leading one.
    pub fn full(&self) -> Vec<Complex64> {
        let mut c = self.coefficients.clone();
        c.push(Complex64::new(1.0, 0.0));
        c
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coefficients
            .iter()
            .rev()
            .fold(Complex64::new(1.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Zeros of `p'`, the critical points of `Re p`.
    pub fn critical_points(&self) -> Vec<Complex64> {
        let full = self.full();
        let n = self.degree();
        if n < 2 {
            return Vec::new();
        }
        // p'/n is monic of degree n-1
        let d: Vec<Complex64> = (1..n).map(|k| full[k] * (k as f64) / (n as f64)).collect();
        roots_of_monic(&d)
    }

    pub fn roots(&self) -> Vec<Complex64> {
        roots_of_monic(&self.coefficients)
    }

    /// Largest root modulus bound (Cauchy).
    pub fn root_radius(&self) -> f64 {
        1.0 + self.coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `Re p` has a singular zero set when some critical point lies on it.
    /// Returns the smallest `|Re p(c)|` over critical points `c`, relative
    /// to `1 + |c|^n`.
    pub fn singularity_margin(&self) -> f64 {
        let n = self.degree() as i32;
        self.critical_points()
            .into_iter()
            .map(|c| self.eval(c).re.abs() / (1.0 + c.norm().powi(n)))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Durand–Kerner iteration for a monic polynomial given `a_0..a_{n-1}`.
fn roots_of_monic(coefficients: &[Complex64]) -> Vec<Complex64> {
    let n = coefficients.len();
    if n == 0 {
        return Vec::new();
    }
    let eval = |z: Complex64| {
        coefficients.iter().rev().fold(Complex64::new(1.0, 0.0), |acc, &c| acc * z + c)
    };
    let radius = 1.0 + coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius.min(2.0)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(1e-12, 0.0);
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * radius {
            break;
        }
    }
    z
}
