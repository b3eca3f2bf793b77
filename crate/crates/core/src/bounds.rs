//! Closed-form bounds and predictions for nodal component counts.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::specfun;

/// Courant: at most `n²` nodal components (and `n² + 1` domains).
pub fn courant_bound(n: u32) -> Result<u64> {
    if n < 1 {
        return domain("courant bound needs n >= 1");
    }
    Ok(n as u64 * n as u64)
}

/// Component bound `n² - 2n + 2` (even `n`) or `(n-1)² + 3` (odd `n`).
pub fn karpushkin_bound(n: u32) -> Result<u64> {
    if n < 2 {
        return domain("karpushkin bound needs n >= 2");
    }
    let n = n as u64;
    Ok(if n % 2 == 0 { n * n - 2 * n + 2 } else { (n - 1) * (n - 1) + 3 })
}

/// Asymptotic domain estimate `4 n² / j0²`. Reported only, never a gate.
pub fn pleijel_estimate(n: u32) -> f64 {
    pleijel_coefficient() * (n as f64).powi(2)
}

/// `4 / j0²`, about 0.69.
pub fn pleijel_coefficient() -> f64 {
    let j0 = specfun::j0_first_zero();
    4.0 / (j0 * j0)
}

/// Lower bound on the component count: two for even `n ≥ 2`, else one.
pub fn lewy_lower(n: u32) -> Result<u64> {
    if n < 1 {
        return domain("lewy bound needs n >= 1");
    }
    Ok(if n % 2 == 0 { 2 } else { 1 })
}

/// Oval count produced by the perturbation construction of degree `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OvalPrediction {
    Exact(u64),
    AtLeast(u64),
}

impl OvalPrediction {
    pub fn value(self) -> u64 {
        match self {
            OvalPrediction::Exact(v) | OvalPrediction::AtLeast(v) => v,
        }
    }

    pub fn accepts(self, observed: u64) -> bool {
        match self {
            OvalPrediction::Exact(v) => observed == v,
            OvalPrediction::AtLeast(v) => observed >= v,
        }
    }
}

/// `(k+1)(4k+2)+1` for `n = 4k+3`, at least `4k²+1` for `n = 4k+1`,
/// `m(m+1)` for `n = 2m`.
pub fn predicted_ovals(n: u32) -> Result<OvalPrediction> {
    if n < 3 {
        return domain("oval prediction needs n >= 3");
    }
    let n = n as u64;
    Ok(match n % 4 {
        3 => {
            let k = (n - 3) / 4;
            OvalPrediction::Exact((k + 1) * (4 * k + 2) + 1)
        }
        1 => {
            let k = (n - 1) / 4;
            OvalPrediction::AtLeast(4 * k * k + 1)
        }
        _ => {
            let m = n / 2;
            OvalPrediction::Exact(m * (m + 1))
        }
    })
}

/// Observed counts checked against every bound for one degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub degree: u32,
    pub components: u64,
    pub domains: u64,
    pub courant: u64,
    pub karpushkin: Option<u64>,
    pub pleijel_estimate: f64,
    pub lewy_lower: u64,
    pub parity_ok: bool,
    pub courant_ok: bool,
    pub karpushkin_ok: bool,
    pub lewy_ok: bool,
}

impl BoundReport {
    pub fn new(degree: u32, components: u64, domains: u64) -> Result<Self> {
        let courant = courant_bound(degree)?;
        let karpushkin = if degree >= 2 { Some(karpushkin_bound(degree)?) } else { None };
        let lewy = lewy_lower(degree)?;
        Ok(Self {
            degree,
            components,
            domains,
            courant,
            karpushkin,
            pleijel_estimate: pleijel_estimate(degree),
            lewy_lower: lewy,
            parity_ok: components % 2 == degree as u64 % 2,
            // the eigenvalue n(n+1) first occurs at index n² + 1
            courant_ok: domains <= courant + 1 && components <= courant,
            karpushkin_ok: karpushkin.map_or(true, |b| components <= b),
            lewy_ok: components >= lewy,
        })
    }

    pub fn all_ok(&self) -> bool {
        self.parity_ok && self.courant_ok && self.karpushkin_ok && self.lewy_ok
    }
}
