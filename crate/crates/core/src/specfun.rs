//! Legendre polynomials and their derivatives, normalized associated
//! Legendre factors, and the Bessel functions `J0`, `J1` with their zeros.
//!
//! Derivatives of `P_n` are evaluated through the Gegenbauer identity
//! `d^k P_n/dx^k = (2k-1)!! C_{n-k}^{(k+1/2)}(x)`, whose three-term
//! recurrence is stable on `[-1, 1]` for every degree we support.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Largest supported Legendre degree.
pub const MAX_DEGREE: usize = 64;

/// Largest argument accepted by [`bessel_j`].
pub const BESSEL_MAX_ARG: f64 = 200.0;

/// Crossover between the power series and the backward recurrence.
const SERIES_LIMIT: f64 = 12.0;

fn check_degree(n: usize) -> Result<()> {
    if n > MAX_DEGREE {
        return domain(format!("degree {n} exceeds the supported maximum {MAX_DEGREE}"));
    }
    Ok(())
}

fn check_order(n: usize, k: usize) -> Result<()> {
    check_degree(n)?;
    if k > n {
        return domain(format!("derivative order {k} exceeds degree {n}"));
    }
    Ok(())
}

/// `P_n(x)` by the Bonnet recurrence.
pub fn legendre_eval(n: usize, x: f64) -> Result<f64> {
    check_degree(n)?;
    if !(-1.0..=1.0).contains(&x) {
        return domain(format!("legendre argument {x} outside [-1, 1]"));
    }
    Ok(bonnet(n, x))
}

fn bonnet(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return prev;
    }
    for m in 1..n {
        let m = m as f64;
        let next = ((2.0 * m + 1.0) * x * cur - m * prev) / (m + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Gegenbauer `C_m^{alpha}(x)`.
fn gegenbauer(m: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if m == 0 {
        return prev;
    }
    let mut cur = 2.0 * alpha * x;
    for j in 2..=m {
        let jf = j as f64;
        let next = (2.0 * x * (jf + alpha - 1.0) * cur - (jf + 2.0 * alpha - 2.0) * prev) / jf;
        prev = cur;
        cur = next;
    }
    cur
}

fn double_factorial_odd(k: usize) -> f64 {
    // (2k-1)!!
    (1..=k).map(|i| (2 * i - 1) as f64).product()
}

/// `d^k P_n / dx^k` at `x`.
pub fn legendre_deriv(n: usize, k: usize, x: f64) -> Result<f64> {
    check_order(n, k)?;
    Ok(double_factorial_odd(k) * gegenbauer(n - k, k as f64 + 0.5, x))
}

/// `F_n^k(x)`: the `k`-th derivative of `P_n` divided by its value at `x = 1`.
pub fn assoc_normalized(n: usize, k: usize, x: f64) -> Result<f64> {
    Ok(AssocFactor::new(n, k)?.eval(x))
}

/// Precomputed `F_n^k` for repeated evaluation in sampling loops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssocFactor {
    n: usize,
    k: usize,
    alpha: f64,
    norm: f64,
}

impl AssocFactor {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        check_order(n, k)?;
        let alpha = k as f64 + 0.5;
        let norm = gegenbauer(n - k, alpha, 1.0);
        Ok(Self { n, k, alpha, norm })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.k
    }

    /// `F_n^k(x)`; exactly `1` at `x = 1`.
    pub fn eval(&self, x: f64) -> f64 {
        gegenbauer(self.n - self.k, self.alpha, x) / self.norm
    }
}

/// Monomial coefficients of `d^k P_n/dx^k`, lowest power first.
///
/// This is the explicit-coefficient route; it loses accuracy near `x = ±1`
/// for large `n` and exists to cross-check the recurrence.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreDerivTable {
    pub degree: usize,
    pub order: usize,
    pub coefficients: Vec<f64>,
}

impl LegendreDerivTable {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        check_order(n, k)?;
        // P_n(x) = 2^-n sum_j (-1)^j C(n,j) C(2n-2j, n) x^(n-2j)
        let mut p = vec![0.0; n + 1];
        for j in 0..=n / 2 {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            p[n - 2 * j] = sign * binomial(n, j) * binomial(2 * n - 2 * j, n) / 2f64.powi(n as i32);
        }
        let coefficients = (k..=n)
            .map(|power| {
                let falling: f64 = (0..k).map(|i| (power - i) as f64).product();
                p[power] * falling
            })
            .collect();
        Ok(Self { degree: n, order: k, coefficients })
    }

    /// Polynomial degree `n - k`.
    pub fn poly_degree(&self) -> usize {
        self.degree - self.order
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Polar angles `θ ∈ (0, π/2)` with `F_n^m(cos θ) = 0`, increasing.
pub fn assoc_zeros(n: usize, m: usize) -> Result<Vec<f64>> {
    let factor = AssocFactor::new(n, m)?;
    let f = |theta: f64| factor.eval(theta.cos());
    let half_pi = std::f64::consts::FRAC_PI_2;
    // Zeros of C_m^alpha are separated by well over pi/(4 n^2) in angle.
    let steps = 64 * (n + 1) * (n + 1);
    let h = half_pi / steps as f64;
    let mut zeros = Vec::new();
    let mut a = 0.0;
    let mut fa = f(a);
    for i in 1..steps {
        let b = i as f64 * h;
        let fb = f(b);
        if fa == 0.0 && a > 0.0 {
            zeros.push(a);
        } else if fa * fb < 0.0 {
            zeros.push(bisect(&f, a, b, 1e-12));
        }
        a = b;
        fa = fb;
    }
    Ok(zeros)
}

/// Bisection on a certified sign change; returns the bracket midpoint once
/// the bracket is narrower than `width`.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, width: f64) -> f64 {
    let mut fa = f(a);
    debug_assert!(fa * f(b) <= 0.0);
    while (b - a).abs() > width {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fa * fm < 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

/// Bessel function order, `J0` or `J1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BesselOrder {
    J0,
    J1,
}

impl BesselOrder {
    pub fn index(self) -> u32 {
        match self {
            BesselOrder::J0 => 0,
            BesselOrder::J1 => 1,
        }
    }

    pub fn from_index(order: u32) -> Result<Self> {
        match order {
            0 => Ok(BesselOrder::J0),
            1 => Ok(BesselOrder::J1),
            _ => domain(format!("unsupported Bessel order {order}")),
        }
    }
}

/// `J_order(x)` for `0 ≤ x ≤ 200`.
pub fn bessel_j(order: BesselOrder, x: f64) -> Result<f64> {
    if !(0.0..=BESSEL_MAX_ARG).contains(&x) {
        return domain(format!("Bessel argument {x} outside [0, {BESSEL_MAX_ARG}]"));
    }
    Ok(if x <= SERIES_LIMIT {
        bessel_series(order.index(), x)
    } else {
        bessel_miller(order.index(), x)
    })
}

/// `J1` on the whole real line (odd extension), unchecked.
pub(crate) fn j1(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax <= SERIES_LIMIT { bessel_series(1, ax) } else { bessel_miller(1, ax) };
    if x < 0.0 {
        -v
    } else {
        v
    }
}

fn bessel_series(order: u32, x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = if order == 0 { 1.0 } else { 0.5 * x };
    let mut sum = term;
    let nu = order as f64;
    for j in 1..200 {
        let jf = j as f64;
        term *= q / (jf * (jf + nu));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) && jf > 0.5 * x {
            break;
        }
    }
    sum
}

/// Miller backward recurrence normalized by `J0 + 2 Σ J_{2k} = 1`.
fn bessel_miller(order: u32, x: f64) -> f64 {
    let mut start = (x + 16.0 * x.cbrt() + 40.0) as usize;
    start += start % 2;
    let (mut next, mut cur) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    let mut j0 = 0.0;
    let mut j1 = 0.0;
    for k in (1..=start).rev() {
        // cur = J_k, next = J_{k+1}
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        // cur = J_{k-1}
        let idx = k - 1;
        if idx == 1 {
            j1 = cur;
        }
        if idx == 0 {
            j0 = cur;
        }
        if idx % 2 == 0 && idx > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            j1 *= 1e-250;
        }
    }
    norm += j0;
    if order == 0 {
        j0 / norm
    } else {
        j1 / norm
    }
}

/// First zeros of `J0` or `J1` (excluding the origin for `J1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BesselZeroTable {
    pub order: BesselOrder,
    pub zeros: Vec<f64>,
}

impl BesselZeroTable {
    pub fn count(&self) -> usize {
        self.zeros.len()
    }

    pub fn min_gap(&self) -> Option<f64> {
        self.zeros.windows(2).map(|w| w[1] - w[0]).reduce(f64::min)
    }
}

/// The first `count` positive zeros, each bisected to a `1e-10` bracket and
/// then polished to machine precision inside it.
pub fn bessel_zeros(order: BesselOrder, count: usize) -> Result<BesselZeroTable> {
    if !(1..=60).contains(&count) {
        return domain(format!("zero count {count} outside 1..=60"));
    }
    let f = |x: f64| bessel_j(order, x).expect("scan stays in range");
    let h = 0.05;
    let mut zeros = Vec::with_capacity(count);
    let mut a = 0.5;
    let mut fa = f(a);
    while zeros.len() < count {
        let b = a + h;
        let fb = f(b);
        if fa * fb < 0.0 {
            let z = bisect(f, a, b, 1e-10);
            let polished = bisect(f, z - 1e-10, z + 1e-10, 0.0f64.max(4.0 * f64::EPSILON * z));
            zeros.push(if f(polished).abs() <= f(z).abs() { polished } else { z });
        }
        a = b;
        fa = fb;
    }
    Ok(BesselZeroTable { order, zeros })
}

/// Smallest positive zero of `J0`.
pub fn j0_first_zero() -> f64 {
    bessel_zeros(BesselOrder::J0, 1).expect("count in range").zeros[0]
}
