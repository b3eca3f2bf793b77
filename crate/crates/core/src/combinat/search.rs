use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::diagram::ChordDiagram;
use super::planar::planar_zero_topology;
use crate::error::{domain, Result};
use crate::poly::MonicPolynomial;

/// Outcome of [`realize_diagram_search`]. `found` is false when the budget
/// ran out; `best` then holds the closest polynomial seen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub target: ChordDiagram,
    pub found: bool,
    pub roots: Vec<Complex64>,
    pub polynomial: MonicPolynomial,
    /// Diagram extracted from `polynomial`, if extraction succeeded.
    pub extracted: Option<ChordDiagram>,
    /// Mismatched points of the best polynomial (0 when found).
    pub mismatch: usize,
    pub seed: u64,
    pub trials: usize,
}

fn random_in_disc(rng: &mut ChaCha8Rng) -> Complex64 {
    let r = rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

fn score(target: &ChordDiagram, roots: &[Complex64]) -> (usize, Option<(MonicPolynomial, ChordDiagram)>) {
    let worst = target.points() + 1;
    let Ok(p) = MonicPolynomial::from_roots(roots) else {
        return (worst, None);
    };
    match planar_zero_topology(&p) {
        Ok(d) => {
            let m = (0..target.points()).filter(|&i| d.diagram.partner(i) != target.partner(i)).count();
            (m, Some((p, d.diagram)))
        }
        Err(_) => (worst, None),
    }
}

/// Search for a monic polynomial of degree `n ≤ 5` whose zero-set diagram
/// is exactly `target` (labels included). Simulated annealing over root
/// positions with jitter, single-root relocation and coefficient steps;
/// restarts after long stalls. Deterministic for a given seed.
pub fn realize_diagram_search(target: &ChordDiagram, budget: usize, seed: u64) -> Result<SearchResult> {
    let n = target.n();
    if n > 5 {
        return domain(format!("search supports n <= 5, got {n}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = Normal::new(0.0, 1.0).expect("valid normal");
    let fresh = |rng: &mut ChaCha8Rng| (0..n).map(|_| random_in_disc(rng)).collect::<Vec<_>>();

    let mut current = fresh(&mut rng);
    let (mut cur_score, mut cur_hit) = score(target, &current);
    let mut best = (cur_score, current.clone(), cur_hit.clone());
    let mut stall = 0;
    let mut trials = 1;
    while best.0 > 0 && trials < budget {
        let temperature = 1.5 * (1.0 - trials as f64 / budget as f64) + 0.05;
        let mean = current.iter().sum::<Complex64>() / n as f64;
        let spread = current.iter().map(|z| (z - mean).norm()).fold(0.1, f64::max);
        let mut next = current.clone();
        match rng.gen_range(0..10) {
            0..=5 => {
                for z in &mut next {
                    let s = 0.1 * spread;
                    *z += Complex64::new(s * unit.sample(&mut rng), s * unit.sample(&mut rng));
                }
            }
            6..=8 => {
                let k = rng.gen_range(0..n);
                next[k] = random_in_disc(&mut rng);
            }
            _ => {
                if let Ok(mut p) = MonicPolynomial::from_roots(&next) {
                    for c in &mut p.coefficients {
                        *c += Complex64::new(0.1 * unit.sample(&mut rng), 0.1 * unit.sample(&mut rng));
                    }
                    next = p.roots();
                }
            }
        }
        let (s, hit) = score(target, &next);
        trials += 1;
        let accept = s <= cur_score || rng.gen::<f64>() < (-((s - cur_score) as f64) / temperature).exp();
        if accept {
            current = next;
            cur_score = s;
            cur_hit = hit;
        }
        if cur_score < best.0 {
            best = (cur_score, current.clone(), cur_hit.clone());
            stall = 0;
        } else {
            stall += 1;
        }
        if stall > 300 {
            current = fresh(&mut rng);
            let (s, hit) = score(target, &current);
            trials += 1;
            cur_score = s;
            cur_hit = hit;
            stall = 0;
        }
    }
    let (mismatch, roots, hit) = best;
    let (polynomial, extracted) = match hit {
        Some((p, d)) => (p, Some(d)),
        None => (MonicPolynomial::from_roots(&roots)?, None),
    };
    Ok(SearchResult {
        target: target.clone(),
        found: mismatch == 0,
        roots,
        polynomial,
        extracted,
        mismatch,
        seed,
        trials,
    })
}
