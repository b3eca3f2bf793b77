use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::diagram::ChordDiagram;
use crate::error::{domain, Error, Result};
use crate::field::FnPlane;
use crate::nodal::{label_domains, sample, FieldRef};
use crate::poly::MonicPolynomial;
use crate::specfun::bisect;

/// Critical values of `Re p` closer to zero than this (relative) mark the
/// zero set as singular.
pub const SINGULAR_MARGIN: f64 = 1e-10;

/// Chord diagram of the zero set of `Re p` read off a disc window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanarDiagram {
    pub diagram: ChordDiagram,
    pub radius: f64,
    /// Angles in `[0, 2π)` of the boundary crossings `P_0, P_1, …`.
    pub crossing_angles: Vec<f64>,
    pub cols: usize,
}

fn boundary_crossings(p: &MonicPolynomial, radius: f64) -> Vec<f64> {
    let f = |a: f64| p.eval(Complex64::from_polar(radius, a)).re;
    let samples = 512 * p.degree();
    let h = TAU / samples as f64;
    let mut out = Vec::new();
    let mut fa = f(0.0);
    for i in 1..=samples {
        let b = i as f64 * h;
        let fb = f(b);
        if fa == 0.0 {
            out.push((b - h).rem_euclid(TAU));
        } else if fa * fb < 0.0 {
            out.push(bisect(f, b - h, b, 1e-13));
        }
        fa = fb;
    }
    out
}

/// Matching from the domain label of each boundary arc: arc `a` runs from
/// `P_a` to `P_{a+1}`, and `P_{a+1}` is joined to the start of the next arc
/// of the same domain counterclockwise.
fn matching_from_arcs(arc_domain: &[usize]) -> Result<ChordDiagram> {
    let len = arc_domain.len();
    let mut partner = vec![usize::MAX; len];
    for a in 0..len {
        let next = (1..=len)
            .map(|k| (a + k) % len)
            .find(|&b| arc_domain[b] == arc_domain[a])
            .expect("arc matches itself");
        let p = (a + 1) % len;
        if partner[p] != usize::MAX && partner[p] != next {
            return Err(Error::Extraction("boundary arcs do not define a matching".into()));
        }
        partner[p] = next;
    }
    ChordDiagram::new(partner).map_err(|e| Error::Extraction(format!("extracted pairing invalid: {e}")))
}

fn diagram_at(p: &MonicPolynomial, radius: f64, angles: &[f64], cols: usize) -> Result<ChordDiagram> {
    let f = FnPlane(|x: f64, y: f64| p.eval(Complex64::new(x, y)).re);
    let grid = sample(FieldRef::Disc(&f, radius), cols)?;
    if grid.indeterminate_cells > 0 {
        return Err(Error::Singular("indeterminate cells in the window".into()));
    }
    let labels = label_domains(&grid);
    let ring = grid.rows - 1;
    let len = angles.len();
    let mut arc_domain = Vec::with_capacity(len);
    for a in 0..len {
        let (lo, mut hi) = (angles[a], angles[(a + 1) % len]);
        if hi <= lo {
            hi += TAU;
        }
        // ring vertices strictly inside the arc all lie in one domain
        let mut found: Option<usize> = None;
        for j in 0..cols {
            let mut phi = grid.phi(j as f64);
            if phi < lo {
                phi += TAU;
            }
            if phi > lo && phi < hi {
                let d = labels
                    .of(grid.idx(ring, j))
                    .ok_or_else(|| Error::Singular("zero sample on the boundary".into()))?;
                if found.is_some_and(|f| f != d) {
                    return Err(Error::Extraction(format!("arc {a} meets two domains")));
                }
                found = Some(d);
            }
        }
        arc_domain.push(found.ok_or_else(|| Error::Extraction(format!("arc {a} narrower than the grid")))?);
    }
    if labels.count() != len / 2 + 1 {
        return Err(Error::Extraction(format!(
            "{} domains in the window, expected {}",
            labels.count(),
            len / 2 + 1
        )));
    }
    matching_from_arcs(&arc_domain)
}

fn check_extractable(p: &MonicPolynomial) -> Result<usize> {
    let n = p.degree();
    if !(1..=8).contains(&n) {
        return domain(format!("planar extraction needs degree 1..=8, got {n}"));
    }
    let margin = p.singularity_margin();
    if margin < SINGULAR_MARGIN {
        return Err(Error::Singular(format!("critical value of Re p at relative size {margin:.3e}")));
    }
    Ok(n)
}

fn refine_diagram(p: &MonicPolynomial, radius: f64, angles: Vec<f64>) -> Result<PlanarDiagram> {
    let mut previous: Option<ChordDiagram> = None;
    let mut cols = 128;
    let mut last_err = None;
    while cols <= 2048 {
        match diagram_at(p, radius, &angles, cols) {
            Ok(d) => {
                if previous.as_ref() == Some(&d) {
                    return Ok(PlanarDiagram { diagram: d, radius, crossing_angles: angles, cols });
                }
                previous = Some(d);
            }
            Err(e) => {
                previous = None;
                last_err = Some(e);
            }
        }
        cols *= 2;
    }
    Err(last_err.unwrap_or_else(|| Error::Extraction("diagram not stable under refinement".into())))
}

/// Extract the diagram of `Re p = 0`. The window starts at twice the
/// Cauchy root radius and grows up to ×8 until the boundary carries `2n`
/// crossings; the diagram is accepted once two successive grid levels agree.
pub fn planar_zero_topology(p: &MonicPolynomial) -> Result<PlanarDiagram> {
    let n = check_extractable(p)?;
    let base = 2.0 * p.root_radius();
    let mut radius = base;
    let angles = loop {
        let a = boundary_crossings(p, radius);
        if a.len() == 2 * n {
            break a;
        }
        if radius >= 8.0 * base {
            return Err(Error::Extraction(format!(
                "{} boundary crossings at radius {radius}, expected {}",
                a.len(),
                2 * n
            )));
        }
        radius *= 2.0;
    };
    refine_diagram(p, radius, angles)
}

/// [`planar_zero_topology`] on a fixed window; fails unless the boundary
/// carries exactly `2n` crossings.
pub fn planar_zero_topology_at(p: &MonicPolynomial, radius: f64) -> Result<PlanarDiagram> {
    let n = check_extractable(p)?;
    if !(radius.is_finite() && radius > 0.0) {
        return domain(format!("window radius must be positive, got {radius}"));
    }
    let angles = boundary_crossings(p, radius);
    if angles.len() != 2 * n {
        return Err(Error::Extraction(format!("{} boundary crossings at radius {radius}, expected {}", angles.len(), 2 * n)));
    }
    refine_diagram(p, radius, angles)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn square_is_singular() {
        let z2 = MonicPolynomial::power(2).unwrap();
        assert!(matches!(planar_zero_topology(&z2), Err(Error::Singular(_))));
    }

    #[test]
    fn hyperbola_branches() {
        // Re(z² - 1) = x² - y² - 1: branches in the right and left half planes
        let p = MonicPolynomial::new(vec![c(-1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let d = planar_zero_topology(&p).unwrap();
        assert_eq!(d.diagram.to_string(), "0-3,1-2");
        assert!((d.crossing_angles[0] - std::f64::consts::FRAC_PI_4).abs() < 0.1);
    }

    #[test]
    fn linear_gives_single_chord() {
        let p = MonicPolynomial::new(vec![c(0.3, -0.2)]).unwrap();
        assert_eq!(planar_zero_topology(&p).unwrap().diagram.to_string(), "0-1");
    }

    #[test]
    fn arcs_to_matching() {
        // faces {0,2}, {1}, {3} on four arcs: chords 1-2 and 3-0
        let d = matching_from_arcs(&[0, 1, 0, 2]).unwrap();
        assert_eq!(d.to_string(), "0-3,1-2");
    }
}
