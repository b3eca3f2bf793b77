use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{sphere_point, PlaneField, SphereField};

/// Smallest and largest number of azimuthal samples.
pub const MIN_COLS: usize = 64;
pub const MAX_COLS: usize = 8192;

/// A vertex is treated as an exact zero when its value is below this
/// fraction of the magnitude of the terms that produced it.
pub const ZERO_TOL: f64 = 1e-12;

/// Sampling surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Surface {
    /// Equirectangular sphere; both pole rows collapse to one vertex.
    Sphere,
    /// Polar grid on the disc `r ≤ radius`; the centre row collapses and the
    /// outer row is the boundary.
    Disc { radius: f64 },
}

/// Field to be sampled, tagged with its surface.
#[derive(Clone, Copy)]
pub enum FieldRef<'a> {
    Sphere(&'a dyn SphereField),
    Disc(&'a dyn PlaneField, f64),
}

impl FieldRef<'_> {
    pub fn surface(&self) -> Surface {
        match self {
            FieldRef::Sphere(_) => Surface::Sphere,
            FieldRef::Disc(_, radius) => Surface::Disc { radius: *radius },
        }
    }
}

/// Field samples on a `rows × cols` grid.
///
/// Row `i` sits at polar angle `π i/(rows-1)` (sphere) or radius
/// `R i/(rows-1)` (disc); column `j` at azimuth `2π (j + ½)/cols`. With
/// `cols` divisible by four, `rows = cols/2 + 1` is odd and the antipodal map
/// sends vertex `(i, j)` to `(rows-1-i, j + cols/2)`.
#[derive(Debug, Clone)]
pub struct SampledGrid {
    pub surface: Surface,
    pub rows: usize,
    pub cols: usize,
    pub values: Vec<f64>,
    pub zero: Vec<bool>,
    pub indeterminate_cells: usize,
}

impl SampledGrid {
    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.cols + (j % self.cols)
    }

    pub fn is_sphere(&self) -> bool {
        matches!(self.surface, Surface::Sphere)
    }

    /// Whether row `i` is a single logical vertex.
    pub fn collapsed(&self, i: usize) -> bool {
        i == 0 || (self.is_sphere() && i == self.rows - 1)
    }

    pub fn row_coord(&self, i: usize) -> f64 {
        row_coord(self.surface, self.rows, i)
    }

    pub fn phi(&self, j: f64) -> f64 {
        TAU * (j + 0.5) / self.cols as f64
    }

    /// Positive-side flag used for curve tracing; exact zeros count as
    /// positive.
    #[inline]
    pub fn pos(&self, v: usize) -> bool {
        self.zero[v] || self.values[v] > 0.0
    }

    pub fn zero_vertices(&self) -> usize {
        let mut n = 0;
        for i in 0..self.rows {
            if self.collapsed(i) {
                n += self.zero[self.idx(i, 0)] as usize;
            } else {
                n += (0..self.cols).filter(|&j| self.zero[self.idx(i, j)]).count();
            }
        }
        n
    }

    pub fn cell_count(&self) -> usize {
        (self.rows - 1) * self.cols
    }

    /// Point in surface coordinates for fractional grid position
    /// `(i, j)`: `(φ, θ)` on the sphere, `(x, y)` on the disc.
    pub fn position(&self, i: f64, j: f64) -> [f64; 2] {
        let phi = self.phi(j);
        match self.surface {
            Surface::Sphere => [phi, PI * i / (self.rows - 1) as f64],
            Surface::Disc { radius } => {
                let r = radius * i / (self.rows - 1) as f64;
                [r * phi.cos(), r * phi.sin()]
            }
        }
    }
}

fn row_coord(surface: Surface, rows: usize, i: usize) -> f64 {
    let f = i as f64 / (rows - 1) as f64;
    match surface {
        Surface::Sphere => {
            if i == rows - 1 {
                PI
            } else {
                PI * f
            }
        }
        Surface::Disc { radius } => radius * f,
    }
}

pub fn check_cols(cols: usize) -> Result<()> {
    if !(MIN_COLS..=MAX_COLS).contains(&cols) || cols % 4 != 0 {
        return Err(Error::Domain(format!(
            "resolution {cols} must be a multiple of 4 within {MIN_COLS}..={MAX_COLS}"
        )));
    }
    Ok(())
}

/// Sample `field` with `cols` azimuthal samples.
pub fn sample(field: FieldRef<'_>, cols: usize) -> Result<SampledGrid> {
    check_cols(cols)?;
    let surface = field.surface();
    let rows = cols / 2 + 1;
    let mut values = vec![0.0; rows * cols];
    let mut zero = vec![false; rows * cols];
    values
        .par_chunks_mut(cols)
        .zip(zero.par_chunks_mut(cols))
        .enumerate()
        .for_each(|(i, (vrow, zrow))| {
            let c = row_coord(surface, rows, i);
            let collapsed = i == 0 || (surface == Surface::Sphere && i == rows - 1);
            let eval = |phi: f64| -> (f64, f64) {
                match field {
                    FieldRef::Sphere(f) => f.eval_scaled(sphere_point(c, phi)),
                    FieldRef::Disc(f, _) => {
                        if c == 0.0 {
                            f.eval_scaled(0.0, 0.0)
                        } else {
                            f.eval_scaled(c * phi.cos(), c * phi.sin())
                        }
                    }
                }
            };
            if collapsed {
                let (v, s) = eval(0.0);
                vrow.fill(v);
                zrow.fill(v.abs() <= ZERO_TOL * s);
            } else {
                for j in 0..cols {
                    let (v, s) = eval(TAU * (j as f64 + 0.5) / cols as f64);
                    vrow[j] = v;
                    zrow[j] = v.abs() <= ZERO_TOL * s;
                }
            }
        });
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("field produced non-finite value {bad}")));
    }
    let mut grid = SampledGrid { surface, rows, cols, values, zero, indeterminate_cells: 0 };
    let mut indeterminate = 0;
    for i in 0..rows - 1 {
        for j in 0..cols {
            let c = [grid.idx(i, j), grid.idx(i, j + 1), grid.idx(i + 1, j + 1), grid.idx(i + 1, j)];
            if c.iter().all(|&v| grid.zero[v]) {
                indeterminate += 1;
            }
        }
    }
    grid.indeterminate_cells = indeterminate;
    if cols == MAX_COLS && indeterminate as f64 > 0.01 * grid.cell_count() as f64 {
        return Err(Error::Singular(format!(
            "{indeterminate} indeterminate cells at the finest resolution"
        )));
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FnPlane, FnSphere};

    #[test]
    fn layout_and_collapse() {
        let f = FnSphere(|p: [f64; 3]| p[2] + 0.1 * p[0]);
        let g = sample(FieldRef::Sphere(&f), 64).unwrap();
        assert_eq!((g.rows, g.cols), (33, 64));
        assert!(g.values[..64].iter().all(|&v| v == g.values[0]));
        assert_eq!(g.values[0], 1.0);
        assert_eq!(g.values[g.idx(32, 5)], -1.0);
        assert_eq!(g.indeterminate_cells, 0);
    }

    #[test]
    fn antipodal_index_map() {
        let f = FnSphere(|p: [f64; 3]| p[0] + 2.0 * p[1] - 0.5 * p[2]);
        let g = sample(FieldRef::Sphere(&f), 128).unwrap();
        for i in 0..g.rows {
            for j in 0..g.cols {
                let a = g.values[g.idx(i, j)];
                let b = g.values[g.idx(g.rows - 1 - i, j + g.cols / 2)];
                assert!((a + b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_field_is_indeterminate() {
        let f = FnPlane(|_: f64, _: f64| 0.0);
        let g = sample(FieldRef::Disc(&f, 1.0), 64).unwrap();
        assert_eq!(g.indeterminate_cells, g.cell_count());
        let z = FnSphere(|_: [f64; 3]| 0.0);
        assert!(matches!(sample(FieldRef::Sphere(&z), MAX_COLS), Err(Error::Singular(_))));
    }

    #[test]
    fn rejects_bad_resolution() {
        let f = FnSphere(|p: [f64; 3]| p[2]);
        assert!(sample(FieldRef::Sphere(&f), 32).is_err());
        assert!(sample(FieldRef::Sphere(&f), 66).is_err());
    }
}
