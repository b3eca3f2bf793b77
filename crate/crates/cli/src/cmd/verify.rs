use std::time::Instant;

use nodal_core::bounds::{courant_bound, karpushkin_bound, predicted_ovals, BoundReport};
use nodal_core::combinat::{
    enumerate_diagrams, face_sums_ok, faces_consistent, glue_antipodal, label_forest, orient_forest,
    random_forest, vertex_rule_ok,
};
use nodal_core::field::sphere_point;
use nodal_core::harmonics::SphericalHarmonicSpec;
use nodal_core::nodal::{refine_until_stable, FieldRef};
use nodal_core::specfun::{assoc_normalized, bessel_j, bessel_zeros, BesselOrder};
use nodal_core::SphereField;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use super::refine_options;
use crate::config::RunConfig;
use crate::output::{emit, envelope};
use crate::{usage, CliError};

/// Faults the harness can be asked to inject into its own checks.
pub const FAULTS: &[&str] = &["sign-flip"];

#[derive(Debug, Serialize)]
struct Check {
    name: &'static str,
    pass: bool,
    checked: usize,
    skipped: usize,
    /// First few failure messages.
    failures: String,
}

#[derive(Default)]
struct Tally {
    checked: usize,
    skipped: usize,
    failures: Vec<String>,
}

impl Tally {
    fn expect(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(msg());
        }
    }

    fn finish(self, name: &'static str) -> Check {
        let shown: Vec<String> = self.failures.iter().take(3).cloned().collect();
        Check {
            name,
            pass: self.failures.is_empty() && self.checked > 0,
            checked: self.checked,
            skipped: self.skipped,
            failures: shown.join("; "),
        }
    }
}

fn random_point(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    sphere_point(z.acos(), rng.gen_range(0.0..std::f64::consts::TAU))
}

fn antipodal_parity(rng: &mut ChaCha8Rng, harmonics: usize, flip: bool) -> Check {
    let mut t = Tally::default();
    for _ in 0..harmonics {
        let n = rng.gen_range(1..=10);
        let spec = SphericalHarmonicSpec::random_mixture(n, rng).expect("valid degree");
        let f = spec.field();
        let mut s = if n % 2 == 0 { 1.0 } else { -1.0 };
        if flip {
            s = -s;
        }
        for _ in 0..100 {
            let p = random_point(rng);
            let (v, scale) = f.eval_scaled(p);
            let w = f.eval([-p[0], -p[1], -p[2]]);
            t.expect((w - s * v).abs() <= 1e-9 * scale.max(f64::MIN_POSITIVE), || {
                format!("degree {n}: f(-p) = {w:e}, expected {:e}", s * v)
            });
        }
    }
    t.finish("antipodal_parity")
}

fn euler_and_bounds(rng: &mut ChaCha8Rng, samples: usize, max_degree: u32, config: &RunConfig) -> Check {
    let mut t = Tally::default();
    for _ in 0..samples {
        let n = rng.gen_range(2..=max_degree);
        let spec = SphericalHarmonicSpec::random_mixture(n, rng).expect("valid degree");
        let f = spec.field();
        let topo = match refine_until_stable(FieldRef::Sphere(&f), refine_options(config)) {
            Ok(r) if r.topology.stable => r.topology,
            _ => {
                t.skipped += 1;
                continue;
            }
        };
        let report = BoundReport::new(n, topo.components as u64, topo.domains as u64).expect("degree in range");
        t.expect(topo.euler_ok() && report.all_ok(), || {
            format!("degree {n}: {} components, {} domains", topo.components, topo.domains)
        });
    }
    t.finish("euler_and_bounds")
}

fn bound_ordering() -> Check {
    let mut t = Tally::default();
    for n in 2..=64u32 {
        let (k, c) = (karpushkin_bound(n).expect("n >= 2"), courant_bound(n).expect("n >= 1"));
        t.expect(k <= c, || format!("n = {n}: karpushkin {k} > courant {c}"));
        if n >= 3 {
            let p = predicted_ovals(n).expect("n >= 3").value();
            t.expect(p <= k, || format!("n = {n}: predicted {p} > karpushkin {k}"));
        }
    }
    t.finish("bound_ordering")
}

fn special_functions() -> Check {
    let mut t = Tally::default();
    for n in 0..=20 {
        for k in 0..=n {
            let v = assoc_normalized(n, k, 1.0).expect("k <= n <= 20");
            t.expect((v - 1.0).abs() <= 1e-12, || format!("F_{n}^{k}(1) = {v}"));
        }
    }
    let j1 = bessel_zeros(BesselOrder::J1, 50).expect("table");
    let j0 = bessel_zeros(BesselOrder::J0, 51).expect("table");
    for w in j1.zeros.windows(2) {
        t.expect(w[1] - w[0] > 3.0, || format!("J1 gap {} at {}", w[1] - w[0], w[0]));
        let inside = j0.zeros.iter().filter(|&&z| w[0] < z && z < w[1]).count();
        t.expect(inside == 1, || format!("{inside} J0 zeros between {} and {}", w[0], w[1]));
    }
    for (order, table) in [(BesselOrder::J0, &j0), (BesselOrder::J1, &j1)] {
        for &z in &table.zeros {
            let j = |x: f64| bessel_j(order, x).expect("in range");
            t.expect(j(z).abs() < 1e-9 && j(z - 1e-6) * j(z + 1e-6) < 0.0, || format!("{order:?} zero {z}"));
        }
    }
    t.finish("special_functions")
}

fn glue_parity(max_n: usize) -> Check {
    let mut t = Tally::default();
    for n in 1..=max_n {
        for d in enumerate_diagrams(n).expect("n <= 8") {
            let c = glue_antipodal(&d).components;
            t.expect(c % 2 == n % 2, || format!("{d}: {c} components"));
        }
    }
    t.finish("glue_parity")
}

fn forest_invariants(rng: &mut ChaCha8Rng, forests: usize) -> Check {
    let mut t = Tally::default();
    for _ in 0..forests {
        let f = random_forest(rng, 20);
        let labels_ok = label_forest(&f).is_ok_and(|l| face_sums_ok(&f, &l));
        let orient_ok = orient_forest(&f).is_ok_and(|o| vertex_rule_ok(&f, &o) && faces_consistent(&f, &o));
        t.expect(labels_ok && orient_ok, || format!("forest {f}: labels {labels_ok}, orientation {orient_ok}"));
    }
    t.finish("forest_invariants")
}

pub fn run(fault: Option<&str>, config: &RunConfig) -> Result<bool, CliError> {
    if let Some(f) = fault {
        if !FAULTS.contains(&f) {
            return usage(format!("unknown fault {f:?}; known: {}", FAULTS.join(", ")));
        }
    }
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (harmonics, samples, max_degree, max_n, forests) =
        if config.quick { (5, 20, 6, 4, 20) } else { (20, 100, 10, 5, 200) };
    let checks = vec![
        antipodal_parity(&mut rng, harmonics, fault == Some("sign-flip")),
        euler_and_bounds(&mut rng, samples, max_degree, config),
        bound_ordering(),
        special_functions(),
        glue_parity(max_n),
        forest_invariants(&mut rng, forests),
    ];
    let pass = checks.iter().all(|c| c.pass);
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
    let body = json!({ "fault": fault, "failed": failed, "rows": checks });
    let report = envelope("verify", config, pass, body);
    emit(config, "verify", &report, &[])?;
    eprintln!("verify finished in {:.1} s", started.elapsed().as_secs_f64());
    Ok(pass)
}
