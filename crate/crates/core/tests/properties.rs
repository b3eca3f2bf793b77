use nodal_core::combinat::{
    enumerate_diagrams, glue_antipodal, planar_zero_topology, planar_zero_topology_at, ChordDiagram,
};
use nodal_core::field::sphere_point;
use nodal_core::harmonics::ovals::{choose_rotation, perturbed_spec, sphere_crossings, verify_perturber_signs, OvalOptions};
use nodal_core::harmonics::{rescaled_lewy, LewyLiftSpec, PlanarEigenSpec, PlanarWhich, SphericalHarmonicSpec};
use nodal_core::nodal::UnionFind;
use nodal_core::poly::MonicPolynomial;
use nodal_core::{PlaneField, SphereField};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn mixture(degree: u32, seed: u64) -> SphericalHarmonicSpec {
    SphericalHarmonicSpec::random_mixture(degree, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

fn unit(theta: f64, phi: f64) -> [f64; 3] {
    sphere_point(theta, phi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn antipodal_parity(degree in 1u32..=12, seed in any::<u64>()) {
        let f = mixture(degree, seed).field();
        let sign = if degree % 2 == 0 { 1.0 } else { -1.0 };
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for _ in 0..500 {
            let z: f64 = rand::Rng::gen_range(&mut rng, -1.0..=1.0);
            let p = unit(z.acos(), rand::Rng::gen_range(&mut rng, 0.0..std::f64::consts::TAU));
            let (v, scale) = f.eval_scaled(p);
            let w = f.eval([-p[0], -p[1], -p[2]]);
            prop_assert!((w - sign * v).abs() <= 1e-9 * scale, "f(-p) = {w}, f(p) = {v}");
        }
    }

    #[test]
    fn laplace_beltrami_eigenvalue(degree in 1u32..=8, seed in any::<u64>(), theta in 0.2f64..2.9, phi in 0.0f64..6.28) {
        // the degree-0 extension g(x) = f(x/|x|) has Δg = Δ_S f on the sphere
        let f = mixture(degree, seed).field();
        let g = |x: [f64; 3]| {
            let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
            f.eval([x[0] / r, x[1] / r, x[2] / r])
        };
        let p = unit(theta, phi);
        let h = 1e-3;
        let mut lap = 0.0;
        for i in 0..3 {
            let (mut a, mut b) = (p, p);
            a[i] += h;
            b[i] -= h;
            lap += (g(a) - 2.0 * g(p) + g(b)) / (h * h);
        }
        let lambda = (degree * (degree + 1)) as f64;
        let (v, scale) = f.eval_scaled(p);
        prop_assert!((lap + lambda * v).abs() <= 1e-3 * lambda * scale, "Δf = {lap}, -λf = {}", -lambda * v);
    }

    #[test]
    fn planar_helmholtz_constant(x0 in -12.0f64..12.0, y0 in -12.0f64..12.0, eps in 0.0f64..0.2) {
        let spec = PlanarEigenSpec::new(0.5, 0.25, eps, 15.0).unwrap();
        let h = spec.field(PlanarWhich::H);
        let step = 1e-3;
        let mut ratios = Vec::new();
        for k in 0..5 {
            let (x, y) = (x0 + 0.37 * k as f64, y0 - 0.29 * k as f64);
            let v = h.eval(x, y);
            let lap = (h.eval(x + step, y) + h.eval(x - step, y) + h.eval(x, y + step) + h.eval(x, y - step) - 4.0 * v)
                / (step * step);
            prop_assert!((lap + v).abs() <= 1e-5, "Δh + h = {} at ({x}, {y})", lap + v);
            if v.abs() > 0.02 {
                ratios.push(lap / v);
            }
        }
        for w in ratios.windows(2) {
            prop_assert!((w[0] - w[1]).abs() <= 1e-3, "Δh/h varies: {} vs {}", w[0], w[1]);
        }
    }

    #[test]
    fn lewy_rescaling_converges(roots in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=4)) {
        let roots: Vec<Complex64> = roots.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        let p = MonicPolynomial::from_roots(&roots).unwrap();
        let mut previous = f64::INFINITY;
        for t in [0.2, 0.1, 0.05, 0.025] {
            let spec = LewyLiftSpec::new(&p, t).unwrap();
            let mut sup = 0.0f64;
            for i in 0..=20 {
                for j in 0..80 {
                    let z = Complex64::from_polar(2.0 * i as f64 / 20.0, std::f64::consts::TAU * j as f64 / 80.0);
                    sup = sup.max((rescaled_lewy(&spec, z).unwrap() - p.eval(z).re).abs());
                }
            }
            prop_assert!(sup < previous, "sup {sup} at t = {t} after {previous}");
            previous = sup;
        }
    }

    #[test]
    fn perturber_signs_ignore_epsilon(n in 3u32..=12, log_eps in -8.0f64..-2.0) {
        let chosen = choose_rotation(n, &OvalOptions::default()).unwrap();
        let crossings = sphere_crossings(n).unwrap();
        let spec = perturbed_spec(n, 10f64.powf(log_eps), chosen.rotation).unwrap();
        let report = verify_perturber_signs(&spec, &crossings).unwrap();
        prop_assert!(report.pass);
        prop_assert_eq!(report.signs, chosen.signs.signs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn planar_diagram_survives_larger_window(roots in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=4)) {
        let roots: Vec<Complex64> = roots.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        let p = MonicPolynomial::from_roots(&roots).unwrap();
        // nearly singular draws are outside the property
        let Ok(d) = planar_zero_topology(&p) else { return Ok(()) };
        let wide = planar_zero_topology_at(&p, 2.0 * d.radius).unwrap();
        prop_assert!(wide.diagram.equivalent(&d.diagram), "{} vs {}", wide.diagram, d.diagram);
    }
}

/// Curves of the glued system from 4n half-edges: an upper and a lower
/// half-edge at each boundary point, joined by the upper chords, the lower
/// (antipodal) chords and the equator crossings.
fn half_edge_components(d: &ChordDiagram) -> usize {
    let (n, len) = (d.n(), d.points());
    let upper = |i: usize| i;
    let lower = |i: usize| len + i;
    let mut uf = UnionFind::new(2 * len);
    for i in 0..len {
        uf.union(upper(i), upper(d.partner(i)));
        // lower copy: point q pairs with D(q - n) + n
        let q = (d.partner((i + len - n) % len) + n) % len;
        uf.union(lower(i), lower(q));
        uf.union(upper(i), lower(i));
    }
    (0..2 * len).filter(|&v| uf.find(v) == v).count()
}

#[test]
fn glued_parity_exhaustive() {
    for n in 1..=5 {
        for d in enumerate_diagrams(n).unwrap() {
            let g = glue_antipodal(&d);
            let oracle = half_edge_components(&d);
            assert_eq!(g.components, oracle, "{d}");
            assert_eq!(oracle % 2, n % 2, "{d}");
            assert_eq!(g.regions, g.components + 1, "{d}");
        }
    }
}
