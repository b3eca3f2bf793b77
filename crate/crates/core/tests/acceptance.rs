//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any fails.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use nodal_core::bounds::{courant_bound, karpushkin_bound, OvalPrediction};
use nodal_core::combinat::{
    enumerate_diagrams, glue_antipodal, label_forest, planar_zero_topology, random_forest, realize_diagram_search,
    EdgeKey, EmbeddedForest,
};
use nodal_core::harmonics::ovals::{ovals_spec, OvalOptions};
use nodal_core::harmonics::{
    adaptive_lewy, adaptive_planar, rescaled_lewy, LewyLiftSpec, LewyOptions, PlanarEigenSpec, PlanarOptions,
    SphericalHarmonicSpec,
};
use nodal_core::nodal::{refine_until_stable, FieldRef, RefineOptions};
use nodal_core::poly::MonicPolynomial;
use nodal_core::specfun::{assoc_normalized, bessel_j, bessel_zeros, BesselOrder};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 2024;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn oval_counts() -> Outcome {
    let options = OvalOptions { refine: RefineOptions { start_cols: 128, max_cols: 2048 }, ..OvalOptions::default() };
    let cases = [
        (7, OvalPrediction::Exact(13)),
        (11, OvalPrediction::Exact(31)),
        (6, OvalPrediction::Exact(12)),
        (10, OvalPrediction::Exact(30)),
        (5, OvalPrediction::AtLeast(5)),
        (9, OvalPrediction::AtLeast(17)),
    ];
    let mut seen = Vec::new();
    for (n, expected) in cases {
        let started = Instant::now();
        let c = ovals_spec(n, &options).map_err(|e| format!("n = {n}: {e}"))?;
        let elapsed = started.elapsed();
        let t = &c.refined.topology;
        ensure(c.prediction == expected, || format!("n = {n}: predicted {:?}", c.prediction))?;
        ensure(expected.accepts(t.components as u64), || format!("n = {n}: {} components", t.components))?;
        ensure(t.stable, || format!("n = {n}: not refinement-stable"))?;
        ensure(t.resolution[1] <= 2048, || format!("n = {n}: resolution {:?}", t.resolution))?;
        ensure(elapsed < Duration::from_secs(180), || format!("n = {n}: took {elapsed:?}"))?;
        seen.push(format!("{n}->{}", t.components));
    }
    Ok(seen.join(" "))
}

fn two_domains() -> Outcome {
    let mut seen = Vec::new();
    for radius in [10.0, 15.0, 20.0] {
        let started = Instant::now();
        let base = PlanarEigenSpec::new(0.5, 0.25, 0.0, radius).map_err(|e| e.to_string())?;
        let c = adaptive_planar(&base, &PlanarOptions::default()).map_err(|e| format!("R = {radius}: {e}"))?;
        let elapsed = started.elapsed();
        let t = &c.refined.topology;
        ensure(t.domains == 2 && t.stable, || format!("R = {radius}: {} domains, stable {}", t.domains, t.stable))?;
        ensure(elapsed < Duration::from_secs(120), || format!("R = {radius}: took {elapsed:?}"))?;
        seen.push(format!("R={radius} eps={}", c.spec.epsilon));
    }
    Ok(seen.join(" "))
}

fn euler_parity_sweep() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let refine = RefineOptions { start_cols: 128, max_cols: 2048 };
    let (mut stable, mut unstable) = (0, 0);
    for i in 0..100 {
        let n = 2 + (i % 9) as u32;
        let spec = SphericalHarmonicSpec::random_mixture(n, &mut rng).map_err(|e| e.to_string())?;
        let field = spec.field();
        let t = match refine_until_stable(FieldRef::Sphere(&field), refine) {
            Ok(r) if r.topology.stable => r.topology,
            _ => {
                unstable += 1;
                continue;
            }
        };
        stable += 1;
        let (c, d) = (t.components as u64, t.domains as u64);
        let k = karpushkin_bound(n).map_err(|e| e.to_string())?;
        let courant = courant_bound(n).map_err(|e| e.to_string())?;
        ensure(d == c + 1, || format!("harmonic {i} (n = {n}): {d} domains, {c} components"))?;
        ensure(c % 2 == n as u64 % 2, || format!("harmonic {i} (n = {n}): {c} components, wrong parity"))?;
        ensure(d <= courant, || format!("harmonic {i} (n = {n}): {d} domains > {courant}"))?;
        ensure(c <= k, || format!("harmonic {i} (n = {n}): {c} components > {k}"))?;
    }
    ensure(stable > 0, || "no stable extraction".into())?;
    Ok(format!("{stable} stable, {unstable} unstable, zero violations"))
}

fn lewy_battery() -> Outcome {
    let c = Complex64::new;
    let battery = [
        vec![c(-1.0, 0.0), c(1.0, 0.0)],
        vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        vec![c(0.5, 0.5), c(-0.7, 0.2), c(0.1, -0.8)],
        vec![c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)],
        vec![c(0.9, 0.1), c(0.2, 0.6), c(-0.6, -0.3), c(-0.1, -0.9)],
    ];
    let mut seen = Vec::new();
    for roots in battery {
        let p = MonicPolynomial::from_roots(&roots).map_err(|e| e.to_string())?;
        let n = p.degree();
        let planar = planar_zero_topology(&p).map_err(|e| format!("degree {n}: {e}"))?;
        let glued = glue_antipodal(&planar.diagram);
        let lift = adaptive_lewy(&p, &LewyOptions::default()).map_err(|e| format!("degree {n}: {e}"))?;
        let t = &lift.refined.topology;
        ensure(t.components == glued.components && t.nesting == glued.region_tree, || {
            format!(
                "{}: sphere {} / {}, glued {} / {}",
                planar.diagram, t.components, t.nesting, glued.components, glued.region_tree
            )
        })?;

        // sup over a polar sample of |z| <= 2
        let mut previous = f64::INFINITY;
        for t in [0.2, 0.1, 0.05, 0.025] {
            let spec = LewyLiftSpec::new(&p, t).map_err(|e| e.to_string())?;
            let mut sup = 0.0f64;
            for i in 0..=40 {
                for j in 0..160 {
                    let z = Complex64::from_polar(2.0 * i as f64 / 40.0, std::f64::consts::TAU * j as f64 / 160.0);
                    let v = rescaled_lewy(&spec, z).map_err(|e| e.to_string())?;
                    sup = sup.max((v - p.eval(z).re).abs());
                }
            }
            ensure(sup < previous, || format!("{}: sup {sup:e} at t = {t} not below {previous:e}", planar.diagram))?;
            previous = sup;
        }
        seen.push(format!("{}:{}", planar.diagram, t.components));
    }
    Ok(seen.join(" "))
}

fn combinatorics() -> Outcome {
    let counts: Vec<usize> =
        (1..=5).map(|n| enumerate_diagrams(n).map(|d| d.len())).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    ensure(counts == [1, 2, 5, 14, 42], || format!("counts {counts:?}"))?;
    for n in 1..=5 {
        for d in enumerate_diagrams(n).map_err(|e| e.to_string())? {
            let c = glue_antipodal(&d).components;
            ensure(c % 2 == n % 2, || format!("{d}: {c} glued components"))?;
        }
    }
    let mut worst = HashMap::new();
    for (n, budget) in [(3, 10_000), (4, 100_000)] {
        for d in enumerate_diagrams(n).map_err(|e| e.to_string())? {
            let r = realize_diagram_search(&d, budget, SEED).map_err(|e| e.to_string())?;
            ensure(r.found && r.trials <= budget, || format!("{d}: not realized in {budget} trials"))?;
            ensure(r.extracted.as_ref() == Some(&d), || format!("{d}: extracted {:?}", r.extracted))?;
            let w = worst.entry(n).or_insert(0);
            *w = (*w).max(r.trials);
        }
    }
    Ok(format!("counts {counts:?}, parity ok, max trials n=3: {}, n=4: {}", worst[&3], worst[&4]))
}

fn key(a: usize, b: usize) -> EdgeKey {
    (a.min(b), a.max(b))
}

/// Faces as lists of directed edges, walked with the face on the left:
/// at an internal vertex turn to the clockwise neighbour of the incoming
/// edge; at a leaf continue along the circle at infinity to the next leaf.
/// Returns each face's edges and its number of arcs at infinity.
fn walk_faces(f: &EmbeddedForest) -> Vec<(Vec<(usize, usize)>, usize)> {
    let mut darts = Vec::new();
    for t in 0..f.tree_count() {
        for (a, b) in f.tree_edges(t) {
            darts.push((a, b));
            darts.push((b, a));
        }
    }
    let mut used = std::collections::HashSet::new();
    let mut out = Vec::new();
    for &start in &darts {
        if !used.insert(start) {
            continue;
        }
        let (mut walk, mut arcs) = (vec![start], 0);
        let mut d = start;
        loop {
            let (u, v) = d;
            d = match f.position(v) {
                Some(q) => {
                    arcs += 1;
                    let w = f.leaf_at((q + 1) % f.points());
                    (w, f.neighbours(w)[0])
                }
                None => {
                    let nb = f.neighbours(v);
                    let i = nb.iter().position(|&x| x == u).expect("adjacent");
                    (v, nb[(i + nb.len() - 1) % nb.len()])
                }
            };
            if d == start {
                break;
            }
            used.insert(d);
            walk.push(d);
        }
        out.push((walk, arcs));
    }
    out
}

/// Orientations of one tree in which the edges alternate in and out around
/// every internal vertex, counted by backtracking.
fn count_orientations(f: &EmbeddedForest, t: usize) -> usize {
    let edges = f.tree_edges(t);
    let index: HashMap<EdgeKey, usize> = edges.iter().enumerate().map(|(i, &(a, b))| (key(a, b), i)).collect();
    let internal: Vec<usize> = {
        let mut vs: Vec<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).filter(|&v| f.position(v).is_none()).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    };
    // head[i]: Some(vertex the edge points to)
    fn rec(
        f: &EmbeddedForest,
        edges: &[(usize, usize)],
        index: &HashMap<EdgeKey, usize>,
        internal: &[usize],
        head: &mut Vec<Option<usize>>,
        i: usize,
    ) -> usize {
        let violated = internal.iter().any(|&v| {
            let nb = f.neighbours(v);
            (0..nb.len()).any(|k| {
                let a = head[index[&key(v, nb[k])]];
                let b = head[index[&key(v, nb[(k + 1) % nb.len()])]];
                matches!((a, b), (Some(x), Some(y)) if (x == v) == (y == v))
            })
        });
        if violated {
            return 0;
        }
        if i == edges.len() {
            return 1;
        }
        let (a, b) = edges[i];
        let mut total = 0;
        for h in [a, b] {
            head[i] = Some(h);
            total += rec(f, edges, index, internal, head, i + 1);
        }
        head[i] = None;
        total
    }
    let mut head = vec![None; edges.len()];
    rec(f, &edges, &index, &internal, &mut head, 0)
}

fn forest_labels() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut faces_checked, mut max_edges) = (0, 0);
    for i in 0..200 {
        let f = random_forest(&mut rng, 20);
        let edge_count: usize = (0..f.tree_count()).map(|t| f.tree_edges(t).len()).sum();
        ensure(edge_count <= 20, || format!("forest {i}: {edge_count} edges"))?;
        max_edges = max_edges.max(edge_count);
        let labels = label_forest(&f).map_err(|e| format!("forest {i} ({f}): {e}"))?;
        for (walk, arcs) in walk_faces(&f) {
            let sum: Ratio<i64> = walk.iter().map(|&(a, b)| labels[&key(a, b)]).sum();
            ensure(sum == Ratio::from_integer(2 * arcs as i64), || {
                format!("forest {i} ({f}): face sum {sum}π over {arcs} arcs")
            })?;
            ensure(labels.values().all(|x| *x > Ratio::zero()), || format!("forest {i}: nonpositive label"))?;
            faces_checked += 1;
        }
        for t in 0..f.tree_count() {
            let c = count_orientations(&f, t);
            ensure(c == 2, || format!("forest {i} ({f}) tree {t}: {c} orientations"))?;
        }
    }
    Ok(format!("200 forests, up to {max_edges} edges, {faces_checked} faces exact"))
}

/// `J_order(x)` from the power series in fixed point with `bits` fractional
/// bits; `x` is converted exactly.
fn bessel_oracle(order: u32, x: f64, bits: u32) -> f64 {
    let one = BigInt::one() << bits;
    let fixed = |v: f64| -> BigInt {
        let (mant, exp, sign) = num_traits::float::FloatCore::integer_decode(v);
        let m = BigInt::from(mant) * sign;
        let shift = exp as i64 + bits as i64;
        if shift >= 0 {
            m << shift as usize
        } else {
            m >> (-shift) as usize
        }
    };
    let half = fixed(x) >> 1usize;
    let q = (&half * &half) >> bits as usize; // (x/2)²
    let mut term = one.clone();
    for _ in 0..order {
        term = (&term * &half) >> bits as usize;
    }
    let mut sum = term.clone();
    let mut k: u64 = 1;
    loop {
        term = -(&term * &q >> bits as usize) / BigInt::from(k * (k + order as u64));
        if term.is_zero() || (k as f64 > x && term.abs() < BigInt::one() << (bits as usize / 4)) {
            break;
        }
        sum += &term;
        k += 1;
    }
    let top = sum >> (bits as usize - 64);
    top.to_f64().expect("finite") / 2f64.powi(64)
}

fn special_functions() -> Outcome {
    for n in 0..=20 {
        for k in 0..=n {
            let v = assoc_normalized(n, k, 1.0).map_err(|e| e.to_string())?;
            ensure(v == 1.0, || format!("F_{n}^{k}(1) = {v}"))?;
        }
    }
    let zeros = bessel_zeros(BesselOrder::J1, 50).map_err(|e| e.to_string())?;
    let min_gap = zeros.zeros.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    ensure(zeros.count() == 50 && min_gap > 3.0, || format!("min J1 gap {min_gap}"))?;

    let mut worst = 0.0f64;
    for i in 0..=1000 {
        let x = 50.0 * i as f64 / 1000.0;
        for (order, b) in [(0, BesselOrder::J0), (1, BesselOrder::J1)] {
            let v = bessel_j(b, x).map_err(|e| e.to_string())?;
            let err = (v - bessel_oracle(order, x, 400)).abs();
            ensure(err <= 1e-10, || format!("J{order}({x}): error {err:e}"))?;
            worst = worst.max(err);
        }
    }
    Ok(format!("F(1) exact for n <= 20, min J1 gap {min_gap:.4}, max Bessel error {worst:.2e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("oval counts", oval_counts),
        ("two nodal domains", two_domains),
        ("euler and parity sweep", euler_parity_sweep),
        ("lewy lift pipeline", lewy_battery),
        ("chord diagram combinatorics", combinatorics),
        ("forest labels and orientations", forest_labels),
        ("special functions", special_functions),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let started = Instant::now();
        let outcome = run();
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name} ({secs:.1} s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name} ({secs:.1} s): {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 7 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
