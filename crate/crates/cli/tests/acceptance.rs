//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_core::lelong::{
    chern_convergence, direction_net_sequence, envelope_reconstruct, growth_check, limsup_weight,
    positive_direction_net, vertex_monomial_sequence, EnvelopeConfig, GrowthConfig, SearchFamilies,
};
use toric_core::sections::{graded_slice, lifted_cone, proper_faces_simplicial, vertex_chart_generators};
use toric_core::{
    lattice_points, BigInt, GridSpec, Rational, RationalVector, Sample, ToricWeights, WeightGrid,
};
use toric_lab::{fixture, fixture_names, parse_experiment, run_experiment, Variety};

fn load(name: &str) -> Variety {
    fixture(name).unwrap().load().unwrap()
}

fn rays(v: &Variety) -> Vec<Vec<i64>> {
    v.spec.rays.clone()
}

/// `dP_D ∩ Z^n` by scanning a box, lexicographic.
fn box_points(v: &Variety, d: i64, bound: i64) -> Vec<Vec<i64>> {
    let rays = rays(v);
    let a = &v.spec.divisor;
    let n = v.spec.dim;
    let mut out = Vec::new();
    let total = (2 * bound + 1).pow(n as u32);
    for k in 0..total {
        let mut rest = k;
        let mut m = vec![0i64; n];
        for c in (0..n).rev() {
            m[c] = rest % (2 * bound + 1) - bound;
            rest /= 2 * bound + 1;
        }
        let ok = rays
            .iter()
            .zip(a)
            .all(|(r, ai)| r.iter().zip(&m).map(|(x, y)| x * y).sum::<i64>() >= -d * ai);
        if ok {
            out.push(m);
        }
    }
    out
}

fn as_i64s(v: &toric_core::LatticeVector) -> Vec<i64> {
    v.to_i64s().unwrap()
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn ampleness() -> Outcome {
    let mut bad = Vec::new();
    for name in ["p2_o1", "p2_o2", "p1xp1_o11", "p1_o1", "p1_o2"] {
        if !load(name).phi.is_ample() {
            bad.push(format!("{name} not ample"));
        }
    }
    let h = load("hirzebruch1_fiber").phi;
    if !h.is_basepoint_free() || h.is_ample() {
        bad.push("hirzebruch1_fiber".into());
    }
    let a = load("p2_antiample").phi;
    if a.is_basepoint_free() || a.is_ample() || a.is_very_ample() {
        bad.push("p2_antiample".into());
    }
    outcome(bad.is_empty(), if bad.is_empty() { "7 fixtures exact".into() } else { bad.join("; ") })
}

fn min_formula() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    for name in fixture_names() {
        let v = load(name);
        if !v.phi.is_convex() {
            continue;
        }
        let pts = box_points(&v, 1, 4);
        for _ in 0..500 {
            let den: i64 = rng.gen_range(1..=12);
            let num: Vec<i64> = (0..v.spec.dim).map(|_| rng.gen_range(-40..=40)).collect();
            let u = RationalVector::from_fractions(&num.iter().map(|&x| (x, den)).collect::<Vec<_>>());
            let oracle = pts
                .iter()
                .map(|m| m.iter().zip(&num).map(|(a, b)| a * b).sum::<i64>())
                .min()
                .unwrap();
            let oracle = Rational::new(BigInt::from(oracle), BigInt::from(den));
            match v.phi.support_value(&u) {
                Ok(val) if val == oracle => checked += 1,
                other => return outcome(false, format!("{name}: u={num:?}/{den} got {other:?}, want {oracle}")),
            }
        }
    }
    outcome(true, format!("{checked} evaluations exact"))
}

fn rossi() -> Outcome {
    let mut bad = Vec::new();
    for name in fixture_names() {
        let v = load(name);
        let verdict = proper_faces_simplicial(&lifted_cone(&v.phi)).unwrap_or(false);
        if verdict != v.phi.is_strictly_convex() {
            bad.push(name);
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "7 fixtures agree".into() } else { bad.join(", ") })
}

fn graded_ring() -> Outcome {
    for name in fixture_names() {
        let v = load(name);
        let c = lifted_cone(&v.phi);
        let p = v.phi.polytope();
        for d in 0..=6u32 {
            let slice = match graded_slice(&c, d) {
                Ok(s) => s,
                Err(e) => return outcome(false, format!("{name} d={d}: {e}")),
            };
            let pts: Vec<Vec<i64>> = lattice_points(&p, d).unwrap().iter().map(as_i64s).collect();
            let mut from_slice: Vec<Vec<i64>> = slice.iter().map(|g| as_i64s(&g.exponent)).collect();
            from_slice.sort();
            let oracle = box_points(&v, d as i64, 14);
            if from_slice != oracle || pts != oracle || slice.iter().any(|g| g.degree != d) {
                return outcome(false, format!("{name} d={d}: slice/points/oracle differ"));
            }
            let d = d as usize;
            let closed = match name {
                "p2_o1" => Some(binom(d + 2, 2)),
                "p1_o1" => Some(d + 1),
                "p1xp1_o11" => Some((d + 1) * (d + 1)),
                _ => None,
            };
            if closed.is_some_and(|n| n != oracle.len()) {
                return outcome(false, format!("{name} d={d}: closed form mismatch"));
            }
        }
    }
    outcome(true, "d <= 6 on 7 fixtures")
}

/// Rows of the dual basis of a unimodular cone, in dimension 1 or 2.
fn dual_basis(gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    match gens.len() {
        1 => vec![vec![gens[0][0]]],
        2 => {
            let (a, b, c, d) = (gens[0][0], gens[0][1], gens[1][0], gens[1][1]);
            let det = a * d - b * c;
            vec![vec![d * det, -c * det], vec![-b * det, a * det]]
        }
        _ => unreachable!("fixtures have dimension at most 2"),
    }
}

fn vertex_charts() -> Outcome {
    let mut cones = 0;
    for name in fixture_names() {
        let v = load(name);
        if !v.phi.is_very_ample() {
            continue;
        }
        for (k, cone) in v.spec.max_cones.iter().enumerate() {
            let gens = match vertex_chart_generators(&v.phi, k) {
                Ok(g) => g.iter().map(as_i64s).collect::<Vec<_>>(),
                Err(e) => return outcome(false, format!("{name} cone {k}: {e}")),
            };
            let rays: Vec<Vec<i64>> = cone.iter().map(|&i| v.spec.rays[i].clone()).collect();
            for u in dual_basis(&rays) {
                if !gens.contains(&u) {
                    return outcome(false, format!("{name} cone {k}: dual vector {u:?} missing"));
                }
            }
            cones += 1;
        }
    }
    outcome(true, format!("{cones} maximal cones"))
}

fn sandwich() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    let mut skipped = Vec::new();
    for name in fixture_names() {
        let v = load(name);
        let p = v.phi.polytope();
        if lattice_points(&p, 1).map(|x| x.is_empty()).unwrap_or(true) {
            skipped.push(name);
            continue;
        }
        let w = ToricWeights::new(&p).unwrap();
        let half_log_r = 0.5 * (w.lattice_points().len() as f64).ln();
        let grid = WeightGrid::new(v.spec.dim, GridSpec::default());
        for s in grid.samples() {
            let (psi, lam) = (w.psi(&s.log), w.lambda(&s.log));
            worst = worst.max(psi - lam).max(lam - psi - half_log_r);
        }
    }
    outcome(
        worst <= 1e-12,
        format!("max violation {worst:e} (tol 1e-12); skipped {skipped:?}: empty P_D"),
    )
}

fn envelope() -> Outcome {
    let start = Instant::now();
    let grid = GridSpec::default();
    let mut worst_psi: f64 = 0.0;
    for name in ["p1_o1", "p1_o2", "p2_o1", "p1xp1_o11"] {
        let v = load(name);
        let p = v.phi.polytope();
        let w = ToricWeights::new(&p).unwrap();
        let pts = box_points(&v, 1, 4);
        let cfg = EnvelopeConfig {
            d_max: 1,
            coeff_budget: 0,
            seed: 0,
            families: SearchFamilies {
                monomials: true,
                adapted: false,
                random: false,
            },
        };
        let r = envelope_reconstruct(&w.psi_weight(), &p, &grid, &cfg).unwrap();
        for (s, h) in r.grid.samples().iter().zip(r.grid.values()) {
            let x = s.log.coords();
            let psi = pts
                .iter()
                .map(|m| m.iter().zip(x).map(|(a, b)| *a as f64 * b).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max);
            worst_psi = worst_psi.max((h / psi.exp() - 1.0).abs());
        }
    }
    let v = load("p1_o1");
    let p = v.phi.polytope();
    let w = ToricWeights::new(&p).unwrap();
    let cfg = EnvelopeConfig {
        d_max: 1,
        coeff_budget: 0,
        seed: 0,
        families: SearchFamilies {
            monomials: false,
            adapted: true,
            random: false,
        },
    };
    let r = envelope_reconstruct(&w.lambda_weight(), &p, &grid, &cfg).unwrap();
    let worst_lambda = r
        .grid
        .samples()
        .iter()
        .zip(r.grid.values())
        .map(|(s, h)| {
            // max of |c_0 + c_1 z| over the unit ball is sqrt(1 + |z|^2)
            let oracle = (1.0 + (2.0 * s.log.coords()[0]).exp()).sqrt();
            (h / oracle - 1.0).abs()
        })
        .fold(0.0, f64::max);
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst_psi <= 1e-9 && worst_lambda <= 1e-6 && secs <= 10.0,
        format!("psi dev {worst_psi:e} (tol 1e-9), lambda dev {worst_lambda:e} (tol 1e-6), {secs:.2}s (limit 10s)"),
    )
}

fn limsup() -> Outcome {
    let j_max = 64;
    for name in fixture_names() {
        let v = load(name);
        let p = v.phi.polytope();
        let Ok(vertices) = p.vertices() else { continue };
        let vertices: Vec<Vec<i64>> = vertices.iter().map(as_i64s).collect();
        let qs = vertex_monomial_sequence(&p, j_max).unwrap();
        let r = limsup_weight(&qs, j_max, &GridSpec::default(), v.spec.dim).unwrap();
        let at: &[f64] = &r.running[vertices.len() - 1];
        for (s, val) in r.grid.samples().iter().zip(at) {
            let x = s.log.coords();
            let psi = vertices
                .iter()
                .map(|m| m.iter().zip(x).map(|(a, b)| *a as f64 * b).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max);
            if (val / psi.exp() - 1.0).abs() > 1e-12 {
                return outcome(false, format!("{name}: {val} vs exp(psi) {} at {x:?}", psi.exp()));
            }
        }
        for j in 1..j_max {
            if r.running[j].iter().zip(&r.running[j - 1]).any(|(a, b)| a < b) {
                return outcome(false, format!("{name}: running max decreases at J={}", j + 1));
            }
        }
    }
    outcome(true, "exp(psi) at J = |vertices| (rel 1e-12); monotone for J <= 64")
}

fn growth() -> Outcome {
    let v = load("p1_o1");
    let p = v.phi.polytope();
    let cfg = GrowthConfig {
        grid: GridSpec::default().with_phases(16),
        ..GrowthConfig::default()
    };
    let quadric = |s: &Sample| {
        let (x, t) = (s.log.coords()[0], s.phase[0]);
        let re = (2.0 * x).exp() * (2.0 * t).cos() - 1.0;
        let im = (2.0 * x).exp() * (2.0 * t).sin();
        0.5 * re.hypot(im).ln()
    };
    let accepted = match growth_check(&quadric, &p, &cfg) {
        Ok(r) => (r.bounded && (0.34..=0.36).contains(&r.c_estimate), format!("C = {}", r.c_estimate)),
        Err(e) => (false, e.to_string()),
    };
    let square = |s: &Sample| 2.0 * s.log.coords()[0];
    let rejected = match growth_check(&square, &p, &cfg) {
        Ok(r) => (!r.bounded, format!("2log|z| bounded={}", r.bounded)),
        Err(e) => (false, e.to_string()),
    };
    let expected = 0.5 * 2f64.ln();
    outcome(
        accepted.0 && rejected.0,
        format!("{} in [0.34, 0.36] (exact {expected:.4}); {}", accepted.1, rejected.1),
    )
}

fn chern() -> Outcome {
    let v = load("p1_o1");
    let p = v.phi.polytope();
    let w = ToricWeights::new(&p).unwrap();
    let r = lattice_points(&p, 1).unwrap().len();
    let net = positive_direction_net::<f64>(r, 32, 0);
    let qs = direction_net_sequence(&p, &net, 64).unwrap();
    let grid = GridSpec::default();
    let rows = chern_convergence(&w.lambda_weight(), &qs, 64, &grid, 1).unwrap();
    let n = WeightGrid::new(1, grid).len();
    let monotone = rows.windows(2).all(|x| x[1].sup_deviation <= x[0].sup_deviation);
    let first_below = rows.iter().find(|x| x.sup_deviation < 0.01).map(|x| x.j);
    let excluded = rows.iter().map(|x| x.excluded).max().unwrap_or(0);
    let last = rows.last().map(|x| x.sup_deviation).unwrap_or(f64::NAN);
    outcome(
        monotone && first_below.is_some() && (excluded as f64) < 0.01 * n as f64,
        format!(
            "monotone={monotone}, below 0.01 from J={first_below:?}, sup dev at J=64 {last:e}, excluded {excluded}/{n}"
        ),
    )
}

fn determinism() -> Outcome {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/experiments");
    let mut runs = 0;
    for (variety, exp) in [
        ("p1_o1", "envelope_lambda"),
        ("p1_o1", "chern_net"),
        ("p1_o1", "growth_quadric"),
        ("p2_o1", "limsup_vertices"),
        ("p1xp1_o11", "sections"),
    ] {
        let v = load(variety);
        let e = parse_experiment(&std::fs::read_to_string(format!("{dir}/{exp}.json")).unwrap()).unwrap();
        let csv = || run_experiment(&v, &e).unwrap().to_csv();
        let in_pool = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(csv)
        };
        let base = csv();
        for other in [csv(), in_pool(1), in_pool(4)] {
            if other != base {
                return outcome(false, format!("{exp} on {variety} differs"));
            }
            runs += 1;
        }
    }
    outcome(true, format!("{runs} reruns byte-identical (repeat, 1 thread, 4 threads)"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("ampleness dictionary", ampleness),
        ("min formula for the support function", min_formula),
        ("simplicial faces vs strict convexity", rossi),
        ("graded ring bijection", graded_ring),
        ("vertex chart generation", vertex_charts),
        ("sandwich bound", sandwich),
        ("envelope reconstruction", envelope),
        ("limsup recovery", limsup),
        ("growth condition", growth),
        ("Chern weight convergence", chern),
        ("determinism", determinism),
    ];
    let started = Instant::now();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {} [{:.2}s]",
            if o.pass { "PASS" } else { "FAIL" },
            k + 1,
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {}/{} passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        started.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
