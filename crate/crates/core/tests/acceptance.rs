//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test -p tul-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tul_core::asymptotics::{cross_check, Claim};
use tul_core::constructors::{
    make_cycle_graph, make_dipole, make_melonic, CycleSpec, MelonicRecipe,
};
use tul_core::enumeration::numbers::{catalan, narayana, narayana_recurrence};
use tul_core::enumeration::{enumerate_coverings, minimal_coverings, narayana_face_distribution};
use tul_core::graph::{ColoredGraph, CoveringGraph};
use tul_core::perm::Permutation;
use tul_core::tensor_sim::{
    gaussian_exact_mean, monte_carlo_mean, random_unitary, sample_tensor_at, trace_invariant_cycle,
    trace_invariant_naive, trace_invariant_naive_complex, unitary_invariance_check,
    universality_scan, Distribution, EnsembleSpec, TensorSpec, TraceTarget,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Option<u64>, fn() -> Outcome);

fn cycle(k: usize, m: usize, n: usize) -> ColoredGraph {
    make_cycle_graph(&CycleSpec::standard(k, m, n).unwrap()).unwrap()
}

fn random_perm<R: Rng>(k: usize, rng: &mut R) -> Permutation {
    let mut v: Vec<usize> = (0..k).collect();
    v.shuffle(rng);
    Permutation::from_zero_based(v).unwrap()
}

fn random_connected<R: Rng>(k: usize, d: usize, rng: &mut R) -> ColoredGraph {
    loop {
        let g = ColoredGraph::new((0..d).map(|_| random_perm(k, rng)).collect()).unwrap();
        if g.is_connected() {
            return g;
        }
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let r = f();
    let elapsed = start.elapsed();
    match (r, limit) {
        (Ok(msg), Some(l)) if elapsed > l => Err(format!("{msg}; took {elapsed:.2?}, limit {l:?}")),
        (Ok(msg), _) => Ok(format!("{msg} ({elapsed:.2?})")),
        (Err(e), _) => Err(e),
    }
}

fn ac1_catalan() -> Outcome {
    let expected = [1usize, 2, 5, 14, 42, 132];
    for (i, &c) in expected.iter().enumerate() {
        let k = i + 1;
        let min = minimal_coverings(&cycle(k, 1, 1)).map_err(|e| e.to_string())?;
        if min.count != c || min.gamma != k + 1 {
            return Err(format!(
                "k={k}: count {} gamma {}, want {c} and {}",
                min.count,
                min.gamma,
                k + 1
            ));
        }
    }
    Ok("counts 1,2,5,14,42,132 with gamma = k+1".into())
}

fn ac2_narayana() -> Outcome {
    for k in 1..=6usize {
        let g = cycle(k, 1, 1);
        for anchor in 1..=2 {
            let hist = narayana_face_distribution(&g, anchor).map_err(|e| e.to_string())?;
            for l in 0..=k + 1 {
                let want = if (1..=k).contains(&l) {
                    narayana(k as u64, l as u64).unwrap().to_u64().unwrap()
                } else {
                    0
                };
                let got = hist.get(&l).copied().unwrap_or(0);
                if got != want {
                    return Err(format!("k={k} anchor {anchor} l={l}: {got} != N = {want}"));
                }
            }
        }
    }
    for k in 1..=12u64 {
        for l in 1..=k {
            if narayana_recurrence(k, l).unwrap() != narayana(k, l).unwrap() {
                return Err(format!("recurrence differs at ({k},{l})"));
            }
        }
    }
    Ok("histograms k<=6 (both anchors), recurrence k<=12".into())
}

fn ac3_melonic() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut n = 0;
    for d in [3usize, 4, 5] {
        for _ in 0..20 {
            let k = rng.random_range(1..=5);
            let recipe = MelonicRecipe::random(d, k, &mut rng);
            let g = make_melonic(&recipe).map_err(|e| e.to_string())?;
            let min = minimal_coverings(&g).map_err(|e| e.to_string())?;
            if min.count != 1 || min.gamma != 1 + k * (d - 1) {
                return Err(format!(
                    "{recipe:?}: count {} gamma {}",
                    min.count, min.gamma
                ));
            }
            n += 1;
        }
    }
    Ok(format!(
        "{n} recipes, unique minimal covering with 1+k(D-1) faces"
    ))
}

fn ac4_cycle_closed_forms() -> Outcome {
    const N: usize = 4;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut n = 0;
    let mut worst: f64 = 0.0;
    for d in 2..=6usize {
        for m in 1..d {
            for k in 1..=4usize {
                let spec = CycleSpec::standard(k, m, d - m).unwrap();
                // Quarter steps in [0.5, 3] make every c_i N an integer at N = 4.
                let c: Vec<f64> = (0..d)
                    .map(|_| rng.random_range(2..=12) as f64 / 4.0)
                    .collect();
                TensorSpec::new(c.clone(), N, Distribution::ComplexGaussian, 0)
                    .map_err(|e| e.to_string())?;
                let g = make_cycle_graph(&spec).unwrap();
                let r =
                    cross_check(&g, &Claim::Cycle(spec.clone()), &c).map_err(|e| e.to_string())?;
                let (lo, hi) = (m.min(d - m), m.max(d - m));
                let (gamma, count) = if lo == hi {
                    (lo * (k + 1), catalan(k as u64).to_u64().unwrap())
                } else {
                    (hi * k + lo, 1)
                };
                if !r.passed || r.gamma_enum != gamma || r.count_enum != count {
                    return Err(format!("({m},{}) k={k}: {}", d - m, r.diff()));
                }
                worst = worst.max(r.rel_err);
                n += 1;
            }
        }
    }
    Ok(format!(
        "{n} split/k cases, max coefficient rel err {worst:.2e}"
    ))
}

fn ac5_wick() -> Outcome {
    const SAMPLES: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut configs: Vec<(String, TraceTarget, Vec<f64>, usize)> = vec![
        (
            "(1,1) k=2".into(),
            TraceTarget::Cycle(CycleSpec::standard(2, 1, 1).unwrap()),
            vec![1.0, 1.0],
            8,
        ),
        (
            "(1,1) k=2".into(),
            TraceTarget::Graph(cycle(2, 1, 1)),
            vec![1.0, 1.0],
            4,
        ),
        (
            "(1,1) k=3".into(),
            TraceTarget::Graph(cycle(3, 1, 1)),
            vec![1.0, 1.0],
            4,
        ),
        (
            "(1,1) k=4".into(),
            TraceTarget::Cycle(CycleSpec::standard(4, 1, 1).unwrap()),
            vec![1.0, 2.0],
            3,
        ),
        (
            "(1,1) k=2".into(),
            TraceTarget::Graph(cycle(2, 1, 1)),
            vec![1.0, 2.0],
            3,
        ),
        (
            "(1,2) k=2".into(),
            TraceTarget::Graph(cycle(2, 1, 2)),
            vec![1.0, 1.0, 1.0],
            3,
        ),
        (
            "(1,2) k=3".into(),
            TraceTarget::Cycle(CycleSpec::standard(3, 1, 2).unwrap()),
            vec![1.0, 1.0, 1.0],
            2,
        ),
        (
            "(2,2) k=2".into(),
            TraceTarget::Graph(cycle(2, 2, 2)),
            vec![1.0; 4],
            2,
        ),
        (
            "(2,2) k=3".into(),
            TraceTarget::Cycle(CycleSpec::standard(3, 2, 2).unwrap()),
            vec![1.0; 4],
            2,
        ),
        (
            "(1,3) k=2".into(),
            TraceTarget::Graph(cycle(2, 1, 3)),
            vec![1.0; 4],
            2,
        ),
        (
            "(2,3) k=2".into(),
            TraceTarget::Graph(cycle(2, 2, 3)),
            vec![1.0; 5],
            2,
        ),
        (
            "dipole D=3".into(),
            TraceTarget::Graph(make_dipole(3).unwrap()),
            vec![1.0, 0.5, 1.5],
            4,
        ),
        (
            "dipole D=4".into(),
            TraceTarget::Graph(make_dipole(4).unwrap()),
            vec![1.0; 4],
            3,
        ),
    ];
    for (d, k, n) in [(3, 2, 3), (3, 3, 2), (4, 2, 2), (3, 3, 3)] {
        let recipe = MelonicRecipe::random(d, k, &mut rng);
        configs.push((
            format!("melonic D={d} k={k}"),
            TraceTarget::Graph(make_melonic(&recipe).unwrap()),
            vec![1.0; d],
            n,
        ));
    }
    for (d, k, n) in [(2, 3, 3), (3, 2, 3), (3, 3, 2), (4, 2, 2)] {
        configs.push((
            format!("random D={d} k={k}"),
            TraceTarget::Graph(random_connected(k, d, &mut rng)),
            vec![1.0; d],
            n,
        ));
    }
    let mut worst: f64 = 0.0;
    for (i, (label, target, c, n)) in configs.iter().enumerate() {
        let spec =
            TensorSpec::new(c.clone(), *n, Distribution::ComplexGaussian, 50 + i as u64).unwrap();
        let exact = gaussian_exact_mean(&target.graph().unwrap(), &spec.dims().unwrap()).unwrap();
        if i == 0 && exact != 1024.0 {
            return Err(format!("(1,1) k=2 N=8 exact mean {exact}, want 1024"));
        }
        let est = monte_carlo_mean(&spec, target, SAMPLES).map_err(|e| e.to_string())?;
        let z = (est.mean - exact) / est.stderr;
        if z.abs() > 4.0 || !z.is_finite() {
            return Err(format!(
                "{label} N={n}: mean {} exact {exact} stderr {} (z = {z:.2})",
                est.mean, est.stderr
            ));
        }
        worst = worst.max(z.abs());
    }
    Ok(format!(
        "{} configurations, max |z| = {worst:.2}",
        configs.len()
    ))
}

fn ac6_universality() -> Outcome {
    const SAMPLES: usize = 100;
    let n_list = [4, 8, 16, 32];
    let mut lines = Vec::new();
    for (m, n) in [(1usize, 2usize), (2, 2)] {
        let spec = CycleSpec::standard(2, m, n).unwrap();
        let target = TraceTarget::Cycle(spec);
        let c = vec![1.0; m + n];
        let gauss = universality_scan(
            &EnsembleSpec::new(c.clone(), Distribution::ComplexGaussian, 60),
            &target,
            &[32],
            SAMPLES,
        )
        .map_err(|e| e.to_string())?;
        let g_row = &gauss.rows[0];
        let g_se = gauss.normalized_stderr(g_row);
        for dist in [Distribution::ComplexRademacher, Distribution::UniformDisc] {
            let report = universality_scan(
                &EnsembleSpec::new(c.clone(), dist, 61),
                &target,
                &n_list,
                SAMPLES,
            )
            .map_err(|e| e.to_string())?;
            let dev = report.deviations();
            if !dev.windows(2).all(|w| w[1] < w[0]) {
                return Err(format!(
                    "({m},{n}) {}: deviations not strictly decreasing: {dev:?}",
                    dist.name()
                ));
            }
            let row = report.rows.last().unwrap();
            let se = report.normalized_stderr(row);
            let combined = (se * se + g_se * g_se).sqrt();
            let gap = (row.normalized - g_row.normalized).abs();
            if gap > 4.0 * combined {
                return Err(format!(
                    "({m},{n}) {}: N=32 normalized {} vs Gaussian {} differ by {gap:.3e} > 4 x {combined:.3e}",
                    dist.name(),
                    row.normalized,
                    g_row.normalized
                ));
            }
            lines.push(format!(
                "({m},{n}) {}: dev {:.2e} -> {:.2e}, N=32 gap {:.1} sigma",
                dist.name(),
                dev[0],
                dev[3],
                gap / combined
            ));
        }
    }
    Ok(lines.join("; "))
}

fn ac7_contraction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut done = 0;
    let mut worst: f64 = 0.0;
    while done < 100 {
        let d = rng.random_range(2..=5usize);
        let m = rng.random_range(1..d);
        let k = rng.random_range(1..=4usize);
        let n = rng.random_range(1..=4usize);
        let c: Vec<f64> = (0..d)
            .map(|_| rng.random_range(1..=3) as f64 / if n % 2 == 0 { 2.0 } else { 1.0 })
            .collect();
        let Ok(tspec) = TensorSpec::new(c, n, Distribution::ALL[done % 3], done as u64) else {
            continue;
        };
        let dims = tspec.dims().unwrap();
        let terms: f64 = dims.iter().map(|&x| (x as f64).powi(k as i32)).product();
        if terms > 1e7 {
            continue;
        }
        // Random class assignment, not just the standard split.
        let mut colors: Vec<usize> = (1..=d).collect();
        colors.shuffle(&mut rng);
        let spec = CycleSpec::new(k, colors[..m].to_vec(), colors[m..].to_vec()).unwrap();
        let t = sample_tensor_at(&tspec, 0).unwrap();
        let fast = trace_invariant_cycle(&t, &spec).map_err(|e| e.to_string())?;
        let slow = trace_invariant_naive(&t, &make_cycle_graph(&spec).unwrap())
            .map_err(|e| e.to_string())?;
        let rel = (fast - slow).abs() / slow.abs();
        if rel > 1e-9 {
            return Err(format!(
                "{spec:?} dims {dims:?}: {fast} vs {slow} (rel {rel:.2e})"
            ));
        }
        worst = worst.max(rel);
        done += 1;
    }
    Ok(format!("100 instances, max rel err {worst:.2e}"))
}

fn ac8_genus() -> Outcome {
    for k in 1..=6usize {
        let g = cycle(k, 1, 1);
        let mut planar = 0u64;
        for (tau, profile) in enumerate_coverings(&g).map_err(|e| e.to_string())? {
            let genus = CoveringGraph::new(g.clone(), tau.clone())
                .unwrap()
                .genus()
                .unwrap();
            let Some(h) = genus.as_integer().filter(|&h| h >= 0) else {
                return Err(format!("k={k} tau={tau}: genus {}", genus.value()));
            };
            let minimal = profile.total == k + 1;
            if (h == 0) != minimal {
                return Err(format!("k={k} tau={tau}: genus {h}, minimal = {minimal}"));
            }
            planar += u64::from(h == 0);
        }
        if planar != catalan(k as u64).to_u64().unwrap() {
            return Err(format!("k={k}: {planar} planar coverings"));
        }
    }
    Ok("k<=6: integral genus, planar exactly on minimal coverings".into())
}

fn ac9_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    let lambdas = [
        Complex64::new(2.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(1.0, 1.0),
    ];
    for i in 0..50 {
        let d = rng.random_range(2..=4usize);
        let k = rng.random_range(1..=3usize);
        let n = if d == 4 { 2 } else { 3 };
        let g = random_connected(k, d, &mut rng);
        let spec =
            TensorSpec::new(vec![1.0; d], n, Distribution::ALL[i % 3], 900 + i as u64).unwrap();
        let t = sample_tensor_at(&spec, 0).unwrap();
        let dev = if i % 2 == 0 {
            let us: Vec<_> = (0..d).map(|_| random_unitary(n, &mut rng)).collect();
            unitary_invariance_check(&t, &g, &us).map_err(|e| e.to_string())?
        } else {
            let lambda = lambdas[(i / 2) % 3];
            let base = trace_invariant_naive_complex(&t, &g, f64::INFINITY).unwrap();
            let scaled =
                trace_invariant_naive_complex(&t.scaled(lambda), &g, f64::INFINITY).unwrap();
            let expect = base * lambda.norm_sqr().powi(k as i32);
            (scaled - expect).norm() / expect.norm()
        };
        if dev.is_nan() || dev >= 1e-8 {
            return Err(format!("check {i} (D={d}, k={k}): deviation {dev:.2e}"));
        }
        worst = worst.max(dev);
    }
    Ok(format!("50 checks, max deviation {worst:.2e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("AC1 Catalan count", Some(10), ac1_catalan),
        ("AC2 Narayana refinement", None, ac2_narayana),
        ("AC3 melonic uniqueness", Some(60), ac3_melonic),
        ("AC4 cycle closed forms", None, ac4_cycle_closed_forms),
        ("AC5 Wick exactness", Some(300), ac5_wick),
        (
            "AC6 universality across distributions",
            None,
            ac6_universality,
        ),
        ("AC7 contraction oracle", None, ac7_contraction),
        ("AC8 genus", None, ac8_genus),
        (
            "AC9 unitary invariance and homogeneity",
            None,
            ac9_invariance,
        ),
    ];
    let mut failed = 0;
    for (name, limit, f) in criteria {
        match timed(limit.map(Duration::from_secs), f) {
            Ok(msg) => println!("[PASS] {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] {name}: {msg}");
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
