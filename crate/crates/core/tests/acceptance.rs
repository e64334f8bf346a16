//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Threshold criteria use fewer trials at larger distances to keep the full
//! run near half an hour on one core; `ACCEPTANCE_SCALE` multiplies every
//! trial count (e.g. `0.1` for a smoke run). Set `ACCEPTANCE_STRICT=1` to
//! exit nonzero when any criterion fails.

use std::time::Instant;

use color_gkp::gkp::{average_flip_prob, delta_estimate, residual_map, DeltaMethod, NoiseParams, Scheme, Wiring};
use color_gkp::harness::{run_point, ExperimentConfig, NoiseModel, NoiseScale, PointStats};
use color_gkp::lattice::{BinaryError, Color, DualLattice};
use color_gkp::matching::{min_weight_perfect_matching, Dijkstra, Graph};
use color_gkp::restriction::{Reliabilities, RestrictionDecoder};
use color_gkp::stats::{find_threshold, Curve, CurvePoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

struct Outcome {
    pass: bool,
    detail: String,
}

fn scale() -> f64 {
    std::env::var("ACCEPTANCE_SCALE").ok().and_then(|s| s.parse().ok()).unwrap_or(1.0)
}

fn scaled(n: u64) -> u64 {
    ((n as f64 * scale()).round() as u64).max(50)
}

/// Per-distance trial counts of the threshold runs.
#[derive(Clone, Copy)]
struct Budget([(usize, u64); 3]);

impl Budget {
    fn trials(&self, d: usize) -> u64 {
        scaled(self.0.iter().find(|(x, _)| *x == d).map(|(_, n)| *n).expect("distance in budget"))
    }
}

struct Sweep {
    curves: Vec<Curve>,
    stats: Vec<Vec<PointStats>>,
}

fn sweep(config: &ExperimentConfig, budget: Budget) -> Sweep {
    let mut curves = Vec::new();
    let mut stats = Vec::new();
    for &d in &config.distances {
        let lattice = DualLattice::build(d).unwrap();
        let mut points = Vec::new();
        let mut row = Vec::new();
        for (g, &x) in config.grid.iter().enumerate() {
            let s = run_point::<f64>(&lattice, &config.point(d, x), g, budget.trials(d), config.seed).unwrap();
            points.push(CurvePoint { noise: x, failures: s.failures, trials: s.trials });
            row.push(s);
        }
        curves.push(Curve { distance: d, points });
        stats.push(row);
    }
    Sweep { curves, stats }
}

fn describe_curves(curves: &[Curve]) -> String {
    curves
        .iter()
        .map(|c| {
            let rates: Vec<String> = c
                .points
                .iter()
                .map(|p| format!("{:.4}", p.failures as f64 / p.trials as f64))
                .collect();
            format!("d{}[{}]", c.distance, rates.join(" "))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn crossing_near(curves: &[Curve], target: f64, tol: f64) -> Outcome {
    match find_threshold(curves) {
        Ok(t) => {
            let pairs: Vec<String> = t.pairs.iter().map(|p| format!("{}/{}:{:.4}", p.smaller, p.larger, p.crossing)).collect();
            Outcome {
                pass: (t.pooled - target).abs() <= tol,
                detail: format!(
                    "crossing {:.4} +- {:.4} (target {target} +- {tol}; pairs {}) rates {}",
                    t.pooled,
                    t.pooled_uncertainty,
                    pairs.join(", "),
                    describe_curves(curves)
                ),
            }
        }
        Err(e) => Outcome { pass: false, detail: format!("{e}; rates {}", describe_curves(curves)) },
    }
}

fn config(model: NoiseModel, scheme: Scheme, analog: bool, grid: Vec<f64>, seed: u64, scale: NoiseScale) -> ExperimentConfig {
    ExperimentConfig {
        model,
        scheme,
        analog,
        distances: vec![4, 6, 8],
        grid,
        trials: 1,
        seed,
        rounds: None,
        scale,
    }
}

fn grid(from: f64, step: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| from + step * i as f64).collect()
}

fn golden_numbers() -> Outcome {
    let a = average_flip_prob(0.542f64).unwrap();
    let b = average_flip_prob(0.59f64).unwrap();
    Outcome {
        pass: (a - 0.102).abs() <= 0.002 && (b - 0.133).abs() <= 0.002,
        detail: format!("p(0.542) = {a:.5}, p(0.59) = {b:.5}"),
    }
}

fn code_capacity(analog: bool) -> Outcome {
    let budget = Budget([(4, 20_000), (6, 20_000), (8, 20_000)]);
    let (g, target) = if analog { (grid(0.55, 0.02, 5), 0.59) } else { (grid(0.50, 0.02, 5), 0.542) };
    let c = config(NoiseModel::CodeCapacity, Scheme::ConventionalSteane, analog, g, 11, NoiseScale::default());
    let curves = sweep(&c, budget).curves;
    let mut out = crossing_near(&curves, target, 0.02);
    if !analog {
        // the criterion also states the crossing as an average flip
        // probability of 10.2% +- 0.7 pp; both readings must hold
        if let Ok(t) = find_threshold(&curves) {
            let p_bar = average_flip_prob(t.pooled).unwrap();
            let ok = (p_bar - 0.102).abs() <= 0.007;
            out.pass &= ok;
            out.detail = format!("{} p_bar = {p_bar:.4} ({} 0.102 +- 0.007)", out.detail, if ok { "within" } else { "outside" });
        }
    }
    out
}

fn noisy_measurement_case_a() -> Outcome {
    let budget = Budget([(4, 10_000), (6, 4_000), (8, 1_500)]);
    let scale = NoiseScale { sigma1: 1.0, sigma2: 0.0, sigma_m: 1.0 };
    let c = config(NoiseModel::NoisyMeasurement, Scheme::ConventionalSteane, true, grid(0.42, 0.02, 5), 13, scale);
    crossing_near(&sweep(&c, budget).curves, 0.46, 0.02)
}

fn noisy_measurement_schemes() -> Outcome {
    let budget = Budget([(4, 20_000), (6, 4_000), (8, 1_500)]);
    let g = grid(0.22, 0.01, 6);
    // same seed for both schemes: paired trials
    let me = config(NoiseModel::NoisyMeasurement, Scheme::MeSteane, true, g.clone(), 17, NoiseScale::default());
    let conv = config(NoiseModel::NoisyMeasurement, Scheme::ConventionalSteane, true, g, 17, NoiseScale::default());
    let me_sweep = sweep(&me, budget);
    let conv_sweep = sweep(&conv, budget);
    let a = crossing_near(&me_sweep.curves, 0.24, 0.015);
    let b = crossing_near(&conv_sweep.curves, 0.231, 0.015);
    let mut violations = Vec::new();
    for (row_me, row_conv) in me_sweep.stats.iter().zip(&conv_sweep.stats) {
        for (i, (m, c)) in row_me.iter().zip(row_conv).enumerate() {
            if m.failures as f64 / m.trials as f64 > c.failures as f64 / c.trials as f64 {
                violations.push(format!("grid[{i}] {}>{}", m.failures, c.failures));
            }
        }
    }
    Outcome {
        pass: a.pass && b.pass && violations.is_empty(),
        detail: format!(
            "ME {} [{}]; conventional {} [{}]; ME > conventional at {:?}",
            if a.pass { "ok" } else { "off" },
            a.detail,
            if b.pass { "ok" } else { "off" },
            b.detail,
            violations
        ),
    }
}

fn phenomenological() -> Outcome {
    let budget = Budget([(4, 20_000), (6, 4_000), (8, 1_500)]);
    let c = config(
        NoiseModel::BinaryPhenomenological,
        Scheme::ConventionalSteane,
        false,
        grid(0.025, 0.003, 6),
        19,
        NoiseScale::default(),
    );
    crossing_near(&sweep(&c, budget).curves, 0.031, 0.003)
}

fn alpha_scan() -> Outcome {
    let s2 = 0.056f64.sqrt();
    let samples = scaled(1_000_000);
    let alphas = grid(0.0, 0.05, 21);
    let mut pass = true;
    let mut lines = Vec::new();
    for s1 in [0.2, 0.3, 0.4] {
        let p = NoiseParams::new(s1, s2, 0.0).unwrap();
        let est: Vec<_> = alphas
            .iter()
            .map(|&a| {
                let mut rng = ChaCha8Rng::seed_from_u64(23);
                delta_estimate(DeltaMethod::Scaled(a), &p, Wiring::Forward, samples, &mut rng).unwrap()
            })
            .collect();
        let best = (0..est.len()).min_by(|&i, &j| est[i].mean.total_cmp(&est[j].mean)).unwrap();
        let eta = p.eta();
        let nearest = (0..alphas.len()).min_by(|&i, &j| (alphas[i] - eta).abs().total_cmp(&(alphas[j] - eta).abs())).unwrap();
        let gap = est[nearest].mean - est[best].mean;
        let se = (est[nearest].std_error.powi(2) + est[best].std_error.powi(2)).sqrt();
        let ok = best == nearest || gap <= 2.0 * se;
        pass &= ok;
        lines.push(format!(
            "s1={s1}: eta={eta:.4} min at alpha={:.2} ({:.5}), alpha={:.2} gives {:.5}, gap {:.2} SE",
            alphas[best],
            est[best].mean,
            alphas[nearest],
            est[nearest].mean,
            if se > 0.0 { gap / se } else { 0.0 }
        ));
    }
    Outcome { pass, detail: lines.join("; ") }
}

fn scheme_comparison() -> Outcome {
    let samples = scaled(1_000_000);
    let mut pass = true;
    let mut worst = Vec::new();
    for wiring in [Wiring::Backaction, Wiring::Forward] {
        for s in grid(0.1, 0.05, 9) {
            let p = NoiseParams::new(s, s, s).unwrap();
            let est = |scheme| {
                let mut rng = ChaCha8Rng::seed_from_u64(29);
                delta_estimate(DeltaMethod::Scheme(scheme), &p, wiring, samples, &mut rng).unwrap().mean
            };
            let me = est(Scheme::MeSteane);
            let conv = est(Scheme::ConventionalSteane);
            let tele = est(Scheme::Teleportation);
            if !(me <= conv && me <= tele) {
                pass = false;
                worst.push(format!("{wiring:?} s={s:.2}: me {me:.5} conv {conv:.5} tele {tele:.5}"));
            }
        }
    }
    Outcome {
        pass,
        detail: if worst.is_empty() {
            "ME lowest at every sigma for both wirings".into()
        } else {
            worst.join("; ")
        },
    }
}

fn brute_min(t: &[i64], n: usize, used: &mut [bool]) -> i64 {
    let Some(i) = used.iter().position(|u| !u) else { return 0 };
    used[i] = true;
    let mut best = i64::MAX;
    for j in i + 1..n {
        if !used[j] {
            used[j] = true;
            best = best.min(t[i * n + j] + brute_min(t, n, used));
            used[j] = false;
        }
    }
    used[i] = false;
    best
}

fn bellman_ford(n: usize, edges: &[[usize; 2]], w: &[f64], s: usize) -> Vec<f64> {
    let mut d = vec![f64::INFINITY; n];
    d[s] = 0.0;
    for _ in 0..n {
        for (k, &[a, b]) in edges.iter().enumerate() {
            if d[a] + w[k] < d[b] {
                d[b] = d[a] + w[k];
            }
            if d[b] + w[k] < d[a] {
                d[a] = d[b] + w[k];
            }
        }
    }
    d
}

fn oracle_suites() -> Outcome {
    let mut failed = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(31);

    for n in [2usize, 4, 6, 8, 10] {
        for _ in 0..100 {
            let mut t = vec![0i64; n * n];
            for i in 0..n {
                for j in i + 1..n {
                    t[i * n + j] = rng.random_range(0..1000);
                    t[j * n + i] = t[i * n + j];
                }
            }
            let m = min_weight_perfect_matching(n, |i, j| Some(t[i * n + j])).unwrap();
            if m.total_weight != brute_min(&t, n, &mut vec![false; n]) {
                failed.push(format!("mwpm n={n}"));
            }
        }
    }

    for _ in 0..100 {
        let n = rng.random_range(2..40);
        let edges: Vec<[usize; 2]> = (0..3 * n)
            .map(|_| [rng.random_range(0..n), rng.random_range(0..n)])
            .filter(|[a, b]| a != b)
            .collect();
        let w: Vec<f64> = edges.iter().map(|_| rng.random_range(0.0..5.0)).collect();
        let g = Graph::new(n, edges.clone()).unwrap();
        let mut dj = Dijkstra::new(n);
        dj.run(&g, &w, 0, &[]);
        let bf = bellman_ford(n, &edges, &w, 0);
        for v in 0..n {
            let ok = match dj.distance(v) {
                Some(x) => (x - bf[v]).abs() < 1e-9,
                None => bf[v].is_infinite(),
            };
            if !ok {
                failed.push(format!("dijkstra n={n} v={v}"));
            }
        }
    }

    let l4 = DualLattice::build(4).unwrap();
    let mut dec = RestrictionDecoder::<f64>::new(&l4).unwrap();
    for f in 0..l4.num_faces() {
        let err = BinaryError::from_faces(l4.num_faces(), &[f]).unwrap();
        let out = dec.decode(&l4.syndrome_of(&err).unwrap(), Reliabilities::Uniform(0.05)).unwrap();
        if out.correction != [f] {
            failed.push(format!("single face {f} -> {:?}", out.correction));
        }
    }

    for d in [4, 6, 8, 10] {
        let l = DualLattice::build(d).unwrap();
        let counts = l.num_faces() == 2 * d * d && l.num_vertices() == d * d && l.num_edges() == 3 * d * d;
        let degrees = (0..l.num_vertices()).all(|v| {
            let want = if l.color(v) == Color::Red { 4 } else { 8 };
            l.faces_of_vertex(v).len() == want
        });
        let (xs, zs) = (l.logical_x_supports(), l.logical_z_supports());
        let commute = (0..4).all(|i| {
            (0..4).all(|j| (xs[i].iter().filter(|f| zs[j].contains(f)).count() % 2 == 1) == (i == j))
        });
        let rank = gf2_rank(&l);
        if l.check_invariants().is_err() || !counts || !degrees || !commute || rank != d * d - 2 {
            failed.push(format!("lattice d={d}"));
        }
    }

    let (s1, s2) = (0.15, 0.15);
    let p = NoiseParams::new(s1, s2, 0.0).unwrap();
    let (n1, n2) = (Normal::new(0.0, s1).unwrap(), Normal::new(0.0, s2).unwrap());
    let n = 1_000_000;
    let (mut sum, mut sq) = (0.0, 0.0);
    for _ in 0..n {
        let r: f64 = residual_map(n1.sample(&mut rng), n2.sample(&mut rng), Scheme::MeSteane, &p).unwrap();
        sum += r;
        sq += r * r;
    }
    let var = sq / n as f64 - (sum / n as f64).powi(2);
    let var_ratio = var / (p.eta() * s2 * s2);
    if (var_ratio - 1.0).abs() > 0.01 {
        failed.push(format!("ME variance ratio {var_ratio:.4}"));
    }

    let c = config(NoiseModel::BinaryPhenomenological, Scheme::ConventionalSteane, false, vec![0.03], 37, NoiseScale::default());
    let spec = c.point(4, 0.03);
    let runs: Vec<PointStats> = [1, 3]
        .iter()
        .map(|&w| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(w).build().unwrap();
            pool.install(|| run_point::<f64>(&l4, &spec, 0, 2000, c.seed).unwrap())
        })
        .collect();
    if runs[0] != runs[1] {
        failed.push("worker-count determinism".into());
    }

    Outcome {
        pass: failed.is_empty(),
        detail: if failed.is_empty() {
            format!("mwpm, dijkstra, single faces, lattices d=4..10, ME variance ratio {var_ratio:.4}, determinism")
        } else {
            failed.join(", ")
        },
    }
}

fn gf2_rank(l: &DualLattice) -> usize {
    let words = l.num_faces().div_ceil(64);
    let mut rows: Vec<Vec<u64>> = (0..l.num_vertices())
        .map(|v| {
            let mut r = vec![0u64; words];
            for &f in l.faces_of_vertex(v) {
                r[f / 64] ^= 1 << (f % 64);
            }
            r
        })
        .collect();
    let mut rank = 0;
    for col in 0..l.num_faces() {
        let bit = 1u64 << (col % 64);
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][col / 64] & bit != 0) else { continue };
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i != rank && rows[i][col / 64] & bit != 0 {
                let pivot = rows[rank].clone();
                for (a, b) in rows[i].iter_mut().zip(&pivot) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("1 average flip golden numbers", golden_numbers),
        ("2 code capacity, analog: crossing 0.59", || code_capacity(true)),
        ("3 code capacity, hard: crossing 0.542", || code_capacity(false)),
        ("4 noisy measurement, sigma2 = 0: crossing 0.46", noisy_measurement_case_a),
        ("5 noisy measurement, ME 0.24 / conventional 0.231", noisy_measurement_schemes),
        ("6 binary phenomenological: crossing 0.031", phenomenological),
        ("7 alpha scan minimum at eta", alpha_scan),
        ("8 ME has the smallest Delta", scheme_comparison),
        ("9 oracle suites", oracle_suites),
    ];
    let mut passed = 0;
    for (name, run) in &criteria {
        let start = Instant::now();
        let o = run();
        passed += o.pass as usize;
        println!(
            "[{}] {name} ({:.0}s): {}",
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!("acceptance: {passed}/{} criteria passed", criteria.len());
    if passed < criteria.len() && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
