use std::f64::consts::PI;

use color_gkp::gkp::{
    average_flip_prob, centered_mod, conditional_flip_prob, delta_estimate, ideal_projection, me_conditional_flip_prob,
    residual_map, DeltaMethod, NoiseParams, Scheme, Wiring,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn gauss(x: f64, s: f64) -> f64 {
    (-x * x / (2.0 * s * s)).exp() / (s * (2.0 * PI).sqrt())
}

fn is_odd_class(x: f64) -> bool {
    let sp = PI.sqrt();
    let k = (x / sp).round() as i64;
    k.rem_euclid(2) == 1
}

/// Posterior odd-class mass of a data shift seen through `q mod sqrt(pi)`,
/// summing Gaussian densities directly over many periods.
fn flip_oracle(q: f64, sigma: f64) -> f64 {
    let sp = PI.sqrt();
    let r = q.rem_euclid(sp);
    let (mut odd, mut all) = (0.0, 0.0);
    for n in -60i64..=60 {
        let x = r + n as f64 * sp;
        let w = gauss(x, sigma);
        all += w;
        if is_odd_class(x) {
            odd += w;
        }
    }
    odd / all
}

/// Flip probability after an ME correction by direct quadrature over the
/// data shift: the joint density of (u1, u1 + u2 = r - j sqrt(pi)) summed
/// over j, with the residual `u1 - eta r` classified on a fine grid.
fn me_flip_oracle(q: f64, s1: f64, s2: f64) -> f64 {
    let sp = PI.sqrt();
    let r = centered_mod(q, sp).unwrap();
    let eta = s1 * s1 / (s1 * s1 + s2 * s2);
    let h = 2e-4;
    let (mut fail, mut total) = (0.0, 0.0);
    let mut u = -10.0;
    while u <= 10.0 {
        let mut dens = 0.0;
        for j in -20i64..=20 {
            dens += gauss(r - j as f64 * sp - u, s2);
        }
        dens *= gauss(u, s1);
        total += dens;
        if is_odd_class(u - eta * r) {
            fail += dens;
        }
        u += h;
    }
    fail / total
}

#[test]
fn conditional_flip_matches_direct_sum() {
    for sigma in [0.2, 0.35, 0.5, 0.7] {
        for i in 0..40 {
            let q = -3.0 + 0.15 * i as f64;
            let got: f64 = conditional_flip_prob(q, sigma).unwrap();
            assert!((got - flip_oracle(q, sigma)).abs() < 1e-10, "q={q} sigma={sigma}");
        }
    }
}

#[test]
fn me_flip_matches_quadrature() {
    let p = NoiseParams::new(0.4, 0.4, 0.4).unwrap();
    for q in [0.0, 0.2, 0.5, 0.8, -0.6, 1.3, 2.5] {
        let got: f64 = me_conditional_flip_prob(q, &p).unwrap();
        let want = me_flip_oracle(q, 0.4, 0.4);
        assert!((got - want).abs() < 1e-4, "q={q}: {got} vs {want}");
    }
    let p = NoiseParams::new(0.3, 0.2, 0.0).unwrap();
    for q in [0.1, 0.7, -0.85] {
        let got: f64 = me_conditional_flip_prob(q, &p).unwrap();
        assert!((got - me_flip_oracle(q, 0.3, 0.2)).abs() < 1e-4);
    }
}

#[test]
fn me_reduces_to_conventional_without_ancilla_noise() {
    let sp = PI.sqrt();
    for s1 in [0.2, 0.3, 0.4, 0.5, 0.6] {
        let p = NoiseParams::new(s1, 1e-8, 0.0).unwrap();
        for i in 0..=40 {
            let q = -sp / 2.0 + sp * i as f64 / 40.0;
            let me: f64 = me_conditional_flip_prob(q, &p).unwrap();
            let conv: f64 = conditional_flip_prob(q, s1).unwrap();
            assert!((me - conv).abs() < 1e-4, "q={q} s1={s1}: {me} vs {conv}");
        }
    }
}

#[test]
fn golden_average_flip_values() {
    assert!((average_flip_prob(0.542f64).unwrap() - 0.102).abs() < 0.002);
    assert!((average_flip_prob(0.59f64).unwrap() - 0.133).abs() < 0.002);
}

#[test]
fn average_flip_is_mean_of_conditional() {
    // E over q of the conditional flip probability equals the average one
    let sigma = 0.45;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let normal = Normal::new(0.0, sigma).unwrap();
    let n = 200_000;
    let mean: f64 = (0..n).map(|_| conditional_flip_prob(normal.sample(&mut rng), sigma).unwrap()).sum::<f64>() / n as f64;
    assert!((mean - average_flip_prob(sigma).unwrap()).abs() < 1e-3);
}

#[test]
fn me_residual_variance() {
    let (s1, s2) = (0.15, 0.15);
    let p = NoiseParams::new(s1, s2, 0.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let n1 = Normal::new(0.0, s1).unwrap();
    let n2 = Normal::new(0.0, s2).unwrap();
    let n = 1_000_000;
    let (mut sum, mut sq) = (0.0, 0.0);
    for _ in 0..n {
        let r: f64 = residual_map(n1.sample(&mut rng), n2.sample(&mut rng), Scheme::MeSteane, &p).unwrap();
        sum += r;
        sq += r * r;
    }
    let mean = sum / n as f64;
    let var = sq / n as f64 - mean * mean;
    let want = p.eta() * s2 * s2;
    assert!((var / want - 1.0).abs() < 0.01, "variance {var} vs {want}");
}

#[test]
fn perfect_correction_leaves_lattice_multiples() {
    let sp = PI.sqrt();
    let p = NoiseParams::new(0.5, 0.0, 0.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let normal = Normal::new(0.0, 1.3).unwrap();
    for _ in 0..10_000 {
        let u: f64 = normal.sample(&mut rng);
        let r = residual_map(u, 0.0, Scheme::ConventionalSteane, &p).unwrap();
        assert!((r / sp - (r / sp).round()).abs() < 1e-9);
        let pi = ideal_projection(u);
        assert!(pi == 0.0 || pi == sp);
    }
}

#[test]
fn me_beats_conventional_and_teleportation() {
    for s in [0.2, 0.4] {
        let p = NoiseParams::new(s, s, s).unwrap();
        let est = |scheme| {
            let mut rng = ChaCha8Rng::seed_from_u64(21);
            delta_estimate(DeltaMethod::Scheme(scheme), &p, Wiring::Backaction, 200_000, &mut rng).unwrap()
        };
        let me = est(Scheme::MeSteane);
        let conv = est(Scheme::ConventionalSteane);
        let tele = est(Scheme::Teleportation);
        assert!(me.mean < conv.mean && me.mean < tele.mean, "s={s}");
    }
}

#[test]
fn scaled_correction_at_eta_equals_me() {
    let p = NoiseParams::new(0.3, 0.056f64.sqrt(), 0.0).unwrap();
    let run = |m| {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        delta_estimate(m, &p, Wiring::Forward, 50_000, &mut rng).unwrap().mean
    };
    let a: f64 = run(DeltaMethod::Scaled(p.eta()));
    let b: f64 = run(DeltaMethod::Scheme(Scheme::MeSteane));
    assert!((a - b).abs() < 1e-12);
    let c: f64 = run(DeltaMethod::Scaled(1.0));
    let d: f64 = run(DeltaMethod::Scheme(Scheme::ConventionalSteane));
    assert!((c - d).abs() < 1e-12);
}

proptest! {
    #[test]
    fn centered_mod_is_idempotent(x in -1e3f64..1e3, b in 0.1f64..10.0) {
        let r = centered_mod(x, b).unwrap();
        prop_assert!(r > -b / 2.0 && r <= b / 2.0 + 1e-12);
        prop_assert_eq!(centered_mod(r, b).unwrap(), r);
        let k = (x - r) / b;
        prop_assert!((k - k.round()).abs() < 1e-9);
    }

    #[test]
    fn flip_prob_is_periodic_and_even(q in -5.0f64..5.0, sigma in 0.1f64..1.0) {
        let sp = PI.sqrt();
        let p = conditional_flip_prob(q, sigma).unwrap();
        prop_assert!((0.0..=0.5 + 1e-12).contains(&p));
        prop_assert!((conditional_flip_prob(q + 2.0 * sp, sigma).unwrap() - p).abs() < 1e-9);
        prop_assert!((conditional_flip_prob(-q, sigma).unwrap() - p).abs() < 1e-9);
    }

    #[test]
    fn me_flip_is_a_probability(q in -3.0f64..3.0, s1 in 0.1f64..0.8, s2 in 0.0f64..0.8) {
        let p = me_conditional_flip_prob(q, &NoiseParams::new(s1, s2, 0.0).unwrap()).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
    }
}
