//! Single-mode GKP arithmetic under the Gaussian shift channel.
//!
//! Only the q-quadrature is modelled. A shift is a real displacement; the
//! logical lattice constant is `sqrt(pi)` and the stabilizer lattice constant
//! is `2 sqrt(pi)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Probabilities are clamped to `[PROB_FLOOR, 1 - PROB_FLOOR]` before any
/// log-odds conversion.
pub const PROB_FLOOR: f64 = 1e-12;

/// Standard deviations of the three Gaussian shift channels: data, GKP
/// ancilla, and check measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams<R> {
    pub sigma1: R,
    pub sigma2: R,
    pub sigma_m: R,
}

impl<R: Real> NoiseParams<R> {
    pub fn new(sigma1: R, sigma2: R, sigma_m: R) -> Result<Self> {
        for (name, s) in [("sigma1", sigma1), ("sigma2", sigma2), ("sigma_m", sigma_m)] {
            if !(s >= R::zero()) || !s.is_finite() {
                return Err(Error::invalid(format!("{name} must be finite and non-negative, got {s}")));
            }
        }
        Ok(Self { sigma1, sigma2, sigma_m })
    }

    /// Data-only noise with perfect ancillas and measurements.
    pub fn data_only(sigma: R) -> Result<Self> {
        Self::new(sigma, R::zero(), R::zero())
    }

    /// Maximum-likelihood shrinkage factor `s1^2 / (s1^2 + s2^2)`, defined
    /// as 1 when both variances vanish.
    pub fn eta(&self) -> R {
        let v1 = self.sigma1 * self.sigma1;
        let v12 = v1 + self.sigma2 * self.sigma2;
        if v12 == R::zero() {
            R::one()
        } else {
            v1 / v12
        }
    }
}

/// GKP error-correction gadget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    ConventionalSteane,
    MeSteane,
    Teleportation,
}

impl Scheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::ConventionalSteane => "conventional",
            Scheme::MeSteane => "me",
            Scheme::Teleportation => "teleportation",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conventional" | "conventional-steane" => Ok(Scheme::ConventionalSteane),
            "me" | "me-steane" => Ok(Scheme::MeSteane),
            "teleportation" | "teleport" => Ok(Scheme::Teleportation),
            other => Err(Error::invalid(format!("unknown scheme '{other}'"))),
        }
    }
}

/// How ancilla noise reaches the data mode in a Steane gadget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Wiring {
    /// The ancilla shift only enters the measured value: `q_out = u1 + u2`
    /// and the residual is `u1 - q_cor`.
    Forward,
    /// The first ancilla's shift kicks back onto the data before a second
    /// ancilla reads it out: the data carries `u1 - u2`, the readout is
    /// `u1 - u2 + u3`, and the residual is `u1 - u2 - p_cor`.
    Backaction,
}

/// Centered remainder `r` with `x - r` a multiple of `b` and
/// `r` in `(-b/2, b/2]`.
pub fn centered_mod<R: Real>(x: R, b: R) -> Result<R> {
    if !(b > R::zero()) || !b.is_finite() {
        return Err(Error::invalid(format!("modulus must be positive and finite, got {b}")));
    }
    Ok(cmod(x, b))
}

/// Unchecked [`centered_mod`] for hot loops; `b` must be positive.
#[inline]
pub(crate) fn cmod<R: Real>(x: R, b: R) -> R {
    let half = R::lit(0.5);
    let mut r = x - b * (x / b - half).ceil();
    // rounding in x / b can land one period off the half-open window, and
    // inputs that are meant to sit on the boundary rarely do so exactly
    let slack = R::lit(8.0) * R::epsilon() * x.abs().max(b);
    if r <= -half * b + slack {
        r = r + b;
    } else if r > half * b + slack {
        r = r - b;
    }
    r
}

pub fn sample_shift<R: Real, G: Rng + ?Sized>(sigma: R, rng: &mut G) -> R {
    if sigma == R::zero() {
        return R::zero();
    }
    sigma * R::standard_normal(rng)
}

/// Displacement applied back to the data mode after a Steane measurement
/// returned `q_out`.
pub fn correction<R: Real>(q_out: R, scheme: Scheme, params: &NoiseParams<R>) -> Result<R> {
    let reduced = cmod(q_out, R::sqrt_pi());
    match scheme {
        Scheme::ConventionalSteane => Ok(reduced),
        Scheme::MeSteane => Ok(params.eta() * reduced),
        Scheme::Teleportation => Err(Error::invalid(
            "teleportation has no single-shot correction; use teleport_residual",
        )),
    }
}

/// Truncation order for lattice sums with Gaussian width `sigma`.
#[inline]
fn truncation<R: Real>(sigma: R) -> i64 {
    let k = (R::lit(6.0) * sigma / R::sqrt_pi()).ceil();
    k.to_i64().unwrap_or(i64::MAX / 4).min(1_000_000) + 2
}

/// Probability mass of `N(center, sigma^2)` on `[a, b]`, evaluated on the
/// tail closest to the interval so small masses keep their precision.
fn interval_mass<R: Real>(a: R, b: R, center: R, sigma: R) -> R {
    let za = (a - center) / sigma;
    let zb = (b - center) / sigma;
    if za >= R::zero() {
        za.normal_sf() - zb.normal_sf()
    } else if zb <= R::zero() {
        zb.normal_cdf() - za.normal_cdf()
    } else {
        R::one() - za.normal_cdf() - zb.normal_sf()
    }
}

/// Conditional logical-flip probability of a conventional Steane correction
/// given the homodyne outcome `q_out`.
///
/// Only `q_out mod sqrt(pi)` carries information (the ancilla contributes a
/// uniformly random multiple of `sqrt(pi)`), so the outcome is reduced first.
/// The result is therefore in `[0, 1/2]`, even, and `sqrt(pi)`-periodic.
pub fn conditional_flip_prob<R: Real>(q_out: R, sigma_eff: R) -> Result<R> {
    if !(sigma_eff > R::zero()) {
        return Err(Error::invalid(format!("sigma_eff must be positive, got {sigma_eff}")));
    }
    Ok(flip_prob_unchecked(q_out, sigma_eff))
}

pub(crate) fn flip_prob_unchecked<R: Real>(q_out: R, sigma: R) -> R {
    let sp = R::sqrt_pi();
    let r = cmod(q_out, sp);
    let k_max = truncation(sigma);
    let inv = R::one() / (R::lit(2.0) * sigma * sigma);
    let r2 = r * r;
    let mut even = R::zero();
    let mut odd = R::zero();
    for k in -k_max..=k_max {
        let dist = r - R::lit(k as f64) * sp;
        // shifted by the k = 0 exponent, which is the largest
        let term = (-(dist * dist - r2) * inv).exp();
        if k % 2 == 0 {
            even = even + term;
        } else {
            odd = odd + term;
        }
    }
    odd / (even + odd)
}

/// Conditional logical-flip probability after an ME-Steane correction.
///
/// The posterior of the data shift given `q_out` is a Gaussian mixture with
/// components centred at `eta (q_out - j sqrt(pi))`, common width
/// `s1 s2 / sqrt(s1^2 + s2^2)` and weights proportional to
/// `P_{s12}(q_out - j sqrt(pi))`. Each component's failure mass over the odd
/// classes is a sum of normal CDF differences.
pub fn me_conditional_flip_prob<R: Real>(q_out: R, params: &NoiseParams<R>) -> Result<R> {
    if !(params.sigma1 > R::zero()) {
        return Err(Error::invalid(format!("sigma1 must be positive, got {}", params.sigma1)));
    }
    if params.sigma2 < R::zero() {
        return Err(Error::invalid(format!("sigma2 must be non-negative, got {}", params.sigma2)));
    }
    Ok(me_flip_prob_unchecked(q_out, params.sigma1, params.sigma2))
}

pub(crate) fn me_flip_prob_unchecked<R: Real>(q_out: R, sigma1: R, sigma2: R) -> R {
    if sigma2 == R::zero() {
        return flip_prob_unchecked(q_out, sigma1);
    }
    let sp = R::sqrt_pi();
    let half = R::lit(0.5);
    let two = R::lit(2.0);
    let v1 = sigma1 * sigma1;
    let v2 = sigma2 * sigma2;
    let v12 = v1 + v2;
    let eta = v1 / v12;
    let sigma_c = (v1 * v2 / v12).sqrt();
    let r = cmod(q_out, sp);
    let q_cor = eta * r;

    let j_max = truncation(v12.sqrt());
    let k_span = truncation(sigma_c) / 2 + 1;
    let inv = R::one() / (two * v12);
    let mut total = R::zero();
    let mut fail = R::zero();
    for j in -j_max..=j_max {
        let v = r - R::lit(j as f64) * sp;
        let weight = (-(v * v - r * r) * inv).exp();
        if weight == R::zero() {
            continue;
        }
        let center = eta * v - q_cor;
        // odd classes are [(2k+1) sqrt(pi) - sqrt(pi)/2, (2k+1) sqrt(pi) + sqrt(pi)/2]
        let k0 = (center / (two * sp)).round().to_i64().unwrap_or(0);
        let mut mass = R::zero();
        for k in (k0 - k_span - 1)..=(k0 + k_span) {
            let mid = (two * R::lit(k as f64) + R::one()) * sp;
            mass = mass + interval_mass(mid - half * sp, mid + half * sp, center, sigma_c);
        }
        total = total + weight;
        fail = fail + weight * mass;
    }
    fail / total
}

/// Average logical-flip probability of an ideal GKP correction under
/// `N(0, sigma^2)` data shifts: the mass of the odd classes.
pub fn average_flip_prob<R: Real>(sigma: R) -> Result<R> {
    if !(sigma > R::zero()) {
        return Err(Error::invalid(format!("sigma must be positive, got {sigma}")));
    }
    let sp = R::sqrt_pi();
    let half = R::lit(0.5);
    let n_max = truncation(sigma) / 2 + 1;
    let mut mass = R::zero();
    for n in -n_max - 1..=n_max {
        let mid = (R::lit(2.0 * n as f64) + R::one()) * sp;
        mass = mass + interval_mass(mid - half * sp, mid + half * sp, R::zero(), sigma);
    }
    Ok(mass)
}

/// Outcome of a perfect GKP correction on a data shift: 0 if the shift lies
/// in the even class, `sqrt(pi)` (a logical X) otherwise.
pub fn ideal_projection<R: Real>(u1: R) -> R {
    let sp = R::sqrt_pi();
    if cmod(u1, R::lit(2.0) * sp).abs() < R::lit(0.5) * sp {
        R::zero()
    } else {
        sp
    }
}

/// Shift left on the data mode after one Steane round with data shift `u1`
/// and ancilla shift `u2`, forward wiring: `u1 - q_cor(u1 + u2)`.
pub fn residual_map<R: Real>(u1: R, u2: R, scheme: Scheme, params: &NoiseParams<R>) -> Result<R> {
    Ok(u1 - correction(u1 + u2, scheme, params)?)
}

/// Residual of the back-action circuit: the data carries `u1 - u2`, the
/// readout ancilla adds `u3`. The ML shrinkage uses the variance of the
/// combined data shift, `(s1^2 + s2^2) / (s1^2 + s2^2 + s3^2)`.
pub fn backaction_residual<R: Real>(
    u1: R,
    u2: R,
    u3: R,
    scheme: Scheme,
    sigmas: [R; 3],
) -> Result<R> {
    let data = u1 - u2;
    let out = data + u3;
    let reduced = cmod(out, R::sqrt_pi());
    match scheme {
        Scheme::ConventionalSteane => Ok(data - reduced),
        Scheme::MeSteane => {
            let vd = sigmas[0] * sigmas[0] + sigmas[1] * sigmas[1];
            let vt = vd + sigmas[2] * sigmas[2];
            let eta = if vt == R::zero() { R::one() } else { vd / vt };
            Ok(data - eta * reduced)
        }
        Scheme::Teleportation => Err(Error::invalid("use teleport_residual for teleportation")),
    }
}

/// Residual of teleportation-based correction with input shifts `u1, u2, u3`.
pub fn teleport_residual<R: Real>(u1: R, u2: R, u3: R) -> R {
    let s2 = R::SQRT_2();
    (u2 + u3) / s2 + ideal_projection(u1 - (u2 - u3) / s2)
}

/// Correction rule evaluated by [`delta_estimate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DeltaMethod<R> {
    Scheme(Scheme),
    /// `q_cor = alpha * (q_out mod sqrt(pi))`.
    Scaled(R),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaEstimate<R> {
    pub mean: R,
    pub std_error: R,
    pub trials: u64,
}

/// Monte Carlo estimate of `<|(pi'(u1) - pi(u1)) mod 2 sqrt(pi)|>`.
///
/// `u1 ~ N(0, s1^2)`, `u2 ~ N(0, s2^2)`; for teleportation and the
/// back-action wiring a third shift `u3 ~ N(0, sigma_m^2)` is drawn, so
/// `sigma_m` plays the role of the third mode's width there.
pub fn delta_estimate<R: Real, G: Rng + ?Sized>(
    method: DeltaMethod<R>,
    params: &NoiseParams<R>,
    wiring: Wiring,
    trials: u64,
    rng: &mut G,
) -> Result<DeltaEstimate<R>> {
    if trials == 0 {
        return Err(Error::invalid("delta_estimate needs at least one trial"));
    }
    let sp = R::sqrt_pi();
    let two_sp = R::lit(2.0) * sp;
    let sigmas = [params.sigma1, params.sigma2, params.sigma_m];
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    for _ in 0..trials {
        let u1 = sample_shift(params.sigma1, rng);
        let u2 = sample_shift(params.sigma2, rng);
        let residual = match (method, wiring) {
            (DeltaMethod::Scheme(Scheme::Teleportation), _) => {
                let u3 = sample_shift(params.sigma_m, rng);
                teleport_residual(u1, u2, u3)
            }
            (DeltaMethod::Scheme(scheme), Wiring::Forward) => residual_map(u1, u2, scheme, params)?,
            (DeltaMethod::Scheme(scheme), Wiring::Backaction) => {
                let u3 = sample_shift(params.sigma_m, rng);
                backaction_residual(u1, u2, u3, scheme, sigmas)?
            }
            (DeltaMethod::Scaled(alpha), Wiring::Forward) => u1 - alpha * cmod(u1 + u2, sp),
            (DeltaMethod::Scaled(alpha), Wiring::Backaction) => {
                let u3 = sample_shift(params.sigma_m, rng);
                u1 - u2 - alpha * cmod(u1 - u2 + u3, sp)
            }
        };
        let gap = cmod(residual - ideal_projection(u1), two_sp).abs();
        let g = gap.to_f64().unwrap_or(f64::NAN);
        sum += g;
        sum_sq += g * g;
    }
    let n = trials as f64;
    let mean = sum / n;
    let var = if trials > 1 {
        ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(DeltaEstimate {
        mean: R::lit(mean),
        std_error: R::lit((var / n).sqrt()),
        trials,
    })
}

/// Clamp a probability into `[PROB_FLOOR, 1 - PROB_FLOOR]`.
#[inline]
pub fn clamp_prob<R: Real>(p: R) -> R {
    let eps = R::lit(PROB_FLOOR);
    p.max(eps).min(R::one() - eps)
}

/// Odds `p / (1 - p)` of a clamped probability.
#[inline]
pub fn odds<R: Real>(p: R) -> R {
    let p = clamp_prob(p);
    p / (R::one() - p)
}
