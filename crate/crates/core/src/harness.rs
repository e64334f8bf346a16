//! Monte Carlo estimation of logical failure rates.
//!
//! Every trial draws from its own ChaCha8 stream seeded from
//! `(base seed, distance, grid index, trial index)`, and per-point counts are
//! plain sums, so results do not depend on the number of worker threads.

use std::io::Write;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gkp::{
    average_flip_prob, cmod, flip_prob_unchecked, me_flip_prob_unchecked, sample_shift, NoiseParams, Scheme,
};
use crate::lattice::{check_sign, BinaryError, DualLattice};
use crate::restriction::{DecodeTrace, Decoded, Reliabilities, RestrictionDecoder};
use crate::scalar::Real;
use crate::spacetime::{defect_list, difference_syndromes, effective_sigmas, SpacetimeDecoder};
use crate::stats::{find_threshold, wilson_interval, Curve, CurvePoint, RateEstimate, ThresholdEstimate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseModel {
    /// Gaussian data shifts, one perfect round of check measurements.
    CodeCapacity,
    /// Repeated rounds of Gaussian data noise, noisy GKP corrections and
    /// noisy check measurements, closed by a perfect round.
    NoisyMeasurement,
    /// Independent data and measurement bit flips with equal probability.
    BinaryPhenomenological,
}

impl NoiseModel {
    pub fn as_str(&self) -> &'static str {
        match self {
            NoiseModel::CodeCapacity => "code-capacity",
            NoiseModel::NoisyMeasurement => "noisy-measurement",
            NoiseModel::BinaryPhenomenological => "binary-phenomenological",
        }
    }
}

impl std::str::FromStr for NoiseModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "code-capacity" | "model1" => Ok(NoiseModel::CodeCapacity),
            "noisy-measurement" | "model2" => Ok(NoiseModel::NoisyMeasurement),
            "binary-phenomenological" | "phenom" => Ok(NoiseModel::BinaryPhenomenological),
            _ => Err(Error::invalid(format!("unknown noise model '{s}'"))),
        }
    }
}

/// Noise at one grid value `x`: `(a x, b x, c x)` for the data, ancilla and
/// measurement channels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseScale {
    pub sigma1: f64,
    pub sigma2: f64,
    pub sigma_m: f64,
}

impl Default for NoiseScale {
    fn default() -> Self {
        Self { sigma1: 1.0, sigma2: 1.0, sigma_m: 1.0 }
    }
}

impl NoiseScale {
    pub fn at<R: Real>(&self, x: f64) -> Result<NoiseParams<R>> {
        NoiseParams::new(R::lit(self.sigma1 * x), R::lit(self.sigma2 * x), R::lit(self.sigma_m * x))
    }
}

/// One simulated point: a distance and a noise value on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointSpec {
    pub model: NoiseModel,
    pub scheme: Scheme,
    pub analog: bool,
    pub distance: usize,
    /// Rounds of measurement for the multi-round models, the last one perfect.
    pub rounds: usize,
    /// Grid value: sigma for the Gaussian models, flip probability for the
    /// binary one.
    pub noise: f64,
    pub scale: NoiseScale,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialTrace {
    /// Faces flipped by the sampled noise at the end of the last round.
    pub error: Vec<usize>,
    /// `(vertex, round)` pairs, rounds counted from 1.
    pub defects: Vec<(usize, usize)>,
    pub decode: Option<DecodeTrace>,
    pub correction: Vec<usize>,
    pub logical: [bool; 4],
    pub decoder_error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct TrialResult {
    pub failed: bool,
    pub logical: [bool; 4],
    /// The decoder gave up (lifting failure or an invalid correction).
    pub decoder_failure: bool,
    pub error_weight: usize,
    pub elapsed: Duration,
    pub trace: Option<TrialTrace>,
}

/// Per-worker simulation state: decoders for one lattice and scratch buffers.
pub struct TrialRunner<'a, R: Real> {
    lattice: &'a DualLattice,
    flat: Option<RestrictionDecoder<'a, R>>,
    spacetime: Option<SpacetimeDecoder<'a, R>>,
    capture: bool,
}

impl<'a, R: Real> TrialRunner<'a, R> {
    pub fn new(lattice: &'a DualLattice) -> Self {
        Self { lattice, flat: None, spacetime: None, capture: false }
    }

    /// Keep the decoder trace of every trial.
    pub fn capture_traces(mut self, on: bool) -> Self {
        self.capture = on;
        self
    }

    pub fn run<G: Rng + ?Sized>(&mut self, spec: &PointSpec, rng: &mut G) -> Result<TrialResult> {
        if spec.distance != self.lattice.distance() {
            return Err(Error::invalid("point distance does not match the runner lattice"));
        }
        match spec.model {
            NoiseModel::CodeCapacity => {
                let sigma = R::lit(spec.noise * spec.scale.sigma1);
                self.code_capacity(sigma, spec.analog, rng)
            }
            NoiseModel::NoisyMeasurement => {
                let params = spec.scale.at::<R>(spec.noise)?;
                self.noisy_measurement(&params, spec.scheme, spec.analog, spec.rounds, rng)
            }
            NoiseModel::BinaryPhenomenological => {
                self.binary_phenomenological(R::lit(spec.noise), spec.rounds, rng)
            }
        }
    }

    /// One perfect round after Gaussian data shifts of width `sigma`.
    pub fn code_capacity<G: Rng + ?Sized>(&mut self, sigma: R, analog: bool, rng: &mut G) -> Result<TrialResult> {
        if !(sigma > R::zero()) {
            return Err(Error::invalid(format!("sigma must be positive, got {sigma}")));
        }
        let start = Instant::now();
        let nf = self.lattice.num_faces();
        let shifts: Vec<R> = (0..nf).map(|_| sample_shift(sigma, rng)).collect();
        let error = BinaryError { flips: shifts.iter().map(|&u| check_sign(u)).collect() };
        let syndrome = self.lattice.syndrome_of(&error)?;
        let probs: Vec<R>;
        let reliabilities = if analog {
            probs = shifts.iter().map(|&u| flip_prob_unchecked(u, sigma)).collect();
            Reliabilities::Analog(&probs)
        } else {
            Reliabilities::Uniform(average_flip_prob(sigma)?)
        };
        if self.flat.is_none() {
            self.flat = Some(RestrictionDecoder::new(self.lattice)?);
        }
        let decoded = self.flat.as_mut().expect("created above").decode(&syndrome, reliabilities);
        let defects = syndrome.iter().enumerate().filter(|(_, &s)| s).map(|(v, _)| (v, 1)).collect();
        self.finish(error, defects, decoded, start)
    }

    /// `rounds` rounds of data noise and Steane-type GKP correction with
    /// noisy check readout, then a perfect round.
    ///
    /// Every round adds a data shift of width `sigma1`. In the noisy rounds the
    /// GKP measurement adds ancilla noise of width `sigma2`, the data mode is
    /// corrected by the chosen scheme, and each check is read with extra
    /// noise of width `sigma_m`. The ME shrinkage uses the exact prior width
    /// of that round, which includes the residual left by the previous
    /// correction. The last round measures the data shifts perfectly.
    pub fn noisy_measurement<G: Rng + ?Sized>(
        &mut self,
        params: &NoiseParams<R>,
        scheme: Scheme,
        analog: bool,
        rounds: usize,
        rng: &mut G,
    ) -> Result<TrialResult> {
        if scheme == Scheme::Teleportation {
            return Err(Error::invalid("the noisy-measurement model supports Steane-type schemes"));
        }
        if rounds == 0 {
            return Err(Error::invalid("at least one round is needed"));
        }
        let start = Instant::now();
        let lat = self.lattice;
        let (nf, nv) = (lat.num_faces(), lat.num_vertices());
        let sp = R::sqrt_pi();
        let (v1, v2, vm) = (
            params.sigma1 * params.sigma1,
            params.sigma2 * params.sigma2,
            params.sigma_m * params.sigma_m,
        );
        let averaged = if analog {
            None
        } else {
            // steady-state averages of the analog values
            let (data, c4) = effective_sigmas(scheme, params, 4)?;
            let c8 = effective_sigmas(scheme, params, 8)?.1;
            Some((avg_or_zero(data)?, avg_or_zero(c4)?, avg_or_zero(c8)?))
        };

        let mut frame = vec![R::zero(); nf];
        let mut resvar = R::zero();
        let mut signs: Vec<Vec<bool>> = Vec::with_capacity(rounds);
        let mut data_p = Vec::with_capacity(rounds * nf);
        let mut check_p = Vec::with_capacity(rounds * nv);
        let mut error = BinaryError::zeros(nf);
        for t in 1..=rounds {
            for q in frame.iter_mut() {
                *q = *q + sample_shift(params.sigma1, rng);
            }
            let prior = v1 + resvar;
            if t < rounds {
                let eta = if prior + v2 > R::zero() { prior / (prior + v2) } else { R::one() };
                for q in frame.iter_mut() {
                    let q_out = *q + sample_shift(params.sigma2, rng);
                    let reduced = cmod(q_out, sp);
                    let p = match (scheme, &averaged) {
                        (_, Some((p, _, _))) => *p,
                        // no prior uncertainty: ME leaves the data alone
                        (Scheme::MeSteane, None) if prior == R::zero() => R::zero(),
                        (Scheme::MeSteane, None) => me_flip_prob_unchecked(q_out, prior.sqrt(), params.sigma2),
                        _ => flip_prob_or_zero(q_out, (prior + v2).sqrt()),
                    };
                    data_p.push(p);
                    *q = *q - if scheme == Scheme::MeSteane { eta * reduced } else { reduced };
                }
                resvar = if scheme == Scheme::MeSteane { eta * v2 } else { v2 };
                let mut round_signs = Vec::with_capacity(nv);
                for v in 0..nv {
                    let faces = lat.faces_of_vertex(v);
                    let mut q_m = sample_shift(params.sigma_m, rng);
                    for &f in faces {
                        q_m = q_m + frame[f];
                    }
                    round_signs.push(check_sign(q_m));
                    let p = match &averaged {
                        Some((_, p4, p8)) => {
                            if faces.len() <= 4 {
                                *p4
                            } else {
                                *p8
                            }
                        }
                        None => flip_prob_or_zero(q_m, (R::lit(faces.len() as f64) * resvar + vm).sqrt()),
                    };
                    check_p.push(p);
                }
                signs.push(round_signs);
            } else {
                let sigma = prior.sqrt();
                let p_avg = if analog { None } else { Some(avg_or_zero(sigma)?) };
                for (f, &q) in frame.iter().enumerate() {
                    data_p.push(p_avg.unwrap_or_else(|| flip_prob_or_zero(q, sigma)));
                    let k = (q / sp).round().to_i64().unwrap_or(0);
                    error.flips[f] = k.rem_euclid(2) == 1;
                }
                check_p.extend(std::iter::repeat_n(R::zero(), nv));
                signs.push(lat.syndrome_of(&error)?);
            }
        }
        let decoded = self.spacetime_decoder(rounds)?.decode_defects(
            &difference_syndromes(&signs),
            Reliabilities::Analog(&data_p),
            Reliabilities::Analog(&check_p),
        );
        let defects = if self.capture { defect_list(&signs) } else { Vec::new() };
        self.finish(error, defects, decoded, start)
    }

    /// Data faces flip with probability `p` in every round and checks read
    /// wrong with probability `p` in every round but the last.
    pub fn binary_phenomenological<G: Rng + ?Sized>(&mut self, p: R, rounds: usize, rng: &mut G) -> Result<TrialResult> {
        if !(p > R::zero() && p < R::lit(0.5)) {
            return Err(Error::invalid(format!("flip probability must be in (0, 1/2), got {p}")));
        }
        if rounds == 0 {
            return Err(Error::invalid("at least one round is needed"));
        }
        let start = Instant::now();
        let lat = self.lattice;
        let nf = lat.num_faces();
        let pf = p.to_f64().unwrap_or(0.0);
        let mut error = BinaryError::zeros(nf);
        let mut signs = Vec::with_capacity(rounds);
        for t in 1..=rounds {
            for b in error.flips.iter_mut() {
                *b ^= rng.random_bool(pf);
            }
            let mut s = lat.syndrome_of(&error)?;
            if t < rounds {
                for b in s.iter_mut() {
                    *b ^= rng.random_bool(pf);
                }
            }
            signs.push(s);
        }
        let decoded = self.spacetime_decoder(rounds)?.decode_binary(&signs, p, p);
        let defects = if self.capture { defect_list(&signs) } else { Vec::new() };
        self.finish(error, defects, decoded, start)
    }

    fn spacetime_decoder(&mut self, rounds: usize) -> Result<&mut SpacetimeDecoder<'a, R>> {
        if self.spacetime.as_ref().is_none_or(|d| d.rounds() != rounds) {
            self.spacetime = Some(SpacetimeDecoder::new(self.lattice, rounds)?);
        }
        Ok(self.spacetime.as_mut().expect("created above"))
    }

    fn finish(
        &self,
        error: BinaryError,
        defects: Vec<(usize, usize)>,
        decoded: Result<Decoded>,
        start: Instant,
    ) -> Result<TrialResult> {
        let nf = self.lattice.num_faces();
        let (logical, decoder_error, decode, correction) = match decoded {
            Ok(d) => {
                let residual = error.xor(&BinaryError::from_faces(nf, &d.correction)?);
                match self.lattice.logical_flips(&residual) {
                    Ok(l) => (l, None, Some(d.trace), d.correction),
                    Err(e) => ([false; 4], Some(e), Some(d.trace), d.correction),
                }
            }
            Err(e @ (Error::LiftingFailure { .. } | Error::ContractViolation(_))) => ([false; 4], Some(e), None, Vec::new()),
            Err(e) => return Err(e),
        };
        let decoder_failure = decoder_error.is_some();
        let trace = self.capture.then(|| TrialTrace {
            error: error.support(),
            defects,
            decode,
            correction,
            logical,
            decoder_error: decoder_error.as_ref().map(|e| e.to_string()),
        });
        Ok(TrialResult {
            failed: decoder_failure || logical.iter().any(|&b| b),
            logical,
            decoder_failure,
            error_weight: error.weight(),
            elapsed: start.elapsed(),
            trace,
        })
    }
}

fn flip_prob_or_zero<R: Real>(q: R, sigma: R) -> R {
    if sigma > R::zero() {
        flip_prob_unchecked(q, sigma)
    } else {
        R::zero()
    }
}

fn avg_or_zero<R: Real>(sigma: R) -> Result<R> {
    if sigma > R::zero() {
        average_flip_prob(sigma)
    } else {
        Ok(R::zero())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one trial's random stream.
pub fn trial_seed(base: u64, distance: usize, grid_index: usize, trial: u64) -> u64 {
    let mut s = splitmix64(base);
    s = splitmix64(s ^ distance as u64);
    s = splitmix64(s ^ grid_index as u64);
    splitmix64(s ^ trial)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PointStats {
    pub trials: u64,
    pub failures: u64,
    pub logical_failures: [u64; 4],
    pub decoder_failures: u64,
}

impl PointStats {
    pub fn record(&mut self, r: &TrialResult) {
        self.trials += 1;
        self.failures += r.failed as u64;
        for (c, &l) in self.logical_failures.iter_mut().zip(&r.logical) {
            *c += l as u64;
        }
        self.decoder_failures += r.decoder_failure as u64;
    }

    pub fn merge(mut self, o: PointStats) -> PointStats {
        self.trials += o.trials;
        self.failures += o.failures;
        for (a, b) in self.logical_failures.iter_mut().zip(o.logical_failures) {
            *a += b;
        }
        self.decoder_failures += o.decoder_failures;
        self
    }

    pub fn estimate(&self) -> Result<RateEstimate> {
        wilson_interval(self.failures, self.trials)
    }
}

const CHUNK: u64 = 256;

/// Run `trials` trials of one point on the current rayon pool.
pub fn run_point<R: Real>(lattice: &DualLattice, spec: &PointSpec, grid_index: usize, trials: u64, seed: u64) -> Result<PointStats> {
    let chunks = trials.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut runner = TrialRunner::<R>::new(lattice);
            let mut stats = PointStats::default();
            for i in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, spec.distance, grid_index, i));
                stats.record(&runner.run(spec, &mut rng)?);
            }
            Ok(stats)
        })
        .try_reduce(PointStats::default, |a, b| Ok(a.merge(b)))
}

/// Re-run the first `count` trials of a point with traces captured.
pub fn trace_point<R: Real>(lattice: &DualLattice, spec: &PointSpec, grid_index: usize, count: u64, seed: u64) -> Result<Vec<TrialTrace>> {
    let mut runner = TrialRunner::<R>::new(lattice).capture_traces(true);
    (0..count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, spec.distance, grid_index, i));
            Ok(runner.run(spec, &mut rng)?.trace.expect("capture is on"))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub model: NoiseModel,
    pub scheme: Scheme,
    pub analog: bool,
    pub distances: Vec<usize>,
    pub grid: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    /// Measurement rounds per trial for the multi-round models; the code
    /// distance when unset.
    pub rounds: Option<usize>,
    pub scale: NoiseScale,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.distances.is_empty() || self.grid.is_empty() {
            return Err(Error::invalid("distances and grid must be non-empty"));
        }
        if let Some(&d) = self.distances.iter().find(|&&d| d < 4 || d % 2 != 0) {
            return Err(Error::invalid(format!("distance must be even and at least 4, got {d}")));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trials must be positive"));
        }
        if self.rounds == Some(0) {
            return Err(Error::invalid("rounds must be positive"));
        }
        for &x in &self.grid {
            let ok = match self.model {
                NoiseModel::BinaryPhenomenological => x > 0.0 && x < 0.5,
                _ => x > 0.0 && x.is_finite(),
            };
            if !ok {
                return Err(Error::invalid(format!("grid value {x} is out of range for {}", self.model.as_str())));
            }
        }
        if self.model == NoiseModel::NoisyMeasurement && self.scheme == Scheme::Teleportation {
            return Err(Error::invalid("the noisy-measurement model supports Steane-type schemes"));
        }
        Ok(())
    }

    pub fn point(&self, distance: usize, noise: f64) -> PointSpec {
        PointSpec {
            model: self.model,
            scheme: self.scheme,
            analog: self.analog,
            distance,
            rounds: match self.model {
                NoiseModel::CodeCapacity => 1,
                _ => self.rounds.unwrap_or(distance),
            },
            noise,
            scale: self.scale,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PointResult {
    pub spec: PointSpec,
    pub stats: PointStats,
    pub estimate: RateEstimate,
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentResult {
    pub points: Vec<PointResult>,
    pub threshold: std::result::Result<ThresholdEstimate, String>,
    pub elapsed_seconds: f64,
}

impl ExperimentResult {
    pub fn curves(&self) -> Vec<Curve> {
        let mut curves: Vec<Curve> = Vec::new();
        for p in &self.points {
            let point = CurvePoint { noise: p.spec.noise, failures: p.stats.failures, trials: p.stats.trials };
            match curves.iter_mut().find(|c| c.distance == p.spec.distance) {
                Some(c) => c.points.push(point),
                None => curves.push(Curve { distance: p.spec.distance, points: vec![point] }),
            }
        }
        curves
    }
}

/// Run every (distance, grid value) point on a pool of `workers` threads
/// and fit the threshold.
pub fn run_experiment<R: Real>(config: &ExperimentConfig, workers: usize) -> Result<ExperimentResult> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    let start = Instant::now();
    let mut points = Vec::new();
    for &d in &config.distances {
        let lattice = DualLattice::build(d)?;
        for (gi, &x) in config.grid.iter().enumerate() {
            let spec = config.point(d, x);
            let t0 = Instant::now();
            let stats = pool.install(|| run_point::<R>(&lattice, &spec, gi, config.trials, config.seed))?;
            points.push(PointResult {
                spec,
                stats,
                estimate: stats.estimate()?,
                elapsed_seconds: t0.elapsed().as_secs_f64(),
            });
        }
    }
    let mut result = ExperimentResult { points, threshold: Err(String::new()), elapsed_seconds: 0.0 };
    result.threshold = find_threshold(&result.curves()).map_err(|e| e.to_string());
    result.elapsed_seconds = start.elapsed().as_secs_f64();
    Ok(result)
}

pub const CSV_MAGIC: &str = "# color-gkp results v1";

/// Per-point results as CSV, preceded by a version comment line.
pub fn write_csv<W: Write>(mut out: W, points: &[PointResult]) -> Result<()> {
    writeln!(out, "{CSV_MAGIC}")?;
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record([
        "model",
        "scheme",
        "analog",
        "d",
        "noise",
        "trials",
        "failures",
        "rate",
        "ci_low",
        "ci_high",
        "logical0_failures",
        "logical1_failures",
        "logical2_failures",
        "logical3_failures",
        "decoder_failures",
    ])
    .map_err(csv_err)?;
    for p in points {
        let s = &p.stats;
        let mut row = vec![
            p.spec.model.as_str().to_string(),
            p.spec.scheme.as_str().to_string(),
            p.spec.analog.to_string(),
            p.spec.distance.to_string(),
            p.spec.noise.to_string(),
            s.trials.to_string(),
            s.failures.to_string(),
            p.estimate.rate.to_string(),
            p.estimate.ci_low.to_string(),
            p.estimate.ci_high.to_string(),
        ];
        row.extend(s.logical_failures.iter().map(u64::to_string));
        row.push(s.decoder_failures.to_string());
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Summary<'a> {
    format: &'static str,
    generated_unix_seconds: u64,
    config: &'a ExperimentConfig,
    workers: usize,
    elapsed_seconds: f64,
    threshold: Option<&'a ThresholdEstimate>,
    threshold_error: Option<&'a str>,
}

/// Threshold fit, configuration and wall time as pretty-printed JSON.
pub fn write_summary<W: Write>(out: W, config: &ExperimentConfig, result: &ExperimentResult, workers: usize) -> Result<()> {
    let now = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let summary = Summary {
        format: "color-gkp summary v1",
        generated_unix_seconds: now,
        config,
        workers,
        elapsed_seconds: result.elapsed_seconds,
        threshold: result.threshold.as_ref().ok(),
        threshold_error: result.threshold.as_ref().err().map(String::as_str),
    };
    serde_json::to_writer_pretty(out, &summary).map_err(|e| Error::Io(e.to_string()))
}
