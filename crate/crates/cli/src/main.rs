//! `color-gkp`: threshold sweeps, GKP correction comparisons and single-shot
//! decoding from flat config files.
//!
//! Exit status: 0 on success, 1 on runtime failures (I/O, no threshold
//! crossing, decoder anomalies), 2 on configuration errors.

mod config;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use color_gkp::gkp::{conditional_flip_prob, delta_estimate, ideal_projection, DeltaMethod, NoiseParams, Scheme, Wiring};
use color_gkp::harness::{run_experiment, trace_point, trial_seed, write_csv, write_summary, ExperimentConfig, NoiseModel, NoiseScale};
use color_gkp::lattice::{BinaryError, DualLattice};
use color_gkp::restriction::{Reliabilities, RestrictionDecoder};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use config::{Config, ConfigError};

#[derive(Parser)]
#[command(name = "color-gkp", version, about = "Color-GKP code simulation and decoding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep distances and noise strengths and estimate the threshold.
    Threshold(RunArgs),
    /// Compare GKP correction rules by the Monte Carlo logical gap Delta.
    Delta(RunArgs),
    /// Decode one injected error and print every step.
    DecodeOne(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads; defaults to the available cores.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    /// Overrides the `seed` key of the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Write per-trial decoder traces next to the results.
    #[arg(long)]
    dump_traces: bool,
    /// Per-point progress on stderr.
    #[arg(short, long)]
    verbose: bool,
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(format!("i/o: {e}"))
    }
}

impl From<color_gkp::Error> for Failure {
    fn from(e: color_gkp::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

/// A library validation error raised while reading a config.
fn invalid(line: usize, e: impl std::fmt::Display) -> Failure {
    Failure::Config(ConfigError { line, message: e.to_string() }.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Threshold(a) => threshold(a),
        Command::Delta(a) => delta(a),
        Command::DecodeOne(a) => decode_one(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("{m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn load(path: &Path) -> Result<Config, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("config: cannot read {}: {e}", path.display())))?;
    Ok(Config::parse(&text)?)
}

fn workers(a: &RunArgs) -> usize {
    a.workers
        .map(|w| w as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>, Failure> {
    fs::create_dir_all(dir)?;
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn threshold(a: &RunArgs) -> Result<(), Failure> {
    let mut c = load(&a.config)?;
    let model: NoiseModel = c.required("model")?;
    let scale = NoiseScale {
        sigma1: c.get_or("sigma1_scale", 1.0)?,
        sigma2: c.get_or("sigma2_scale", 1.0)?,
        sigma_m: c.get_or("sigma_m_scale", 1.0)?,
    };
    let grid_line = c.line_of("grid");
    let config = ExperimentConfig {
        model,
        scheme: c.get_or("scheme", Scheme::ConventionalSteane)?,
        analog: c.get_or("analog", true)?,
        distances: c.list("distances")?.unwrap_or_else(|| vec![4, 6, 8]),
        grid: c.numbers("grid")?.ok_or_else(|| ConfigError { line: 0, message: "missing required key 'grid'".into() })?,
        trials: c.get_or("trials", 20_000)?,
        seed: c.get_or("seed", 1)?,
        rounds: c.optional("rounds")?,
        scale,
    };
    let precision: String = c.get_or("precision", "f64".to_string())?;
    let csv_name: String = c.get_or("csv", "results.csv".to_string())?;
    let summary_name: String = c.get_or("summary", "summary.json".to_string())?;
    let trace_trials: u64 = c.get_or("trace_trials", 20)?;
    c.finish()?;
    let config = ExperimentConfig { seed: a.seed.unwrap_or(config.seed), ..config };
    if config.grid.is_empty() {
        return Err(invalid(grid_line, "grid is empty"));
    }
    config.validate().map_err(|e| invalid(0, e))?;
    if precision != "f64" && precision != "f32" {
        return Err(invalid(0, format!("precision must be f64 or f32, got '{precision}'")));
    }

    let workers = workers(a);
    if a.verbose {
        eprintln!(
            "{} {} analog={} d={:?} grid={:?} trials={} workers={workers}",
            config.model.as_str(),
            config.scheme.as_str(),
            config.analog,
            config.distances,
            config.grid,
            config.trials
        );
    }
    let result = if precision == "f32" {
        run_experiment::<f32>(&config, workers)?
    } else {
        run_experiment::<f64>(&config, workers)?
    };
    for p in &result.points {
        println!(
            "d={} noise={} failures={}/{} rate={:.5} [{:.5}, {:.5}]",
            p.spec.distance, p.spec.noise, p.stats.failures, p.stats.trials, p.estimate.rate, p.estimate.ci_low, p.estimate.ci_high
        );
        if p.stats.decoder_failures > 0 {
            eprintln!("warning: d={} noise={}: {} decoder failures", p.spec.distance, p.spec.noise, p.stats.decoder_failures);
        }
    }
    write_csv(create(&a.out, &csv_name)?, &result.points)?;
    write_summary(create(&a.out, &summary_name)?, &config, &result, workers)?;

    if a.dump_traces {
        let mut out = create(&a.out, "traces.jsonl")?;
        for &d in &config.distances {
            let lattice = DualLattice::build(d)?;
            for (gi, &x) in config.grid.iter().enumerate() {
                let spec = config.point(d, x);
                for (i, t) in trace_point::<f64>(&lattice, &spec, gi, trace_trials, config.seed)?.iter().enumerate() {
                    let line = serde_json::json!({ "d": d, "noise": x, "trial": i, "trace": t });
                    writeln!(out, "{line}")?;
                }
            }
        }
        out.flush()?;
    }

    match &result.threshold {
        Ok(t) => {
            println!("threshold {:.4} +- {:.4} (spread {:.4})", t.pooled, t.pooled_uncertainty, t.spread);
            Ok(())
        }
        Err(e) => Err(Failure::Runtime(format!("no threshold: {e}"))),
    }
}

/// Either tied to the swept sigma or a fixed value.
fn sigma_key(c: &mut Config, key: &str) -> Result<Option<f64>, Failure> {
    let line = c.line_of(key);
    match c.optional::<String>(key)?.as_deref() {
        None | Some("sigma") => Ok(None),
        Some(v) => v.parse().map(Some).map_err(|e| invalid(line, format!("bad value for '{key}': {e}"))),
    }
}

fn delta(a: &RunArgs) -> Result<(), Failure> {
    let mut c = load(&a.config)?;
    let sigmas = c.numbers("sigma")?.ok_or_else(|| ConfigError { line: 0, message: "missing required key 'sigma'".into() })?;
    let sigma2 = sigma_key(&mut c, "sigma2")?;
    let sigma_m = sigma_key(&mut c, "sigma_m")?;
    let wiring = match c.get_or("wiring", "backaction".to_string())?.as_str() {
        "forward" => Wiring::Forward,
        "backaction" => Wiring::Backaction,
        other => return Err(invalid(c.line_of("wiring"), format!("unknown wiring '{other}'"))),
    };
    let has_alphas = c.has("alphas");
    let alphas = c.numbers("alphas")?.unwrap_or_default();
    let schemes: Vec<Scheme> = match c.list("schemes")? {
        Some(s) => s,
        None if has_alphas => Vec::new(),
        None => vec![Scheme::MeSteane, Scheme::ConventionalSteane, Scheme::Teleportation],
    };
    let trials_line = c.line_of("trials");
    let trials: u64 = c.get_or("trials", 1_000_000)?;
    let seed: u64 = c.get_or("seed", 1)?;
    let csv_name: String = c.get_or("csv", "delta.csv".to_string())?;
    c.finish()?;
    let seed = a.seed.unwrap_or(seed);
    if trials == 0 {
        return Err(invalid(trials_line, "trials must be positive"));
    }
    if sigmas.is_empty() || sigmas.iter().any(|&s| !(s > 0.0)) {
        return Err(invalid(0, "sigma values must be positive"));
    }
    let mut methods: Vec<DeltaMethod<f64>> = schemes.into_iter().map(DeltaMethod::Scheme).collect();
    methods.extend(alphas.iter().map(|&x| DeltaMethod::Scaled(x)));
    if methods.is_empty() {
        return Err(invalid(0, "nothing to compare: give schemes or alphas"));
    }

    let mut points = Vec::new();
    for (si, &s1) in sigmas.iter().enumerate() {
        let params = NoiseParams::new(s1, sigma2.unwrap_or(s1), sigma_m.unwrap_or(s1)).map_err(|e| invalid(0, e))?;
        for &m in &methods {
            points.push((si, params, m));
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers(a))
        .build()
        .map_err(|e| Failure::Runtime(e.to_string()))?;
    // every method at one sigma sees the same shifts
    let estimates = pool.install(|| {
        points
            .par_iter()
            .map(|&(si, params, m)| {
                let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, 0, si, 0));
                delta_estimate(m, &params, wiring, trials, &mut rng)
            })
            .collect::<Result<Vec<_>, _>>()
    })?;

    let mut w = csv::Writer::from_writer(create(&a.out, &csv_name)?);
    let csv_err = |e: csv::Error| Failure::Runtime(format!("i/o: {e}"));
    w.write_record(["method", "alpha", "wiring", "sigma1", "sigma2", "sigma_m", "eta", "delta", "std_error", "trials"])
        .map_err(csv_err)?;
    for ((_, p, m), e) in points.iter().zip(&estimates) {
        let (name, alpha) = match m {
            DeltaMethod::Scheme(s) => (s.as_str().to_string(), String::new()),
            DeltaMethod::Scaled(x) => ("scaled".to_string(), x.to_string()),
        };
        w.write_record([
            name.clone(),
            alpha.clone(),
            format!("{wiring:?}").to_lowercase(),
            p.sigma1.to_string(),
            p.sigma2.to_string(),
            p.sigma_m.to_string(),
            p.eta().to_string(),
            e.mean.to_string(),
            e.std_error.to_string(),
            e.trials.to_string(),
        ])
        .map_err(csv_err)?;
        if a.verbose {
            eprintln!("sigma1={} {name}{} delta={:.5} +- {:.5}", p.sigma1, if alpha.is_empty() { String::new() } else { format!("({alpha})") }, e.mean, e.std_error);
        }
    }
    w.flush()?;

    for (si, &s1) in sigmas.iter().enumerate() {
        let best = points
            .iter()
            .zip(&estimates)
            .filter(|((i, _, _), _)| *i == si)
            .min_by(|a, b| a.1.mean.total_cmp(&b.1.mean))
            .expect("at least one method");
        let label = match best.0 .2 {
            DeltaMethod::Scheme(s) => s.as_str().to_string(),
            DeltaMethod::Scaled(x) => format!("alpha={x}"),
        };
        println!("sigma1={s1}: smallest delta {:.5} ({label}), eta={:.4}", best.1.mean, best.0 .1.eta());
    }
    Ok(())
}

fn decode_one(a: &RunArgs) -> Result<(), Failure> {
    let mut c = load(&a.config)?;
    let d_line = c.line_of("distance");
    let d: usize = c.required("distance")?;
    let flips_line = c.line_of("flips");
    let flips: Vec<usize> = c.list("flips")?.unwrap_or_default();
    let shifts_line = c.line_of("shifts");
    let shifts: Vec<String> = c.list("shifts")?.unwrap_or_default();
    let sigma: Option<f64> = c.optional("sigma")?;
    let p: f64 = c.get_or("p", 0.05)?;
    c.finish()?;

    let lattice = DualLattice::build(d).map_err(|e| invalid(d_line, e))?;
    let n = lattice.num_faces();
    let check_face = |f: usize, line: usize| {
        if f < n {
            Ok(f)
        } else {
            Err(invalid(line, format!("face {f} out of range (d={d} has {n} faces)")))
        }
    };
    if !(p > 0.0 && p < 0.5) {
        return Err(invalid(0, "p must lie in (0, 0.5)"));
    }
    if !flips.is_empty() && !shifts.is_empty() {
        return Err(invalid(shifts_line, "give either flips or shifts"));
    }

    let mut error = BinaryError::zeros(n);
    let mut probs: Option<Vec<f64>> = None;
    for &f in &flips {
        error.flips[check_face(f, flips_line)?] ^= true;
    }
    if !shifts.is_empty() {
        let mut q = vec![0.0; n];
        for s in &shifts {
            let (f, u) = s
                .split_once(':')
                .ok_or_else(|| invalid(shifts_line, format!("shift '{s}' is not face:value")))?;
            let f = check_face(f.trim().parse().map_err(|e| invalid(shifts_line, format!("face in '{s}': {e}")))?, shifts_line)?;
            q[f] += u.trim().parse::<f64>().map_err(|e| invalid(shifts_line, format!("shift in '{s}': {e}")))?;
        }
        for (f, &u) in q.iter().enumerate() {
            error.flips[f] = ideal_projection(u) != 0.0;
        }
        if let Some(s) = sigma {
            probs = Some(q.iter().map(|&u| conditional_flip_prob(u, s)).collect::<Result<_, _>>().map_err(|e| invalid(0, e))?);
        }
    }

    let syndrome = lattice.syndrome_of(&error)?;
    let mut decoder = RestrictionDecoder::<f64>::new(&lattice)?;
    let rel = match &probs {
        Some(p) => Reliabilities::Analog(p),
        None => Reliabilities::Uniform(p),
    };
    let decoded = decoder.decode(&syndrome, rel)?;
    let correction = BinaryError::from_faces(n, &decoded.correction)?;
    let residual = error.xor(&correction);
    let logical = lattice.logical_flips(&residual)?;
    let residual_syndrome = lattice.syndrome_of(&residual)?;

    let defects: Vec<usize> = (0..syndrome.len()).filter(|&v| syndrome[v]).collect();
    println!("distance {d}: {n} faces, {} checks", lattice.num_vertices());
    println!("error faces: {:?}", error.support());
    println!("defects: {defects:?}");
    for o in &decoded.trace.orders {
        println!("order {:?} (cost {:.4})", o.order, o.cost);
        println!("  first matching: {:?}", o.first);
        println!("  second matching: {:?}", o.second);
        println!("  lifted correction: {:?}", o.correction);
    }
    println!("chosen: {:?}", decoded.trace.chosen);
    println!("correction: {:?}", decoded.correction);
    println!("residual weight {}, logical flips {:?}", residual.weight(), logical);
    println!("verdict: {}", if logical.iter().any(|&x| x) { "logical error" } else { "corrected" });

    if a.dump_traces {
        let mut out = create(&a.out, "decode_trace.json")?;
        let json = serde_json::json!({
            "distance": d,
            "error": error.support(),
            "defects": defects,
            "trace": decoded.trace,
            "correction": decoded.correction,
            "logical": logical,
        });
        serde_json::to_writer_pretty(&mut out, &json).map_err(|e| Failure::Runtime(e.to_string()))?;
        out.flush()?;
    }
    if residual_syndrome.iter().any(|&s| s) {
        return Err(Failure::Runtime("correction does not reproduce the syndrome".into()));
    }
    Ok(())
}
