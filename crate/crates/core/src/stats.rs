//! Binomial rate estimates and threshold crossings.

use serde::Serialize;

use crate::error::{Error, Result};

const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateEstimate {
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Failure fraction with a 95% Wilson score interval.
pub fn wilson_interval(failures: u64, trials: u64) -> Result<RateEstimate> {
    if trials == 0 || failures > trials {
        return Err(Error::invalid(format!("invalid counts {failures}/{trials}")));
    }
    let n = trials as f64;
    let p = failures as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    Ok(RateEstimate {
        rate: p,
        ci_low: if failures == 0 { 0.0 } else { (center - half).max(0.0) },
        ci_high: if failures == trials { 1.0 } else { (center + half).min(1.0) },
    })
}

/// One measured point of a logical-rate curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub noise: f64,
    pub failures: u64,
    pub trials: u64,
}

/// Logical failure rate against noise strength for one code distance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Curve {
    pub distance: usize,
    pub points: Vec<CurvePoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairCrossing {
    pub smaller: usize,
    pub larger: usize,
    pub crossing: f64,
    pub uncertainty: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdEstimate {
    pub pairs: Vec<PairCrossing>,
    /// Inverse-variance weighted mean of the pair crossings.
    pub pooled: f64,
    pub pooled_uncertainty: f64,
    /// Largest minus smallest pair crossing.
    pub spread: f64,
}

/// Log of a rate with the zero and one ends pulled in by half a count, and
/// its delta-method variance.
fn log_rate(p: &CurvePoint) -> (f64, f64) {
    let n = p.trials as f64;
    let r = (p.failures as f64 / n).clamp(0.5 / n, 1.0 - 0.5 / n);
    (r.ln(), (1.0 - r) / (n * r))
}

/// Weighted least-squares line through `(x, y, w)` rows; returns the root
/// of the line and its delta-method standard error, if the slope is positive.
fn fit_root(rows: &[(f64, f64, f64)]) -> Option<(f64, f64)> {
    let (mut sw, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, y, w) in rows {
        sw += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
    }
    let det = sw * sxx - sx * sx;
    if !(det > 0.0) {
        return None;
    }
    let slope = (sw * sxy - sx * sy) / det;
    let intercept = (sxx * sy - sx * sxy) / det;
    if !(slope > 0.0) {
        return None;
    }
    let x = -intercept / slope;
    // covariance of (intercept, slope) is the inverse normal matrix
    let var_a = sxx / det;
    let var_b = sw / det;
    let cov = -sx / det;
    let var_x = (var_a + x * x * var_b + 2.0 * x * cov) / (slope * slope);
    Some((x, var_x.max(0.0).sqrt().max(f64::EPSILON)))
}

/// Crossing of two curves where the log-rate difference
/// `log r_large - log r_small` turns from negative to non-negative.
///
/// Each such sign change is refined by a weighted line through the two
/// bracketing grid points and one neighbour on each side; the local fit
/// keeps saturated rates far from the crossing out of the estimate. With
/// several sign changes the best-determined one wins.
fn pair_crossing(a: &Curve, b: &Curve) -> Result<PairCrossing> {
    let mut rows = Vec::new();
    for pa in &a.points {
        if let Some(pb) = b.points.iter().find(|pb| (pb.noise - pa.noise).abs() < 1e-12) {
            let (la, va) = log_rate(pa);
            let (lb, vb) = log_rate(pb);
            rows.push((pa.noise, lb - la, 1.0 / (va + vb)));
        }
    }
    rows.sort_by(|p, q| p.0.total_cmp(&q.0));
    let no = |why: &str| {
        Err(Error::NoCrossing(format!(
            "d={} vs d={}: {why}; points (noise, log-rate difference): {:?}",
            a.distance,
            b.distance,
            rows.iter().map(|r| (r.0, r.1)).collect::<Vec<_>>()
        )))
    };
    if rows.len() < 2 {
        return no("fewer than two shared grid points");
    }
    let mut best: Option<(f64, f64)> = None;
    for i in 0..rows.len() - 1 {
        if !(rows[i].1 < 0.0 && rows[i + 1].1 >= 0.0) {
            continue;
        }
        let window = &rows[i.saturating_sub(1)..(i + 3).min(rows.len())];
        let Some((x, se)) = fit_root(window) else { continue };
        if x < window[0].0 || x > window[window.len() - 1].0 {
            continue;
        }
        if best.is_none_or(|(_, b)| se < b) {
            best = Some((x, se));
        }
    }
    match best {
        Some((crossing, uncertainty)) => Ok(PairCrossing { smaller: a.distance, larger: b.distance, crossing, uncertainty }),
        None if rows.iter().all(|r| r.1 < 0.0) => no("the larger distance stays below the smaller one"),
        None if rows.iter().all(|r| r.1 >= 0.0) => no("the larger distance never drops below the smaller one"),
        None => no("no sign change with a consistent local crossing"),
    }
}

/// Threshold from the crossings of adjacent-distance curves.
pub fn find_threshold(curves: &[Curve]) -> Result<ThresholdEstimate> {
    if curves.len() < 2 {
        return Err(Error::invalid("at least two distances are needed"));
    }
    let mut sorted: Vec<&Curve> = curves.iter().collect();
    sorted.sort_by_key(|c| c.distance);
    let mut pairs = Vec::new();
    for w in sorted.windows(2) {
        if w[0].points.len() < 3 || w[1].points.len() < 3 {
            return Err(Error::invalid("each curve needs at least three grid points"));
        }
        pairs.push(pair_crossing(w[0], w[1])?);
    }
    let wsum: f64 = pairs.iter().map(|p| 1.0 / (p.uncertainty * p.uncertainty)).sum();
    let pooled = pairs.iter().map(|p| p.crossing / (p.uncertainty * p.uncertainty)).sum::<f64>() / wsum;
    let lo = pairs.iter().map(|p| p.crossing).fold(f64::INFINITY, f64::min);
    let hi = pairs.iter().map(|p| p.crossing).fold(f64::NEG_INFINITY, f64::max);
    Ok(ThresholdEstimate { pairs, pooled, pooled_uncertainty: wsum.recip().sqrt(), spread: hi - lo })
}
