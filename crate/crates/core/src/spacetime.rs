//! Restriction decoding with noisy check measurements.
//!
//! Each measurement round becomes one layer of the restricted lattices. A
//! defect sits at `(v, t)` when check `v` reads differently in round `t` than
//! in round `t - 1` (all checks read +1 before the first round). The last
//! round is a perfect measurement and is the top layer. Horizontal edges in
//! layer `t` stand for data flips during round `t`, vertical edges between
//! `t` and `t + 1` for a wrong reading of the check in round `t`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gkp::{NoiseParams, Scheme};
use crate::lattice::{AnalogSyndrome, DualLattice};
use crate::restriction::{Decoded, LayeredDecoder, LayeredInput, Reliabilities};
use crate::scalar::Real;

/// Defect indicator per `layer * V + vertex` for rounds of check signs.
pub fn difference_syndromes(rounds: &[Vec<bool>]) -> Vec<bool> {
    let mut out = Vec::with_capacity(rounds.iter().map(Vec::len).sum());
    let mut prev: Option<&Vec<bool>> = None;
    for signs in rounds {
        match prev {
            None => out.extend(signs.iter().copied()),
            Some(p) => out.extend(signs.iter().zip(p).map(|(a, b)| a ^ b)),
        }
        prev = Some(signs);
    }
    out
}

/// Defects as `(vertex, round)` pairs, rounds counted from 1.
pub fn defect_list(rounds: &[Vec<bool>]) -> Vec<(usize, usize)> {
    let flat = difference_syndromes(rounds);
    let n = rounds.first().map_or(0, Vec::len);
    (0..flat.len()).filter(|&i| flat[i]).map(|i| (i % n, i / n + 1)).collect()
}

/// Steady-state effective widths `(data, check)` used to turn analog
/// outcomes into flip probabilities.
///
/// Conventional: data `sqrt(s1^2 + 2 s2^2)`, check `sqrt(w s2^2 + sm^2)`.
/// ME: the residual variance after correction is `eta s2^2`, so the check
/// width is `sqrt(w eta s2^2 + sm^2)` and the data width is
/// `sqrt(s1^2 + eta s2^2 + s2^2)`.
pub fn effective_sigmas<R: Real>(scheme: Scheme, params: &NoiseParams<R>, check_weight: usize) -> Result<(R, R)> {
    if check_weight != 4 && check_weight != 8 {
        return Err(Error::invalid(format!("check weight must be 4 or 8, got {check_weight}")));
    }
    let w = R::lit(check_weight as f64);
    let (v1, v2, vm) = (
        params.sigma1 * params.sigma1,
        params.sigma2 * params.sigma2,
        params.sigma_m * params.sigma_m,
    );
    let residual = match scheme {
        Scheme::ConventionalSteane => v2,
        Scheme::MeSteane => params.eta() * v2,
        Scheme::Teleportation => {
            return Err(Error::invalid("effective widths are defined for Steane-type schemes"));
        }
    };
    Ok(((v1 + residual + v2).sqrt(), (w * residual + vm).sqrt()))
}

/// Everything the decoder sees from one round.
#[derive(Debug, Clone, Serialize)]
pub struct RoundRecord<R> {
    pub syndrome: AnalogSyndrome<R>,
    /// Flip probability of each data qubit's GKP correction in this round.
    pub data_reliability: Vec<R>,
}

/// Space-time restriction decoder for a fixed number of rounds.
#[derive(Debug, Clone)]
pub struct SpacetimeDecoder<'a, R> {
    inner: LayeredDecoder<'a, R>,
}

impl<'a, R: Real> SpacetimeDecoder<'a, R> {
    pub fn new(lattice: &'a DualLattice, rounds: usize) -> Result<Self> {
        Ok(Self { inner: LayeredDecoder::new(lattice, rounds)? })
    }

    pub fn rounds(&self) -> usize {
        self.inner.layers()
    }

    /// Decode analog round records; the last record is the perfect round.
    pub fn decode(&mut self, records: &[RoundRecord<R>]) -> Result<Decoded> {
        let lattice = self.inner.lattice();
        if records.len() != self.rounds() {
            return Err(Error::invalid(format!(
                "expected {} round records, got {}",
                self.rounds(),
                records.len()
            )));
        }
        let (nf, nv) = (lattice.num_faces(), lattice.num_vertices());
        let mut signs = Vec::with_capacity(records.len());
        let mut data = Vec::with_capacity(records.len() * nf);
        let mut checks = Vec::with_capacity(records.len() * nv);
        for r in records {
            if r.data_reliability.len() != nf || r.syndrome.sign.len() != nv {
                return Err(Error::invalid("round record does not match the lattice"));
            }
            signs.push(r.syndrome.sign.clone());
            data.extend_from_slice(&r.data_reliability);
            checks.extend_from_slice(&r.syndrome.reliability);
        }
        let defects = difference_syndromes(&signs);
        self.inner.decode_layers(&LayeredInput {
            defects: &defects,
            data: Reliabilities::Analog(&data),
            checks: Reliabilities::Analog(&checks),
        })
    }

    /// Decode binary check signs per round with fixed data and check flip
    /// probabilities.
    pub fn decode_binary(&mut self, signs: &[Vec<bool>], p_data: R, p_check: R) -> Result<Decoded> {
        if signs.len() != self.rounds() {
            return Err(Error::invalid(format!("expected {} rounds, got {}", self.rounds(), signs.len())));
        }
        let defects = difference_syndromes(signs);
        self.inner.decode_layers(&LayeredInput {
            defects: &defects,
            data: Reliabilities::Uniform(p_data),
            checks: Reliabilities::Uniform(p_check),
        })
    }

    /// Decode precomputed defects with flat layer-major reliabilities.
    pub fn decode_defects(&mut self, defects: &[bool], data: Reliabilities<'_, R>, checks: Reliabilities<'_, R>) -> Result<Decoded> {
        self.inner.decode_layers(&LayeredInput { defects, data, checks })
    }
}
