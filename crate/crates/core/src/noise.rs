//! Thermal noise: temperature <-> flip-rate conversion and error-chain
//! sampling.
//!
//! The thermal cluster state equals the perfect cluster state with each
//! qubit flipped by `Z` independently at rate `p = 1 / (1 + exp(Δ/T))`.

use bitvec::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decoder::ErrorChain;
use crate::error::{Error, Result};
use crate::lattice::{Sector, SectorGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NoiseKind {
    /// Independent `Z` flips at rate `p`.
    #[serde(rename = "z")]
    DephasingZ,
    /// Depolarizing noise at total rate `p'` on the bcc-reduced lattice:
    /// `X` is absorbed by the `X` measurements and `Y` acts as `Z`.
    #[serde(rename = "depol-bcc")]
    DepolarizingBcc,
}

impl NoiseKind {
    pub fn label(&self) -> &'static str {
        match self {
            NoiseKind::DephasingZ => "z",
            NoiseKind::DepolarizingBcc => "depol-bcc",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    pub rate: f64,
}

impl NoiseModel {
    pub fn new(kind: NoiseKind, rate: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&rate) {
            return Err(Error::InvalidArgument(format!(
                "noise rate {rate} outside [0, 1/2]"
            )));
        }
        Ok(NoiseModel { kind, rate })
    }

    pub fn dephasing(rate: f64) -> Result<Self> {
        Self::new(NoiseKind::DephasingZ, rate)
    }

    pub fn depolarizing_bcc(rate: f64) -> Result<Self> {
        Self::new(NoiseKind::DepolarizingBcc, rate)
    }

    /// Probability that a sector edge carries an effective `Z` error.
    pub fn edge_flip_rate(&self) -> f64 {
        match self.kind {
            NoiseKind::DephasingZ => self.rate,
            // p_y + p_z with p_x = p_y = p_z = p'/3
            NoiseKind::DepolarizingBcc => 2.0 * self.rate / 3.0,
        }
    }
}

/// `p = 1 / (1 + exp(Δ / T))`.
pub fn error_rate_from_temperature(temperature: f64, gap: f64) -> Result<f64> {
    if !(temperature > 0.0) || !(gap > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "temperature ({temperature}) and gap ({gap}) must be positive"
        )));
    }
    if temperature.is_infinite() {
        return Ok(0.5);
    }
    Ok(1.0 / (1.0 + (gap / temperature).exp()))
}

/// `T = Δ / ln((1 - p) / p)` for `0 < p < 1/2`.
pub fn temperature_from_error_rate(p: f64, gap: f64) -> Result<f64> {
    if !(p > 0.0 && p < 0.5) {
        return Err(Error::InvalidArgument(format!(
            "error rate {p} outside (0, 1/2)"
        )));
    }
    if !(gap > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "gap {gap} must be positive"
        )));
    }
    Ok(gap / ((1.0 - p) / p).ln())
}

/// Inverse temperature and gap of the thermal model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TemperatureMap {
    pub gap: f64,
    pub beta: f64,
}

impl TemperatureMap {
    pub fn new(gap: f64, beta: f64) -> Result<Self> {
        if !(gap > 0.0) || !(beta >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "need gap > 0 and beta >= 0 (got {gap}, {beta})"
            )));
        }
        Ok(TemperatureMap { gap, beta })
    }

    pub fn error_rate(&self) -> f64 {
        1.0 / (1.0 + (self.beta * self.gap).exp())
    }
}

/// Stream id for the counter-based generator: one stream per
/// `(trial, sector)` pair.
pub fn stream_id(trial: u64, sector: Sector) -> u64 {
    trial * 2
        + match sector {
            Sector::To => 0,
            Sector::Te => 1,
        }
}

/// Generator keyed by `(seed, trial, sector)`; draws are consumed in edge
/// order, so edge `k` always sees the same words of the keystream.
pub fn trial_rng(seed: u64, trial: u64, sector: Sector) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id(trial, sector));
    rng
}

/// Sample an error chain: every eligible edge flips independently at the
/// model's effective rate. Excluded edges stay clean.
pub fn sample_error_chain<R: Rng + ?Sized>(
    graph: &SectorGraph,
    model: &NoiseModel,
    rng: &mut R,
) -> ErrorChain {
    let mut bits = bitvec![0; graph.num_edges()];
    sample_into(graph, model, rng, &mut bits);
    ErrorChain::from_bits(bits)
}

pub(crate) fn sample_into<R: Rng + ?Sized>(
    graph: &SectorGraph,
    model: &NoiseModel,
    rng: &mut R,
    bits: &mut BitVec,
) {
    bits.fill(false);
    let rate = model.edge_flip_rate();
    if rate <= 0.0 {
        return;
    }
    for &e in graph.eligible_edges() {
        if rng.random_bool(rate) {
            bits.set(e, true);
        }
    }
}
