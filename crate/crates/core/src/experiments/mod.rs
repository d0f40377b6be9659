//! Monte Carlo harness: per-sector failure rates, Bell-pair fidelity,
//! threshold scans and the finite-size fidelity fit.
//!
//! Trials are keyed by `(seed, trial index, sector)`, so aggregate counts do
//! not depend on how trials are spread over workers.

mod fit;
pub mod oracle;
mod report;
mod scan;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decoder::{decode, ErrorChain};
use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, Sector, SectorGraph};
use crate::noise::{sample_error_chain, trial_rng, NoiseModel};

pub use fit::{fidelity_fit, FitCell, FitResult};
pub use report::{
    read_csv, temperature_report, write_csv, CsvRow, Summary, TemperatureReport,
    FIDELITY_DEFINITION,
};
pub use scan::{crossing, threshold_scan, CurvePoint, ScanConfig, ScanStatus, ThresholdEstimate};

/// Both sector graphs of one lattice.
#[derive(Clone, Debug)]
pub struct SectorPair {
    pub to: SectorGraph,
    pub te: SectorGraph,
}

impl SectorPair {
    pub fn build(spec: &LatticeSpec) -> Self {
        SectorPair {
            to: SectorGraph::build(spec, Sector::To),
            te: SectorGraph::build(spec, Sector::Te),
        }
    }

    pub fn get(&self, sector: Sector) -> &SectorGraph {
        match sector {
            Sector::To => &self.to,
            Sector::Te => &self.te,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub trial: u64,
    pub spec: LatticeSpec,
    pub model: NoiseModel,
    pub success_to: bool,
    pub success_te: bool,
}

fn decode_sector(graph: &SectorGraph, chain: &ErrorChain) -> bool {
    decode(chain, graph)
        .expect("sector graphs always admit a matching")
        .success()
}

/// One sample-and-decode run per sector.
pub fn run_trial(
    spec: &LatticeSpec,
    graphs: &SectorPair,
    model: &NoiseModel,
    seed: u64,
    trial: u64,
) -> TrialRecord {
    let mut ok = [true; 2];
    for (k, sector) in Sector::ALL.into_iter().enumerate() {
        let graph = graphs.get(sector);
        let mut rng = trial_rng(seed, trial, sector);
        let chain = sample_error_chain(graph, model, &mut rng);
        ok[k] = decode_sector(graph, &chain);
    }
    TrialRecord {
        seed,
        trial,
        spec: *spec,
        model: *model,
        success_to: ok[0],
        success_te: ok[1],
    }
}

/// Wilson score interval at `z` standard deviations.
pub fn wilson_interval(failures: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = failures as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentStats {
    pub spec: LatticeSpec,
    pub model: NoiseModel,
    pub trials: u64,
    pub fail_to: u64,
    pub fail_te: u64,
}

impl ExperimentStats {
    pub fn from_counts(
        spec: LatticeSpec,
        model: NoiseModel,
        trials: u64,
        fail_to: u64,
        fail_te: u64,
    ) -> Self {
        ExperimentStats {
            spec,
            model,
            trials,
            fail_to,
            fail_te,
        }
    }

    pub fn failures(&self, sector: Sector) -> u64 {
        match sector {
            Sector::To => self.fail_to,
            Sector::Te => self.fail_te,
        }
    }

    pub fn fail_rate(&self, sector: Sector) -> f64 {
        self.failures(sector) as f64 / self.trials as f64
    }

    /// Binomial standard error of `fail_rate`.
    pub fn stderr(&self, sector: Sector) -> f64 {
        let p = self.fail_rate(sector);
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    /// 95% Wilson interval of `fail_rate`.
    pub fn wilson(&self, sector: Sector) -> (f64, f64) {
        wilson_interval(self.failures(sector), self.trials, 1.96)
    }

    /// `F = (1 - p_To)(1 - p_Te)`.
    pub fn fidelity(&self) -> f64 {
        (1.0 - self.fail_rate(Sector::To)) * (1.0 - self.fail_rate(Sector::Te))
    }

    pub fn fidelity_stderr(&self) -> f64 {
        let (po, pe) = (self.fail_rate(Sector::To), self.fail_rate(Sector::Te));
        let (so, se) = (self.stderr(Sector::To), self.stderr(Sector::Te));
        (((1.0 - pe) * so).powi(2) + ((1.0 - po) * se).powi(2)).sqrt()
    }
}

fn count_range(
    spec: &LatticeSpec,
    graphs: &SectorPair,
    model: &NoiseModel,
    seed: u64,
    n: u64,
) -> (u64, u64) {
    (0..n)
        .into_par_iter()
        .map(|t| {
            let r = run_trial(spec, graphs, model, seed, t);
            (!r.success_to as u64, !r.success_te as u64)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
}

/// `n_trials` runs on the global rayon pool.
pub fn run_trials(
    spec: &LatticeSpec,
    model: &NoiseModel,
    n_trials: u64,
    seed: u64,
) -> Result<ExperimentStats> {
    let graphs = SectorPair::build(spec);
    run_trials_on(spec, &graphs, model, n_trials, seed)
}

/// As `run_trials`, reusing prebuilt sector graphs.
pub fn run_trials_on(
    spec: &LatticeSpec,
    graphs: &SectorPair,
    model: &NoiseModel,
    n_trials: u64,
    seed: u64,
) -> Result<ExperimentStats> {
    if n_trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let (fo, fe) = count_range(spec, graphs, model, seed, n_trials);
    Ok(ExperimentStats::from_counts(
        *spec, *model, n_trials, fo, fe,
    ))
}

/// Run `f` on a dedicated pool of `workers` threads (`None`: rayon default).
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(Error::InvalidArgument("workers must be positive".into())),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| Error::InvalidArgument(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}
