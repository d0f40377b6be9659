//! Threshold scans: failure curves per size and their pairwise crossings.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::{run_trials_on, ExperimentStats, SectorPair};
use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, Sector};
use crate::noise::{NoiseKind, NoiseModel};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub sizes: Vec<LatticeSpec>,
    pub p_grid: Vec<f64>,
    pub kind: NoiseKind,
    pub n_trials: u64,
    pub seed: u64,
    pub bootstrap: usize,
}

impl ScanConfig {
    pub fn new(
        sizes: Vec<LatticeSpec>,
        p_grid: Vec<f64>,
        kind: NoiseKind,
        n_trials: u64,
        seed: u64,
    ) -> Self {
        ScanConfig {
            sizes,
            p_grid,
            kind,
            n_trials,
            seed,
            bootstrap: 1000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.len() < 3 {
            return Err(Error::InvalidArgument(
                "a scan needs at least 3 sizes".into(),
            ));
        }
        if self.p_grid.len() < 4 {
            return Err(Error::InvalidArgument(
                "a scan needs at least 4 grid points".into(),
            ));
        }
        if self.p_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "p grid must be strictly increasing".into(),
            ));
        }
        if self.n_trials == 0 {
            return Err(Error::InvalidArgument("need at least one trial".into()));
        }
        if self
            .sizes
            .windows(2)
            .any(|w| w[0].num_sites() >= w[1].num_sites())
        {
            return Err(Error::InvalidArgument(
                "sizes must be strictly increasing".into(),
            ));
        }
        for &p in &self.p_grid {
            NoiseModel::new(self.kind, p)?;
        }
        Ok(())
    }
}

/// One cell of a failure curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub p: f64,
    pub stats: ExperimentStats,
    /// `1 - F`.
    pub metric: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanStatus {
    Found,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdEstimate {
    pub status: ScanStatus,
    /// Mean of the neighbouring-size crossings.
    pub estimate: Option<f64>,
    /// 95% percentile bootstrap interval.
    pub ci: Option<(f64, f64)>,
    /// Crossing of sizes `k` and `k + 1`.
    pub pair_crossings: Vec<Option<f64>>,
    /// Fraction of bootstrap resamples in which every pair crossed.
    pub bootstrap_success: f64,
    pub curves: Vec<Vec<CurvePoint>>,
}

impl ThresholdEstimate {
    pub fn half_width(&self) -> Option<f64> {
        self.ci.map(|(lo, hi)| (hi - lo) / 2.0)
    }
}

/// Where `larger - smaller` first goes from `<= 0` to `> 0`, linearly
/// interpolated between grid points.
pub fn crossing(p_grid: &[f64], smaller: &[f64], larger: &[f64]) -> Option<f64> {
    let diff: Vec<f64> = larger.iter().zip(smaller).map(|(a, b)| a - b).collect();
    for k in 0..diff.len().saturating_sub(1) {
        let (a, b) = (diff[k], diff[k + 1]);
        if a <= 0.0 && b > 0.0 {
            let t = -a / (b - a);
            return Some(p_grid[k] + t * (p_grid[k + 1] - p_grid[k]));
        }
    }
    None
}

fn metric(fail_to: u64, fail_te: u64, n: u64) -> f64 {
    let n = n as f64;
    1.0 - (1.0 - fail_to as f64 / n) * (1.0 - fail_te as f64 / n)
}

fn all_crossings(p_grid: &[f64], metrics: &[Vec<f64>]) -> Vec<Option<f64>> {
    metrics
        .windows(2)
        .map(|w| crossing(p_grid, &w[0], &w[1]))
        .collect()
}

fn mean_if_complete(c: &[Option<f64>]) -> Option<f64> {
    let vals: Option<Vec<f64>> = c.iter().copied().collect();
    vals.map(|v| v.iter().sum::<f64>() / v.len() as f64)
}

/// Decorrelates the trial streams of different sizes; all grid points of
/// one size share their streams.
fn size_seed(seed: u64, k: usize) -> u64 {
    let mut z = seed.wrapping_add((k as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Estimate from already collected curves.
pub(crate) fn estimate_from_curves(
    cfg: &ScanConfig,
    curves: Vec<Vec<CurvePoint>>,
) -> Result<ThresholdEstimate> {
    let metrics: Vec<Vec<f64>> = curves
        .iter()
        .map(|c| c.iter().map(|pt| pt.metric).collect())
        .collect();
    let pair_crossings = all_crossings(&cfg.p_grid, &metrics);
    let estimate = mean_if_complete(&pair_crossings);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(u64::MAX);
    let mut samples = Vec::with_capacity(cfg.bootstrap);
    for _ in 0..cfg.bootstrap {
        let mut resampled = Vec::with_capacity(curves.len());
        for curve in &curves {
            let mut row = Vec::with_capacity(curve.len());
            for pt in curve {
                let n = pt.stats.trials;
                let mut draw = |s: Sector| -> Result<u64> {
                    let b = Binomial::new(n, pt.stats.fail_rate(s))
                        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
                    Ok(b.sample(&mut rng))
                };
                let (fo, fe) = (draw(Sector::To)?, draw(Sector::Te)?);
                row.push(metric(fo, fe, n));
            }
            resampled.push(row);
        }
        if let Some(m) = mean_if_complete(&all_crossings(&cfg.p_grid, &resampled)) {
            samples.push(m);
        }
    }
    samples.sort_by(f64::total_cmp);
    let bootstrap_success = if cfg.bootstrap == 0 {
        0.0
    } else {
        samples.len() as f64 / cfg.bootstrap as f64
    };
    let ci = (estimate.is_some() && !samples.is_empty())
        .then(|| (percentile(&samples, 0.025), percentile(&samples, 0.975)));
    Ok(ThresholdEstimate {
        status: if estimate.is_some() {
            ScanStatus::Found
        } else {
            ScanStatus::Inconclusive
        },
        estimate,
        ci,
        pair_crossings,
        bootstrap_success,
        curves,
    })
}

/// Failure curves for every size over the grid, then crossings of
/// neighbouring sizes. A scan where some pair does not cross is reported as
/// inconclusive.
pub fn threshold_scan(cfg: &ScanConfig) -> Result<ThresholdEstimate> {
    cfg.validate()?;
    let mut curves = Vec::with_capacity(cfg.sizes.len());
    for (k, spec) in cfg.sizes.iter().enumerate() {
        let graphs = SectorPair::build(spec);
        let seed = size_seed(cfg.seed, k);
        let mut curve = Vec::with_capacity(cfg.p_grid.len());
        for &p in &cfg.p_grid {
            let model = NoiseModel::new(cfg.kind, p)?;
            let stats = run_trials_on(spec, &graphs, &model, cfg.n_trials, seed)?;
            log::info!(
                "{spec} p={p:.4}: fail_to={} fail_te={} of {}",
                stats.fail_to,
                stats.fail_te,
                stats.trials
            );
            curve.push(CurvePoint {
                p,
                metric: 1.0 - stats.fidelity(),
                stats,
            });
        }
        curves.push(curve);
    }
    estimate_from_curves(cfg, curves)
}
