//! Least-squares fit of `ln(-ln F) = a ln d + ln k1 - k2 L` on toric data,
//! with `L` and `d = d_toric` in the toric lattice convention.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitCell {
    pub big_l: usize,
    pub d_toric: usize,
    pub fidelity: f64,
    /// Standard error of `fidelity`; zero means unweighted.
    pub fidelity_stderr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    /// Coefficient of `ln d`; the model predicts one.
    pub slope: f64,
    pub slope_stderr: f64,
    pub k1: f64,
    pub k2: f64,
    pub r_squared: f64,
    pub used: Vec<FitCell>,
    pub excluded: Vec<FitCell>,
}

fn distinct(v: impl Iterator<Item = usize>) -> usize {
    let mut v: Vec<usize> = v.collect();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Weighted least squares with weights from the delta method,
/// `σ_y = σ_F / |F ln F|`. Cells with `F ∈ {0, 1}` carry no information and
/// are excluded with a warning.
pub fn fidelity_fit(cells: &[FitCell]) -> Result<FitResult> {
    if distinct(cells.iter().map(|c| c.big_l)) < 3 || distinct(cells.iter().map(|c| c.d_toric)) < 3
    {
        return Err(Error::InvalidArgument(
            "fit needs at least 3 values each of L and d".into(),
        ));
    }
    let (used, excluded): (Vec<FitCell>, Vec<FitCell>) = cells
        .iter()
        .partition(|c| c.fidelity > 0.0 && c.fidelity < 1.0);
    for c in &excluded {
        log::warn!(
            "excluding L={} d_toric={} with F={} (too few trials to resolve a failure rate)",
            c.big_l,
            c.d_toric,
            c.fidelity
        );
    }
    if used.len() < 4
        || distinct(used.iter().map(|c| c.big_l)) < 2
        || distinct(used.iter().map(|c| c.d_toric)) < 2
    {
        return Err(Error::InvalidArgument(format!(
            "only {} usable cells after excluding F = 0 or 1",
            used.len()
        )));
    }

    let m = used.len();
    let x = DMatrix::from_fn(m, 3, |i, j| match j {
        0 => (used[i].d_toric as f64).ln(),
        1 => 1.0,
        _ => used[i].big_l as f64,
    });
    let y = DVector::from_fn(m, |i, _| (-used[i].fidelity.ln()).ln());
    let weighted = used.iter().all(|c| c.fidelity_stderr > 0.0);
    let w = DVector::from_fn(m, |i, _| {
        if weighted {
            let c = &used[i];
            let s = c.fidelity_stderr / (c.fidelity * c.fidelity.ln()).abs();
            1.0 / (s * s)
        } else {
            1.0
        }
    });

    let xtw = DMatrix::from_fn(3, m, |j, i| x[(i, j)] * w[i]);
    let normal = &xtw * &x;
    let inv = normal
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::InvalidArgument("degenerate fit design".into()))?;
    let beta = &inv * (&xtw * &y);

    let resid = &y - &x * &beta;
    let ss_res: f64 = (0..m).map(|i| w[i] * resid[i] * resid[i]).sum();
    let w_sum = w.sum();
    let y_bar = (0..m).map(|i| w[i] * y[i]).sum::<f64>() / w_sum;
    let ss_tot: f64 = (0..m).map(|i| w[i] * (y[i] - y_bar).powi(2)).sum();
    let r_squared = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    let dof = m.saturating_sub(3).max(1) as f64;
    // residual scale absorbs any misestimate of the weights
    let slope_stderr = (inv[(0, 0)] * ss_res / dof).sqrt();

    Ok(FitResult {
        slope: beta[0],
        slope_stderr,
        k1: beta[1].exp(),
        k2: -beta[2],
        r_squared,
        used,
        excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(k1: f64, k2: f64, l: usize, d: usize) -> f64 {
        (-(d as f64) * k1 * (-(l as f64) * k2).exp()).exp()
    }

    #[test]
    fn recovers_synthetic_model() {
        let mut cells = Vec::new();
        for l in [3, 4, 5, 6] {
            for d in [4, 8, 16] {
                cells.push(FitCell {
                    big_l: l,
                    d_toric: d,
                    fidelity: model(0.1, 0.5, l, d),
                    fidelity_stderr: 0.0,
                });
            }
        }
        let fit = fidelity_fit(&cells).unwrap();
        assert!((fit.k1 - 0.1).abs() < 1e-3);
        assert!((fit.k2 - 0.5).abs() < 5e-3);
        assert!((fit.slope - 1.0).abs() < 1e-9);
        assert!(fit.r_squared > 0.999999);
        assert!(fit.excluded.is_empty());
    }

    #[test]
    fn doubling_d_adds_ln2() {
        let f4 = model(0.3, 0.7, 4, 4);
        let f8 = model(0.3, 0.7, 4, 8);
        let dy = (-f8.ln()).ln() - (-f4.ln()).ln();
        assert!((dy - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn degenerate_cells_are_excluded() {
        let mut cells = Vec::new();
        for l in [3, 4, 5] {
            for d in [2, 4, 8] {
                cells.push(FitCell {
                    big_l: l,
                    d_toric: d,
                    fidelity: if l == 5 && d == 2 {
                        1.0
                    } else {
                        model(0.2, 0.4, l, d)
                    },
                    fidelity_stderr: 0.0,
                });
            }
        }
        let fit = fidelity_fit(&cells).unwrap();
        assert_eq!(fit.excluded.len(), 1);
        assert_eq!(fit.used.len(), 8);
        assert!((fit.k2 - 0.4).abs() < 1e-9);
        assert!(fidelity_fit(&cells[..4]).is_err());
    }
}
