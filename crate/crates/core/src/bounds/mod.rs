//! Separability side of the problem: bond-state partial transpose, the
//! valence-bond construction that maps a product of bond states onto the
//! thermal cluster state, and the resulting temperature bounds.
//!
//! Energies: the cluster Hamiltonian is `H = -(Δ/2) Σ K_u`, so the state
//! weight `tanh β` of the construction is `tanh(Δ / 2T)`.

mod vbs;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise::temperature_from_error_rate;

pub use vbs::{
    apply_w, apply_w_unnormalized, build_vbs_state, dense_z_channel, flatten,
    flattening_probabilities, pauli_matrix, quasi_cluster_state, thermal_cluster_state,
    verify_vbs_equivalence, GraphSpec, VbsEquivalenceReport, VbsState, WeightAssignment,
    MAX_VIRTUAL_QUBITS,
};

/// `ρ_e(ω) = ¼ (I + ω X₁Z₂)(I + ω Z₁X₂)` in Kronecker order (qubit 1 is the
/// high bit).
#[derive(Clone, Debug, PartialEq)]
pub struct BondState {
    pub omega: f64,
    pub rho: DMatrix<f64>,
}

fn pauli_x() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

fn pauli_z() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

pub fn bond_state(omega: f64) -> Result<BondState> {
    if !(0.0..=1.0).contains(&omega) {
        return Err(Error::InvalidArgument(format!(
            "bond weight {omega} outside [0, 1]"
        )));
    }
    let id = DMatrix::<f64>::identity(4, 4);
    let xz = pauli_x().kronecker(&pauli_z());
    let zx = pauli_z().kronecker(&pauli_x());
    let rho = (&id + &xz * omega) * (&id + &zx * omega) * 0.25;
    Ok(BondState { omega, rho })
}

/// Largest asymmetry tolerated by `min_pt_eigenvalue`.
const HERMITIAN_TOL: f64 = 1e-12;

/// Partial transpose over the second qubit of a two-qubit operator.
pub fn partial_transpose(rho: &DMatrix<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(4, 4, |r, c| {
        let (a, b) = (r >> 1, r & 1);
        let (cc, d) = (c >> 1, c & 1);
        rho[(a << 1 | d, cc << 1 | b)]
    })
}

/// Smallest eigenvalue of `ρ^{T₂}`; negative iff `ρ` is entangled.
pub fn min_pt_eigenvalue(rho: &DMatrix<f64>) -> Result<f64> {
    if rho.shape() != (4, 4) {
        return Err(Error::InvalidArgument(format!(
            "expected a 4x4 operator, got {:?}",
            rho.shape()
        )));
    }
    let dev = (rho - rho.transpose()).amax();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let pt = partial_transpose(rho);
    Ok(SymmetricEigen::new(pt).eigenvalues.min())
}

/// Bond weight at which the bond state stops being entangled, by bisection
/// on the PT eigenvalue.
pub fn separability_threshold() -> f64 {
    let pt = |w: f64| min_pt_eigenvalue(&bond_state(w).expect("in range").rho).expect("4x4");
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if pt(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn check_gap(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "gap {delta} must be positive"
        )));
    }
    Ok(())
}

/// `T` solving `tanh(Δ / 2T) = √2 - 1`: above it the state is bi-separable
/// across any hyperplane cut.
pub fn upper_bound_temperature(delta: f64) -> Result<f64> {
    check_gap(delta)?;
    Ok(delta / (2.0 * (2f64.sqrt() - 1.0).atanh()))
}

/// `T` solving `tanh(Δ / 2T) = (√2 - 1)^6`: above it the state is
/// completely separable.
pub fn complete_separability_temperature(delta: f64) -> Result<f64> {
    check_gap(delta)?;
    Ok(delta / (2.0 * (2f64.sqrt() - 1.0).powi(6).atanh()))
}

/// The three temperature scales, in units of the gap `Δ` unless labeled.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TemperatureBounds {
    pub delta: f64,
    /// Error rate the lower bound is computed from.
    pub p_threshold: f64,
    pub omega_star: f64,
    pub t_lower: f64,
    pub t_upper_biseparable: f64,
    /// The abstract's rounded figure, `1.15 Δ`.
    pub t_upper_quoted: f64,
    pub t_complete_separable: f64,
    /// `t_complete_separable` expressed with `Δ/2 = 1`.
    pub t_complete_half_gap_units: f64,
    pub conventions: Vec<String>,
}

impl TemperatureBounds {
    pub fn compute(p_threshold: f64, delta: f64) -> Result<Self> {
        check_gap(delta)?;
        let t_complete = complete_separability_temperature(delta)?;
        Ok(TemperatureBounds {
            delta,
            p_threshold,
            omega_star: separability_threshold(),
            t_lower: temperature_from_error_rate(p_threshold, delta)?,
            t_upper_biseparable: upper_bound_temperature(delta)?,
            t_upper_quoted: 1.15 * delta,
            t_complete_separable: t_complete,
            t_complete_half_gap_units: t_complete / (delta / 2.0),
            conventions: vec![
                "temperatures in the same units as delta (H = -(delta/2) sum K_u)".into(),
                "t_lower = delta / ln((1-p)/p) at p = p_threshold".into(),
                "t_upper_biseparable solves tanh(delta/2T) = sqrt2-1; t_upper_quoted is the rounded 1.15 delta".into(),
                "t_complete_half_gap_units uses delta/2 = 1".into(),
            ],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eig(m: &DMatrix<f64>) -> Vec<f64> {
        let mut v: Vec<f64> = SymmetricEigen::new(m.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn bond_state_spectrum() {
        for w in [0.0, 0.2, 0.5, 0.9, 1.0] {
            let b = bond_state(w).unwrap();
            assert!((b.rho.trace() - 1.0).abs() < 1e-15);
            let mut want = vec![
                (1.0 + w) * (1.0 + w) / 4.0,
                (1.0 - w) * (1.0 - w) / 4.0,
                (1.0 - w * w) / 4.0,
                (1.0 - w * w) / 4.0,
            ];
            want.sort_by(f64::total_cmp);
            for (a, b) in eig(&b.rho).iter().zip(&want) {
                assert!((a - b).abs() < 1e-12);
            }
        }
        let mixed = bond_state(0.0).unwrap().rho;
        assert!((mixed - DMatrix::identity(4, 4) * 0.25).amax() < 1e-15);
        let pure = bond_state(1.0).unwrap().rho;
        assert!((&pure * &pure - &pure).amax() < 1e-12);
        assert!(bond_state(1.1).is_err());
    }

    #[test]
    fn pt_examples() {
        let e = |w: f64| min_pt_eigenvalue(&bond_state(w).unwrap().rho).unwrap();
        assert!((e(0.0) - 0.25).abs() < 1e-15);
        assert!(e(2f64.sqrt() - 1.0).abs() < 1e-12);
        assert!((e(1.0) + 0.5).abs() < 1e-12);
        // closed form of the smallest PT eigenvalue
        for k in 0..=100 {
            let w = k as f64 / 100.0;
            let want = (1.0 - 2.0 * w - w * w) / 4.0;
            assert!((e(w) - want.min((1.0 + w * w) / 4.0)).abs() < 1e-12);
            assert_eq!(e(w) >= -1e-15, w <= 2f64.sqrt() - 1.0 + 1e-15);
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = DMatrix::identity(4, 4) * 0.25;
        m[(0, 1)] = 0.1;
        assert!(matches!(min_pt_eigenvalue(&m), Err(Error::NotHermitian(_))));
        assert!(min_pt_eigenvalue(&DMatrix::identity(2, 2)).is_err());
    }

    #[test]
    fn threshold_bisection() {
        let w = separability_threshold();
        assert!((0.414213561..=0.414213563).contains(&w));
        assert!((w - (2f64.sqrt() - 1.0)).abs() < 1e-9);
        let e = |w: f64| min_pt_eigenvalue(&bond_state(w).unwrap().rho).unwrap();
        assert!(e(w - 1e-6) > 0.0);
        assert!(e(w + 1e-6) < 0.0);
    }

    #[test]
    fn temperatures() {
        let t = upper_bound_temperature(1.0).unwrap();
        assert!((t - 1.134593).abs() < 1e-6, "{t}");
        assert!((upper_bound_temperature(2.0).unwrap() - 2.0 * t).abs() < 1e-12);
        assert!(((1.0 / (2.0 * t)).tanh() - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!(((2f64.sqrt() - 1.0).powi(6) - 0.00505063).abs() < 1e-8);
        let tc = complete_separability_temperature(2.0).unwrap();
        assert!((tc - 197.99).abs() < 0.01, "{tc}");
        assert!(tc > upper_bound_temperature(2.0).unwrap());
        assert!(upper_bound_temperature(0.0).is_err());
    }

    #[test]
    fn bounds_summary() {
        let b = TemperatureBounds::compute(0.033, 1.0).unwrap();
        assert!((b.t_lower - 0.296).abs() < 0.003);
        assert!(b.t_lower < b.t_upper_biseparable);
        assert!(b.t_upper_biseparable < b.t_complete_separable);
        assert!((b.t_complete_half_gap_units - 2.0 * b.t_complete_separable).abs() < 1e-9);
    }
}
