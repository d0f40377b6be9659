//! Naive state-vector simulation of the pattern, kept independent of the
//! tableau code. Real single-precision amplitudes: the cluster state and
//! every `X`/`Z` measurement keep the state real.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::pattern::{
    cluster_edges, code_sites, plaquette_operator, plaquette_sites, site_operator,
    MeasurementRecord,
};
use super::pauli::PauliOp;
use crate::error::{Error, Result};
use crate::lattice::{classify_site, Basis, LatticeSpec, Site};

pub const MAX_DENSE_QUBITS: usize = 27;

/// Real state over a subset of the original qubits. Bit `k` of an
/// amplitude index is qubit `qubits[k]`.
#[derive(Clone, Debug)]
pub struct DenseState {
    qubits: Vec<usize>,
    amps: Vec<f32>,
}

impl DenseState {
    /// `∏_{(a,b)} CZ_ab |+>^n`.
    pub fn graph_state(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_DENSE_QUBITS {
            return Err(Error::TooLarge {
                qubits: n,
                limit: MAX_DENSE_QUBITS,
            });
        }
        let amp = (0.5f64.powi(n as i32)).sqrt() as f32;
        let mut amps = vec![amp; 1 << n];
        for &(a, b) in edges {
            let mask = (1usize << a) | (1usize << b);
            for (i, x) in amps.iter_mut().enumerate() {
                if i & mask == mask {
                    *x = -*x;
                }
            }
        }
        Ok(DenseState {
            qubits: (0..n).collect(),
            amps,
        })
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    fn position(&self, q: usize) -> usize {
        self.qubits
            .iter()
            .position(|&x| x == q)
            .unwrap_or_else(|| panic!("qubit {q} already measured"))
    }

    pub fn apply_z(&mut self, q: usize) {
        let bit = 1usize << self.position(q);
        for (i, x) in self.amps.iter_mut().enumerate() {
            if i & bit != 0 {
                *x = -*x;
            }
        }
    }

    fn hadamard(&mut self, k: usize) {
        let bit = 1usize << k;
        let s = std::f32::consts::FRAC_1_SQRT_2;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a, b) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = (a + b) * s;
                self.amps[i | bit] = (a - b) * s;
            }
        }
    }

    /// Projective `Z` measurement; the measured qubit is sliced out.
    /// Returns `+1` or `-1`.
    pub fn measure_z<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> i8 {
        let k = self.position(q);
        self.collapse(k, rng)
    }

    /// Projective `X` measurement (Hadamard, then `Z`).
    pub fn measure_x<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> i8 {
        let k = self.position(q);
        self.hadamard(k);
        self.collapse(k, rng)
    }

    fn collapse<R: Rng + ?Sized>(&mut self, k: usize, rng: &mut R) -> i8 {
        let bit = 1usize << k;
        let p1: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, &a)| (a as f64) * (a as f64))
            .sum();
        let one = rng.random_bool(p1.clamp(0.0, 1.0));
        let norm = if one { p1 } else { 1.0 - p1 };
        let scale = (1.0 / norm.sqrt()) as f32;
        let low = bit - 1;
        let keep = if one { bit } else { 0 };
        let half = self.amps.len() / 2;
        let mut out = Vec::with_capacity(half);
        for j in 0..half {
            let i = (j & low) | ((j & !low) << 1) | keep;
            out.push(self.amps[i] * scale);
        }
        self.amps = out;
        self.qubits.remove(k);
        if one {
            -1
        } else {
            1
        }
    }

    /// `<ψ|P|ψ>` for a Pauli with only `X`/`Z` factors on live qubits.
    pub fn expectation(&self, p: &PauliOp) -> f64 {
        let mut xm = 0usize;
        let mut zm = 0usize;
        for q in p.x_support() {
            assert!(!p.z(q), "Y factors are not supported");
            xm |= 1 << self.position(q);
        }
        for q in p.z_support() {
            zm |= 1 << self.position(q);
        }
        let mut acc = 0.0f64;
        for (c, &a) in self.amps.iter().enumerate() {
            let b = self.amps[c ^ xm] as f64;
            let s = if (c & zm).count_ones() % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            acc += s * a as f64 * b;
        }
        if p.sign {
            -acc
        } else {
            acc
        }
    }

    /// `Some(±1)` when `|<P>|` is within `tol` of one.
    pub fn eigenvalue(&self, p: &PauliOp, tol: f64) -> Option<i8> {
        let e = self.expectation(p);
        if (e - 1.0).abs() < tol {
            Some(1)
        } else if (e + 1.0).abs() < tol {
            Some(-1)
        } else {
            None
        }
    }
}

/// Run the pattern on a dense cluster state with `Z` errors at `errors`:
/// all `Z` measurements first, then the `X` measurements, both in site
/// order.
pub fn run_pattern_dense(
    spec: &LatticeSpec,
    errors: &[Site],
    seed: u64,
) -> Result<(MeasurementRecord, DenseState)> {
    if spec.is_periodic() {
        return Err(Error::InvalidArgument("planar lattice required".into()));
    }
    let n = spec.num_sites();
    let edges = cluster_edges(spec);
    let mut state = DenseState::graph_state(n, &edges)?;
    for &u in errors {
        state.apply_z(spec.site_index(u)?);
    }
    let bases: Vec<Basis> = spec
        .sites()
        .map(|s| classify_site(s, spec).map(|r| r.basis))
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcomes = vec![None; n];
    for q in (0..n).filter(|&q| bases[q] == Basis::MeasureZ) {
        outcomes[q] = Some(state.measure_z(q, &mut rng));
    }
    for q in (0..n).filter(|&q| bases[q] == Basis::MeasureX) {
        outcomes[q] = Some(state.measure_x(q, &mut rng));
    }
    let eig = |op: PauliOp| {
        state
            .eigenvalue(&op, 1e-3)
            .ok_or_else(|| Error::InvalidArgument("face operator is not a stabilizer".into()))
    };
    let lambda_p = plaquette_sites(spec)
        .into_iter()
        .map(|u| Ok((u, eig(plaquette_operator(spec, u)?)?)))
        .collect::<Result<_>>()?;
    let lambda_s = code_sites(spec)
        .into_iter()
        .map(|u| Ok((u, eig(site_operator(spec, u)?)?)))
        .collect::<Result<_>>()?;
    let record = MeasurementRecord {
        spec: *spec,
        seed,
        bases,
        outcomes,
        lambda_p,
        lambda_s,
    };
    Ok((record, state))
}
