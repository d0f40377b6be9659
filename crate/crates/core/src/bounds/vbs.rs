//! Valence-bond construction on small graphs.
//!
//! Every bond `e = (u, v)` carries two virtual qubits `u.v` and `v.u`; the
//! domain of `u` holds one virtual qubit per incident edge. Physical
//! operators use bit `k` of a basis index for vertex `k`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::bond_state;
use crate::error::{Error, Result};

/// Hard limit on `Σ d(u)`.
pub const MAX_VIRTUAL_QUBITS: usize = 14;
/// Largest virtual register expanded into a dense matrix.
const MAX_DENSE_VIRTUAL: usize = 10;
/// Largest physical register expanded into a dense matrix.
const MAX_DENSE_PHYSICAL: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl GraphSpec {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for &(a, b) in &edges {
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidSpec(format!(
                    "bad edge ({a}, {b}) on {n} vertices"
                )));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidSpec(format!("duplicate edge ({a}, {b})")));
            }
        }
        if 2 * edges.len() > MAX_VIRTUAL_QUBITS {
            return Err(Error::TooLarge {
                qubits: 2 * edges.len(),
                limit: MAX_VIRTUAL_QUBITS,
            });
        }
        Ok(GraphSpec { n, edges })
    }

    pub fn path(n: usize) -> Result<Self> {
        GraphSpec::new(n, (1..n).map(|k| (k - 1, k)).collect())
    }

    pub fn cycle(n: usize) -> Result<Self> {
        GraphSpec::new(n, (0..n).map(|k| (k, (k + 1) % n)).collect())
    }

    /// Open patch of the simple cubic lattice with `a × b × c` sites.
    pub fn grid(a: usize, b: usize, c: usize) -> Result<Self> {
        let idx = |x: usize, y: usize, z: usize| (z * b + y) * a + x;
        let mut edges = Vec::new();
        for z in 0..c {
            for y in 0..b {
                for x in 0..a {
                    if x + 1 < a {
                        edges.push((idx(x, y, z), idx(x + 1, y, z)));
                    }
                    if y + 1 < b {
                        edges.push((idx(x, y, z), idx(x, y + 1, z)));
                    }
                    if z + 1 < c {
                        edges.push((idx(x, y, z), idx(x, y, z + 1)));
                    }
                }
            }
        }
        GraphSpec::new(a * b * c, edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_virtual_qubits(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn degree(&self, u: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == u || b == u)
            .count()
    }

    pub fn neighbors(&self, u: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| match (a == u, b == u) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect()
    }

    /// Virtual qubits of the domain `u.*`. Edge `k = (a, b)` owns virtual
    /// qubits `2k` (`a.b`) and `2k + 1` (`b.a`).
    pub fn domain(&self, u: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (k, &(a, b)) in self.edges.iter().enumerate() {
            if a == u {
                out.push(2 * k);
            }
            if b == u {
                out.push(2 * k + 1);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightAssignment {
    pub omegas: Vec<f64>,
}

impl WeightAssignment {
    pub fn new(g: &GraphSpec, omegas: Vec<f64>) -> Result<Self> {
        if omegas.len() != g.edges.len() {
            return Err(Error::InvalidArgument(format!(
                "{} weights for {} edges",
                omegas.len(),
                g.edges.len()
            )));
        }
        if let Some(w) = omegas.iter().find(|w| !(0.0..=1.0).contains(*w)) {
            return Err(Error::InvalidArgument(format!(
                "bond weight {w} outside [0, 1]"
            )));
        }
        Ok(WeightAssignment { omegas })
    }

    pub fn uniform(g: &GraphSpec, omega: f64) -> Result<Self> {
        WeightAssignment::new(g, vec![omega; g.edges.len()])
    }

    /// `ω = tanh β` on edges crossing the cut, `1` elsewhere.
    pub fn cut(g: &GraphSpec, side: &[bool], beta: f64) -> Result<Self> {
        if side.len() != g.n {
            return Err(Error::InvalidArgument(
                "cut labels do not match vertices".into(),
            ));
        }
        let t = beta.tanh();
        let omegas = g
            .edges
            .iter()
            .map(|&(a, b)| if side[a] != side[b] { t } else { 1.0 })
            .collect();
        WeightAssignment::new(g, omegas)
    }

    /// `η_u = ∏_{v ∈ nb(u)} ω_(u,v)`.
    pub fn etas(&self, g: &GraphSpec) -> Vec<f64> {
        let mut eta = vec![1.0; g.n];
        for (&(a, b), &w) in g.edges.iter().zip(&self.omegas) {
            eta[a] *= w;
            eta[b] *= w;
        }
        eta
    }

    /// `η_u ≥ tanh β` at every vertex.
    pub fn satisfies_div(&self, g: &GraphSpec, beta: f64) -> bool {
        let t = beta.tanh();
        self.etas(g).iter().all(|&e| e >= t - 1e-15)
    }
}

/// `ρ_VBS`, stored as its bond factors; entries are evaluated lazily.
#[derive(Clone, Debug)]
pub struct VbsState {
    graph: GraphSpec,
    bonds: Vec<DMatrix<f64>>,
}

pub fn build_vbs_state(g: &GraphSpec, w: &WeightAssignment) -> Result<VbsState> {
    if w.omegas.len() != g.edges.len() {
        return Err(Error::InvalidArgument("weights do not match edges".into()));
    }
    let bonds = w
        .omegas
        .iter()
        .map(|&om| bond_state(om).map(|b| b.rho))
        .collect::<Result<_>>()?;
    Ok(VbsState {
        graph: g.clone(),
        bonds,
    })
}

impl VbsState {
    pub fn graph(&self) -> &GraphSpec {
        &self.graph
    }

    /// `⟨r|ρ_VBS|c⟩`, bit `j` of `r`, `c` being virtual qubit `j`.
    pub fn entry(&self, r: usize, c: usize) -> f64 {
        self.bonds
            .iter()
            .enumerate()
            .map(|(k, rho)| {
                let pick = |x: usize| ((x >> (2 * k)) & 1) << 1 | ((x >> (2 * k + 1)) & 1);
                rho[(pick(r), pick(c))]
            })
            .product()
    }

    pub fn to_dense(&self) -> Result<DMatrix<f64>> {
        let nv = self.graph.num_virtual_qubits();
        if nv > MAX_DENSE_VIRTUAL {
            return Err(Error::TooLarge {
                qubits: nv,
                limit: MAX_DENSE_VIRTUAL,
            });
        }
        let dim = 1usize << nv;
        Ok(DMatrix::from_fn(dim, dim, |r, c| self.entry(r, c)))
    }
}

fn physical_dim(g: &GraphSpec) -> Result<usize> {
    if g.n > MAX_DENSE_PHYSICAL {
        return Err(Error::TooLarge {
            qubits: g.n,
            limit: MAX_DENSE_PHYSICAL,
        });
    }
    Ok(1 << g.n)
}

/// `W(ρ_VBS) = (⊗_u W_u)† ρ_VBS (⊗_u W_u)` without renormalization. `W_u`
/// copies the physical bit of `u` onto its whole domain, so a physical
/// entry reads the bond factors at the copied bits.
pub fn apply_w_unnormalized(vbs: &VbsState) -> Result<DMatrix<f64>> {
    let g = &vbs.graph;
    let dim = physical_dim(g)?;
    Ok(DMatrix::from_fn(dim, dim, |r, c| {
        vbs.bonds
            .iter()
            .zip(&g.edges)
            .map(|(rho, &(a, b))| {
                let pick = |x: usize| ((x >> a) & 1) << 1 | ((x >> b) & 1);
                rho[(pick(r), pick(c))]
            })
            .product()
    }))
}

/// `W(ρ_VBS)` scaled to unit trace.
pub fn apply_w(vbs: &VbsState) -> Result<DMatrix<f64>> {
    let raw = apply_w_unnormalized(vbs)?;
    let tr = raw.trace();
    if tr.abs() < 1e-300 {
        return Err(Error::ZeroTrace);
    }
    Ok(raw / tr)
}

/// Dense `X^x Z^z` on `n` qubits, masks over vertex bits.
pub fn pauli_matrix(n: usize, xmask: usize, zmask: usize) -> DMatrix<f64> {
    let dim = 1usize << n;
    let mut m = DMatrix::zeros(dim, dim);
    for c in 0..dim {
        let s = if (c & zmask).count_ones() % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        m[(c ^ xmask, c)] = s;
    }
    m
}

/// `2^{-n} ∏_u (I + η_u K_u)` with `K_u = X_u ∏_{v∈nb(u)} Z_v`.
pub fn quasi_cluster_state(g: &GraphSpec, etas: &[f64]) -> Result<DMatrix<f64>> {
    let dim = physical_dim(g)?;
    if etas.len() != g.n {
        return Err(Error::InvalidArgument("one η per vertex required".into()));
    }
    let id = DMatrix::<f64>::identity(dim, dim);
    let mut rho = id.clone() / dim as f64;
    for (u, &eta) in etas.iter().enumerate() {
        let zmask = g.neighbors(u).iter().fold(0, |m, &v| m | 1 << v);
        let k = pauli_matrix(g.n, 1 << u, zmask);
        rho = rho * (&id + k * eta);
    }
    Ok(rho)
}

/// Thermal cluster state at inverse temperature `β` (with `Δ/2 = 1`).
pub fn thermal_cluster_state(g: &GraphSpec, beta: f64) -> Result<DMatrix<f64>> {
    quasi_cluster_state(g, &vec![beta.tanh(); g.n])
}

/// `q_u = (1 - tanh β / η_u) / 2`; requires `η_u ≥ tanh β`.
pub fn flattening_probabilities(etas: &[f64], beta: f64) -> Result<Vec<f64>> {
    let t = beta.tanh();
    etas.iter()
        .map(|&eta| {
            if eta + 1e-15 < t {
                Err(Error::InvalidArgument(format!(
                    "η = {eta} below tanh β = {t}"
                )))
            } else if eta == 0.0 {
                Ok(0.0)
            } else {
                Ok(((1.0 - t / eta) / 2.0).max(0.0))
            }
        })
        .collect()
}

/// Z-flip channels with probabilities `q`, applied entrywise: an entry
/// whose row and column differ at `u` picks up `1 - 2 q_u`.
pub fn flatten(rho: &DMatrix<f64>, q: &[f64]) -> DMatrix<f64> {
    let mut out = rho.clone();
    for r in 0..rho.nrows() {
        for c in 0..rho.ncols() {
            let diff = r ^ c;
            for (u, &qu) in q.iter().enumerate() {
                if diff >> u & 1 == 1 {
                    out[(r, c)] *= 1.0 - 2.0 * qu;
                }
            }
        }
    }
    out
}

/// `(1 - q) ρ + q Z_u ρ Z_u` by matrix products.
pub fn dense_z_channel(rho: &DMatrix<f64>, n: usize, u: usize, q: f64) -> DMatrix<f64> {
    let z = pauli_matrix(n, 0, 1 << u);
    rho * (1.0 - q) + &z * rho * &z * q
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VbsEquivalenceReport {
    pub beta: f64,
    pub etas: Vec<f64>,
    /// Local inverse temperatures, `tanh β_u = η_u`.
    pub local_betas: Vec<f64>,
    pub flip_probabilities: Vec<f64>,
    pub raw_trace: f64,
    /// Max-norm distance of `W(ρ_VBS)` from the quasi-cluster state.
    pub quasi_deviation: f64,
    /// Max-norm distance of the flattened state from the thermal state at `β`.
    pub flattened_deviation: f64,
    pub min_eigenvalue: f64,
}

impl VbsEquivalenceReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.quasi_deviation <= tol
            && self.flattened_deviation <= tol
            && self.min_eigenvalue >= -tol
            && self.local_betas.iter().all(|&b| b >= self.beta - tol)
    }
}

/// Maps `ρ_VBS` to the physical graph and flattens it to uniform `β`.
/// The assignment must satisfy `η_u ≥ tanh β` everywhere.
pub fn verify_vbs_equivalence(
    g: &GraphSpec,
    w: &WeightAssignment,
    beta: f64,
) -> Result<VbsEquivalenceReport> {
    if !w.satisfies_div(g, beta) {
        return Err(Error::InvalidArgument(
            "weights violate η_u ≥ tanh β".into(),
        ));
    }
    let vbs = build_vbs_state(g, w)?;
    let raw = apply_w_unnormalized(&vbs)?;
    let raw_trace = raw.trace();
    let rho = apply_w(&vbs)?;
    let etas = w.etas(g);
    let quasi = quasi_cluster_state(g, &etas)?;
    let q = flattening_probabilities(&etas, beta)?;
    let flat = flatten(&rho, &q);
    let thermal = thermal_cluster_state(g, beta)?;
    let min_eigenvalue = nalgebra::SymmetricEigen::new(rho.clone()).eigenvalues.min();
    Ok(VbsEquivalenceReport {
        beta,
        local_betas: etas
            .iter()
            .map(|&e| if e >= 1.0 { f64::INFINITY } else { e.atanh() })
            .collect(),
        etas,
        flip_probabilities: q,
        raw_trace,
        quasi_deviation: (&rho - &quasi).amax(),
        flattened_deviation: (&flat - &thermal).amax(),
        min_eigenvalue,
    })
}
