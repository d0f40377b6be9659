use rand::Rng;

use super::pauli::PauliOp;

/// Stabilizer state on `n` qubits in destabilizer form: rows `0..n` are
/// destabilizers, rows `n..2n` the stabilizer generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    rows: Vec<PauliOp>,
}

/// Result of a projective Pauli measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Outcome {
    /// `true` for eigenvalue `-1`.
    pub minus: bool,
    /// Whether the outcome was random (the operator was not in the group).
    pub random: bool,
}

impl Outcome {
    pub fn value(&self) -> i8 {
        if self.minus {
            -1
        } else {
            1
        }
    }
}

impl Tableau {
    /// Graph state `∏ CZ |+>^n`, stabilized by `K_u = X_u ∏_{v ∈ nb(u)} Z_v`.
    pub fn graph_state(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut rows = Vec::with_capacity(2 * n);
        for q in 0..n {
            rows.push(PauliOp::single_z(n, q));
        }
        for q in 0..n {
            rows.push(PauliOp::single_x(n, q));
        }
        for &(a, b) in edges {
            assert_ne!(a, b, "self loop");
            rows[n + a].set_z(b, true);
            rows[n + b].set_z(a, true);
        }
        Tableau { n, rows }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn stabilizers(&self) -> &[PauliOp] {
        &self.rows[self.n..]
    }

    pub fn destabilizers(&self) -> &[PauliOp] {
        &self.rows[..self.n]
    }

    /// Apply the Pauli `Z_q` to the state.
    pub fn apply_z(&mut self, q: usize) {
        for row in &mut self.rows {
            row.conjugate_z(q);
        }
    }

    /// `Some(±1)` if `±p` stabilizes the state, `None` if its expectation
    /// vanishes. The state is left untouched.
    pub fn expectation(&self, p: &PauliOp) -> Option<i8> {
        if self.stabilizers().iter().any(|s| !s.commutes_with(p)) {
            return None;
        }
        let mut acc = PauliOp::identity(self.n);
        for i in 0..self.n {
            if !self.rows[i].commutes_with(p) {
                acc.mul_assign(&self.rows[self.n + i]);
            }
        }
        debug_assert!(acc.same_support(p));
        Some(if acc.sign == p.sign { 1 } else { -1 })
    }

    /// Measure the Hermitian Pauli `p`; random outcomes come from `rng`.
    pub fn measure<R: Rng + ?Sized>(&mut self, p: &PauliOp, rng: &mut R) -> Outcome {
        self.measure_with(p, |_| rng.random_bool(0.5))
    }

    /// Measure `p`, resolving a random outcome with `choose` (`true` picks
    /// eigenvalue `-1`).
    pub fn measure_with(&mut self, p: &PauliOp, choose: impl FnOnce(&PauliOp) -> bool) -> Outcome {
        let n = self.n;
        let Some(pivot) = (n..2 * n).find(|&r| !self.rows[r].commutes_with(p)) else {
            let v = self.expectation(p).expect("commutes with every generator");
            return Outcome {
                minus: v < 0,
                random: false,
            };
        };
        let pivot_row = self.rows[pivot].clone();
        for r in 0..2 * n {
            if r != pivot && r != pivot - n && !self.rows[r].commutes_with(p) {
                self.rows[r].mul_assign(&pivot_row);
            }
        }
        let minus = choose(p);
        self.rows[pivot - n] = pivot_row;
        let mut new = p.clone();
        new.sign ^= minus;
        self.rows[pivot] = new;
        Outcome {
            minus,
            random: true,
        }
    }

    /// Check the structural invariants: stabilizers commute pairwise,
    /// destabilizer `i` anticommutes exactly with stabilizer `i`, and
    /// destabilizers commute pairwise.
    pub fn is_consistent(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let s_ok = self.rows[n + i].commutes_with(&self.rows[n + j]);
                let d_ok = self.rows[i].commutes_with(&self.rows[j]);
                let ds = self.rows[i].commutes_with(&self.rows[n + j]) == (i != j);
                if !(s_ok && d_ok && ds) {
                    return false;
                }
            }
        }
        true
    }
}
