use std::fmt;

/// Hermitian Pauli operator `(-1)^sign · ∏ P_q`, with `P_q` given by the
/// `(x, z)` bits of qubit `q` (`(1, 1)` is `Y`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOp {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    /// `true` for an overall `-1`.
    pub sign: bool,
}

fn words(n: usize) -> usize {
    n.div_ceil(64)
}

impl PauliOp {
    pub fn identity(n: usize) -> Self {
        PauliOp {
            n,
            x: vec![0; words(n)],
            z: vec![0; words(n)],
            sign: false,
        }
    }

    pub fn single_x(n: usize, q: usize) -> Self {
        let mut p = Self::identity(n);
        p.set_x(q, true);
        p
    }

    pub fn single_z(n: usize, q: usize) -> Self {
        let mut p = Self::identity(n);
        p.set_z(q, true);
        p
    }

    /// `⊗_{q ∈ xs} X_q ⊗_{q ∈ zs} Z_q` (sets must be disjoint).
    pub fn from_supports(n: usize, xs: &[usize], zs: &[usize]) -> Self {
        let mut p = Self::identity(n);
        for &q in xs {
            p.set_x(q, true);
        }
        for &q in zs {
            assert!(!p.x(q), "X and Z support overlap on qubit {q}");
            p.set_z(q, true);
        }
        p
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x(&self, q: usize) -> bool {
        self.x[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn z(&self, q: usize) -> bool {
        self.z[q / 64] >> (q % 64) & 1 == 1
    }

    pub fn set_x(&mut self, q: usize, v: bool) {
        let bit = 1u64 << (q % 64);
        if v {
            self.x[q / 64] |= bit;
        } else {
            self.x[q / 64] &= !bit;
        }
    }

    pub fn set_z(&mut self, q: usize, v: bool) {
        let bit = 1u64 << (q % 64);
        if v {
            self.z[q / 64] |= bit;
        } else {
            self.z[q / 64] &= !bit;
        }
    }

    pub fn x_support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.x(q)).collect()
    }

    pub fn z_support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.z(q)).collect()
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    pub fn commutes_with(&self, other: &PauliOp) -> bool {
        let mut parity = 0u32;
        for k in 0..self.x.len() {
            parity ^= ((self.x[k] & other.z[k]) ^ (self.z[k] & other.x[k])).count_ones() & 1;
        }
        parity == 0
    }

    /// Same operator up to sign.
    pub fn same_support(&self, other: &PauliOp) -> bool {
        self.x == other.x && self.z == other.z
    }

    /// Power of `i` picked up when forming `self · other` from the
    /// single-qubit products, mod 4.
    fn product_phase(&self, other: &PauliOp) -> u32 {
        let mut plus = 0u32;
        let mut minus = 0u32;
        for k in 0..self.x.len() {
            let (x1, z1, x2, z2) = (self.x[k], self.z[k], other.x[k], other.z[k]);
            let (px1, py1, pz1) = (x1 & !z1, x1 & z1, !x1 & z1);
            let (px2, py2, pz2) = (x2 & !z2, x2 & z2, !x2 & z2);
            // XY = iZ, YZ = iX, ZX = iY and the reverses give -i
            plus += ((px1 & py2) | (py1 & pz2) | (pz1 & px2)).count_ones();
            minus += ((px1 & pz2) | (py1 & px2) | (pz1 & py2)).count_ones();
        }
        (plus + 3 * minus) % 4
    }

    /// `self ← self · other`. The operators must commute so that the
    /// product stays Hermitian.
    pub fn mul_assign(&mut self, other: &PauliOp) {
        debug_assert!(self.commutes_with(other), "product of anticommuting Paulis");
        let phase = self.product_phase(other);
        debug_assert!(phase % 2 == 0);
        self.sign ^= other.sign ^ (phase == 2);
        for k in 0..self.x.len() {
            self.x[k] ^= other.x[k];
            self.z[k] ^= other.z[k];
        }
    }

    pub fn mul(&self, other: &PauliOp) -> PauliOp {
        let mut out = self.clone();
        out.mul_assign(other);
        out
    }

    /// Conjugation by `Z_q`: flips the sign iff the operator has `X` or `Y`
    /// on `q`.
    pub fn conjugate_z(&mut self, q: usize) {
        if self.x(q) {
            self.sign = !self.sign;
        }
    }

    pub fn negated(mut self) -> Self {
        self.sign = !self.sign;
        self
    }
}

impl fmt::Debug for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.sign { "-" } else { "+" })?;
        for q in 0..self.n {
            f.write_str(match (self.x(q), self.z(q)) {
                (false, false) => "I",
                (true, false) => "X",
                (true, true) => "Y",
                (false, true) => "Z",
            })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y(n: usize, q: usize) -> PauliOp {
        let mut p = PauliOp::identity(n);
        p.set_x(q, true);
        p.set_z(q, true);
        p
    }

    #[test]
    fn commutation() {
        let x = PauliOp::single_x(2, 0);
        let z = PauliOp::single_z(2, 0);
        let z1 = PauliOp::single_z(2, 1);
        assert!(!x.commutes_with(&z));
        assert!(x.commutes_with(&z1));
        let xx = PauliOp::from_supports(2, &[0, 1], &[]);
        let zz = PauliOp::from_supports(2, &[], &[0, 1]);
        assert!(xx.commutes_with(&zz));
    }

    #[test]
    fn product_signs() {
        // (X⊗X)(Z⊗Z) = (XZ)⊗(XZ) = (-iY)(-iY) = -Y⊗Y
        let xx = PauliOp::from_supports(2, &[0, 1], &[]);
        let zz = PauliOp::from_supports(2, &[], &[0, 1]);
        let p = xx.mul(&zz);
        let mut yy = y(2, 0);
        yy.mul_assign(&y(2, 1));
        assert!(p.same_support(&yy));
        assert!(p.sign);
        assert!(!yy.sign);
        // (X⊗Z)(Z⊗X) = (-iY)(iY) = +Y⊗Y
        let a = PauliOp::from_supports(2, &[0], &[1]);
        let b = PauliOp::from_supports(2, &[1], &[0]);
        assert!(!a.mul(&b).sign);
        // squares are identity
        let sq = p.mul(&p);
        assert!(sq.is_identity() && !sq.sign);
    }

    #[test]
    fn words_beyond_64() {
        let mut p = PauliOp::single_x(130, 129);
        p.set_z(70, true);
        assert_eq!(p.x_support(), vec![129]);
        assert_eq!(p.z_support(), vec![70]);
        assert_eq!(p.weight(), 2);
        assert!(!p.commutes_with(&PauliOp::single_z(130, 129)));
    }
}
