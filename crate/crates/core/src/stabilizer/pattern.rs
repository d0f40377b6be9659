//! The fixed measurement pattern on a planar cluster, its outcome record,
//! and the parity constraints the record must satisfy.
//!
//! Sign convention: outcomes and eigenvalues are `±1` as `i8`; sites outside
//! the cluster (or unmeasured) read as `+1`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::pauli::PauliOp;
use super::tableau::Tableau;
use crate::decoder::Syndrome;
use crate::error::{Error, Result};
use crate::lattice::{classify_site, Basis, LatticeSpec, Role, Site};

/// Largest lattice `init_cluster_state` accepts.
pub const MAX_ORACLE_QUBITS: usize = 1024;

/// Cluster state on `C` with every `K_u = +1`.
pub fn init_cluster_state(spec: &LatticeSpec) -> Result<Tableau> {
    let n = spec.num_sites();
    if n > MAX_ORACLE_QUBITS {
        return Err(Error::TooLarge {
            qubits: n,
            limit: MAX_ORACLE_QUBITS,
        });
    }
    Ok(Tableau::graph_state(n, &cluster_edges(spec)))
}

/// Cluster bonds as index pairs `(a, b)`, `a < b`.
pub fn cluster_edges(spec: &LatticeSpec) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for (a, site) in spec.sites().enumerate() {
        for nb in spec.neighbors(site) {
            let b = spec.site_index(nb).expect("neighbour in range");
            if a < b {
                edges.push((a, b));
            }
        }
    }
    edges
}

/// Apply `Z_u` to the state.
pub fn apply_z_error(t: &mut Tableau, spec: &LatticeSpec, u: Site) -> Result<()> {
    let q = spec.site_index(u)?;
    t.apply_z(q);
    Ok(())
}

/// `K_u = X_u ∏_{v ∈ nb(u)} Z_v`.
pub fn cluster_generator(spec: &LatticeSpec, u: Site) -> Result<PauliOp> {
    let q = spec.site_index(u)?;
    let zs: Vec<usize> = spec
        .neighbors(u)
        .into_iter()
        .map(|v| spec.site_index(v).expect("in range"))
        .collect();
    Ok(PauliOp::from_supports(spec.num_sites(), &[q], &zs))
}

fn face_layer(spec: &LatticeSpec, u: Site) -> Result<()> {
    if spec.is_periodic() {
        return Err(Error::InvalidArgument(
            "face operators need a planar lattice".into(),
        ));
    }
    spec.site_index(u)?;
    if u.u3 != 1 && u.u3 != spec.d() as i32 {
        return Err(Error::InvalidArgument(format!("{u} is not on a face")));
    }
    Ok(())
}

/// The `u3` layer next to the face containing `u` (2 or `d - 1`).
fn inner_layer(spec: &LatticeSpec, u: Site) -> i32 {
    if u.u3 == 1 {
        2
    } else {
        spec.d() as i32 - 1
    }
}

fn face_neighbours(spec: &LatticeSpec, u: Site) -> Vec<usize> {
    spec.neighbors(u)
        .into_iter()
        .filter(|v| v.u3 == u.u3)
        .map(|v| spec.site_index(v).expect("in range"))
        .collect()
}

/// Plaquette operator `Z_P,u = ⊗_{v ∈ nb(u) ∩ face} Z_v`, `u = (e,e,1|d)`.
pub fn plaquette_operator(spec: &LatticeSpec, u: Site) -> Result<PauliOp> {
    face_layer(spec, u)?;
    if u.u1 % 2 != 0 || u.u2 % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "{u} is not a plaquette site"
        )));
    }
    Ok(PauliOp::from_supports(
        spec.num_sites(),
        &[],
        &face_neighbours(spec, u),
    ))
}

/// Site operator `X_S,u = ⊗_{v ∈ nb(u) ∩ face} X_v`, `u = (o,o,1|d)`.
pub fn site_operator(spec: &LatticeSpec, u: Site) -> Result<PauliOp> {
    face_layer(spec, u)?;
    if u.u1 % 2 != 1 || u.u2 % 2 != 1 {
        return Err(Error::InvalidArgument(format!("{u} is not a code site")));
    }
    Ok(PauliOp::from_supports(
        spec.num_sites(),
        &face_neighbours(spec, u),
        &[],
    ))
}

/// `X̄_L X̄_R`: `X` on `(o, u2, 1)` and `(o, u2, d)`, `u2` even.
pub fn logical_xx(spec: &LatticeSpec, u2: i32) -> Result<PauliOp> {
    if u2.rem_euclid(2) != 0 || !(0..spec.l() as i32).contains(&u2) {
        return Err(Error::SliceParity {
            sector: "To",
            index: u2,
        });
    }
    let d = spec.d() as i32;
    let xs: Vec<usize> = (1..=spec.l() as i32)
        .step_by(2)
        .flat_map(|u1| [Site::new(u1, u2, 1), Site::new(u1, u2, d)])
        .map(|s| spec.site_index(s).expect("in range"))
        .collect();
    Ok(PauliOp::from_supports(spec.num_sites(), &xs, &[]))
}

/// `Z̄_L Z̄_R`: `Z` on `(u1, e, 1)` and `(u1, e, d)`, `u1` odd.
pub fn logical_zz(spec: &LatticeSpec, u1: i32) -> Result<PauliOp> {
    if u1.rem_euclid(2) != 1 || !(1..=spec.l() as i32).contains(&u1) {
        return Err(Error::SliceParity {
            sector: "Te",
            index: u1,
        });
    }
    let d = spec.d() as i32;
    let zs: Vec<usize> = (0..spec.l() as i32)
        .step_by(2)
        .flat_map(|u2| [Site::new(u1, u2, 1), Site::new(u1, u2, d)])
        .map(|s| spec.site_index(s).expect("in range"))
        .collect();
    Ok(PauliOp::from_supports(spec.num_sites(), &[], &zs))
}

/// Face plaquette sites `(e,e,1)` and `(e,e,d)`.
pub fn plaquette_sites(spec: &LatticeSpec) -> Vec<Site> {
    face_sites(spec, 0)
}

/// Face code sites `(o,o,1)` and `(o,o,d)`.
pub fn code_sites(spec: &LatticeSpec) -> Vec<Site> {
    face_sites(spec, 1)
}

fn face_sites(spec: &LatticeSpec, parity: i32) -> Vec<Site> {
    let d = spec.d() as i32;
    spec.sites()
        .filter(|s| (s.u3 == 1 || s.u3 == d) && s.u1 % 2 == parity && s.u2 % 2 == parity)
        .collect()
}

/// Outcomes of one run of the pattern, plus the measured face eigenvalues.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub spec: LatticeSpec,
    /// Seed of the generator that resolved random outcomes.
    pub seed: u64,
    pub bases: Vec<Basis>,
    /// Per site index; `None` for unmeasured qubits.
    pub outcomes: Vec<Option<i8>>,
    /// Eigenvalue of `Z_P,u` on the reduced state, per plaquette site.
    pub lambda_p: Vec<(Site, i8)>,
    /// Eigenvalue of `X_S,u` on the reduced state, per code site.
    pub lambda_s: Vec<(Site, i8)>,
}

impl MeasurementRecord {
    pub fn outcome(&self, u: Site) -> Option<i8> {
        let i = self.spec.site_index(u).ok()?;
        self.outcomes[i]
    }

    /// `x_u` / `z_u`, reading `+1` outside `C`.
    pub fn value(&self, u: Site) -> i8 {
        self.outcome(u).unwrap_or(1)
    }

    pub fn measured_lambda_p(&self, u: Site) -> Option<i8> {
        self.lambda_p.iter().find(|(s, _)| *s == u).map(|&(_, v)| v)
    }

    pub fn measured_lambda_s(&self, u: Site) -> Option<i8> {
        self.lambda_s.iter().find(|(s, _)| *s == u).map(|&(_, v)| v)
    }

    fn product(&self, sites: impl IntoIterator<Item = Site>) -> i8 {
        sites.into_iter().map(|s| self.value(s)).product()
    }
}

/// Measured state after the pattern.
#[derive(Clone, Debug)]
pub struct PatternRun {
    pub record: MeasurementRecord,
    pub state: Tableau,
}

impl PatternRun {
    /// Eigenvalue of `p` on the post-measurement state, if it has one.
    pub fn eigenvalue(&self, p: &PauliOp) -> Option<i8> {
        self.state.expectation(p)
    }
}

/// Measured sites in index order.
pub fn default_order(spec: &LatticeSpec) -> Vec<usize> {
    spec.sites()
        .enumerate()
        .filter(|(_, s)| classify_site(*s, spec).expect("in range").basis != Basis::Unmeasured)
        .map(|(i, _)| i)
        .collect()
}

/// Run the pattern in site-index order.
pub fn run_pattern(t: Tableau, spec: &LatticeSpec, seed: u64) -> Result<PatternRun> {
    run_pattern_ordered(t, spec, seed, &default_order(spec))
}

/// Run the pattern measuring sites in `order` (a permutation of the
/// measured sites).
pub fn run_pattern_ordered(
    t: Tableau,
    spec: &LatticeSpec,
    seed: u64,
    order: &[usize],
) -> Result<PatternRun> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    run_with(t, spec, seed, order, |_| {
        rand::Rng::random_bool(&mut rng, 0.5)
    })
}

/// Re-run the pattern in `order`, steering every random outcome to the one
/// stored in `branch`.
pub fn replay_pattern(
    t: Tableau,
    spec: &LatticeSpec,
    order: &[usize],
    branch: &MeasurementRecord,
) -> Result<PatternRun> {
    run_with(t, spec, branch.seed, order, |q| {
        branch.outcomes[q].expect("measured in branch") < 0
    })
}

fn run_with(
    mut t: Tableau,
    spec: &LatticeSpec,
    seed: u64,
    order: &[usize],
    mut choose: impl FnMut(usize) -> bool,
) -> Result<PatternRun> {
    if spec.is_periodic() {
        return Err(Error::InvalidArgument(
            "the measurement pattern needs a planar lattice".into(),
        ));
    }
    let n = spec.num_sites();
    if t.num_qubits() != n {
        return Err(Error::InvalidArgument(format!(
            "tableau has {} qubits, lattice {n}",
            t.num_qubits()
        )));
    }
    let bases: Vec<Basis> = spec
        .sites()
        .map(|s| classify_site(s, spec).expect("in range").basis)
        .collect();
    let mut expected = default_order(spec);
    let mut given = order.to_vec();
    expected.sort_unstable();
    given.sort_unstable();
    if expected != given {
        return Err(Error::InvalidArgument(
            "order must list every measured site exactly once".into(),
        ));
    }

    let mut outcomes = vec![None; n];
    for &q in order {
        let op = match bases[q] {
            Basis::MeasureZ => PauliOp::single_z(n, q),
            Basis::MeasureX => PauliOp::single_x(n, q),
            Basis::Unmeasured => unreachable!(),
        };
        let out = t.measure_with(&op, |_| choose(q));
        outcomes[q] = Some(out.value());
    }

    let eig = |op: PauliOp, u: Site| {
        t.expectation(&op)
            .unwrap_or_else(|| panic!("face operator at {u} has no definite value"))
    };
    let lambda_p = plaquette_sites(spec)
        .into_iter()
        .map(|u| (u, eig(plaquette_operator(spec, u).expect("valid"), u)))
        .collect();
    let lambda_s = code_sites(spec)
        .into_iter()
        .map(|u| (u, eig(site_operator(spec, u).expect("valid"), u)))
        .collect();
    Ok(PatternRun {
        record: MeasurementRecord {
            spec: *spec,
            seed,
            bases,
            outcomes,
            lambda_p,
            lambda_s,
        },
        state: t,
    })
}

/// `z_u^{|nb(u)| mod 2}`: the leftover of `∏_{v ∈ nb(u)} K_v` on `u`
/// itself. Trivial in the bulk (even degree on inner `T_o`/`T_e` vertices,
/// odd degree on the faces as written); it only changes where the lattice
/// boundary truncates `nb(u)`.
fn self_factor(rec: &MeasurementRecord, u: Site) -> i8 {
    if rec.spec.neighbors(u).len() % 2 == 1 {
        rec.value(u)
    } else {
        1
    }
}

fn z_sublattice(rec: &MeasurementRecord, u: Site) -> i8 {
    rec.product(rec.spec.sublattice_neighbors(u))
}

/// `λ_P,u = x_u z_(u1,u2,2)` (`z_(u1,u2,d-1)` on the `R` face).
pub fn lambda_p_formula(rec: &MeasurementRecord, u: Site) -> i8 {
    let inner = u.with_coord(2, inner_layer(&rec.spec, u));
    rec.value(u) * rec.value(inner)
}

/// `λ_S,u = x_(u1,u2,2) z_u ∏_{v ∈ nb_o(u)} z_v`, with `z_u` replaced by
/// its boundary-corrected power.
pub fn lambda_s_formula(rec: &MeasurementRecord, u: Site) -> i8 {
    let inner = u.with_coord(2, inner_layer(&rec.spec, u));
    rec.value(inner) * self_factor(rec, u) * z_sublattice(rec, u)
}

/// `λ_XX = ∏_{T_XX^{u2±1}} z ∏_{T_XX^{u2} \ (L ∪ R)} x`.
pub fn lambda_xx_formula(rec: &MeasurementRecord, u2: i32) -> i8 {
    rec.product(
        rec.spec
            .sites()
            .filter(|s| s.u1 % 2 == 1 && s.u3 % 2 == 1 && (s.u2 - u2).abs() <= 1),
    )
}

/// `λ_ZZ = ∏_{T_ZZ^{u1±1}} z ∏_{T_ZZ^{u1}} x`.
pub fn lambda_zz_formula(rec: &MeasurementRecord, u1: i32) -> i8 {
    rec.product(
        rec.spec
            .sites()
            .filter(|s| s.u2 % 2 == 0 && s.u3 % 2 == 0 && (s.u1 - u1).abs() <= 1),
    )
}

/// Syndrome bits read off a record: one per sector vertex, plus the
/// face-edge bits of `T_e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintReport {
    /// `Sy1` (inner layers) and `Sy3` (faces), in `T_o` vertex order.
    pub to: Syndrome,
    /// `Sy2`, in `T_e` vertex order.
    pub te: Syndrome,
    /// `Sy5` per face edge `(e,e,1)` / `(e,e,d)`; `true` = violated.
    pub sy5: Vec<(Site, bool)>,
}

impl ConstraintReport {
    pub fn all_satisfied(&self) -> bool {
        self.to.is_trivial() && self.te.is_trivial() && self.sy5.iter().all(|(_, b)| !b)
    }
}

/// Evaluate Sy1, Sy2, Sy3 and Sy5. A violated Sy5 bit identifies the error
/// on its face edge exactly; it is corrected (its `x` flipped) before Sy2 is
/// evaluated, so such errors show up in `sy5` only.
pub fn check_constraints(rec: &MeasurementRecord) -> ConstraintReport {
    let spec = &rec.spec;
    let d = spec.d() as i32;

    let mut fixed = rec.clone();
    let sy5: Vec<(Site, bool)> = plaquette_sites(spec)
        .into_iter()
        .map(|u| {
            let lp = rec.measured_lambda_p(u).expect("plaquette recorded");
            let violated = lp * lambda_p_formula(rec, u) < 0;
            if violated {
                let i = spec.site_index(u).expect("in range");
                fixed.outcomes[i] = fixed.outcomes[i].map(|x| -x);
            }
            (u, violated)
        })
        .collect();

    let nb_x = |u: Site| fixed.product(spec.neighbors(u));
    let mut to_bits = Vec::new();
    let mut te_bits = Vec::new();
    for u in spec.sites() {
        match classify_site(u, spec).expect("in range").role {
            Role::VertexTo => {
                let value = if u.u3 == 1 || u.u3 == d {
                    let ls = rec.measured_lambda_s(u).expect("code site recorded");
                    ls * lambda_s_formula(rec, u)
                } else {
                    nb_x(u) * z_sublattice(rec, u) * self_factor(rec, u)
                };
                to_bits.push(value < 0);
            }
            Role::VertexTe => {
                let value = nb_x(u) * z_sublattice(rec, u) * self_factor(rec, u);
                te_bits.push(value < 0);
            }
            _ => {}
        }
    }
    ConstraintReport {
        to: Syndrome::from_bits(to_bits.into_iter().collect()),
        te: Syndrome::from_bits(te_bits.into_iter().collect()),
        sy5,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec33() -> LatticeSpec {
        LatticeSpec::planar(3, 3).unwrap()
    }

    #[test]
    fn generators_commute_and_hold() {
        let spec = spec33();
        let t = init_cluster_state(&spec).unwrap();
        assert_eq!(t.stabilizers().len(), 27);
        let ks: Vec<PauliOp> = spec
            .sites()
            .map(|u| cluster_generator(&spec, u).unwrap())
            .collect();
        for a in &ks {
            assert!(ks.iter().all(|b| a.commutes_with(b)));
            assert_eq!(t.expectation(a), Some(1));
        }
    }

    #[test]
    fn size_guard() {
        let big = LatticeSpec::planar(11, 11).unwrap();
        assert!(matches!(
            init_cluster_state(&big),
            Err(Error::TooLarge { qubits: 1331, .. })
        ));
    }

    #[test]
    fn z_error_flips_only_own_generator() {
        let spec = spec33();
        let mut t = init_cluster_state(&spec).unwrap();
        let u = Site::new(2, 1, 2);
        apply_z_error(&mut t, &spec, u).unwrap();
        for v in spec.sites() {
            let k = cluster_generator(&spec, v).unwrap();
            assert_eq!(t.expectation(&k), Some(if v == u { -1 } else { 1 }));
        }
        apply_z_error(&mut t, &spec, u).unwrap();
        assert_eq!(t, init_cluster_state(&spec).unwrap());
    }

    #[test]
    fn code_counts() {
        for l in [3, 5, 7] {
            let spec = LatticeSpec::planar(l, 3).unwrap();
            let faces = spec
                .sites()
                .filter(|&s| classify_site(s, &spec).unwrap().face == crate::lattice::Face::L)
                .count();
            let gens = plaquette_sites(&spec).len() / 2 + code_sites(&spec).len() / 2;
            assert_eq!(faces, (l * l + 1) / 2);
            assert_eq!(gens, (l * l - 1) / 2);
        }
    }

    #[test]
    fn error_free_pattern_is_consistent() {
        let spec = spec33();
        for seed in 0..10 {
            let run = run_pattern(init_cluster_state(&spec).unwrap(), &spec, seed).unwrap();
            let rec = &run.record;
            assert!(check_constraints(rec).all_satisfied());
            for &(u, v) in &rec.lambda_p {
                assert_eq!(v, lambda_p_formula(rec, u));
            }
            for &(u, v) in &rec.lambda_s {
                assert_eq!(v, lambda_s_formula(rec, u));
            }
            let xx = run.eigenvalue(&logical_xx(&spec, 0).unwrap());
            assert_eq!(xx, Some(lambda_xx_formula(rec, 0)));
            let zz = run.eigenvalue(&logical_zz(&spec, 1).unwrap());
            assert_eq!(zz, Some(lambda_zz_formula(rec, 1)));
        }
    }

    #[test]
    fn bad_order_rejected() {
        let spec = spec33();
        let t = init_cluster_state(&spec).unwrap();
        assert!(run_pattern_ordered(t, &spec, 0, &[0, 1]).is_err());
    }
}
