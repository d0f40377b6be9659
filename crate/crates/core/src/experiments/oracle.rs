//! Cross-check of the combinatorial decoder model against the stabilizer
//! simulation of the measurement pattern.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decoder::{decode, extract_syndrome, plane_parities, ErrorChain};
use crate::error::Result;
use crate::lattice::{LatticeSpec, Sector, SectorGraph, Site};
use crate::stabilizer::{
    apply_z_error, check_constraints, init_cluster_state, lambda_p_formula, lambda_s_formula,
    lambda_xx_formula, lambda_zz_formula, logical_xx, logical_zz, run_pattern, PatternRun,
};

/// Checks run and failures seen, per identity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub checked: u64,
    pub failed: u64,
}

impl Tally {
    fn record(&mut self, ok: bool) {
        self.checked += 1;
        self.failed += (!ok) as u64;
    }

    pub fn passed(&self) -> bool {
        self.checked > 0 && self.failed == 0
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    /// Error-free branches satisfy every constraint.
    pub error_free_constraints: Tally,
    /// A single injected error flips exactly its predicted bits.
    pub single_error_bits: Tally,
    /// Measured face and logical eigenvalues equal their formulas.
    pub lambda_formulas: Tally,
    /// Oracle syndrome equals the combinatorial syndrome.
    pub syndrome_agreement: Tally,
    /// Logical sign flips track slice parity, before and after decoding.
    pub logical_flips: Tally,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        [
            self.error_free_constraints,
            self.single_error_bits,
            self.lambda_formulas,
            self.syndrome_agreement,
            self.logical_flips,
        ]
        .iter()
        .all(Tally::passed)
    }
}

/// Errors sorted into the two sectors and the Sy5 face sites.
struct SplitErrors {
    to: ErrorChain,
    te: ErrorChain,
    face: Vec<Site>,
}

fn split(errors: &[Site], to: &SectorGraph, te: &SectorGraph) -> SplitErrors {
    let mut out = SplitErrors {
        to: ErrorChain::empty(to.num_edges()),
        te: ErrorChain::empty(te.num_edges()),
        face: Vec::new(),
    };
    for &u in errors {
        if let Some(e) = to.edge_of(u) {
            out.to.toggle(e);
        } else if let Some(e) = te.edge_of(u) {
            if te.edge(e).excluded {
                out.face.push(u);
            } else {
                out.te.toggle(e);
            }
        }
    }
    out
}

fn noisy_run(spec: &LatticeSpec, errors: &[Site], seed: u64) -> Result<PatternRun> {
    let mut t = init_cluster_state(spec)?;
    for &u in errors {
        apply_z_error(&mut t, spec, u)?;
    }
    run_pattern(t, spec, seed)
}

/// Whether the oracle syndromes of `run` match the chains in `parts`.
fn syndromes_agree(
    run: &PatternRun,
    parts: &SplitErrors,
    to: &SectorGraph,
    te: &SectorGraph,
) -> bool {
    let report = check_constraints(&run.record);
    report.to == extract_syndrome(&parts.to, to)
        && report.te == extract_syndrome(&parts.te, te)
        && report.sy5.iter().all(|(u, b)| *b == parts.face.contains(u))
}

/// Runs every identity on a planar `spec`: `branches` error-free seeds,
/// every single-site error, and `error_sets` random error sets.
pub fn oracle_verify(
    spec: &LatticeSpec,
    branches: u64,
    error_sets: u64,
    seed: u64,
) -> Result<OracleReport> {
    let to = SectorGraph::build(spec, Sector::To);
    let te = SectorGraph::build(spec, Sector::Te);
    let mut rep = OracleReport::default();

    for b in 0..branches {
        let run = noisy_run(spec, &[], seed.wrapping_add(b))?;
        let rec = &run.record;
        rep.error_free_constraints
            .record(check_constraints(rec).all_satisfied());
        for &(u, v) in &rec.lambda_p {
            rep.lambda_formulas.record(v == lambda_p_formula(rec, u));
        }
        for &(u, v) in &rec.lambda_s {
            rep.lambda_formulas.record(v == lambda_s_formula(rec, u));
        }
        for u2 in (0..spec.l() as i32).step_by(2) {
            let xx = run.eigenvalue(&logical_xx(spec, u2)?);
            rep.lambda_formulas
                .record(xx == Some(lambda_xx_formula(rec, u2)));
        }
        for u1 in (1..=spec.l() as i32).step_by(2) {
            let zz = run.eigenvalue(&logical_zz(spec, u1)?);
            rep.lambda_formulas
                .record(zz == Some(lambda_zz_formula(rec, u1)));
        }
    }

    for (k, u) in spec.sites().enumerate() {
        let parts = split(&[u], &to, &te);
        let run = noisy_run(spec, &[u], seed.wrapping_add(k as u64))?;
        rep.single_error_bits
            .record(syndromes_agree(&run, &parts, &to, &te));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..error_sets {
        let rate = rng.random_range(0.02..0.3);
        let errors: Vec<Site> = spec.sites().filter(|_| rng.random_bool(rate)).collect();
        let parts = split(&errors, &to, &te);
        let run = noisy_run(spec, &errors, seed.wrapping_add(k))?;
        rep.syndrome_agreement
            .record(syndromes_agree(&run, &parts, &to, &te));

        let rec = &run.record;
        let checks = [
            (
                &parts.to,
                &to,
                logical_xx(spec, 0)?,
                lambda_xx_formula(rec, 0),
            ),
            (
                &parts.te,
                &te,
                logical_zz(spec, 1)?,
                lambda_zz_formula(rec, 1),
            ),
        ];
        for (chain, graph, op, formula) in checks {
            let Some(value) = run.eigenvalue(&op) else {
                rep.logical_flips.record(false);
                continue;
            };
            let flip = plane_parities(chain, graph)[0];
            rep.logical_flips.record((value != formula) == flip);
            let out = decode(chain, graph)?;
            let c_flip = plane_parities(&out.correction.chain, graph)[0];
            let corrected = if c_flip { -formula } else { formula };
            rep.logical_flips
                .record((corrected != value) == out.residual_nontrivial);
        }
    }
    Ok(rep)
}
