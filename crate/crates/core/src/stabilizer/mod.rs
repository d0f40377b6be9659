//! Exact simulation of the measurement pattern on small clusters.
//!
//! A stabilizer tableau carries the cluster state through `Z` errors and the
//! `X`/`Z` measurements; the reduced state on the faces is then queried for
//! the code stabilizers and the logical Bell correlators. A deliberately
//! naive dense state vector (`dense`) checks the tableau on `l = d = 3`.

pub mod dense;
mod pattern;
mod pauli;
mod tableau;

pub use pattern::{
    apply_z_error, check_constraints, cluster_edges, cluster_generator, code_sites, default_order,
    init_cluster_state, lambda_p_formula, lambda_s_formula, lambda_xx_formula, lambda_zz_formula,
    logical_xx, logical_zz, plaquette_operator, plaquette_sites, replay_pattern, run_pattern,
    run_pattern_ordered, site_operator, ConstraintReport, MeasurementRecord, PatternRun,
    MAX_ORACLE_QUBITS,
};
pub use pauli::PauliOp;
pub use tableau::{Outcome, Tableau};
