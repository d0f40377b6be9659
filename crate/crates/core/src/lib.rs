//! Noisy 3D cluster states: entanglement-length threshold simulation.
//!
//! Thermal noise on a 3D cluster state is equivalent to independent `Z`
//! flips. A fixed pattern of local `X`/`Z` measurements turns the cluster
//! into a pair of planar-code qubits on opposite faces, and the measurement
//! record supplies syndrome bits on two interleaved sublattices (`T_o`,
//! `T_e`). Decoding both sectors with minimum-weight perfect matching gives
//! the fidelity of the mediated encoded Bell pair.
//!
//! Module map:
//!
//! * [`lattice`]: the cluster lattice, site classification and the two
//!   decoding sector graphs.
//! * [`stabilizer`]: exact stabilizer-tableau (and dense state-vector)
//!   simulation of the measurement pattern on small lattices.
//! * [`noise`]: temperature / error-rate conversions and chain samplers.
//! * [`decoder`]: syndrome extraction, MWPM, correction, homology.
//! * [`experiments`]: Monte Carlo harness, threshold scans, fidelity fits.
//! * [`bounds`]: partial-transpose separability and the valence-bond
//!   construction behind the upper temperature bound.

pub mod bounds;
pub mod decoder;
pub mod error;
pub mod experiments;
pub mod lattice;
pub mod noise;
pub mod stabilizer;

pub use error::{Error, Result};
