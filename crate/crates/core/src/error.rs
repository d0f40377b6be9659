use thiserror::Error;

use crate::lattice::Site;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice spec: {0}")]
    InvalidSpec(String),

    #[error("site {site} lies outside the lattice")]
    OutOfRange { site: Site },

    #[error("slice index {index} has the wrong parity for sector {sector}")]
    SliceParity { sector: &'static str, index: i32 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("lattice too large for exact simulation: {qubits} qubits (limit {limit})")]
    TooLarge { qubits: usize, limit: usize },

    #[error("chain has a nonzero boundary ({defects} defects)")]
    NonzeroBoundary { defects: usize },

    #[error("odd number of defects ({0}) on a closed lattice")]
    OddDefects(usize),

    #[error("operator is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("density operator has zero trace")]
    ZeroTrace,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
