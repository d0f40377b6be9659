//! Reduction of a syndrome to a weighted perfect-matching problem.

use super::blossom::max_weight_matching;
use super::paths::{boundary_distance, vertex_distance};
use super::Syndrome;
use crate::error::{Error, Result};
use crate::lattice::SectorGraph;

/// Complete graph over syndrome defects. In planar mode every defect also
/// owns a virtual boundary node; virtual nodes pair among themselves at
/// zero cost.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingProblem {
    /// Vertex ids of the defects, ascending.
    pub defects: Vec<usize>,
    /// `pair_weights[i][j]`: graph distance between defects `i` and `j`.
    pub pair_weights: Vec<Vec<u64>>,
    /// Distance from each defect to the nearest rough face (planar only).
    pub boundary_weights: Option<Vec<u64>>,
}

impl MatchingProblem {
    pub fn len(&self) -> usize {
        self.defects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defects.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Partner {
    Defect(usize),
    Boundary,
}

/// Matching result over defect indices. Pairs are listed once, with
/// `i < j` for defect pairs, sorted by `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    pub pairs: Vec<(usize, Partner)>,
    pub cost: u64,
}

pub fn build_matching_problem(s: &Syndrome, graph: &SectorGraph) -> Result<MatchingProblem> {
    let defects = s.defects();
    let periodic = graph.is_periodic();
    if periodic && defects.len() % 2 == 1 {
        return Err(Error::OddDefects(defects.len()));
    }
    let pair_weights = defects
        .iter()
        .map(|&a| {
            defects
                .iter()
                .map(|&b| vertex_distance(graph, a, b) as u64)
                .collect()
        })
        .collect();
    let boundary_weights = (!periodic).then(|| {
        defects
            .iter()
            .map(|&v| boundary_distance(graph, v).expect("planar graph") as u64)
            .collect()
    });
    Ok(MatchingProblem {
        defects,
        pair_weights,
        boundary_weights,
    })
}

/// Minimum-weight perfect matching via the blossom algorithm.
pub fn mwpm(p: &MatchingProblem) -> Pairing {
    let k = p.len();
    if k == 0 {
        return Pairing {
            pairs: Vec::new(),
            cost: 0,
        };
    }
    let bw = p.boundary_weights.as_deref();
    let max_w = p
        .pair_weights
        .iter()
        .flatten()
        .chain(bw.into_iter().flatten())
        .copied()
        .max()
        .unwrap_or(0);
    let big = max_w as i64 + 1;

    let mut edges = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let w = p.pair_weights[i][j];
            // pairing through the boundary is never worse here
            if let Some(b) = bw {
                if w > b[i] + b[j] {
                    continue;
                }
            }
            edges.push((i, j, big - w as i64));
        }
    }
    let n = if let Some(b) = bw {
        for i in 0..k {
            edges.push((i, k + i, big - b[i] as i64));
        }
        for i in 0..k {
            for j in i + 1..k {
                edges.push((k + i, k + j, big));
            }
        }
        2 * k
    } else {
        k
    };

    let mate = max_weight_matching(n, &edges, true);
    let mut pairs = Vec::with_capacity(k);
    let mut cost = 0;
    for (i, m) in mate.iter().enumerate().take(k) {
        match m.expect("perfect matching") {
            j if j < k => {
                if i < j {
                    pairs.push((i, Partner::Defect(j)));
                    cost += p.pair_weights[i][j];
                }
            }
            j => {
                debug_assert_eq!(j, k + i);
                pairs.push((i, Partner::Boundary));
                cost += bw.expect("planar")[i];
            }
        }
    }
    Pairing { pairs, cost }
}
