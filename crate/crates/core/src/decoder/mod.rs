//! Syndrome decoding on a sector graph.
//!
//! An error chain `E` shows a syndrome only on its boundary `∂E`. The
//! decoder pairs up syndrome defects (or sends them to a rough face) with
//! minimum-weight perfect matching, applies the shortest connecting paths as
//! a correction `C`, and reads the logical outcome off the parity with which
//! the cycle `E + C` crosses the sector's test plane(s).

pub mod blossom;
mod matching;
mod paths;

use bitvec::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{Endpoint, SectorGraph};

pub use matching::{build_matching_problem, mwpm, MatchingProblem, Pairing, Partner};
pub use paths::{boundary_distance, boundary_path, shortest_path, vertex_distance};

/// Set of edges carrying an (effective) `Z` error.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ErrorChain {
    bits: BitVec,
}

impl ErrorChain {
    pub fn empty(num_edges: usize) -> Self {
        ErrorChain {
            bits: bitvec![0; num_edges],
        }
    }

    pub fn from_bits(bits: BitVec) -> Self {
        ErrorChain { bits }
    }

    pub fn from_edges(num_edges: usize, edges: impl IntoIterator<Item = usize>) -> Self {
        let mut chain = Self::empty(num_edges);
        for e in edges {
            chain.toggle(e);
        }
        chain
    }

    pub fn bits(&self) -> &BitSlice {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.not_any()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.bits[e]
    }

    pub fn toggle(&mut self, e: usize) {
        let v = self.bits[e];
        self.bits.set(e, !v);
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter_ones()
    }

    /// Symmetric difference (sum mod 2).
    pub fn sum(&self, other: &ErrorChain) -> ErrorChain {
        let mut bits = self.bits.clone();
        bits ^= &other.bits;
        ErrorChain { bits }
    }
}

/// Violated parity checks, one bit per sector vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Syndrome {
    bits: BitVec,
}

impl Syndrome {
    pub fn empty(num_vertices: usize) -> Self {
        Syndrome {
            bits: bitvec![0; num_vertices],
        }
    }

    pub fn from_bits(bits: BitVec) -> Self {
        Syndrome { bits }
    }

    pub fn from_defects(num_vertices: usize, defects: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(num_vertices);
        for v in defects {
            s.flip(v);
        }
        s
    }

    pub fn bits(&self) -> &BitSlice {
        &self.bits
    }

    pub fn flip(&mut self, v: usize) {
        let b = self.bits[v];
        self.bits.set(v, !b);
    }

    pub fn is_set(&self, v: usize) -> bool {
        self.bits[v]
    }

    pub fn defects(&self) -> Vec<usize> {
        self.bits.iter_ones().collect()
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_trivial(&self) -> bool {
        self.bits.not_any()
    }
}

/// Correction chain produced by the decoder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correction {
    pub chain: ErrorChain,
    /// Defects (vertex ids) whose path ends on a rough face.
    pub boundary_terminations: Vec<usize>,
}

/// A matched pair of defects, as vertex ids.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatchedPair {
    Defects(usize, usize),
    Boundary(usize),
}

#[derive(Clone, Debug)]
pub struct DecodeOutcome {
    pub correction: Correction,
    /// Whether the residual cycle `E + C` flips the logical correlator.
    pub residual_nontrivial: bool,
    pub matched_pairs: Vec<MatchedPair>,
    /// Total matching weight (= correction length before mod-2 overlaps).
    pub matching_cost: u64,
}

impl DecodeOutcome {
    pub fn success(&self) -> bool {
        !self.residual_nontrivial
    }
}

/// `∂E`: each vertex bit is the parity of incident chain edges. Rough and
/// open ends contribute nothing.
pub fn extract_syndrome(chain: &ErrorChain, graph: &SectorGraph) -> Syndrome {
    let mut s = Syndrome::empty(graph.num_vertices());
    for e in chain.edges() {
        for end in graph.edge(e).ends {
            if let Endpoint::Vertex(v) = end {
                s.flip(v);
            }
        }
    }
    s
}

/// Crossing parity of `chain` with each of the graph's test planes.
pub fn plane_parities(chain: &ErrorChain, graph: &SectorGraph) -> Vec<bool> {
    graph
        .test_planes()
        .iter()
        .map(|plane| {
            chain
                .edges()
                .filter(|&e| plane.contains(graph.edge(e)))
                .count()
                % 2
                == 1
        })
        .collect()
}

/// Whether the cycle `residual` is homologically nontrivial: odd crossing
/// of the planar test slice, or an odd wrap in either periodic direction.
pub fn homology_class(residual: &ErrorChain, graph: &SectorGraph) -> Result<bool> {
    let boundary = extract_syndrome(residual, graph);
    if !boundary.is_trivial() {
        return Err(Error::NonzeroBoundary {
            defects: boundary.weight(),
        });
    }
    Ok(plane_parities(residual, graph).into_iter().any(|p| p))
}

/// Union (mod 2) of the shortest paths realizing each matched pair.
pub fn correction_from_pairing(
    pairing: &Pairing,
    problem: &MatchingProblem,
    graph: &SectorGraph,
) -> Correction {
    let mut chain = ErrorChain::empty(graph.num_edges());
    let mut boundary_terminations = Vec::new();
    for &(i, partner) in &pairing.pairs {
        let a = problem.defects[i];
        let path = match partner {
            Partner::Defect(j) => shortest_path(graph, a, problem.defects[j]),
            Partner::Boundary => {
                boundary_terminations.push(a);
                boundary_path(graph, a).expect("planar graph has rough faces")
            }
        };
        for e in path {
            chain.toggle(e);
        }
    }
    Correction {
        chain,
        boundary_terminations,
    }
}

/// Match and correct a syndrome.
pub fn decode_syndrome(
    syndrome: &Syndrome,
    graph: &SectorGraph,
) -> Result<(Correction, Pairing, MatchingProblem)> {
    let problem = build_matching_problem(syndrome, graph)?;
    let pairing = mwpm(&problem);
    let correction = correction_from_pairing(&pairing, &problem, graph);
    Ok((correction, pairing, problem))
}

/// Full decode: extract, match, correct, classify.
pub fn decode(chain: &ErrorChain, graph: &SectorGraph) -> Result<DecodeOutcome> {
    let syndrome = extract_syndrome(chain, graph);
    let (correction, pairing, problem) = decode_syndrome(&syndrome, graph)?;
    let residual = chain.sum(&correction.chain);
    let residual_nontrivial = homology_class(&residual, graph)?;
    let matched_pairs = pairing
        .pairs
        .iter()
        .map(|&(i, partner)| match partner {
            Partner::Defect(j) => MatchedPair::Defects(problem.defects[i], problem.defects[j]),
            Partner::Boundary => MatchedPair::Boundary(problem.defects[i]),
        })
        .collect();
    Ok(DecodeOutcome {
        correction,
        residual_nontrivial,
        matched_pairs,
        matching_cost: pairing.cost,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{LatticeSpec, Sector};

    fn graph(l: usize, d: usize, sector: Sector) -> SectorGraph {
        SectorGraph::build(&LatticeSpec::planar(l, d).unwrap(), sector)
    }

    fn interior_edge(g: &SectorGraph) -> usize {
        (0..g.num_edges())
            .find(|&e| {
                let edge = g.edge(e);
                !edge.excluded && edge.ends.iter().all(|x| x.vertex().is_some())
            })
            .unwrap()
    }

    #[test]
    fn syndrome_examples() {
        let g = graph(5, 5, Sector::To);
        assert!(extract_syndrome(&ErrorChain::empty(g.num_edges()), &g).is_trivial());
        let e = interior_edge(&g);
        let s = extract_syndrome(&ErrorChain::from_edges(g.num_edges(), [e]), &g);
        let mut ends: Vec<usize> = g.edge(e).ends.iter().filter_map(|x| x.vertex()).collect();
        ends.sort();
        assert_eq!(s.defects(), ends);
        // elementary plaquette around vertex 0's corner
        let v = g.vertex_of(crate::lattice::Site::new(3, 1, 3)).unwrap();
        let a = g.step(v, 0, true).unwrap();
        let b = g.step(v, 2, true).unwrap();
        let va = a.to.vertex().unwrap();
        let vb = b.to.vertex().unwrap();
        let c = g.step(va, 2, true).unwrap();
        let d = g.step(vb, 0, true).unwrap();
        assert_eq!(c.to, d.to);
        let chain = ErrorChain::from_edges(g.num_edges(), [a.edge, b.edge, c.edge, d.edge]);
        assert!(extract_syndrome(&chain, &g).is_trivial());
        assert!(!homology_class(&chain, &g).unwrap());
    }

    #[test]
    fn rough_to_rough_line_is_nontrivial() {
        let g = graph(5, 5, Sector::To);
        // the straight line at u1 = 3, u3 = 3 along u2
        let edges: Vec<usize> = g
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.axis == 1 && e.site.u1 == 3 && e.site.u3 == 3)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(edges.len(), 3);
        let chain = ErrorChain::from_edges(g.num_edges(), edges);
        assert!(extract_syndrome(&chain, &g).is_trivial());
        assert!(homology_class(&chain, &g).unwrap());
        let out = decode(&chain, &g).unwrap();
        assert!(out.correction.chain.is_empty());
        assert!(out.residual_nontrivial);
    }

    #[test]
    fn homology_rejects_open_chain() {
        let g = graph(5, 5, Sector::Te);
        let e = interior_edge(&g);
        let chain = ErrorChain::from_edges(g.num_edges(), [e]);
        assert!(matches!(
            homology_class(&chain, &g),
            Err(Error::NonzeroBoundary { defects: 2 })
        ));
        assert!(!homology_class(&ErrorChain::empty(g.num_edges()), &g).unwrap());
    }

    #[test]
    fn single_errors_are_corrected() {
        for sector in Sector::ALL {
            let g = graph(7, 7, sector);
            for &e in g.eligible_edges() {
                let chain = ErrorChain::from_edges(g.num_edges(), [e]);
                let out = decode(&chain, &g).unwrap();
                assert!(out.success(), "{sector} edge {}", g.edge(e).site);
                assert_eq!(out.matching_cost, 1);
                assert_eq!(out.correction.chain, chain);
            }
        }
    }

    #[test]
    fn empty_chain_decodes_trivially() {
        let g = graph(3, 3, Sector::To);
        let out = decode(&ErrorChain::empty(g.num_edges()), &g).unwrap();
        assert!(out.success());
        assert!(out.matched_pairs.is_empty());
        assert_eq!(out.matching_cost, 0);
    }
}
