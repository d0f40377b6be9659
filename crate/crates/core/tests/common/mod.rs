//! Brute-force decoding oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use noisy_cluster::decoder::{decode, extract_syndrome, plane_parities, ErrorChain};
use noisy_cluster::lattice::{Endpoint, SectorGraph};

pub const INF: u64 = u64::MAX / 4;

/// Shortest distances from `a` to every (vertex, crossing mask) and to the
/// rough boundary per mask, by BFS on the graph lifted by test-plane
/// crossings.
pub struct Lifted {
    pub to_vertex: Vec<Vec<u64>>,
    pub to_boundary: Vec<u64>,
}

fn crossing_mask(graph: &SectorGraph, e: usize) -> usize {
    graph
        .test_planes()
        .iter()
        .enumerate()
        .filter(|(_, p)| p.contains(graph.edge(e)))
        .fold(0, |m, (k, _)| m | 1 << k)
}

pub fn lifted_bfs(graph: &SectorGraph, a: usize) -> Lifted {
    let classes = 1 << graph.test_planes().len();
    let mut to_vertex = vec![vec![INF; classes]; graph.num_vertices()];
    let mut to_boundary = vec![INF; classes];
    let mut queue = VecDeque::new();
    to_vertex[a][0] = 0;
    queue.push_back((a, 0usize));
    while let Some((v, m)) = queue.pop_front() {
        let dist = to_vertex[v][m];
        for step in graph.steps(v) {
            let m2 = m ^ crossing_mask(graph, step.edge);
            match step.to {
                Endpoint::Vertex(w) => {
                    if to_vertex[w][m2] == INF {
                        to_vertex[w][m2] = dist + 1;
                        queue.push_back((w, m2));
                    }
                }
                Endpoint::Rough => to_boundary[m2] = to_boundary[m2].min(dist + 1),
                Endpoint::Open => {}
            }
        }
    }
    Lifted {
        to_vertex,
        to_boundary,
    }
}

/// Minimum correction weight per homology class (crossing mask) over all
/// ways of pairing the defects with each other or the boundary.
pub fn brute_force_classes(graph: &SectorGraph, defects: &[usize]) -> Vec<u64> {
    let lifted: Vec<Lifted> = defects.iter().map(|&a| lifted_bfs(graph, a)).collect();
    let classes = 1 << graph.test_planes().len();
    let planar = !graph.is_periodic();
    let mut memo: HashMap<usize, Vec<u64>> = HashMap::new();

    fn go(
        rest: usize,
        defects: &[usize],
        lifted: &[Lifted],
        classes: usize,
        planar: bool,
        memo: &mut HashMap<usize, Vec<u64>>,
    ) -> Vec<u64> {
        if rest == 0 {
            let mut v = vec![INF; classes];
            v[0] = 0;
            return v;
        }
        if let Some(v) = memo.get(&rest) {
            return v.clone();
        }
        let i = rest.trailing_zeros() as usize;
        let without_i = rest & !(1 << i);
        let mut best = vec![INF; classes];
        let combine = |best: &mut Vec<u64>, cost: &[u64], sub: &[u64]| {
            for (c1, &w1) in cost.iter().enumerate() {
                for (c2, &w2) in sub.iter().enumerate() {
                    if w1 < INF && w2 < INF {
                        let slot = &mut best[c1 ^ c2];
                        *slot = (*slot).min(w1 + w2);
                    }
                }
            }
        };
        if planar {
            let sub = go(without_i, defects, lifted, classes, planar, memo);
            combine(&mut best, &lifted[i].to_boundary, &sub);
        }
        let mut others = without_i;
        while others != 0 {
            let j = others.trailing_zeros() as usize;
            others &= others - 1;
            let sub = go(
                without_i & !(1 << j),
                defects,
                lifted,
                classes,
                planar,
                memo,
            );
            combine(&mut best, &lifted[i].to_vertex[defects[j]], &sub);
        }
        memo.insert(rest, best.clone());
        best
    }

    go(
        (1 << defects.len()) - 1,
        defects,
        &lifted,
        classes,
        planar,
        &mut memo,
    )
}

pub fn brute_force_pairing(weights: &[Vec<u64>], boundary: Option<&[u64]>) -> u64 {
    fn go(rest: u32, w: &[Vec<u64>], b: Option<&[u64]>) -> u64 {
        if rest == 0 {
            return 0;
        }
        let i = rest.trailing_zeros() as usize;
        let r = rest & !(1 << i);
        let mut best = b.map_or(INF, |b| b[i] + go(r, w, Some(b)));
        let mut others = r;
        while others != 0 {
            let j = others.trailing_zeros() as usize;
            others &= others - 1;
            best = best.min(w[i][j] + go(r & !(1 << j), w, b));
        }
        best
    }
    go((1u32 << weights.len()) - 1, weights, boundary)
}

/// BFS distances, independent of the decoder's closed forms.
pub fn bfs(graph: &SectorGraph, a: usize) -> (Vec<u64>, u64) {
    let l = lifted_bfs(graph, a);
    (
        l.to_vertex
            .iter()
            .map(|v| *v.iter().min().unwrap())
            .collect(),
        *l.to_boundary.iter().min().unwrap(),
    )
}

/// Decoder cost and class against the brute force; `Err` describes the
/// first disagreement.
pub fn check_against_brute_force(chain: &ErrorChain, graph: &SectorGraph) -> Result<(), String> {
    let edges: Vec<usize> = chain.edges().collect();
    let out = decode(chain, graph).map_err(|e| format!("{edges:?}: {e}"))?;
    let syndrome = extract_syndrome(chain, graph);
    let best = brute_force_classes(graph, &syndrome.defects());
    let min = *best.iter().min().unwrap();
    if out.matching_cost != min {
        return Err(format!("{edges:?}: cost {} vs {min}", out.matching_cost));
    }
    let c = &out.correction.chain;
    if extract_syndrome(c, graph) != syndrome || c.weight() as u64 != min {
        return Err(format!(
            "{edges:?}: correction does not realize the matching"
        ));
    }
    let class = plane_parities(c, graph)
        .iter()
        .enumerate()
        .fold(0, |m, (k, &b)| m | (b as usize) << k);
    if best[class] != min {
        return Err(format!("{edges:?}: decoder picked a non-minimal class"));
    }
    Ok(())
}

/// Every chain of one to three eligible edges; returns how many were
/// checked.
pub fn exhaustive_check(graph: &SectorGraph) -> Result<usize, String> {
    let edges = graph.eligible_edges().to_vec();
    let n = graph.num_edges();
    let mut count = 0;
    for (i, &a) in edges.iter().enumerate() {
        check_against_brute_force(&ErrorChain::from_edges(n, [a]), graph)?;
        count += 1;
        for (j, &b) in edges.iter().enumerate().skip(i + 1) {
            check_against_brute_force(&ErrorChain::from_edges(n, [a, b]), graph)?;
            count += 1;
            for &c in &edges[j + 1..] {
                check_against_brute_force(&ErrorChain::from_edges(n, [a, b, c]), graph)?;
                count += 1;
            }
        }
    }
    Ok(count)
}
