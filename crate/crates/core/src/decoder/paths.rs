//! Distances and shortest paths on a sector graph.
//!
//! Sector vertices sit on a full rectangular grid (with wrap on periodic
//! axes), so graph distance is the Manhattan distance of grid coordinates.

use crate::lattice::{Endpoint, SectorGraph};

fn axis_offset(graph: &SectorGraph, axis: usize, from: usize, to: usize) -> (usize, bool) {
    let n = graph.dims()[axis];
    if graph.spec().periodic_axis(axis) {
        let fwd = (to + n - from) % n;
        let back = (n - fwd) % n;
        if fwd <= back {
            (fwd, true)
        } else {
            (back, false)
        }
    } else if to >= from {
        (to - from, true)
    } else {
        (from - to, false)
    }
}

/// Graph distance between two sector vertices.
pub fn vertex_distance(graph: &SectorGraph, a: usize, b: usize) -> usize {
    let (ga, gb) = (graph.grid_coord(a), graph.grid_coord(b));
    (0..3)
        .map(|axis| axis_offset(graph, axis, ga[axis], gb[axis]).0)
        .sum()
}

/// Distance to the nearest rough face, with the side (`false` = lower).
/// `None` when the graph has no rough faces.
fn nearest_face(graph: &SectorGraph, v: usize) -> Option<(usize, bool)> {
    if graph.is_periodic() {
        return None;
    }
    let axis = graph.sector().rough_axis();
    let n = graph.dims()[axis];
    let g = graph.grid_coord(v)[axis];
    let (lower, upper) = (g + 1, n - g);
    Some(if lower <= upper {
        (lower, false)
    } else {
        (upper, true)
    })
}

/// Number of edges from `v` to the nearest rough face.
pub fn boundary_distance(graph: &SectorGraph, v: usize) -> Option<usize> {
    nearest_face(graph, v).map(|(d, _)| d)
}

/// Shortest path from `a` to `b`, walking axis 0, then 1, then 2.
pub fn shortest_path(graph: &SectorGraph, a: usize, b: usize) -> Vec<usize> {
    let gb = graph.grid_coord(b);
    let mut path = Vec::new();
    let mut v = a;
    for axis in 0..3 {
        let (len, positive) = axis_offset(graph, axis, graph.grid_coord(v)[axis], gb[axis]);
        for _ in 0..len {
            let step = graph
                .step(v, axis, positive)
                .expect("grid path stays inside the sector");
            path.push(step.edge);
            v = step.to.vertex().expect("interior step");
        }
    }
    debug_assert_eq!(v, b);
    path
}

/// Straight path from `v` to its nearest rough face (lower face on ties).
pub fn boundary_path(graph: &SectorGraph, v: usize) -> Option<Vec<usize>> {
    let (_, positive) = nearest_face(graph, v)?;
    let axis = graph.sector().rough_axis();
    let mut path = Vec::new();
    let mut cur = v;
    loop {
        let step = graph.step(cur, axis, positive)?;
        path.push(step.edge);
        match step.to {
            Endpoint::Vertex(next) => cur = next,
            Endpoint::Rough => return Some(path),
            Endpoint::Open => return None,
        }
    }
}
