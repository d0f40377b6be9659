use std::fmt;

use serde::{Deserialize, Serialize};

use super::{classify_site, LatticeSpec, Role, Site};
use crate::error::{Error, Result};

/// One of the two decoding sectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sector {
    /// Vertices `(o,o,o)`; errors here disturb the `XX` correlation.
    To,
    /// Vertices `(e,e,e)`; errors here disturb the `ZZ` correlation.
    Te,
}

impl Sector {
    pub const ALL: [Sector; 2] = [Sector::To, Sector::Te];

    pub fn name(&self) -> &'static str {
        match self {
            Sector::To => "To",
            Sector::Te => "Te",
        }
    }

    /// Axis whose open ends are rough faces: `u2` for `T_o`, `u1` for `T_e`.
    pub fn rough_axis(&self) -> usize {
        match self {
            Sector::To => 1,
            Sector::Te => 0,
        }
    }

    fn vertex_parity(&self) -> i32 {
        match self {
            Sector::To => 1,
            Sector::Te => 0,
        }
    }

    fn vertex_role(&self) -> Role {
        match self {
            Sector::To => Role::VertexTo,
            Sector::Te => Role::VertexTe,
        }
    }

    fn edge_role(&self) -> Role {
        match self {
            Sector::To => Role::EdgeTo,
            Sector::Te => Role::EdgeTe,
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// End of a sector edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Endpoint {
    Vertex(usize),
    /// The edge terminates on a rough face (no syndrome bit).
    Rough,
    /// The edge sticks out of the `u3` faces of `T_e`; such edges are
    /// excluded from the error model.
    Open,
}

impl Endpoint {
    pub fn vertex(&self) -> Option<usize> {
        match *self {
            Endpoint::Vertex(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SectorEdge {
    pub site: Site,
    /// Lattice direction of the edge.
    pub axis: usize,
    /// `[minus side, plus side]` along `axis`.
    pub ends: [Endpoint; 2],
    pub excluded: bool,
}

impl SectorEdge {
    pub fn is_rough(&self) -> bool {
        self.ends.contains(&Endpoint::Rough)
    }
}

/// Move along one sector edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub edge: usize,
    pub to: Endpoint,
}

/// Edges along `axis` whose site coordinate on that axis equals `coord`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestPlane {
    pub axis: usize,
    pub coord: i32,
}

impl TestPlane {
    pub fn contains(&self, edge: &SectorEdge) -> bool {
        edge.axis == self.axis && edge.site.coord(self.axis) == self.coord
    }
}

/// Decoding graph of one sector: syndrome vertices, error-carrying edges,
/// rough-face terminations and the planes used for homology parity.
#[derive(Clone, Debug)]
pub struct SectorGraph {
    sector: Sector,
    spec: LatticeSpec,
    dims: [usize; 3],
    vertices: Vec<Site>,
    grid: Vec<[usize; 3]>,
    edges: Vec<SectorEdge>,
    excluded: Vec<usize>,
    eligible: Vec<usize>,
    test_planes: Vec<TestPlane>,
    adjacency: Vec<[Option<Step>; 6]>,
    vertex_of_site: Vec<Option<u32>>,
    edge_of_site: Vec<Option<u32>>,
}

impl SectorGraph {
    pub fn build(spec: &LatticeSpec, sector: Sector) -> SectorGraph {
        let n_sites = spec.num_sites();
        let vpar = sector.vertex_parity();
        let first = |axis: usize| {
            let (lo, _) = spec.axis_range(axis);
            if lo.rem_euclid(2) == vpar {
                lo
            } else {
                lo + 1
            }
        };
        let origin = [first(0), first(1), first(2)];
        let mut dims = [0usize; 3];
        for (axis, dim) in dims.iter_mut().enumerate() {
            let (lo, hi) = spec.axis_range(axis);
            *dim = (lo..=hi).filter(|c| c.rem_euclid(2) == vpar).count();
        }

        let mut vertices = Vec::new();
        let mut grid = Vec::new();
        let mut vertex_of_site = vec![None; n_sites];
        let mut edge_sites = Vec::new();
        for (idx, site) in spec.sites().enumerate() {
            let role = classify_site(site, spec).expect("site in range").role;
            if role == sector.vertex_role() {
                vertex_of_site[idx] = Some(vertices.len() as u32);
                vertices.push(site);
                grid.push([0, 1, 2].map(|a| ((site.coord(a) - origin[a]) / 2) as usize));
            } else if role == sector.edge_role() {
                edge_sites.push((idx, site));
            }
        }

        let mut edges = Vec::with_capacity(edge_sites.len());
        let mut edge_of_site = vec![None; n_sites];
        for (idx, site) in edge_sites {
            let axis = (0..3)
                .find(|&a| site.coord(a).rem_euclid(2) != vpar)
                .expect("edge has one off-parity coordinate");
            let end = |delta: i32| match spec.normalize(site.shifted(axis, delta)) {
                Some(n) => {
                    let i = spec.site_index(n).expect("normalized site");
                    Endpoint::Vertex(vertex_of_site[i].expect("neighbour is a vertex") as usize)
                }
                None if axis == 2 => Endpoint::Open,
                None => Endpoint::Rough,
            };
            let ends = [end(-1), end(1)];
            let excluded = ends.contains(&Endpoint::Open);
            edge_of_site[idx] = Some(edges.len() as u32);
            edges.push(SectorEdge {
                site,
                axis,
                ends,
                excluded,
            });
        }

        let mut adjacency = vec![[None; 6]; vertices.len()];
        for (e, edge) in edges.iter().enumerate() {
            if edge.excluded {
                continue;
            }
            let [minus, plus] = edge.ends;
            if let Endpoint::Vertex(v) = minus {
                adjacency[v][2 * edge.axis + 1] = Some(Step { edge: e, to: plus });
            }
            if let Endpoint::Vertex(v) = plus {
                adjacency[v][2 * edge.axis] = Some(Step { edge: e, to: minus });
            }
        }

        let excluded = (0..edges.len()).filter(|&e| edges[e].excluded).collect();
        let eligible = (0..edges.len()).filter(|&e| !edges[e].excluded).collect();
        let test_planes = default_test_planes(spec, sector);

        SectorGraph {
            sector,
            spec: *spec,
            dims,
            vertices,
            grid,
            edges,
            excluded,
            eligible,
            test_planes,
            adjacency,
            vertex_of_site,
            edge_of_site,
        }
    }

    /// Replace the planar test plane by the correlator slice at `coord`
    /// (`u2` even for `T_o`, `u1` odd for `T_e`).
    pub fn with_test_plane(mut self, coord: i32) -> Result<Self> {
        if self.spec.is_periodic() {
            return Err(Error::InvalidArgument(
                "toric graphs use fixed wrap planes".into(),
            ));
        }
        let plane = TestPlane {
            axis: self.sector.rough_axis(),
            coord,
        };
        if !self.edges.iter().any(|e| plane.contains(e)) {
            return Err(Error::SliceParity {
                sector: self.sector.name(),
                index: coord,
            });
        }
        self.test_planes = vec![plane];
        Ok(self)
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn is_periodic(&self) -> bool {
        self.spec.is_periodic()
    }

    /// Vertex counts along each axis.
    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Site] {
        &self.vertices
    }

    pub fn vertex_site(&self, v: usize) -> Site {
        self.vertices[v]
    }

    /// Position of vertex `v` on the sector's own (unit-spaced) grid.
    pub fn grid_coord(&self, v: usize) -> [usize; 3] {
        self.grid[v]
    }

    pub fn edges(&self) -> &[SectorEdge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &SectorEdge {
        &self.edges[e]
    }

    /// Per-edge rough-face flags.
    pub fn rough_boundary(&self) -> Vec<bool> {
        self.edges.iter().map(SectorEdge::is_rough).collect()
    }

    /// Edges that never carry errors (the `u3`-face edges of `T_e`).
    pub fn excluded_edges(&self) -> &[usize] {
        &self.excluded
    }

    /// Edges that may carry errors.
    pub fn eligible_edges(&self) -> &[usize] {
        &self.eligible
    }

    pub fn test_planes(&self) -> &[TestPlane] {
        &self.test_planes
    }

    /// Edge leaving `v` along `axis` in direction `positive`, excluding
    /// edges outside the error model.
    pub fn step(&self, v: usize, axis: usize, positive: bool) -> Option<Step> {
        self.adjacency[v][2 * axis + positive as usize]
    }

    pub fn steps(&self, v: usize) -> impl Iterator<Item = Step> + '_ {
        self.adjacency[v].iter().flatten().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.steps(v).count()
    }

    pub fn vertex_of(&self, site: Site) -> Option<usize> {
        let idx = self.spec.site_index(site).ok()?;
        self.vertex_of_site[idx].map(|v| v as usize)
    }

    pub fn edge_of(&self, site: Site) -> Option<usize> {
        let idx = self.spec.site_index(site).ok()?;
        self.edge_of_site[idx].map(|e| e as usize)
    }
}

fn default_test_planes(spec: &LatticeSpec, sector: Sector) -> Vec<TestPlane> {
    let l = spec.l() as i32;
    match (spec.is_periodic(), sector) {
        (false, Sector::To) => vec![TestPlane { axis: 1, coord: 0 }],
        (false, Sector::Te) => vec![TestPlane { axis: 0, coord: 1 }],
        // seams of the periodic directions
        (true, Sector::To) => vec![
            TestPlane { axis: 0, coord: l },
            TestPlane { axis: 1, coord: 0 },
        ],
        (true, Sector::Te) => vec![
            TestPlane { axis: 0, coord: 1 },
            TestPlane {
                axis: 1,
                coord: l - 1,
            },
        ],
    }
}
