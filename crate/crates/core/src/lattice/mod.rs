//! The cluster lattice `C` and its decomposition into the `T_o` / `T_e`
//! sublattices.
//!
//! Coordinates follow the cluster convention `1 <= u1 <= l`,
//! `0 <= u2 <= l - 1`, `1 <= u3 <= d`. All parity tests use absolute
//! coordinates. Sites are linearized `u3`-major:
//! `index = ((u3 - 1) * l + u2) * l + (u1 - 1)`.

mod sector;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use sector::{Endpoint, Sector, SectorEdge, SectorGraph, Step, TestPlane};

/// A cluster site `(u1, u2, u3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    pub u1: i32,
    pub u2: i32,
    pub u3: i32,
}

impl Site {
    pub const fn new(u1: i32, u2: i32, u3: i32) -> Self {
        Site { u1, u2, u3 }
    }

    pub fn coord(&self, axis: usize) -> i32 {
        match axis {
            0 => self.u1,
            1 => self.u2,
            2 => self.u3,
            _ => panic!("axis {axis} out of range"),
        }
    }

    pub fn with_coord(mut self, axis: usize, value: i32) -> Self {
        match axis {
            0 => self.u1 = value,
            1 => self.u2 = value,
            2 => self.u3 = value,
            _ => panic!("axis {axis} out of range"),
        }
        self
    }

    pub fn shifted(self, axis: usize, delta: i32) -> Self {
        let c = self.coord(axis);
        self.with_coord(axis, c + delta)
    }

    /// Number of odd coordinates.
    fn odd_count(&self) -> u32 {
        [self.u1, self.u2, self.u3]
            .iter()
            .filter(|c| c.rem_euclid(2) == 1)
            .count() as u32
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.u1, self.u2, self.u3)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryMode {
    /// Open boundaries; both faces carry a planar-code qubit.
    Planar,
    /// Periodic in `u1` and `u2` (storage-style simulation).
    #[serde(rename = "toric")]
    ToricPeriodic,
}

impl fmt::Display for BoundaryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryMode::Planar => "planar",
            BoundaryMode::ToricPeriodic => "toric",
        })
    }
}

/// Extents of the cluster `C`.
///
/// Planar mode needs odd `l, d >= 3`. Toric mode uses `l = 2L` (even,
/// `L >= 2`) and `d = 2 d_toric + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeSpec {
    l: usize,
    d: usize,
    boundary: BoundaryMode,
}

impl LatticeSpec {
    pub fn new(l: usize, d: usize, boundary: BoundaryMode) -> Result<Self> {
        if d < 3 || d % 2 == 0 {
            return Err(Error::InvalidSpec(format!("d = {d} must be odd and >= 3")));
        }
        match boundary {
            BoundaryMode::Planar if l < 3 || l % 2 == 0 => {
                return Err(Error::InvalidSpec(format!(
                    "planar l = {l} must be odd and >= 3"
                )))
            }
            BoundaryMode::ToricPeriodic if l < 4 || l % 2 == 1 => {
                return Err(Error::InvalidSpec(format!(
                    "toric l = {l} must be even and >= 4"
                )))
            }
            _ => {}
        }
        Ok(LatticeSpec { l, d, boundary })
    }

    pub fn planar(l: usize, d: usize) -> Result<Self> {
        Self::new(l, d, BoundaryMode::Planar)
    }

    /// Toric lattice in the `L x L x d_toric` convention: `l = 2L`,
    /// `d = 2 d_toric + 1`.
    pub fn toric(big_l: usize, d_toric: usize) -> Result<Self> {
        if d_toric == 0 {
            return Err(Error::InvalidSpec("d_toric must be positive".into()));
        }
        Self::new(2 * big_l, 2 * d_toric + 1, BoundaryMode::ToricPeriodic)
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn boundary(&self) -> BoundaryMode {
        self.boundary
    }

    pub fn is_periodic(&self) -> bool {
        self.boundary == BoundaryMode::ToricPeriodic
    }

    /// Whether `axis` wraps around.
    pub fn periodic_axis(&self, axis: usize) -> bool {
        self.is_periodic() && axis < 2
    }

    pub fn num_sites(&self) -> usize {
        self.l * self.l * self.d
    }

    /// Inclusive coordinate range along `axis`.
    pub fn axis_range(&self, axis: usize) -> (i32, i32) {
        let l = self.l as i32;
        match axis {
            0 => (1, l),
            1 => (0, l - 1),
            2 => (1, self.d as i32),
            _ => panic!("axis {axis} out of range"),
        }
    }

    pub fn contains(&self, site: Site) -> bool {
        (0..3).all(|axis| {
            let (lo, hi) = self.axis_range(axis);
            (lo..=hi).contains(&site.coord(axis))
        })
    }

    /// Map a coordinate onto the lattice, wrapping periodic axes. `None` if
    /// the site falls off an open boundary.
    pub fn normalize(&self, site: Site) -> Option<Site> {
        let mut out = site;
        for axis in 0..3 {
            let (lo, hi) = self.axis_range(axis);
            let c = site.coord(axis);
            if (lo..=hi).contains(&c) {
                continue;
            }
            if !self.periodic_axis(axis) {
                return None;
            }
            let span = hi - lo + 1;
            out = out.with_coord(axis, lo + (c - lo).rem_euclid(span));
        }
        Some(out)
    }

    pub fn site_index(&self, site: Site) -> Result<usize> {
        if !self.contains(site) {
            return Err(Error::OutOfRange { site });
        }
        let l = self.l;
        Ok(((site.u3 as usize - 1) * l + site.u2 as usize) * l + (site.u1 as usize - 1))
    }

    pub fn site_at(&self, index: usize) -> Site {
        let l = self.l;
        let u1 = index % l + 1;
        let u2 = (index / l) % l;
        let u3 = index / (l * l) + 1;
        Site::new(u1 as i32, u2 as i32, u3 as i32)
    }

    /// All sites in index order.
    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        (0..self.num_sites()).map(move |i| self.site_at(i))
    }

    /// Cluster nearest neighbours of `site` (in-range only; wrapped on
    /// periodic axes).
    pub fn neighbors(&self, site: Site) -> Vec<Site> {
        let mut out = Vec::with_capacity(6);
        for axis in 0..3 {
            for delta in [-1, 1] {
                if let Some(n) = self.normalize(site.shifted(axis, delta)) {
                    if n != site && !out.contains(&n) {
                        out.push(n);
                    }
                }
            }
        }
        out
    }

    /// Sublattice neighbours at distance two along the lattice axes.
    pub fn sublattice_neighbors(&self, site: Site) -> Vec<Site> {
        let mut out = Vec::with_capacity(6);
        for axis in 0..3 {
            for delta in [-2, 2] {
                if let Some(n) = self.normalize(site.shifted(axis, delta)) {
                    if n != site && !out.contains(&n) {
                        out.push(n);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} l={} d={}", self.boundary, self.l, self.d)
    }
}

/// Which sublattice object a cluster site plays.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    /// `(e,e,e)`
    VertexTe,
    /// `(o,o,o)`
    VertexTo,
    /// `(e,e,o)`, `(e,o,e)`, `(o,e,e)`
    EdgeTe,
    /// `(o,o,e)`, `(o,e,o)`, `(e,o,o)`
    EdgeTo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    MeasureZ,
    MeasureX,
    Unmeasured,
}

/// Face qubit membership (`L` at `u3 = 1`, `R` at `u3 = d`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Face {
    None,
    L,
    R,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiteRole {
    pub site: Site,
    pub role: Role,
    pub basis: Basis,
    pub face: Face,
}

/// Classify a site by coordinate parity and assign its measurement basis.
///
/// Sublattice vertices are measured in `Z`, sublattice edges in `X`, except
/// the face qubits `L = {(o,e,1), (e,o,1)}` and `R` (same pattern at
/// `u3 = d`) which stay unmeasured. Toric lattices carry no face qubits.
pub fn classify_site(site: Site, spec: &LatticeSpec) -> Result<SiteRole> {
    if !spec.contains(site) {
        return Err(Error::OutOfRange { site });
    }
    let role = match site.odd_count() {
        3 => Role::VertexTo,
        0 => Role::VertexTe,
        2 => Role::EdgeTo,
        _ => Role::EdgeTe,
    };
    let face = if spec.is_periodic() {
        Face::None
    } else {
        let in_plane_mixed = (site.u1 + site.u2).rem_euclid(2) == 1;
        if in_plane_mixed && site.u3 == 1 {
            Face::L
        } else if in_plane_mixed && site.u3 == spec.d as i32 {
            Face::R
        } else {
            Face::None
        }
    };
    let basis = match (role, face) {
        (_, Face::L | Face::R) => Basis::Unmeasured,
        (Role::VertexTe | Role::VertexTo, _) => Basis::MeasureZ,
        (Role::EdgeTe | Role::EdgeTo, _) => Basis::MeasureX,
    };
    Ok(SiteRole {
        site,
        role,
        basis,
        face,
    })
}

/// A 2D slice of sector edges used by the logical Bell correlators:
/// `T_XX^{u2} = {(o, u2, o)}` for `T_o` and `T_ZZ^{u1} = {(u1, e, e)}` for
/// `T_e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrelatorSlice {
    pub sector: Sector,
    pub index: i32,
    pub sites: Vec<Site>,
}

impl CorrelatorSlice {
    /// The axis the slice's index fixes (`u2` for `T_o`, `u1` for `T_e`).
    pub fn axis(&self) -> usize {
        self.sector.rough_axis()
    }

    pub fn contains(&self, site: Site) -> bool {
        self.sites.contains(&site)
    }
}

pub fn correlator_slice(spec: &LatticeSpec, sector: Sector, index: i32) -> Result<CorrelatorSlice> {
    let axis = sector.rough_axis();
    let parity_ok = match sector {
        Sector::To => index.rem_euclid(2) == 0,
        Sector::Te => index.rem_euclid(2) == 1,
    };
    if !parity_ok {
        return Err(Error::SliceParity {
            sector: sector.name(),
            index,
        });
    }
    let (lo, hi) = spec.axis_range(axis);
    if !(lo..=hi).contains(&index) {
        return Err(Error::InvalidArgument(format!(
            "slice index {index} outside [{lo}, {hi}]"
        )));
    }
    // the two free coordinates take the sector's "other" parity
    let free_parity = match sector {
        Sector::To => 1,
        Sector::Te => 0,
    };
    let sites = spec
        .sites()
        .filter(|s| {
            s.coord(axis) == index
                && (0..3)
                    .filter(|&a| a != axis)
                    .all(|a| s.coord(a).rem_euclid(2) == free_parity)
        })
        .collect();
    Ok(CorrelatorSlice {
        sector,
        index,
        sites,
    })
}
