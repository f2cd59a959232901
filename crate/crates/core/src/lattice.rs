//! Spatial lattices: open or periodic chains and rectangular grids, with
//! deterministically indexed links and plaquettes.
//!
//! Sites are ordered lexicographically by coordinate, links by
//! (site, direction), plaquettes by base site. These orderings are part of
//! the contract: basis enumeration and file outputs depend on them.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Boundary condition along one axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

/// Directed link from site `from` to site `to` along `axis`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Link {
    pub from: usize,
    pub to: usize,
    pub axis: usize,
}

/// Elementary square. `links[k]` is traversed with sign `signs[k]` when
/// walking the square counter-clockwise from its base site:
/// +x, +y, then the two return edges backwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Plaquette {
    pub links: [usize; 4],
    pub signs: [i8; 4],
}

/// Lattice geometry with derived link and plaquette index sets.
#[derive(Debug, Clone)]
pub struct LatticeSpec {
    dims: Vec<usize>,
    boundary: Vec<Boundary>,
    links: Vec<Link>,
    plaquettes: Vec<Plaquette>,
    /// Per site: (link index, +1 outgoing / -1 incoming).
    incident: Vec<Vec<(usize, i8)>>,
}

impl LatticeSpec {
    /// Builds a 1D or 2D lattice. Extents must be at least 2.
    pub fn new(dims: &[usize], boundary: &[Boundary]) -> Result<Self> {
        if dims.is_empty() || dims.len() > 2 {
            return Err(Error::BadDimensionality(dims.len()));
        }
        if boundary.len() != dims.len() {
            return Err(Error::BoundaryMismatch {
                got: boundary.len(),
                axes: dims.len(),
            });
        }
        for &d in dims {
            if d < 2 {
                return Err(Error::BadExtent(d));
            }
        }

        let mut spec = Self {
            dims: dims.to_vec(),
            boundary: boundary.to_vec(),
            links: Vec::new(),
            plaquettes: Vec::new(),
            incident: Vec::new(),
        };
        spec.build_links();
        spec.build_plaquettes();
        spec.build_incident();
        Ok(spec)
    }

    /// Open chain of `sites` sites.
    pub fn chain(sites: usize) -> Result<Self> {
        Self::new(&[sites], &[Boundary::Open])
    }

    /// Open rectangular grid.
    pub fn grid(x: usize, y: usize) -> Result<Self> {
        Self::new(&[x, y], &[Boundary::Open, Boundary::Open])
    }

    fn build_links(&mut self) {
        for site in 0..self.num_sites() {
            let coords = self.site_coords(site);
            for axis in 0..self.dims.len() {
                if let Some(next) = self.step(&coords, axis) {
                    self.links.push(Link {
                        from: site,
                        to: next,
                        axis,
                    });
                }
            }
        }
    }

    fn build_plaquettes(&mut self) {
        if self.dims.len() != 2 {
            return;
        }
        for site in 0..self.num_sites() {
            let c = self.site_coords(site);
            let (right, up) = match (self.step(&c, 0), self.step(&c, 1)) {
                (Some(r), Some(u)) => (r, u),
                _ => continue,
            };
            // v -> v+x -> v+x+y -> v+y -> v, last two edges walked backwards
            let a = self.link_from(site, 0).expect("link +x exists");
            let b = self.link_from(right, 1).expect("link +y from right exists");
            let c_back = self.link_from(up, 0).expect("link +x from up exists");
            let d_back = self.link_from(site, 1).expect("link +y exists");
            self.plaquettes.push(Plaquette {
                links: [a, b, c_back, d_back],
                signs: [1, 1, -1, -1],
            });
        }
    }

    fn build_incident(&mut self) {
        let mut incident = vec![Vec::new(); self.num_sites()];
        for (idx, link) in self.links.iter().enumerate() {
            incident[link.from].push((idx, 1));
            incident[link.to].push((idx, -1));
        }
        self.incident = incident;
    }

    /// Index of the link leaving `site` along `axis`, if present.
    fn link_from(&self, site: usize, axis: usize) -> Option<usize> {
        self.links
            .iter()
            .position(|l| l.from == site && l.axis == axis)
    }

    /// Neighbor of `coords` one step along `axis`, respecting boundary.
    fn step(&self, coords: &[usize], axis: usize) -> Option<usize> {
        let extent = self.dims[axis];
        let mut next = coords.to_vec();
        if coords[axis] + 1 < extent {
            next[axis] += 1;
        } else {
            match self.boundary[axis] {
                Boundary::Open => return None,
                Boundary::Periodic => next[axis] = 0,
            }
        }
        Some(self.site_index(&next))
    }

    pub fn ndim(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn boundary(&self) -> &[Boundary] {
        &self.boundary
    }

    pub fn num_sites(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn num_links(&self) -> usize {
        self.links.len()
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn plaquettes(&self) -> &[Plaquette] {
        &self.plaquettes
    }

    /// Links incident to `site` as (link index, +1 outgoing / -1 incoming).
    pub fn incident(&self, site: usize) -> &[(usize, i8)] {
        &self.incident[site]
    }

    pub fn site_index(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.dims.len());
        let mut idx = 0;
        for (c, d) in coords.iter().zip(&self.dims) {
            debug_assert!(c < d);
            idx = idx * d + c;
        }
        idx
    }

    pub fn site_coords(&self, mut idx: usize) -> Vec<usize> {
        let mut coords = vec![0; self.dims.len()];
        for axis in (0..self.dims.len()).rev() {
            coords[axis] = idx % self.dims[axis];
            idx /= self.dims[axis];
        }
        coords
    }

    /// Link connecting adjacent sites `a` and `b`: (index, +1 if directed
    /// a→b, -1 if b→a). None if not adjacent.
    pub fn link_between(&self, a: usize, b: usize) -> Option<(usize, i8)> {
        self.incident[a]
            .iter()
            .find_map(|&(l, _)| {
                let link = self.links[l];
                if link.from == a && link.to == b {
                    Some((l, 1))
                } else if link.from == b && link.to == a {
                    Some((l, -1))
                } else {
                    None
                }
            })
    }

    /// Axis with the largest extent (ties to the lower axis index).
    pub fn longest_axis(&self) -> usize {
        let mut best = 0;
        for axis in 1..self.dims.len() {
            if self.dims[axis] > self.dims[best] {
                best = axis;
            }
        }
        best
    }
}
