//! Exact lattice polygon geometry.

mod hull;
mod point;
mod unimodular;

pub use hull::Hull;
pub(crate) use hull::gcd;
pub use point::{LatticePoint, PointIndex, PointSet};
pub use unimodular::{
    canonical_form, classify, is_lw_minimal, lattice_width, square_embedding, symmetry_group,
    width_directions, AffineUnimodularMap, ClassTag, PolygonClass,
};

use crate::error::{Error, Result};

/// A two-dimensional convex lattice polygon with cached combinatorics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolygon {
    hull: Hull,
    boundary_count: usize,
    area2: u64,
}

impl LatticePolygon {
    /// Convex hull of `pts`; fails unless it is two-dimensional.
    pub fn from_vertices(pts: &[LatticePoint]) -> Result<LatticePolygon> {
        Hull::of(pts.iter().copied()).into_polygon()
    }

    pub fn from_coords(coords: &[(i64, i64)]) -> Result<LatticePolygon> {
        Hull::of(coords.iter().map(|&c| c.into())).into_polygon()
    }

    /// `dΣ = conv{(0,0),(d,0),(0,d)}`.
    pub fn sigma(d: i64) -> LatticePolygon {
        Self::from_coords(&[(0, 0), (d, 0), (0, d)]).expect("d ≥ 1")
    }

    /// `Υ_d = conv{(−1,−1),(d,0),(0,d)}`.
    pub fn upsilon(d: i64) -> LatticePolygon {
        Self::from_coords(&[(-1, -1), (d, 0), (0, d)]).expect("d ≥ 1")
    }

    /// `dΥ = d·conv{(−1,−1),(1,0),(0,1)}`.
    pub fn upsilon_multiple(d: i64) -> LatticePolygon {
        Self::from_coords(&[(-d, -d), (d, 0), (0, d)]).expect("d ≥ 1")
    }

    /// `conv{(0,0),(a,0),(b,1),(0,1)}`.
    pub fn lawrence_prism(a: i64, b: i64) -> Result<LatticePolygon> {
        Self::from_coords(&[(0, 0), (a, 0), (b, 1), (0, 1)])
    }

    pub fn hull(&self) -> &Hull {
        &self.hull
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        self.hull.vertices()
    }

    pub fn points(&self) -> &PointSet {
        self.hull.points()
    }

    /// `N_Δ`.
    pub fn n_points(&self) -> usize {
        self.hull.n_points()
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary_count
    }

    pub fn interior_count(&self) -> usize {
        self.n_points() - self.boundary_count
    }

    /// Twice the Euclidean area.
    pub fn area2(&self) -> u64 {
        self.area2
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.hull.contains(p)
    }

    pub fn is_vertex(&self, p: &LatticePoint) -> bool {
        self.vertices().contains(p)
    }

    pub fn interior_points(&self) -> PointSet {
        self.hull.interior_points()
    }

    /// `Δ^(1)`: hull of the interior lattice points, possibly degenerate.
    pub fn interior_hull(&self) -> Hull {
        self.hull.interior_hull()
    }

    /// `qΔ`; `q = 0` gives the origin as a zero-dimensional hull.
    pub fn dilate(&self, q: u32) -> Hull {
        self.hull.scale(q)
    }

    /// `|qΔ ∩ ℤ²| = vol·q² + (|∂Δ ∩ ℤ²|/2)·q + 1`.
    pub fn ehrhart_count(&self, q: u64) -> u64 {
        // area2·q² + B·q is always even
        (self.area2 * q * q + self.boundary_count as u64 * q + 2) / 2
    }

    /// `σ_Δ`, the sum of all lattice points.
    pub fn sigma_point(&self) -> LatticePoint {
        self.points().sum()
    }

    /// Hull of the lattice points of `Δ` other than the vertex `p`.
    pub fn prune_vertex(&self, p: LatticePoint) -> Result<LatticePolygon> {
        if !self.is_vertex(&p) {
            return Err(Error::NotAVertex(p));
        }
        Hull::of(self.points().iter().copied().filter(|&q| q != p)).into_polygon()
    }
}

impl Hull {
    pub fn into_polygon(self) -> Result<LatticePolygon> {
        if self.dimension() != 2 {
            return Err(Error::Dimension(self.dimension()));
        }
        let v = self.vertices();
        let n = v.len();
        let mut boundary = 0;
        let mut area2 = 0i64;
        for i in 0..n {
            let (a, b) = (v[i], v[(i + 1) % n]);
            boundary += gcd(b.x - a.x, b.y - a.y) as usize;
            area2 += a.cross(b);
        }
        debug_assert!(area2 > 0);
        Ok(LatticePolygon {
            hull: self,
            boundary_count: boundary,
            area2: area2 as u64,
        })
    }
}

/// Number of nonzero integer vectors `v` with `inner + v ⊆ outer`.
pub fn translate_count(inner: &Hull, outer: &LatticePolygon) -> Result<u64> {
    let Some(&anchor) = inner.vertices().first() else {
        return Err(Error::EmptyInner);
    };
    let count = outer
        .points()
        .iter()
        .map(|&q| q - anchor)
        .filter(|&v| v != LatticePoint::ORIGIN)
        .filter(|&v| inner.vertices().iter().all(|&w| outer.contains(&(w + v))))
        .count();
    Ok(count as u64)
}
