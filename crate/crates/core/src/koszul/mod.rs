//! Bigraded Koszul complexes of toric surfaces over arbitrary supports.

mod basis;
mod genfun;
mod removal;

pub use basis::{
    coboundary_block, enumerate_basis, CoboundaryBlock, CoboundaryBuilder, SubsetTable,
    WedgeBasisElement,
};
pub use genfun::{basis_dimension_polynomial, DimensionPolynomial};
pub use removal::{choose_removal, regular_pair, regular_triple, RemovalCertificate, RemovalPlan};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polygon::{Hull, LatticePoint, LatticePolygon, PointSet};

/// `∧^p V_A ⊗ V_B → ∧^{p−1} V_A ⊗ V_C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportTriple {
    pub wedge_support: PointSet,
    pub source_support: PointSet,
    pub target_support: PointSet,
    pub wedge_degree: usize,
}

/// The four routes to a table entry.
///
/// `PrimalB(ℓ)`: `b_ℓ` as `K_{ℓ,1}(X,L)`. `DualC(ℓ)`: `c_ℓ` as the kernel
/// of the twisted complex in position `(ℓ−1, 1)`. `DualB(ℓ)`: `b_ℓ` as
/// `K_{N−3−ℓ,2}(X;K,L)`. `PrimalC(ℓ)`: `c_ℓ` as `K_{N−2−ℓ,2}(X,L)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComplexKind {
    PrimalB(usize),
    DualC(usize),
    DualB(usize),
    PrimalC(usize),
}

impl ComplexKind {
    pub fn index(&self) -> usize {
        match *self {
            ComplexKind::PrimalB(l)
            | ComplexKind::DualC(l)
            | ComplexKind::DualB(l)
            | ComplexKind::PrimalC(l) => l,
        }
    }

    pub fn is_b(&self) -> bool {
        matches!(self, ComplexKind::PrimalB(_) | ComplexKind::DualB(_))
    }

    /// True for the twisted module `⊕ V_{(qΔ)^(1)}`.
    pub fn twisted(&self) -> bool {
        matches!(self, ComplexKind::DualC(_) | ComplexKind::DualB(_))
    }

    /// `(p, q)` of the middle term for a polygon with `n` lattice points.
    pub fn position(&self, n: usize) -> Option<(usize, usize)> {
        let l = self.index();
        if l == 0 || l + 3 > n {
            return None;
        }
        Some(match *self {
            ComplexKind::PrimalB(l) => (l, 1),
            ComplexKind::DualC(l) => (l - 1, 1),
            ComplexKind::DualB(l) => (n - 3 - l, 2),
            ComplexKind::PrimalC(l) => (n - 2 - l, 2),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ComplexKind::PrimalB(_) => "primal_b",
            ComplexKind::DualC(_) => "dual_c",
            ComplexKind::DualB(_) => "dual_b",
            ComplexKind::PrimalC(_) => "primal_c",
        }
    }
}

impl std::fmt::Display for ComplexKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}({})", self.name(), self.index())
    }
}

/// A three-term complex `∧^{p+1}W⊗M_{q−1} → ∧^pW⊗M_q → ∧^{p−1}W⊗M_{q+1}`,
/// fully resolved to point supports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexSpec {
    pub kind: Option<ComplexKind>,
    pub p: usize,
    pub q: usize,
    pub wedge: PointSet,
    pub lower: PointSet,
    pub middle: PointSet,
    pub upper: PointSet,
    /// Bidegrees of the middle term, i.e. the lattice points of `(p+q)Δ`
    /// or `pΔ + (qΔ)^(1)`.
    pub region: PointSet,
    pub removed: Vec<LatticePoint>,
    /// Only the kernel of the outgoing map matters (`M_{q−1} = 0`).
    pub incoming_zero: bool,
    /// The incoming map is known to be injective, so its rank is the
    /// dimension of its source.
    pub incoming_injective: bool,
}

impl ComplexSpec {
    pub fn outgoing(&self) -> SupportTriple {
        SupportTriple {
            wedge_support: self.wedge.clone(),
            source_support: self.middle.clone(),
            target_support: self.upper.clone(),
            wedge_degree: self.p,
        }
    }

    pub fn incoming(&self) -> SupportTriple {
        SupportTriple {
            wedge_support: self.wedge.clone(),
            source_support: self.lower.clone(),
            target_support: self.middle.clone(),
            wedge_degree: self.p + 1,
        }
    }

    /// Translation multiplier for symmetries acting on bidegrees: a map
    /// `x ↦ Mx + t` of `Δ` acts as `x ↦ Mx + (p+q)t`.
    pub fn translation_weight(&self) -> i64 {
        (self.p + self.q) as i64
    }
}

/// Degree `q` part of `⊕ V_{qΔ}` (or of `⊕ V_{(qΔ)^(1)}` when `twisted`)
/// after quotienting by the removed points.
pub fn module_support(
    poly: &LatticePolygon,
    twisted: bool,
    q: usize,
    removed: &[LatticePoint],
) -> PointSet {
    let part = |k: usize| -> PointSet {
        match (twisted, k) {
            (true, 0) => PointSet::new(),
            (true, k) => poly.dilate(k as u32).interior_points(),
            (false, k) => poly.dilate(k as u32).points().clone(),
        }
    };
    if twisted && q == 0 {
        return PointSet::new();
    }
    let full = part(q);
    if removed.is_empty() || q == 0 {
        return full;
    }
    let prev = part(q - 1);
    full.iter()
        .copied()
        .filter(|&x| removed.iter().all(|&pt| !prev.contains(&(x - pt))))
        .collect()
}

/// `qΔ \ ∪(P_i + (q−1)Δ)` or `(qΔ)^(1) \ ∪(P_i + ((q−1)Δ)^(1))`.
pub fn reduced_supports(
    poly: &LatticePolygon,
    plan: &RemovalPlan,
    twisted: bool,
    q: usize,
) -> Result<PointSet> {
    plan.verify(poly)?;
    Ok(module_support(poly, twisted, q, &plan.removed))
}

fn region(poly: &LatticePolygon, p: usize, q: usize, twisted: bool) -> PointSet {
    if twisted {
        let inner = poly.dilate(q as u32).interior_hull();
        if inner.is_empty() {
            return PointSet::new();
        }
        let outer: Hull = poly.dilate(p as u32);
        outer.minkowski(&inner).points().clone()
    } else {
        poly.dilate((p + q) as u32).points().clone()
    }
}

/// The complex computing an entry via `kind`, after removing `plan`.
pub fn complex_spec(poly: &LatticePolygon, kind: ComplexKind, plan: &RemovalPlan) -> Result<ComplexSpec> {
    let n = poly.n_points();
    let (p, q) = kind.position(n).ok_or(Error::Range {
        index: kind.index() as i64,
        lo: 1,
        hi: n as i64 - 3,
    })?;
    plan.verify(poly)?;
    let twisted = kind.twisted();
    let removed = plan.removed.clone();
    let wedge = poly.points().difference(&removed.iter().copied().collect());
    let lower = if q == 0 {
        PointSet::new()
    } else {
        module_support(poly, twisted, q - 1, &removed)
    };
    Ok(ComplexSpec {
        kind: Some(kind),
        p,
        q,
        incoming_zero: lower.is_empty(),
        incoming_injective: matches!(kind, ComplexKind::PrimalB(_)),
        middle: module_support(poly, twisted, q, &removed),
        upper: module_support(poly, twisted, q + 1, &removed),
        lower,
        wedge,
        region: region(poly, p, q, twisted),
        removed,
    })
}

/// Same as [`complex_spec`]; with an empty plan it is the unreduced complex.
pub fn reduced_complex_spec(
    poly: &LatticePolygon,
    plan: &RemovalPlan,
    kind: ComplexKind,
) -> Result<ComplexSpec> {
    complex_spec(poly, kind, plan)
}

/// Bidegrees of the middle term.
pub fn enumerate_bidegrees(spec: &ComplexSpec) -> Vec<LatticePoint> {
    if spec.middle.is_empty() {
        return Vec::new();
    }
    spec.region.as_slice().to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    #[test]
    fn regions() {
        let s2 = LatticePolygon::sigma(2);
        let spec = complex_spec(&s2, ComplexKind::PrimalB(1), &RemovalPlan::none()).unwrap();
        assert_eq!(enumerate_bidegrees(&spec).len(), 15);
        let s4 = LatticePolygon::sigma(4);
        let spec = complex_spec(&s4, ComplexKind::DualC(3), &RemovalPlan::none()).unwrap();
        let expected = LatticePolygon::sigma(9).points().translate(pt(1, 1));
        assert_eq!(spec.region, expected);
        assert_eq!(enumerate_bidegrees(&spec).len(), 55);
        let spec = complex_spec(&s2, ComplexKind::DualC(1), &RemovalPlan::none()).unwrap();
        assert!(enumerate_bidegrees(&spec).is_empty());
    }

    #[test]
    fn three_sigma_reduction() {
        let s3 = LatticePolygon::sigma(3);
        let plan = choose_removal(&s3);
        assert_eq!(reduced_supports(&s3, &plan, false, 2).unwrap().as_slice(), &[pt(2, 2)]);
        assert!(reduced_supports(&s3, &plan, false, 3).unwrap().is_empty());
        let q1 = reduced_supports(&s3, &plan, false, 1).unwrap();
        assert_eq!(q1, s3.points().difference(&plan.removed.iter().copied().collect()));
        assert_eq!(reduced_supports(&s3, &plan, true, 3).unwrap().as_slice(), &[pt(3, 3)]);
        let spec = complex_spec(&s3, ComplexKind::PrimalB(2), &plan).unwrap();
        assert_eq!(spec.wedge.len(), 7);
    }

    #[test]
    fn removal_order_is_irrelevant() {
        let s3 = LatticePolygon::sigma(3);
        let plan = choose_removal(&s3);
        let r = plan.removed.clone();
        for twisted in [false, true] {
            for q in 0..5 {
                let base = module_support(&s3, twisted, q, &r);
                let rev: Vec<LatticePoint> = r.iter().rev().copied().collect();
                assert_eq!(module_support(&s3, twisted, q, &rev), base);
            }
        }
    }
}
