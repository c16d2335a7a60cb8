use std::collections::BTreeMap;

use super::{EngineOptions, Provenance};
use crate::koszul::{basis_dimension_polynomial, complex_spec, enumerate_bidegrees, ComplexKind, RemovalPlan};
use crate::polygon::LatticePolygon;

/// Size estimate of computing an entry through one complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RouteCost {
    /// Smaller side of the largest matrix to be ranked.
    pub peak: u64,
    /// Summed smaller sides over all bidegrees.
    pub total: u64,
}

/// What happens on the antidiagonal `(b_ℓ, c_{N−1−ℓ})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Choice {
    /// Both entries follow from theorems and the antidiagonal identity.
    Shortcut,
    Compute { kind: ComplexKind, cost: RouteCost },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Antidiagonal {
    pub l: usize,
    /// `ℓ` if `b_ℓ` is a table entry.
    pub b_index: Option<usize>,
    /// `N−1−ℓ` if `c_{N−1−ℓ}` is a table entry.
    pub c_index: Option<usize>,
    pub choice: Choice,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    pub n: usize,
    /// Empty interior: the whole table is known.
    pub eagon_northcott: bool,
    pub antidiagonals: Vec<Antidiagonal>,
    /// Entries known to vanish, by index.
    pub zero_b: BTreeMap<usize, Provenance>,
    pub zero_c: BTreeMap<usize, Provenance>,
    pub removal: RemovalPlan,
    pub use_symmetry: bool,
    pub estimates: Vec<(ComplexKind, RouteCost)>,
}

impl Strategy {
    pub fn computed_kinds(&self) -> Vec<ComplexKind> {
        self.antidiagonals
            .iter()
            .filter_map(|a| match a.choice {
                Choice::Compute { kind, .. } => Some(kind),
                Choice::Shortcut => None,
            })
            .collect()
    }
}

/// Estimated work for one route, from the dimension generating functions.
pub fn route_cost(poly: &LatticePolygon, kind: ComplexKind, plan: &RemovalPlan) -> Option<RouteCost> {
    let spec = complex_spec(poly, kind, plan).ok()?;
    let p = spec.p;
    let mid = basis_dimension_polynomial(&spec.wedge, &spec.middle, p);
    let need_out = p >= 1 && !spec.upper.is_empty();
    let up = need_out.then(|| basis_dimension_polynomial(&spec.wedge, &spec.upper, p - 1));
    let need_in = !spec.incoming_zero && !spec.incoming_injective;
    let low = need_in.then(|| basis_dimension_polynomial(&spec.wedge, &spec.lower, p + 1));
    let mut cost = RouteCost { peak: 0, total: 0 };
    for ab in enumerate_bidegrees(&spec) {
        let cols = mid.coeff(p, ab);
        if cols == 0 {
            continue;
        }
        let mut blocks = Vec::with_capacity(2);
        if let Some(f) = &up {
            blocks.push(cols.min(f.coeff(p - 1, ab)));
        }
        if let Some(f) = &low {
            blocks.push(cols.min(f.coeff(p + 1, ab)));
        }
        for s in blocks {
            cost.peak = cost.peak.max(s);
            cost.total += s;
        }
    }
    Some(cost)
}

/// Cheapest complex for whichever side of antidiagonal `ℓ` is in range;
/// ties go to the `c` side.
pub fn best_route(poly: &LatticePolygon, l: usize, plan: &RemovalPlan) -> Option<(ComplexKind, RouteCost)> {
    let n = poly.n_points();
    let mut cands = Vec::new();
    let k = (n - 1).saturating_sub(l);
    if l < n && (1..=n.saturating_sub(3)).contains(&k) {
        cands.push(ComplexKind::DualC(k));
        cands.push(ComplexKind::PrimalC(k));
    }
    if (1..=n.saturating_sub(3)).contains(&l) {
        cands.push(ComplexKind::PrimalB(l));
        cands.push(ComplexKind::DualB(l));
    }
    let mut best: Option<(ComplexKind, RouteCost)> = None;
    for kind in cands {
        if let Some(cost) = route_cost(poly, kind, plan) {
            if best.is_none_or(|(_, b)| cost < b) {
                best = Some((kind, cost));
            }
        }
    }
    best
}

/// Theorem zeros: Hering–Schenck on the `c` row, `b_{N−3}`.
pub(crate) fn theorem_zeros(poly: &LatticePolygon) -> (BTreeMap<usize, Provenance>, BTreeMap<usize, Provenance>) {
    let n = poly.n_points();
    let len = n.saturating_sub(3);
    let mut zb = BTreeMap::new();
    let mut zc = BTreeMap::new();
    if poly.interior_count() == 0 {
        for l in 1..=len {
            zc.insert(l, Provenance::ZeroByShape);
        }
        return (zb, zc);
    }
    if len >= 1 {
        zb.insert(len, Provenance::ZeroByBn3);
    }
    let from = n + 1 - poly.boundary_count();
    for l in from.max(1)..=len {
        zc.insert(l, Provenance::ZeroByHs);
    }
    (zb, zc)
}

pub fn plan_strategy(poly: &LatticePolygon, options: &EngineOptions) -> Strategy {
    let n = poly.n_points();
    let len = n.saturating_sub(3);
    let removal = options.removal_plan(poly);
    let (zero_b, zero_c) = theorem_zeros(poly);
    let eagon_northcott = poly.interior_count() == 0;
    let mut antidiagonals = Vec::new();
    let mut estimates = Vec::new();
    for l in 1..=n.saturating_sub(2) {
        let b_index = (l <= len).then_some(l);
        let c_index = (n - 1 - l >= 1 && n - 1 - l <= len).then_some(n - 1 - l);
        if b_index.is_none() && c_index.is_none() {
            continue;
        }
        let settled = |ix: Option<usize>, zeros: &BTreeMap<usize, Provenance>| ix.is_none_or(|i| zeros.contains_key(&i));
        let choice = if eagon_northcott || settled(b_index, &zero_b) || settled(c_index, &zero_c) {
            Choice::Shortcut
        } else {
            match best_route(poly, l, &removal) {
                Some((kind, cost)) => {
                    estimates.push((kind, cost));
                    Choice::Compute { kind, cost }
                }
                None => Choice::Shortcut,
            }
        };
        antidiagonals.push(Antidiagonal {
            l,
            b_index,
            c_index,
            choice,
        });
    }
    Strategy {
        n,
        eagon_northcott,
        antidiagonals,
        zero_b,
        zero_c,
        removal,
        use_symmetry: options.symmetry,
        estimates,
    }
}
