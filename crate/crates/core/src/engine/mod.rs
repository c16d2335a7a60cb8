//! Betti tables from polygons: theorem shortcuts, choice of complex per
//! antidiagonal, bigraded and orbit-reduced rank computations.

pub mod checkpoint;
mod compute;
mod strategy;
mod table;
mod verify;

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

pub use checkpoint::{checkpoint_key, polygon_hash, Checkpoint, CheckpointRecord};
pub use compute::{
    compute_b, compute_c, compute_entry, compute_with_plan, dilated_symmetries, orbit_reduce,
    plan_symmetries, EntryResult,
};
pub use strategy::{best_route, plan_strategy, route_cost, Antidiagonal, Choice, RouteCost, Strategy};
pub use table::{BettiTable, Provenance};
pub use verify::{
    audit_table, entry_b, support_region_check, verify_kp1, verify_prune_monotonicity, AuditReport,
    Kp1Entry, Kp1Report, Kp1Verdict, PruneReport, SupportReport,
};

use crate::closed_forms::{antidiagonal_difference, eagon_northcott_table};
use crate::error::{Error, Result};
use crate::koszul::{choose_removal, RemovalPlan};
use crate::linalg::PrimeModulus;
use crate::polygon::LatticePolygon;

use compute::Session;

/// Whether to quotient by a regular sequence of monomials first.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RemovalMode {
    #[default]
    Auto,
    On,
    Off,
}

impl std::str::FromStr for RemovalMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(RemovalMode::Auto),
            "on" => Ok(RemovalMode::On),
            "off" => Ok(RemovalMode::Off),
            _ => Err(Error::Parse(format!("removal mode {s:?}, expected auto, on or off"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineOptions {
    pub prime: PrimeModulus,
    pub removal: RemovalMode,
    pub symmetry: bool,
    /// Recompute every entry through the direct complexes and compare.
    pub audit: bool,
    /// Keep per-bidegree values of computed entries.
    pub bigraded: bool,
    pub workers: usize,
    /// Per-matrix memory limit in bytes.
    pub memory_cap: usize,
    pub checkpoint: Option<PathBuf>,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            prime: PrimeModulus::DEFAULT,
            removal: RemovalMode::Auto,
            symmetry: true,
            audit: false,
            bigraded: false,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            memory_cap: usize::MAX,
            checkpoint: None,
        }
    }
}

impl EngineOptions {
    pub fn with_prime(prime: PrimeModulus) -> Self {
        EngineOptions {
            prime,
            ..Default::default()
        }
    }

    pub fn removal_plan(&self, poly: &LatticePolygon) -> RemovalPlan {
        match self.removal {
            RemovalMode::Off => RemovalPlan::none(),
            RemovalMode::On | RemovalMode::Auto => choose_removal(poly),
        }
    }
}

fn to_u64(v: num_bigint::BigInt, what: &str) -> Result<u64> {
    v.to_u64()
        .ok_or_else(|| Error::Inconsistent(format!("{what} would be {v}")))
}

/// The table of `Δ` over `𝔽_p`, every entry tagged with its origin.
pub fn betti_table(poly: &LatticePolygon, options: &EngineOptions) -> Result<BettiTable> {
    let n = poly.n_points();
    let len = n.saturating_sub(3);
    let table = if poly.interior_count() == 0 {
        let mut t = eagon_northcott_table(poly, options.prime)?;
        t.provenance_c = vec![Provenance::ZeroByShape; len];
        t
    } else {
        let strategy = plan_strategy(poly, options);
        let session = Session::with_plan(poly, options, strategy.removal.clone())?;
        let mut b: Vec<Option<(u64, Provenance)>> = vec![None; len];
        let mut c: Vec<Option<(u64, Provenance)>> = vec![None; len];
        for (&i, &tag) in &strategy.zero_b {
            b[i - 1] = Some((0, tag));
        }
        for (&i, &tag) in &strategy.zero_c {
            c[i - 1] = Some((0, tag));
        }
        let mut bigraded = BTreeMap::new();
        for ad in &strategy.antidiagonals {
            let d = antidiagonal_difference(poly, ad.l)?;
            let bl = ad.b_index.and_then(|i| b[i - 1]);
            let cl = ad.c_index.and_then(|i| c[i - 1]);
            // known side, expressed as (b value, c value) where one is unknown
            let (bv, cv) = match &ad.choice {
                Choice::Compute { kind, .. } => {
                    let res = session.run(*kind)?;
                    for (ab, v) in &res.bigraded {
                        bigraded.insert((*kind, *ab), *v);
                    }
                    if kind.is_b() {
                        (Some((res.value, Provenance::Computed)), cl)
                    } else {
                        (bl, Some((res.value, Provenance::Computed)))
                    }
                }
                Choice::Shortcut => (bl, cl),
            };
            let b_known = bv.map(|x| x.0).unwrap_or(0);
            let c_known = cv.map(|x| x.0).unwrap_or(0);
            let b_final = match (ad.b_index, bv) {
                (Some(_), None) => Some((
                    to_u64(num_bigint::BigInt::from(c_known) + &d, "crossfilled b")?,
                    Provenance::Crossfilled,
                )),
                (_, x) => x,
            };
            let c_final = match (ad.c_index, cv) {
                (Some(_), None) => Some((
                    to_u64(num_bigint::BigInt::from(b_known) - &d, "crossfilled c")?,
                    Provenance::Crossfilled,
                )),
                (_, x) => x,
            };
            if let Some(i) = ad.b_index {
                b[i - 1] = b_final;
            }
            if let Some(i) = ad.c_index {
                c[i - 1] = c_final;
            }
        }
        let unpack = |v: Vec<Option<(u64, Provenance)>>| -> (Vec<u64>, Vec<Provenance>) {
            v.into_iter().map(|e| e.expect("every entry is settled")).unzip()
        };
        let (b, provenance_b) = unpack(b);
        let (c, provenance_c) = unpack(c);
        BettiTable {
            n,
            b,
            c,
            prime: options.prime,
            provenance_b,
            provenance_c,
            bigraded,
        }
    };
    table.check_consistency(poly)?;
    if options.audit {
        let report = audit_table(poly, &table, options)?;
        if !report.mismatches.is_empty() {
            return Err(Error::Inconsistent(report.mismatches.join("; ")));
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> EngineOptions {
        EngineOptions {
            workers: 1,
            ..Default::default()
        }
    }

    #[test]
    fn small_tables() {
        let t = betti_table(&LatticePolygon::sigma(3), &opts()).unwrap();
        assert_eq!(t.b, vec![27, 105, 189, 189, 105, 27, 0]);
        assert_eq!(t.c, vec![1, 0, 0, 0, 0, 0, 0]);
        let t = betti_table(&LatticePolygon::upsilon(2), &opts()).unwrap();
        assert_eq!(t.b, vec![7, 8, 3, 0]);
        assert_eq!(t.c, vec![3, 8, 6, 0]);
        let t = betti_table(&LatticePolygon::sigma(1), &opts()).unwrap();
        assert!(t.is_empty());
        let t = betti_table(&LatticePolygon::upsilon(1), &opts()).unwrap();
        assert_eq!((t.b.clone(), t.c.clone()), (vec![0], vec![1]));
    }

    #[test]
    fn provenance_tags() {
        let t = betti_table(&LatticePolygon::sigma(2), &opts()).unwrap();
        assert!(t.provenance_b.iter().all(|&p| p == Provenance::EagonNorthcott));
        let t = betti_table(&LatticePolygon::sigma(3), &opts()).unwrap();
        assert_eq!(t.provenance_b[6], Provenance::ZeroByBn3);
        assert_eq!(t.provenance_c[6], Provenance::ZeroByHs);
        assert_eq!(t.provenance_c[0], Provenance::Crossfilled);
    }

    #[test]
    fn audit_passes() {
        let o = EngineOptions { audit: true, ..opts() };
        for poly in [LatticePolygon::sigma(3), LatticePolygon::upsilon(2), LatticePolygon::sigma(2)] {
            betti_table(&poly, &o).unwrap();
        }
    }
}
