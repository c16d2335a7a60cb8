use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::closed_forms::antidiagonal_difference;
use crate::error::{Error, Result};
use crate::koszul::ComplexKind;
use crate::linalg::PrimeModulus;
use crate::polygon::{LatticePoint, LatticePolygon};

/// How an entry of a table was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Computed,
    /// From the antidiagonal identity and the computed or known partner.
    Crossfilled,
    /// The quadratic strand of a polygon without interior points.
    ZeroByShape,
    /// `c_ℓ = 0` for `ℓ ≥ N + 1 − |∂Δ ∩ ℤ²|`.
    ZeroByHs,
    /// `b_{N−3} = 0` once the interior is nonempty.
    ZeroByBn3,
    EagonNorthcott,
}

impl Provenance {
    pub fn name(&self) -> &'static str {
        match self {
            Provenance::Computed => "computed",
            Provenance::Crossfilled => "crossfilled",
            Provenance::ZeroByShape => "zero_by_shape",
            Provenance::ZeroByHs => "zero_by_hs",
            Provenance::ZeroByBn3 => "zero_by_bn3",
            Provenance::EagonNorthcott => "eagon_northcott",
        }
    }

    pub fn parse(s: &str) -> Option<Provenance> {
        [
            Provenance::Computed,
            Provenance::Crossfilled,
            Provenance::ZeroByShape,
            Provenance::ZeroByHs,
            Provenance::ZeroByBn3,
            Provenance::EagonNorthcott,
        ]
        .into_iter()
        .find(|p| p.name() == s)
    }

    /// True for tags that come from a theorem, without any modular rank.
    pub fn is_theorem(&self) -> bool {
        !matches!(self, Provenance::Computed | Provenance::Crossfilled)
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Rows `q = 1, 2` of a graded Betti table; `b[ℓ−1] = b_ℓ`, `c[ℓ−1] = c_ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub n: usize,
    pub b: Vec<u64>,
    pub c: Vec<u64>,
    pub prime: PrimeModulus,
    pub provenance_b: Vec<Provenance>,
    pub provenance_c: Vec<Provenance>,
    /// Per-bidegree cohomology of the entries that were computed, keyed by
    /// the complex used.
    pub bigraded: BTreeMap<(ComplexKind, LatticePoint), u64>,
}

impl BettiTable {
    /// Number of columns carrying `b` and `c` entries, `N − 3`.
    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    /// `b_ℓ`, zero outside `1..=N−3`.
    pub fn b(&self, l: usize) -> u64 {
        if l == 0 {
            return 0;
        }
        self.b.get(l - 1).copied().unwrap_or(0)
    }

    pub fn c(&self, l: usize) -> u64 {
        if l == 0 {
            return 0;
        }
        self.c.get(l - 1).copied().unwrap_or(0)
    }

    /// `c_{N−1−ℓ}`, the antidiagonal partner of `b_ℓ`.
    pub fn partner_of_b(&self, l: usize) -> u64 {
        if self.n > l { self.c(self.n - 1 - l) } else { 0 }
    }

    pub fn partner_of_c(&self, l: usize) -> u64 {
        if self.n > l { self.b(self.n - 1 - l) } else { 0 }
    }

    /// Entries that depend on a modular rank: nonzero with a nonzero
    /// antidiagonal partner.
    pub fn starred_b(&self, l: usize) -> bool {
        self.b(l) != 0 && self.partner_of_b(l) != 0
    }

    pub fn starred_c(&self, l: usize) -> bool {
        self.c(l) != 0 && self.partner_of_c(l) != 0
    }

    /// Entry in row `q`, column `p` of the printed layout.
    pub fn entry(&self, p: usize, q: usize) -> u64 {
        match q {
            0 => (p == 0) as u64,
            1 => self.b(p),
            2 if p + 2 <= self.n => self.c(self.n - 2 - p),
            _ => 0,
        }
    }

    /// Bigraded values of one computed entry.
    pub fn bigraded_entry(&self, kind: ComplexKind) -> BTreeMap<LatticePoint, u64> {
        self.bigraded
            .range((kind, LatticePoint::new(i64::MIN, i64::MIN))..)
            .take_while(|((k, _), _)| *k == kind)
            .map(|((_, ab), v)| (*ab, *v))
            .collect()
    }

    /// Re-checks the antidiagonal identity and `c₁ = N_{Δ^(1)}`.
    pub fn check_consistency(&self, poly: &LatticePolygon) -> Result<()> {
        let n = self.n;
        if n != poly.n_points() || self.b.len() != n.saturating_sub(3) || self.c.len() != self.b.len() {
            return Err(Error::Inconsistent("table shape does not match the polygon".into()));
        }
        for l in 1..=n.saturating_sub(2) {
            let lhs = self.b(l) as i128 - self.c(n - 1 - l) as i128;
            let rhs = antidiagonal_difference(poly, l)?;
            if num_bigint::BigInt::from(lhs) != rhs {
                return Err(Error::Inconsistent(format!(
                    "antidiagonal {l}: b - c = {lhs}, expected {rhs}"
                )));
            }
        }
        if n > 3 && self.c(1) != poly.interior_count() as u64 {
            return Err(Error::Inconsistent(format!(
                "c_1 = {}, expected {}",
                self.c(1),
                poly.interior_count()
            )));
        }
        Ok(())
    }
}
