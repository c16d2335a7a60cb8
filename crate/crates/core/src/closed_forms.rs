//! Closed-form entries, bounds and predictors computed from polygon
//! combinatorics alone.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::engine::{BettiTable, Provenance};
use crate::error::{Error, Result};
use crate::koszul::basis_dimension_polynomial;
use crate::linalg::PrimeModulus;
use crate::polygon::{classify, lattice_width, translate_count, ClassTag, LatticePoint, LatticePolygon};

/// `C(n, k)`, zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Strand {
    /// Row 1, the entries `b_ℓ`.
    Linear,
    /// Row 2, the entries `c_ℓ`.
    Quadratic,
}

impl fmt::Display for Strand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strand::Linear => "b",
            Strand::Quadratic => "c",
        })
    }
}

/// Where a predicted value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    EasyEntries,
    ThirdEntry,
    EagonNorthcott,
    HeringSchenck,
    ScrollBound,
    TranslateBound,
    Kp1Conjecture,
    VeroneseConjecture,
}

impl Source {
    pub fn is_conjectural(&self) -> bool {
        matches!(self, Source::Kp1Conjecture | Source::VeroneseConjecture)
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Source::EasyEntries => "theorem: easy entries",
            Source::ThirdEntry => "theorem: b_{N-4} and c_3",
            Source::EagonNorthcott => "theorem: Eagon-Northcott",
            Source::HeringSchenck => "theorem: Hering-Schenck",
            Source::ScrollBound => "theorem: scroll bound",
            Source::TranslateBound => "theorem: translate bound",
            Source::Kp1Conjecture => "conjecture: linear strand length",
            Source::VeroneseConjecture => "conjecture: Veronese extremes",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryPrediction {
    pub index: usize,
    pub strand: Strand,
    /// `None` when only nonvanishing (or a bound) is known.
    pub value: Option<BigInt>,
    pub source: Source,
}

impl EntryPrediction {
    fn new(strand: Strand, index: usize, value: impl Into<BigInt>, source: Source) -> Self {
        EntryPrediction {
            index,
            strand,
            value: Some(value.into()),
            source,
        }
    }
}

fn n_of(poly: &LatticePolygon) -> i64 {
    poly.n_points() as i64
}

/// `b_ℓ − c_{N−1−ℓ} = ℓ·C(N−1, ℓ+1) − C(N−3, ℓ−1)·2vol(Δ)`.
pub fn antidiagonal_difference(poly: &LatticePolygon, l: usize) -> Result<BigInt> {
    let n = n_of(poly);
    let l = l as i64;
    if l < 1 || l > n - 2 {
        return Err(Error::Range { index: l, lo: 1, hi: n - 2 });
    }
    Ok(BigInt::from(l) * binomial(n - 1, l + 1) - binomial(n - 3, l - 1) * BigInt::from(poly.area2()))
}

/// Bigraded refinement: `Σ_j (−1)^{j+1} dim(∧^{ℓ+1−j}V_Δ ⊗ V_{jΔ})_{(a,b)}`
/// for every bidegree where it is nonzero.
pub fn antidiagonal_differences_bigraded(
    poly: &LatticePolygon,
    l: usize,
) -> Result<BTreeMap<LatticePoint, i64>> {
    let n = poly.n_points();
    if l < 1 || l + 2 > n {
        return Err(Error::Range {
            index: l as i64,
            lo: 1,
            hi: n as i64 - 2,
        });
    }
    let mut out: BTreeMap<LatticePoint, i64> = BTreeMap::new();
    for j in 0..=l + 1 {
        let module = poly.dilate(j as u32).points().clone();
        let f = basis_dimension_polynomial(poly.points(), &module, l + 1 - j);
        let sign = if j % 2 == 0 { -1 } else { 1 };
        for (ab, v) in f.terms(l + 1 - j) {
            *out.entry(ab).or_insert(0) += sign * v as i64;
        }
    }
    out.retain(|_, v| *v != 0);
    Ok(out)
}

pub fn antidiagonal_difference_bigraded(
    poly: &LatticePolygon,
    l: usize,
    ab: LatticePoint,
) -> Result<i64> {
    Ok(antidiagonal_differences_bigraded(poly, l)?
        .get(&ab)
        .copied()
        .unwrap_or(0))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeringSchenck {
    /// `c_ℓ = 0` for every `ℓ ≥ zero_from`.
    pub zero_from: usize,
    /// Largest index with `c_ℓ ≠ 0`: `N − |∂Δ ∩ ℤ²|`.
    pub first_nonzero: usize,
    /// The guaranteed zeros inside `1..=N−3`.
    pub zero_indices: Vec<usize>,
}

pub fn hering_schenck_zero_region(poly: &LatticePolygon) -> Result<HeringSchenck> {
    if poly.interior_count() == 0 {
        return Err(Error::EmptyInterior);
    }
    let n = poly.n_points();
    let zero_from = n + 1 - poly.boundary_count();
    Ok(HeringSchenck {
        zero_from,
        first_nonzero: n - poly.boundary_count(),
        zero_indices: (zero_from.max(1)..=n.saturating_sub(3)).collect(),
    })
}

/// `b_1, b_2, b_{N−3}, c_1, c_2, c_{N−3}`; entries outside `1..=N−3` are
/// left out.
pub fn six_easy_entries(poly: &LatticePolygon) -> Vec<EntryPrediction> {
    let n = n_of(poly);
    let ni = poly.interior_count() as i64;
    let area2 = BigInt::from(poly.area2());
    let dim_int = poly.interior_hull().dimension();
    let boundary = poly.boundary_count();
    let c_last: i64 = match (boundary, dim_int) {
        (b, _) if b > 3 => 0,
        (_, 2) => 1,
        _ => n - 3,
    };
    let c2 = if ni > 0 { (n - 3) * (ni - 1) } else { 0 };
    let b_last = if ni > 0 { 0 } else { n - 3 };
    let b1 = binomial(n - 1, 2) - &area2;
    let b2 = BigInt::from(2) * binomial(n - 1, 3) - BigInt::from(n - 3) * &area2 + c_last;
    let s = Source::EasyEntries;
    let all = [
        EntryPrediction::new(Strand::Linear, 1, b1, s),
        EntryPrediction::new(Strand::Linear, 2, b2, s),
        EntryPrediction::new(Strand::Linear, (n - 3).max(0) as usize, b_last, s),
        EntryPrediction::new(Strand::Quadratic, 1, ni, s),
        EntryPrediction::new(Strand::Quadratic, 2, c2, s),
        EntryPrediction::new(Strand::Quadratic, (n - 3).max(0) as usize, c_last, s),
    ];
    let mut out: Vec<EntryPrediction> = Vec::new();
    for e in all {
        let in_range = e.index >= 1 && e.index as i64 <= n - 3;
        if in_range && !out.iter().any(|o| o.strand == e.strand && o.index == e.index) {
            out.push(e);
        }
    }
    out
}

/// `2·B_Δ`, an integer in every case.
fn twice_b_delta(poly: &LatticePolygon) -> i64 {
    let n = n_of(poly);
    match poly.interior_hull().dimension() {
        -1 => 2 * (n - 2),
        0 => n - 1,
        1 => 2,
        _ if classify(poly).tag == ClassTag::UpsilonD(2) => 2,
        _ => 0,
    }
}

/// `b_{N−4} = (N−4)·B_Δ` and `c_3`.
pub fn entry_bn4(poly: &LatticePolygon) -> Result<(EntryPrediction, EntryPrediction)> {
    let n = n_of(poly);
    if n < 4 {
        return Err(Error::Range { index: n, lo: 4, hi: i64::MAX });
    }
    let bd2 = BigInt::from(twice_b_delta(poly));
    let two = BigInt::from(2);
    let b = BigInt::from(n - 4) * &bd2;
    debug_assert!((&b % &two).is_zero());
    let c = BigInt::from(n - 4)
        * (BigInt::from(n - 3) * BigInt::from(poly.area2()) - BigInt::from((n - 1) * (n - 2)) + &bd2);
    debug_assert!((&c % &two).is_zero());
    Ok((
        EntryPrediction::new(Strand::Linear, (n - 4) as usize, b / &two, Source::ThirdEntry),
        EntryPrediction::new(Strand::Quadratic, 3, c / &two, Source::ThirdEntry),
    ))
}

/// The whole table when `Δ^(1) = ∅`: `b_p = p·C(N−2, p+1)`, `c = 0`.
pub fn eagon_northcott_table(poly: &LatticePolygon, prime: PrimeModulus) -> Result<BettiTable> {
    if poly.interior_count() > 0 {
        return Err(Error::NonEmptyInterior);
    }
    let n = poly.n_points();
    let len = n.saturating_sub(3);
    let b = (1..=len)
        .map(|p| {
            let v = BigInt::from(p) * binomial(n as i64 - 2, p as i64 + 1);
            u64::try_from(v).expect("entry fits in 64 bits")
        })
        .collect();
    Ok(BettiTable {
        n,
        b,
        c: vec![0; len],
        prime,
        provenance_b: vec![Provenance::EagonNorthcott; len],
        provenance_c: vec![Provenance::EagonNorthcott; len],
        bigraded: BTreeMap::new(),
    })
}

fn reject_pathological(tag: ClassTag) -> Result<()> {
    match tag.pathological_name() {
        Some(name) => Err(Error::Pathological(name)),
        None => Ok(()),
    }
}

/// Largest column where the ambient scroll forces `b ≠ 0`.
pub fn scroll_strand_lower_bound(poly: &LatticePolygon) -> Result<usize> {
    let tag = classify(poly).tag;
    reject_pathological(tag)?;
    let n = n_of(poly);
    let lw = lattice_width(poly).0;
    let extra = if tag.is_exceptional() { 1 } else { 2 };
    Ok((n - lw - extra).max(0) as usize)
}

/// Predicted `min{ℓ : b_{N−ℓ} ≠ 0}`.
pub fn kp1_predicted_first_zero(poly: &LatticePolygon) -> Result<usize> {
    let tag = classify(poly).tag;
    reject_pathological(tag)?;
    let lw = lattice_width(poly).0 as usize;
    Ok(if tag.is_exceptional() { lw + 1 } else { lw + 2 })
}

/// `(b_{d(d+1)/2}, c_g)` predicted for `dΣ`; `c_g` needs `d ≥ 3`.
pub fn veronese_predictions(d: u32) -> Result<(BigInt, Option<BigInt>)> {
    if d < 2 {
        return Err(Error::Range { index: d as i64, lo: 2, hi: i64::MAX });
    }
    let d = d as i64;
    let b_last = BigInt::from(d * d * d * (d * d - 1)) / 8;
    let c_first = (d >= 3).then(|| {
        let ni = (d - 1) * (d - 2) / 2;
        binomial(ni + 8, 9)
    });
    Ok((b_last, c_first))
}

/// `C(N_{Δ^(1)} − 1 + t, N_{Δ^(1)} − 1)` with `t` the number of nonzero
/// translates of `Δ^(1)` inside `Δ`.
pub fn cg_lower_bound(poly: &LatticePolygon) -> Result<BigInt> {
    let inner = poly.interior_hull();
    if inner.is_empty() {
        return Err(Error::EmptyInterior);
    }
    let t = translate_count(&inner, poly)? as i64;
    let ni = inner.n_points() as i64;
    Ok(binomial(ni - 1 + t, ni - 1))
}

/// `Δ^(1) = ∅`, equivalently `2·vol(Δ) = N − 2`.
pub fn minimal_degree_predicate(poly: &LatticePolygon) -> bool {
    let empty = poly.interior_count() == 0;
    debug_assert_eq!(empty, poly.area2() as usize + 2 == poly.n_points());
    empty
}

/// All closed-form entries (theorems) followed by the conjectural
/// predictions, for reporting.
pub fn all_predictions(poly: &LatticePolygon) -> Vec<EntryPrediction> {
    let n = poly.n_points();
    let mut out = Vec::new();
    if poly.interior_count() == 0 {
        for p in 1..=n.saturating_sub(3) {
            let v = BigInt::from(p) * binomial(n as i64 - 2, p as i64 + 1);
            out.push(EntryPrediction::new(Strand::Linear, p, v, Source::EagonNorthcott));
        }
        return out;
    }
    let mut seen = std::collections::HashSet::new();
    let mut push = |out: &mut Vec<EntryPrediction>, e: EntryPrediction| {
        if e.index >= 1 && e.index + 3 <= n && seen.insert((e.strand, e.index, e.value.is_some())) {
            out.push(e);
        }
    };
    for e in six_easy_entries(poly) {
        push(&mut out, e);
    }
    if let Ok((b, c)) = entry_bn4(poly) {
        push(&mut out, b);
        push(&mut out, c);
    }
    if let Ok(hs) = hering_schenck_zero_region(poly) {
        for &l in &hs.zero_indices {
            push(&mut out, EntryPrediction::new(Strand::Quadratic, l, 0, Source::HeringSchenck));
        }
        push(
            &mut out,
            EntryPrediction {
                index: hs.first_nonzero,
                strand: Strand::Quadratic,
                value: None,
                source: Source::HeringSchenck,
            },
        );
    }
    if let Ok(col) = scroll_strand_lower_bound(poly) {
        push(
            &mut out,
            EntryPrediction {
                index: col,
                strand: Strand::Linear,
                value: None,
                source: Source::ScrollBound,
            },
        );
    }
    if let Ok(first_zero) = kp1_predicted_first_zero(poly) {
        // b_{N−ℓ} = 0 for ℓ < first_zero
        for l in 1..first_zero {
            if n > l {
                push(&mut out, EntryPrediction::new(Strand::Linear, n - l, 0, Source::Kp1Conjecture));
            }
        }
    }
    if let ClassTag::SigmaMultiple(d) = classify(poly).tag {
        if let Ok((b_last, c_first)) = veronese_predictions(d) {
            let bi = (d * (d + 1) / 2) as usize;
            push(&mut out, EntryPrediction::new(Strand::Linear, bi, b_last, Source::VeroneseConjecture));
            if let Some(c) = c_first {
                let g = ((d - 1) * (d - 2) / 2) as usize;
                push(&mut out, EntryPrediction::new(Strand::Quadratic, g, c, Source::VeroneseConjecture));
            }
        }
    }
    out
}

/// Nonnegative value of a prediction as `u64`, if known.
pub fn prediction_u64(e: &EntryPrediction) -> Option<u64> {
    e.value
        .as_ref()
        .filter(|v| !v.is_negative())
        .and_then(|v| u64::try_from(v.clone()).ok())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn find(v: &[EntryPrediction], s: Strand, i: usize) -> BigInt {
        v.iter()
            .find(|e| e.strand == s && e.index == i)
            .and_then(|e| e.value.clone())
            .unwrap()
    }

    #[test]
    fn antidiagonal_examples() {
        assert_eq!(antidiagonal_difference(&LatticePolygon::sigma(2), 1).unwrap(), 6.into());
        assert_eq!(
            antidiagonal_difference(&LatticePolygon::upsilon_multiple(2), 4).unwrap(),
            84.into()
        );
        assert_eq!(antidiagonal_difference(&LatticePolygon::sigma(3), 8).unwrap(), (-1).into());
        assert!(antidiagonal_difference(&LatticePolygon::sigma(3), 9).is_err());
    }

    #[test]
    fn bigraded_sums_to_total() {
        for poly in [LatticePolygon::sigma(2), LatticePolygon::upsilon(2), LatticePolygon::sigma(3)] {
            for l in 1..=poly.n_points() - 2 {
                let total: i64 = antidiagonal_differences_bigraded(&poly, l).unwrap().values().sum();
                assert_eq!(BigInt::from(total), antidiagonal_difference(&poly, l).unwrap());
            }
        }
        let s2 = LatticePolygon::sigma(2);
        assert_eq!(antidiagonal_difference_bigraded(&s2, 1, LatticePoint::new(9, 9)).unwrap(), 0);
    }

    #[test]
    fn hering_schenck_examples() {
        let hs = hering_schenck_zero_region(&LatticePolygon::sigma(4)).unwrap();
        assert_eq!((hs.zero_from, hs.first_nonzero), (4, 3));
        assert_eq!(hering_schenck_zero_region(&LatticePolygon::upsilon_multiple(2)).unwrap().first_nonzero, 4);
        assert_eq!(hering_schenck_zero_region(&LatticePolygon::sigma(3)).unwrap().first_nonzero, 1);
        assert_eq!(hering_schenck_zero_region(&LatticePolygon::sigma(2)), Err(Error::EmptyInterior));
    }

    #[test]
    fn easy_entries() {
        let e = six_easy_entries(&LatticePolygon::sigma(3));
        assert_eq!(find(&e, Strand::Linear, 1), 27.into());
        assert_eq!(find(&e, Strand::Quadratic, 7), 0.into());
        assert_eq!(find(&e, Strand::Quadratic, 1), 1.into());
        let e = six_easy_entries(&LatticePolygon::upsilon(1));
        assert_eq!(find(&e, Strand::Quadratic, 1), 1.into());
        let e = six_easy_entries(&LatticePolygon::sigma(4));
        assert_eq!(find(&e, Strand::Linear, 2), 536.into());
        assert_eq!(find(&e, Strand::Quadratic, 2), 24.into());
    }

    #[test]
    fn third_entries() {
        let (b, _) = entry_bn4(&LatticePolygon::sigma(3)).unwrap();
        assert_eq!((b.index, b.value.unwrap()), (6, 27.into()));
        let (b, c) = entry_bn4(&LatticePolygon::upsilon(2)).unwrap();
        assert_eq!((b.index, b.value.unwrap()), (3, 3.into()));
        assert_eq!(c.value.unwrap(), 6.into());
        let (_, c) = entry_bn4(&LatticePolygon::sigma(4)).unwrap();
        assert_eq!(c.value.unwrap(), 55.into());
        assert!(entry_bn4(&LatticePolygon::sigma(1)).is_err());
    }

    #[test]
    fn eagon_northcott() {
        let t = eagon_northcott_table(&LatticePolygon::sigma(2), PrimeModulus::DEFAULT).unwrap();
        assert_eq!(t.b, vec![6, 8, 3]);
        let prism = LatticePolygon::lawrence_prism(2, 1).unwrap();
        assert_eq!(prism.n_points(), 5);
        let t = eagon_northcott_table(&prism, PrimeModulus::DEFAULT).unwrap();
        assert_eq!(t.b, vec![3, 2]);
        assert!(eagon_northcott_table(&LatticePolygon::sigma(3), PrimeModulus::DEFAULT).is_err());
    }

    #[test]
    fn strand_bounds() {
        assert_eq!(scroll_strand_lower_bound(&LatticePolygon::upsilon_multiple(2)), Ok(5));
        assert_eq!(scroll_strand_lower_bound(&LatticePolygon::sigma(4)), Ok(10));
        let sq = LatticePolygon::from_coords(&[(0, 0), (1, 0), (0, 1), (1, 1)]).unwrap();
        assert_eq!(scroll_strand_lower_bound(&sq), Ok(1));
        assert_eq!(scroll_strand_lower_bound(&LatticePolygon::sigma(1)), Err(Error::Pathological("Sigma")));
        assert_eq!(kp1_predicted_first_zero(&LatticePolygon::sigma(3)), Ok(4));
        assert_eq!(kp1_predicted_first_zero(&LatticePolygon::upsilon(3)), Ok(5));
        assert_eq!(kp1_predicted_first_zero(&LatticePolygon::upsilon_multiple(2)), Ok(5));
        assert!(kp1_predicted_first_zero(&LatticePolygon::upsilon(1)).is_err());
    }

    #[test]
    fn veronese() {
        assert_eq!(veronese_predictions(2).unwrap(), (3.into(), None));
        assert_eq!(veronese_predictions(4).unwrap(), (120.into(), Some(55.into())));
        assert_eq!(veronese_predictions(5).unwrap(), (375.into(), Some(2002.into())));
        assert!(veronese_predictions(1).is_err());
    }

    #[test]
    fn translate_bounds() {
        assert_eq!(cg_lower_bound(&LatticePolygon::sigma(4)).unwrap(), 55.into());
        assert_eq!(cg_lower_bound(&LatticePolygon::sigma(3)).unwrap(), 1.into());
        assert!(cg_lower_bound(&LatticePolygon::upsilon_multiple(2)).unwrap() <= 20.into());
        assert!(minimal_degree_predicate(&LatticePolygon::sigma(2)));
        assert!(minimal_degree_predicate(&LatticePolygon::lawrence_prism(3, 1).unwrap()));
        assert!(!minimal_degree_predicate(&LatticePolygon::sigma(3)));
    }
}
