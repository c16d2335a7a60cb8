//! Shared fixtures: a polygon corpus grown from the standard triangle and
//! the reference tables.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use toric_betti::closed_forms::*;
use toric_betti::engine::BettiTable;
use toric_betti::polygon::{canonical_form, AffineUnimodularMap, Hull, LatticePoint, LatticePolygon};

/// One representative per equivalence class with at most `max_n` lattice
/// points, in canonical position, ordered by point count then key.
pub fn enumerate_classes(max_n: usize) -> Vec<LatticePolygon> {
    let sigma = LatticePolygon::sigma(1);
    let mut seen: BTreeMap<(usize, Vec<LatticePoint>), LatticePolygon> = BTreeMap::new();
    let mut frontier = vec![canonical(&sigma)];
    seen.insert((3, canonical_form(&sigma).0), frontier[0].clone());
    while let Some(poly) = frontier.pop() {
        let (lo, hi) = poly.points().bounding_box().unwrap();
        for y in lo.y - 2..=hi.y + 2 {
            for x in lo.x - 2..=hi.x + 2 {
                let pt = LatticePoint::new(x, y);
                if poly.contains(&pt) {
                    continue;
                }
                let hull = Hull::of(poly.points().iter().copied().chain([pt]));
                if hull.n_points() > max_n {
                    continue;
                }
                let bigger = hull.into_polygon().unwrap();
                let key = (bigger.n_points(), canonical_form(&bigger).0);
                if let std::collections::btree_map::Entry::Vacant(e) = seen.entry(key) {
                    let rep = canonical(&bigger);
                    e.insert(rep.clone());
                    frontier.push(rep);
                }
            }
        }
    }
    seen.into_values().collect()
}

fn canonical(poly: &LatticePolygon) -> LatticePolygon {
    LatticePolygon::from_vertices(&canonical_form(poly).0).unwrap()
}

/// A fixed list of unimodular maps used to place classes in other
/// positions.
pub fn scramblers() -> Vec<AffineUnimodularMap> {
    let mats = [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[1, 1], [0, 1]],
        [[2, 1], [1, 1]],
        [[-1, 0], [3, -1]],
        [[1, -2], [-1, 3]],
        [[0, -1], [1, 2]],
    ];
    let shifts = [(0, 0), (3, -2), (-5, 1), (2, 7), (-1, -4), (6, 0), (0, -3)];
    mats.iter()
        .zip(shifts)
        .map(|(m, (x, y))| AffineUnimodularMap::new(*m, LatticePoint::new(x, y)).unwrap())
        .collect()
}

/// Every class with at most `max_n` points, repeated in scrambled
/// positions until there are at least `min_len` polygons.
pub fn corpus(max_n: usize, min_len: usize) -> Vec<LatticePolygon> {
    let classes = enumerate_classes(max_n);
    let maps = scramblers();
    let mut out = Vec::new();
    let mut round = 0;
    while out.len() < min_len.max(classes.len()) {
        for c in &classes {
            out.push(maps[round % maps.len()].image(c));
        }
        round += 1;
    }
    out
}

pub fn class_keys(polys: &[LatticePolygon]) -> BTreeSet<Vec<LatticePoint>> {
    polys.iter().map(|p| canonical_form(p).0).collect()
}

pub struct Reference {
    pub name: &'static str,
    pub poly: LatticePolygon,
    pub b: Vec<u64>,
    pub c: Vec<u64>,
}

/// Published tables, `c` in increasing index.
pub fn published_tables() -> Vec<Reference> {
    let r = |name, poly, b: &[u64], c: &[u64]| Reference {
        name,
        poly,
        b: b.to_vec(),
        c: c.to_vec(),
    };
    vec![
        r("Sigma", LatticePolygon::sigma(1), &[], &[]),
        r("2*Sigma", LatticePolygon::sigma(2), &[6, 8, 3], &[0, 0, 0]),
        r(
            "3*Sigma",
            LatticePolygon::sigma(3),
            &[27, 105, 189, 189, 105, 27, 0],
            &[1, 0, 0, 0, 0, 0, 0],
        ),
        r("Upsilon", LatticePolygon::upsilon(1), &[0], &[1]),
        r("Upsilon_2", LatticePolygon::upsilon(2), &[7, 8, 3, 0], &[3, 8, 6, 0]),
        r(
            "2*Upsilon",
            LatticePolygon::upsilon_multiple(2),
            &[24, 84, 126, 84, 20, 0, 0],
            &[4, 21, 36, 20, 0, 0, 0],
        ),
        r(
            "Upsilon_3",
            LatticePolygon::upsilon(3),
            &[30, 120, 210, 189, 105, 27, 0, 0],
            &[6, 40, 105, 147, 105, 21, 0, 0],
        ),
        r(
            "4*Sigma",
            LatticePolygon::sigma(4),
            &[75, 536, 1947, 4488, 7095, 7920, 6237, 3344, 1089, 120, 0, 0],
            &[3, 24, 55, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        ),
        r(
            "Upsilon_4",
            LatticePolygon::upsilon(4),
            &[81, 598, 2223, 5148, 7920, 8172, 6237, 3344, 1089, 120, 0, 0, 0],
            &[10, 117, 612, 1859, 3630, 4950, 4488, 2376, 450, 55, 0, 0, 0],
        ),
        r(
            "5*Sigma",
            LatticePolygon::sigma(5),
            &[
                165, 1830, 10710, 41616, 117300, 250920, 417690, 548080, 568854, 464100, 291720, 134640, 39780,
                4858, 375, 0, 0, 0,
            ],
            &[6, 90, 595, 2160, 4200, 2002, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        ),
    ]
}

/// The bigraded `c_3` of `4Σ` over `(1,1) + 9Σ`, top row first.
pub const FOUR_SIGMA_C3_TRIANGLE: [&[u64]; 10] = [
    &[0],
    &[0, 0],
    &[0, 1, 0],
    &[0, 1, 1, 0],
    &[0, 2, 2, 2, 0],
    &[0, 2, 3, 3, 2, 0],
    &[0, 2, 3, 4, 3, 2, 0],
    &[0, 1, 2, 3, 3, 2, 1, 0],
    &[0, 1, 1, 2, 2, 2, 1, 1, 0],
    &[0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
];

/// The triangle as a map on `(1,1) + 9Σ`: row `r` from the top has
/// `y = 10 − r`, entries left to right have `x = 1, 2, …`.
pub fn four_sigma_c3_expected() -> BTreeMap<LatticePoint, u64> {
    let mut m = BTreeMap::new();
    for (r, row) in FOUR_SIGMA_C3_TRIANGLE.iter().enumerate() {
        let y = 10 - r as i64;
        for (i, &v) in row.iter().enumerate() {
            m.insert(LatticePoint::new(1 + i as i64, y), v);
        }
    }
    m
}

pub fn entry(t: &BettiTable, s: Strand, l: usize) -> u64 {
    match s {
        Strand::Linear => t.b(l),
        Strand::Quadratic => t.c(l),
    }
}

/// Checks every closed form that applies to `poly` against `t`; returns
/// how many were compared.
pub fn check_invariants(poly: &LatticePolygon, t: &BettiTable) -> usize {
    let n = poly.n_points();
    let len = t.len();
    let mut checked = 0;
    for l in 1..=len {
        let lhs = BigInt::from(t.b(l)) - BigInt::from(t.c(n - 1 - l));
        assert_eq!(lhs, antidiagonal_difference(poly, l).unwrap(), "antidiagonal {l}");
        checked += 1;
    }
    if len >= 1 {
        assert_eq!(t.c(1), poly.interior_count() as u64);
        assert_eq!(BigInt::from(t.b(1)), binomial(n as i64 - 1, 2) - BigInt::from(poly.area2()));
        checked += 2;
    }
    for e in six_easy_entries(poly) {
        assert_eq!(BigInt::from(entry(t, e.strand, e.index)), e.value.clone().unwrap(), "{e:?}");
        checked += 1;
    }
    if let Ok((b, c)) = entry_bn4(poly) {
        for e in [b, c] {
            if e.index >= 1 && e.index <= len {
                assert_eq!(BigInt::from(entry(t, e.strand, e.index)), e.value.clone().unwrap(), "{e:?}");
                checked += 1;
            }
        }
    }
    assert_eq!(minimal_degree_predicate(poly), poly.interior_count() == 0);
    match hering_schenck_zero_region(poly) {
        Ok(hs) => {
            let last = (1..=len).filter(|&l| t.c(l) != 0).max();
            assert_eq!(last, Some(hs.first_nonzero).filter(|&l| l >= 1 && l <= len));
            assert!(hs.zero_indices.iter().all(|&l| t.c(l) == 0));
            let g = poly.interior_count();
            if g <= len {
                assert!(BigInt::from(t.c(g)) >= cg_lower_bound(poly).unwrap(), "c_g bound");
            }
            checked += 2;
        }
        Err(_) => {
            let en = eagon_northcott_table(poly, t.prime).unwrap();
            assert_eq!((&en.b, &en.c), (&t.b, &t.c));
            checked += 1;
        }
    }
    if let Ok(col) = scroll_strand_lower_bound(poly) {
        if col >= 1 && col <= len {
            assert_ne!(t.b(col), 0, "scroll bound at {col}");
            checked += 1;
        }
    }
    for e in all_predictions(poly) {
        if let Some(v) = &e.value {
            assert_eq!(&BigInt::from(entry(t, e.strand, e.index)), v, "{e:?}");
            checked += 1;
        }
    }
    checked
}


/// Degrees checked by the spec-level criteria.
pub const MAX_Q: u32 = 4;
/// The untwisted module can need one more degree to expose a failure.
pub const PLAIN_Q: u32 = 6;

/// Degree parts `0..=PLAIN_Q+1` of the section module or its twisted version.
pub fn module_parts(poly: &LatticePolygon, twisted: bool) -> Vec<BTreeSet<LatticePoint>> {
    (0..=PLAIN_Q + 1)
        .map(|q| match (twisted, q) {
            (true, 0) => BTreeSet::new(),
            (true, q) => poly.dilate(q).interior_points().iter().copied().collect(),
            (false, q) => poly.dilate(q).points().iter().copied().collect(),
        })
        .collect()
}

/// Multiplication by each point on the monomial quotient by its
/// predecessors is injective in degrees `0..=max_q`.
pub fn regular_by_enumeration(parts: &[BTreeSet<LatticePoint>], seq: &[LatticePoint], max_q: u32) -> bool {
    (0..seq.len()).all(|k| {
        let before = &seq[..k];
        let r = seq[k];
        (0..=max_q as usize).all(|q| {
            let in_image = |x: LatticePoint, deg: usize| {
                deg > 0 && before.iter().any(|&pt| parts[deg - 1].contains(&(x - pt)))
            };
            parts[q]
                .iter()
                .filter(|&&x| !in_image(x, q))
                .all(|&x| !in_image(x + r, q + 1))
        })
    })
}

/// `(qΔ−P) ∩ (qΔ−Q) ∩ ℤ² ⊆ (q−1)Δ` for `q = 1..=max_q`, and the same with
/// interiors.
pub fn pair_containment(parts: &[BTreeSet<LatticePoint>], p: LatticePoint, q: LatticePoint, max_q: u32) -> bool {
    (1..=max_q as usize).all(|d| {
        parts[d]
            .iter()
            .map(|&x| x - p)
            .filter(|&y| parts[d].contains(&(y + q)))
            .all(|y| parts[d - 1].contains(&y))
    })
}

