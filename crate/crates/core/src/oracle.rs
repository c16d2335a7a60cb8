//! Brute-force reference tables for tiny polygons: full Koszul complexes
//! as dense matrices, no bigrading, no quotients, no shortcuts.
//!
//! Nothing here reuses the engine's basis enumeration, signs or
//! elimination.

use std::collections::{BTreeMap, HashMap};

use crate::closed_forms::Strand;
use crate::engine::{BettiTable, Provenance};
use crate::error::{Error, Result};
use crate::linalg::PrimeModulus;
use crate::polygon::{LatticePoint, LatticePolygon};

pub const ORACLE_CAP: usize = 8;

/// Lexicographic `k`-subsets of `0..n`.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Basis `∧^k V ⊗ V_M` as (subset, module point), with bidegrees.
struct Space {
    elems: Vec<(Vec<usize>, LatticePoint)>,
    index: HashMap<(Vec<usize>, LatticePoint), usize>,
}

impl Space {
    fn new(n: usize, k: usize, module: &[LatticePoint]) -> Space {
        let mut elems = Vec::new();
        for s in subsets(n, k) {
            for &m in module {
                elems.push((s.clone(), m));
            }
        }
        let index = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Space { elems, index }
    }

    fn dim(&self) -> usize {
        self.elems.len()
    }

    fn bidegree(&self, i: usize, pts: &[LatticePoint]) -> LatticePoint {
        let (s, m) = &self.elems[i];
        s.iter().fold(*m, |acc, &j| acc + pts[j])
    }
}

/// Dense `δ: src → dst`, `v_{i_0}∧…∧v_{i_k} ⊗ m ↦ Σ (−1)^s (omit i_s) ⊗ (m + P_{i_s})`,
/// rows indexed by `dst`; terms leaving the target module are dropped.
fn delta(src: &Space, dst: &Space, pts: &[LatticePoint], p: u64) -> Vec<Vec<u64>> {
    let mut m = vec![vec![0u64; src.dim()]; dst.dim()];
    for (col, (s, mpt)) in src.elems.iter().enumerate() {
        for pos in 0..s.len() {
            let mut rest = s.clone();
            let j = rest.remove(pos);
            if let Some(&row) = dst.index.get(&(rest, *mpt + pts[j])) {
                m[row][col] = if pos % 2 == 0 { 1 } else { p - 1 };
            }
        }
    }
    m
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

/// Plain row reduction.
fn dense_rank(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = pow_mod(m[r][c], p - 2, p);
        let pivot_row: Vec<u64> = m[r].iter().map(|&x| x * inv % p).collect();
        for row in m.iter_mut().skip(r + 1) {
            let f = row[c];
            if f != 0 {
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        m[r] = pivot_row;
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

fn product_is_zero(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> bool {
    // a: U ← V (rows U), b: V ← W
    let inner = b.len();
    a.iter().all(|row| {
        (0..b.first().map_or(0, Vec::len)).all(|k| (0..inner).map(|j| row[j] * b[j][k] % p).sum::<u64>() % p == 0)
    })
}

/// Selects the rows and columns of a dense matrix.
fn restrict(m: &[Vec<u64>], rows: &[usize], cols: &[usize]) -> Vec<Vec<u64>> {
    rows.iter().map(|&r| cols.iter().map(|&c| m[r][c]).collect()).collect()
}

fn check_size(poly: &LatticePolygon) -> Result<()> {
    if poly.n_points() > ORACLE_CAP {
        Err(Error::TooLarge(poly.n_points()))
    } else {
        Ok(())
    }
}

struct Slice {
    lower: Space,
    middle: Space,
    upper: Space,
    incoming: Vec<Vec<u64>>,
    outgoing: Vec<Vec<u64>>,
}

/// The complex around `∧^k V ⊗ M_1` with `M_j` the degree-`j` part of the
/// module; `twisted` uses interiors of dilates.
fn slice(poly: &LatticePolygon, k: usize, twisted: bool, p: u64) -> Slice {
    let pts = poly.points().as_slice();
    let n = pts.len();
    let part = |j: u32| -> Vec<LatticePoint> {
        match (twisted, j) {
            (true, 0) => Vec::new(),
            (true, j) => poly.dilate(j).interior_points().into_vec(),
            (false, j) => poly.dilate(j).points().as_slice().to_vec(),
        }
    };
    let lower = Space::new(n, k + 1, &part(0));
    let middle = Space::new(n, k, &part(1));
    let upper = if k == 0 { Space::new(n, 0, &[]) } else { Space::new(n, k - 1, &part(2)) };
    let incoming = delta(&lower, &middle, pts, p);
    let outgoing = delta(&middle, &upper, pts, p);
    Slice {
        lower,
        middle,
        upper,
        incoming,
        outgoing,
    }
}

/// Middle cohomology of `∧^{ℓ+1}V ⊗ V_0 → ∧^ℓV ⊗ V_Δ → ∧^{ℓ−1}V ⊗ V_{2Δ}`.
fn b_entry(poly: &LatticePolygon, l: usize, p: u64) -> u64 {
    let s = slice(poly, l, false, p);
    assert!(product_is_zero(&s.outgoing, &s.incoming, p), "δ'δ ≠ 0");
    let r_in = dense_rank(s.incoming.clone(), p);
    assert_eq!(r_in, s.lower.dim(), "incoming map of the linear strand must be injective");
    let r_out = dense_rank(s.outgoing.clone(), p);
    (s.middle.dim() - r_in - r_out) as u64
}

/// `dim ker(∧^{ℓ−1}V ⊗ V_{Δ^(1)} → ∧^{ℓ−2}V ⊗ V_{(2Δ)^(1)})`.
fn c_entry(poly: &LatticePolygon, l: usize, p: u64) -> u64 {
    let s = slice(poly, l - 1, true, p);
    let r_out = if l == 1 { 0 } else { dense_rank(s.outgoing.clone(), p) };
    (s.middle.dim() - r_out) as u64
}

pub fn oracle_betti(poly: &LatticePolygon, prime: PrimeModulus) -> Result<BettiTable> {
    check_size(poly)?;
    let p = prime.get() as u64;
    let n = poly.n_points();
    let len = n.saturating_sub(3);
    let b: Vec<u64> = (1..=len).map(|l| b_entry(poly, l, p)).collect();
    let c: Vec<u64> = (1..=len).map(|l| c_entry(poly, l, p)).collect();
    Ok(BettiTable {
        n,
        b,
        c,
        prime,
        provenance_b: vec![Provenance::Computed; len],
        provenance_c: vec![Provenance::Computed; len],
        bigraded: BTreeMap::new(),
    })
}

/// Per-bidegree values of `b_ℓ` or `c_ℓ`, split after building the full
/// matrices.
pub fn oracle_bigraded(
    poly: &LatticePolygon,
    strand: Strand,
    l: usize,
    prime: PrimeModulus,
) -> Result<BTreeMap<LatticePoint, u64>> {
    check_size(poly)?;
    let n = poly.n_points();
    if l == 0 || l + 3 > n {
        return Err(Error::Range {
            index: l as i64,
            lo: 1,
            hi: n as i64 - 3,
        });
    }
    let p = prime.get() as u64;
    let pts = poly.points().as_slice();
    let s = match strand {
        Strand::Linear => slice(poly, l, false, p),
        Strand::Quadratic => slice(poly, l - 1, true, p),
    };
    let group = |sp: &Space| {
        let mut g: BTreeMap<LatticePoint, Vec<usize>> = BTreeMap::new();
        for i in 0..sp.dim() {
            g.entry(sp.bidegree(i, pts)).or_default().push(i);
        }
        g
    };
    let (gl, gm, gu) = (group(&s.lower), group(&s.middle), group(&s.upper));
    let none = Vec::new();
    let mut out = BTreeMap::new();
    for (ab, cols) in &gm {
        let up = gu.get(ab).unwrap_or(&none);
        let low = gl.get(ab).unwrap_or(&none);
        let r_out = if up.is_empty() { 0 } else { dense_rank(restrict(&s.outgoing, up, cols), p) };
        let r_in = match strand {
            Strand::Quadratic => 0,
            Strand::Linear if low.is_empty() => 0,
            Strand::Linear => dense_rank(restrict(&s.incoming, cols, low), p),
        };
        let v = (cols.len() - r_out - r_in) as u64;
        if v != 0 {
            out.insert(*ab, v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> PrimeModulus {
        PrimeModulus::DEFAULT
    }

    #[test]
    fn reference_tables() {
        let t = oracle_betti(&LatticePolygon::sigma(2), p()).unwrap();
        assert_eq!((t.b, t.c), (vec![6, 8, 3], vec![0, 0, 0]));
        let t = oracle_betti(&LatticePolygon::upsilon(1), p()).unwrap();
        assert_eq!((t.b, t.c), (vec![0], vec![1]));
        let t = oracle_betti(&LatticePolygon::upsilon(2), p()).unwrap();
        assert_eq!((t.b, t.c), (vec![7, 8, 3, 0], vec![3, 8, 6, 0]));
        assert_eq!(oracle_betti(&LatticePolygon::sigma(4), p()), Err(Error::TooLarge(15)));
    }

    #[test]
    fn bigraded_marginals() {
        let poly = LatticePolygon::upsilon(2);
        let t = oracle_betti(&poly, p()).unwrap();
        for l in 1..=4 {
            let b: u64 = oracle_bigraded(&poly, Strand::Linear, l, p()).unwrap().values().sum();
            let c: u64 = oracle_bigraded(&poly, Strand::Quadratic, l, p()).unwrap().values().sum();
            assert_eq!((b, c), (t.b(l), t.c(l)));
        }
    }

    #[test]
    fn small_primes() {
        let t = oracle_betti(&LatticePolygon::sigma(2), PrimeModulus::new(2).unwrap()).unwrap();
        assert_eq!(t.b, vec![6, 8, 3]);
    }
}
