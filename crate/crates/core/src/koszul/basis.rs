use std::collections::HashMap;

use crate::linalg::{PrimeModulus, SparseMatrixFp};
use crate::polygon::{LatticePoint, PointIndex, PointSet};

/// A wedge `v_{i_1} ∧ … ∧ v_{i_p}` over an ordered support, stored as the
/// bit mask of the indices. The cofactor is implicit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WedgeBasisElement {
    pub mask: u64,
}

impl WedgeBasisElement {
    pub fn degree(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn wedge(&self, support: &PointSet) -> Vec<LatticePoint> {
        bits(self.mask).map(|i| support.as_slice()[i]).collect()
    }

    pub fn wedge_sum(&self, support: &PointSet) -> LatticePoint {
        bits(self.mask).fold(LatticePoint::ORIGIN, |s, i| s + support.as_slice()[i])
    }

    /// `(a,b)` minus the wedge sum.
    pub fn cofactor(&self, support: &PointSet, ab: LatticePoint) -> LatticePoint {
        ab - self.wedge_sum(support)
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

/// All `p`-subsets of an ordered support grouped by their sum, each group
/// sorted by mask.
#[derive(Clone, Debug)]
pub struct SubsetTable {
    p: usize,
    by_sum: HashMap<LatticePoint, Vec<u64>>,
}

impl SubsetTable {
    pub fn new(support: &PointSet, p: usize) -> SubsetTable {
        let n = support.len();
        assert!(n <= 64, "wedge supports are limited to 64 points");
        let mut by_sum: HashMap<LatticePoint, Vec<u64>> = HashMap::new();
        if p <= n {
            let pts = support.as_slice();
            let mut stack: Vec<(usize, u64, LatticePoint)> = vec![(0, 0, LatticePoint::ORIGIN)];
            // depth-first over the next index to include
            while let Some((start, mask, sum)) = stack.pop() {
                let k = mask.count_ones() as usize;
                if k == p {
                    by_sum.entry(sum).or_default().push(mask);
                    continue;
                }
                for (i, &pt) in pts.iter().enumerate().take(n - (p - k) + 1).skip(start) {
                    stack.push((i + 1, mask | 1 << i, sum + pt));
                }
            }
            for v in by_sum.values_mut() {
                v.sort_unstable();
            }
        }
        SubsetTable { p, by_sum }
    }

    pub fn degree(&self) -> usize {
        self.p
    }

    pub fn with_sum(&self, s: LatticePoint) -> &[u64] {
        self.by_sum.get(&s).map_or(&[], Vec::as_slice)
    }
}

/// Basis of `(∧^p V_A ⊗ V_B)_{(a,b)}`, grouped by cofactor in the order of
/// `B`, masks ascending within a group.
pub fn enumerate_basis(
    a: &PointSet,
    b: &PointSet,
    p: usize,
    ab: LatticePoint,
) -> Vec<WedgeBasisElement> {
    let table = SubsetTable::new(a, p);
    basis_from_table(&table, b, ab)
        .into_iter()
        .map(|mask| WedgeBasisElement { mask })
        .collect()
}

fn basis_from_table(table: &SubsetTable, b: &PointSet, ab: LatticePoint) -> Vec<u64> {
    b.iter()
        .flat_map(|&c| table.with_sum(ab - c).iter().copied())
        .collect()
}

/// Integer matrix of `δ: ∧^p V_A ⊗ V_B → ∧^{p−1} V_A ⊗ V_C` at one bidegree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoboundaryBlock {
    pub n_rows: usize,
    /// Per domain element, `(row, ±1)` sorted by row.
    pub columns: Vec<Vec<(u32, i8)>>,
}

impl CoboundaryBlock {
    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn to_fp(&self, prime: PrimeModulus) -> SparseMatrixFp {
        let cols = self
            .columns
            .iter()
            .map(|c| c.iter().map(|&(r, s)| (r, s as i64)).collect())
            .collect();
        SparseMatrixFp::from_columns(self.n_rows, cols, prime)
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.n_cols()]; self.n_rows];
        for (j, col) in self.columns.iter().enumerate() {
            for &(r, s) in col {
                m[r as usize][j] = s as i64;
            }
        }
        m
    }
}

/// Shared, read-only state for building coboundary blocks of one
/// `(A, B, C, p)` at many bidegrees.
pub struct CoboundaryBuilder<'a> {
    support: &'a PointSet,
    source: &'a PointSet,
    target: &'a PointSet,
    target_index: PointIndex,
    domain: SubsetTable,
    codomain: SubsetTable,
}

impl<'a> CoboundaryBuilder<'a> {
    pub fn new(a: &'a PointSet, b: &'a PointSet, c: &'a PointSet, p: usize) -> Self {
        assert!(p >= 1, "the coboundary needs wedge degree ≥ 1");
        CoboundaryBuilder {
            support: a,
            source: b,
            target: c,
            target_index: PointIndex::new(c),
            domain: SubsetTable::new(a, p),
            codomain: SubsetTable::new(a, p - 1),
        }
    }

    /// Domain and codomain dimensions at `(a,b)`.
    pub fn shape(&self, ab: LatticePoint) -> (usize, usize) {
        let rows: usize = self.target.iter().map(|&c| self.codomain.with_sum(ab - c).len()).sum();
        let cols: usize = self.source.iter().map(|&c| self.domain.with_sum(ab - c).len()).sum();
        (rows, cols)
    }

    pub fn block(&self, ab: LatticePoint) -> CoboundaryBlock {
        let pts = self.support.as_slice();
        // row offset of each cofactor group, indexed like C
        let mut offsets = Vec::with_capacity(self.target.len());
        let mut n_rows = 0usize;
        for &c in self.target {
            offsets.push(n_rows);
            n_rows += self.codomain.with_sum(ab - c).len();
        }
        let mut columns = Vec::new();
        for &c in self.source {
            for &mask in self.domain.with_sum(ab - c) {
                let mut col = Vec::with_capacity(mask.count_ones() as usize);
                for (s, i) in bits(mask).enumerate() {
                    let cof = c + pts[i];
                    let Some(ci) = self.target_index.get(cof) else {
                        continue;
                    };
                    let rest = mask & !(1u64 << i);
                    let group = self.codomain.with_sum(ab - cof);
                    let pos = group.binary_search(&rest).expect("face lies in the codomain basis");
                    let sign = if s % 2 == 0 { -1 } else { 1 };
                    col.push(((offsets[ci] + pos) as u32, sign));
                }
                col.sort_unstable_by_key(|e| e.0);
                columns.push(col);
            }
        }
        CoboundaryBlock { n_rows, columns }
    }
}

/// Matrix of `δ` at `(a,b)` for the given supports.
pub fn coboundary_block(
    a: &PointSet,
    b: &PointSet,
    c: &PointSet,
    p: usize,
    ab: LatticePoint,
) -> CoboundaryBlock {
    CoboundaryBuilder::new(a, b, c, p).block(ab)
}
