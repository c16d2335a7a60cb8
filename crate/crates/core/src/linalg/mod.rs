//! Rank computations over prime fields.

mod dense;
mod sparse;

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dense::rank_dense_rows;

/// A prime `2 ≤ p < 2^31`, checked by trial division.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeModulus(u32);

impl PrimeModulus {
    pub const DEFAULT: PrimeModulus = PrimeModulus(40009);

    pub fn new(p: u64) -> Result<Self> {
        if !(2..1 << 31).contains(&p) {
            return Err(Error::NotPrime(p));
        }
        let mut d = 2u64;
        while d * d <= p {
            if p.is_multiple_of(d) {
                return Err(Error::NotPrime(p));
            }
            d += 1;
        }
        Ok(PrimeModulus(p as u32))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Reduces a signed integer into `0..p`.
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.0 as i64) as u32
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    pub fn inv(self, a: u32) -> u32 {
        debug_assert!(!a.is_multiple_of(self.0));
        // Fermat
        let mut result = 1u64;
        let mut base = a as u64 % self.0 as u64;
        let mut e = self.0 - 2;
        let p = self.0 as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        result as u32
    }
}

impl TryFrom<u64> for PrimeModulus {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        PrimeModulus::new(p)
    }
}

impl From<PrimeModulus> for u64 {
    fn from(p: PrimeModulus) -> u64 {
        p.0 as u64
    }
}

impl std::fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Column-major sparse matrix over `𝔽_p`. Row indices strictly increase
/// within each column and stored values are nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrixFp {
    n_rows: usize,
    n_cols: usize,
    prime: PrimeModulus,
    columns: Vec<Vec<(u32, u32)>>,
}

impl SparseMatrixFp {
    pub fn zero(n_rows: usize, n_cols: usize, prime: PrimeModulus) -> Self {
        SparseMatrixFp {
            n_rows,
            n_cols,
            prime,
            columns: vec![Vec::new(); n_cols],
        }
    }

    pub fn identity(n: usize, prime: PrimeModulus) -> Self {
        Self::from_columns(n, (0..n).map(|i| vec![(i as u32, 1i64)]).collect(), prime)
    }

    /// Builds from integer columns; entries are reduced mod p, duplicates
    /// summed and zeros dropped.
    pub fn from_columns(n_rows: usize, cols: Vec<Vec<(u32, i64)>>, prime: PrimeModulus) -> Self {
        let n_cols = cols.len();
        let columns = cols
            .into_iter()
            .map(|mut col| {
                col.sort_unstable_by_key(|e| e.0);
                let mut out: Vec<(u32, u32)> = Vec::with_capacity(col.len());
                for (r, v) in col {
                    assert!((r as usize) < n_rows, "row index out of range");
                    let v = prime.reduce(v);
                    match out.last_mut() {
                        Some(last) if last.0 == r => {
                            last.1 = ((last.1 as u64 + v as u64) % prime.get() as u64) as u32
                        }
                        _ => out.push((r, v)),
                    }
                }
                out.retain(|e| e.1 != 0);
                out
            })
            .collect();
        SparseMatrixFp {
            n_rows,
            n_cols,
            prime,
            columns,
        }
    }

    pub fn from_dense(rows: &[Vec<i64>], prime: PrimeModulus) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        let cols = (0..n_cols)
            .map(|j| {
                (0..n_rows)
                    .filter(|&i| rows[i][j] != 0)
                    .map(|i| (i as u32, rows[i][j]))
                    .collect()
            })
            .collect();
        Self::from_columns(n_rows, cols, prime)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn prime(&self) -> PrimeModulus {
        self.prime
    }

    pub fn columns(&self) -> &[Vec<(u32, u32)>] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn transpose(&self) -> SparseMatrixFp {
        let mut cols = vec![Vec::new(); self.n_rows];
        for (j, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                cols[r as usize].push((j as u32, v));
            }
        }
        SparseMatrixFp {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            prime: self.prime,
            columns: cols,
        }
    }

    /// Applies `row ↦ row_perm[row]` and reorders columns so that column `j`
    /// of the result is column `col_perm[j]` of `self`.
    pub fn permute(&self, row_perm: &[u32], col_perm: &[u32]) -> SparseMatrixFp {
        let columns = col_perm
            .iter()
            .map(|&j| {
                let mut c: Vec<(u32, u32)> = self.columns[j as usize]
                    .iter()
                    .map(|&(r, v)| (row_perm[r as usize], v))
                    .collect();
                c.sort_unstable_by_key(|e| e.0);
                c
            })
            .collect();
        SparseMatrixFp {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            prime: self.prime,
            columns,
        }
    }

    /// Upper bound on the working memory of [`rank`], in bytes.
    pub fn estimated_bytes(&self) -> usize {
        let dense = self.n_rows.min(self.n_cols).saturating_mul(self.n_rows.max(self.n_cols));
        (self.nnz() * 24).max(dense.min(sparse::DENSE_CELL_CAP) * 4)
    }

    /// Plain-text triplet dump: header `rows cols p`, then `r c v` lines.
    pub fn to_triplets(&self) -> String {
        let mut s = format!("{} {} {}\n", self.n_rows, self.n_cols, self.prime);
        for (j, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                let _ = writeln!(s, "{r} {j} {v}");
            }
        }
        s
    }

    pub fn from_triplets(text: &str) -> Result<SparseMatrixFp> {
        let bad = |m: &str| Error::Parse(format!("triplet matrix: {m}"));
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<u64> = lines
            .next()
            .ok_or_else(|| bad("missing header"))?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad("header")))
            .collect::<Result<_>>()?;
        let [rows, cols, p] = header[..] else {
            return Err(bad("header needs rows cols p"));
        };
        let prime = PrimeModulus::new(p)?;
        let mut columns = vec![Vec::new(); cols as usize];
        for line in lines {
            let t: Vec<i64> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| bad(line)))
                .collect::<Result<_>>()?;
            let [r, c, v] = t[..] else {
                return Err(bad(line));
            };
            if r < 0 || c < 0 || r as u64 >= rows || c as u64 >= cols {
                return Err(bad(line));
            }
            columns[c as usize].push((r as u32, v));
        }
        Ok(Self::from_columns(rows as usize, columns, prime))
    }
}

/// Rank over `𝔽_p`.
pub fn rank(m: SparseMatrixFp) -> usize {
    sparse::rank(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BatchBudget {
    pub workers: usize,
    /// Per-matrix working memory limit in bytes.
    pub memory_cap: usize,
}

impl Default for BatchBudget {
    fn default() -> Self {
        BatchBudget {
            workers: 1,
            memory_cap: usize::MAX,
        }
    }
}

/// Ranks in input order. Matrices over the memory cap fail individually.
pub fn rank_batch(tasks: Vec<SparseMatrixFp>, budget: BatchBudget) -> Vec<Result<usize>> {
    let run = |m: SparseMatrixFp| {
        let need = m.estimated_bytes();
        if need > budget.memory_cap {
            Err(Error::ResourceExceeded(format!(
                "{}x{} matrix needs about {need} bytes",
                m.n_rows(),
                m.n_cols()
            )))
        } else {
            Ok(rank(m))
        }
    };
    match rayon::ThreadPoolBuilder::new()
        .num_threads(budget.workers.max(1))
        .build()
    {
        Ok(pool) => pool.install(|| tasks.into_par_iter().map(run).collect()),
        Err(_) => tasks.into_iter().map(run).collect(),
    }
}
