use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::dense::rank_dense_rows;
use super::{PrimeModulus, SparseMatrixFp};

/// Largest remaining block (in cells) handed to dense elimination.
pub(super) const DENSE_CELL_CAP: usize = 1 << 26;
const DENSE_SIDE: usize = 256;
const FILL_RATIO: f64 = 0.2;
const MARKOWITZ_CANDIDATES: usize = 3;

struct Elimination {
    prime: PrimeModulus,
    cols: Vec<Vec<(u32, u32)>>,
    active: Vec<bool>,
    row_cnt: Vec<u32>,
    row_occ: Vec<Vec<u32>>,
    heap: BinaryHeap<Reverse<(u32, u32)>>,
    nnz: usize,
    active_cols: usize,
    active_rows: usize,
}

impl Elimination {
    fn new(m: SparseMatrixFp) -> Self {
        let n_rows = m.n_rows;
        let mut row_cnt = vec![0u32; n_rows];
        let mut row_occ = vec![Vec::new(); n_rows];
        let mut heap = BinaryHeap::with_capacity(m.n_cols);
        let mut nnz = 0;
        for (j, col) in m.columns.iter().enumerate() {
            for &(r, _) in col {
                row_cnt[r as usize] += 1;
                row_occ[r as usize].push(j as u32);
            }
            nnz += col.len();
            heap.push(Reverse((col.len() as u32, j as u32)));
        }
        let active_rows = row_cnt.iter().filter(|&&c| c > 0).count();
        Elimination {
            prime: m.prime,
            active: vec![true; m.n_cols],
            active_cols: m.n_cols,
            cols: m.columns,
            row_cnt,
            row_occ,
            heap,
            nnz,
            active_rows,
        }
    }

    fn pop_candidate(&mut self) -> Option<u32> {
        while let Some(Reverse((len, j))) = self.heap.pop() {
            if self.active[j as usize] && self.cols[j as usize].len() as u32 == len {
                return Some(j);
            }
        }
        None
    }

    fn retire(&mut self, j: usize) {
        self.active[j] = false;
        self.active_cols -= 1;
        let col = std::mem::take(&mut self.cols[j]);
        self.nnz -= col.len();
        for (r, _) in col {
            let c = &mut self.row_cnt[r as usize];
            *c -= 1;
            if *c == 0 {
                self.active_rows -= 1;
            }
        }
    }

    /// `cols[k] -= f · cols[j]`.
    fn axpy(&mut self, k: usize, j: usize, f: u32) {
        let p = self.prime.get() as u64;
        let neg = p - f as u64;
        let old = std::mem::take(&mut self.cols[k]);
        let piv = &self.cols[j];
        let mut out = Vec::with_capacity(old.len() + piv.len());
        let (mut a, mut b) = (0, 0);
        while a < old.len() || b < piv.len() {
            let ra = old.get(a).map_or(u32::MAX, |e| e.0);
            let rb = piv.get(b).map_or(u32::MAX, |e| e.0);
            if ra < rb {
                out.push(old[a]);
                a += 1;
            } else if rb < ra {
                let v = (neg * piv[b].1 as u64 % p) as u32;
                out.push((rb, v));
                let c = &mut self.row_cnt[rb as usize];
                if *c == 0 {
                    self.active_rows += 1;
                }
                *c += 1;
                self.row_occ[rb as usize].push(k as u32);
                self.nnz += 1;
                b += 1;
            } else {
                let v = ((old[a].1 as u64 + neg * piv[b].1 as u64) % p) as u32;
                if v != 0 {
                    out.push((ra, v));
                } else {
                    let c = &mut self.row_cnt[ra as usize];
                    *c -= 1;
                    if *c == 0 {
                        self.active_rows -= 1;
                    }
                    self.nnz -= 1;
                }
                a += 1;
                b += 1;
            }
        }
        self.cols[k] = out;
    }

    fn should_go_dense(&self) -> bool {
        let cells = self.active_cols.saturating_mul(self.active_rows);
        if self.active_cols == 0 || cells > DENSE_CELL_CAP {
            return false;
        }
        (self.active_cols < DENSE_SIDE && self.active_rows < DENSE_SIDE)
            || self.nnz as f64 > FILL_RATIO * cells as f64
    }

    fn dense_remainder(self) -> usize {
        let mut compact = vec![u32::MAX; self.row_cnt.len()];
        let mut next = 0u32;
        for (r, &c) in self.row_cnt.iter().enumerate() {
            if c > 0 {
                compact[r] = next;
                next += 1;
            }
        }
        let width = next as usize;
        let rows: Vec<Vec<u32>> = self
            .cols
            .iter()
            .zip(&self.active)
            .filter(|(col, &act)| act && !col.is_empty())
            .map(|(col, _)| {
                let mut row = vec![0u32; width];
                for &(r, v) in col {
                    row[compact[r as usize] as usize] = v;
                }
                row
            })
            .collect();
        rank_dense_rows(rows, self.prime)
    }

    fn run(mut self) -> usize {
        let mut rank = 0;
        loop {
            if self.should_go_dense() {
                return rank + self.dense_remainder();
            }
            let mut cands = Vec::with_capacity(MARKOWITZ_CANDIDATES);
            while cands.len() < MARKOWITZ_CANDIDATES {
                match self.pop_candidate() {
                    Some(j) if self.cols[j as usize].is_empty() => self.retire(j as usize),
                    Some(j) => cands.push(j),
                    None => break,
                }
            }
            if cands.is_empty() {
                return rank;
            }
            let mut best: Option<(u64, u32, u32)> = None;
            for &j in &cands {
                let col = &self.cols[j as usize];
                let (r, cnt) = col
                    .iter()
                    .map(|&(r, _)| (r, self.row_cnt[r as usize]))
                    .min_by_key(|&(_, c)| c)
                    .unwrap();
                let cost = (col.len() as u64 - 1) * (cnt as u64 - 1);
                if best.is_none_or(|b| cost < b.0) {
                    best = Some((cost, j, r));
                }
            }
            let (_, j, r) = best.unwrap();
            for &other in &cands {
                if other != j {
                    self.heap
                        .push(Reverse((self.cols[other as usize].len() as u32, other)));
                }
            }
            let (j, r) = (j as usize, r as usize);
            let pos = self.cols[j].binary_search_by_key(&(r as u32), |e| e.0).unwrap();
            let inv = self.prime.inv(self.cols[j][pos].1);
            let occ = std::mem::take(&mut self.row_occ[r]);
            for &k in &occ {
                let k = k as usize;
                if k == j || !self.active[k] {
                    continue;
                }
                let Ok(kp) = self.cols[k].binary_search_by_key(&(r as u32), |e| e.0) else {
                    continue;
                };
                let f = self.prime.mul(self.cols[k][kp].1, inv);
                self.axpy(k, j, f);
                self.heap.push(Reverse((self.cols[k].len() as u32, k as u32)));
            }
            self.retire(j);
            rank += 1;
        }
    }
}

pub fn rank(m: SparseMatrixFp) -> usize {
    if m.n_rows == 0 || m.n_cols == 0 {
        return 0;
    }
    Elimination::new(m).run()
}
