use super::PrimeModulus;

/// Rank of a dense row-major matrix with entries already in `0..p`.
/// Rows are consumed.
pub fn rank_dense_rows(mut rows: Vec<Vec<u32>>, prime: PrimeModulus) -> usize {
    let p = prime.get() as u64;
    let n_cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut start_col = 0;
    while rank < rows.len() && start_col < n_cols {
        let Some(found) = (rank..rows.len()).find(|&i| rows[i][start_col] != 0) else {
            start_col += 1;
            continue;
        };
        rows.swap(rank, found);
        let inv = prime.inv(rows[rank][start_col]) as u64;
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot = &mut head[rank];
        for v in pivot[start_col..].iter_mut() {
            *v = (*v as u64 * inv % p) as u32;
        }
        let pivot = &pivot[..];
        for row in tail.iter_mut() {
            let f = row[start_col] as u64;
            if f == 0 {
                continue;
            }
            let neg = p - f;
            for (a, &b) in row[start_col..].iter_mut().zip(&pivot[start_col..]) {
                if b != 0 {
                    *a = ((*a as u64 + neg * b as u64) % p) as u32;
                }
            }
        }
        rank += 1;
        start_col += 1;
    }
    rank
}
