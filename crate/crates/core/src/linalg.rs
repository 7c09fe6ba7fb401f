//! Exact matrix rank over GF(2) and over the rationals.

use num_bigint::BigInt;
use num_traits::Zero;

/// Rank over GF(2) of the matrix whose rows are bitsets of `words` words.
pub fn rank_gf2(mut rows: Vec<Vec<u64>>, words: usize) -> usize {
    let mut rank = 0;
    for col in 0..words * 64 {
        let (w, b) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & b != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[w] & b != 0 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Rank over the rationals of an integer matrix, by fraction-free
/// (Bareiss) elimination. Runs in `i128` and restarts in `BigInt` if an
/// intermediate value overflows.
pub fn rank_rational(rows: &[Vec<i64>]) -> usize {
    let m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    match bareiss_i128(m) {
        Some(r) => r,
        None => bareiss_big(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        ),
    }
}

// each step reads the pivot row while writing the row below it
#[allow(clippy::needless_range_loop)]
fn bareiss_i128(mut a: Vec<Vec<i128>>) -> Option<usize> {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev: i128 = 1;
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, p);
        let piv = a[rank][col];
        for r in rank + 1..nrows {
            let f = a[r][col];
            for c in col..ncols {
                let v = piv
                    .checked_mul(a[r][c])?
                    .checked_sub(f.checked_mul(a[rank][c])?)?;
                a[r][c] = v / prev;
            }
        }
        prev = piv;
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    Some(rank)
}

#[allow(clippy::needless_range_loop)]
fn bareiss_big(mut a: Vec<Vec<BigInt>>) -> usize {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let piv = a[rank][col].clone();
        for r in rank + 1..nrows {
            let f = a[r][col].clone();
            for c in col..ncols {
                let v = &piv * &a[r][c] - &f * &a[rank][c];
                a[r][c] = v / &prev;
            }
        }
        prev = piv;
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}
