//! Exact rank and determinant of integer matrices via Bareiss fraction-free
//! elimination over arbitrary-precision integers.  Used for the lattice-rank
//! computations, where floating point or fixed-width arithmetic could silently
//! misreport a rank.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Exact rank by fraction-free Gaussian elimination with column pivoting.
pub fn rank_exact(rows: &[Vec<BigInt>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    for row in &m {
        assert_eq!(row.len(), ncols, "ragged matrix");
    }
    let mut rank = 0;
    let mut prev = BigInt::one();
    let mut col = 0;
    while rank < m.len() && col < ncols {
        // Find a pivot row at or below `rank` with a nonzero entry in `col`.
        let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            col += 1;
            continue;
        };
        m.swap(rank, p);
        for r in (rank + 1)..m.len() {
            for c in (col + 1)..ncols {
                let num = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                // Bareiss: divisions are exact.
                debug_assert!((&num % &prev).is_zero());
                m[r][c] = num / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        col += 1;
    }
    rank
}

/// Exact determinant of a square matrix by the Bareiss algorithm.
pub fn det_exact(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    for row in &m {
        assert_eq!(row.len(), n, "determinant of a non-square matrix");
    }
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = ((k + 1)..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for r in (k + 1)..n {
            for c in (k + 1)..n {
                let num = &m[k][k] * &m[r][c] - &m[r][k] * &m[k][c];
                debug_assert!((&num % &prev).is_zero());
                m[r][c] = num / &prev;
            }
            m[r][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Convenience constructor from machine integers.
pub fn from_i64(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Cofactor-expansion oracle, exponential but independent of Bareiss.
    fn det_cofactor(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::one();
        }
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            if m[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][j] * det_cofactor(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn determinant_matches_cofactor_oracle() {
        // Deterministic pseudo-random integer matrices, sizes 1..=6.
        let mut seed: u64 = 42;
        let mut next = move || {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((seed >> 33) as i64 % 19) - 9
        };
        for n in 1..=6 {
            for _ in 0..8 {
                let rows: Vec<Vec<i64>> =
                    (0..n).map(|_| (0..n).map(|_| next()).collect()).collect();
                let m = from_i64(&rows);
                assert_eq!(det_exact(&m), det_cofactor(&m), "n = {n}");
            }
        }
    }

    #[test]
    fn rank_detects_dependent_rows() {
        let m = from_i64(&[
            vec![1, 2, 3, 4],
            vec![2, 4, 6, 8],
            vec![0, 1, 1, 0],
            vec![1, 3, 4, 4],
        ]);
        // Row 1 = 2 * row 0, row 3 = row 0 + row 2.
        assert_eq!(rank_exact(&m), 2);
        assert_eq!(det_exact(&m), BigInt::zero());
        // Wide and tall shapes.
        assert_eq!(rank_exact(&from_i64(&[vec![0, 0, 5]])), 1);
        assert_eq!(rank_exact(&from_i64(&[vec![0], vec![3], vec![0]])), 1);
        assert_eq!(rank_exact(&[]), 0);
    }

    #[test]
    fn block_determinant_closed_form() {
        // The m x m matrix with diagonal 2 - d and off-diagonal 1 is
        // J + (1 - d)I where J is all-ones.  J has eigenvalues m (once) and
        // 0 (m - 1 times), so the determinant is
        // (m + 1 - d) * (1 - d)^(m - 1).
        for m in 1..=8u64 {
            for d in 3..=7i64 {
                let rows: Vec<Vec<i64>> = (0..m)
                    .map(|i| (0..m).map(|j| if i == j { 2 - d } else { 1 }).collect())
                    .collect();
                let det = det_exact(&from_i64(&rows));
                let mut expect = BigInt::from(m as i64 - d + 1);
                for _ in 1..m {
                    expect *= BigInt::from(1 - d);
                }
                assert_eq!(det, expect, "m = {m}, d = {d}");
            }
        }
    }

    #[test]
    fn big_values_do_not_overflow() {
        // A triangular matrix with huge entries: det is the diagonal product.
        let n = 12;
        let mut rows = vec![vec![BigInt::zero(); n]; n];
        let mut expect = BigInt::one();
        let big = BigInt::from(10u64).pow(30);
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            for j in i..n {
                rows[i][j] = &big + (i * n + j) as u64;
            }
            expect *= &rows[i][i];
        }
        assert_eq!(det_exact(&rows), expect);
        assert_eq!(rank_exact(&rows), n);
    }
}
