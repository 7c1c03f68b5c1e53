//! Exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::{clear_denominators, primitive, Rat};

/// Reduced row echelon form of `rows`, along with its pivot columns.
pub(crate) fn rref(rows: &[Vec<Rat>], ncols: usize) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rat::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..ncols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub(crate) fn to_rat_rows(rows: &[Vec<BigInt>]) -> Vec<Vec<Rat>> {
    rows.iter()
        .map(|r| r.iter().cloned().map(Rat::from_integer).collect())
        .collect()
}

/// Rank of an integer matrix, computed fraction-free.
pub(crate) fn rank_int<'a, I>(rows: I, ncols: usize) -> usize
where
    I: IntoIterator<Item = &'a Vec<BigInt>>,
{
    let mut m: Vec<Vec<BigInt>> = rows.into_iter().cloned().collect();
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let (head, tail) = m.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let a = pivot_row[c].clone();
            let b = row[c].clone();
            for j in c..ncols {
                row[j] = &row[j] * &a - &pivot_row[j] * &b;
            }
            let g = primitive(row);
            *row = g;
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Integer basis (primitive vectors) of `{x : row . x = 0 for all rows}`.
pub(crate) fn kernel_int(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let (r, pivots) = rref(&to_rat_rows(rows), ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rat::zero(); ncols];
            x[f] = Rat::one();
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = -r[i][f].clone();
            }
            primitive(&clear_denominators(&x))
        })
        .collect()
}

/// Determinant by fraction-free elimination.
pub(crate) fn determinant(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn iv(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn rank_and_kernel() {
        let rows = vec![iv(&[1, 1, 0]), iv(&[2, 2, 0]), iv(&[0, 0, 3])];
        assert_eq!(rank_int(&rows, 3), 2);
        let k = kernel_int(&rows, 3);
        assert_eq!(k, vec![iv(&[-1, 1, 0])]);
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = vec![
            vec![int(2), int(0), int(1)],
            vec![int(1), int(3), int(2)],
            vec![int(1), int(1), int(1)],
        ];
        // 2*(3-2) - 0 + 1*(1-3) = 0
        assert_eq!(determinant(&m), int(0));
        let m = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        assert_eq!(determinant(&m), int(-1));
    }
}
