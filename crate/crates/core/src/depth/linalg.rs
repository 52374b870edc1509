//! Exact matrix rank.
//!
//! [`rank`] runs fraction-free (Bareiss) elimination and works over any exact
//! integral domain implementing [`num_traits::Num`]; every division it does is
//! exact. With a field such as [`crate::Rational`] it reduces to ordinary
//! Gaussian elimination up to scaling.

use num_traits::Num;

/// Rank of a dense row-major matrix. Rows may have different lengths; missing
/// entries count as zero.
pub fn rank<T: Num + Clone>(rows: &[Vec<T>]) -> usize {
    let ncols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut a: Vec<Vec<T>> = rows
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.resize(ncols, T::zero());
            r
        })
        .collect();
    let nrows = a.len();
    let mut prev = T::one();
    let mut rk = 0;
    for col in 0..ncols {
        if rk == nrows {
            break;
        }
        let Some(piv) = (rk..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rk, piv);
        let (top, rest) = a.split_at_mut(rk + 1);
        let pivot_row = &top[rk];
        let p = pivot_row[col].clone();
        for row in rest.iter_mut() {
            let f = row[col].clone();
            for j in col + 1..ncols {
                let v = p.clone() * row[j].clone() - f.clone() * pivot_row[j].clone();
                row[j] = v / prev.clone();
            }
            row[col] = T::zero();
        }
        prev = p;
        rk += 1;
    }
    rk
}

/// Rank of a sparse `{-1, 0, 1}`-style matrix given as `(row, col, value)`
/// triples, computed with scalar type `T`.
pub fn sparse_rank<T: Num + Clone + From<i8>>(
    nrows: usize,
    ncols: usize,
    entries: &[(usize, usize, i8)],
) -> usize {
    if nrows == 0 || ncols == 0 {
        return 0;
    }
    let mut dense = vec![vec![T::zero(); ncols]; nrows];
    for &(i, j, v) in entries {
        dense[i][j] = T::from(v);
    }
    rank(&dense)
}
