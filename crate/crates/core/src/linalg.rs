//! Gaussian elimination over an exact field.

use crate::scalar::Field;

/// Reduced row echelon form in place; returns the pivot column of each
/// nonzero row.
pub fn rref<S: Field>(rows: &mut Vec<Vec<S>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = S::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row[c..ncols].iter_mut().zip(&pivot_row[c..ncols]) {
                    *x = x.clone() - p.clone() * f.clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// A basis of `{v : A v = 0}` where `A` has `ncols` columns. One basis
/// vector per free column, with a 1 in that column.
pub fn nullspace<S: Field>(mut rows: Vec<Vec<S>>, ncols: usize) -> Vec<Vec<S>> {
    let pivots = rref(&mut rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![S::zero(); ncols];
            v[f] = S::one();
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect()
}

pub fn rank<S: Field>(mut rows: Vec<Vec<S>>, ncols: usize) -> usize {
    rref(&mut rows, ncols).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_traits::Zero;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| q(x)).collect())
            .collect()
    }

    fn apply(a: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
        a.iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
            })
            .collect()
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = mat(&[&[1, 2, 3], &[2, 4, 6]]);
        let ker = nullspace(a.clone(), 3);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(apply(&a, v).iter().all(Zero::is_zero));
        }
        assert_eq!(rank(a, 3), 1);
    }

    #[test]
    fn full_rank_has_trivial_kernel() {
        let a = mat(&[&[2, 1], &[1, 3]]);
        assert!(nullspace(a, 2).is_empty());
    }

    #[test]
    fn empty_system() {
        let ker = nullspace::<Rational>(vec![], 2);
        assert_eq!(ker, vec![vec![q(1), q(0)], vec![q(0), q(1)]]);
    }

    #[test]
    fn works_over_floats() {
        let a = vec![vec![1.0, -1.0, 0.0], vec![0.0, 1.0, -1.0]];
        let ker = nullspace(a, 3);
        assert_eq!(ker, vec![vec![1.0, 1.0, 1.0]]);
    }

    #[test]
    fn fractional_pivots() {
        // 3x + 2y = 0 → (−2/3, 1)
        let ker = nullspace(mat(&[&[3, 2]]), 2);
        assert_eq!(ker, vec![vec![Rational::new((-2).into(), 3.into()), q(1)]]);
    }
}
