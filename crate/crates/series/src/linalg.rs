//! Dense exact linear algebra over any [`Field`].

use crate::error::SeriesError;
use crate::field::Field;

/// Row-reduces `[a | b]` in place; returns pivot columns.
fn eliminate<F: Field>(a: &mut [Vec<F>], b: &mut [Vec<F>], cols: usize) -> Vec<usize> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        b.swap(r, p);
        let inv = a[r][c].inverse().expect("nonzero pivot");
        for x in a[r].iter_mut() {
            *x = x.times(&inv);
        }
        for x in b[r].iter_mut() {
            *x = x.times(&inv);
        }
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in c..cols {
                let t = a[r][j].times(&f);
                a[i][j] = a[i][j].minus(&t);
            }
            for j in 0..b[i].len() {
                let t = b[r][j].times(&f);
                b[i][j] = b[i][j].minus(&t);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solves `A X = B` for every column of `B`; the solution must exist and be unique.
pub fn solve_many<F: Field>(a: &[Vec<F>], b: &[Vec<F>], cols: usize) -> Result<Vec<Vec<F>>, SeriesError> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    let nrhs = b.first().map(Vec::len).unwrap_or(0);
    let pivots = eliminate(&mut a, &mut b, cols);
    for row in b.iter().skip(pivots.len()) {
        if row.iter().any(|x| !x.is_zero()) {
            return Err(SeriesError::NoSolution);
        }
    }
    if pivots.len() < cols {
        return Err(SeriesError::NotUnique(cols - pivots.len()));
    }
    let mut x = vec![vec![F::zero(); nrhs]; cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = b[r].clone();
    }
    Ok(x)
}

/// Solves `A x = b` with a unique solution.
pub fn solve<F: Field>(a: &[Vec<F>], b: &[F], cols: usize) -> Result<Vec<F>, SeriesError> {
    let bm: Vec<Vec<F>> = b.iter().map(|x| vec![x.clone()]).collect();
    Ok(solve_many(a, &bm, cols)?.into_iter().map(|mut v| v.pop().unwrap_or_else(F::zero)).collect())
}

/// Index of the first equation violated by every candidate, for diagnostics:
/// returns the row of `[A | b]` that first makes the system inconsistent.
pub fn first_inconsistent_row<F: Field>(a: &[Vec<F>], b: &[F], cols: usize) -> Option<usize> {
    for k in 1..=a.len() {
        if solve_prefix_consistent(&a[..k], &b[..k], cols) {
            continue;
        }
        return Some(k - 1);
    }
    None
}

fn solve_prefix_consistent<F: Field>(a: &[Vec<F>], b: &[F], cols: usize) -> bool {
    let mut a = a.to_vec();
    let mut bm: Vec<Vec<F>> = b.iter().map(|x| vec![x.clone()]).collect();
    let pivots = eliminate(&mut a, &mut bm, cols);
    bm.iter().skip(pivots.len()).all(|r| r[0].is_zero())
}

pub fn rank<F: Field>(a: &[Vec<F>], cols: usize) -> usize {
    let mut a = a.to_vec();
    let mut b: Vec<Vec<F>> = vec![Vec::new(); a.len()];
    eliminate(&mut a, &mut b, cols).len()
}

/// Inverse of a square matrix.
pub fn inverse<F: Field>(a: &[Vec<F>]) -> Result<Vec<Vec<F>>, SeriesError> {
    let n = a.len();
    let id: Vec<Vec<F>> = (0..n).map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect()).collect();
    solve_many(a, &id, n).map_err(|_| SeriesError::NotInvertible)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::q;

    #[test]
    fn unique_none_and_free() {
        let a = vec![vec![q(1), q(1)], vec![q(1), q(-1)]];
        assert_eq!(solve(&a, &[q(3), q(1)], 2).unwrap(), vec![q(2), q(1)]);
        let a = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert_eq!(solve(&a, &[q(1), q(3)], 2), Err(SeriesError::NoSolution));
        assert_eq!(first_inconsistent_row(&a, &[q(1), q(3)], 2), Some(1));
        assert_eq!(solve(&a, &[q(1), q(2)], 2), Err(SeriesError::NotUnique(1)));
        let inv = inverse(&[vec![q(2), q(1)], vec![q(1), q(1)]]).unwrap();
        assert_eq!(inv, vec![vec![q(1), q(-1)], vec![q(-1), q(2)]]);
    }
}
