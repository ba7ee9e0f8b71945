//! Dense exact linear algebra over a [`Scalar`] field.

use crate::scalar::Scalar;

pub type Matrix<S> = Vec<Vec<S>>;

/// Reduces `rows` in place to reduced row echelon form, pivoting only in the
/// first `pivot_cols` columns (trailing columns ride along, e.g. an augmented
/// constant). Zero rows are removed. Returns the pivot column of each row.
pub fn rref<S: Scalar>(rows: &mut Matrix<S>, pivot_cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = S::one() / rows[r][c].clone();
        for v in rows[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..rows[i].len() {
                    let d = f.clone() * rows[r][j].clone();
                    rows[i][j] = rows[i][j].clone() - d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.retain(|row| row.iter().any(|v| !v.is_zero()));
    pivots
}

pub fn rank<S: Scalar>(rows: &[Vec<S>], cols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, cols).len()
}

/// Basis of `{ v : rows * v = 0 }` with `cols` unknowns.
pub fn nullspace<S: Scalar>(rows: &[Vec<S>], cols: usize) -> Vec<Vec<S>> {
    let mut m: Matrix<S> = rows.iter().map(|r| r[..cols].to_vec()).collect();
    let pivots = rref(&mut m, cols);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![S::zero(); cols];
        v[free] = S::one();
        for (row, &p) in m.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Finds `lambda` with `sum_i lambda_i * rows[i] == target`, if any.
pub fn solve_combination<S: Scalar>(rows: &[Vec<S>], target: &[S]) -> Option<Vec<S>> {
    let m = rows.len();
    let n = target.len();
    // Transposed system: columns are the given rows, plus the target.
    let mut aug: Matrix<S> = (0..n)
        .map(|j| {
            let mut r: Vec<S> = rows.iter().map(|row| row[j].clone()).collect();
            r.push(target[j].clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, m + 1);
    if pivots.contains(&m) {
        return None;
    }
    let mut lambda = vec![S::zero(); m];
    for (row, &p) in aug.iter().zip(&pivots) {
        lambda[p] = row[m].clone();
    }
    Some(lambda)
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn max_norm<S: Scalar>(v: &[S]) -> S {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(S::zero)
}

pub fn l1_norm<S: Scalar>(v: &[S]) -> S {
    v.iter().fold(S::zero(), |acc, x| acc + x.abs())
}
