//! Small dense helpers: row reduction over any [`Scalar`], and `f64` vector
//! utilities.

use alloc::vec;
use alloc::vec::Vec;

use crate::scalar::Scalar;

/// Relative pivot threshold used for floating-point row reduction.
pub const FLOAT_PIVOT_TOL: f64 = 1e-9;

fn negligible<S: Scalar>(value: &S, scale: f64) -> bool {
    if S::EXACT {
        value.is_zero()
    } else {
        value.to_f64().abs() <= FLOAT_PIVOT_TOL * scale
    }
}

/// Reduces `rows` to reduced row echelon form in place, with partial
/// pivoting over the first `ncols` columns; any further (augmented) columns
/// are carried along. Returns the pivot columns; rows past `pivots.len()` are
/// (numerically) zero in the first `ncols` columns.
pub fn rref<S: Scalar>(rows: &mut [Vec<S>], ncols: usize) -> Vec<usize> {
    let scale = rows
        .iter()
        .flat_map(|r| r.iter())
        .map(|v| v.to_f64().abs())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= rows.len() {
            break;
        }
        let best = (row..rows.len())
            .max_by(|&a, &b| {
                rows[a][col]
                    .to_f64()
                    .abs()
                    .partial_cmp(&rows[b][col].to_f64().abs())
                    .unwrap_or(core::cmp::Ordering::Equal)
            })
            .unwrap();
        let best = if S::EXACT {
            match (row..rows.len()).find(|&r| !rows[r][col].is_zero()) {
                Some(r) => r,
                None => continue,
            }
        } else {
            best
        };
        if negligible(&rows[best][col], scale) {
            if !S::EXACT {
                for r in row..rows.len() {
                    rows[r][col] = S::zero();
                }
            }
            continue;
        }
        rows.swap(row, best);
        let pivot = rows[row][col].clone();
        for v in rows[row].iter_mut() {
            *v = v.clone() / pivot.clone();
        }
        for r in 0..rows.len() {
            if r == row || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone();
            for c in 0..rows[row].len() {
                let delta = factor.clone() * rows[row][c].clone();
                rows[r][c] = rows[r][c].clone() - delta;
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank<S: Scalar>(vectors: &[Vec<S>], ncols: usize) -> usize {
    let mut rows = vectors.to_vec();
    rref(&mut rows, ncols).len()
}

/// Basis of `{v : rows * v = 0}`.
pub fn nullspace<S: Scalar>(rows: &[Vec<S>], ncols: usize) -> Vec<Vec<S>> {
    let mut work = rows.to_vec();
    let pivots = rref(&mut work, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![S::zero(); ncols];
        v[free] = S::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -work[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves `sum_j u_j columns[j] = target` when the columns are independent.
/// Returns the coefficients of the (least-squares in the float case) solution.
pub fn solve_in_span<S: Scalar>(columns: &[Vec<S>], target: &[S]) -> Vec<S> {
    let k = columns.len();
    let n = target.len();
    let mut rows: Vec<Vec<S>> = (0..n)
        .map(|i| {
            let mut row: Vec<S> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut rows, k);
    let mut u = vec![S::zero(); k];
    for (r, &pc) in pivots.iter().enumerate() {
        u[pc] = rows[r][k].clone();
    }
    u
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add_scaled(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

pub fn scaled(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| s * x).collect()
}

/// Modified Gram-Schmidt with one re-orthogonalisation pass. Vectors whose
/// remaining norm falls below `1e-10` of their original norm are dropped.
pub fn orthonormalize(vectors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let original = norm(v);
        if original == 0.0 {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let c = dot(&w, q);
                w = add_scaled(&w, -c, q);
            }
        }
        let remaining = norm(&w);
        if remaining > 1e-10 * original {
            out.push(scaled(&w, 1.0 / remaining));
        }
    }
    out
}
