//! Dense linear algebra at desk scale, generic over [`Scalar`].
//!
//! Everything here runs unchanged over exact rationals and floats; the exact
//! pipeline relies on that for vertex enumeration and Gram solves.

use crate::scalar::Scalar;

/// Row-major square or rectangular matrix.
pub type Matrix<T> = Vec<Vec<T>>;

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() - y.clone())
        .collect()
}

pub fn add<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.clone() + y.clone())
        .collect()
}

pub fn scale<T: Scalar>(a: &[T], s: &T) -> Vec<T> {
    a.iter().map(|x| x.clone() * s.clone()).collect()
}

pub fn mat_vec<T: Scalar>(m: &[Vec<T>], x: &[T]) -> Vec<T> {
    m.iter().map(|row| dot(row, x)).collect()
}

/// Solves `A x = b` by Gaussian elimination with largest-|pivot| selection.
/// Returns `None` when `A` is singular (exactly so for exact scalars).
pub fn solve<T: Scalar>(a: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let n = a.len();
    debug_assert!(a.iter().all(|r| r.len() == n) && b.len() == n);
    let mut m: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            m[i][col]
                .abs()
                .partial_cmp(&m[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if m[pivot][col].is_zero() {
            return None;
        }
        m.swap(col, pivot);
        for row in 0..n {
            if row != col && !m[row][col].is_zero() {
                let factor = m[row][col].clone() / m[col][col].clone();
                for k in col..=n {
                    let t = factor.clone() * m[col][k].clone();
                    m[row][k] = m[row][k].clone() - t;
                }
            }
        }
    }
    Some(
        m.iter()
            .enumerate()
            .map(|(i, row)| row[n].clone() / row[i].clone())
            .collect(),
    )
}

/// Determinant by fraction-producing elimination; exact over rationals.
pub fn det<T: Scalar>(a: &[Vec<T>]) -> T {
    let n = a.len();
    let mut m: Vec<Vec<T>> = a.to_vec();
    let mut result = T::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&i| !m[i][col].is_zero()) {
            Some(p) => p,
            None => return T::zero(),
        };
        if pivot != col {
            m.swap(col, pivot);
            result = -result;
        }
        result = result * m[col][col].clone();
        for row in col + 1..n {
            if !m[row][col].is_zero() {
                let factor = m[row][col].clone() / m[col][col].clone();
                for k in col..n {
                    let t = factor.clone() * m[col][k].clone();
                    m[row][k] = m[row][k].clone() - t;
                }
            }
        }
    }
    result
}

/// Rank of a rectangular matrix (rows × cols).
pub fn rank<T: Scalar>(a: &[Vec<T>]) -> usize {
    if a.is_empty() {
        return 0;
    }
    let rows = a.len();
    let cols = a[0].len();
    let mut m = a.to_vec();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let pivot = match (r..rows).find(|&i| !m[i][col].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        m.swap(r, pivot);
        for row in r + 1..rows {
            if !m[row][col].is_zero() {
                let factor = m[row][col].clone() / m[r][col].clone();
                for k in col..cols {
                    let t = factor.clone() * m[r][k].clone();
                    m[row][k] = m[row][k].clone() - t;
                }
            }
        }
        r += 1;
    }
    r
}

/// Affine rank of a point cloud: dimension of the affine hull.
pub fn affine_rank<T: Scalar>(points: &[Vec<T>]) -> usize {
    match points.split_first() {
        None => 0,
        Some((p0, rest)) => {
            let diffs: Vec<Vec<T>> = rest.iter().map(|p| sub(p, p0)).collect();
            rank(&diffs)
        }
    }
}

/// A one-dimensional kernel vector of the rows of `a`, if the kernel has
/// dimension exactly one. Scaled arbitrarily; exact over rationals.
pub fn kernel_direction<T: Scalar>(a: &[Vec<T>], n: usize) -> Option<Vec<T>> {
    let mut m = a.to_vec();
    let rows = m.len();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..n {
        if r == rows {
            break;
        }
        let pivot = match (r..rows).find(|&i| !m[i][col].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        m.swap(r, pivot);
        let inv = T::one() / m[r][col].clone();
        for k in 0..n {
            m[r][k] = m[r][k].clone() * inv.clone();
        }
        for row in 0..rows {
            if row != r && !m[row][col].is_zero() {
                let factor = m[row][col].clone();
                for k in 0..n {
                    let t = factor.clone() * m[r][k].clone();
                    m[row][k] = m[row][k].clone() - t;
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
    }
    if r + 1 != n {
        return None;
    }
    let free_col = (0..n).find(|c| !pivot_cols.contains(c))?;
    let mut y = vec![T::zero(); n];
    y[free_col] = T::one();
    for (row, &pc) in pivot_cols.iter().enumerate() {
        y[pc] = -m[row][free_col].clone();
    }
    Some(y)
}

/// Largest eigenvalue of a small symmetric matrix, by cyclic Jacobi sweeps.
pub fn sym_eig_max(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    if n == 0 {
        return f64::NEG_INFINITY;
    }
    if n == 1 {
        return a[0][0];
    }
    let mut m: Vec<Vec<f64>> = a.to_vec();
    for _sweep in 0..64 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                off += m[i][j] * m[i][j];
            }
        }
        if off.sqrt() < 1e-14 * (1.0 + frobenius(&m)) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    (0..n).map(|i| m[i][i]).fold(f64::NEG_INFINITY, f64::max)
}

fn frobenius(m: &[Vec<f64>]) -> f64 {
    m.iter()
        .flat_map(|r| r.iter())
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
}

/// `f64` solve with two rounds of iterative refinement plus a 1-norm
/// condition estimate from the explicit inverse (fine at n ≤ 5).
pub fn solve_refined_f64(a: &[Vec<f64>], b: &[f64]) -> Option<(Vec<f64>, f64)> {
    let n = a.len();
    let mut x = solve(a, b)?;
    for _ in 0..2 {
        let r: Vec<f64> = (0..n).map(|i| b[i] - dot(&a[i], &x)).collect();
        let dx = solve(a, &r)?;
        for i in 0..n {
            x[i] += dx[i];
        }
    }
    let mut inv_norm = 0.0f64;
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let col = solve(a, &e)?;
        inv_norm = inv_norm.max(col.iter().map(|v| v.abs()).sum());
    }
    let a_norm = (0..n)
        .map(|j| a.iter().map(|row| row[j].abs()).sum::<f64>())
        .fold(0.0, f64::max);
    Some((x, a_norm * inv_norm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};
    use num_traits::Zero;

    #[test]
    fn exact_solve_and_det() {
        let a = vec![
            vec![rat(2, 1), rat(1, 1)],
            vec![rat(1, 1), rat(3, 1)],
        ];
        let b = vec![rat(5, 1), rat(10, 1)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![rat(1, 1), rat(3, 1)]);
        assert_eq!(det(&a), rat(5, 1));
        let singular = vec![
            vec![rat(1, 1), rat(2, 1)],
            vec![rat(2, 1), rat(4, 1)],
        ];
        assert!(solve::<Rat>(&singular, &b).is_none());
        assert_eq!(det(&singular), rat(0, 1));
    }

    #[test]
    fn rank_and_kernel() {
        let a = vec![
            vec![rat(1, 1), rat(1, 1), rat(0, 1)],
            vec![rat(0, 1), rat(1, 1), rat(1, 1)],
        ];
        assert_eq!(rank(&a), 2);
        let y = kernel_direction(&a, 3).unwrap();
        assert!(!y.iter().all(|c| c.is_zero()));
        assert!(dot(&a[0], &y).is_zero());
        assert!(dot(&a[1], &y).is_zero());
    }

    #[test]
    fn jacobi_eigenvalue() {
        // eigenvalues 3 and 1
        let m = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        assert!((sym_eig_max(&m) - 3.0).abs() < 1e-12);
        let d = vec![
            vec![-1.0, 0.0, 0.0],
            vec![0.0, 5.0, 0.0],
            vec![0.0, 0.0, 2.0],
        ];
        assert!((sym_eig_max(&d) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn refined_solve() {
        let a = vec![vec![4.0, 1.0], vec![1.0, 3.0]];
        let b = vec![9.0, 7.0];
        let (x, cond) = solve_refined_f64(&a, &b).unwrap();
        assert!((x[0] - 20.0 / 11.0).abs() < 1e-14);
        assert!((x[1] - 19.0 / 11.0).abs() < 1e-14);
        assert!(cond >= 1.0 && cond < 10.0);
    }
}
