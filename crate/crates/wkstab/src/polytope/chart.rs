//! Lattice facet charts.
//!
//! For a facet with primitive integer normal `u`, a ℤ-basis of the
//! sublattice `u^⊥ ∩ ℤⁿ` parametrizes the facet so that the boundary
//! measure dσ (pinned by `dL_j ∧ dσ = −dx`) pulls back to plain Lebesgue
//! measure on the chart. Equivalently dσ is Euclidean facet measure divided
//! by ‖u‖₂; the chart makes that normalization exact.

use super::body::{AffineFunctional, ConvexPolytope};
use crate::linalg;
use crate::scalar::{Rat, Scalar};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Affine parametrization `φ(t) = origin + basis · t` of the hyperplane of
/// one facet, with `Q = chart_body` the facet in chart coordinates and
/// `∫_{F_j} g dσ = scale · ∫_Q g(φ(t)) dt`.
#[derive(Debug, Clone)]
pub struct FacetChart {
    pub facet: usize,
    pub origin: Vec<Rat>,
    /// Columns: a ℤ-basis of `u^⊥ ∩ ℤⁿ` (empty when the polytope is 1-D).
    pub basis: Vec<Vec<Rat>>,
    /// Facet in chart coordinates, an (n−1)-polytope (0-D point for n = 1).
    pub chart_body: ConvexPolytope<Rat>,
    /// Always 1 for a lattice basis chart; kept explicit because downstream
    /// integration multiplies by it.
    pub scale: Rat,
}

impl FacetChart {
    pub fn embed(&self, t: &[Rat]) -> Vec<Rat> {
        let n = self.origin.len();
        let mut x = self.origin.clone();
        for (col, ti) in self.basis.iter().zip(t) {
            for i in 0..n {
                x[i] = x[i].clone() + col[i].clone() * ti.clone();
            }
        }
        x
    }

    pub fn embed_f64(&self, t: &[f64]) -> Vec<f64> {
        let n = self.origin.len();
        let mut x: Vec<f64> = self.origin.iter().map(|c| c.approx()).collect();
        for (col, ti) in self.basis.iter().zip(t) {
            for i in 0..n {
                x[i] += col[i].approx() * ti;
            }
        }
        x
    }

    /// Pullback of an affine functional to chart coordinates.
    pub fn pullback(&self, h: &AffineFunctional<Rat>) -> AffineFunctional<Rat> {
        h.pullback(&self.origin, &self.basis)
    }
}

/// Columns of a unimodular matrix `U` with `u · U = (1, 0, …, 0)`, for a
/// primitive integer vector `u`. Columns 2..n form a ℤ-basis of `u^⊥ ∩ ℤⁿ`.
pub fn unimodular_complement(u: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = u.len();
    let mut a: Vec<BigInt> = u.to_vec();
    let mut cols: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let mut c = vec![BigInt::zero(); n];
            c[j] = BigInt::one();
            c
        })
        .collect();
    // column reduction of the row vector `a` to (±g, 0, …, 0)
    loop {
        let nonzero: Vec<usize> = (0..n).filter(|&j| !a[j].is_zero()).collect();
        assert!(!nonzero.is_empty(), "zero normal has no complement");
        let &jmin = nonzero
            .iter()
            .min_by_key(|&&j| a[j].abs())
            .expect("nonempty");
        if jmin != 0 {
            a.swap(0, jmin);
            cols.swap(0, jmin);
        }
        if nonzero.len() == 1 && !a[0].is_zero() {
            break;
        }
        for j in 1..n {
            if a[j].is_zero() {
                continue;
            }
            let q = div_round(&a[j], &a[0]);
            let t = &a[0] * &q;
            a[j] -= t;
            for i in 0..n {
                let t = &cols[0][i] * &q;
                cols[j][i] -= t;
            }
        }
        if (1..n).all(|j| a[j].is_zero()) {
            break;
        }
    }
    debug_assert!(a[0].abs().is_one(), "normal must be primitive");
    cols.into_iter().skip(1).collect()
}

/// Rounded division keeping remainders small (balanced Euclid step).
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let (q, r) = num_integer::Integer::div_rem(a, b);
    if &r.abs() * &two > b.abs() {
        if (r.sign() == b.sign()) || r.is_zero() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Left inverse of the chart: solve `basis · t = x − origin` through an
/// invertible row subset.
pub struct ChartInverse {
    rows: Vec<usize>,
    inv_rows: Vec<Vec<Rat>>, // (n-1)×(n-1) matrix rows of basis restricted
    origin: Vec<Rat>,
}

impl ChartInverse {
    pub fn new(origin: &[Rat], basis: &[Vec<Rat>]) -> Self {
        let k = basis.len();
        let n = origin.len();
        if k == 0 {
            return Self {
                rows: Vec::new(),
                inv_rows: Vec::new(),
                origin: origin.to_vec(),
            };
        }
        // find k rows of the n×k basis matrix that are independent
        let mut rows: Vec<usize> = Vec::new();
        for candidate in 0..n {
            let mut trial = rows.clone();
            trial.push(candidate);
            let m: Vec<Vec<Rat>> = trial
                .iter()
                .map(|&r| basis.iter().map(|col| col[r].clone()).collect())
                .collect();
            if linalg::rank(&m) == trial.len() {
                rows = trial;
                if rows.len() == k {
                    break;
                }
            }
        }
        assert_eq!(rows.len(), k, "chart basis must have full column rank");
        let square: Vec<Vec<Rat>> = rows
            .iter()
            .map(|&r| basis.iter().map(|col| col[r].clone()).collect())
            .collect();
        Self {
            rows,
            inv_rows: square,
            origin: origin.to_vec(),
        }
    }

    pub fn apply(&self, x: &[Rat]) -> Vec<Rat> {
        if self.rows.is_empty() {
            return Vec::new();
        }
        let rhs: Vec<Rat> = self
            .rows
            .iter()
            .map(|&r| x[r].clone() - self.origin[r].clone())
            .collect();
        linalg::solve(&self.inv_rows, &rhs).expect("invertible by construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn complement_is_orthogonal_and_unimodular() {
        for u in [
            big(&[1, 0]),
            big(&[-1, -1]),
            big(&[2, 3]),
            big(&[1, -2, 3]),
            big(&[6, 10, 15]),
            big(&[0, 1, 0, 0]),
        ] {
            let cols = unimodular_complement(&u);
            assert_eq!(cols.len(), u.len() - 1);
            for c in &cols {
                let d: BigInt = u.iter().zip(c).map(|(a, b)| a * b).sum();
                assert!(d.is_zero(), "column not orthogonal to {u:?}");
            }
            // Gram determinant equals ‖u‖² for a lattice basis of u^⊥ ∩ ℤⁿ
            let k = cols.len();
            let gram: Vec<Vec<Rat>> = (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| {
                            let g: BigInt =
                                cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum();
                            Rat::from_integer(g)
                        })
                        .collect()
                })
                .collect();
            let norm2: BigInt = u.iter().map(|a| a * a).sum();
            assert_eq!(linalg::det(&gram), Rat::from_integer(norm2));
        }
    }

    #[test]
    fn chart_inverse_round_trip() {
        let u = big(&[1, -2, 3]);
        let cols = unimodular_complement(&u);
        let basis: Vec<Vec<Rat>> = cols
            .iter()
            .map(|c| c.iter().map(|x| Rat::from_integer(x.clone())).collect())
            .collect();
        let origin = vec![rat(1, 2), rat(0, 1), rat(1, 3)];
        let inv = ChartInverse::new(&origin, &basis);
        let t = vec![rat(3, 7), rat(-2, 5)];
        let mut x = origin.clone();
        for (col, ti) in basis.iter().zip(&t) {
            for i in 0..3 {
                x[i] = x[i].clone() + col[i].clone() * ti.clone();
            }
        }
        assert_eq!(inv.apply(&x), t);
    }
}
