//! Tensor-product Bernstein approximation on a box.
//!
//! `B_d[f]` samples `f` on the uniform (d+1)^n tensor grid and returns the
//! Bernstein polynomial of degree `d` per coordinate, expanded exactly into
//! monomial form. Samples are rationalized exactly (every finite float is a
//! rational), so the operator itself introduces no rounding: it reproduces
//! affine functions exactly for `d ≥ 1` and preserves positivity of the
//! sampled values.

use super::poly::MultiPoly;
use crate::polytope::AffineFunctional;
use crate::scalar::{rat_from_f64, Rat, Scalar};
use num_traits::{FromPrimitive, One, Zero};

/// Bernstein polynomial of per-coordinate degree `d` for `f` on the box
/// `∏ [lo_i, hi_i]`.
pub fn bernstein_approx(
    sampler: impl Fn(&[f64]) -> f64,
    lo: &[Rat],
    hi: &[Rat],
    degree: u32,
) -> MultiPoly<Rat> {
    let n = lo.len();
    assert_eq!(hi.len(), n, "box corners must agree in dimension");
    for i in 0..n {
        assert!(lo[i] < hi[i], "box must have positive extent in axis {i}");
    }
    let d = degree;
    // per-coordinate Bernstein basis polynomials C(d,k) s^k (1-s)^{d-k},
    // with s_i = (x_i - lo_i)/(hi_i - lo_i), expanded in ambient variables
    let basis: Vec<Vec<MultiPoly<Rat>>> = (0..n)
        .map(|i| {
            let width = hi[i].clone() - lo[i].clone();
            let inv = Rat::one() / width;
            let mut lin = vec![Rat::zero(); n];
            lin[i] = inv.clone();
            let s = MultiPoly::from_affine(&AffineFunctional::new(
                lin,
                -lo[i].clone() * inv,
            ));
            let one_minus = MultiPoly::constant(n, Rat::one()).sub(&s);
            (0..=d)
                .map(|k| {
                    s.pow(k)
                        .mul(&one_minus.pow(d - k))
                        .scale(&binomial(d, k))
                })
                .collect()
        })
        .collect();
    let mut out = MultiPoly::zero(n);
    let mut index = vec![0u32; n];
    loop {
        let node_exact: Vec<Rat> = (0..n)
            .map(|i| {
                if d == 0 {
                    lo[i].clone()
                } else {
                    lo[i].clone()
                        + (hi[i].clone() - lo[i].clone())
                            * Rat::new(num_bigint::BigInt::from(index[i]), num_bigint::BigInt::from(d))
                }
            })
            .collect();
        let node_f64: Vec<f64> = node_exact.iter().map(|c| c.approx()).collect();
        let sample = rat_from_f64(sampler(&node_f64)).expect("sampler returned non-finite value");
        if !sample.is_zero() {
            let mut term = MultiPoly::constant(n, sample);
            for i in 0..n {
                term = term.mul(&basis[i][index[i] as usize]);
            }
            out = out.add(&term);
        }
        // advance tensor index
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if index[i] < d {
                index[i] += 1;
                break;
            }
            index[i] = 0;
            i += 1;
        }
    }
}

fn binomial(d: u32, k: u32) -> Rat {
    let mut num = Rat::one();
    for j in 0..k {
        num = num * Rat::from_u32(d - j).unwrap() / Rat::from_u32(j + 1).unwrap();
    }
    num
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn constant_reproduced_exactly() {
        let lo = vec![rat(0, 1), rat(0, 1)];
        let hi = vec![rat(1, 1), rat(2, 1)];
        for d in [0, 1, 3] {
            let b = bernstein_approx(|_| 2.5, &lo, &hi, d);
            assert_eq!(b.as_constant(), Some(rat(5, 2)));
        }
    }

    #[test]
    fn affine_reproduced_for_d_ge_1() {
        let lo = vec![rat(0, 1)];
        let hi = vec![rat(1, 1)];
        let b = bernstein_approx(|x| x[0], &lo, &hi, 1);
        assert_eq!(b, MultiPoly::coordinate(1, 0));
        // and on a shifted box in 2-D
        let lo = vec![rat(-1, 1), rat(1, 2)];
        let hi = vec![rat(2, 1), rat(3, 1)];
        let b = bernstein_approx(|x| 2.0 * x[0] - 0.5 * x[1] + 1.0, &lo, &hi, 2);
        let expected = MultiPoly::from_terms(
            2,
            vec![
                (vec![1, 0], rat(2, 1)),
                (vec![0, 1], rat(-1, 2)),
                (vec![0, 0], rat(1, 1)),
            ],
        );
        assert_eq!(b, expected);
    }

    #[test]
    fn quadratic_b2_formula() {
        // B₂[x²] on [0,1] = x/2 + x²/2, max error 1/8 at x = 1/2
        let lo = vec![rat(0, 1)];
        let hi = vec![rat(1, 1)];
        let b = bernstein_approx(|x| x[0] * x[0], &lo, &hi, 2);
        let expected = MultiPoly::from_terms(
            1,
            vec![(vec![1], rat(1, 2)), (vec![2], rat(1, 2))],
        );
        assert_eq!(b, expected);
        let err = b.eval(&[rat(1, 2)]) - rat(1, 4);
        assert_eq!(err, rat(1, 8));
    }

    #[test]
    fn positivity_preservation() {
        // samples ≥ 0 ⟹ B_d[f] ≥ 0 on the box (coefficients in the
        // Bernstein basis are the samples)
        let lo = vec![rat(0, 1)];
        let hi = vec![rat(1, 1)];
        let b = bernstein_approx(|x| (x[0] - 0.3).abs(), &lo, &hi, 4);
        for k in 0..=20 {
            let x = rat(k, 20);
            assert!(b.eval(&[x]) >= rat(0, 1));
        }
    }
}
