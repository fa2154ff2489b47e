//! Weight functions on the moment polytope.
//!
//! Constructors for the weight families of the weighted cscK catalogue
//! (constant/cscK, extremal, soliton, polynomial/fibration, cone), the
//! continuity-path weight ṽ, positivity and log-concavity checks, and
//! Bernstein approximation.

mod bernstein;
mod expr;
mod poly;

pub use bernstein::bernstein_approx;
pub use expr::{CompiledExpr, DomainError, Exponent, WeightExpr};
pub use poly::MultiPoly;

use crate::grid::polytope_grid;
use crate::linalg::sym_eig_max;
use crate::polytope::{AffineFunctional, LabeledPolytope};
use crate::scalar::{Rat, Scalar};
use num_traits::Signed;
use num_traits::Zero;
#[allow(unused_imports)]
use num_traits::FromPrimitive;

/// Errors from weight construction and checks.
#[derive(Debug, Clone, thiserror::Error)]
pub enum WeightError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("{what} is not positive on the polytope (min {min} at {at:?})")]
    NotPositive {
        what: String,
        min: f64,
        at: Vec<f64>,
    },
}

/// A `(v, w)` pair with the checks the existence theory cares about.
#[derive(Debug, Clone)]
pub struct WeightPair {
    pub v: WeightExpr,
    pub w: WeightExpr,
    pub v_positivity: Option<PositivityStatus>,
    pub v_log_concavity: Option<LogConcavityStatus>,
    pub normalization_residual: Option<f64>,
}

impl WeightPair {
    pub fn new(v: WeightExpr, w: WeightExpr) -> Self {
        Self {
            v,
            w,
            v_positivity: None,
            v_log_concavity: None,
            normalization_residual: None,
        }
    }
}

/// Outcome of [`is_positive_on`].
#[derive(Debug, Clone, PartialEq)]
pub enum PositivityStatus {
    /// Structurally positive: products/sums/quotients of positive affine
    /// powers, exponentials and positive constants, bases checked exactly
    /// at the vertices.
    Certified,
    /// Positive at every sample of the depth grid.
    SampledPositive { min: f64, argmin: Vec<f64> },
    FailedAt { at: Vec<f64>, value: f64 },
}

impl PositivityStatus {
    pub fn is_positive(&self) -> bool {
        !matches!(self, PositivityStatus::FailedAt { .. })
    }
}

/// Outcome of [`is_log_concave_on`].
#[derive(Debug, Clone, PartialEq)]
pub enum LogConcavityStatus {
    /// Structurally log-concave: constants, exponentials of affine
    /// functions, and products of nonnegative powers of positive affine
    /// functions (closed under products and positive scaling).
    Certified,
    /// Largest log-Hessian eigenvalue over the grid was ≤ tol.
    SampledConcave { max_eigenvalue: f64 },
    FailedAt { at: Vec<f64>, eigenvalue: f64 },
}

impl LogConcavityStatus {
    pub fn is_log_concave(&self) -> bool {
        !matches!(self, LogConcavityStatus::FailedAt { .. })
    }
}

/// Soliton weight `w = 2 v (n + ⟨d log v, x⟩)`, built symbolically as
/// `2 (n v + ⟨∇v, x⟩)` (identical since `v ⟨d log v, x⟩ = ⟨∇v, x⟩`).
pub fn soliton_w(v: &WeightExpr, n: usize) -> WeightExpr {
    let nv = WeightExpr::product(vec![
        WeightExpr::scalar_i64(n as i64),
        v.clone(),
    ]);
    WeightExpr::sum(vec![nv, v.grad_dot_x(n)]).scaled(Rat::from_integer(2.into()))
}

/// Continuity-path weight `ṽ = n + ⟨∇v, x⟩ / v`.
pub fn tilde_v(v: &WeightExpr, n: usize) -> WeightExpr {
    WeightExpr::sum(vec![
        WeightExpr::scalar_i64(n as i64),
        WeightExpr::quotient(v.grad_dot_x(n), v.clone()),
    ])
}

/// Cone weights `v = ℓ^{−n−1}, w = a ℓ^{−n−2}` for a positive affine ℓ.
pub fn cone_weights(
    ell: &AffineFunctional<Rat>,
    a: Rat,
    n: usize,
    polytope: &LabeledPolytope,
) -> Result<WeightPair, WeightError> {
    // ℓ is affine, so positivity on P is its positivity at the vertices
    let mut min: Option<(Rat, Vec<Rat>)> = None;
    for vtx in polytope.vertices() {
        let val = ell.eval(vtx);
        if min.as_ref().map_or(true, |(m, _)| val < *m) {
            min = Some((val, vtx.clone()));
        }
    }
    let (min_val, argmin) = min.expect("polytope has vertices");
    if min_val <= Rat::zero() {
        return Err(WeightError::NotPositive {
            what: "cone weight base ℓ".into(),
            min: min_val.approx(),
            at: argmin.iter().map(|c| c.approx()).collect(),
        });
    }
    let v = WeightExpr::aff_pow(ell.clone(), Exponent::int(-(n as i64) - 1));
    let w = WeightExpr::aff_pow(ell.clone(), Exponent::int(-(n as i64) - 2)).scaled(a);
    let mut pair = WeightPair::new(v, w);
    pair.v_positivity = Some(PositivityStatus::Certified);
    Ok(pair)
}

/// Positivity of a weight on the polytope: structural certificate where the
/// tree shape allows it, otherwise a deterministic grid scan.
pub fn is_positive_on(
    e: &WeightExpr,
    polytope: &LabeledPolytope,
    grid_depth: u32,
) -> PositivityStatus {
    if certified_positive(e, polytope) {
        return PositivityStatus::Certified;
    }
    let grid = polytope_grid(polytope, grid_depth);
    let compiled = e.compile();
    let mut min: Option<(f64, Vec<f64>)> = None;
    for p in &grid.points {
        let val = match compiled.eval(p) {
            Ok(v) => v,
            Err(err) => {
                return PositivityStatus::FailedAt {
                    at: err.at,
                    value: f64::NEG_INFINITY,
                }
            }
        };
        if min.as_ref().map_or(true, |(m, _)| val < *m) {
            min = Some((val, p.clone()));
        }
    }
    let (min, argmin) = min.expect("nonempty grid");
    if min <= 0.0 {
        PositivityStatus::FailedAt {
            at: argmin,
            value: min,
        }
    } else {
        PositivityStatus::SampledPositive { min, argmin }
    }
}

/// Structural positivity: positive scalars, exponentials, affine powers with
/// base positive at all vertices, and sums/products/quotients thereof.
fn certified_positive(e: &WeightExpr, polytope: &LabeledPolytope) -> bool {
    let base_positive = |a: &AffineFunctional<Rat>| {
        polytope.vertices().iter().all(|v| a.eval(v) > Rat::zero())
    };
    match e {
        WeightExpr::Scalar(c) => *c > Rat::zero(),
        WeightExpr::Poly(p) => p.as_constant().map_or(false, |c| c > Rat::zero()),
        WeightExpr::AffPow { base, .. } => base_positive(base),
        WeightExpr::ExpAff(_) => true,
        WeightExpr::Sum(args) | WeightExpr::Product(args) => {
            args.iter().all(|a| certified_positive(a, polytope))
        }
        WeightExpr::Quotient(a, b) => {
            certified_positive(a, polytope) && certified_positive(b, polytope)
        }
    }
}

/// Log-concavity of a positive weight: structural certificate, otherwise the
/// largest eigenvalue of the exact symbolic log-Hessian on the grid, tested
/// against `tol`.
pub fn is_log_concave_on(
    v: &WeightExpr,
    polytope: &LabeledPolytope,
    grid_depth: u32,
    tol: f64,
) -> Result<LogConcavityStatus, WeightError> {
    if certified_log_concave(v, polytope) {
        return Ok(LogConcavityStatus::Certified);
    }
    let grid = polytope_grid(polytope, grid_depth);
    let compiled = v.compile();
    let n = polytope.dim();
    let mut max_eig = f64::NEG_INFINITY;
    for p in &grid.points {
        let (val, g, h) = compiled.value_grad_hess(p)?;
        if val <= 0.0 {
            return Err(WeightError::NotPositive {
                what: "log-concavity argument v".into(),
                min: val,
                at: p.clone(),
            });
        }
        // Hess(log v) = H/v − (∇v)(∇v)ᵀ / v²
        let mut log_h = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                log_h[i][j] = h[i][j] / val - g[i] * g[j] / (val * val);
            }
        }
        let eig = sym_eig_max(&log_h);
        if eig > tol {
            return Ok(LogConcavityStatus::FailedAt {
                at: p.clone(),
                eigenvalue: eig,
            });
        }
        max_eig = max_eig.max(eig);
    }
    Ok(LogConcavityStatus::SampledConcave {
        max_eigenvalue: max_eig,
    })
}

/// Structural log-concavity: log v is a nonnegative combination of concave
/// terms plus an affine function.
fn certified_log_concave(v: &WeightExpr, polytope: &LabeledPolytope) -> bool {
    let base_positive = |a: &AffineFunctional<Rat>| {
        polytope.vertices().iter().all(|x| a.eval(x) > Rat::zero())
    };
    match v {
        WeightExpr::Scalar(c) => *c > Rat::zero(),
        WeightExpr::Poly(p) => p.as_constant().map_or(false, |c| c > Rat::zero()),
        WeightExpr::ExpAff(_) => true,
        WeightExpr::AffPow { base, exponent } => {
            let nonneg = match exponent {
                Exponent::Rational(r) => !r.is_negative(),
                Exponent::Float(f) => *f >= 0.0,
            };
            nonneg && base_positive(base)
        }
        // log of a product is the sum of the logs
        WeightExpr::Product(args) => args.iter().all(|a| certified_log_concave(a, polytope)),
        _ => false,
    }
}

/// Max |e1 − e2| over the depth grid.
pub fn sup_error_on_grid(
    e1: &WeightExpr,
    e2: &WeightExpr,
    polytope: &LabeledPolytope,
    grid_depth: u32,
) -> Result<f64, WeightError> {
    let grid = polytope_grid(polytope, grid_depth);
    let c1 = e1.compile();
    let c2 = e2.compile();
    let mut sup = 0.0f64;
    for p in &grid.points {
        let d = (c1.eval(p)? - c2.eval(p)?).abs();
        sup = sup.max(d);
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn aff(linear: &[i64], offset: (i64, i64)) -> AffineFunctional<Rat> {
        AffineFunctional::new(
            linear.iter().map(|&c| rat(c, 1)).collect(),
            rat(offset.0, offset.1),
        )
    }

    fn unit_square() -> LabeledPolytope {
        LabeledPolytope::from_facets(
            2,
            vec![
                aff(&[1, 0], (0, 1)),
                aff(&[-1, 0], (1, 1)),
                aff(&[0, 1], (0, 1)),
                aff(&[0, -1], (1, 1)),
            ],
        )
        .unwrap()
    }

    fn segment() -> LabeledPolytope {
        LabeledPolytope::from_facets(1, vec![aff(&[1], (0, 1)), aff(&[-1], (1, 1))]).unwrap()
    }

    #[test]
    fn soliton_constant_weight() {
        // v = 1, n = 2 → w ≡ 4
        let w = soliton_w(&WeightExpr::one(), 2);
        assert_eq!(w.eval_exact(&[rat(1, 3), rat(1, 7)]).unwrap(), Some(rat(4, 1)));
    }

    #[test]
    fn soliton_exp_weight() {
        // v = e^{⟨ξ,x⟩} → w = 2 e^{⟨ξ,x⟩}(n + ⟨ξ,x⟩)
        let xi = aff(&[1, -2], (0, 1));
        let v = WeightExpr::exp_aff(xi.clone());
        let w = soliton_w(&v, 2);
        for p in [[0.3, 0.4], [0.9, 0.1]] {
            let t = xi.approx().eval(&p);
            let expected = 2.0 * t.exp() * (2.0 + t);
            assert!((w.eval_f64(&p).unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn soliton_affine_weight() {
        // v = ℓ = ⟨u,x⟩+c → w = 2((n+1)ℓ − c)
        let ell = aff(&[2, 1], (3, 1));
        let v = WeightExpr::aff_pow(ell.clone(), Exponent::int(1));
        let w = soliton_w(&v, 2);
        let p = [rat(1, 5), rat(2, 5)];
        let lv = ell.eval(&p);
        let expected = (Rat::from_integer(3.into()) * lv - rat(3, 1)) * Rat::from_integer(2.into());
        assert_eq!(w.eval_exact(&p).unwrap(), Some(expected));
    }

    #[test]
    fn tilde_v_examples() {
        // v = 1 → ṽ ≡ n
        let t = tilde_v(&WeightExpr::one(), 3);
        assert_eq!(
            t.eval_exact(&vec![rat(1, 2); 3]).unwrap(),
            Some(rat(3, 1))
        );
        // v = e^{⟨ξ,x⟩} → ṽ = n + ⟨ξ,x⟩
        let xi = aff(&[1, 1], (0, 1));
        let t = tilde_v(&WeightExpr::exp_aff(xi.clone()), 2);
        let p = [0.25, 0.5];
        assert!((t.eval_f64(&p).unwrap() - (2.0 + 0.75)).abs() < 1e-14);
        // v = x1 + 2, at (1, 0): ṽ = n + 1/3
        let v = WeightExpr::aff_pow(aff(&[1, 0], (2, 1)), Exponent::int(1));
        let t = tilde_v(&v, 2);
        assert_eq!(
            t.eval_exact(&[rat(1, 1), rat(0, 1)]).unwrap(),
            Some(rat(7, 3))
        );
    }

    #[test]
    fn soliton_identity_with_tilde() {
        // soliton_w(v,n) = 2 v ṽ pointwise
        let v = WeightExpr::aff_pow(aff(&[1, 1], (2, 1)), Exponent::int(3));
        let w = soliton_w(&v, 2);
        let t = tilde_v(&v, 2);
        for p in [[0.2, 0.3], [0.8, 0.9], [0.0, 0.0]] {
            let lhs = w.eval_f64(&p).unwrap();
            let rhs = 2.0 * v.eval_f64(&p).unwrap() * t.eval_f64(&p).unwrap();
            assert!((lhs - rhs).abs() < 1e-11);
        }
    }

    #[test]
    fn cone_weight_construction() {
        let seg = segment();
        let ell = aff(&[1], (1, 1)); // x + 1 > 0 on [0,1]
        let pair = cone_weights(&ell, rat(2, 1), 1, &seg).unwrap();
        // v = (x+1)^{-2}, w = 2(x+1)^{-3}
        assert_eq!(pair.v.eval_exact(&[rat(0, 1)]).unwrap(), Some(rat(1, 1)));
        assert_eq!(pair.v.eval_exact(&[rat(1, 1)]).unwrap(), Some(rat(1, 4)));
        assert_eq!(pair.w.eval_exact(&[rat(1, 1)]).unwrap(), Some(rat(1, 4)));
        assert_eq!(pair.v_positivity, Some(PositivityStatus::Certified));
        // ℓ vanishing at a vertex is rejected
        let bad = aff(&[1], (0, 1));
        assert!(matches!(
            cone_weights(&bad, rat(1, 1), 1, &seg),
            Err(WeightError::NotPositive { .. })
        ));
    }

    #[test]
    fn positivity_statuses() {
        let sq = unit_square();
        assert_eq!(
            is_positive_on(&WeightExpr::one(), &sq, 2),
            PositivityStatus::Certified
        );
        let v = WeightExpr::aff_pow(aff(&[1, 0], (2, 1)), Exponent::int(1));
        assert_eq!(is_positive_on(&v, &sq, 2), PositivityStatus::Certified);
        // x1 − 1/4 fails somewhere with x1 < 1/4
        let bad = WeightExpr::poly(
            MultiPoly::from_affine(&aff(&[1, 0], (-1, 4))),
        );
        match is_positive_on(&bad, &sq, 3) {
            PositivityStatus::FailedAt { at, .. } => assert!(at[0] < 0.25 + 1e-12),
            s => panic!("expected failure, got {s:?}"),
        }
        // positive but not structurally certifiable: 1 + x1², sampled
        let sampled = WeightExpr::sum(vec![
            WeightExpr::one(),
            WeightExpr::poly(MultiPoly::coordinate(2, 0).pow(2).neg().neg()),
        ]);
        match is_positive_on(&sampled, &sq, 2) {
            PositivityStatus::Certified | PositivityStatus::SampledPositive { .. } => {}
            s => panic!("unexpected {s:?}"),
        }
    }

    #[test]
    fn log_concavity_statuses() {
        let sq = unit_square();
        assert_eq!(
            is_log_concave_on(&WeightExpr::one(), &sq, 2, 1e-9).unwrap(),
            LogConcavityStatus::Certified
        );
        // (x1+2)³(x2+1): product of positive affine powers
        let v = WeightExpr::product(vec![
            WeightExpr::aff_pow(aff(&[1, 0], (2, 1)), Exponent::int(3)),
            WeightExpr::aff_pow(aff(&[0, 1], (1, 1)), Exponent::int(1)),
        ]);
        assert_eq!(
            is_log_concave_on(&v, &sq, 2, 1e-9).unwrap(),
            LogConcavityStatus::Certified
        );
        // 1 + x1² has positive log-Hessian eigenvalue inside [0,1]²
        let bad = WeightExpr::sum(vec![
            WeightExpr::one(),
            WeightExpr::poly(MultiPoly::coordinate(2, 0).pow(2)),
        ]);
        match is_log_concave_on(&bad, &sq, 3, 1e-9).unwrap() {
            LogConcavityStatus::FailedAt { eigenvalue, .. } => assert!(eigenvalue > 0.1),
            s => panic!("expected failure, got {s:?}"),
        }
        // negative affine power is NOT structurally certified (it is log-convex)
        let conevw = WeightExpr::aff_pow(aff(&[1, 0], (2, 1)), Exponent::int(-3));
        match is_log_concave_on(&conevw, &sq, 2, 1e-9).unwrap() {
            LogConcavityStatus::FailedAt { .. } => {}
            s => panic!("ℓ^{{-3}} should fail the numeric check, got {s:?}"),
        }
    }

    #[test]
    fn sup_error_grid() {
        let sq = unit_square();
        let a = WeightExpr::poly(MultiPoly::coordinate(2, 0));
        assert_eq!(sup_error_on_grid(&a, &a, &sq, 3).unwrap(), 0.0);
        let b = WeightExpr::sum(vec![a.clone(), WeightExpr::scalar(rat(1, 10))]);
        let e = sup_error_on_grid(&a, &b, &sq, 2).unwrap();
        assert!((e - 0.1).abs() < 1e-14);
    }
}
