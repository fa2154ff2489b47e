//! Semisimple principal fibrations, reduced to their computable content:
//! the weighted problem on the total space is equivalent to the
//! `(p·v, w̃)`-problem on the toric fiber, with
//! `p(x) = ∏_a (⟨p_a, x⟩ + c_a)^{m_a}` and
//! `w̃(x) = w(x) − Σ_a Scal(ω_{B_a}) / (⟨p_a, x⟩ + c_a)`.
//!
//! Each base factor contributes its lattice direction `p_a`, the constant
//! `c_a` keeping `⟨p_a, x⟩ + c_a` positive on `P`, its complex dimension
//! `m_a`, and the constant scalar curvature of its cscK metric.

use crate::polytope::{AffineFunctional, LabeledPolytope};
use crate::scalar::{rat_from_f64, Rat};
use crate::stability::{
    destabilizer_search, sufficient_condition, DestabilizerReport, StabilityError,
    StabilityReport,
};
use crate::weights::{
    is_log_concave_on, is_positive_on, Exponent, WeightError, WeightExpr, WeightPair,
};
use num_traits::Zero;

#[derive(Debug, thiserror::Error)]
pub enum FibrationError {
    #[error("factor {factor}: ⟨p, x⟩ + c is not positive on P (min {min} at vertex {vertex:?})")]
    NotPositive {
        factor: usize,
        min: String,
        vertex: Vec<String>,
    },
    #[error("factor {factor}: fiber dimension m must be positive")]
    ZeroDimension { factor: usize },
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Stability(#[from] StabilityError),
}

/// One cscK base factor of the fibration.
#[derive(Debug, Clone)]
pub struct BaseFactor {
    /// Lattice element of 𝔱 (integer vector).
    pub p: Vec<i64>,
    /// Constant making `⟨p, x⟩ + c > 0` on P.
    pub c: Rat,
    /// Complex dimension of the base factor.
    pub m: u32,
    /// Constant scalar curvature of the base factor metric.
    pub scal: f64,
}

impl BaseFactor {
    pub fn affine(&self, dim: usize) -> AffineFunctional<Rat> {
        debug_assert_eq!(self.p.len(), dim);
        AffineFunctional::new(
            self.p.iter().map(|&x| Rat::from_integer(x.into())).collect(),
            self.c.clone(),
        )
    }
}

/// The fibration data: the list of base factors (empty for a point base,
/// the trivial fibration).
#[derive(Debug, Clone, Default)]
pub struct FibrationData {
    pub factors: Vec<BaseFactor>,
}

/// Exact per-factor positivity minima over the vertex list.
#[derive(Debug, Clone)]
pub struct PositivityReport {
    pub per_factor: Vec<FactorPositivity>,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct FactorPositivity {
    pub factor: usize,
    pub min: Rat,
    pub argmin: Vec<Rat>,
}

/// Exact minimum of every `⟨p_a, x⟩ + c_a` over the vertices (affine, so
/// this is the minimum over P).
pub fn check_positivity(p: &LabeledPolytope, data: &FibrationData) -> PositivityReport {
    let mut per_factor = Vec::with_capacity(data.factors.len());
    for (a, factor) in data.factors.iter().enumerate() {
        let ell = factor.affine(p.dim());
        let (min, argmin) = p
            .vertices()
            .iter()
            .map(|v| (ell.eval(v), v.clone()))
            .min_by(|x, y| x.0.cmp(&y.0))
            .expect("polytope has vertices");
        per_factor.push(FactorPositivity {
            factor: a,
            min,
            argmin,
        });
    }
    let pass = per_factor.iter().all(|f| f.min > Rat::zero());
    PositivityReport { per_factor, pass }
}

/// The transformed weights `(p·v, w̃)` of the fiber problem. The positivity
/// and log-concavity flags of the result are populated; log-concavity of
/// `p·v` is inherited structurally from `v` because positive affine powers
/// are log-concave and log-concavity is closed under products.
pub fn fibration_weights(
    p: &LabeledPolytope,
    data: &FibrationData,
    v: &WeightExpr,
    w: &WeightExpr,
) -> Result<WeightPair, FibrationError> {
    let report = check_positivity(p, data);
    for f in &report.per_factor {
        if f.min <= Rat::zero() {
            return Err(FibrationError::NotPositive {
                factor: f.factor,
                min: f.min.to_string(),
                vertex: f.argmin.iter().map(|c| c.to_string()).collect(),
            });
        }
    }
    for (a, factor) in data.factors.iter().enumerate() {
        if factor.m == 0 {
            return Err(FibrationError::ZeroDimension { factor: a });
        }
    }
    let mut v_factors: Vec<WeightExpr> = data
        .factors
        .iter()
        .map(|f| WeightExpr::aff_pow(f.affine(p.dim()), Exponent::int(f.m as i64)))
        .collect();
    v_factors.push(v.clone());
    let v_new = WeightExpr::product(v_factors);

    let mut w_terms = vec![w.clone()];
    for f in &data.factors {
        if f.scal == 0.0 {
            continue;
        }
        let scal = rat_from_f64(f.scal).expect("finite scalar curvature");
        w_terms.push(
            WeightExpr::aff_pow(f.affine(p.dim()), Exponent::int(-1)).scaled(-scal),
        );
    }
    let w_new = WeightExpr::sum(w_terms);

    let mut pair = WeightPair::new(v_new, w_new);
    pair.v_positivity = Some(is_positive_on(&pair.v, p, 3));
    pair.v_log_concavity = is_log_concave_on(&pair.v, p, 3, 1e-9).ok();
    Ok(pair)
}

/// Stability analysis of the transformed pair: the sufficient condition and
/// the destabilizer search run on `(p·v, w̃)`.
#[derive(Debug)]
pub struct FiberedStability {
    pub pair: WeightPair,
    pub stability: StabilityReport,
    pub destabilizer: DestabilizerReport,
}

#[allow(clippy::too_many_arguments)]
pub fn fibered_stability(
    p: &LabeledPolytope,
    data: &FibrationData,
    v: &WeightExpr,
    w: &WeightExpr,
    x0: Option<Vec<Rat>>,
    grid_depth: u32,
    slope_bound: i64,
    offset_samples: u32,
    tol: f64,
) -> Result<FiberedStability, FibrationError> {
    let pair = fibration_weights(p, data, v, w)?;
    let stability = sufficient_condition(p, &pair.v, &pair.w, x0.clone(), grid_depth)?;
    let destabilizer =
        destabilizer_search(p, &pair.v, &pair.w, x0, slope_bound, offset_samples, tol)?;
    Ok(FiberedStability {
        pair,
        stability,
        destabilizer,
    })
}
