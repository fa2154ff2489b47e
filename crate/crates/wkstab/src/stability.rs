//! Uniform K-stability checks.
//!
//! The sufficient condition scans, over the cone decomposition of `P` from
//! `x0`, the expression
//! `Φ_j(x) = (1/L_j(x0)) (v(x)(n+1) + ⟨∇v(x), x−x0⟩) − w(x)/2`
//! on a deterministic grid; a nonnegative minimum together with a
//! first-order Lipschitz certificate yields the verdict. The destabilizer
//! search estimates the stability constant empirically by minimizing
//! `F_{v,w}(f) / ‖f*‖_{L¹}` over simple PL convex functions.

use crate::futaki::{futaki_pl, integrate_pl_exact, FutakiError, FutakiReport, PLConvexFunction};
use crate::grid::simplices_grid;
use crate::polytope::{AffineFunctional, LabeledPolytope, PolytopeError, Simplex};
use crate::scalar::{Rat, Scalar};
use crate::weights::{is_positive_on, DomainError, WeightError, WeightExpr};
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;

#[derive(Debug, thiserror::Error)]
pub enum StabilityError {
    #[error("{what} must be positive on the polytope")]
    NotPositive { what: String },
    #[error("scale t must be positive")]
    NonPositiveScale,
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Futaki(#[from] FutakiError),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// Verdict of the sufficient-condition scan. `Inconclusive` means the
/// sufficient condition failed or could not be certified, not that the
/// polytope is unstable.
#[derive(Debug, Clone, PartialEq)]
pub enum StabilityVerdict {
    SufficientConditionHolds {
        margin: f64,
    },
    Inconclusive {
        min_value: f64,
        argmin: Vec<f64>,
        cone_index: Option<usize>,
    },
}

/// Scan summary of one cone (or of the whole polytope for the Fano form).
#[derive(Debug, Clone)]
pub struct ConeScan {
    /// Facet index of the cone; `None` for a whole-polytope scan.
    pub facet: Option<usize>,
    pub min: f64,
    pub argmin: Vec<f64>,
    /// Sampled bound on |∇Φ| over the cone.
    pub gradient_bound: f64,
    /// Grid covering radius.
    pub mesh: f64,
}

impl ConeScan {
    /// First-order certified lower bound for Φ on the cone.
    pub fn certified_margin(&self) -> f64 {
        self.min - self.gradient_bound * self.mesh
    }
}

#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub verdict: StabilityVerdict,
    /// Global sampled minimum of Φ.
    pub margin: f64,
    /// Whether the Lipschitz certificate holds on every cone.
    pub certified: bool,
    pub per_cone: Vec<ConeScan>,
    pub grid_depth: u32,
    pub base_point: Vec<f64>,
}

impl StabilityReport {
    pub fn holds(&self) -> bool {
        matches!(
            self.verdict,
            StabilityVerdict::SufficientConditionHolds { .. }
        )
    }
}

struct PhiEvaluator {
    v: crate::weights::CompiledExpr,
    w: crate::weights::CompiledExpr,
    x0: Vec<f64>,
    n: usize,
}

impl PhiEvaluator {
    fn new(v: &WeightExpr, w: &WeightExpr, x0: &[Rat], n: usize) -> Self {
        Self {
            v: v.compile(),
            w: w.compile(),
            x0: x0.iter().map(|c| c.approx()).collect(),
            n,
        }
    }

    /// `(Φ, |∇Φ|)` at `x` for the cone factor `1/L`, where
    /// `Φ = (1/L)(v(x)(n+1) + ⟨∇v(x), x−x0⟩) − w(x)/2`.
    fn eval(&self, x: &[f64], inv_l: f64) -> Result<(f64, f64), DomainError> {
        let (vv, vg, vh) = self.v.value_grad_hess(x)?;
        let (_, wg) = self.w.value_grad(x)?;
        let wv = self.w.eval(x)?;
        let d: Vec<f64> = x.iter().zip(&self.x0).map(|(a, b)| a - b).collect();
        let grad_dot: f64 = vg.iter().zip(&d).map(|(g, di)| g * di).sum();
        let phi = inv_l * (vv * (self.n as f64 + 1.0) + grad_dot) - wv / 2.0;
        // ∇Φ = (1/L)((n+2)∇v + H_v (x−x0)) − ∇w/2
        let mut grad_norm_sq = 0.0;
        for i in 0..self.n {
            let hv_d: f64 = (0..self.n).map(|j| vh[i][j] * d[j]).sum();
            let gi = inv_l * ((self.n as f64 + 2.0) * vg[i] + hv_d) - wg[i] / 2.0;
            grad_norm_sq += gi * gi;
        }
        Ok((phi, grad_norm_sq.sqrt()))
    }
}

fn scan_region(
    phi: &PhiEvaluator,
    simplices: &[Simplex<Rat>],
    inv_l: f64,
    facet: Option<usize>,
    grid_depth: u32,
) -> Result<ConeScan, DomainError> {
    let grid = simplices_grid(simplices, grid_depth);
    let evals: Vec<(f64, f64)> = grid
        .points
        .par_iter()
        .map(|p| phi.eval(p, inv_l))
        .collect::<Result<_, _>>()?;
    let mut min = f64::INFINITY;
    let mut argmin = Vec::new();
    let mut grad_bound = 0.0f64;
    for (point, (value, gnorm)) in grid.points.iter().zip(&evals) {
        if *value < min {
            min = *value;
            argmin = point.clone();
        }
        grad_bound = grad_bound.max(*gnorm);
    }
    Ok(ConeScan {
        facet,
        min,
        argmin,
        gradient_bound: grad_bound,
        mesh: grid.mesh,
    })
}

fn assemble_report(
    per_cone: Vec<ConeScan>,
    grid_depth: u32,
    base_point: Vec<f64>,
) -> StabilityReport {
    let worst = per_cone
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.min.total_cmp(&b.1.min))
        .expect("at least one cone");
    let margin = worst.1.min;
    let certified = per_cone.iter().all(|c| c.certified_margin() >= 0.0);
    let verdict = if margin >= 0.0 && certified {
        StabilityVerdict::SufficientConditionHolds { margin }
    } else {
        StabilityVerdict::Inconclusive {
            min_value: margin,
            argmin: worst.1.argmin.clone(),
            cone_index: worst.1.facet,
        }
    };
    StabilityReport {
        verdict,
        margin,
        certified,
        per_cone,
        grid_depth,
        base_point,
    }
}

/// Cone-decomposition sufficient condition for `(v, w)`-uniform K-stability:
/// verdict `Holds` when the sampled minimum of `Φ_j` over every cone is
/// nonnegative and Lipschitz-certified.
pub fn sufficient_condition(
    p: &LabeledPolytope,
    v: &WeightExpr,
    w: &WeightExpr,
    x0: Option<Vec<Rat>>,
    grid_depth: u32,
) -> Result<StabilityReport, StabilityError> {
    if !is_positive_on(v, p, grid_depth).is_positive() {
        return Err(StabilityError::NotPositive { what: "v".into() });
    }
    let decomposition = p.cone_decomposition(x0)?;
    let x0 = decomposition.base_point.clone();
    let phi = PhiEvaluator::new(v, w, &x0, p.dim());
    let mut per_cone = Vec::with_capacity(decomposition.cones.len());
    for cone in &decomposition.cones {
        let l_at_x0 = p.facets()[cone.facet].eval(&x0);
        debug_assert!(l_at_x0 > Rat::zero());
        let inv_l = 1.0 / l_at_x0.approx();
        per_cone.push(scan_region(
            &phi,
            &cone.simplices,
            inv_l,
            Some(cone.facet),
            grid_depth,
        )?);
    }
    Ok(assemble_report(
        per_cone,
        grid_depth,
        x0.iter().map(|c| c.approx()).collect(),
    ))
}

/// Fano form of the sufficient condition: the cone factor `1/L_j(x0)` is
/// replaced by `1/t` and the scan runs over all of `P`.
pub fn fano_condition(
    p: &LabeledPolytope,
    v: &WeightExpr,
    w: &WeightExpr,
    x0: Option<Vec<Rat>>,
    t: Rat,
    grid_depth: u32,
) -> Result<StabilityReport, StabilityError> {
    if t <= Rat::zero() {
        return Err(StabilityError::NonPositiveScale);
    }
    if !is_positive_on(v, p, grid_depth).is_positive() {
        return Err(StabilityError::NotPositive { what: "v".into() });
    }
    let x0 = x0.unwrap_or_else(|| p.barycenter());
    if !p.is_interior(&x0) {
        return Err(PolytopeError::NotInterior.into());
    }
    let phi = PhiEvaluator::new(v, w, &x0, p.dim());
    let scan = scan_region(
        &phi,
        &p.triangulate(),
        1.0 / t.approx(),
        None,
        grid_depth,
    )?;
    Ok(assemble_report(
        vec![scan],
        grid_depth,
        x0.iter().map(|c| c.approx()).collect(),
    ))
}

/// Normalization `f ↦ f* = f − a` with `a` the supporting affine of `f` at
/// `x0` (the lexicographically-first active piece breaks subgradient ties),
/// so that `f*(x0) = 0` and `f* ≥ 0`.
pub fn normalize_f(f: &PLConvexFunction, x0: &[Rat]) -> PLConvexFunction {
    let value = f.eval(x0);
    let active = f
        .pieces()
        .iter()
        .filter(|p| p.eval(x0) == value)
        .min_by(|a, b| {
            (&a.linear, &a.offset)
                .partial_cmp(&(&b.linear, &b.offset))
                .expect("rational order is total")
        })
        .expect("nonempty pieces");
    f.sub_affine(active)
}

/// One stability-ratio evaluation `F_{v,w}(f) / ‖f*‖_{L¹(P)}`.
#[derive(Debug, Clone)]
pub struct StabilityRatio {
    pub ratio: f64,
    /// Exact value when the Futaki evaluation ran on the exact path.
    pub ratio_exact: Option<Rat>,
    pub futaki: FutakiReport,
    pub norm: Rat,
}

pub fn stability_ratio(
    p: &LabeledPolytope,
    v: &WeightExpr,
    w: &WeightExpr,
    f: &PLConvexFunction,
    x0: &[Rat],
    tol: f64,
) -> Result<StabilityRatio, StabilityError> {
    let f_star = normalize_f(f, x0);
    debug_assert!(f_star.eval(x0).is_zero());
    let norm = integrate_pl_exact(p, &f_star);
    if norm.is_zero() {
        return Err(FutakiError::ZeroTestFunction.into());
    }
    let futaki = futaki_pl(p, v, w, f, tol)?;
    let ratio_exact = futaki.exact.as_ref().map(|e| e.clone() / norm.clone());
    let ratio = ratio_exact
        .as_ref()
        .map_or(futaki.value / norm.approx(), |r| r.approx());
    Ok(StabilityRatio {
        ratio,
        ratio_exact,
        futaki,
        norm,
    })
}

/// One destabilizer candidate and its ratio.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub f: PLConvexFunction,
    pub ratio: f64,
    pub ratio_exact: Option<Rat>,
}

/// Result of a destabilizer search over simple PL functions.
#[derive(Debug, Clone)]
pub struct DestabilizerReport {
    pub best: Option<Candidate>,
    pub family_size: usize,
    /// True when every enumerated ratio is strictly positive.
    pub all_positive: bool,
    pub base_point: Vec<f64>,
}

/// Enumerates `f = max(0, ⟨u, x⟩ + c)` over integer directions `‖u‖_∞ ≤ H`
/// with gcd 1, with `K` crease offsets cutting the interior per direction,
/// and minimizes the stability ratio. Deterministic enumeration order.
pub fn destabilizer_search(
    p: &LabeledPolytope,
    v: &WeightExpr,
    w: &WeightExpr,
    x0: Option<Vec<Rat>>,
    slope_bound: i64,
    offset_samples: u32,
    tol: f64,
) -> Result<DestabilizerReport, StabilityError> {
    assert!(slope_bound >= 1 && offset_samples >= 1);
    let x0 = x0.unwrap_or_else(|| p.barycenter());
    if !p.is_interior(&x0) {
        return Err(PolytopeError::NotInterior.into());
    }
    let n = p.dim();
    let zero_piece = AffineFunctional::constant(n, Rat::zero());
    let mut best: Option<Candidate> = None;
    let mut family_size = 0usize;
    let mut all_positive = true;
    for u in integer_directions(n, slope_bound) {
        let values: Vec<Rat> = p
            .vertices()
            .iter()
            .map(|vtx| {
                u.iter()
                    .zip(vtx)
                    .fold(Rat::zero(), |acc, (&ui, c)| {
                        acc + Rat::from_integer(ui.into()) * c.clone()
                    })
            })
            .collect();
        let lo = values.iter().min().expect("vertices").clone();
        let hi = values.iter().max().expect("vertices").clone();
        if lo == hi {
            continue;
        }
        for k in 1..=offset_samples {
            let frac = Rat::new(k.into(), (offset_samples + 1).into());
            let c = -(lo.clone() + (hi.clone() - lo.clone()) * frac);
            let ell = AffineFunctional::new(
                u.iter().map(|&ui| Rat::from_integer(ui.into())).collect(),
                c,
            );
            let f = PLConvexFunction::new(vec![zero_piece.clone(), ell]);
            let r = stability_ratio(p, v, w, &f, &x0, tol)?;
            family_size += 1;
            if r.ratio <= 0.0 {
                all_positive = false;
            }
            let better = match &best {
                None => true,
                Some(b) => match (&r.ratio_exact, &b.ratio_exact) {
                    (Some(a), Some(c)) => a < c,
                    _ => r.ratio < b.ratio,
                },
            };
            if better {
                best = Some(Candidate {
                    f,
                    ratio: r.ratio,
                    ratio_exact: r.ratio_exact,
                });
            }
        }
    }
    Ok(DestabilizerReport {
        best,
        family_size,
        all_positive,
        base_point: x0.iter().map(|c| c.approx()).collect(),
    })
}

/// All nonzero integer vectors with `‖u‖_∞ ≤ h` and gcd 1, lexicographic.
pub fn integer_directions(n: usize, h: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![-h; n];
    loop {
        let gcd = cur.iter().fold(0i64, |g, &c| g.gcd(&c.abs()));
        if gcd == 1 {
            out.push(cur.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < h {
                cur[i] += 1;
                for j in i + 1..n {
                    cur[j] = -h;
                }
                break;
            }
        }
    }
}
