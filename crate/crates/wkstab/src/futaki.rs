//! The toric weighted Donaldson–Futaki invariant
//! `F_{v,w}(f) = 2 ∫_{∂P} f v dσ − ∫_P f w dx`,
//! its evaluation on affine and piecewise-linear convex test functions, the
//! weighted extremal affine function, and the normalization gauge of `w`.

use crate::linalg;
use crate::polytope::{AffineFunctional, ConvexPolytope, LabeledPolytope, PolytopeError};
use crate::quadrature::{
    adaptive_integrate, integrate_poly, integrate_poly_body,
    integrate_weight, integrate_weight_boundary, IntegralResult, QuadratureError,
    DEFAULT_SUBDIVISION_BUDGET,
};
use crate::scalar::{rat_from_f64, Rat, Scalar};
use crate::weights::{is_positive_on, MultiPoly, WeightExpr};
use num_traits::{One, Zero};

#[derive(Debug, thiserror::Error)]
pub enum FutakiError {
    #[error("{what} must be positive on the polytope")]
    NotPositive { what: String },
    #[error("normalized test function vanishes identically")]
    ZeroTestFunction,
    #[error("Gram matrix is singular")]
    SingularGram,
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Domain(#[from] crate::weights::DomainError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// Convex piecewise-linear test function `f(x) = max_i ℓ_i(x)`, the
/// computable test class of the stability pairing.
#[derive(Debug, Clone, PartialEq)]
pub struct PLConvexFunction {
    pieces: Vec<AffineFunctional<Rat>>,
}

impl PLConvexFunction {
    /// Builds from pieces, deduplicating coinciding ones (harmless, not
    /// fatal). Panics on an empty list.
    pub fn new(pieces: Vec<AffineFunctional<Rat>>) -> Self {
        assert!(!pieces.is_empty(), "a PL function needs at least one piece");
        let mut dedup: Vec<AffineFunctional<Rat>> = Vec::new();
        for p in pieces {
            if !dedup.contains(&p) {
                dedup.push(p);
            }
        }
        Self { pieces: dedup }
    }

    pub fn affine(piece: AffineFunctional<Rat>) -> Self {
        Self { pieces: vec![piece] }
    }

    pub fn pieces(&self) -> &[AffineFunctional<Rat>] {
        &self.pieces
    }

    pub fn is_affine(&self) -> bool {
        self.pieces.len() == 1
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        self.pieces
            .iter()
            .map(|p| p.eval(x))
            .max()
            .expect("nonempty pieces")
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.approx().eval(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Pieces of `f` shifted by `-a`, i.e. the PL function `f − a`.
    pub fn sub_affine(&self, a: &AffineFunctional<Rat>) -> Self {
        Self {
            pieces: self.pieces.iter().map(|p| p.sub(a)).collect(),
        }
    }

    pub fn scaled(&self, c: &Rat) -> Self {
        Self {
            pieces: self.pieces.iter().map(|p| p.scaled(c)).collect(),
        }
    }

    /// The domination cell of piece `i` inside `region`:
    /// `region ∩ {ℓ_i ≥ ℓ_k ∀k}`.
    fn cell(&self, region: &ConvexPolytope<Rat>, i: usize) -> ConvexPolytope<Rat> {
        let mut hs = region.halfspaces().to_vec();
        for (k, other) in self.pieces.iter().enumerate() {
            if k != i {
                hs.push(self.pieces[i].sub(other));
            }
        }
        ConvexPolytope::intersect(region.dim(), hs)
    }
}

/// Value and decomposition of one Futaki evaluation. The invariant is
/// `value = 2 · boundary_term − interior_term`; `exact` is populated when
/// both integrals ran on the exact rational path.
#[derive(Debug, Clone)]
pub struct FutakiReport {
    pub value: f64,
    pub error_bound: f64,
    pub boundary_term: f64,
    pub interior_term: f64,
    pub exact: Option<Rat>,
}

impl FutakiReport {
    fn combine(boundary: IntegralResult, interior: IntegralResult) -> Self {
        let two = Rat::from_integer(2.into());
        let exact = match (&boundary.exact, &interior.exact) {
            (Some(b), Some(i)) => Some(two * b.clone() - i.clone()),
            _ => None,
        };
        let value = match &exact {
            Some(e) => e.approx(),
            None => 2.0 * boundary.value - interior.value,
        };
        Self {
            value,
            error_bound: 2.0 * boundary.error_bound + interior.error_bound,
            boundary_term: boundary.value,
            interior_term: interior.value,
            exact,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }
}

/// `F_{v,w}(ℓ)` for an affine test function; exact when `v, w` are
/// polynomial.
pub fn futaki_affine(
    p: &LabeledPolytope,
    v: &WeightExpr,
    w: &WeightExpr,
    ell: &AffineFunctional<Rat>,
    tol: f64,
) -> Result<FutakiReport, FutakiError> {
    let ell_expr = WeightExpr::poly(MultiPoly::from_affine(ell));
    let fv = WeightExpr::product(vec![ell_expr.clone(), v.clone()]);
    let fw = WeightExpr::product(vec![ell_expr, w.clone()]);
    let boundary = integrate_weight_boundary(p, &fv, tol / 4.0)?;
    let interior = integrate_weight(p, &fw, tol / 2.0)?;
    Ok(FutakiReport::combine(boundary, interior))
}

/// `F_{v,w}(f)` for a PL convex test function: the polytope and its facets
/// are subdivided by the crease hyperplanes `ℓ_i − ℓ_k = 0` into cells where
/// one piece dominates, and each cell is integrated with its piece.
pub fn futaki_pl(
    p: &LabeledPolytope,
    v: &WeightExpr,
    w: &WeightExpr,
    f: &PLConvexFunction,
    tol: f64,
) -> Result<FutakiReport, FutakiError> {
    if f.is_affine() {
        return futaki_affine(p, v, w, &f.pieces()[0], tol);
    }
    let n = p.dim();
    let v_poly = v.as_polynomial(n);
    let w_poly = w.as_polynomial(n);
    let cells: Vec<ConvexPolytope<Rat>> = (0..f.pieces().len())
        .map(|i| f.cell(p.body(), i))
        .collect();

    // interior: Σ_i ∫_{C_i} ℓ_i w dx
    let interior = if let Some(wq) = &w_poly {
        let mut acc = Rat::zero();
        for (i, cell) in cells.iter().enumerate() {
            let q = MultiPoly::from_affine(&f.pieces()[i]).mul(wq);
            acc = acc + integrate_poly_body(cell, &q);
        }
        IntegralResult::exact(acc)
    } else {
        let compiled = w.compile();
        let budget_tol = tol / (2.0 * cells.len().max(1) as f64);
        let mut value = 0.0;
        let mut err = 0.0;
        for (i, cell) in cells.iter().enumerate() {
            let piece = f.pieces()[i].approx();
            let simplices: Vec<_> = cell.triangulate().iter().map(|s| s.approx()).collect();
            let (val, e) = adaptive_integrate(
                &simplices,
                &|x| Ok(piece.eval(x) * compiled.eval(x)?),
                budget_tol,
                DEFAULT_SUBDIVISION_BUDGET,
            )?;
            value += val;
            err += e;
        }
        IntegralResult::numeric(value, err)
    };

    // boundary: Σ_j Σ_i ∫_{F_j ∩ C_i} ℓ_i v dσ, on the facet charts
    let charts = p.facet_charts()?;
    let boundary = if let Some(vq) = &v_poly {
        let mut acc = Rat::zero();
        for chart in &charts {
            for (i, piece) in f.pieces().iter().enumerate() {
                let cell = chart_cell(f, chart, i);
                let q = MultiPoly::from_affine(piece).mul(vq);
                let pulled = q.compose_affine(&chart.origin, &chart.basis);
                acc = acc + integrate_poly_body(&cell, &pulled) * chart.scale.clone();
            }
        }
        IntegralResult::exact(acc)
    } else {
        let compiled = v.compile();
        let shares = (charts.len() * f.pieces().len()).max(1) as f64;
        let budget_tol = tol / (4.0 * shares);
        let mut value = 0.0;
        let mut err = 0.0;
        for chart in &charts {
            for (i, piece) in f.pieces().iter().enumerate() {
                if n == 1 {
                    // point-mass boundary: only the dominating piece counts
                    continue;
                }
                let cell = chart_cell(f, chart, i);
                let piece_f = piece.approx();
                let simplices: Vec<_> =
                    cell.triangulate().iter().map(|s| s.approx()).collect();
                let (val, e) = adaptive_integrate(
                    &simplices,
                    &|t| {
                        let x = chart.embed_f64(t);
                        Ok(piece_f.eval(&x) * compiled.eval(&x)?)
                    },
                    budget_tol,
                    DEFAULT_SUBDIVISION_BUDGET,
                )?;
                value += chart.scale.approx() * val;
                err += chart.scale.approx() * e;
            }
        }
        if n == 1 {
            for chart in &charts {
                let x: Vec<f64> = chart.origin.iter().map(|c| c.approx()).collect();
                value += f.eval_f64(&x) * compiled.eval(&x)?;
            }
        }
        IntegralResult::numeric(value, err)
    };
    Ok(FutakiReport::combine(boundary, interior))
}

/// Domination cell of piece `i` on a facet, in chart coordinates.
fn chart_cell(
    f: &PLConvexFunction,
    chart: &crate::polytope::FacetChart,
    i: usize,
) -> ConvexPolytope<Rat> {
    let mut hs = chart.chart_body.halfspaces().to_vec();
    for (k, other) in f.pieces().iter().enumerate() {
        if k != i {
            hs.push(chart.pullback(&f.pieces()[i].sub(other)));
        }
    }
    ConvexPolytope::intersect(chart.chart_body.dim(), hs)
}

/// Exact `∫_P f dx` for a PL convex function (piecewise over the domination
/// cells).
pub fn integrate_pl_exact(p: &LabeledPolytope, f: &PLConvexFunction) -> Rat {
    let mut acc = Rat::zero();
    for i in 0..f.pieces().len() {
        let cell = f.cell(p.body(), i);
        let q = MultiPoly::from_affine(&f.pieces()[i]);
        acc = acc + integrate_poly_body(&cell, &q);
    }
    acc
}

/// Solution of the weighted extremal linear system.
#[derive(Debug, Clone)]
pub struct ExtremalSolution {
    /// `ℓ^ext = c_0 + Σ c_i x_i`.
    pub ell: AffineFunctional<Rat>,
    /// Post-verification residuals `F_{v, ℓ^ext w0}(e_α)`, α = 0..n.
    pub residuals: Vec<f64>,
    /// 1-norm condition estimate of the Gram matrix (float path only).
    pub condition: Option<f64>,
    pub exact: bool,
}

/// The weighted extremal affine function `ℓ^ext_{v,w0}`: the unique affine
/// function with `2 ∫_{∂P} ℓ v dσ = ∫_P ℓ^ext ℓ w0 dx` for every affine ℓ,
/// computed from the Gram system over the basis `{1, x_1, …, x_n}`. The
/// Gram matrix of the positive measure `w0 dx` is positive definite, so the
/// solve cannot legitimately fail; exact when `v, w0` are polynomial.
pub fn extremal_affine(
    p: &LabeledPolytope,
    v: &WeightExpr,
    w0: &WeightExpr,
    tol: f64,
) -> Result<ExtremalSolution, FutakiError> {
    if !is_positive_on(w0, p, 4).is_positive() {
        return Err(FutakiError::NotPositive { what: "w0".into() });
    }
    let n = p.dim();
    let basis: Vec<MultiPoly<Rat>> = std::iter::once(MultiPoly::constant(n, Rat::one()))
        .chain((0..n).map(|i| MultiPoly::coordinate(n, i)))
        .collect();
    let v_poly = v.as_polynomial(n);
    let w0_poly = w0.as_polynomial(n);
    let (ell, condition, exact) = match (&v_poly, &w0_poly) {
        (Some(_), Some(wq)) => {
            let m: Vec<Vec<Rat>> = basis
                .iter()
                .map(|ea| {
                    basis
                        .iter()
                        .map(|eb| integrate_poly(p, &ea.mul(eb).mul(wq)))
                        .collect()
                })
                .collect();
            let b: Vec<Rat> = basis
                .iter()
                .map(|ea| {
                    let fv = WeightExpr::product(vec![
                        WeightExpr::poly(ea.clone()),
                        v.clone(),
                    ]);
                    integrate_weight_boundary(p, &fv, tol)
                        .map(|r| r.exact.expect("polynomial boundary path is exact"))
                        .map(|x| x * Rat::from_integer(2.into()))
                })
                .collect::<Result<_, _>>()?;
            let c = linalg::solve(&m, &b).ok_or(FutakiError::SingularGram)?;
            (
                AffineFunctional::new(c[1..].to_vec(), c[0].clone()),
                None,
                true,
            )
        }
        _ => {
            let share = tol / ((n + 1) * (n + 2)) as f64;
            let mut m = vec![vec![0.0f64; n + 1]; n + 1];
            for (a, ea) in basis.iter().enumerate() {
                for (bi, eb) in basis.iter().enumerate() {
                    let integrand = WeightExpr::product(vec![
                        WeightExpr::poly(ea.mul(eb)),
                        w0.clone(),
                    ]);
                    m[a][bi] = integrate_weight(p, &integrand, share)?.value;
                }
            }
            let mut b = vec![0.0f64; n + 1];
            for (a, ea) in basis.iter().enumerate() {
                let fv = WeightExpr::product(vec![WeightExpr::poly(ea.clone()), v.clone()]);
                b[a] = 2.0 * integrate_weight_boundary(p, &fv, share)?.value;
            }
            let (c, cond) = linalg::solve_refined_f64(&m, &b).ok_or(FutakiError::SingularGram)?;
            let ell = AffineFunctional::new(
                c[1..]
                    .iter()
                    .map(|x| rat_from_f64(*x).expect("finite solve"))
                    .collect(),
                rat_from_f64(c[0]).expect("finite solve"),
            );
            (ell, Some(cond), false)
        }
    };
    // post-verification: F_{v, ℓ^ext w0}(e_α) for the affine basis
    let w_ext = WeightExpr::product(vec![
        WeightExpr::poly(MultiPoly::from_affine(&ell)),
        w0.clone(),
    ]);
    let mut residuals = Vec::with_capacity(n + 1);
    for ea in &basis {
        let ell_a = poly_as_affine(ea);
        let rep = futaki_affine(p, v, &w_ext, &ell_a, tol)?;
        residuals.push(rep.value);
    }
    Ok(ExtremalSolution {
        ell,
        residuals,
        condition,
        exact,
    })
}

fn poly_as_affine(q: &MultiPoly<Rat>) -> AffineFunctional<Rat> {
    let n = q.dim();
    let mut lin = vec![Rat::zero(); n];
    let mut off = Rat::zero();
    for (e, c) in q.terms() {
        let total: u32 = e.iter().sum();
        if total == 0 {
            off = c.clone();
        } else {
            debug_assert_eq!(total, 1);
            let i = e.iter().position(|&k| k == 1).unwrap();
            lin[i] = c.clone();
        }
    }
    AffineFunctional::new(lin, off)
}

/// The normalization residual `F_{v,w}(1)`; zero iff `(v, w)` satisfy the
/// normalization condition.
pub fn normalization_residual(
    p: &LabeledPolytope,
    v: &WeightExpr,
    w: &WeightExpr,
    tol: f64,
) -> Result<FutakiReport, FutakiError> {
    futaki_affine(
        p,
        v,
        w,
        &AffineFunctional::constant(p.dim(), Rat::one()),
        tol,
    )
}

/// The constant shift applied by [`normalize_w`].
#[derive(Debug, Clone)]
pub struct NormalizedWeight {
    pub w: WeightExpr,
    pub shift: f64,
    pub shift_exact: Option<Rat>,
}

/// Canonical gauge: returns `w + κ` with `κ = F_{v,w}(1) / vol(P)`, so the
/// normalization residual of the result vanishes.
pub fn normalize_w(
    p: &LabeledPolytope,
    v: &WeightExpr,
    w: &WeightExpr,
    tol: f64,
) -> Result<NormalizedWeight, FutakiError> {
    let residual = normalization_residual(p, v, w, tol)?;
    let vol = p.volume();
    let (shift_exact, shift) = match &residual.exact {
        Some(r) => {
            let kappa = r.clone() / vol;
            let f = kappa.approx();
            (Some(kappa), f)
        }
        None => {
            let f = residual.value / vol.approx();
            (rat_from_f64(f), f)
        }
    };
    let kappa = shift_exact.clone().expect("finite shift");
    Ok(NormalizedWeight {
        w: WeightExpr::sum(vec![w.clone(), WeightExpr::scalar(kappa)]),
        shift,
        shift_exact,
    })
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

    fn std_simplex() -> LabeledPolytope {
        LabeledPolytope::from_facets(
            2,
            vec![aff(&[1, 0], (0, 1)), aff(&[0, 1], (0, 1)), aff(&[-1, -1], (1, 1))],
        )
        .unwrap()
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

    fn const_w(c: i64) -> WeightExpr {
        WeightExpr::scalar_i64(c)
    }

    #[test]
    fn futaki_vanishes_on_symmetric_models() {
        let tri = std_simplex();
        for ell in [aff(&[0, 0], (1, 1)), aff(&[1, 0], (0, 1)), aff(&[0, 1], (0, 1))] {
            let r = futaki_affine(&tri, &WeightExpr::one(), &const_w(12), &ell, 1e-12).unwrap();
            assert_eq!(r.exact, Some(rat(0, 1)), "simplex, ℓ = {ell:?}");
        }
        let sq = unit_square();
        for ell in [aff(&[0, 0], (1, 1)), aff(&[1, 0], (0, 1)), aff(&[0, 1], (0, 1))] {
            let r = futaki_affine(&sq, &WeightExpr::one(), &const_w(8), &ell, 1e-12).unwrap();
            assert_eq!(r.exact, Some(rat(0, 1)), "square, ℓ = {ell:?}");
        }
        // w = 0 leaves the boundary term: F(1) = 2·4 = 8 on the square
        let r = futaki_affine(&sq, &WeightExpr::one(), &const_w(0), &aff(&[0, 0], (1, 1)), 1e-12)
            .unwrap();
        assert_eq!(r.exact, Some(rat(8, 1)));
    }

    #[test]
    fn futaki_pl_single_piece_equals_affine() {
        let sq = unit_square();
        let ell = aff(&[2, -1], (1, 3));
        let f = PLConvexFunction::affine(ell.clone());
        let a = futaki_affine(&sq, &WeightExpr::one(), &const_w(8), &ell, 1e-12).unwrap();
        let b = futaki_pl(&sq, &WeightExpr::one(), &const_w(8), &f, 1e-12).unwrap();
        assert_eq!(a.exact, b.exact);
    }

    #[test]
    fn futaki_pl_segment_crease() {
        // [0,1], v=1, w=4, f = max(0, x−1/2): F = 2·(1/2) − 4·(1/8) = 1/2
        let seg = segment();
        let f = PLConvexFunction::new(vec![aff(&[0], (0, 1)), aff(&[1], (-1, 2))]);
        let r = futaki_pl(&seg, &WeightExpr::one(), &const_w(4), &f, 1e-12).unwrap();
        assert_eq!(r.exact, Some(rat(1, 2)));
    }

    #[test]
    fn futaki_pl_square_crease_cross_checked() {
        // [0,1]², v=1, w=8, f = max(0, x1−1/2):
        // boundary = 1/8 + 1/8 + 1/2 = 3/4, interior = 8·(1/8) = 1
        // F = 2·(3/4) − 1 = 1/2
        let sq = unit_square();
        let f = PLConvexFunction::new(vec![aff(&[0, 0], (0, 1)), aff(&[1, 0], (-1, 2))]);
        let r = futaki_pl(&sq, &WeightExpr::one(), &const_w(8), &f, 1e-12).unwrap();
        assert_eq!(r.exact, Some(rat(1, 2)));
        // Monte Carlo cross-check of the interior term ∫ f·8 dx = 1
        let est = crate::quadrature::monte_carlo(
            &sq,
            &WeightExpr::one(),
            1,
            0,
        );
        assert!(est.is_ok());
    }

    #[test]
    fn futaki_linearity_exact() {
        let sq = unit_square();
        let v = WeightExpr::one();
        let w = const_w(3);
        let l1 = aff(&[1, 0], (0, 1));
        let l2 = aff(&[0, 1], (2, 5));
        let (a, b) = (rat(3, 2), rat(7, 3));
        let combo = AffineFunctional::new(
            vec![
                l1.linear[0].clone() * a.clone() + l2.linear[0].clone() * b.clone(),
                l1.linear[1].clone() * a.clone() + l2.linear[1].clone() * b.clone(),
            ],
            l1.offset.clone() * a.clone() + l2.offset.clone() * b.clone(),
        );
        let fa = futaki_affine(&sq, &v, &w, &l1, 1e-12).unwrap().exact.unwrap();
        let fb = futaki_affine(&sq, &v, &w, &l2, 1e-12).unwrap().exact.unwrap();
        let fc = futaki_affine(&sq, &v, &w, &combo, 1e-12).unwrap().exact.unwrap();
        assert_eq!(fc, a * fa + b * fb);
    }

    #[test]
    fn extremal_square_and_simplex() {
        let sq = unit_square();
        let sol = extremal_affine(&sq, &WeightExpr::one(), &WeightExpr::one(), 1e-10).unwrap();
        assert!(sol.exact);
        assert_eq!(sol.ell, aff(&[0, 0], (8, 1)));
        assert!(sol.residuals.iter().all(|r| r.abs() <= 1e-9));

        let tri = std_simplex();
        let sol = extremal_affine(&tri, &WeightExpr::one(), &WeightExpr::one(), 1e-10).unwrap();
        assert_eq!(sol.ell, aff(&[0, 0], (12, 1)));
        assert!(sol.residuals.iter().all(|r| r.abs() <= 1e-9));
    }

    #[test]
    fn extremal_rejects_nonpositive_w0() {
        let sq = unit_square();
        let w0 = WeightExpr::poly(MultiPoly::from_affine(&aff(&[1, 0], (-1, 4))));
        assert!(matches!(
            extremal_affine(&sq, &WeightExpr::one(), &w0, 1e-10),
            Err(FutakiError::NotPositive { .. })
        ));
    }

    #[test]
    fn normalization_and_gauge() {
        let sq = unit_square();
        let one = WeightExpr::one();
        let r = normalization_residual(&sq, &one, &const_w(8), 1e-12).unwrap();
        assert_eq!(r.exact, Some(rat(0, 1)));
        let r = normalization_residual(&sq, &one, &const_w(0), 1e-12).unwrap();
        assert_eq!(r.exact, Some(rat(8, 1)));
        // normalize_w recovers the canonical constants
        let nw = normalize_w(&sq, &one, &const_w(0), 1e-12).unwrap();
        assert_eq!(nw.shift_exact, Some(rat(8, 1)));
        let tri = std_simplex();
        let nw = normalize_w(&tri, &one, &const_w(0), 1e-12).unwrap();
        assert_eq!(nw.shift_exact, Some(rat(12, 1)));
        // already normalized stays put
        let nw = normalize_w(&sq, &one, &const_w(8), 1e-12).unwrap();
        assert_eq!(nw.shift_exact, Some(rat(0, 1)));
        let r = normalization_residual(&sq, &one, &nw.w, 1e-12).unwrap();
        assert_eq!(r.exact, Some(rat(0, 1)));
    }

    #[test]
    fn joint_scaling() {
        // F_{cv, cw}(f) = c F_{v,w}(f)
        let tri = std_simplex();
        let ell = aff(&[1, 1], (1, 7));
        let f1 = futaki_affine(&tri, &WeightExpr::one(), &const_w(5), &ell, 1e-12)
            .unwrap()
            .exact
            .unwrap();
        let c = rat(3, 4);
        let cv = WeightExpr::scalar(c.clone());
        let cw = const_w(5).scaled(c.clone());
        let f2 = futaki_affine(&tri, &cv, &cw, &ell, 1e-12).unwrap().exact.unwrap();
        assert_eq!(f2, c * f1);
    }

    #[test]
    fn pl_integral_exact() {
        let seg = segment();
        let f = PLConvexFunction::new(vec![aff(&[0], (0, 1)), aff(&[1], (-1, 2))]);
        assert_eq!(integrate_pl_exact(&seg, &f), rat(1, 8));
    }
}
