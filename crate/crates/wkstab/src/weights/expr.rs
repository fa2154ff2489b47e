//! Weight expression trees.
//!
//! A [`WeightExpr`] stores exact rational data (polynomial coefficients,
//! affine forms, exponents) and supports symbolic differentiation, exact
//! evaluation on the rational subtree, polynomial extraction, and a
//! compiled `f64` form for the numeric hot paths (quadrature, grid scans).

use super::poly::MultiPoly;
use crate::polytope::AffineFunctional;
use crate::scalar::{rat_from_f64, Rat, Scalar};
use num_traits::{Pow, ToPrimitive, Zero};

/// Evaluation outside the positivity domain of a power or quotient node.
#[derive(Debug, Clone, thiserror::Error)]
#[error("expression undefined at {at:?}: {what}")]
pub struct DomainError {
    pub at: Vec<f64>,
    pub what: String,
}

/// Exponent of an affine-power node. The families from the weighted cscK
/// catalogue all have integer exponents; floats are accepted but flagged.
#[derive(Debug, Clone, PartialEq)]
pub enum Exponent {
    Rational(Rat),
    Float(f64),
}

impl Exponent {
    pub fn int(k: i64) -> Self {
        Exponent::Rational(Rat::from_integer(k.into()))
    }

    pub fn approx(&self) -> f64 {
        match self {
            Exponent::Rational(r) => r.approx(),
            Exponent::Float(f) => *f,
        }
    }

    pub fn as_integer(&self) -> Option<i32> {
        match self {
            Exponent::Rational(r) if r.is_integer() => r.to_integer().to_i32(),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Exponent::Rational(_))
    }

    fn minus_one(&self) -> Self {
        match self {
            Exponent::Rational(r) => Exponent::Rational(r - Rat::from_integer(1.into())),
            Exponent::Float(f) => Exponent::Float(f - 1.0),
        }
    }
}

/// Expression tree over the polytope housing the weights v, w, ṽ, p, w̃.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightExpr {
    Scalar(Rat),
    Poly(MultiPoly<Rat>),
    /// `(⟨u, x⟩ + c)^m`, defined where the base is strictly positive.
    AffPow {
        base: AffineFunctional<Rat>,
        exponent: Exponent,
    },
    /// `exp(⟨u, x⟩ + c)`.
    ExpAff(AffineFunctional<Rat>),
    Sum(Vec<WeightExpr>),
    Product(Vec<WeightExpr>),
    /// Numerator / denominator, defined where the denominator is strictly
    /// positive.
    Quotient(Box<WeightExpr>, Box<WeightExpr>),
}

impl WeightExpr {
    pub fn scalar(c: Rat) -> Self {
        WeightExpr::Scalar(c)
    }

    pub fn scalar_i64(c: i64) -> Self {
        WeightExpr::Scalar(Rat::from_integer(c.into()))
    }

    pub fn one() -> Self {
        Self::scalar_i64(1)
    }

    pub fn poly(p: MultiPoly<Rat>) -> Self {
        WeightExpr::Poly(p)
    }

    pub fn aff_pow(base: AffineFunctional<Rat>, exponent: Exponent) -> Self {
        WeightExpr::AffPow { base, exponent }
    }

    pub fn exp_aff(a: AffineFunctional<Rat>) -> Self {
        WeightExpr::ExpAff(a)
    }

    /// Sum with zero terms pruned.
    pub fn sum(args: Vec<WeightExpr>) -> Self {
        let mut out: Vec<WeightExpr> = Vec::new();
        for a in args {
            if !a.is_exact_zero() {
                out.push(a);
            }
        }
        match out.len() {
            0 => Self::scalar_i64(0),
            1 => out.pop().unwrap(),
            _ => WeightExpr::Sum(out),
        }
    }

    /// Product with unit factors pruned and hard zeros collapsed.
    pub fn product(args: Vec<WeightExpr>) -> Self {
        let mut out: Vec<WeightExpr> = Vec::new();
        for a in args {
            if a.is_exact_zero() {
                return Self::scalar_i64(0);
            }
            if !a.is_exact_one() {
                out.push(a);
            }
        }
        match out.len() {
            0 => Self::scalar_i64(1),
            1 => out.pop().unwrap(),
            _ => WeightExpr::Product(out),
        }
    }

    pub fn quotient(num: WeightExpr, den: WeightExpr) -> Self {
        if den.is_exact_one() {
            num
        } else {
            WeightExpr::Quotient(Box::new(num), Box::new(den))
        }
    }

    pub fn scaled(self, c: Rat) -> Self {
        Self::product(vec![Self::scalar(c), self])
    }

    fn is_exact_zero(&self) -> bool {
        match self {
            WeightExpr::Scalar(c) => c.is_zero(),
            WeightExpr::Poly(p) => p.is_zero(),
            _ => false,
        }
    }

    fn is_exact_one(&self) -> bool {
        match self {
            WeightExpr::Scalar(c) => *c == Rat::from_integer(1.into()),
            WeightExpr::Poly(p) => p.as_constant() == Some(Rat::from_integer(1.into())),
            _ => false,
        }
    }

    /// Ambient dimension implied by the tree, if any node pins one.
    pub fn dim(&self) -> Option<usize> {
        match self {
            WeightExpr::Scalar(_) => None,
            WeightExpr::Poly(p) => Some(p.dim()),
            WeightExpr::AffPow { base, .. } => Some(base.dim()),
            WeightExpr::ExpAff(a) => Some(a.dim()),
            WeightExpr::Sum(args) | WeightExpr::Product(args) => {
                args.iter().find_map(|a| a.dim())
            }
            WeightExpr::Quotient(a, b) => a.dim().or_else(|| b.dim()),
        }
    }

    /// Whether any affine-power node carries a float exponent.
    pub fn has_float_exponent(&self) -> bool {
        match self {
            WeightExpr::AffPow { exponent, .. } => !exponent.is_exact(),
            WeightExpr::Sum(args) | WeightExpr::Product(args) => {
                args.iter().any(|a| a.has_float_exponent())
            }
            WeightExpr::Quotient(a, b) => a.has_float_exponent() || b.has_float_exponent(),
            _ => false,
        }
    }

    /// Collapses the tree to a single polynomial when it is one:
    /// polynomials, scalars, nonnegative-integer affine powers, sums,
    /// products, and quotients by nonzero constants.
    pub fn as_polynomial(&self, dim: usize) -> Option<MultiPoly<Rat>> {
        match self {
            WeightExpr::Scalar(c) => Some(MultiPoly::constant(dim, c.clone())),
            WeightExpr::Poly(p) => {
                debug_assert_eq!(p.dim(), dim);
                Some(p.clone())
            }
            WeightExpr::AffPow { base, exponent } => {
                let k = exponent.as_integer()?;
                if k < 0 {
                    return None;
                }
                Some(MultiPoly::from_affine(base).pow(k as u32))
            }
            WeightExpr::ExpAff(_) => None,
            WeightExpr::Sum(args) => {
                let mut acc = MultiPoly::zero(dim);
                for a in args {
                    acc = acc.add(&a.as_polynomial(dim)?);
                }
                Some(acc)
            }
            WeightExpr::Product(args) => {
                let mut acc = MultiPoly::constant(dim, Rat::from_integer(1.into()));
                for a in args {
                    acc = acc.mul(&a.as_polynomial(dim)?);
                }
                Some(acc)
            }
            WeightExpr::Quotient(a, b) => {
                let den = b.as_polynomial(dim)?.as_constant()?;
                if den.is_zero() {
                    return None;
                }
                let inv = Rat::from_integer(1.into()) / den;
                Some(a.as_polynomial(dim)?.scale(&inv))
            }
        }
    }

    /// Exact evaluation at a rational point; `Ok(None)` when the tree
    /// contains a node with no exact value (exponentials, float or
    /// non-integer exponents).
    pub fn eval_exact(&self, x: &[Rat]) -> Result<Option<Rat>, DomainError> {
        let domain_err = |what: &str| DomainError {
            at: x.iter().map(|c| c.approx()).collect(),
            what: what.into(),
        };
        match self {
            WeightExpr::Scalar(c) => Ok(Some(c.clone())),
            WeightExpr::Poly(p) => Ok(Some(p.eval(x))),
            WeightExpr::AffPow { base, exponent } => {
                let b = base.eval(x);
                match exponent.as_integer() {
                    Some(k) => {
                        if b.is_zero() && k < 0 {
                            Err(domain_err("affine power base is zero"))
                        } else if b.is_zero() {
                            Ok(Some(if k == 0 {
                                Rat::from_integer(1.into())
                            } else {
                                Rat::zero()
                            }))
                        } else {
                            Ok(Some(b.pow(k)))
                        }
                    }
                    None => Ok(None),
                }
            }
            WeightExpr::ExpAff(_) => Ok(None),
            WeightExpr::Sum(args) => {
                let mut acc = Rat::zero();
                for a in args {
                    match a.eval_exact(x)? {
                        Some(v) => acc = acc + v,
                        None => return Ok(None),
                    }
                }
                Ok(Some(acc))
            }
            WeightExpr::Product(args) => {
                let mut acc = Rat::from_integer(1.into());
                for a in args {
                    match a.eval_exact(x)? {
                        Some(v) => acc = acc * v,
                        None => return Ok(None),
                    }
                }
                Ok(Some(acc))
            }
            WeightExpr::Quotient(a, b) => {
                let den = match b.eval_exact(x)? {
                    Some(v) => v,
                    None => return Ok(None),
                };
                if den.is_zero() {
                    return Err(domain_err("quotient denominator is zero"));
                }
                match a.eval_exact(x)? {
                    Some(num) => Ok(Some(num / den)),
                    None => Ok(None),
                }
            }
        }
    }

    /// Symbolic partial derivative `∂/∂x_i`, as a new expression tree.
    pub fn deriv(&self, i: usize) -> WeightExpr {
        match self {
            WeightExpr::Scalar(_) => Self::scalar_i64(0),
            WeightExpr::Poly(p) => Self::poly(p.partial(i)),
            WeightExpr::AffPow { base, exponent } => {
                let u = base.linear[i].clone();
                if u.is_zero() {
                    return Self::scalar_i64(0);
                }
                let m = match exponent {
                    Exponent::Rational(r) => r.clone(),
                    Exponent::Float(f) => rat_from_f64(*f).expect("finite exponent"),
                };
                Self::product(vec![
                    Self::scalar(m * u),
                    Self::aff_pow(base.clone(), exponent.minus_one()),
                ])
            }
            WeightExpr::ExpAff(a) => {
                let u = a.linear[i].clone();
                if u.is_zero() {
                    return Self::scalar_i64(0);
                }
                Self::product(vec![Self::scalar(u), Self::exp_aff(a.clone())])
            }
            WeightExpr::Sum(args) => Self::sum(args.iter().map(|a| a.deriv(i)).collect()),
            WeightExpr::Product(args) => {
                let mut terms = Vec::new();
                for (k, _) in args.iter().enumerate() {
                    let factors: Vec<WeightExpr> = args
                        .iter()
                        .enumerate()
                        .map(|(j, a)| if j == k { a.deriv(i) } else { a.clone() })
                        .collect();
                    terms.push(Self::product(factors));
                }
                Self::sum(terms)
            }
            WeightExpr::Quotient(a, b) => {
                let num = Self::sum(vec![
                    Self::product(vec![a.deriv(i), (**b).clone()]),
                    Self::product(vec![Self::scalar_i64(-1), (**a).clone(), b.deriv(i)]),
                ]);
                Self::quotient(num, Self::product(vec![(**b).clone(), (**b).clone()]))
            }
        }
    }

    /// `⟨∇e, x⟩` as a symbolic expression in ambient dimension `dim`.
    pub fn grad_dot_x(&self, dim: usize) -> WeightExpr {
        let terms = (0..dim)
            .map(|i| {
                Self::product(vec![
                    self.deriv(i),
                    Self::poly(MultiPoly::coordinate(dim, i)),
                ])
            })
            .collect();
        Self::sum(terms)
    }

    /// Compiles to the `f64` evaluator used by quadrature and grid scans.
    pub fn compile(&self) -> CompiledExpr {
        match self {
            WeightExpr::Scalar(c) => CompiledExpr::Scalar(c.approx()),
            WeightExpr::Poly(p) => CompiledExpr::Poly(p.approx()),
            WeightExpr::AffPow { base, exponent } => CompiledExpr::AffPow {
                base: base.approx(),
                exp: exponent.approx(),
                exp_int: exponent.as_integer(),
            },
            WeightExpr::ExpAff(a) => CompiledExpr::ExpAff(a.approx()),
            WeightExpr::Sum(args) => {
                CompiledExpr::Sum(args.iter().map(|a| a.compile()).collect())
            }
            WeightExpr::Product(args) => {
                CompiledExpr::Product(args.iter().map(|a| a.compile()).collect())
            }
            WeightExpr::Quotient(a, b) => {
                CompiledExpr::Quotient(Box::new(a.compile()), Box::new(b.compile()))
            }
        }
    }

    /// Convenience single evaluation; hot paths should [`compile`](Self::compile) once.
    pub fn eval_f64(&self, x: &[f64]) -> Result<f64, DomainError> {
        self.compile().eval(x)
    }
}

/// `f64` mirror of [`WeightExpr`] with values, gradients and Hessians.
#[derive(Debug, Clone)]
pub enum CompiledExpr {
    Scalar(f64),
    Poly(MultiPoly<f64>),
    AffPow {
        base: AffineFunctional<f64>,
        exp: f64,
        exp_int: Option<i32>,
    },
    ExpAff(AffineFunctional<f64>),
    Sum(Vec<CompiledExpr>),
    Product(Vec<CompiledExpr>),
    Quotient(Box<CompiledExpr>, Box<CompiledExpr>),
}

/// Value, gradient and (optional) Hessian bundle, combined bottom-up.
#[derive(Debug, Clone)]
struct Jet {
    v: f64,
    g: Vec<f64>,
    h: Option<Vec<Vec<f64>>>,
}

impl Jet {
    fn constant(v: f64, n: usize, with_h: bool) -> Self {
        Jet {
            v,
            g: vec![0.0; n],
            h: with_h.then(|| vec![vec![0.0; n]; n]),
        }
    }

    fn add_assign(&mut self, o: &Jet) {
        self.v += o.v;
        for i in 0..self.g.len() {
            self.g[i] += o.g[i];
        }
        if let (Some(h), Some(oh)) = (self.h.as_mut(), o.h.as_ref()) {
            for i in 0..h.len() {
                for j in 0..h.len() {
                    h[i][j] += oh[i][j];
                }
            }
        }
    }

    fn mul(&self, o: &Jet) -> Jet {
        let n = self.g.len();
        let v = self.v * o.v;
        let g: Vec<f64> = (0..n)
            .map(|i| self.v * o.g[i] + o.v * self.g[i])
            .collect();
        let h = match (self.h.as_ref(), o.h.as_ref()) {
            (Some(ha), Some(hb)) => {
                let mut h = vec![vec![0.0; n]; n];
                for i in 0..n {
                    for j in 0..n {
                        h[i][j] = self.v * hb[i][j]
                            + o.v * ha[i][j]
                            + self.g[i] * o.g[j]
                            + self.g[j] * o.g[i];
                    }
                }
                Some(h)
            }
            _ => None,
        };
        Jet { v, g, h }
    }
}

impl CompiledExpr {
    pub fn eval(&self, x: &[f64]) -> Result<f64, DomainError> {
        let domain_err = |what: String| DomainError {
            at: x.to_vec(),
            what,
        };
        match self {
            CompiledExpr::Scalar(c) => Ok(*c),
            CompiledExpr::Poly(p) => Ok(p.eval_f64(x)),
            CompiledExpr::AffPow { base, exp, exp_int } => {
                let b = base.eval(x);
                if b <= 0.0 {
                    return Err(domain_err(format!("affine power base {b} ≤ 0")));
                }
                Ok(match exp_int {
                    Some(k) => b.powi(*k),
                    None => b.powf(*exp),
                })
            }
            CompiledExpr::ExpAff(a) => Ok(a.eval(x).exp()),
            CompiledExpr::Sum(args) => {
                let mut acc = 0.0;
                for a in args {
                    acc += a.eval(x)?;
                }
                Ok(acc)
            }
            CompiledExpr::Product(args) => {
                let mut acc = 1.0;
                for a in args {
                    acc *= a.eval(x)?;
                }
                Ok(acc)
            }
            CompiledExpr::Quotient(a, b) => {
                let den = b.eval(x)?;
                if den <= 0.0 {
                    return Err(domain_err(format!("quotient denominator {den} ≤ 0")));
                }
                Ok(a.eval(x)? / den)
            }
        }
    }

    pub fn value_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>), DomainError> {
        let jet = self.jet(x, false)?;
        Ok((jet.v, jet.g))
    }

    pub fn value_grad_hess(
        &self,
        x: &[f64],
    ) -> Result<(f64, Vec<f64>, Vec<Vec<f64>>), DomainError> {
        let jet = self.jet(x, true)?;
        let h = jet.h.expect("requested hessian");
        Ok((jet.v, jet.g, h))
    }

    fn jet(&self, x: &[f64], with_h: bool) -> Result<Jet, DomainError> {
        let n = x.len();
        let domain_err = |what: String| DomainError {
            at: x.to_vec(),
            what,
        };
        match self {
            CompiledExpr::Scalar(c) => Ok(Jet::constant(*c, n, with_h)),
            CompiledExpr::Poly(p) => Ok(poly_jet(p, x, with_h)),
            CompiledExpr::AffPow { base, exp, exp_int } => {
                let b = base.eval(x);
                if b <= 0.0 {
                    return Err(domain_err(format!("affine power base {b} ≤ 0")));
                }
                let m = *exp;
                let v = match exp_int {
                    Some(k) => b.powi(*k),
                    None => b.powf(m),
                };
                let dv = m * v / b; // m b^{m-1}
                let g: Vec<f64> = base.linear.iter().map(|u| dv * u).collect();
                let h = with_h.then(|| {
                    let d2 = m * (m - 1.0) * v / (b * b);
                    outer_scaled(&base.linear, d2)
                });
                Ok(Jet { v, g, h })
            }
            CompiledExpr::ExpAff(a) => {
                let v = a.eval(x).exp();
                let g: Vec<f64> = a.linear.iter().map(|u| v * u).collect();
                let h = with_h.then(|| outer_scaled(&a.linear, v));
                Ok(Jet { v, g, h })
            }
            CompiledExpr::Sum(args) => {
                let mut acc = Jet::constant(0.0, n, with_h);
                for a in args {
                    acc.add_assign(&a.jet(x, with_h)?);
                }
                Ok(acc)
            }
            CompiledExpr::Product(args) => {
                let mut acc = Jet::constant(1.0, n, with_h);
                for a in args {
                    acc = acc.mul(&a.jet(x, with_h)?);
                }
                Ok(acc)
            }
            CompiledExpr::Quotient(a, b) => {
                let num = a.jet(x, with_h)?;
                let den = b.jet(x, with_h)?;
                if den.v <= 0.0 {
                    return Err(domain_err(format!(
                        "quotient denominator {} ≤ 0",
                        den.v
                    )));
                }
                let v = num.v / den.v;
                let g: Vec<f64> = (0..n)
                    .map(|i| (num.g[i] - v * den.g[i]) / den.v)
                    .collect();
                let h = match (num.h.as_ref(), den.h.as_ref()) {
                    (Some(hn), Some(hd)) => {
                        let mut h = vec![vec![0.0; n]; n];
                        for i in 0..n {
                            for j in 0..n {
                                h[i][j] = (hn[i][j]
                                    - v * hd[i][j]
                                    - g[i] * den.g[j]
                                    - g[j] * den.g[i])
                                    / den.v;
                            }
                        }
                        Some(h)
                    }
                    _ => None,
                };
                Ok(Jet { v, g, h })
            }
        }
    }
}

fn outer_scaled(u: &[f64], s: f64) -> Vec<Vec<f64>> {
    let n = u.len();
    (0..n)
        .map(|i| (0..n).map(|j| s * u[i] * u[j]).collect())
        .collect()
}

fn poly_jet(p: &MultiPoly<f64>, x: &[f64], with_h: bool) -> Jet {
    let n = x.len();
    // per-coordinate power tables
    let max_deg: Vec<u32> = (0..n)
        .map(|i| p.terms().map(|(e, _)| e[i]).max().unwrap_or(0))
        .collect();
    let pows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut v = vec![1.0];
            for k in 1..=max_deg[i] {
                v.push(v[(k - 1) as usize] * x[i]);
            }
            v
        })
        .collect();
    let mono = |e: &[u32]| -> f64 {
        let mut t = 1.0;
        for i in 0..n {
            t *= pows[i][e[i] as usize];
        }
        t
    };
    let mut v = 0.0;
    let mut g = vec![0.0; n];
    let mut h = with_h.then(|| vec![vec![0.0; n]; n]);
    for (e, c) in p.terms() {
        v += c * mono(e);
        for i in 0..n {
            if e[i] == 0 {
                continue;
            }
            let mut ei = e.clone();
            ei[i] -= 1;
            g[i] += c * e[i] as f64 * mono(&ei);
            if let Some(h) = h.as_mut() {
                // diagonal
                if ei[i] > 0 {
                    let mut eii = ei.clone();
                    eii[i] -= 1;
                    h[i][i] += c * (e[i] * (e[i] - 1)) as f64 * mono(&eii);
                }
                for j in i + 1..n {
                    if ei[j] == 0 {
                        continue;
                    }
                    let mut eij = ei.clone();
                    eij[j] -= 1;
                    let t = c * (e[i] * e[j]) as f64 * mono(&eij);
                    h[i][j] += t;
                    h[j][i] += t;
                }
            }
        }
    }
    Jet { v, g, h }
}

impl MultiPoly<f64> {
    /// Fast float evaluation with power tables.
    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        let n = self.dim();
        let max_deg: Vec<u32> = (0..n)
            .map(|i| self.terms().map(|(e, _)| e[i]).max().unwrap_or(0))
            .collect();
        let pows: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let mut v = vec![1.0];
                for k in 1..=max_deg[i] {
                    v.push(v[(k - 1) as usize] * x[i]);
                }
                v
            })
            .collect();
        let mut acc = 0.0;
        for (e, c) in self.terms() {
            let mut t = *c;
            for i in 0..n {
                t *= pows[i][e[i] as usize];
            }
            acc += t;
        }
        acc
    }
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

    #[test]
    fn eval_examples() {
        // Poly x1² at (1/2, 0) → 1/4, exact
        let p = WeightExpr::poly(MultiPoly::coordinate(2, 0).pow(2));
        assert_eq!(
            p.eval_exact(&[rat(1, 2), rat(0, 1)]).unwrap(),
            Some(rat(1, 4))
        );
        // (x1+2)^{-1} at origin → 1/2, grad (−1/4, 0)
        let e = WeightExpr::aff_pow(aff(&[1, 0], (2, 1)), Exponent::int(-1));
        assert_eq!(
            e.eval_exact(&[rat(0, 1), rat(0, 1)]).unwrap(),
            Some(rat(1, 2))
        );
        let (v, g) = e.compile().value_grad(&[0.0, 0.0]).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
        assert!((g[0] + 0.25).abs() < 1e-15 && g[1].abs() < 1e-15);
        // e^{x1} at (1, 0) → e, grad (e, 0)
        let ex = WeightExpr::exp_aff(aff(&[1, 0], (0, 1)));
        let (v, g) = ex.compile().value_grad(&[1.0, 0.0]).unwrap();
        assert!((v - std::f64::consts::E).abs() < 1e-15);
        assert!((g[0] - std::f64::consts::E).abs() < 1e-15 && g[1] == 0.0);
    }

    #[test]
    fn domain_errors() {
        let e = WeightExpr::aff_pow(aff(&[1, 0], (0, 1)), Exponent::int(-1));
        assert!(e.compile().eval(&[0.0, 1.0]).is_err());
        assert!(e.compile().eval(&[-1.0, 0.0]).is_err());
        let q = WeightExpr::quotient(WeightExpr::one(), WeightExpr::poly(MultiPoly::coordinate(1, 0)));
        assert!(q.compile().eval(&[0.0]).is_err());
        assert!(q.eval_exact(&[rat(0, 1)]).is_err());
    }

    #[test]
    fn symbolic_derivative_matches_numeric() {
        // h = (x+2)^{-2} · e^{x+y} + x²y
        let h = WeightExpr::sum(vec![
            WeightExpr::product(vec![
                WeightExpr::aff_pow(aff(&[1, 0], (2, 1)), Exponent::int(-2)),
                WeightExpr::exp_aff(aff(&[1, 1], (0, 1))),
            ]),
            WeightExpr::poly(MultiPoly::coordinate(2, 0).pow(2).mul(&MultiPoly::coordinate(2, 1))),
        ]);
        let x = [0.3, 0.7];
        let (_, g) = h.compile().value_grad(&x).unwrap();
        for i in 0..2 {
            let sym = h.deriv(i).compile().eval(&x).unwrap();
            assert!((sym - g[i]).abs() < 1e-12, "i={i}: {sym} vs {}", g[i]);
        }
    }

    #[test]
    fn hessian_symmetry_and_quotient() {
        let q = WeightExpr::quotient(
            WeightExpr::poly(MultiPoly::coordinate(2, 0).pow(3)),
            WeightExpr::aff_pow(aff(&[0, 1], (1, 1)), Exponent::int(1)),
        );
        let x = [0.4, 0.2];
        let (_, _, h) = q.compile().value_grad_hess(&x).unwrap();
        assert!((h[0][1] - h[1][0]).abs() < 1e-14);
        // d²/dx² (x³/(y+1)) = 6x/(y+1)
        assert!((h[0][0] - 6.0 * 0.4 / 1.2).abs() < 1e-13);
        // d²/dxdy = -3x²/(y+1)²
        assert!((h[0][1] + 3.0 * 0.16 / (1.2 * 1.2)).abs() < 1e-13);
    }

    #[test]
    fn polynomial_extraction() {
        let e = WeightExpr::product(vec![
            WeightExpr::aff_pow(aff(&[1, 1], (1, 1)), Exponent::int(2)),
            WeightExpr::scalar(rat(3, 2)),
        ]);
        let p = e.as_polynomial(2).unwrap();
        assert_eq!(p.eval(&[rat(1, 1), rat(1, 1)]), rat(27, 2));
        let not_poly = WeightExpr::exp_aff(aff(&[1, 0], (0, 1)));
        assert!(not_poly.as_polynomial(2).is_none());
        let neg_pow = WeightExpr::aff_pow(aff(&[1, 0], (1, 1)), Exponent::int(-1));
        assert!(neg_pow.as_polynomial(2).is_none());
    }
}
