//! Adaptive simplex quadrature.
//!
//! Fixed rule: the Grundmann–Möller symmetric rule of index 3, exact for
//! total degree ≤ 7 in every dimension, with weights constructed in exact
//! rational arithmetic (degree-7 exactness is asserted against the exact
//! integrator in tests). Error control: two-level estimate (rule on a
//! simplex vs. the sum over its longest-edge bisection) driving a worst-
//! first refinement queue. Exceeding the subdivision budget is a reported
//! error carrying the partial result, never a silent answer.

use super::QuadratureError;
use crate::polytope::Simplex;
use crate::scalar::{Rat, Scalar};
use crate::weights::DomainError;
use num_traits::{One, Pow};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Default cap on the number of leaf simplices per integral.
pub const DEFAULT_SUBDIVISION_BUDGET: usize = 100_000;

const GM_INDEX: u32 = 3; // rule degree 2s+1 = 7

/// Grundmann–Möller rule for one dimension: barycentric nodes and weights
/// normalized so `∫_S f ≈ vol(S) · Σ w_k f(node_k)`.
#[derive(Debug, Clone)]
pub struct GmRule {
    pub dim: usize,
    /// (barycentric coordinates of length dim+1, weight)
    pub nodes: Vec<(Vec<f64>, f64)>,
}

impl GmRule {
    /// Builds the index-`s` rule in exact rational arithmetic, then rounds.
    pub fn new(dim: usize, s: u32) -> Self {
        let nodes = gm_nodes_exact(dim, s)
            .into_iter()
            .map(|(b, w)| (b.iter().map(|c| c.approx()).collect(), w.approx()))
            .collect();
        Self { dim, nodes }
    }

    pub fn degree7(dim: usize) -> Self {
        Self::new(dim, GM_INDEX)
    }

    /// Applies the rule to one simplex.
    pub fn apply(
        &self,
        s: &Simplex<f64>,
        f: &dyn Fn(&[f64]) -> Result<f64, DomainError>,
    ) -> Result<f64, DomainError> {
        let vol = simplex_volume_f64(s);
        if vol == 0.0 {
            return Ok(0.0);
        }
        let ambient = s.ambient_dim();
        let mut acc = 0.0;
        let mut x = vec![0.0; ambient];
        for (bary, w) in &self.nodes {
            for d in 0..ambient {
                x[d] = 0.0;
            }
            for (vertex, &b) in s.points.iter().zip(bary.iter()) {
                for d in 0..ambient {
                    x[d] += b * vertex[d];
                }
            }
            acc += w * f(&x)?;
        }
        Ok(vol * acc)
    }
}

/// Exact Grundmann–Möller nodes/weights: for degree d = 2s+1 in dimension m,
/// node (2β+1)/(d+m−2i) in barycentric coordinates for |β| = s−i, with weight
/// (−1)^i 2^{−2s} (d+m−2i)^d / (i! (d+m−i)!), normalized to the volume-1
/// simplex by multiplying through with m!.
pub fn gm_nodes_exact(m: usize, s: u32) -> Vec<(Vec<Rat>, Rat)> {
    let d = 2 * s + 1;
    let m_u = m as u32;
    let mut out = Vec::new();
    let m_fact = factorial(m_u);
    for i in 0..=s {
        let denom_base = d + m_u - 2 * i;
        let sign = if i % 2 == 0 { Rat::one() } else { -Rat::one() };
        let coeff = sign
            * Rat::new(1.into(), num_bigint::BigInt::from(4).pow(s))
            * Rat::from_integer(num_bigint::BigInt::from(denom_base).pow(d))
            / (factorial(i) * factorial(d + m_u - i))
            * m_fact.clone();
        let mut beta = vec![0u32; m + 1];
        compositions(&mut beta, 0, s - i, &mut |beta| {
            let node: Vec<Rat> = beta
                .iter()
                .map(|&b| Rat::new((2 * b + 1).into(), denom_base.into()))
                .collect();
            out.push((node, coeff.clone()));
        });
    }
    out
}

fn compositions(k: &mut Vec<u32>, idx: usize, remaining: u32, f: &mut impl FnMut(&[u32])) {
    if idx + 1 == k.len() {
        k[idx] = remaining;
        f(k);
        return;
    }
    for v in 0..=remaining {
        k[idx] = v;
        compositions(k, idx + 1, remaining - v, f);
    }
}

fn factorial(k: u32) -> Rat {
    let mut f = Rat::one();
    for i in 2..=k {
        f = f * Rat::from_integer(i.into());
    }
    f
}

pub(crate) fn simplex_volume_f64(s: &Simplex<f64>) -> f64 {
    let m = s.ambient_dim();
    if s.order() != m {
        return 0.0;
    }
    if m == 0 {
        return 1.0;
    }
    let rows: Vec<Vec<f64>> = s.points[1..]
        .iter()
        .map(|p| p.iter().zip(&s.points[0]).map(|(a, b)| a - b).collect())
        .collect();
    let mut det = crate::linalg::det(&rows).abs();
    for k in 2..=m {
        det /= k as f64;
    }
    det
}

struct Node {
    err: f64,
    fine: f64,
    children: [Simplex<f64>; 2],
    child_vals: [f64; 2],
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn bisect(s: &Simplex<f64>) -> (Simplex<f64>, Simplex<f64>) {
    let k = s.points.len();
    let (mut bi, mut bj, mut best) = (0, 1, -1.0f64);
    for i in 0..k {
        for j in i + 1..k {
            let d: f64 = s.points[i]
                .iter()
                .zip(&s.points[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            if d > best {
                best = d;
                bi = i;
                bj = j;
            }
        }
    }
    let mid: Vec<f64> = s.points[bi]
        .iter()
        .zip(&s.points[bj])
        .map(|(a, b)| 0.5 * (a + b))
        .collect();
    let mut left = s.clone();
    left.points[bj] = mid.clone();
    let mut right = s.clone();
    right.points[bi] = mid;
    (left, right)
}

/// Integrates `f` over the union of `simplices` until the global two-level
/// error estimate drops below `tol` or the leaf budget is exhausted.
/// Returns `(value, error_bound)`.
pub fn adaptive_integrate(
    simplices: &[Simplex<f64>],
    f: &dyn Fn(&[f64]) -> Result<f64, DomainError>,
    tol: f64,
    budget: usize,
) -> Result<(f64, f64), QuadratureError> {
    if simplices.is_empty() {
        return Ok((0.0, 0.0));
    }
    let rule = GmRule::degree7(simplices[0].order());
    let make_node = |s: &Simplex<f64>, coarse: f64| -> Result<Node, DomainError> {
        let (a, b) = bisect(s);
        let va = rule.apply(&a, f)?;
        let vb = rule.apply(&b, f)?;
        Ok(Node {
            err: (va + vb - coarse).abs(),
            fine: va + vb,
            children: [a, b],
            child_vals: [va, vb],
        })
    };
    let mut heap = BinaryHeap::new();
    let mut total = 0.0f64;
    let mut total_err = 0.0f64;
    let mut leaves = 0usize;
    for s in simplices {
        let coarse = rule.apply(s, f)?;
        let node = make_node(s, coarse)?;
        total += node.fine;
        total_err += node.err;
        leaves += 1;
        heap.push(node);
    }
    while total_err > tol && leaves < budget {
        let worst = match heap.pop() {
            Some(n) if n.err > 0.0 => n,
            _ => break,
        };
        total -= worst.fine;
        total_err -= worst.err;
        for side in 0..2 {
            let child = make_node(&worst.children[side], worst.child_vals[side])?;
            total += child.fine;
            total_err += child.err;
            heap.push(child);
        }
        leaves += 1;
    }
    if total_err > tol {
        return Err(QuadratureError::ToleranceNotReached {
            value: total,
            achieved: total_err,
        });
    }
    Ok((total, total_err))
}
