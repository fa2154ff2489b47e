//! Multivariate polynomials in canonical sparse form, generic over the
//! scalar. Exact over rationals; the compiled numeric path uses the same
//! type over `f64`.

use crate::polytope::AffineFunctional;
use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// Sparse polynomial: exponent multi-index → coefficient; no zero
/// coefficients are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly<T> {
    dim: usize,
    terms: BTreeMap<Vec<u32>, T>,
}

impl<T: Scalar> MultiPoly<T> {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: T) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    /// The coordinate monomial `x_i`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut exp = vec![0; dim];
        exp[i] = 1;
        let mut p = Self::zero(dim);
        p.add_term(exp, T::one());
        p
    }

    pub fn monomial(dim: usize, exp: Vec<u32>, coef: T) -> Self {
        debug_assert_eq!(exp.len(), dim);
        let mut p = Self::zero(dim);
        p.add_term(exp, coef);
        p
    }

    pub fn from_affine(f: &AffineFunctional<T>) -> Self {
        let dim = f.dim();
        let mut p = Self::constant(dim, f.offset.clone());
        for (i, c) in f.linear.iter().enumerate() {
            if !c.is_zero() {
                let mut exp = vec![0; dim];
                exp[i] = 1;
                p.add_term(exp, c.clone());
            }
        }
        p
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Vec<u32>, T)>) -> Self {
        let mut p = Self::zero(dim);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &T)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<T> {
        match self.terms.len() {
            0 => Some(T::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, exp: Vec<u32>, coef: T) {
        debug_assert_eq!(exp.len(), self.dim);
        if coef.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp);
        match entry {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + coef;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coef);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &T) -> Self {
        if s.is_zero() {
            return Self::zero(self.dim);
        }
        Self {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.clone() * s.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = Self::zero(self.dim);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exp, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.dim, T::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, x: &[T]) -> T {
        debug_assert_eq!(x.len(), self.dim);
        let mut acc = T::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t = t * xi.clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut exp = e.clone();
            exp[i] -= 1;
            out.add_term(exp, c.clone() * T::from_u32(e[i]).unwrap());
        }
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    /// Substitutes the affine change of variables `x = offset + cols · t`,
    /// producing a polynomial in `cols.len()` variables. Exact over
    /// rationals; this is how simplex and facet-chart pullbacks are built.
    pub fn compose_affine(&self, offset: &[T], cols: &[Vec<T>]) -> Self {
        let tdim = cols.len();
        // affine image of each source coordinate as a degree-1 polynomial in t
        let coord_affine: Vec<Self> = (0..self.dim)
            .map(|i| {
                let mut p = Self::constant(tdim, offset[i].clone());
                for (j, col) in cols.iter().enumerate() {
                    if !col[i].is_zero() {
                        let mut exp = vec![0; tdim];
                        exp[j] = 1;
                        p.add_term(exp, col[i].clone());
                    }
                }
                p
            })
            .collect();
        // powers cache per coordinate
        let max_pow: Vec<u32> = (0..self.dim)
            .map(|i| self.terms.keys().map(|e| e[i]).max().unwrap_or(0))
            .collect();
        let pow_cache: Vec<Vec<Self>> = (0..self.dim)
            .map(|i| {
                let mut v = vec![Self::constant(tdim, T::one())];
                for k in 1..=max_pow[i] {
                    let next = v[(k - 1) as usize].mul(&coord_affine[i]);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Self::zero(tdim);
        for (e, c) in &self.terms {
            let mut term = Self::constant(tdim, c.clone());
            for i in 0..self.dim {
                if e[i] > 0 {
                    term = term.mul(&pow_cache[i][e[i] as usize]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> MultiPoly<U> {
        MultiPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), f(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn approx(&self) -> MultiPoly<f64> {
        self.map(|c| c.approx())
    }
}
