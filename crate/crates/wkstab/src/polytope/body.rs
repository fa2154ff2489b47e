//! Generic convex-polytope kernel: H-representation with enumerated
//! vertices, half-space clipping and exact fan triangulation.
//!
//! The kernel makes no Delzant or lattice assumptions; those live in the
//! labeled layer on top. Clipped pieces and weight creases produce plain
//! bodies of this kind.

use crate::linalg::{self, affine_rank, dot, sub};
use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// Affine map `x ↦ ⟨linear, x⟩ + offset`. Doubles as a polytope label
/// `L_j ≥ 0`, a test direction, and a PL piece.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AffineFunctional<T> {
    pub linear: Vec<T>,
    pub offset: T,
}

impl<T: Scalar> AffineFunctional<T> {
    pub fn new(linear: Vec<T>, offset: T) -> Self {
        Self { linear, offset }
    }

    pub fn constant(dim: usize, c: T) -> Self {
        Self {
            linear: vec![T::zero(); dim],
            offset: c,
        }
    }

    /// The `i`-th coordinate functional `x_i`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut linear = vec![T::zero(); dim];
        linear[i] = T::one();
        Self {
            linear,
            offset: T::zero(),
        }
    }

    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    pub fn eval(&self, x: &[T]) -> T {
        dot(&self.linear, x) + self.offset.clone()
    }

    pub fn is_linear_zero(&self) -> bool {
        self.linear.iter().all(|c| c.is_zero())
    }

    pub fn neg(&self) -> Self {
        Self {
            linear: self.linear.iter().map(|c| -c.clone()).collect(),
            offset: -self.offset.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            linear: sub(&self.linear, &other.linear),
            offset: self.offset.clone() - other.offset.clone(),
        }
    }

    pub fn scaled(&self, s: &T) -> Self {
        Self {
            linear: self.linear.iter().map(|c| c.clone() * s.clone()).collect(),
            offset: self.offset.clone() * s.clone(),
        }
    }

    /// Pullback through the affine chart `x = origin + basis · t`:
    /// returns `t ↦ self(origin + basis t)` as a functional on chart space.
    pub fn pullback(&self, origin: &[T], basis: &[Vec<T>]) -> AffineFunctional<T> {
        let linear = basis.iter().map(|col| dot(&self.linear, col)).collect();
        AffineFunctional {
            linear,
            offset: self.eval(origin),
        }
    }

    pub fn approx(&self) -> AffineFunctional<f64> {
        AffineFunctional {
            linear: self.linear.iter().map(|c| c.approx()).collect(),
            offset: self.offset.approx(),
        }
    }
}

/// Simplex given by its vertex points; `points.len() - 1` is its order,
/// which may be lower than the ambient dimension (facet simplices).
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex<T> {
    pub points: Vec<Vec<T>>,
}

impl<T: Scalar> Simplex<T> {
    pub fn new(points: Vec<Vec<T>>) -> Self {
        Self { points }
    }

    pub fn ambient_dim(&self) -> usize {
        self.points.first().map_or(0, |p| p.len())
    }

    pub fn order(&self) -> usize {
        self.points.len() - 1
    }

    /// Volume, defined for full simplices (order == ambient dimension).
    pub fn volume(&self) -> T {
        let m = self.ambient_dim();
        debug_assert_eq!(self.order(), m);
        if m == 0 {
            return T::one();
        }
        let rows: Vec<Vec<T>> = self.points[1..]
            .iter()
            .map(|p| sub(p, &self.points[0]))
            .collect();
        let mut v = linalg::det(&rows);
        if v < T::zero() {
            v = -v;
        }
        let mut fact = T::one();
        for k in 2..=m {
            fact = fact * T::from_usize(k).unwrap();
        }
        v / fact
    }

    pub fn barycenter(&self) -> Vec<T> {
        let m = self.ambient_dim();
        let k = T::from_usize(self.points.len()).unwrap();
        (0..m)
            .map(|i| {
                self.points
                    .iter()
                    .fold(T::zero(), |acc, p| acc + p[i].clone())
                    / k.clone()
            })
            .collect()
    }

    pub fn approx(&self) -> Simplex<f64> {
        Simplex {
            points: self
                .points
                .iter()
                .map(|p| p.iter().map(|c| c.approx()).collect())
                .collect(),
        }
    }
}

/// Longest edge length of an `f64` simplex.
pub fn longest_edge(s: &Simplex<f64>) -> f64 {
    let mut best = 0.0f64;
    for i in 0..s.points.len() {
        for j in i + 1..s.points.len() {
            let d: f64 = s.points[i]
                .iter()
                .zip(&s.points[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            best = best.max(d);
        }
    }
    best.sqrt()
}

/// Convex polytope as intersected half-spaces `{ x : h(x) ≥ 0 }` with the
/// vertex list enumerated exactly. May be empty or lower-dimensional;
/// `volume` is then zero and `triangulate` empty.
#[derive(Debug, Clone)]
pub struct ConvexPolytope<T> {
    dim: usize,
    halfspaces: Vec<AffineFunctional<T>>,
    vertices: Vec<Vec<T>>,
}

impl<T: Scalar> ConvexPolytope<T> {
    /// Intersects the half-spaces and enumerates vertices by solving all
    /// `dim`-subsets. Intended for bounded inputs; unbounded inputs simply
    /// yield the (possibly empty) vertex set of the pointed part, which the
    /// labeled layer screens out before constructing polytopes.
    pub fn intersect(dim: usize, halfspaces: Vec<AffineFunctional<T>>) -> Self {
        let vertices = enumerate_vertices(dim, &halfspaces);
        Self {
            dim,
            halfspaces,
            vertices,
        }
    }

    /// Zero-dimensional polytope: the single point of ℝ⁰.
    pub fn point() -> Self {
        Self {
            dim: 0,
            halfspaces: Vec::new(),
            vertices: vec![Vec::new()],
        }
    }

    pub(crate) fn assemble(
        dim: usize,
        halfspaces: Vec<AffineFunctional<T>>,
        vertices: Vec<Vec<T>>,
    ) -> Self {
        debug_assert!(vertices.iter().all(|v| {
            halfspaces.iter().all(|h| h.eval(v) >= T::zero())
        }));
        Self {
            dim,
            halfspaces,
            vertices,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[AffineFunctional<T>] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> &[Vec<T>] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_full_dim(&self) -> bool {
        self.dim == 0 || affine_rank(&self.vertices) == self.dim
    }

    pub fn contains(&self, x: &[T]) -> bool {
        self.halfspaces.iter().all(|h| h.eval(x) >= T::zero())
    }

    pub fn is_interior(&self, x: &[T]) -> bool {
        self.halfspaces.iter().all(|h| h.eval(x) > T::zero())
    }

    /// Indices of the vertices lying on half-space `j`.
    pub fn vertices_on(&self, j: usize) -> Vec<usize> {
        let h = &self.halfspaces[j];
        self.vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| h.eval(v).is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// Whether half-space `j` supports a genuine facet (a face of dimension
    /// `dim - 1`).
    pub fn is_facet(&self, j: usize) -> bool {
        if self.dim == 0 {
            return false;
        }
        let pts: Vec<Vec<T>> = self
            .vertices_on(j)
            .into_iter()
            .map(|i| self.vertices[i].clone())
            .collect();
        affine_rank(&pts) == self.dim - 1
    }

    /// Both sides of a hyperplane cut: `(P ∩ {h ≥ 0}, P ∩ {h ≤ 0})`.
    pub fn clip(&self, h: &AffineFunctional<T>) -> (Self, Self) {
        let mut pos = self.halfspaces.clone();
        pos.push(h.clone());
        let mut neg = self.halfspaces.clone();
        neg.push(h.neg());
        (
            Self::intersect(self.dim, pos),
            Self::intersect(self.dim, neg),
        )
    }

    /// Exact volume via fan triangulation.
    pub fn volume(&self) -> T {
        self.triangulate()
            .iter()
            .fold(T::zero(), |acc, s| acc + s.volume())
    }

    /// Volume centroid, exact, via the simplex decomposition. `None` for
    /// empty or lower-dimensional bodies.
    pub fn centroid(&self) -> Option<Vec<T>> {
        let simplices = self.triangulate();
        if simplices.is_empty() {
            return None;
        }
        let mut total = T::zero();
        let mut acc = vec![T::zero(); self.dim];
        for s in &simplices {
            let v = s.volume();
            let b = s.barycenter();
            for i in 0..self.dim {
                acc[i] = acc[i].clone() + b[i].clone() * v.clone();
            }
            total = total + v;
        }
        if total.is_zero() {
            return None;
        }
        Some(acc.into_iter().map(|c| c / total.clone()).collect())
    }

    /// Partitions the body into full-dimensional simplices (up to measure
    /// zero). Empty when the body is empty or lower-dimensional.
    pub fn triangulate(&self) -> Vec<Simplex<T>> {
        if self.dim == 0 {
            return if self.is_empty() {
                Vec::new()
            } else {
                vec![Simplex::new(vec![Vec::new()])]
            };
        }
        if !self.is_full_dim() {
            return Vec::new();
        }
        triangulate_rec(self.dim, &self.vertices, &self.halfspaces)
            .into_iter()
            .map(Simplex::new)
            .collect()
    }

    /// Triangulates the facet supported by half-space `j` into simplices of
    /// `dim` points each (order `dim - 1`), embedded in the ambient space.
    pub fn triangulate_facet(&self, j: usize) -> Vec<Simplex<T>> {
        let m = self.dim;
        if m == 0 || !self.is_facet(j) {
            return Vec::new();
        }
        let verts: Vec<Vec<T>> = self
            .vertices_on(j)
            .into_iter()
            .map(|i| self.vertices[i].clone())
            .collect();
        if m == 1 {
            return vec![Simplex::new(vec![verts[0].clone()])];
        }
        let chart = coordinate_chart(&self.halfspaces[j]);
        let chart_verts: Vec<Vec<T>> = verts.iter().map(|v| chart.project(v)).collect();
        let chart_hs: Vec<AffineFunctional<T>> = self
            .halfspaces
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, h)| h.pullback(&chart.origin, &chart.basis))
            .filter(|h| !h.is_linear_zero())
            .collect();
        triangulate_rec(m - 1, &chart_verts, &chart_hs)
            .into_iter()
            .map(|pts| Simplex::new(pts.iter().map(|t| chart.embed(t)).collect()))
            .collect()
    }
}

/// Enumerate vertices: solve every `dim`-subset of the half-space
/// boundaries, keep feasible solutions, merge duplicates.
fn enumerate_vertices<T: Scalar>(
    dim: usize,
    halfspaces: &[AffineFunctional<T>],
) -> Vec<Vec<T>> {
    let d = halfspaces.len();
    if d < dim {
        return Vec::new();
    }
    if dim == 0 {
        // ℝ⁰: the single point is feasible iff every (constant) constraint is
        return if halfspaces.iter().all(|h| h.offset >= T::zero()) {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    let mut out: Vec<Vec<T>> = Vec::new();
    let mut subset: Vec<usize> = (0..dim).collect();
    loop {
        let a: Vec<Vec<T>> = subset
            .iter()
            .map(|&j| halfspaces[j].linear.clone())
            .collect();
        let b: Vec<T> = subset
            .iter()
            .map(|&j| -halfspaces[j].offset.clone())
            .collect();
        if let Some(x) = linalg::solve(&a, &b) {
            if halfspaces.iter().all(|h| h.eval(&x) >= T::zero()) {
                out.push(x);
            }
        }
        // next combination
        let mut i = dim;
        loop {
            if i == 0 {
                sort_dedup(&mut out);
                return out;
            }
            i -= 1;
            if subset[i] != i + d - dim {
                subset[i] += 1;
                for k in i + 1..dim {
                    subset[k] = subset[k - 1] + 1;
                }
                break;
            }
        }
    }
}

fn sort_dedup<T: Scalar>(points: &mut Vec<Vec<T>>) {
    points.sort_by(|a, b| {
        for (x, y) in a.iter().zip(b) {
            match x.partial_cmp(y) {
                Some(std::cmp::Ordering::Equal) | None => continue,
                Some(ord) => return ord,
            }
        }
        std::cmp::Ordering::Equal
    });
    points.dedup();
}

/// Rational coordinate chart of the hyperplane `{h = 0}`: drop the pivot
/// coordinate (largest |linear| entry), reconstruct it affinely.
struct CoordinateChart<T> {
    origin: Vec<T>,
    basis: Vec<Vec<T>>, // columns, ambient-dim each
    pivot: usize,
    h: AffineFunctional<T>,
}

fn coordinate_chart<T: Scalar>(h: &AffineFunctional<T>) -> CoordinateChart<T> {
    let n = h.dim();
    let pivot = (0..n)
        .max_by(|&i, &j| {
            h.linear[i]
                .abs()
                .partial_cmp(&h.linear[j].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .expect("chart of a nonzero functional");
    debug_assert!(!h.linear[pivot].is_zero());
    // origin: the point with all free coordinates 0
    let mut origin = vec![T::zero(); n];
    origin[pivot] = -h.offset.clone() / h.linear[pivot].clone();
    let mut basis = Vec::with_capacity(n - 1);
    for i in (0..n).filter(|&i| i != pivot) {
        let mut col = vec![T::zero(); n];
        col[i] = T::one();
        col[pivot] = -h.linear[i].clone() / h.linear[pivot].clone();
        basis.push(col);
    }
    CoordinateChart {
        origin,
        basis,
        pivot,
        h: h.clone(),
    }
}

impl<T: Scalar> CoordinateChart<T> {
    fn embed(&self, t: &[T]) -> Vec<T> {
        let n = self.origin.len();
        let mut x = self.origin.clone();
        for (col, ti) in self.basis.iter().zip(t) {
            for i in 0..n {
                x[i] = x[i].clone() + col[i].clone() * ti.clone();
            }
        }
        x
    }

    fn project(&self, x: &[T]) -> Vec<T> {
        debug_assert!(self.h.eval(x).is_zero());
        (0..x.len())
            .filter(|&i| i != self.pivot)
            .map(|i| x[i].clone())
            .collect()
    }
}

/// Recursive fan triangulation from the lexicographically smallest vertex.
/// Facets are identified by their vertex sets, so scaled or duplicated
/// half-spaces cannot double-count.
fn triangulate_rec<T: Scalar>(
    m: usize,
    vertices: &[Vec<T>],
    halfspaces: &[AffineFunctional<T>],
) -> Vec<Vec<Vec<T>>> {
    debug_assert!(m >= 1);
    if vertices.len() < m + 1 {
        return Vec::new();
    }
    if vertices.len() == m + 1 {
        return vec![vertices.to_vec()];
    }
    let mut verts = vertices.to_vec();
    sort_dedup(&mut verts);
    let apex = verts[0].clone();
    if m == 1 {
        // interval: apex is the min; the only opposite facet is the max
        return vec![vec![apex, verts.last().unwrap().clone()]];
    }
    // facets not containing the apex, deduplicated by vertex set
    let mut facets: BTreeMap<Vec<usize>, &AffineFunctional<T>> = BTreeMap::new();
    for h in halfspaces {
        if h.is_linear_zero() || h.eval(&apex).is_zero() {
            continue;
        }
        let on: Vec<usize> = verts
            .iter()
            .enumerate()
            .filter(|(_, v)| h.eval(v).is_zero())
            .map(|(i, _)| i)
            .collect();
        if on.len() < m {
            continue;
        }
        let pts: Vec<Vec<T>> = on.iter().map(|&i| verts[i].clone()).collect();
        if affine_rank(&pts) != m - 1 {
            continue;
        }
        facets.entry(on).or_insert(h);
    }
    let mut out = Vec::new();
    for (on, h) in facets {
        let facet_verts: Vec<Vec<T>> = on.iter().map(|&i| verts[i].clone()).collect();
        let chart = coordinate_chart(h);
        let chart_verts: Vec<Vec<T>> = facet_verts.iter().map(|v| chart.project(v)).collect();
        let chart_hs: Vec<AffineFunctional<T>> = halfspaces
            .iter()
            .filter(|g| !std::ptr::eq(*g, h))
            .map(|g| g.pullback(&chart.origin, &chart.basis))
            .filter(|g| !g.is_linear_zero())
            .collect();
        for sub_simplex in triangulate_rec(m - 1, &chart_verts, &chart_hs) {
            let mut pts = vec![apex.clone()];
            pts.extend(sub_simplex.iter().map(|t| chart.embed(t)));
            let rows: Vec<Vec<T>> = pts[1..].iter().map(|p| sub(p, &pts[0])).collect();
            if linalg::det(&rows).is_zero() {
                continue;
            }
            out.push(pts);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};

    fn aff(linear: &[i64], offset: i64) -> AffineFunctional<Rat> {
        AffineFunctional::new(linear.iter().map(|&c| rat(c, 1)).collect(), rat(offset, 1))
    }

    fn unit_square() -> ConvexPolytope<Rat> {
        ConvexPolytope::intersect(
            2,
            vec![aff(&[1, 0], 0), aff(&[-1, 0], 1), aff(&[0, 1], 0), aff(&[0, -1], 1)],
        )
    }

    fn std_simplex() -> ConvexPolytope<Rat> {
        ConvexPolytope::intersect(2, vec![aff(&[1, 0], 0), aff(&[0, 1], 0), aff(&[-1, -1], 1)])
    }

    #[test]
    fn square_vertices_and_volume() {
        let p = unit_square();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.volume(), rat(1, 1));
        assert_eq!(p.triangulate().len(), 2);
        assert_eq!(p.centroid().unwrap(), vec![rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn simplex_triangulates_to_itself() {
        let p = std_simplex();
        assert_eq!(p.vertices().len(), 3);
        let tris = p.triangulate();
        assert_eq!(tris.len(), 1);
        assert_eq!(p.volume(), rat(1, 2));
        assert_eq!(p.centroid().unwrap(), vec![rat(1, 3), rat(1, 3)]);
    }

    #[test]
    fn clip_square_in_half() {
        let p = unit_square();
        let h = aff(&[1, 0], 0).sub(&AffineFunctional::constant(2, rat(1, 2))); // x1 - 1/2
        let (pos, neg) = p.clip(&h);
        assert_eq!(pos.volume(), rat(1, 2));
        assert_eq!(neg.volume(), rat(1, 2));
    }

    #[test]
    fn clip_entirely_outside() {
        let p = std_simplex();
        let h = AffineFunctional::new(vec![rat(1, 1), rat(0, 1)], rat(-2, 1)); // x1 - 2
        let (pos, neg) = p.clip(&h);
        assert!(pos.is_empty() || !pos.is_full_dim());
        assert_eq!(pos.volume(), rat(0, 1));
        assert_eq!(neg.volume(), rat(1, 2));
    }

    #[test]
    fn duplicate_halfspaces_do_not_double_count() {
        let mut hs = unit_square().halfspaces.clone();
        hs.push(aff(&[2, 0], 0)); // scaled duplicate of x1 ≥ 0
        hs.push(aff(&[1, 0], 0)); // exact duplicate
        let p = ConvexPolytope::intersect(2, hs);
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.volume(), rat(1, 1));
    }

    #[test]
    fn cube_volume_and_facets() {
        let mut hs = Vec::new();
        for i in 0..3 {
            hs.push(AffineFunctional::coordinate(3, i));
            hs.push(AffineFunctional::coordinate(3, i).neg().sub(
                &AffineFunctional::constant(3, rat(-1, 1)),
            ));
        }
        let cube = ConvexPolytope::intersect(3, hs);
        assert_eq!(cube.vertices().len(), 8);
        assert_eq!(cube.volume(), rat(1, 1));
        for j in 0..6 {
            assert!(cube.is_facet(j));
            let fs = cube.triangulate_facet(j);
            assert!(!fs.is_empty());
            // each facet is a unit square split into triangles
            let mut pts: Vec<Vec<Rat>> = fs.iter().flat_map(|s| s.points.clone()).collect();
            sort_dedup(&mut pts);
            assert_eq!(pts.len(), 4);
        }
    }

    #[test]
    fn f64_instantiation() {
        let hs = vec![
            AffineFunctional::new(vec![1.0, 0.0], 0.0),
            AffineFunctional::new(vec![-1.0, 0.0], 1.0),
            AffineFunctional::new(vec![0.0, 1.0], 0.0),
            AffineFunctional::new(vec![0.0, -1.0], 1.0),
        ];
        let p = ConvexPolytope::intersect(2, hs);
        assert_eq!(p.vertices().len(), 4);
        let vol: f64 = p.volume();
        assert!((vol - 1.0).abs() < 1e-12);
    }
}
