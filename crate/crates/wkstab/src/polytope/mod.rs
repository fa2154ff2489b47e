//! Labeled Delzant polytopes and their geometric decompositions.
//!
//! A labeled polytope is the data `(P, L)` of non-negative affine labels
//! `L_j` with integer normals cutting out a bounded, full-dimensional
//! polytope; the Delzant condition (primitive normals forming a lattice
//! basis at every vertex) is validated separately and reported rather than
//! enforced, since clipped pieces legitimately violate it.

mod body;
mod chart;

pub use body::{longest_edge, AffineFunctional, ConvexPolytope, Simplex};
pub use chart::{unimodular_complement, ChartInverse, FacetChart};

use crate::linalg;
use crate::scalar::Rat;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Errors from polytope construction and decomposition.
#[derive(Debug, Clone, thiserror::Error)]
pub enum PolytopeError {
    #[error("need at least n+1 facets, got {got} in dimension {dim}")]
    TooFewFacets { dim: usize, got: usize },
    #[error("facet {facet} has zero linear part")]
    ZeroNormal { facet: usize },
    #[error("facet system is unbounded (recession direction exists)")]
    Unbounded,
    #[error("facet system has no feasible point")]
    Empty,
    #[error("facet system has empty interior")]
    LowerDimensional,
    #[error("facet {facet} is never active")]
    RedundantFacet { facet: usize },
    #[error("point is not strictly interior")]
    NotInterior,
    #[error("facet index {facet} out of range ({count} facets)")]
    InvalidFacet { facet: usize, count: usize },
    #[error("facet {facet} normal is not a primitive integer vector")]
    NonPrimitiveNormal { facet: usize },
}

/// Delzant polytope from its facet labels, with exact derived vertex list.
#[derive(Debug, Clone)]
pub struct LabeledPolytope {
    dim: usize,
    body: ConvexPolytope<Rat>,
}

impl LabeledPolytope {
    /// Builds the polytope `{ x : L_j(x) ≥ 0 }`, enumerating vertices by
    /// exact n-subset solves. Rejects unbounded, empty, lower-dimensional
    /// and redundant inputs.
    pub fn from_facets(
        dim: usize,
        facets: Vec<AffineFunctional<Rat>>,
    ) -> Result<Self, PolytopeError> {
        if facets.len() < dim + 1 {
            return Err(PolytopeError::TooFewFacets {
                dim,
                got: facets.len(),
            });
        }
        if let Some(j) = facets.iter().position(|f| f.is_linear_zero()) {
            return Err(PolytopeError::ZeroNormal { facet: j });
        }
        let normals: Vec<Vec<Rat>> = facets.iter().map(|f| f.linear.clone()).collect();
        if has_recession_direction(dim, &normals) {
            return Err(PolytopeError::Unbounded);
        }
        let body = ConvexPolytope::intersect(dim, facets);
        if body.is_empty() {
            return Err(PolytopeError::Empty);
        }
        if !body.is_full_dim() {
            return Err(PolytopeError::LowerDimensional);
        }
        for j in 0..body.halfspaces().len() {
            if !body.is_facet(j) {
                return Err(PolytopeError::RedundantFacet { facet: j });
            }
        }
        Ok(Self { dim, body })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[AffineFunctional<Rat>] {
        self.body.halfspaces()
    }

    pub fn vertices(&self) -> &[Vec<Rat>] {
        self.body.vertices()
    }

    pub fn body(&self) -> &ConvexPolytope<Rat> {
        &self.body
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.body.contains(x)
    }

    pub fn is_interior(&self, x: &[Rat]) -> bool {
        self.body.is_interior(x)
    }

    pub fn volume(&self) -> Rat {
        self.body.volume()
    }

    /// Exact volume centroid, the default normalization point.
    pub fn barycenter(&self) -> Vec<Rat> {
        self.body.centroid().expect("full-dimensional by construction")
    }

    pub fn triangulate(&self) -> Vec<Simplex<Rat>> {
        self.body.triangulate()
    }

    /// Both sides of a hyperplane cut; pieces are plain rational polytopes
    /// (no Delzant requirement).
    pub fn clip(&self, h: &AffineFunctional<Rat>) -> (ConvexPolytope<Rat>, ConvexPolytope<Rat>) {
        self.body.clip(h)
    }

    /// Axis-aligned bounding box as `(lower, upper)` corners.
    pub fn bounding_box(&self) -> (Vec<Rat>, Vec<Rat>) {
        let vs = self.vertices();
        let mut lo = vs[0].clone();
        let mut hi = vs[0].clone();
        for v in vs {
            for i in 0..self.dim {
                if v[i] < lo[i] {
                    lo[i] = v[i].clone();
                }
                if v[i] > hi[i] {
                    hi[i] = v[i].clone();
                }
            }
        }
        (lo, hi)
    }

    /// Delzant validation report: primitive integer normals, simple
    /// vertices, unimodular vertex cones. Facet-order independent.
    pub fn validate_delzant(&self) -> DelzantReport {
        let mut failures = Vec::new();
        let mut normals: Vec<Option<Vec<BigInt>>> = Vec::new();
        for (j, f) in self.facets().iter().enumerate() {
            match primitive_integer_normal(f) {
                Some(u) => normals.push(Some(u)),
                None => {
                    failures.push(DelzantFailure::NonPrimitiveNormal { facet: j });
                    normals.push(None);
                }
            }
        }
        for (vi, v) in self.vertices().iter().enumerate() {
            let active: Vec<usize> = (0..self.facets().len())
                .filter(|&j| self.facets()[j].eval(v).is_zero())
                .collect();
            if active.len() != self.dim {
                failures.push(DelzantFailure::NonSimpleVertex {
                    vertex: vi,
                    active: active.len(),
                });
                continue;
            }
            let rows: Option<Vec<Vec<BigInt>>> = active
                .iter()
                .map(|&j| normals[j].clone())
                .collect();
            if let Some(rows) = rows {
                let rows_rat: Vec<Vec<Rat>> = rows
                    .iter()
                    .map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
                    .collect();
                let d = linalg::det(&rows_rat);
                if d.abs() != Rat::one() {
                    failures.push(DelzantFailure::NonUnimodularVertex {
                        vertex: vi,
                        facets: active,
                        det: d.to_string(),
                    });
                }
            }
        }
        DelzantReport {
            pass: failures.is_empty(),
            failures,
        }
    }

    /// Cone over every facet with apex `x0` (defaults to the barycenter),
    /// each cone triangulated; volumes sum exactly to `vol(P)`.
    pub fn cone_decomposition(
        &self,
        x0: Option<Vec<Rat>>,
    ) -> Result<ConeDecomposition, PolytopeError> {
        let x0 = x0.unwrap_or_else(|| self.barycenter());
        if !self.is_interior(&x0) {
            return Err(PolytopeError::NotInterior);
        }
        let mut cones = Vec::new();
        for j in 0..self.facets().len() {
            let mut simplices = Vec::new();
            if self.dim == 1 {
                let vtx = self.body.vertices_on(j);
                debug_assert_eq!(vtx.len(), 1);
                simplices.push(Simplex::new(vec![
                    x0.clone(),
                    self.vertices()[vtx[0]].clone(),
                ]));
            } else {
                for facet_simplex in self.body.triangulate_facet(j) {
                    let mut pts = vec![x0.clone()];
                    pts.extend(facet_simplex.points);
                    simplices.push(Simplex::new(pts));
                }
            }
            cones.push(Cone {
                facet: j,
                simplices,
            });
        }
        Ok(ConeDecomposition {
            base_point: x0,
            cones,
        })
    }

    /// Lattice chart of facet `j`: parametrization of the facet under which
    /// dσ is Lebesgue measure (scale 1 by construction).
    pub fn facet_chart(&self, j: usize) -> Result<FacetChart, PolytopeError> {
        let count = self.facets().len();
        if j >= count {
            return Err(PolytopeError::InvalidFacet { facet: j, count });
        }
        let label = &self.facets()[j];
        let u = primitive_integer_normal(label)
            .ok_or(PolytopeError::NonPrimitiveNormal { facet: j })?;
        let on = self.body.vertices_on(j);
        if on.is_empty() {
            return Err(PolytopeError::InvalidFacet { facet: j, count });
        }
        let origin = self.vertices()[on[0]].clone();
        let basis: Vec<Vec<Rat>> = unimodular_complement(&u)
            .into_iter()
            .map(|c| c.into_iter().map(Rat::from_integer).collect())
            .collect();
        let chart_body = if self.dim == 1 {
            ConvexPolytope::point()
        } else {
            let inv = ChartInverse::new(&origin, &basis);
            let chart_hs: Vec<AffineFunctional<Rat>> = self
                .facets()
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, h)| h.pullback(&origin, &basis))
                .filter(|h| !h.is_linear_zero())
                .collect();
            let verts: Vec<Vec<Rat>> = on
                .iter()
                .map(|&vi| inv.apply(&self.vertices()[vi]))
                .collect();
            ConvexPolytope::from_parts(self.dim - 1, chart_hs, verts)
        };
        Ok(FacetChart {
            facet: j,
            origin,
            basis,
            chart_body,
            scale: Rat::one(),
        })
    }

    /// Charts for all facets.
    pub fn facet_charts(&self) -> Result<Vec<FacetChart>, PolytopeError> {
        (0..self.facets().len()).map(|j| self.facet_chart(j)).collect()
    }
}

/// Cone decomposition of `P` from an interior apex over the facets.
#[derive(Debug, Clone)]
pub struct ConeDecomposition {
    pub base_point: Vec<Rat>,
    pub cones: Vec<Cone>,
}

/// One cone: apex joined to a triangulated facet.
#[derive(Debug, Clone)]
pub struct Cone {
    pub facet: usize,
    pub simplices: Vec<Simplex<Rat>>,
}

impl ConeDecomposition {
    pub fn total_volume(&self) -> Rat {
        self.cones
            .iter()
            .flat_map(|c| c.simplices.iter())
            .fold(Rat::zero(), |acc, s| acc + s.volume())
    }

    pub fn cone_volume(&self, j: usize) -> Rat {
        self.cones[j]
            .simplices
            .iter()
            .fold(Rat::zero(), |acc, s| acc + s.volume())
    }
}

/// Outcome of [`LabeledPolytope::validate_delzant`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DelzantReport {
    pub pass: bool,
    pub failures: Vec<DelzantFailure>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DelzantFailure {
    NonPrimitiveNormal {
        facet: usize,
    },
    NonSimpleVertex {
        vertex: usize,
        active: usize,
    },
    NonUnimodularVertex {
        vertex: usize,
        facets: Vec<usize>,
        det: String,
    },
}

/// Integer content of a label's linear part, if the entries are integers
/// with gcd 1.
pub fn primitive_integer_normal(f: &AffineFunctional<Rat>) -> Option<Vec<BigInt>> {
    let mut ints = Vec::with_capacity(f.linear.len());
    for c in &f.linear {
        if !c.is_integer() {
            return None;
        }
        ints.push(c.to_integer());
    }
    let mut g = BigInt::zero();
    for c in &ints {
        g = num_integer::Integer::gcd(&g, c);
    }
    if g.is_one() {
        Some(ints)
    } else {
        None
    }
}

/// Whether the homogeneous system `⟨u_j, y⟩ ≥ 0` admits a nonzero solution;
/// complete for pointed and non-pointed cones (rank test plus extreme-ray
/// enumeration over (n−1)-subsets).
fn has_recession_direction(dim: usize, normals: &[Vec<Rat>]) -> bool {
    if linalg::rank(normals) < dim {
        return true;
    }
    let feasible =
        |y: &[Rat]| normals.iter().all(|u| linalg::dot(u, y) >= Rat::zero());
    let mut subset: Vec<usize> = (0..dim.saturating_sub(1)).collect();
    let d = normals.len();
    loop {
        let rows: Vec<Vec<Rat>> = subset.iter().map(|&j| normals[j].clone()).collect();
        if let Some(y) = linalg::kernel_direction(&rows, dim) {
            let neg: Vec<Rat> = y.iter().map(|c| -c.clone()).collect();
            if feasible(&y) || feasible(&neg) {
                return true;
            }
        }
        if dim <= 1 {
            return false;
        }
        let k = subset.len();
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if subset[i] != i + d - k {
                subset[i] += 1;
                for t in i + 1..k {
                    subset[t] = subset[t - 1] + 1;
                }
                break;
            }
        }
    }
}

impl ConvexPolytope<Rat> {
    /// Assembles a body from known half-spaces and a known vertex list,
    /// skipping re-enumeration (used by facet charts, where the vertices
    /// come from the parent polytope).
    pub fn from_parts(
        dim: usize,
        halfspaces: Vec<AffineFunctional<Rat>>,
        mut vertices: Vec<Vec<Rat>>,
    ) -> Self {
        vertices.sort();
        vertices.dedup();
        Self::assemble(dim, halfspaces, vertices)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_point};

    pub(crate) fn aff(linear: &[i64], offset_num: i64, offset_den: i64) -> AffineFunctional<Rat> {
        AffineFunctional::new(
            linear.iter().map(|&c| rat(c, 1)).collect(),
            rat(offset_num, offset_den),
        )
    }

    pub(crate) fn unit_square() -> LabeledPolytope {
        LabeledPolytope::from_facets(
            2,
            vec![
                aff(&[1, 0], 0, 1),
                aff(&[-1, 0], 1, 1),
                aff(&[0, 1], 0, 1),
                aff(&[0, -1], 1, 1),
            ],
        )
        .unwrap()
    }

    pub(crate) fn std_simplex() -> LabeledPolytope {
        LabeledPolytope::from_facets(
            2,
            vec![aff(&[1, 0], 0, 1), aff(&[0, 1], 0, 1), aff(&[-1, -1], 1, 1)],
        )
        .unwrap()
    }

    pub(crate) fn segment() -> LabeledPolytope {
        LabeledPolytope::from_facets(1, vec![aff(&[1], 0, 1), aff(&[-1], 1, 1)]).unwrap()
    }

    pub(crate) fn hexagon() -> LabeledPolytope {
        LabeledPolytope::from_facets(
            2,
            vec![
                aff(&[1, 0], 0, 1),
                aff(&[0, 1], 0, 1),
                aff(&[-1, 0], 2, 1),
                aff(&[0, -1], 2, 1),
                aff(&[-1, -1], 3, 1),
                aff(&[1, 1], -1, 1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn simplex_vertices() {
        let p = std_simplex();
        let vs = p.vertices();
        assert_eq!(vs.len(), 3);
        assert!(vs.contains(&rat_point(&[(0, 1), (0, 1)])));
        assert!(vs.contains(&rat_point(&[(1, 1), (0, 1)])));
        assert!(vs.contains(&rat_point(&[(0, 1), (1, 1)])));
    }

    #[test]
    fn square_and_segment() {
        assert_eq!(unit_square().vertices().len(), 4);
        let s = segment();
        assert_eq!(s.vertices().len(), 2);
        assert_eq!(s.volume(), rat(1, 1));
    }

    #[test]
    fn construction_errors() {
        // unbounded: half-plane
        let e = LabeledPolytope::from_facets(2, vec![aff(&[1, 0], 0, 1), aff(&[0, 1], 0, 1)])
            .unwrap_err();
        assert!(matches!(e, PolytopeError::TooFewFacets { .. }));
        let e = LabeledPolytope::from_facets(
            2,
            vec![aff(&[1, 0], 0, 1), aff(&[0, 1], 0, 1), aff(&[1, 1], 0, 1)],
        )
        .unwrap_err();
        assert!(matches!(e, PolytopeError::Unbounded));
        // empty: x ≥ 0, x ≤ -1
        let e = LabeledPolytope::from_facets(
            1,
            vec![aff(&[1], 0, 1), aff(&[-1], -1, 1)],
        )
        .unwrap_err();
        assert!(matches!(e, PolytopeError::Empty));
        // lower-dimensional: x ≥ 0, x ≤ 0 (degenerate slab)
        let e = LabeledPolytope::from_facets(
            2,
            vec![
                aff(&[1, 0], 0, 1),
                aff(&[-1, 0], 0, 1),
                aff(&[0, 1], 0, 1),
                aff(&[0, -1], 1, 1),
            ],
        )
        .unwrap_err();
        assert!(matches!(e, PolytopeError::LowerDimensional));
        // redundant: far-away extra facet
        let e = LabeledPolytope::from_facets(
            2,
            vec![
                aff(&[1, 0], 0, 1),
                aff(&[0, 1], 0, 1),
                aff(&[-1, -1], 1, 1),
                aff(&[1, 1], 5, 1),
            ],
        )
        .unwrap_err();
        assert!(matches!(e, PolytopeError::RedundantFacet { facet: 3 }));
    }

    #[test]
    fn delzant_validation() {
        assert!(unit_square().validate_delzant().pass);
        assert!(std_simplex().validate_delzant().pass);
        assert!(hexagon().validate_delzant().pass);
        // triangle {x1, x2, 2−x1−2x2}: det −2 at vertex (0,1)
        let p = LabeledPolytope::from_facets(
            2,
            vec![aff(&[1, 0], 0, 1), aff(&[0, 1], 0, 1), aff(&[-1, -2], 2, 1)],
        )
        .unwrap();
        let report = p.validate_delzant();
        assert!(!report.pass);
        assert!(report.failures.iter().any(|f| matches!(
            f,
            DelzantFailure::NonUnimodularVertex { .. }
        )));
        // non-primitive normal (2x1 ≥ 0)
        let p = LabeledPolytope::from_facets(1, vec![aff(&[2], 0, 1), aff(&[-1], 1, 1)]).unwrap();
        let report = p.validate_delzant();
        assert!(!report.pass);
        assert!(report
            .failures
            .iter()
            .any(|f| matches!(f, DelzantFailure::NonPrimitiveNormal { facet: 0 })));
    }

    #[test]
    fn delzant_relabeling_invariance() {
        let facets = vec![
            aff(&[1, 0], 0, 1),
            aff(&[0, 1], 0, 1),
            aff(&[-1, -1], 1, 1),
        ];
        let mut rev = facets.clone();
        rev.reverse();
        let a = LabeledPolytope::from_facets(2, facets).unwrap().validate_delzant();
        let b = LabeledPolytope::from_facets(2, rev).unwrap().validate_delzant();
        assert_eq!(a.pass, b.pass);
    }

    #[test]
    fn barycenters() {
        assert_eq!(unit_square().barycenter(), rat_point(&[(1, 2), (1, 2)]));
        assert_eq!(std_simplex().barycenter(), rat_point(&[(1, 3), (1, 3)]));
        assert_eq!(hexagon().volume(), rat(3, 1));
    }

    #[test]
    fn cone_decomposition_volumes() {
        let p = unit_square();
        let cd = p.cone_decomposition(None).unwrap();
        assert_eq!(cd.cones.len(), 4);
        for j in 0..4 {
            assert_eq!(cd.cone_volume(j), rat(1, 4));
        }
        assert_eq!(cd.total_volume(), rat(1, 1));

        let s = std_simplex();
        let cd = s.cone_decomposition(None).unwrap();
        assert_eq!(cd.cones.len(), 3);
        for j in 0..3 {
            assert_eq!(cd.cone_volume(j), rat(1, 6));
        }

        let seg = segment();
        let cd = seg.cone_decomposition(Some(vec![rat(1, 2)])).unwrap();
        assert_eq!(cd.cones.len(), 2);
        assert_eq!(cd.cone_volume(0), rat(1, 2));
        assert_eq!(cd.cone_volume(1), rat(1, 2));

        let hex = hexagon();
        let cd = hex.cone_decomposition(None).unwrap();
        assert_eq!(cd.total_volume(), hex.volume());
        assert!(matches!(
            hex.cone_decomposition(Some(rat_point(&[(5, 1), (5, 1)]))),
            Err(PolytopeError::NotInterior)
        ));
    }

    #[test]
    fn facet_charts_unit_scale() {
        let p = std_simplex();
        for j in 0..3 {
            let ch = p.facet_chart(j).unwrap();
            assert_eq!(ch.scale, rat(1, 1));
            // all three facets have lattice length 1, including the hypotenuse
            assert_eq!(ch.chart_body.volume(), rat(1, 1));
        }
        let sq = unit_square();
        let ch = sq.facet_chart(0).unwrap();
        assert_eq!(ch.chart_body.volume(), rat(1, 1));
        // invalid index
        assert!(matches!(
            sq.facet_chart(9),
            Err(PolytopeError::InvalidFacet { .. })
        ));
    }

    #[test]
    fn clip_volume_additivity() {
        let p = std_simplex();
        let h = AffineFunctional::new(vec![rat(3, 1), rat(-2, 1)], rat(1, 7));
        let (a, b) = p.clip(&h);
        assert_eq!(a.volume() + b.volume(), p.volume());
        let h2 = aff(&[1, 0], -2, 1); // x1 - 2: entirely negative on simplex
        let (a, b) = p.clip(&h2);
        assert_eq!(a.volume(), rat(0, 1));
        assert_eq!(b.volume(), rat(1, 2));
    }

    #[test]
    fn vertex_facet_duality() {
        let p = hexagon();
        for v in p.vertices() {
            let active = p
                .facets()
                .iter()
                .filter(|f| f.eval(v).is_zero())
                .count();
            assert_eq!(active, 2);
            assert!(p.facets().iter().all(|f| f.eval(v) >= Rat::zero()));
        }
    }
}
