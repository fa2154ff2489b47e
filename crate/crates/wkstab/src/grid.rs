//! Deterministic sample grids: principal lattices of order `2^depth` on the
//! exact triangulation. The grid covers the closed polytope (vertices,
//! facets, interior), and its mesh size shrinks geometrically with depth,
//! which the Lipschitz stability certificate relies on.

use crate::polytope::{longest_edge, LabeledPolytope, Simplex};
use crate::scalar::Rat;
use num_traits::{FromPrimitive, Zero};

/// Sample set with the covering mesh radius.
#[derive(Debug, Clone)]
pub struct Grid {
    pub points: Vec<Vec<f64>>,
    /// Upper bound on the distance from any point of the sampled region to
    /// the nearest sample (longest simplex edge / lattice order).
    pub mesh: f64,
}

/// All barycentric points `k/order` (|k| = order) of one simplex.
pub fn simplex_lattice(s: &Simplex<f64>, order: u32) -> Vec<Vec<f64>> {
    let m = s.points.len();
    let dim = s.ambient_dim();
    let mut out = Vec::new();
    let mut k = vec![0u32; m];
    fill_compositions(&mut k, 0, order, &mut |k| {
        let mut p = vec![0.0; dim];
        for (vertex, &ki) in s.points.iter().zip(k.iter()) {
            let t = ki as f64 / order as f64;
            for d in 0..dim {
                p[d] += t * vertex[d];
            }
        }
        out.push(p);
    });
    out
}

fn fill_compositions(k: &mut Vec<u32>, idx: usize, remaining: u32, f: &mut impl FnMut(&[u32])) {
    if idx + 1 == k.len() {
        k[idx] = remaining;
        f(k);
        return;
    }
    for v in 0..=remaining {
        k[idx] = v;
        fill_compositions(k, idx + 1, remaining - v, f);
    }
}

/// Grid over a set of exact simplices at the given depth (order `2^depth`).
pub fn simplices_grid(simplices: &[Simplex<Rat>], depth: u32) -> Grid {
    let order = 1u32 << depth;
    let mut points = Vec::new();
    let mut mesh = 0.0f64;
    for s in simplices {
        let sf = s.approx();
        mesh = mesh.max(longest_edge(&sf) / order as f64);
        points.extend(simplex_lattice(&sf, order));
    }
    Grid { points, mesh }
}

/// Grid over the whole polytope.
pub fn polytope_grid(p: &LabeledPolytope, depth: u32) -> Grid {
    simplices_grid(&p.triangulate(), depth)
}

/// Exact rational lattice points of a rational simplex (used where grid
/// assertions must be exact).
pub fn simplex_lattice_exact(s: &Simplex<Rat>, order: u32) -> Vec<Vec<Rat>> {
    let m = s.points.len();
    let dim = s.ambient_dim();
    let ord = Rat::from_u32(order).unwrap();
    let mut out = Vec::new();
    let mut k = vec![0u32; m];
    fill_compositions(&mut k, 0, order, &mut |k| {
        let mut p = vec![Rat::zero(); dim];
        for (vertex, &ki) in s.points.iter().zip(k.iter()) {
            let t = Rat::from_u32(ki).unwrap() / ord.clone();
            for d in 0..dim {
                p[d] = p[d].clone() + t.clone() * vertex[d].clone();
            }
        }
        out.push(p);
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::AffineFunctional;
    use crate::scalar::rat;
    use num_traits::Zero;

    #[test]
    fn lattice_counts_and_midpoint() {
        let seg = Simplex::new(vec![vec![0.0], vec![1.0]]);
        let pts = simplex_lattice(&seg, 8);
        assert_eq!(pts.len(), 9);
        assert!(pts.iter().any(|p| p[0] == 0.5));
        let tri = Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]);
        // C(order+2, 2) points
        assert_eq!(simplex_lattice(&tri, 4).len(), 15);
    }

    #[test]
    fn polytope_grid_covers_vertices() {
        let p = LabeledPolytope::from_facets(
            1,
            vec![
                AffineFunctional::new(vec![rat(1, 1)], rat(0, 1)),
                AffineFunctional::new(vec![rat(-1, 1)], rat(1, 1)),
            ],
        )
        .unwrap();
        let g = polytope_grid(&p, 2);
        assert!(g.points.iter().any(|q| q[0] == 0.0));
        assert!(g.points.iter().any(|q| q[0] == 1.0));
        assert!((g.mesh - 0.25).abs() < 1e-15);
    }

    #[test]
    fn exact_lattice_is_rational() {
        let tri = Simplex::new(vec![
            vec![rat(0, 1), rat(0, 1)],
            vec![rat(1, 1), rat(0, 1)],
            vec![rat(0, 1), rat(1, 1)],
        ]);
        let pts = simplex_lattice_exact(&tri, 2);
        assert_eq!(pts.len(), 6);
        assert!(pts.contains(&vec![rat(1, 2), rat(1, 2)]));
        assert!(pts.iter().all(|p| p.iter().all(|c| c >= &Rat::zero())));
    }
}
