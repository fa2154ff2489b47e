//! Seeded generators for randomized test matrices: Delzant polytopes built
//! from boxes and simplices by unimodular transforms, rational translations
//! and corner blow-ups (all Delzant-preserving), plus random polynomial
//! weights. Deterministic given the RNG state.

use crate::polytope::{AffineFunctional, LabeledPolytope};
use crate::scalar::{rat, Rat};
use crate::weights::MultiPoly;
use num_traits::Zero;
use rand::Rng;

/// Random `GL(n, ℤ)` pair `(U, U^{-1})` as a product of elementary shears
/// and swaps with small entries.
pub fn random_unimodular(n: usize, steps: usize, rng: &mut impl Rng) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let mut u = identity(n);
    let mut u_inv = identity(n);
    for _ in 0..steps {
        match rng.gen_range(0..3) {
            0 => {
                // shear row_i += s * row_j  (inverse: row_i -= s * row_j)
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n);
                if n > 1 {
                    while j == i {
                        j = rng.gen_range(0..n);
                    }
                    let s: i64 = if rng.gen() { 1 } else { -1 };
                    for k in 0..n {
                        u[i][k] += s * u[j][k];
                    }
                    for k in 0..n {
                        u_inv[k][j] -= s * u_inv[k][i];
                    }
                }
            }
            1 => {
                let i = rng.gen_range(0..n);
                let j = rng.gen_range(0..n);
                u.swap(i, j);
                for row in u_inv.iter_mut() {
                    row.swap(i, j);
                }
            }
            _ => {
                let i = rng.gen_range(0..n);
                for k in 0..n {
                    u[i][k] = -u[i][k];
                }
                for row in u_inv.iter_mut() {
                    row[i] = -row[i];
                }
            }
        }
    }
    (u, u_inv)
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

/// A random labeled Delzant polytope in dimension `n ∈ 1..=3`: box or
/// simplex base with random integer sizes, a random unimodular change of
/// lattice coordinates, a rational translation, and up to two corner
/// blow-ups. The result always passes `validate_delzant`.
pub fn random_delzant(n: usize, rng: &mut impl Rng) -> LabeledPolytope {
    assert!((1..=4).contains(&n));
    let mut facets: Vec<AffineFunctional<Rat>> = Vec::new();
    if rng.gen() || n == 1 {
        // box with integer side lengths
        for i in 0..n {
            let side = rng.gen_range(1..=3i64);
            facets.push(coordinate_label(n, i, 0));
            facets.push(neg_coordinate_label(n, i, side));
        }
    } else {
        // scaled standard simplex
        let scale = rng.gen_range(1..=3i64);
        for i in 0..n {
            facets.push(coordinate_label(n, i, 0));
        }
        facets.push(AffineFunctional::new(
            vec![rat(-1, 1); n],
            rat(scale, 1),
        ));
    }
    // unimodular transform + rational translation
    let (_, u_inv) = random_unimodular(n, rng.gen_range(0..4), rng);
    let t: Vec<Rat> = (0..n)
        .map(|_| rat(rng.gen_range(-4..=4), rng.gen_range(1..=3)))
        .collect();
    let facets: Vec<AffineFunctional<Rat>> = facets
        .iter()
        .map(|f| transform_label(f, &u_inv, &t))
        .collect();
    let mut polytope = LabeledPolytope::from_facets(n, facets).expect("base shape is valid");
    debug_assert!(polytope.validate_delzant().pass);
    // corner blow-ups
    for _ in 0..rng.gen_range(0..=2u32) {
        if let Some(chopped) = blow_up_corner(&polytope, rng) {
            polytope = chopped;
        }
    }
    debug_assert!(polytope.validate_delzant().pass);
    polytope
}

fn coordinate_label(n: usize, i: usize, offset: i64) -> AffineFunctional<Rat> {
    let mut lin = vec![Rat::zero(); n];
    lin[i] = rat(1, 1);
    AffineFunctional::new(lin, rat(offset, 1))
}

fn neg_coordinate_label(n: usize, i: usize, offset: i64) -> AffineFunctional<Rat> {
    let mut lin = vec![Rat::zero(); n];
    lin[i] = rat(-1, 1);
    AffineFunctional::new(lin, rat(offset, 1))
}

/// Label pullback through `x ↦ U x + t`: the new label is
/// `⟨(U^{-1})ᵀ u, ·⟩ + c − ⟨(U^{-1})ᵀ u, t⟩`.
fn transform_label(
    f: &AffineFunctional<Rat>,
    u_inv: &[Vec<i64>],
    t: &[Rat],
) -> AffineFunctional<Rat> {
    let n = f.dim();
    let lin: Vec<Rat> = (0..n)
        .map(|k| {
            (0..n).fold(Rat::zero(), |acc, r| {
                acc + Rat::from_integer(u_inv[r][k].into()) * f.linear[r].clone()
            })
        })
        .collect();
    let shift = lin
        .iter()
        .zip(t)
        .fold(Rat::zero(), |acc, (l, ti)| acc + l.clone() * ti.clone());
    AffineFunctional::new(lin, f.offset.clone() - shift)
}

/// Toric blow-up at a random vertex: adds the facet with normal the sum of
/// the vertex's normals, cutting strictly inside the corner.
fn blow_up_corner(p: &LabeledPolytope, rng: &mut impl Rng) -> Option<LabeledPolytope> {
    let n = p.dim();
    if n < 2 {
        return None;
    }
    let vi = rng.gen_range(0..p.vertices().len());
    let vertex = &p.vertices()[vi];
    let active: Vec<usize> = (0..p.facets().len())
        .filter(|&j| p.facets()[j].eval(vertex).is_zero())
        .collect();
    if active.len() != n {
        return None;
    }
    // L_new = Σ_{j active} L_j − ε with 0 < ε < min over other vertices
    let sum_label = active.iter().fold(
        AffineFunctional::new(vec![Rat::zero(); n], Rat::zero()),
        |acc, &j| {
            let f = &p.facets()[j];
            AffineFunctional::new(
                acc.linear
                    .iter()
                    .zip(&f.linear)
                    .map(|(a, b)| a.clone() + b.clone())
                    .collect(),
                acc.offset + f.offset.clone(),
            )
        },
    );
    let min_positive = p
        .vertices()
        .iter()
        .map(|w| sum_label.eval(w))
        .filter(|v| *v > Rat::zero())
        .min()?;
    let frac = rat(rng.gen_range(1..=3), 4);
    let eps = min_positive * frac;
    let mut facets = p.facets().to_vec();
    facets.push(AffineFunctional::new(
        sum_label.linear,
        sum_label.offset - eps,
    ));
    let chopped = LabeledPolytope::from_facets(n, facets).ok()?;
    chopped.validate_delzant().pass.then_some(chopped)
}

/// Random polynomial with small rational coefficients, total degree ≤
/// `max_degree`.
pub fn random_polynomial(n: usize, max_degree: u32, rng: &mut impl Rng) -> MultiPoly<Rat> {
    let mut p = MultiPoly::zero(n);
    let terms = rng.gen_range(1..=5);
    for _ in 0..terms {
        let mut exp = vec![0u32; n];
        let mut remaining = max_degree;
        for e in exp.iter_mut() {
            *e = rng.gen_range(0..=remaining);
            remaining -= *e;
        }
        let coef = rat(rng.gen_range(-6..=6), rng.gen_range(1..=4));
        p.add_term(exp, coef);
    }
    if p.is_zero() {
        p.add_term(vec![0; n], rat(1, 1));
    }
    p
}

/// Random polynomial that is certifiably positive on all of ℝⁿ:
/// a sum of squares plus a positive constant.
pub fn random_positive_polynomial(n: usize, rng: &mut impl Rng) -> MultiPoly<Rat> {
    let lin: Vec<Rat> = (0..n)
        .map(|_| rat(rng.gen_range(-2..=2), rng.gen_range(1..=2)))
        .collect();
    let aff = MultiPoly::from_affine(&AffineFunctional::new(lin, rat(rng.gen_range(-2..=2), 1)));
    aff.mul(&aff)
        .add(&MultiPoly::constant(n, rat(rng.gen_range(1..=4), 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unimodular_pairs_are_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=4 {
            for _ in 0..20 {
                let (u, v) = random_unimodular(n, 6, &mut rng);
                for i in 0..n {
                    for j in 0..n {
                        let s: i64 = (0..n).map(|k| u[i][k] * v[k][j]).sum();
                        assert_eq!(s, i64::from(i == j));
                    }
                }
            }
        }
    }

    #[test]
    fn random_polytopes_are_delzant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=3 {
            for _ in 0..15 {
                let p = random_delzant(n, &mut rng);
                assert!(p.validate_delzant().pass);
                assert!(p.volume() > Rat::zero());
                // clip additivity spot check on random polytopes
                let h = AffineFunctional::new(
                    (0..n).map(|_| rat(rng.gen_range(-2..=2), 1)).collect(),
                    rat(rng.gen_range(-2..=2), rng.gen_range(1..=3)),
                );
                if !h.is_linear_zero() {
                    let (a, b) = p.clip(&h);
                    assert_eq!(a.volume() + b.volume(), p.volume());
                }
            }
        }
    }

    #[test]
    fn deterministic_generation() {
        let a = random_delzant(2, &mut ChaCha8Rng::seed_from_u64(9));
        let b = random_delzant(2, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a.vertices(), b.vertices());
    }

    #[test]
    fn positive_polynomials_are_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let p = random_positive_polynomial(2, &mut rng);
            for x in [[0.0, 0.0], [1.0, -1.0], [3.5, 2.25]] {
                assert!(p.approx().eval_f64(&x) > 0.0);
            }
        }
    }
}
