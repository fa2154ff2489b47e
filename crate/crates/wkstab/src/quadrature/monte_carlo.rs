//! Seeded Monte Carlo estimate of `∫_P e dx`, the independent oracle the
//! exact and adaptive paths are tested against. Uniform sampling over the
//! exact triangulation (simplex chosen by volume, point by normalized
//! exponential spacings), deterministic for a fixed seed.

use super::QuadratureError;
use crate::polytope::LabeledPolytope;
use crate::weights::WeightExpr;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Unbiased estimate with its standard error.
#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
}

pub fn monte_carlo(
    p: &LabeledPolytope,
    e: &WeightExpr,
    samples: u64,
    seed: u64,
) -> Result<McEstimate, QuadratureError> {
    assert!(samples > 0, "need at least one sample");
    let simplices: Vec<_> = p.triangulate().iter().map(|s| s.approx()).collect();
    let vols: Vec<f64> = simplices
        .iter()
        .map(super::adaptive::simplex_volume_f64)
        .collect();
    let total_vol: f64 = vols.iter().sum();
    let mut cumulative = Vec::with_capacity(vols.len());
    let mut acc = 0.0;
    for v in &vols {
        acc += v;
        cumulative.push(acc);
    }
    let compiled = e.compile();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = p.dim();
    let mut sum = 0.0f64;
    let mut sum_sq = 0.0f64;
    let mut bary = vec![0.0f64; n + 1];
    let mut x = vec![0.0f64; n];
    for _ in 0..samples {
        let pick = rng.gen::<f64>() * total_vol;
        let idx = cumulative.partition_point(|&c| c < pick).min(simplices.len() - 1);
        let s = &simplices[idx];
        let mut t = 0.0;
        for b in bary.iter_mut() {
            let u: f64 = rng.gen::<f64>();
            *b = -(u.max(f64::MIN_POSITIVE)).ln();
            t += *b;
        }
        for b in bary.iter_mut() {
            *b /= t;
        }
        for d in 0..n {
            x[d] = 0.0;
        }
        for (vertex, &b) in s.points.iter().zip(bary.iter()) {
            for d in 0..n {
                x[d] += b * vertex[d];
            }
        }
        let val = compiled.eval(&x)?;
        sum += val;
        sum_sq += val * val;
    }
    let nf = samples as f64;
    let mean_f = sum / nf;
    let var = ((sum_sq / nf) - mean_f * mean_f).max(0.0);
    let sample_var = if samples > 1 { var * nf / (nf - 1.0) } else { 0.0 };
    Ok(McEstimate {
        mean: total_vol * mean_f,
        stderr: total_vol * (sample_var / nf).sqrt(),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::AffineFunctional;
    use crate::scalar::{rat, Rat};
    use crate::weights::MultiPoly;

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

    #[test]
    fn constant_integrand_is_exact_volume() {
        let tri = std_simplex();
        let est = monte_carlo(&tri, &WeightExpr::one(), 100, 7).unwrap();
        assert!((est.mean - 0.5).abs() < 1e-15);
        assert!(est.stderr < 1e-15);
    }

    #[test]
    fn linear_integrand_brackets_exact_value() {
        let tri = std_simplex();
        let e = WeightExpr::poly(MultiPoly::coordinate(2, 0));
        let est = monte_carlo(&tri, &e, 200_000, 42).unwrap();
        let exact = 1.0 / 6.0;
        assert!(
            (est.mean - exact).abs() <= 4.0 * est.stderr,
            "mean {} stderr {}",
            est.mean,
            est.stderr
        );
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let tri = std_simplex();
        let e = WeightExpr::poly(MultiPoly::coordinate(2, 1));
        let a = monte_carlo(&tri, &e, 5000, 3).unwrap();
        let b = monte_carlo(&tri, &e, 5000, 3).unwrap();
        assert_eq!(a.mean, b.mean);
        assert_eq!(a.stderr, b.stderr);
        let c = monte_carlo(&tri, &e, 5000, 4).unwrap();
        assert_ne!(a.mean, c.mean);
    }
}
