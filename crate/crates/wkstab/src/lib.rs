//! Weighted K-stability of labeled Delzant polytopes.
//!
//! The library decides and quantifies `(v, w)`-uniform K-stability of a
//! labeled Delzant polytope: exact polytope geometry and integration, the
//! toric weighted Donaldson–Futaki invariant, weighted extremal affine
//! functions, the cone-decomposition sufficient stability condition,
//! destabilizer searches over piecewise-linear convex test functions, and
//! the weight transformations induced by semisimple principal fibrations.
//!
//! The geometric kernel is generic over the scalar type (see [`scalar::Scalar`]);
//! the exact pipeline instantiates it with arbitrary-precision rationals and
//! the numeric pipeline with `f64`. Concrete aliases live at the crate root.

pub mod fibration;
pub mod futaki;
pub mod grid;
pub mod json;
pub mod linalg;
pub mod polytope;
pub mod quadrature;
pub mod random;
pub mod scalar;
pub mod stability;
pub mod weights;

pub use scalar::{parse_rat, rat, rat_to_string, Rat};

/// Exact rational point.
pub type RatPoint = Vec<Rat>;
/// Affine functional with exact rational data (facet labels, test directions).
pub type RatAffine = polytope::AffineFunctional<Rat>;
/// Affine functional with float data (numeric pipeline).
pub type F64Affine = polytope::AffineFunctional<f64>;
/// Exact rational simplex.
pub type RatSimplex = polytope::Simplex<Rat>;
/// Float simplex (quadrature substrate).
pub type F64Simplex = polytope::Simplex<f64>;
/// General rational convex polytope (clip pieces, chart bodies).
pub type RatPolytope = polytope::ConvexPolytope<Rat>;
