//! JSON wire formats.
//!
//! Rationals travel as `"p/q"` or decimal strings (integers also accepted
//! as JSON integers), never as floats. Polytope facets carry integer
//! normals; weights follow the expression grammar with kinds `poly`,
//! `affpow`, `expaff`, `sum`, `product`, `quotient`, `scalar`.

use crate::fibration::{BaseFactor, FibrationData};
use crate::futaki::{FutakiReport, PLConvexFunction};
use crate::polytope::{AffineFunctional, LabeledPolytope, PolytopeError};
use crate::scalar::{parse_rat, rat_to_string, Rat};
use crate::stability::{DestabilizerReport, StabilityReport, StabilityVerdict};
use crate::weights::{Exponent, MultiPoly, WeightExpr};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

#[derive(Debug, Clone, thiserror::Error)]
pub enum JsonError {
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

fn schema_err(msg: impl Into<String>) -> JsonError {
    JsonError::Schema(msg.into())
}

/// Exact rational carried as a JSON string (or integer). Floats are
/// rejected by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct RatStr(pub Rat);

impl Serialize for RatStr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rat_to_string(&self.0))
    }
}

impl<'de> Deserialize<'de> for RatStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        match &v {
            Value::String(s) => parse_rat(s)
                .map(RatStr)
                .map_err(|e| D::Error::custom(e.to_string())),
            Value::Number(n) if n.is_i64() || n.is_u64() => {
                let i = n.as_i64().ok_or_else(|| {
                    D::Error::custom("integer out of range for rational")
                })?;
                Ok(RatStr(Rat::from_integer(i.into())))
            }
            Value::Number(_) => Err(D::Error::custom(
                "rationals must be strings like \"p/q\", not floats",
            )),
            other => Err(D::Error::custom(format!(
                "expected rational string, got {other}"
            ))),
        }
    }
}

// ---------------------------------------------------------------------------
// polytope

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolytopeDto {
    pub dim: usize,
    pub facets: Vec<FacetDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FacetDto {
    pub normal: Vec<i64>,
    pub offset: RatStr,
}

impl PolytopeDto {
    pub fn to_polytope(&self) -> Result<LabeledPolytope, JsonError> {
        let facets = self
            .facets
            .iter()
            .enumerate()
            .map(|(j, f)| {
                if f.normal.len() != self.dim {
                    return Err(schema_err(format!(
                        "facet {j}: normal has {} entries, expected {}",
                        f.normal.len(),
                        self.dim
                    )));
                }
                Ok(AffineFunctional::new(
                    f.normal
                        .iter()
                        .map(|&c| Rat::from_integer(c.into()))
                        .collect(),
                    f.offset.0.clone(),
                ))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LabeledPolytope::from_facets(self.dim, facets)?)
    }

    pub fn parse(text: &str) -> Result<Self, JsonError> {
        serde_json::from_str(text).map_err(|e| schema_err(format!("polytope JSON: {e}")))
    }
}

// ---------------------------------------------------------------------------
// affine functionals and PL functions

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AffineDto {
    pub normal: Vec<RatStr>,
    pub offset: RatStr,
}

impl AffineDto {
    pub fn to_affine(&self, dim: usize) -> Result<AffineFunctional<Rat>, JsonError> {
        if self.normal.len() != dim {
            return Err(schema_err(format!(
                "affine normal has {} entries, expected {dim}",
                self.normal.len()
            )));
        }
        Ok(AffineFunctional::new(
            self.normal.iter().map(|c| c.0.clone()).collect(),
            self.offset.0.clone(),
        ))
    }

    pub fn from_affine(a: &AffineFunctional<Rat>) -> Self {
        Self {
            normal: a.linear.iter().cloned().map(RatStr).collect(),
            offset: RatStr(a.offset.clone()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlDto {
    pub pieces: Vec<AffineDto>,
}

impl PlDto {
    pub fn to_pl(&self, dim: usize) -> Result<PLConvexFunction, JsonError> {
        if self.pieces.is_empty() {
            return Err(schema_err("PL function needs at least one piece"));
        }
        let pieces = self
            .pieces
            .iter()
            .map(|p| p.to_affine(dim))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PLConvexFunction::new(pieces))
    }

    pub fn from_pl(f: &PLConvexFunction) -> Self {
        Self {
            pieces: f.pieces().iter().map(AffineDto::from_affine).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, JsonError> {
        serde_json::from_str(text).map_err(|e| schema_err(format!("PL function JSON: {e}")))
    }
}

// ---------------------------------------------------------------------------
// weights

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WeightDto {
    Poly {
        terms: Vec<TermDto>,
    },
    Affpow {
        normal: Vec<RatStr>,
        offset: RatStr,
        exponent: ExponentDto,
    },
    Expaff {
        normal: Vec<RatStr>,
        offset: RatStr,
    },
    Sum {
        args: Vec<WeightDto>,
    },
    Product {
        args: Vec<WeightDto>,
    },
    Quotient {
        args: Vec<WeightDto>,
    },
    Scalar {
        value: RatStr,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermDto {
    pub exp: Vec<u32>,
    pub coef: RatStr,
}

/// Exponent: exact rational string/integer, or a float (kept as a flagged
/// float exponent).
#[derive(Debug, Clone)]
pub enum ExponentDto {
    Exact(RatStr),
    Float(f64),
}

impl Serialize for ExponentDto {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExponentDto::Exact(r) => r.serialize(s),
            ExponentDto::Float(f) => s.serialize_f64(*f),
        }
    }
}

impl<'de> Deserialize<'de> for ExponentDto {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        match &v {
            Value::String(s) => parse_rat(s)
                .map(|r| ExponentDto::Exact(RatStr(r)))
                .map_err(|e| D::Error::custom(e.to_string())),
            Value::Number(n) if n.is_i64() => Ok(ExponentDto::Exact(RatStr(
                Rat::from_integer(n.as_i64().unwrap().into()),
            ))),
            Value::Number(n) => Ok(ExponentDto::Float(n.as_f64().ok_or_else(|| {
                D::Error::custom("exponent out of range")
            })?)),
            other => Err(D::Error::custom(format!("invalid exponent {other}"))),
        }
    }
}

impl WeightDto {
    pub fn to_expr(&self, dim: usize) -> Result<WeightExpr, JsonError> {
        match self {
            WeightDto::Poly { terms } => {
                let mut p = MultiPoly::zero(dim);
                for t in terms {
                    if t.exp.len() != dim {
                        return Err(schema_err(format!(
                            "poly term exponent has {} entries, expected {dim}",
                            t.exp.len()
                        )));
                    }
                    p.add_term(t.exp.clone(), t.coef.0.clone());
                }
                Ok(WeightExpr::poly(p))
            }
            WeightDto::Affpow {
                normal,
                offset,
                exponent,
            } => {
                let aff = AffineDto {
                    normal: normal.clone(),
                    offset: offset.clone(),
                }
                .to_affine(dim)?;
                let exp = match exponent {
                    ExponentDto::Exact(r) => Exponent::Rational(r.0.clone()),
                    ExponentDto::Float(f) => Exponent::Float(*f),
                };
                Ok(WeightExpr::aff_pow(aff, exp))
            }
            WeightDto::Expaff { normal, offset } => {
                let aff = AffineDto {
                    normal: normal.clone(),
                    offset: offset.clone(),
                }
                .to_affine(dim)?;
                Ok(WeightExpr::exp_aff(aff))
            }
            WeightDto::Sum { args } => Ok(WeightExpr::sum(
                args.iter()
                    .map(|a| a.to_expr(dim))
                    .collect::<Result<_, _>>()?,
            )),
            WeightDto::Product { args } => Ok(WeightExpr::product(
                args.iter()
                    .map(|a| a.to_expr(dim))
                    .collect::<Result<_, _>>()?,
            )),
            WeightDto::Quotient { args } => {
                if args.len() != 2 {
                    return Err(schema_err("quotient takes exactly two args"));
                }
                Ok(WeightExpr::quotient(
                    args[0].to_expr(dim)?,
                    args[1].to_expr(dim)?,
                ))
            }
            WeightDto::Scalar { value } => Ok(WeightExpr::scalar(value.0.clone())),
        }
    }

    pub fn from_expr(e: &WeightExpr) -> Self {
        match e {
            WeightExpr::Scalar(c) => WeightDto::Scalar {
                value: RatStr(c.clone()),
            },
            WeightExpr::Poly(p) => WeightDto::Poly {
                terms: p
                    .terms()
                    .map(|(exp, coef)| TermDto {
                        exp: exp.clone(),
                        coef: RatStr(coef.clone()),
                    })
                    .collect(),
            },
            WeightExpr::AffPow { base, exponent } => WeightDto::Affpow {
                normal: base.linear.iter().cloned().map(RatStr).collect(),
                offset: RatStr(base.offset.clone()),
                exponent: match exponent {
                    Exponent::Rational(r) => ExponentDto::Exact(RatStr(r.clone())),
                    Exponent::Float(f) => ExponentDto::Float(*f),
                },
            },
            WeightExpr::ExpAff(a) => WeightDto::Expaff {
                normal: a.linear.iter().cloned().map(RatStr).collect(),
                offset: RatStr(a.offset.clone()),
            },
            WeightExpr::Sum(args) => WeightDto::Sum {
                args: args.iter().map(WeightDto::from_expr).collect(),
            },
            WeightExpr::Product(args) => WeightDto::Product {
                args: args.iter().map(WeightDto::from_expr).collect(),
            },
            WeightExpr::Quotient(a, b) => WeightDto::Quotient {
                args: vec![WeightDto::from_expr(a), WeightDto::from_expr(b)],
            },
        }
    }

    pub fn parse(text: &str) -> Result<Self, JsonError> {
        serde_json::from_str(text).map_err(|e| schema_err(format!("weight JSON: {e}")))
    }
}

// ---------------------------------------------------------------------------
// fibration

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FibrationDto {
    pub factors: Vec<FactorDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorDto {
    pub p: Vec<i64>,
    pub c: RatStr,
    pub m: u32,
    pub scal: f64,
}

impl FibrationDto {
    pub fn to_data(&self, dim: usize) -> Result<FibrationData, JsonError> {
        let factors = self
            .factors
            .iter()
            .enumerate()
            .map(|(a, f)| {
                if f.p.len() != dim {
                    return Err(schema_err(format!(
                        "factor {a}: p has {} entries, expected {dim}",
                        f.p.len()
                    )));
                }
                Ok(BaseFactor {
                    p: f.p.clone(),
                    c: f.c.0.clone(),
                    m: f.m,
                    scal: f.scal,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FibrationData { factors })
    }

    pub fn parse(text: &str) -> Result<Self, JsonError> {
        serde_json::from_str(text).map_err(|e| schema_err(format!("fibration JSON: {e}")))
    }
}

// ---------------------------------------------------------------------------
// reports

pub fn futaki_report_json(r: &FutakiReport) -> Value {
    json!({
        "value": r.value,
        "error_bound": r.error_bound,
        "boundary_term": r.boundary_term,
        "interior_term": r.interior_term,
        "exact": r.exact.as_ref().map(rat_to_string),
    })
}

pub fn stability_report_json(r: &StabilityReport) -> Value {
    let verdict = match &r.verdict {
        StabilityVerdict::SufficientConditionHolds { margin } => json!({
            "kind": "holds",
            "margin": margin,
        }),
        StabilityVerdict::Inconclusive {
            min_value,
            argmin,
            cone_index,
        } => json!({
            "kind": "inconclusive",
            "min_value": min_value,
            "argmin": argmin,
            "cone_index": cone_index,
        }),
    };
    json!({
        "verdict": verdict,
        "margin": r.margin,
        "certified": r.certified,
        "grid_depth": r.grid_depth,
        "base_point": r.base_point,
        "per_cone": r.per_cone.iter().map(|c| json!({
            "facet": c.facet,
            "min": c.min,
            "argmin": c.argmin,
            "gradient_bound": c.gradient_bound,
            "mesh": c.mesh,
            "certified_margin": c.certified_margin(),
        })).collect::<Vec<_>>(),
    })
}

pub fn destabilizer_report_json(r: &DestabilizerReport) -> Value {
    json!({
        "family_size": r.family_size,
        "all_positive": r.all_positive,
        "base_point": r.base_point,
        "best": r.best.as_ref().map(|b| json!({
            "f": serde_json::to_value(PlDto::from_pl(&b.f)).unwrap(),
            "ratio": b.ratio,
            "ratio_exact": b.ratio_exact.as_ref().map(rat_to_string),
        })),
    })
}

pub fn weight_json(e: &WeightExpr) -> Value {
    serde_json::to_value(WeightDto::from_expr(e)).expect("weight DTO serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn polytope_round_trip() {
        let text = r#"{
            "dim": 2,
            "facets": [
                {"normal": [1, 0], "offset": "0"},
                {"normal": [-1, 0], "offset": "1"},
                {"normal": [0, 1], "offset": "0"},
                {"normal": [0, -1], "offset": "1"}
            ]
        }"#;
        let p = PolytopeDto::parse(text).unwrap().to_polytope().unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert!(p.validate_delzant().pass);
    }

    #[test]
    fn rationals_reject_floats() {
        let text = r#"{"dim":1,"facets":[{"normal":[1],"offset":0.5}]}"#;
        assert!(PolytopeDto::parse(text).is_err());
        let ok = r#"{"dim":1,"facets":[{"normal":[1],"offset":"1/2"},{"normal":[-1],"offset":"1"}]}"#;
        let p = PolytopeDto::parse(ok).unwrap().to_polytope().unwrap();
        assert_eq!(p.vertices()[0], vec![rat(-1, 2)]);
    }

    #[test]
    fn weight_grammar_round_trip() {
        let text = r#"{
            "kind": "sum",
            "args": [
                {"kind": "poly", "terms": [{"exp": [2, 0], "coef": "1"}]},
                {"kind": "product", "args": [
                    {"kind": "scalar", "value": "3/2"},
                    {"kind": "affpow", "normal": ["1", "0"], "offset": "2", "exponent": "-1"}
                ]},
                {"kind": "expaff", "normal": ["0", "1"], "offset": "0"}
            ]
        }"#;
        let e = WeightDto::parse(text).unwrap().to_expr(2).unwrap();
        let x = [0.5, 0.25];
        let expected = 0.25 + 1.5 / 2.5 + (0.25f64).exp();
        assert!((e.eval_f64(&x).unwrap() - expected).abs() < 1e-14);
        // round trip through from_expr
        let dto = WeightDto::from_expr(&e);
        let e2 = dto.to_expr(2).unwrap();
        assert!((e2.eval_f64(&x).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn quotient_arity_checked() {
        let text = r#"{"kind":"quotient","args":[{"kind":"scalar","value":"1"}]}"#;
        assert!(WeightDto::parse(text).unwrap().to_expr(1).is_err());
    }

    #[test]
    fn fibration_dto() {
        let text = r#"{"factors":[{"p":[1,0],"c":"2","m":1,"scal":4.0}]}"#;
        let data = FibrationDto::parse(text).unwrap().to_data(2).unwrap();
        assert_eq!(data.factors.len(), 1);
        assert_eq!(data.factors[0].c, rat(2, 1));
        // dimension mismatch
        assert!(FibrationDto::parse(text).unwrap().to_data(3).is_err());
    }

    #[test]
    fn pl_dto() {
        let text = r#"{"pieces":[{"normal":["0"],"offset":"0"},{"normal":["1"],"offset":"-1/2"}]}"#;
        let f = PlDto::parse(text).unwrap().to_pl(1).unwrap();
        assert_eq!(f.pieces().len(), 2);
        assert_eq!(f.eval(&[rat(1, 1)]), rat(1, 2));
    }
}
