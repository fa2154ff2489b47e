//! Scalar abstraction for the geometric kernel.
//!
//! All of the convex-geometry and polynomial machinery is written once,
//! generic over a field-like [`Scalar`]. The exact pipeline instantiates it
//! with [`Rat`] (arbitrary-precision rationals) and the numeric pipeline with
//! `f64`; see the type aliases at the crate root.

use num_bigint::{BigInt, Sign};
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};
use std::fmt::{Debug, Display};

/// Arbitrary-precision rational, the scalar of the exact pipeline.
pub type Rat = num_rational::BigRational;

/// Field scalar: enough structure for linear solves, determinants,
/// polynomial evaluation and simplex subdivision.
pub trait Scalar:
    Num
    + Signed
    + PartialOrd
    + Clone
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossy view as `f64` (exact for `f64` itself).
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Ratio of two small integers, exact where the scalar permits.
    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).unwrap() / Self::from_i64(den).unwrap()
    }
}

impl<T> Scalar for T where
    T: Num
        + Signed
        + PartialOrd
        + Clone
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Shorthand for an exact rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Exact conversion of a finite float into a rational.
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

/// Canonical string form: `"p/q"`, or plain `"p"` for integers.
pub fn rat_to_string(x: &Rat) -> String {
    if x.denom() == &BigInt::from(1) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Error from [`parse_rat`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {input:?}")]
pub struct ParseRatError {
    pub input: String,
}

/// Parses `"p/q"`, integer (`"-3"`) and decimal (`"0.25"`, `"-1.5e-2"`) forms.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    let err = || ParseRatError {
        input: s.to_string(),
    };
    let s = s.trim();
    if s.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p.trim().parse().map_err(|_| err())?;
        let den: BigInt = q.trim().parse().map_err(|_| err())?;
        if den.sign() == Sign::NoSign {
            return Err(err());
        }
        return Ok(Rat::new(num, den));
    }
    // decimal, optionally with exponent: [-]ddd[.ddd][e[-]dd]
    let (mantissa, exp10) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    let negative = int_part.starts_with('-');
    let int_digits = int_part.trim_start_matches(['-', '+']);
    if !int_digits.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }
    let digits = format!("{}{}", int_digits, frac_part);
    let digits = if digits.is_empty() { "0".into() } else { digits };
    let num: BigInt = digits.parse().map_err(|_| err())?;
    let num = if negative { -num } else { num };
    let shift = exp10 - frac_part.len() as i32;
    let pow10 = BigInt::from(10).pow(shift.unsigned_abs());
    Ok(if shift >= 0 {
        Rat::from_integer(num * pow10)
    } else {
        Rat::new(num, pow10)
    })
}

/// Componentwise `f64` view of a rational point.
pub fn point_to_f64(x: &[Rat]) -> Vec<f64> {
    x.iter().map(|c| c.approx()).collect()
}

/// Exact rational point from small integer pairs, for tests and builders.
pub fn rat_point(coords: &[(i64, i64)]) -> Vec<Rat> {
    coords.iter().map(|&(p, q)| rat(p, q)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rat("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rat("-6/8").unwrap(), rat(-3, 4));
        assert_eq!(parse_rat("5").unwrap(), rat(5, 1));
        assert_eq!(parse_rat("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rat("1.5e-2").unwrap(), rat(3, 200));
        assert_eq!(parse_rat("2e3").unwrap(), rat(2000, 1));
        assert!(parse_rat("").is_err());
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
        assert!(parse_rat("1.2.3").is_err());
    }

    #[test]
    fn string_round_trip() {
        for s in ["3/4", "-7", "0", "22/7"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(rat_to_string(&r), s);
        }
    }

    #[test]
    fn float_exactness() {
        assert_eq!(rat_from_f64(0.5).unwrap(), rat(1, 2));
        assert_eq!(rat_from_f64(0.1).unwrap().approx(), 0.1);
    }
}
