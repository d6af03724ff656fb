//! Scalar abstractions shared by the exact and the floating-point modules.
//!
//! The finite modules (measures, cocycles, characters, elimination) only need
//! field arithmetic with exact equality, so they are written against
//! [`Field`]. The continuous affine-group model needs transcendental
//! functions and is written against [`Real`].

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, Signed, Zero};

/// A field with exact equality tests: `BigRational` in practice, `f64`
/// when approximate answers are acceptable.
pub trait Field: Clone + Debug + PartialOrd + Num + Signed + Send + Sync {}

impl<T> Field for T where T: Clone + Debug + PartialOrd + Num + Signed + Send + Sync {}

/// Floating point: f32 or f64.
pub trait Real: Float + FromPrimitive + Debug + Send + Sync {
    /// Lossy conversion of an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in target float")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Formats a rational as `p/q`, always with an explicit denominator.
pub fn rational_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Builds a field element from a small integer.
pub fn from_int<S: Field>(k: i64) -> S {
    let mut acc = S::zero();
    let step = if k >= 0 { S::one() } else { -S::one() };
    for _ in 0..k.unsigned_abs() {
        acc = acc + step.clone();
    }
    acc
}

pub(crate) fn sum<'a, S: Field + 'a>(xs: impl IntoIterator<Item = &'a S>) -> S {
    xs.into_iter().fold(S::zero(), |acc, x| acc + x.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings() {
        let r = BigRational::new(BigInt::from(6), BigInt::from(4));
        assert_eq!(rational_to_string(&r), "3/2");
        assert_eq!(parse_rational("3/2"), Some(r));
        assert_eq!(rational_to_string(&parse_rational("-7").unwrap()), "-7/1");
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }

    #[test]
    fn small_integers() {
        assert_eq!(from_int::<f64>(-3), -3.0);
        assert_eq!(
            from_int::<BigRational>(5),
            BigRational::from_integer(5.into())
        );
    }
}
