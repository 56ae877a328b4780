//! Helpers around exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// "num/den", or just "num" for integers.
pub fn to_string(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

/// The value as a non-negative machine integer, if it is one.
pub fn to_u64(x: &Q) -> Option<u64> {
    if x.is_integer() && !x.is_negative() {
        x.numer().to_u64()
    } else {
        None
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

pub fn is_one(x: &Q) -> bool {
    x.is_one()
}

/// Serde helper: a rational as its "num/den" string.
pub fn serialize<S: serde::Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&to_string(x))
}

pub fn serialize_pair<S: serde::Serializer>(x: &Option<(Q, Q)>, s: S) -> Result<S::Ok, S::Error> {
    use serde::Serialize;
    x.as_ref()
        .map(|(a, b)| [to_string(a), to_string(b)])
        .serialize(s)
}
