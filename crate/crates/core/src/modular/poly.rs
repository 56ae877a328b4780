//! Univariate polynomials in t over ℚ.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{qi, Q};

/// Coefficients in ascending degree, with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<Q>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        RationalPoly::new(coeffs.iter().map(|&c| qi(c)).collect())
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        RationalPoly::new(coeffs.iter().cloned().map(Q::from_integer).collect())
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        RationalPoly {
            coeffs: vec![qi(1)],
        }
    }

    /// t − r.
    pub fn linear_root(r: Q) -> Self {
        RationalPoly::new(vec![-r, qi(1)])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn scale(&self, x: &Q) -> Self {
        RationalPoly::new(self.coeffs.iter().map(|c| c * x).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let get = |v: &[Q], i: usize| v.get(i).cloned().unwrap_or_else(Q::zero);
        RationalPoly::new(
            (0..n)
                .map(|i| get(&self.coeffs, i) + get(&o.coeffs, i))
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&qi(-1)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return RationalPoly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPoly::new(out)
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        RationalPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * qi(i as i64))
                .collect(),
        )
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d
            .degree()
            .ok_or_else(|| Error::domain("polynomial division by zero"))?;
        let lead = d.leading();
        let mut r = self.coeffs.clone();
        let mut quot = vec![Q::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = r.last().unwrap() / &lead;
            for (j, c) in d.coeffs.iter().enumerate() {
                r[k + j] -= &f * c;
            }
            quot[k] = f;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Ok((RationalPoly::new(quot), RationalPoly::new(r)))
    }

    /// Does `self` divide `other` exactly?
    pub fn divides(&self, other: &Self) -> bool {
        !self.is_zero()
            && other
                .div_rem(self)
                .map(|(_, r)| r.is_zero())
                .unwrap_or(false)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(Q::one() / self.leading()))
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("b is non-zero");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// The monic squarefree part p / gcd(p, p').
    pub fn radical(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).expect("gcd is non-zero").0.monic()
    }

    /// The integer multiple with content 1 and positive leading coefficient.
    pub fn primitive(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return vec![];
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Q::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().unwrap().is_negative() {
            content = -content;
        }
        ints.into_iter().map(|c| c / &content).collect()
    }

    /// Parse a product of factors such as "(t-254)(16t+31)" or a single
    /// polynomial "t^2-68t+124" in the variable t.
    pub fn parse(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::domain("empty polynomial"));
        }
        let mut factors = Vec::new();
        if s.starts_with('(') {
            let mut rest = s.as_str();
            while !rest.is_empty() {
                let inner = rest
                    .strip_prefix('(')
                    .and_then(|r| r.split_once(')'))
                    .ok_or_else(|| Error::domain(format!("malformed polynomial product {s:?}")))?;
                factors.push(parse_sum(inner.0)?);
                rest = inner.1;
            }
        } else {
            factors.push(parse_sum(&s)?);
        }
        Ok(factors
            .iter()
            .fold(RationalPoly::one(), |acc, f| acc.mul(f)))
    }
}

fn parse_sum(s: &str) -> Result<RationalPoly> {
    let bad = || Error::domain(format!("cannot parse polynomial {s:?}"));
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    let mut out = RationalPoly::zero();
    for term in terms {
        let (sign, body) = match term.as_bytes().first() {
            Some(b'-') => (-1, &term[1..]),
            Some(b'+') => (1, &term[1..]),
            _ => (1, term),
        };
        if body.is_empty() {
            return Err(bad());
        }
        let (coef, power) = match body.find('t') {
            None => (body, 0usize),
            Some(pos) => {
                let pow = match &body[pos + 1..] {
                    "" => 1,
                    p => p
                        .strip_prefix('^')
                        .and_then(|p| p.parse().ok())
                        .ok_or_else(bad)?,
                };
                (&body[..pos], pow)
            }
        };
        let c: Q = if coef.is_empty() {
            qi(1)
        } else {
            crate::rational::parse(coef).ok_or_else(bad)?
        };
        let mut v = vec![Q::zero(); power + 1];
        v[power] = c * qi(sign);
        out = out.add(&RationalPoly::new(v));
    }
    Ok(out)
}

/// Render integer coefficients (ascending) as "t^3+3t^2+3459t+6913".
pub fn format_integer_poly(coeffs: &[BigInt]) -> String {
    let q: Vec<Q> = coeffs.iter().cloned().map(Q::from_integer).collect();
    RationalPoly::new(q).to_string()
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if neg {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let a = c.abs();
            let mag = if a.is_integer() {
                a.numer().to_string()
            } else {
                format!("({}/{})", a.numer(), a.denom())
            };
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "t")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
