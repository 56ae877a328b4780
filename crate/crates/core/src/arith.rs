//! Elementary number theory on machine integers: divisors, multiplicative
//! functions, the Kronecker symbol at a prime and the conductor split of a
//! discriminant.

use std::fmt;

use num_integer::{Integer, Roots};
use serde::Serialize;

use crate::error::{Error, Result};

fn positive(n: i64, what: &str) -> Result<()> {
    if n <= 0 {
        return Err(Error::domain(format!(
            "{what}: expected a positive integer, got {n}"
        )));
    }
    Ok(())
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: i64) -> Result<Vec<i64>> {
    positive(n, "divisors")?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

/// Prime factorisation by trial division, primes ascending.
pub fn factorize(n: i64) -> Result<Vec<(i64, u32)>> {
    positive(n, "factorize")?;
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    Ok(out)
}

pub fn is_prime(n: i64) -> bool {
    n >= 2
        && factorize(n)
            .map(|f| f.len() == 1 && f[0].1 == 1)
            .unwrap_or(false)
}

pub fn sigma1(n: i64) -> Result<i64> {
    Ok(factorize(n)?
        .into_iter()
        .map(|(p, k)| (p.pow(k + 1) - 1) / (p - 1))
        .product())
}

pub fn euler_phi(n: i64) -> Result<i64> {
    Ok(factorize(n)?
        .into_iter()
        .map(|(p, k)| (p - 1) * p.pow(k - 1))
        .product())
}

pub fn moebius(n: i64) -> Result<i64> {
    let f = factorize(n)?;
    if f.iter().any(|&(_, k)| k > 1) {
        return Ok(0);
    }
    Ok(if f.len() % 2 == 0 { 1 } else { -1 })
}

/// Non-negative gcd; gcd(0, 0) = 0.
pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn is_square(n: i64) -> bool {
    n >= 0 && {
        let r = n.sqrt();
        r * r == n
    }
}

pub fn is_squarefree(n: i64) -> bool {
    n != 0
        && factorize(n.abs())
            .map(|f| f.iter().all(|&(_, k)| k == 1))
            .unwrap_or(false)
}

fn pow_mod(base: i64, mut exp: i64, m: i64) -> i64 {
    let m128 = m as i128;
    let mut acc: i128 = 1 % m128;
    let mut b = base.rem_euclid(m) as i128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as i64
}

/// Kronecker symbol (a | p) for a prime p. At p = 2 the mod-8 rule applies.
pub fn kronecker(a: i64, p: i64) -> Result<i64> {
    if !is_prime(p) {
        return Err(Error::domain(format!("kronecker: {p} is not prime")));
    }
    if p == 2 {
        return Ok(match a.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        });
    }
    Ok(match pow_mod(a, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    })
}

/// A real quadratic discriminant D = f²·D₀ with D₀ fundamental (D₀ = 1 when
/// D is a square).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Discriminant {
    pub value: i64,
    pub conductor: i64,
    pub fundamental: i64,
    pub is_square: bool,
}

impl Discriminant {
    pub fn new(d: i64) -> Result<Self> {
        if d < 5 || !matches!(d.rem_euclid(4), 0 | 1) {
            return Err(Error::InvalidDiscriminant(d));
        }
        if is_square(d) {
            return Ok(Discriminant {
                value: d,
                conductor: d.sqrt(),
                fundamental: 1,
                is_square: true,
            });
        }
        let mut f = 1;
        for (p, k) in factorize(d)? {
            f *= p.pow(k / 2);
        }
        let mut d0 = d / (f * f);
        if matches!(d0.rem_euclid(4), 2 | 3) {
            f /= 2;
            d0 *= 4;
        }
        Ok(Discriminant {
            value: d,
            conductor: f,
            fundamental: d0,
            is_square: false,
        })
    }

    /// True when W_D has two spin components: D ≡ 1 (mod 8) and D > 9.
    pub fn is_spin_split(&self) -> bool {
        self.value > 9 && self.value % 8 == 1
    }
}

/// Same as [`Discriminant::new`].
pub fn discriminant_split(d: i64) -> Result<Discriminant> {
    Discriminant::new(d)
}

/// Is `d` a fundamental discriminant (including 1)?
pub fn is_fundamental(d: i64) -> bool {
    if d == 1 {
        return true;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d),
        0 => matches!((d / 4).rem_euclid(4), 2 | 3) && is_squarefree(d / 4),
        _ => false,
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
