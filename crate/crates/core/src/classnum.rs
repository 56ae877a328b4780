//! Class numbers of imaginary quadratic orders by counting reduced forms.

use num_integer::Roots;
use serde::Serialize;

use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::rational::{q, qi, Q};

/// The binary quadratic form ax² + bxy + cy².
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct QuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadraticForm {
    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a, self.b), self.c) == 1
    }
}

fn check_negative_disc(c: i64) -> Result<()> {
    if c >= 0 || !matches!(c.rem_euclid(4), 0 | 1) {
        return Err(Error::domain(format!(
            "class number: {c} is not a negative discriminant ≡ 0,1 (mod 4)"
        )));
    }
    Ok(())
}

/// Reduced primitive forms of discriminant `disc`, ordered by (a, b).
pub fn reduced_forms(disc: i64) -> Result<Vec<QuadraticForm>> {
    check_negative_disc(disc)?;
    let n = -disc;
    let mut out = Vec::new();
    let mut a = 1;
    // a ≤ c and b² ≤ a² give 3a² ≤ |disc|.
    while 3 * a * a <= n {
        let mut b = -a + 1;
        if (b - disc).rem_euclid(2) != 0 {
            b += 1;
        }
        while b <= a {
            let num = b * b - disc;
            if num % (4 * a) == 0 {
                let form = QuadraticForm {
                    a,
                    b,
                    c: num / (4 * a),
                };
                if form.is_reduced() && form.is_primitive() {
                    out.push(form);
                }
            }
            b += 2;
        }
        a += 1;
    }
    Ok(out)
}

pub fn class_number(disc: i64) -> Result<u64> {
    Ok(reduced_forms(disc)?.len() as u64)
}

/// h(C)·2/|O_C^×|: the class number with the forms of discriminant −3 and −4
/// weighted by their extra automorphisms.
pub fn weighted_class_number(disc: i64) -> Result<Q> {
    let h = class_number(disc)? as i64;
    Ok(match disc {
        -3 => q(h, 3),
        -4 => q(h, 2),
        _ => qi(h),
    })
}

/// Largest a that can occur in a reduced form of discriminant `disc`.
pub fn max_reduced_a(disc: i64) -> i64 {
    (-disc / 3).sqrt()
}
