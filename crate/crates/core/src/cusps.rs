//! Cusps: components of the product locus P_D, cusp classes of Γ₀(m) and the
//! Fricke involution on them, and the cusp count of W_D for non-square D.

use std::fmt;

use serde::Serialize;

use crate::arith::{divisors, euler_phi, gcd, moebius, Discriminant};
use crate::error::{Error, Result};

/// A component Y₀(m) of P_D, indexed by D = e² + 4l²m with gcd(e, l) = 1.
/// The components for ±e are identified, so only e ≥ 0 is listed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PdComponent {
    pub e: i64,
    pub l: i64,
    pub m: i64,
}

pub fn pd_components(d: &Discriminant) -> Vec<PdComponent> {
    let v = d.value;
    let mut out = Vec::new();
    let mut e = v % 2;
    while e * e < v {
        let n = (v - e * e) / 4;
        let mut l = 1;
        while l * l <= n {
            if n % (l * l) == 0 && gcd(e, l) == 1 {
                out.push(PdComponent {
                    e,
                    l,
                    m: n / (l * l),
                });
            }
            l += 1;
        }
        e += 2;
    }
    out
}

/// Number of cusps of Y₀(m): Σ_{d | m} φ(gcd(d, m/d)).
pub fn y0_cusp_count(m: i64) -> Result<i64> {
    let mut n = 0;
    for d in divisors(m)? {
        n += euler_phi(gcd(d, m / d))?;
    }
    Ok(n)
}

/// The cusp p/q of Γ₀(level), with q ≥ 0 and gcd(p, q) = 1; ∞ is 1/0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Cusp {
    pub p: i64,
    pub q: i64,
    pub level: i64,
}

impl Cusp {
    /// Reduce p/q and normalise the sign of the denominator.
    pub fn new(p: i64, q: i64, level: i64) -> Result<Self> {
        if level < 1 {
            return Err(Error::domain(format!(
                "cusp level must be positive, got {level}"
            )));
        }
        let g = gcd(p, q);
        if g == 0 {
            return Err(Error::domain("0/0 is not a cusp"));
        }
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Ok(Cusp { p, q, level })
    }

    pub fn infinity(level: i64) -> Self {
        Cusp { p: 1, q: 0, level }
    }

    fn inverse_numerator(&self) -> i64 {
        // s with s·p ≡ 1 (mod q); any s works when q ≤ 1.
        if self.q == 0 {
            return self.p;
        }
        if self.q == 1 {
            return 0;
        }
        let (mut r0, mut r1) = (self.p.rem_euclid(self.q) as i128, self.q as i128);
        let (mut s0, mut s1) = (1i128, 0i128);
        while r1 != 0 {
            let t = r0 / r1;
            (r0, r1) = (r1, r0 - t * r1);
            (s0, s1) = (s1, s0 - t * s1);
        }
        s0.rem_euclid(self.q as i128) as i64
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 0 {
            write!(f, "∞")
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

/// Γ₀(N)-equivalence: s₁q₂ ≡ s₂q₁ (mod gcd(q₁q₂, N)) with sⱼpⱼ ≡ 1 (mod qⱼ).
pub fn cusps_equivalent(n: i64, a: &Cusp, b: &Cusp) -> bool {
    let modulus = gcd(a.q * b.q, n) as i128;
    if modulus == 1 {
        return true;
    }
    let lhs = a.inverse_numerator() as i128 * b.q as i128;
    let rhs = b.inverse_numerator() as i128 * a.q as i128;
    (lhs - rhs).rem_euclid(modulus) == 0
}

/// One representative x/d per class: d runs over the divisors of N and x over
/// the units mod gcd(d, N/d), each lifted to the least x coprime to d. The
/// class with d = N is written ∞.
pub fn cusp_classes(n: i64) -> Result<Vec<Cusp>> {
    let mut out = Vec::new();
    for d in divisors(n)? {
        if d == n {
            out.push(Cusp::infinity(n));
            continue;
        }
        let g = gcd(d, n / d);
        for a in 0..g {
            if gcd(a, g) != 1 {
                continue;
            }
            let mut x = a;
            while gcd(x, d) != 1 {
                x += g;
            }
            out.push(Cusp::new(x, d, n)?);
        }
    }
    Ok(out)
}

/// The representative from [`cusp_classes`] equivalent to `c`.
pub fn cusp_canonicalize(n: i64, c: &Cusp) -> Result<Cusp> {
    canonicalize_in(&cusp_classes(n)?, n, c)
}

fn canonicalize_in(classes: &[Cusp], n: i64, c: &Cusp) -> Result<Cusp> {
    classes
        .iter()
        .find(|r| cusps_equivalent(n, r, c))
        .copied()
        .ok_or_else(|| Error::consistency(format!("cusp {c} matches no class of Γ₀({n})")))
}

/// The Fricke involution p/q ↦ −q/(N·p).
pub fn fricke_image(n: i64, c: &Cusp) -> Result<Cusp> {
    if c.p == 0 {
        return Ok(Cusp::infinity(n));
    }
    Cusp::new(-c.q, n * c.p, n)
}

/// Number of orbits of the Fricke involution on the cusps of Y₀(m).
pub fn fricke_orbits(m: i64) -> Result<i64> {
    let classes = cusp_classes(m)?;
    let mut fixed = 0;
    for c in &classes {
        let img = canonicalize_in(&classes, m, &fricke_image(m, c)?)?;
        let back = canonicalize_in(&classes, m, &fricke_image(m, &img)?)?;
        if back != *c {
            return Err(Error::consistency(format!(
                "Fricke is not an involution on {c} at level {m}"
            )));
        }
        if img == *c {
            fixed += 1;
        }
    }
    Ok((classes.len() as i64 + fixed) / 2)
}

fn non_square(d: &Discriminant) -> Result<()> {
    if d.is_square {
        return Err(Error::not_applicable(format!(
            "cusp counts of W_D are only computed for non-square D; {d} is a square"
        )));
    }
    Ok(())
}

/// C(W_D) = C(P_D) for non-square D. The e = 0 component is glued to itself
/// by the Fricke involution, so it contributes its Fricke orbits.
pub fn cusp_count_wd(d: &Discriminant) -> Result<i64> {
    non_square(d)?;
    let mut n = 0;
    for c in pd_components(d) {
        n += if c.e == 0 {
            fricke_orbits(c.m)?
        } else {
            y0_cusp_count(c.m)?
        };
    }
    Ok(n)
}

/// Cusps per spin component, for non-square D ≡ 1 (mod 8), D > 9.
pub fn cusp_split(d: &Discriminant) -> Result<(i64, i64)> {
    non_square(d)?;
    if !d.is_spin_split() {
        return Err(Error::not_applicable(format!(
            "W_D is connected for D = {d}"
        )));
    }
    let c = cusp_count_wd(d)?;
    if c % 2 != 0 {
        return Err(Error::consistency(format!(
            "D = {d}: odd cusp total {c} cannot split evenly"
        )));
    }
    Ok((c / 2, c / 2))
}

fn binom2(n: i64) -> i64 {
    if n < 2 {
        0
    } else {
        n * (n - 1) / 2
    }
}

/// Cyclically ordered triples (a, b, c) of positive integers with
/// a + b + c = f and gcd(a, b, c) = 1, counted up to rotation.
pub fn one_cylinder_count(f: i64) -> Result<i64> {
    let mut t = 0;
    for d in divisors(f)? {
        t += moebius(d)? * binom2(f / d - 1);
    }
    Ok((t + if f == 3 { 2 } else { 0 }) / 3)
}

/// Σ_{b + c = f, 0 < c < b} φ(gcd(b, c)).
pub fn two_cyl_spin_difference(f: i64) -> Result<i64> {
    let mut s = 0;
    let mut c = 1;
    while 2 * c < f {
        s += euler_phi(gcd(f - c, c))?;
        c += 1;
    }
    Ok(s)
}

/// Number of components of P_D, checked against h₀(P_D) ≤ D^{3/4} + 150.
pub fn count_pd_components(d: &Discriminant) -> Result<usize> {
    let n = pd_components(d).len();
    let bound = (d.value as f64).powf(0.75) + 150.0;
    if n as f64 > bound {
        return Err(Error::consistency(format!(
            "D = {d}: {n} components of P_D exceed {bound:.1}"
        )));
    }
    Ok(n)
}
