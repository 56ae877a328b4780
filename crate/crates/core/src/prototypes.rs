//! Pinwheel prototypes (e, c, b) with D = −e² + 2bc, which parametrize the
//! orbifold points of order two on W_D, and the class-number closed form
//! for their count.

use num_integer::Roots;
use serde::Serialize;

use crate::arith::Discriminant;
use crate::classnum::weighted_class_number;
use crate::error::{Error, Result};
use crate::rational::{qi, to_string, to_u64, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PinwheelPrototype {
    pub e: i64,
    pub c: i64,
    pub b: i64,
    #[serde(rename = "D")]
    pub d: i64,
}

impl PinwheelPrototype {
    pub fn key(&self) -> (i64, i64, i64) {
        (self.e, self.c, self.b)
    }
}

/// Counts of orbifold points by order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrbifoldSignature {
    pub e2: u64,
    pub e4: u64,
    pub e5: u64,
}

fn same_parity(x: i64, y: i64) -> bool {
    (x - y).rem_euclid(2) == 0
}

/// Do (e, c, b) satisfy the prototype conditions for `d`?
pub fn is_prototype(d: i64, e: i64, c: i64, b: i64) -> bool {
    d == -e * e + 2 * b * c
        && same_parity(d, e)
        && same_parity(d, c)
        && same_parity(d, b)
        && e.abs() <= c
        && c <= b
        && (e <= 0 || (e.abs() != c && b != c))
}

/// E₀(d) for any d ≥ 1; `d` need not be a valid discriminant here because
/// the properness test descends to d/g², which may be 1 or 4.
pub fn prototype_triples(d: i64) -> Vec<(i64, i64, i64)> {
    let mut out = Vec::new();
    if d < 1 {
        return out;
    }
    let mut c = if d % 2 == 0 { 2 } else { 1 };
    while c <= d.sqrt() {
        let mut e = -c;
        while e <= c {
            let num = d + e * e;
            if num % (2 * c) == 0 && is_prototype(d, e, c, num / (2 * c)) {
                out.push((e, c, num / (2 * c)));
            }
            e += 2;
        }
        c += 2;
    }
    out.sort();
    out
}

/// Is (e, c, b) ∈ E₀(d) a multiple g·(e', c', b') of a prototype for d/g²?
pub fn is_improper(d: i64, (e, c, b): (i64, i64, i64)) -> bool {
    let mut g = 2;
    while g * g <= d {
        if d % (g * g) == 0 && e % g == 0 && c % g == 0 && b % g == 0 {
            let dd = d / (g * g);
            if is_prototype(dd, e / g, c / g, b / g) {
                return true;
            }
        }
        g += 1;
    }
    false
}

fn wrap(d: &Discriminant, t: &[(i64, i64, i64)]) -> Vec<PinwheelPrototype> {
    t.iter()
        .map(|&(e, c, b)| PinwheelPrototype {
            e,
            c,
            b,
            d: d.value,
        })
        .collect()
}

/// E₀(D), sorted by (e, c, b).
pub fn enumerate_prototypes_all(d: &Discriminant) -> Vec<PinwheelPrototype> {
    wrap(d, &prototype_triples(d.value))
}

/// E(D): the proper prototypes, sorted by (e, c, b).
pub fn enumerate_prototypes(d: &Discriminant) -> Vec<PinwheelPrototype> {
    let t: Vec<_> = prototype_triples(d.value)
        .into_iter()
        .filter(|&t| !is_improper(d.value, t))
        .collect();
    wrap(d, &t)
}

/// The class-number formula for e₂(W_D), by D mod 16. Only meaningful as a
/// count for D > 8; at D = 8 it evaluates to 1/2.
pub fn e2_closed_form(d: &Discriminant) -> Result<Q> {
    let v = d.value;
    let half = |x: Q| x / qi(2);
    Ok(match v.rem_euclid(16) {
        1 | 5 | 9 | 13 => half(weighted_class_number(-4 * v)?),
        0 => half(weighted_class_number(-v)? + qi(2) * weighted_class_number(-v / 4)?),
        4 => qi(0),
        8 => half(weighted_class_number(-v)?),
        12 => half(weighted_class_number(-v)? + qi(3) * weighted_class_number(-v / 4)?),
        _ => return Err(Error::InvalidDiscriminant(v)),
    })
}

pub fn orbifold_signature(d: &Discriminant) -> Result<OrbifoldSignature> {
    match d.value {
        5 => {
            return Ok(OrbifoldSignature {
                e2: 1,
                e4: 0,
                e5: 1,
            })
        }
        8 => {
            return Ok(OrbifoldSignature {
                e2: 0,
                e4: 1,
                e5: 0,
            })
        }
        _ => {}
    }
    let n = enumerate_prototypes(d).len() as u64;
    let closed = e2_closed_form(d)?;
    if to_u64(&closed) != Some(n) {
        return Err(Error::consistency(format!(
            "D = {d}: #E(D) = {n} but the class-number formula gives {}",
            to_string(&closed)
        )));
    }
    Ok(OrbifoldSignature {
        e2: n,
        e4: 0,
        e5: 0,
    })
}

fn check_spin_domain(p: &PinwheelPrototype) -> Result<()> {
    if p.d < 9 || p.d % 8 != 1 {
        return Err(Error::not_applicable(format!(
            "spin is defined for D ≡ 1 (mod 8), D ≥ 9; got D = {}",
            p.d
        )));
    }
    Ok(())
}

/// (c + f)/2 mod 2.
pub fn spin_of_prototype(p: &PinwheelPrototype) -> Result<u8> {
    check_spin_domain(p)?;
    let f = Discriminant::new(p.d)?.conductor;
    Ok(((p.c + f) / 2).rem_euclid(2) as u8)
}

/// The spin of the ideal of norm 2c: (n − 1)/2 mod 2 for n the odd part of 2c.
pub fn epsilon0_of_prototype(p: &PinwheelPrototype) -> Result<u8> {
    check_spin_domain(p)?;
    let mut n = 2 * p.c;
    while n % 2 == 0 {
        n /= 2;
    }
    let eps = ((n - 1) / 2).rem_euclid(2) as u8;
    let f = Discriminant::new(p.d)?.conductor;
    let spin = spin_of_prototype(p)?;
    if ((f + 1) / 2 + eps as i64).rem_euclid(2) as u8 != spin {
        return Err(Error::consistency(format!(
            "ε₀ = {eps} inconsistent with spin {spin} for prototype {:?}",
            p.key()
        )));
    }
    Ok(eps)
}

/// Number of proper prototypes on the spin-0 and spin-1 components.
pub fn e2_by_spin(d: &Discriminant) -> Result<(u64, u64)> {
    if !d.is_spin_split() {
        return Err(Error::not_applicable(format!(
            "W_D has a single component for D = {d}; spin split needs D ≡ 1 (mod 8), D > 9"
        )));
    }
    let mut counts = [0u64; 2];
    for p in enumerate_prototypes(d) {
        counts[spin_of_prototype(&p)? as usize] += 1;
    }
    if d.is_square {
        let side = (((d.conductor + 1) / 2) % 2) as usize;
        if counts[1 - side] != 0 {
            return Err(Error::consistency(format!(
                "D = {d}: square discriminant with prototypes of spin {}",
                1 - side
            )));
        }
    } else if counts[0] != counts[1] {
        return Err(Error::consistency(format!(
            "D = {d}: spin counts {} and {} differ",
            counts[0], counts[1]
        )));
    }
    Ok((counts[0], counts[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    fn disc(d: i64) -> Discriminant {
        Discriminant::new(d).unwrap()
    }

    fn keys(v: &[PinwheelPrototype]) -> Vec<(i64, i64, i64)> {
        v.iter().map(|p| p.key()).collect()
    }

    #[test]
    fn examples() {
        assert_eq!(keys(&enumerate_prototypes_all(&disc(20))), vec![(-2, 2, 6)]);
        assert_eq!(keys(&enumerate_prototypes_all(&disc(5))), vec![(-1, 1, 3)]);
        assert_eq!(keys(&enumerate_prototypes_all(&disc(12))), vec![(-2, 2, 4)]);
        assert_eq!(
            keys(&enumerate_prototypes(&disc(76))),
            vec![(-2, 2, 20), (-2, 4, 10), (2, 4, 10)]
        );
        assert_eq!(
            keys(&enumerate_prototypes(&disc(17))),
            vec![(-1, 1, 9), (-1, 3, 3)]
        );
        assert!(enumerate_prototypes(&disc(20)).is_empty());
        assert_eq!(keys(&enumerate_prototypes(&disc(8))), vec![(0, 2, 2)]);
        assert_eq!(keys(&enumerate_prototypes(&disc(9))), vec![(-1, 1, 5)]);
        assert_eq!(keys(&enumerate_prototypes(&disc(13))), vec![(-1, 1, 7)]);
        assert_eq!(keys(&enumerate_prototypes(&disc(16))), vec![(0, 2, 4)]);
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(e2_closed_form(&disc(17)).unwrap(), qi(2));
        assert_eq!(e2_closed_form(&disc(12)).unwrap(), qi(1));
        assert_eq!(e2_closed_form(&disc(8)).unwrap(), q(1, 2));
    }

    #[test]
    fn signatures() {
        let s = |d| orbifold_signature(&disc(d)).unwrap();
        assert_eq!(
            s(5),
            OrbifoldSignature {
                e2: 1,
                e4: 0,
                e5: 1
            }
        );
        assert_eq!(
            s(8),
            OrbifoldSignature {
                e2: 0,
                e4: 1,
                e5: 0
            }
        );
        assert_eq!(
            s(44),
            OrbifoldSignature {
                e2: 3,
                e4: 0,
                e5: 0
            }
        );
    }

    #[test]
    fn spins() {
        let p = |e, c, b, d| PinwheelPrototype { e, c, b, d };
        assert_eq!(spin_of_prototype(&p(-1, 1, 9, 17)).unwrap(), 1);
        assert_eq!(spin_of_prototype(&p(-1, 3, 3, 17)).unwrap(), 0);
        assert!(spin_of_prototype(&p(-2, 2, 4, 12)).is_err());
        assert_eq!(epsilon0_of_prototype(&p(-1, 1, 9, 17)).unwrap(), 0);
        assert_eq!(epsilon0_of_prototype(&p(-1, 3, 3, 17)).unwrap(), 1);
        assert_eq!(epsilon0_of_prototype(&p(1, 9, 9, 161)).unwrap(), 0);
        assert_eq!(e2_by_spin(&disc(17)).unwrap(), (1, 1));
        assert_eq!(e2_by_spin(&disc(81)).unwrap(), (0, 3));
        for pr in enumerate_prototypes(&disc(49)) {
            assert_eq!(spin_of_prototype(&pr).unwrap(), 0);
        }
        assert!(e2_by_spin(&disc(9)).is_err());
    }

    #[test]
    fn in_fundamental_domain() {
        // τ = (e + √−D)/(2c) has |Re τ| ≤ 1/2 and |τ|² ≥ 1/2.
        for d in (5..=600).filter(|d| d % 4 <= 1) {
            for p in enumerate_prototypes_all(&disc(d)) {
                assert!(2 * p.e.abs() <= 2 * p.c);
                // |τ|² = (e² + D)/(4c²) = b/(2c).
                assert!(p.b * 2 >= 2 * p.c);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn scaling(k in 2i64..200, r in 0i64..2, g in 1i64..5) {
            let d = 4 * k + r;
            let big = prototype_triples(g * g * d);
            for (e, c, b) in prototype_triples(d) {
                prop_assert!(big.contains(&(g * e, g * c, g * b)));
            }
        }

        #[test]
        fn matches_brute_force_scan(k in 2i64..150, r in 0i64..2) {
            let d = 4 * k + r;
            let mut brute = Vec::new();
            for e in -d..=d {
                for c in 1..=d {
                    if (d + e * e) % (2 * c) == 0 && is_prototype(d, e, c, (d + e * e) / (2 * c)) {
                        brute.push((e, c, (d + e * e) / (2 * c)));
                    }
                }
            }
            brute.sort();
            prop_assert_eq!(prototype_triples(d), brute);
        }
    }
}
