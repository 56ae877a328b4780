//! Orbifold Euler characteristics of the Hilbert modular surface X_D, the
//! Weierstrass curve W_D, the product locus P_D and the curve S_D.

use num_integer::Roots;
use serde::Serialize;

use crate::arith::{factorize, is_fundamental, kronecker, sigma1, Discriminant};
use crate::error::{Error, Result};
use crate::rational::{q, qi, Q};

/// ζ_{D₀}(−1) by Siegel's formula: (1/60)·Σ σ((D₀ − e²)/4) over signed e
/// with e² < D₀ and e ≡ D₀ (mod 2).
pub fn zeta_minus1(d0: i64) -> Result<Q> {
    if d0 <= 1 || !is_fundamental(d0) {
        return Err(Error::domain(format!(
            "zeta_minus1: {d0} is not a non-square fundamental discriminant"
        )));
    }
    let r = d0.sqrt();
    let mut sum = 0i64;
    for e in -r..=r {
        if (e - d0).rem_euclid(2) == 0 {
            sum += sigma1((d0 - e * e) / 4)?;
        }
    }
    Ok(q(sum, 60))
}

/// F(D) = ∏_{p | f} (1 − (D₀/p)·p⁻²).
pub fn conductor_factor(d: &Discriminant) -> Result<Q> {
    let mut out = qi(1);
    if d.conductor == 1 {
        return Ok(out);
    }
    for (p, _) in factorize(d.conductor)? {
        out *= qi(1) - q(kronecker(d.fundamental, p)?, p * p);
    }
    Ok(out)
}

fn non_square(d: &Discriminant, what: &str) -> Result<()> {
    if d.is_square {
        return Err(Error::not_applicable(format!(
            "{what} is not available for square D = {d}"
        )));
    }
    Ok(())
}

/// χ(X_D) = 2f³·ζ_{D₀}(−1)·F(D), non-square D only.
pub fn chi_xd(d: &Discriminant) -> Result<Q> {
    non_square(d, "χ(X_D)")?;
    let f = d.conductor;
    Ok(qi(2 * f * f * f) * zeta_minus1(d.fundamental)? * conductor_factor(d)?)
}

/// χ(W_D). For D = f² this is −f²(f−2)F(D)/16, the sum of the two component
/// values (the printed total with f−1 does not match them).
pub fn chi_wd(d: &Discriminant) -> Result<Q> {
    if d.is_square {
        let f = d.conductor;
        return Ok(q(-f * f * (f - 2), 16) * conductor_factor(d)?);
    }
    Ok(q(-9, 2) * chi_xd(d)?)
}

/// (χ(W_D⁰), χ(W_D¹)) for D ≡ 1 (mod 8), D > 9.
pub fn chi_wd_components(d: &Discriminant) -> Result<(Q, Q)> {
    if !d.is_spin_split() {
        return Err(Error::not_applicable(format!(
            "W_D is connected for D = {d}"
        )));
    }
    if d.is_square {
        let f = d.conductor;
        let ff = conductor_factor(d)?;
        return Ok((q(-f * f * (f - 1), 32) * &ff, q(-f * f * (f - 3), 32) * ff));
    }
    let half = chi_wd(d)? / qi(2);
    Ok((half.clone(), half))
}

/// χ(P_D) = −(5/2)·χ(X_D), non-square D only.
pub fn chi_pd(d: &Discriminant) -> Result<Q> {
    non_square(d, "χ(P_D)")?;
    Ok(q(-5, 2) * chi_xd(d)?)
}

/// χ(S_D): zero unless D = f², then −f²F(D)/12.
pub fn chi_sd(d: &Discriminant) -> Result<Q> {
    if !d.is_square {
        return Ok(qi(0));
    }
    let f = d.conductor;
    Ok(q(-f * f, 12) * conductor_factor(d)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiRecord {
    #[serde(rename = "D")]
    pub d: i64,
    #[serde(rename = "chi_XD", serialize_with = "ser_opt")]
    pub chi_xd: Option<Q>,
    #[serde(rename = "chi_WD", serialize_with = "crate::rational::serialize")]
    pub chi_wd: Q,
    #[serde(rename = "chi_PD", serialize_with = "ser_opt")]
    pub chi_pd: Option<Q>,
    #[serde(rename = "chi_SD", serialize_with = "crate::rational::serialize")]
    pub chi_sd: Q,
    #[serde(serialize_with = "crate::rational::serialize_pair")]
    pub components: Option<(Q, Q)>,
}

fn ser_opt<S: serde::Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    x.as_ref().map(crate::rational::to_string).serialize(s)
}

pub fn chi_record(d: &Discriminant) -> Result<ChiRecord> {
    let (chi_xd, chi_pd) = if d.is_square {
        (None, None)
    } else {
        (Some(chi_xd(d)?), Some(chi_pd(d)?))
    };
    Ok(ChiRecord {
        d: d.value,
        chi_xd,
        chi_wd: chi_wd(d)?,
        chi_pd,
        chi_sd: chi_sd(d)?,
        components: if d.is_spin_split() {
            Some(chi_wd_components(d)?)
        } else {
            None
        },
    })
}
