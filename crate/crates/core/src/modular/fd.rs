//! f_D(t) = ∏ over E(D) of (t − a(τ_c))(t − a(τ_b)), with τ_c = (e + √−D)/(2c)
//! and τ_b = (−e + √−D)/(2b), recovered with exact rational coefficients.

use astro_float::{BigFloat, Sign};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use super::complex::{BigComplex, BigComplexCtx};
use super::poly::RationalPoly;
use super::{a_of_tau, sigma_involution};
use crate::arith::Discriminant;
use crate::error::{Error, Result};
use crate::prototypes::{enumerate_prototypes, PinwheelPrototype};
use crate::rational::Q;

/// Largest denominator accepted by rational reconstruction.
pub const DENOMINATOR_CAP: u64 = 1 << 16;

/// Highest precision tried by [`fd_polynomial_auto`].
const MAX_AUTO_BITS: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdForm {
    /// The monic product over all prototype points.
    Defining,
    /// The defining product scaled to integer coefficients with content 1.
    Primitive,
    /// The squarefree part of the defining product.
    Radical,
    /// The irreducible factor over ℚ vanishing at a(τ_c) of the first prototype.
    Minimal,
}

impl std::str::FromStr for FdForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "defining" => Ok(FdForm::Defining),
            "primitive" => Ok(FdForm::Primitive),
            "radical" => Ok(FdForm::Radical),
            "minimal" => Ok(FdForm::Minimal),
            _ => Err(Error::domain(format!(
                "unknown form {s:?}; expected defining, primitive, radical or minimal"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FdResult {
    pub d: i64,
    pub precision_bits: usize,
    pub prototypes: Vec<PinwheelPrototype>,
    /// a(τ_c), a(τ_b) for each prototype in order.
    pub points: Vec<BigComplex>,
    pub defining: RationalPoly,
    /// Largest log₂ of a reconstruction residual.
    pub max_residual_log2: i64,
}

impl FdResult {
    pub fn radical(&self) -> RationalPoly {
        self.defining.radical()
    }

    pub fn primitive(&self) -> Vec<BigInt> {
        self.defining.primitive()
    }
}

/// The exact dyadic value of a finite big float.
pub fn bigfloat_to_rational(x: &BigFloat) -> Result<Q> {
    if x.is_zero() {
        return Ok(Q::zero());
    }
    let (words, _bits, sign, exp, _) = x
        .as_raw_parts()
        .ok_or_else(|| Error::Evaluation("not a finite number".into()))?;
    let mut digits = Vec::with_capacity(words.len() * 2);
    for w in words {
        digits.push(*w as u32);
        digits.push((*w >> 32) as u32);
    }
    let mant = BigInt::from(BigUint::new(digits));
    let shift = exp as i64 - 64 * words.len() as i64;
    let mut v = if shift >= 0 {
        Q::from_integer(mant << shift as usize)
    } else {
        Q::new(mant, BigInt::one() << (-shift) as usize)
    };
    if sign == Sign::Neg {
        v = -v;
    }
    Ok(v)
}

/// Best rational approximation of `x` with denominator ≤ `cap`, taken from
/// the continued-fraction convergents.
pub fn rational_reconstruct(x: &Q, cap: u64) -> Q {
    let cap = BigInt::from(cap);
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut r = x.clone();
    let mut best = Q::from_integer(x.floor().to_integer());
    loop {
        let a = r.floor().to_integer();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if k2 > cap {
            break;
        }
        best = Q::new(h2.clone(), k2.clone());
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = &r - Q::from_integer(a);
        if frac.is_zero() {
            break;
        }
        r = frac.recip();
    }
    best
}

fn is_power_of_two(n: &BigInt) -> bool {
    n.is_positive() && (n & (n - BigInt::one())).is_zero()
}

fn log2_abs(x: &Q) -> i64 {
    if x.is_zero() {
        return i64::MIN / 4;
    }
    (x.numer().abs().bits() as i64) - (x.denom().bits() as i64) + 1
}

/// Multiply out ∏ (t − rᵢ) with complex coefficients, ascending.
fn expand(ctx: &BigComplexCtx, roots: &[&BigComplex]) -> Vec<BigComplex> {
    let mut co = vec![ctx.one()];
    for r in roots {
        let mut next = vec![ctx.int(0); co.len() + 1];
        for (i, c) in co.iter().enumerate() {
            next[i + 1] = ctx.add(&next[i + 1], c);
            next[i] = ctx.sub(&next[i], &ctx.mul(c, r));
        }
        co = next;
    }
    co
}

/// Recover exact coefficients; fails when any residual reaches 2^(−bits/4).
fn reconstruct(ctx: &BigComplexCtx, co: &[BigComplex]) -> Result<(RationalPoly, i64)> {
    let bits = ctx.precision_bits;
    let tol = -(bits as i64) / 4;
    let mut out = Vec::with_capacity(co.len());
    let mut worst = i64::MIN / 4;
    for c in co {
        let re = bigfloat_to_rational(&c.re)?;
        let im = bigfloat_to_rational(&c.im)?;
        let r = rational_reconstruct(&re, DENOMINATOR_CAP);
        let res = log2_abs(&(&re - &r)).max(log2_abs(&im));
        worst = worst.max(res);
        if res >= tol || !is_power_of_two(r.denom()) {
            return Err(Error::PrecisionInsufficient {
                bits,
                detail: format!("coefficient residual 2^{res} (needs < 2^{tol}), candidate {r}"),
            });
        }
        out.push(r);
    }
    Ok((RationalPoly::new(out), worst))
}

fn points(
    d: &Discriminant,
    protos: &[PinwheelPrototype],
    ctx: &mut BigComplexCtx,
) -> Result<Vec<BigComplex>> {
    let mut pts = Vec::with_capacity(2 * protos.len());
    let tol = -(ctx.precision_bits as i64) / 2;
    for p in protos {
        let tc = ctx.tau_quadratic(p.e, 1, d.value, 2 * p.c)?;
        let tb = ctx.tau_quadratic(-p.e, 1, d.value, 2 * p.b)?;
        let ac = a_of_tau(&tc, ctx)?;
        let ab = a_of_tau(&tb, ctx)?;
        // The two points of a prototype are exchanged by σ(a) = (12 − 2a)/(a + 2).
        let img = sigma_involution(&ac, ctx)?;
        let diff = ctx.sub(&img, &ab);
        if diff.mag_log2() - ab.mag_log2().max(0) >= tol {
            return Err(Error::PrecisionInsufficient {
                bits: ctx.precision_bits,
                detail: format!(
                    "σ-pairing residual 2^{} at prototype {:?}",
                    diff.mag_log2(),
                    p.key()
                ),
            });
        }
        pts.push(ac);
        pts.push(ab);
    }
    Ok(pts)
}

/// f_D at the context's precision.
pub fn fd_polynomial(d: &Discriminant, ctx: &mut BigComplexCtx) -> Result<FdResult> {
    let protos = enumerate_prototypes(d);
    if protos.is_empty() {
        return Err(Error::domain(format!(
            "E(D) is empty for D = {d}, so f_D is not defined"
        )));
    }
    let pts = points(d, &protos, ctx)?;
    let refs: Vec<&BigComplex> = pts.iter().collect();
    let (defining, worst) = reconstruct(ctx, &expand(ctx, &refs))?;
    Ok(FdResult {
        d: d.value,
        precision_bits: ctx.precision_bits,
        prototypes: protos,
        points: pts,
        defining,
        max_residual_log2: worst,
    })
}

/// f_D, doubling the precision from `start_bits` until reconstruction succeeds.
pub fn fd_polynomial_auto(d: &Discriminant, start_bits: usize) -> Result<FdResult> {
    let mut bits = start_bits.max(64);
    loop {
        let mut ctx = BigComplexCtx::new(bits)?;
        match fd_polynomial(d, &mut ctx) {
            Err(Error::PrecisionInsufficient { .. }) if bits < MAX_AUTO_BITS => bits *= 2,
            other => return other,
        }
    }
}

/// Largest degree for which the factor search is attempted.
const FACTOR_SEARCH_MAX_DEGREE: usize = 16;

/// Smallest subset of `pool` containing `pool[0]` whose product has rational
/// coefficients dividing `target`; returns the factor and the positions used.
fn smallest_rational_factor(
    ctx: &BigComplexCtx,
    points: &[BigComplex],
    pool: &[usize],
    target: &RationalPoly,
) -> Option<(RationalPoly, Vec<usize>)> {
    let n = pool.len();
    for size in 1..=n {
        let mut idx: Vec<usize> = (1..size).collect();
        loop {
            let mut used = vec![0];
            used.extend(&idx);
            let roots: Vec<&BigComplex> = used.iter().map(|&i| &points[pool[i]]).collect();
            if let Ok((p, _)) = reconstruct(ctx, &expand(ctx, &roots)) {
                if p.divides(target) {
                    return Some((p, used));
                }
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
    None
}

/// The factorization of the defining product into monic factors irreducible
/// over ℚ, in order of the first point each one vanishes at.
pub fn fd_factors(res: &FdResult) -> Result<Vec<RationalPoly>> {
    let n = res.points.len();
    if n > FACTOR_SEARCH_MAX_DEGREE {
        return Err(Error::not_applicable(format!(
            "the factor search is limited to degree {FACTOR_SEARCH_MAX_DEGREE}; f_D has degree {n}"
        )));
    }
    let ctx = BigComplexCtx::new(res.precision_bits)?;
    let mut pool: Vec<usize> = (0..n).collect();
    let mut rest = res.defining.clone();
    let mut out = Vec::new();
    while !pool.is_empty() {
        let (p, used) =
            smallest_rational_factor(&ctx, &res.points, &pool, &rest).ok_or_else(|| {
                Error::consistency(format!("no rational factor found for D = {}", res.d))
            })?;
        rest = rest.div_rem(&p)?.0;
        let drop: Vec<usize> = used.iter().map(|&i| pool[i]).collect();
        pool.retain(|i| !drop.contains(i));
        out.push(p);
    }
    Ok(out)
}

/// The factor of the defining product that is irreducible over ℚ and vanishes
/// at the first point a(τ_c).
pub fn fd_minimal_factor(res: &FdResult) -> Result<RationalPoly> {
    let n = res.points.len();
    if n > FACTOR_SEARCH_MAX_DEGREE {
        return Err(Error::not_applicable(format!(
            "the factor search is limited to degree {FACTOR_SEARCH_MAX_DEGREE}; f_D has degree {n}"
        )));
    }
    let ctx = BigComplexCtx::new(res.precision_bits)?;
    let pool: Vec<usize> = (0..n).collect();
    smallest_rational_factor(&ctx, &res.points, &pool, &res.defining)
        .map(|(p, _)| p)
        .ok_or_else(|| Error::consistency(format!("no rational factor found for D = {}", res.d)))
}

/// Advance a strictly increasing index vector over 1..n.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
