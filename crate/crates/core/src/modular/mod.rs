//! Configurable-precision evaluation of θ, λ, j and a(τ), and assembly of
//! the polynomials f_D(t) with exact rational coefficients.

mod complex;
mod fd;
mod poly;

pub use complex::{BigComplex, BigComplexCtx};
pub use fd::{
    bigfloat_to_rational, fd_factors, fd_minimal_factor, fd_polynomial, fd_polynomial_auto,
    rational_reconstruct, FdForm, FdResult, DENOMINATOR_CAP,
};
pub use poly::{format_integer_poly, RationalPoly};

use crate::error::{Error, Result};

fn check_upper(tau: &BigComplex) -> Result<()> {
    if !tau.im.is_positive() {
        return Err(Error::domain("τ must have positive imaginary part"));
    }
    Ok(())
}

/// Σ_{n ≥ start} x^{n²+shift·n} with x = q₂, summed until the next term drops
/// below the context threshold. Uses x^{(n+1)²+s(n+1)} = x^{n²+sn}·x^{2n+1+s}.
fn theta_sum(
    ctx: &mut BigComplexCtx,
    x: &BigComplex,
    shift: i64,
    sign_alternates: bool,
) -> BigComplex {
    let x2 = ctx.mul(x, x);
    // Term for n = 0 is 1; step multiplier for n → n+1 is x^{2n+1+shift}.
    let mut term = ctx.one();
    let mut step = ctx.pow_small(x, (1 + shift) as u64);
    let mut sum = ctx.one();
    let limit = ctx.threshold_log2();
    let mut n = 0i64;
    loop {
        term = ctx.mul(&term, &step);
        step = ctx.mul(&step, &x2);
        n += 1;
        if term.mag_log2() < limit {
            break;
        }
        if sign_alternates && n % 2 == 1 {
            sum = ctx.sub(&sum, &term);
        } else {
            sum = ctx.add(&sum, &term);
        }
    }
    sum
}

/// q₂ = exp(iπτ).
fn nome(ctx: &mut BigComplexCtx, tau: &BigComplex) -> BigComplex {
    let ipt = ctx.mul_i_pi(tau);
    ctx.exp(&ipt)
}

/// θ₂(τ) = 2·exp(iπτ/4)·Σ_{n≥0} q₂^{n(n+1)}.
pub fn theta2(tau: &BigComplex, ctx: &mut BigComplexCtx) -> Result<BigComplex> {
    check_upper(tau)?;
    let q2 = nome(ctx, tau);
    let s = theta_sum(ctx, &q2, 1, false);
    let quarter = ctx.scale_ratio(tau, 1, 4);
    let ipt = ctx.mul_i_pi(&quarter);
    let pref = ctx.exp(&ipt);
    let two = ctx.int(2);
    Ok(ctx.mul(&ctx.mul(&two, &pref), &s))
}

/// θ₃(τ) = 1 + 2·Σ_{n≥1} q₂^{n²}.
pub fn theta3(tau: &BigComplex, ctx: &mut BigComplexCtx) -> Result<BigComplex> {
    check_upper(tau)?;
    let q2 = nome(ctx, tau);
    let s = theta_sum(ctx, &q2, 0, false);
    Ok(twice_minus_one(ctx, &s))
}

/// θ₄(τ) = 1 + 2·Σ_{n≥1} (−1)ⁿ q₂^{n²}.
pub fn theta4(tau: &BigComplex, ctx: &mut BigComplexCtx) -> Result<BigComplex> {
    check_upper(tau)?;
    let q2 = nome(ctx, tau);
    let s = theta_sum(ctx, &q2, 0, true);
    Ok(twice_minus_one(ctx, &s))
}

fn twice_minus_one(ctx: &mut BigComplexCtx, s: &BigComplex) -> BigComplex {
    let two = ctx.int(2);
    let one = ctx.one();
    ctx.sub(&ctx.mul(&two, s), &one)
}

/// λ = θ₂⁴/θ₃⁴, with θ₂⁴ = 16·q₂·(Σ q₂^{n(n+1)})⁴ to avoid the quarter power.
pub fn lambda_std(tau: &BigComplex, ctx: &mut BigComplexCtx) -> Result<BigComplex> {
    check_upper(tau)?;
    let q2 = nome(ctx, tau);
    let s = theta_sum(ctx, &q2, 1, false);
    let s0 = theta_sum(ctx, &q2, 0, false);
    let t3 = twice_minus_one(ctx, &s0);
    let s2 = ctx.mul(&s, &s);
    let t32 = ctx.mul(&t3, &t3);
    let num = ctx.mul(&ctx.mul(&ctx.int(16), &q2), &ctx.mul(&s2, &s2));
    let den = ctx.mul(&t32, &t32);
    ctx.div(&num, &den)
}

/// a(τ) = −2 + λ²/(λ − 1) with λ = θ₂⁴/θ₃⁴.
pub fn a_of_tau(tau: &BigComplex, ctx: &mut BigComplexCtx) -> Result<BigComplex> {
    let lam = lambda_std(tau, ctx)?;
    let lm1 = ctx.sub(&lam, &ctx.one());
    if lm1.mag_log2() < -(ctx.precision_bits as i64) / 2 {
        return Err(Error::Evaluation(
            "λ(τ) = 1: τ is too close to a cusp".into(),
        ));
    }
    let l2 = ctx.mul(&lam, &lam);
    let r = ctx.div(&l2, &lm1)?;
    Ok(ctx.sub(&r, &ctx.int(2)))
}

/// j = 32(θ₂⁸ + θ₃⁸ + θ₄⁸)³/(θ₂θ₃θ₄)⁸, independent of λ and a.
pub fn j_of_tau(tau: &BigComplex, ctx: &mut BigComplexCtx) -> Result<BigComplex> {
    let t2 = theta2(tau, ctx)?;
    let t3 = theta3(tau, ctx)?;
    let t4 = theta4(tau, ctx)?;
    let sum = ctx.add(
        &ctx.add(&ctx.pow_small(&t2, 8), &ctx.pow_small(&t3, 8)),
        &ctx.pow_small(&t4, 8),
    );
    let num = ctx.mul(&ctx.int(32), &ctx.pow_small(&sum, 3));
    let den = ctx.pow_small(&ctx.mul(&ctx.mul(&t2, &t3), &t4), 8);
    if den.mag_log2() < -(ctx.precision_bits as i64) / 2 {
        return Err(Error::Evaluation("j(τ) has a pole here".into()));
    }
    ctx.div(&num, &den)
}

/// The involution σ(a) = (−2a + 12)/(a + 2) relating a(τ_c) and a(τ_b).
pub fn sigma_involution(a: &BigComplex, ctx: &mut BigComplexCtx) -> Result<BigComplex> {
    let num = ctx.add(&ctx.mul(&ctx.int(-2), a), &ctx.int(12));
    let den = ctx.add(a, &ctx.int(2));
    ctx.div(&num, &den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> BigComplexCtx {
        BigComplexCtx::new(256).unwrap()
    }

    fn close(ctx: &mut BigComplexCtx, a: &BigComplex, b: &BigComplex, log2_tol: i64) -> bool {
        ctx.sub(a, b).mag_log2() < log2_tol
    }

    #[test]
    fn classical_values() {
        let mut c = ctx();
        let i = c.from_f64(0.0, 1.0);
        let lam = lambda_std(&i, &mut c).unwrap();
        let half = c.ratio(1, 2);
        assert!(close(&mut c, &lam, &half, -240));
        let j = j_of_tau(&i, &mut c).unwrap();
        let k = c.int(1728);
        assert!(close(&mut c, &j, &k, -230));
        let rho = c.tau_quadratic(1, 1, 3, 2).unwrap();
        let j = j_of_tau(&rho, &mut c).unwrap();
        assert!(j.mag_log2() < -230);
        let t3 = theta3(&i, &mut c).unwrap();
        assert!(t3.re.cmp(&c.int(1).re).unwrap() > 0);
        assert!(t3.im.is_zero() || t3.im.exponent().unwrap() < -250);
    }

    #[test]
    fn jacobi_identity() {
        let mut c = ctx();
        for (x, y) in [(0.1, 0.9), (-0.37, 0.6), (0.5, 1.3)] {
            let tau = c.from_f64(x, y);
            let t2 = theta2(&tau, &mut c).unwrap();
            let t3 = theta3(&tau, &mut c).unwrap();
            let t4 = theta4(&tau, &mut c).unwrap();
            let p4 = |c: &mut BigComplexCtx, z: &BigComplex| {
                let z2 = c.mul(z, z);
                c.mul(&z2, &z2)
            };
            let lhs = {
                let a = p4(&mut c, &t2);
                let b = p4(&mut c, &t4);
                c.add(&a, &b)
            };
            let rhs = p4(&mut c, &t3);
            assert!(close(&mut c, &lhs, &rhs, -240));
        }
    }

    #[test]
    fn prototype_values() {
        let mut c = ctx();
        // τ = i/√2 is the D = 8 point; τ = i and i/2 the D = 16 points.
        let t8 = c.tau_quadratic(0, 1, 8, 4).unwrap();
        let a = a_of_tau(&t8, &mut c).unwrap();
        let want = c.int(-6);
        assert!(close(&mut c, &a, &want, -240));
        let t = c.from_f64(0.0, 1.0);
        let a = a_of_tau(&t, &mut c).unwrap();
        let want = c.ratio(-5, 2);
        assert!(close(&mut c, &a, &want, -240));
        let t = c.from_f64(0.0, 0.5);
        let a = a_of_tau(&t, &mut c).unwrap();
        let want = c.int(-34);
        assert!(close(&mut c, &a, &want, -235));
    }

    #[test]
    fn rejects_lower_half_plane() {
        let mut c = ctx();
        let tau = c.from_f64(0.2, -1.0);
        assert!(a_of_tau(&tau, &mut c).is_err());
        assert!(theta3(&tau, &mut c).is_err());
    }
}
