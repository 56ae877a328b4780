//! Complex numbers over astro-float big floats, with an explicit context
//! carrying the precision and the cached constants.

use astro_float::{BigFloat, Consts, RoundingMode};

use crate::error::{Error, Result};

/// Guard bits carried beyond the requested precision.
const GUARD_BITS: usize = 32;

pub struct BigComplexCtx {
    pub precision_bits: usize,
    work: usize,
    rm: RoundingMode,
    cc: Consts,
}

#[derive(Debug, Clone)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    /// An upper bound e with |z| < 2^e (very negative for zero).
    pub fn mag_log2(&self) -> i64 {
        let e = |x: &BigFloat| {
            if x.is_zero() {
                i64::MIN / 4
            } else {
                x.exponent().map_or(i64::MAX / 4, |e| e as i64)
            }
        };
        e(&self.re).max(e(&self.im)) + 1
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (to_f64(&self.re), to_f64(&self.im))
    }
}

/// Nearest f64, through the exact dyadic value.
pub fn to_f64(x: &BigFloat) -> f64 {
    crate::modular::bigfloat_to_rational(x)
        .map(|q| crate::rational::to_f64(&q))
        .unwrap_or(f64::NAN)
}

impl BigComplexCtx {
    pub fn new(precision_bits: usize) -> Result<Self> {
        if precision_bits < 64 {
            return Err(Error::domain(format!(
                "precision must be at least 64 bits, got {precision_bits}"
            )));
        }
        let cc = Consts::new().map_err(|e| Error::Evaluation(format!("constant cache: {e:?}")))?;
        Ok(BigComplexCtx {
            precision_bits,
            work: precision_bits + GUARD_BITS,
            rm: RoundingMode::ToEven,
            cc,
        })
    }

    /// Series are truncated once a term falls below 2^threshold_log2.
    pub fn threshold_log2(&self) -> i64 {
        -(self.precision_bits as i64) - 16
    }

    pub fn work_bits(&self) -> usize {
        self.work
    }

    pub fn real(&self, x: BigFloat) -> BigComplex {
        BigComplex {
            re: x,
            im: BigFloat::from_i64(0, self.work),
        }
    }

    pub fn int(&self, n: i64) -> BigComplex {
        self.real(BigFloat::from_i64(n, self.work))
    }

    pub fn one(&self) -> BigComplex {
        self.int(1)
    }

    pub fn ratio(&self, n: i64, d: i64) -> BigComplex {
        let x = BigFloat::from_i64(n, self.work).div(
            &BigFloat::from_i64(d, self.work),
            self.work,
            self.rm,
        );
        self.real(x)
    }

    pub fn from_f64(&self, re: f64, im: f64) -> BigComplex {
        BigComplex {
            re: BigFloat::from_f64(re, self.work),
            im: BigFloat::from_f64(im, self.work),
        }
    }

    /// (e + k√−D)/den.
    pub fn tau_quadratic(&self, e: i64, k: i64, d: i64, den: i64) -> Result<BigComplex> {
        if d <= 0 || den == 0 {
            return Err(Error::domain(format!(
                "τ = ({e} + {k}√−{d})/{den} is not in the upper half plane"
            )));
        }
        let p = self.work;
        let root = BigFloat::from_i64(d, p).sqrt(p, self.rm);
        let den_f = BigFloat::from_i64(den, p);
        let re = BigFloat::from_i64(e, p).div(&den_f, p, self.rm);
        let im = root
            .mul(&BigFloat::from_i64(k, p), p, self.rm)
            .div(&den_f, p, self.rm);
        Ok(BigComplex { re, im })
    }

    pub fn add(&self, a: &BigComplex, b: &BigComplex) -> BigComplex {
        let p = self.work;
        BigComplex {
            re: a.re.add(&b.re, p, self.rm),
            im: a.im.add(&b.im, p, self.rm),
        }
    }

    pub fn sub(&self, a: &BigComplex, b: &BigComplex) -> BigComplex {
        let p = self.work;
        BigComplex {
            re: a.re.sub(&b.re, p, self.rm),
            im: a.im.sub(&b.im, p, self.rm),
        }
    }

    pub fn neg(&self, a: &BigComplex) -> BigComplex {
        BigComplex {
            re: a.re.neg(),
            im: a.im.neg(),
        }
    }

    pub fn mul(&self, a: &BigComplex, b: &BigComplex) -> BigComplex {
        let (p, rm) = (self.work, self.rm);
        let re = a.re.mul(&b.re, p, rm).sub(&a.im.mul(&b.im, p, rm), p, rm);
        let im = a.re.mul(&b.im, p, rm).add(&a.im.mul(&b.re, p, rm), p, rm);
        BigComplex { re, im }
    }

    pub fn div(&self, a: &BigComplex, b: &BigComplex) -> Result<BigComplex> {
        if b.re.is_zero() && b.im.is_zero() {
            return Err(Error::Evaluation("complex division by zero".into()));
        }
        let (p, rm) = (self.work, self.rm);
        let den = b.re.mul(&b.re, p, rm).add(&b.im.mul(&b.im, p, rm), p, rm);
        let re = a.re.mul(&b.re, p, rm).add(&a.im.mul(&b.im, p, rm), p, rm);
        let im = a.im.mul(&b.re, p, rm).sub(&a.re.mul(&b.im, p, rm), p, rm);
        Ok(BigComplex {
            re: re.div(&den, p, rm),
            im: im.div(&den, p, rm),
        })
    }

    pub fn scale_ratio(&self, a: &BigComplex, n: i64, d: i64) -> BigComplex {
        let r = self.ratio(n, d);
        self.mul(a, &r)
    }

    pub fn pow_small(&self, x: &BigComplex, k: u64) -> BigComplex {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// iπz.
    pub fn mul_i_pi(&mut self, z: &BigComplex) -> BigComplex {
        let (p, rm) = (self.work, self.rm);
        let pi = self.cc.pi(p, rm);
        BigComplex {
            re: z.im.mul(&pi, p, rm).neg(),
            im: z.re.mul(&pi, p, rm),
        }
    }

    pub fn exp(&mut self, z: &BigComplex) -> BigComplex {
        let (p, rm) = (self.work, self.rm);
        let r = z.re.exp(p, rm, &mut self.cc);
        let c = z.im.cos(p, rm, &mut self.cc);
        let s = z.im.sin(p, rm, &mut self.cc);
        BigComplex {
            re: r.mul(&c, p, rm),
            im: r.mul(&s, p, rm),
        }
    }
}
