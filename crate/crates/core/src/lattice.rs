//! Exact oracles for the polarized lattices of the D₈ and D₁₂ families.
//!
//! Scalars live in the biquadratic field ℚ(√d₁, √d₂) with d₁ > 0 real and
//! d₂ < 0, so that complex conjugation is √d₂ ↦ −√d₂. Every statement about
//! lattices (unimodular Gram matrix, preservation by automorphisms,
//! integrality of real multiplication) is then an exact equality.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::arith::{factorize, is_square};
use crate::error::{Error, Result};
use crate::prototypes::PinwheelPrototype;
use crate::rational::{q, qi, Q};

/// The field ℚ(√d₁, √d₂).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tower {
    pub d1: i64,
    pub d2: i64,
}

impl Tower {
    pub fn new(d1: i64, d2: i64) -> Result<Self> {
        // With d₁ > 0 and d₂ < 0 only d₁ can fail to be a non-square.
        if d1 <= 1 || d2 >= 0 || is_square(d1) {
            return Err(Error::domain(format!(
                "Q(√{d1}, √{d2}): need d₁ > 1 a non-square and d₂ < 0"
            )));
        }
        Ok(Tower { d1, d2 })
    }

    /// The tower used for prototype points of discriminant D: d₁ = 3 and d₂ the
    /// squarefree part of −D. Returns the tower and the integer r with
    /// √−D = r·√d₂.
    pub fn for_discriminant(d: i64) -> Result<(Self, i64)> {
        if d <= 0 {
            return Err(Error::domain(format!("need D > 0, got {d}")));
        }
        let mut r = 1;
        let mut core = 1;
        for (p, k) in factorize(d)? {
            r *= p.pow(k / 2);
            if k % 2 == 1 {
                core *= p;
            }
        }
        Ok((Tower::new(3, -core)?, r))
    }

    pub fn zero(self) -> QTowerElem {
        QTowerElem {
            c: [qi(0), qi(0), qi(0), qi(0)],
            tower: self,
        }
    }

    pub fn rational(self, x: Q) -> QTowerElem {
        QTowerElem {
            c: [x, qi(0), qi(0), qi(0)],
            tower: self,
        }
    }

    pub fn int(self, n: i64) -> QTowerElem {
        self.rational(qi(n))
    }

    /// √d₁.
    pub fn s(self) -> QTowerElem {
        QTowerElem {
            c: [qi(0), qi(1), qi(0), qi(0)],
            tower: self,
        }
    }

    /// √d₂.
    pub fn t(self) -> QTowerElem {
        QTowerElem {
            c: [qi(0), qi(0), qi(1), qi(0)],
            tower: self,
        }
    }
}

/// a₀ + a₁√d₁ + a₂√d₂ + a₃√(d₁d₂).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QTowerElem {
    pub c: [Q; 4],
    pub tower: Tower,
}

impl QTowerElem {
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<Q> {
        self.c[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.c[0].clone())
    }

    fn with_signs(&self, s1: bool, s2: bool) -> Self {
        let mut c = self.c.clone();
        if s1 {
            c[1] = -c[1].clone();
            c[3] = -c[3].clone();
        }
        if s2 {
            c[2] = -c[2].clone();
            c[3] = -c[3].clone();
        }
        QTowerElem {
            c,
            tower: self.tower,
        }
    }

    /// √d₁ ↦ −√d₁.
    pub fn conj_real(&self) -> Self {
        self.with_signs(true, false)
    }

    /// Complex conjugation, √d₂ ↦ −√d₂.
    pub fn conj(&self) -> Self {
        self.with_signs(false, true)
    }

    pub fn norm(&self) -> Q {
        let p = self * &self.conj_real();
        let n = &p * &p.conj();
        n.as_rational()
            .expect("the norm of a tower element is rational")
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::domain("division by zero in Q(√d₁, √d₂)"));
        }
        let others = &(&self.conj_real() * &self.conj()) * &self.with_signs(true, true);
        let n = self.norm();
        Ok(others.scale(&(Q::one() / n)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, x: &Q) -> Self {
        QTowerElem {
            c: self.c.clone().map(|a| a * x),
            tower: self.tower,
        }
    }

    /// Sign of the imaginary part: Im = (a₂ + a₃√d₁)·√|d₂|.
    pub fn im_sign(&self) -> i32 {
        let (a2, a3) = (&self.c[2], &self.c[3]);
        let sgn = |x: &Q| {
            if x.is_positive() {
                1
            } else if x.is_negative() {
                -1
            } else {
                0
            }
        };
        let (s2, s3) = (sgn(a2), sgn(a3));
        if s3 == 0 || s2 == s3 {
            return if s2 != 0 { s2 } else { s3 };
        }
        if s2 == 0 {
            return s3;
        }
        let lhs = a2 * a2;
        let rhs = a3 * a3 * qi(self.tower.d1);
        if lhs > rhs {
            s2
        } else if lhs < rhs {
            s3
        } else {
            0
        }
    }

    /// Coordinates over ℚ followed by nothing else; used to flatten vectors.
    fn coords(&self) -> [Q; 4] {
        self.c.clone()
    }
}

impl Add for &QTowerElem {
    type Output = QTowerElem;
    fn add(self, o: &QTowerElem) -> QTowerElem {
        let c = [0, 1, 2, 3].map(|i| &self.c[i] + &o.c[i]);
        QTowerElem {
            c,
            tower: self.tower,
        }
    }
}

impl Sub for &QTowerElem {
    type Output = QTowerElem;
    fn sub(self, o: &QTowerElem) -> QTowerElem {
        let c = [0, 1, 2, 3].map(|i| &self.c[i] - &o.c[i]);
        QTowerElem {
            c,
            tower: self.tower,
        }
    }
}

impl Neg for &QTowerElem {
    type Output = QTowerElem;
    fn neg(self) -> QTowerElem {
        QTowerElem {
            c: self.c.clone().map(|a| -a),
            tower: self.tower,
        }
    }
}

impl Mul for &QTowerElem {
    type Output = QTowerElem;
    fn mul(self, o: &QTowerElem) -> QTowerElem {
        debug_assert_eq!(self.tower, o.tower);
        let (a, b) = (&self.c, &o.c);
        let d1 = qi(self.tower.d1);
        let d2 = qi(self.tower.d2);
        let c0 =
            &a[0] * &b[0] + &d1 * &a[1] * &b[1] + &d2 * &a[2] * &b[2] + &d1 * &d2 * &a[3] * &b[3];
        let c1 = &a[0] * &b[1] + &a[1] * &b[0] + &d2 * (&a[2] * &b[3] + &a[3] * &b[2]);
        let c2 = &a[0] * &b[2] + &a[2] * &b[0] + &d1 * (&a[1] * &b[3] + &a[3] * &b[1]);
        let c3 = &a[0] * &b[3] + &a[3] * &b[0] + &a[1] * &b[2] + &a[2] * &b[1];
        QTowerElem {
            c: [c0, c1, c2, c3],
            tower: self.tower,
        }
    }
}

/// A 4×4 matrix over ℚ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat4(pub [[Q; 4]; 4]);

impl Mat4 {
    pub fn from_fn(f: impl Fn(usize, usize) -> Q) -> Self {
        Mat4([0, 1, 2, 3].map(|i| [0, 1, 2, 3].map(|j| f(i, j))))
    }

    pub fn from_ints(m: [[i64; 4]; 4]) -> Self {
        Mat4::from_fn(|i, j| qi(m[i][j]))
    }

    pub fn identity() -> Self {
        Mat4::from_fn(|i, j| qi((i == j) as i64))
    }

    pub fn transpose(&self) -> Self {
        Mat4::from_fn(|i, j| self.0[j][i].clone())
    }

    pub fn scale(&self, x: &Q) -> Self {
        Mat4::from_fn(|i, j| &self.0[i][j] * x)
    }

    pub fn add(&self, o: &Self) -> Self {
        Mat4::from_fn(|i, j| &self.0[i][j] + &o.0[i][j])
    }

    pub fn sub(&self, o: &Self) -> Self {
        Mat4::from_fn(|i, j| &self.0[i][j] - &o.0[i][j])
    }

    pub fn mul(&self, o: &Self) -> Self {
        Mat4::from_fn(|i, j| (0..4).map(|k| &self.0[i][k] * &o.0[k][j]).sum())
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Mat4::identity(), |acc, _| acc.mul(self))
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_integer())
    }

    pub fn is_skew(&self) -> bool {
        *self == self.transpose().scale(&qi(-1))
    }

    pub fn to_ints(&self) -> Option<[[i64; 4]; 4]> {
        use num_traits::ToPrimitive;
        let mut out = [[0i64; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                if !self.0[i][j].is_integer() {
                    return None;
                }
                out[i][j] = self.0[i][j].numer().to_i64()?;
            }
        }
        Some(out)
    }

    /// Determinant by exact Gaussian elimination.
    pub fn det(&self) -> Q {
        let mut a = self.0.clone();
        let mut det = qi(1);
        for col in 0..4 {
            let Some(piv) = (col..4).find(|&r| !a[r][col].is_zero()) else {
                return qi(0);
            };
            if piv != col {
                a.swap(piv, col);
                det = -det;
            }
            det *= &a[col][col];
            for r in col + 1..4 {
                let f = &a[r][col] / &a[col][col];
                for k in col..4 {
                    let t = &f * &a[col][k];
                    a[r][k] -= t;
                }
            }
        }
        det
    }
}

pub type Vec2 = [QTowerElem; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    D8,
    D12,
}

/// A rank-four lattice in ℂ² with basis v₁..v₄ over a tower field.
#[derive(Debug, Clone)]
pub struct PolarizedLattice {
    pub kind: LatticeKind,
    pub tau: QTowerElem,
    pub basis: [Vec2; 4],
}

pub type D8Lattice = PolarizedLattice;
pub type D12Lattice = PolarizedLattice;

impl PolarizedLattice {
    /// Λ_τ with basis (1,1), (1,−1), (τ,τ+1), (τ,−τ−1).
    pub fn d8(tau: QTowerElem) -> Result<Self> {
        check_upper(&tau)?;
        let t = tau.tower;
        let one = t.int(1);
        let tp1 = &tau + &one;
        let basis = [
            [one.clone(), one.clone()],
            [one.clone(), -&one],
            [tau.clone(), tp1.clone()],
            [tau.clone(), -&tp1],
        ];
        Ok(PolarizedLattice {
            kind: LatticeKind::D8,
            tau,
            basis,
        })
    }

    /// Λ̃_τ with basis (1,1/√3), (τ,√3τ), (1,−1/√3), (τ,−√3τ). Needs d₁ = 3.
    pub fn d12(tau: QTowerElem) -> Result<Self> {
        check_upper(&tau)?;
        let t = tau.tower;
        if t.d1 != 3 {
            return Err(Error::domain("the D12 lattice needs the tower Q(√3, √d₂)"));
        }
        let one = t.int(1);
        let inv_s = t.s().scale(&q(1, 3));
        let s_tau = &t.s() * &tau;
        let basis = [
            [one.clone(), inv_s.clone()],
            [tau.clone(), s_tau.clone()],
            [one.clone(), -&inv_s],
            [tau.clone(), -&s_tau],
        ];
        Ok(PolarizedLattice {
            kind: LatticeKind::D12,
            tau,
            basis,
        })
    }

    pub fn tower(&self) -> Tower {
        self.tau.tower
    }

    /// ⟨(a,b),(c,d)⟩ = −Im(a c̄ + b d̄)/(2 Im τ), evaluated exactly as
    /// −(w − w̄)/(2(τ − τ̄)) with w = a c̄ + b d̄.
    pub fn pairing(&self, x: &Vec2, y: &Vec2) -> Result<Q> {
        let w = &(&x[0] * &y[0].conj()) + &(&x[1] * &y[1].conj());
        let num = &w - &w.conj();
        let den = &self.tau - &self.tau.conj();
        let r = num.div(&den)?;
        r.as_rational()
            .map(|r| -r / qi(2))
            .ok_or_else(|| Error::consistency("symplectic pairing is not rational"))
    }

    /// Rational coordinates of `w` in the basis, if it lies in the ℚ-span.
    pub fn coordinates(&self, w: &Vec2) -> Result<[Q; 4]> {
        // Eight rational equations (two components, four field coordinates)
        // in four unknowns.
        let mut rows: Vec<[Q; 5]> = Vec::with_capacity(8);
        for comp in 0..2 {
            for k in 0..4 {
                let mut row: [Q; 5] = std::array::from_fn(|_| qi(0));
                for (j, v) in self.basis.iter().enumerate() {
                    row[j] = v[comp].coords()[k].clone();
                }
                row[4] = w[comp].coords()[k].clone();
                rows.push(row);
            }
        }
        let mut r = 0;
        let mut pivots = Vec::new();
        for col in 0..4 {
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let inv = Q::one() / &rows[r][col];
            for k in 0..5 {
                rows[r][k] *= &inv;
            }
            for i in 0..rows.len() {
                if i != r && !rows[i][col].is_zero() {
                    let f = rows[i][col].clone();
                    for k in 0..5 {
                        let t = &f * &rows[r][k];
                        rows[i][k] -= t;
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        if pivots.len() != 4 {
            return Err(Error::consistency(
                "lattice basis is not linearly independent",
            ));
        }
        if rows[4..].iter().any(|row| !row[4].is_zero()) {
            return Err(Error::LatticeNotPreserved(
                "vector is outside the rational span of the basis".into(),
            ));
        }
        Ok(std::array::from_fn(|i| rows[i][4].clone()))
    }

    /// Matrix of a ℂ-linear map of ℂ², columns = coordinates of the images of
    /// the basis vectors. Entries may be non-integral.
    pub fn matrix_of(&self, m: &[[QTowerElem; 2]; 2]) -> Result<Mat4> {
        let mut cols = Vec::with_capacity(4);
        for v in &self.basis {
            let img = [
                &(&m[0][0] * &v[0]) + &(&m[0][1] * &v[1]),
                &(&m[1][0] * &v[0]) + &(&m[1][1] * &v[1]),
            ];
            cols.push(self.coordinates(&img)?);
        }
        Ok(Mat4::from_fn(|i, j| cols[j][i].clone()))
    }
}

fn check_upper(tau: &QTowerElem) -> Result<()> {
    if tau.im_sign() <= 0 {
        return Err(Error::domain("τ must lie in the upper half plane"));
    }
    Ok(())
}

/// The Gram matrix of the symplectic form on the basis.
pub fn gram_matrix(l: &PolarizedLattice) -> Result<Mat4> {
    let mut g = Mat4::identity();
    for i in 0..4 {
        for j in 0..4 {
            g.0[i][j] = l.pairing(&l.basis[i], &l.basis[j])?;
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Automorphism {
    /// (0 1; −1 0), D₈ family.
    J,
    /// (1 0; 0 −1), both families.
    R,
    /// ½(1 −√3; √3 1), D₁₂ family.
    Z,
}

/// Integer matrix of an automorphism on the lattice basis (column convention).
pub fn automorphism_matrix(l: &PolarizedLattice, which: Automorphism) -> Result<Mat4> {
    let t = l.tower();
    let (z, o) = (t.int(0), t.int(1));
    let m = match (which, l.kind) {
        (Automorphism::J, LatticeKind::D8) => [[z.clone(), o.clone()], [-&o, z]],
        (Automorphism::R, _) => [[o.clone(), z.clone()], [z, -&o]],
        (Automorphism::Z, LatticeKind::D12) => {
            let h = t.rational(q(1, 2));
            let hs = &h * &t.s();
            [[h.clone(), -&hs], [hs, h]]
        }
        (w, k) => {
            return Err(Error::domain(format!(
                "{w:?} is not an automorphism of the {k:?} family"
            )))
        }
    };
    let mat = l.matrix_of(&m)?;
    if !mat.is_integral() {
        return Err(Error::LatticeNotPreserved(format!(
            "{which:?} has non-integral matrix"
        )));
    }
    Ok(mat)
}

/// τ = (e + k√−D)/(2c) in the tower for D.
pub fn prototype_tau(d: i64, e: i64, k: i64, c: i64) -> Result<QTowerElem> {
    if c <= 0 || k <= 0 {
        return Err(Error::domain(format!(
            "need c, k > 0, got c = {c}, k = {k}"
        )));
    }
    let (t, r) = Tower::for_discriminant(d)?;
    Ok(&t.rational(q(e, 2 * c)) + &t.t().scale(&q(k * r, 2 * c)))
}

fn solve_b(d: i64, e: i64, k: i64, c: i64) -> Result<i64> {
    if c <= 0 || k <= 0 {
        return Err(Error::domain(format!(
            "need c, k > 0, got c = {c}, k = {k}"
        )));
    }
    let num = k * k * d + e * e;
    if num % (2 * c) != 0 {
        return Err(Error::domain(format!(
            "b = (k²D + e²)/(2c) = {num}/{} is not an integer",
            2 * c
        )));
    }
    Ok(num / (2 * c))
}

/// The generator S of real multiplication for τ = (e + k√−D)/(2c), as the
/// displayed matrix (1/2k)·[...] with b = (k²D + e²)/(2c).
pub fn real_mult_generator(d: i64, e: i64, k: i64, c: i64) -> Result<Mat4> {
    let b = solve_b(d, e, k, c)?;
    let dk = d * k;
    let m = [
        [dk + c, -e - c, 0, 2 * c],
        [c + e, dk - c, -2 * c, 0],
        [0, -e - b, dk + c, c + e],
        [b + e, 0, -e - c, dk - c],
    ];
    Ok(Mat4::from_ints(m).scale(&q(1, 2 * k)))
}

/// The same generator computed from the lattice: the matrix of the ℂ-linear
/// map (D + √−D·J)/2 on the basis of Λ_τ. The displayed matrix is its
/// transpose (row convention).
pub fn real_mult_via_lattice(d: i64, e: i64, k: i64, c: i64) -> Result<Mat4> {
    solve_b(d, e, k, c)?;
    let tau = prototype_tau(d, e, k, c)?;
    let t = tau.tower;
    let l = PolarizedLattice::d8(tau)?;
    let (_, r) = Tower::for_discriminant(d)?;
    let half_d = t.rational(q(d, 2));
    let half_root = t.t().scale(&q(r, 2));
    let m = [[half_d.clone(), half_root.clone()], [-&half_root, half_d]];
    Ok(l.matrix_of(&m)?.transpose())
}

/// The congruence criterion for integrality of S: k divides e, c and b and
/// D ≡ e/k ≡ b/k ≡ c/k (mod 2).
pub fn s_integrality_criterion(d: i64, e: i64, k: i64, c: i64) -> Result<bool> {
    let b = solve_b(d, e, k, c)?;
    if e % k != 0 || c % k != 0 || b % k != 0 {
        return Ok(false);
    }
    let par = |x: i64| x.rem_euclid(2);
    Ok(par(d) == par(e / k) && par(d) == par(b / k) && par(d) == par(c / k))
}

/// An element of H₁(X; ℤ/2) in the basis x₁, x_i, x_b, x_bi.
pub type F2Vec = [u8; 4];

/// k₁² + k₂² + k₁k₃ + k₂k₄ + k₃k₄ (mod 2).
pub fn spin_q(k: F2Vec) -> u8 {
    let [k1, k2, k3, k4] = k.map(|x| (x & 1) as u32);
    ((k1 * k1 + k2 * k2 + k1 * k3 + k2 * k4 + k3 * k4) % 2) as u8
}

fn add2(x: F2Vec, y: F2Vec) -> F2Vec {
    [0, 1, 2, 3].map(|i| (x[i] ^ y[i]) & 1)
}

/// The quadratic form q together with the intersection pairing it refines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinForm {
    /// ⟨eᵢ, eⱼ⟩ on the basis, recovered from q(x + y) − q(x) − q(y).
    pub pairing: [[u8; 4]; 4],
}

impl SpinForm {
    pub fn d8() -> Self {
        let unit = |i: usize| {
            let mut v = [0u8; 4];
            v[i] = 1;
            v
        };
        let mut pairing = [[0u8; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let (x, y) = (unit(i), unit(j));
                pairing[i][j] = if i == j {
                    0
                } else {
                    spin_q(add2(x, y)) ^ spin_q(x) ^ spin_q(y)
                };
            }
        }
        SpinForm { pairing }
    }

    pub fn q(&self, x: F2Vec) -> u8 {
        spin_q(x)
    }

    pub fn pair(&self, x: F2Vec, y: F2Vec) -> u8 {
        let mut s = 0;
        for i in 0..4 {
            for j in 0..4 {
                s ^= x[i] & y[j] & self.pairing[i][j];
            }
        }
        s
    }
}

/// Arf invariant of q restricted to span(a, b), computed as q(a)q(b).
pub fn arf(form: &SpinForm, a: F2Vec, b: F2Vec) -> Result<u8> {
    if form.pair(a, b) != 1 {
        return Err(Error::domain(
            "arf: the pairing is degenerate on span(a, b)",
        ));
    }
    Ok(form.q(a) & form.q(b))
}

/// Multiplication by i on H₁ mod 2: x₁ ↔ x_i and x_b ↔ x_bi.
pub fn j_action_mod2(k: F2Vec) -> F2Vec {
    [k[1], k[0], k[3], k[2]]
}

fn spin_vector(p: &PinwheelPrototype) -> Result<F2Vec> {
    if p.d % 8 != 1 || p.d < 9 {
        return Err(Error::not_applicable(format!(
            "spin needs D ≡ 1 (mod 8), D ≥ 9; got {}",
            p.d
        )));
    }
    let f = crate::arith::Discriminant::new(p.d)?.conductor;
    // √−D = xτ + y with x = 2c, y = −e.
    let (x, y) = (2 * p.c, -p.e);
    if x.rem_euclid(4) != 2 {
        return Err(Error::consistency(format!("x = {x} is not 2 mod 4")));
    }
    let k1 = (2 * f + x) / 4;
    let k2 = (x - 2 * y) / 4;
    Ok([k1.rem_euclid(2) as u8, k2.rem_euclid(2) as u8, 0, 1])
}

/// Spin of a prototype as q(v) for v = ((f+c)/2)x₁ + ((c+e)/2)x_i + x_bi.
pub fn spin_via_structure(p: &PinwheelPrototype) -> Result<u8> {
    Ok(spin_q(spin_vector(p)?))
}

/// Spin of a prototype as the Arf invariant of q on span(v, Jv).
pub fn spin_via_arf(p: &PinwheelPrototype) -> Result<u8> {
    let v = spin_vector(p)?;
    arf(&SpinForm::d8(), v, j_action_mod2(v))
}
