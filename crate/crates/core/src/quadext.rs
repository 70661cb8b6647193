//! Quadratic extensions `E = F(√D)` and 2×2 matrices over `F`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::padic::{legendre, FieldDescriptor, PAdicScalar};

/// `E = F(√D)` with `v(D) ∈ {0, 1}`. Ramified when `v(D) = 1`, in which case
/// the uniformizer is `√D` and `D = ξϖ`.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct QuadExtDescriptor {
    base: FieldDescriptor,
    d: i64,
    ramified: bool,
}

impl fmt::Debug for QuadExtDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q_{}(√{})", self.base.p(), self.d)
    }
}

impl QuadExtDescriptor {
    pub fn new(base: FieldDescriptor, d: i64) -> Result<Self> {
        let p = base.p() as i64;
        if d == 0 {
            return Err(Error::NotAField(d));
        }
        let ramified = if d % p == 0 {
            if (d / p) % p == 0 {
                return Err(Error::NotAField(d));
            }
            true
        } else {
            if legendre(d, base.p()) == 1 {
                return Err(Error::NotAField(d));
            }
            false
        };
        let e = QuadExtDescriptor { base, d, ramified };
        debug_assert!(!e.d().is_square_mod(2).unwrap_or(true));
        Ok(e)
    }

    pub fn base(&self) -> FieldDescriptor {
        self.base
    }

    pub fn d_int(&self) -> i64 {
        self.d
    }

    pub fn d(&self) -> PAdicScalar {
        self.base.int(self.d)
    }

    pub fn is_ramified(&self) -> bool {
        self.ramified
    }

    pub fn ramification_index(&self) -> u32 {
        if self.ramified {
            2
        } else {
            1
        }
    }

    /// `ξ = D/ϖ` for ramified `E`.
    pub fn xi(&self) -> i64 {
        if self.ramified {
            self.d / self.base.p() as i64
        } else {
            self.d
        }
    }

    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        QuadExtDescriptor::new(self.base.with_precision(precision)?, self.d)
    }

    pub fn elem(&self, a: PAdicScalar, b: PAdicScalar) -> QuadExtScalar {
        QuadExtScalar { field: *self, a, b }
    }

    pub fn from_ints(&self, a: i64, b: i64) -> QuadExtScalar {
        self.elem(self.base.int(a), self.base.int(b))
    }

    pub fn embed_base(&self, a: PAdicScalar) -> QuadExtScalar {
        self.elem(a, self.base.zero())
    }

    pub fn zero(&self) -> QuadExtScalar {
        self.from_ints(0, 0)
    }

    pub fn one(&self) -> QuadExtScalar {
        self.from_ints(1, 0)
    }

    pub fn sqrt_d(&self) -> QuadExtScalar {
        self.from_ints(0, 1)
    }

    /// `√D` if ramified, `ϖ` otherwise.
    pub fn uniformizer(&self) -> QuadExtScalar {
        if self.ramified {
            self.sqrt_d()
        } else {
            self.embed_base(self.base.uniformizer())
        }
    }

    /// `ϖ_E^k` for any integer `k`.
    pub fn uniformizer_pow(&self, k: i64) -> QuadExtScalar {
        if !self.ramified {
            return self.embed_base(self.base.uniformizer_pow(k));
        }
        let half = k.div_euclid(2);
        let dpow = self.d().pow(half).expect("D is nonzero");
        if k.rem_euclid(2) == 0 {
            self.embed_base(dpow)
        } else {
            self.elem(self.base.zero(), dpow)
        }
    }
}

/// `a + b√D`.
#[derive(Clone, Copy)]
pub struct QuadExtScalar {
    field: QuadExtDescriptor,
    pub a: PAdicScalar,
    pub b: PAdicScalar,
}

impl PartialEq for QuadExtScalar {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.a == other.a && self.b == other.b
    }
}

impl fmt::Debug for QuadExtScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})√{}", self.a, self.b, self.field.d)
    }
}

impl QuadExtScalar {
    pub fn field(&self) -> QuadExtDescriptor {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conj(&self) -> QuadExtScalar {
        QuadExtScalar {
            b: -self.b,
            ..*self
        }
    }

    pub fn trace(&self) -> PAdicScalar {
        self.a + self.a
    }

    pub fn norm(&self) -> PAdicScalar {
        self.a * self.a - self.field.d() * self.b * self.b
    }

    /// Normalized valuation on `E`.
    pub fn valuation(&self) -> Option<i64> {
        let e = self.field.ramified;
        let va = self.a.valuation().map(|v| if e { 2 * v } else { v });
        let vb = self.b.valuation().map(|v| if e { 2 * v + 1 } else { v });
        match (va, vb) {
            (None, None) => None,
            (Some(x), None) | (None, Some(x)) => Some(x),
            (Some(x), Some(y)) => Some(x.min(y)),
        }
    }

    pub fn checked_valuation(&self) -> Result<i64> {
        self.valuation().ok_or(Error::PrecisionLoss {
            needed: self.a.precision().min(self.b.precision()) + 1,
            available: self.a.precision().min(self.b.precision()),
        })
    }

    pub fn inv(&self) -> Result<QuadExtScalar> {
        if self.is_zero() {
            return Err(Error::InverseOfZero);
        }
        let n = self.norm().inv()?;
        Ok(self.field.elem(self.a * n, -self.b * n))
    }

    pub fn div(&self, other: &QuadExtScalar) -> Result<QuadExtScalar> {
        Ok(*self * other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<QuadExtScalar> {
        let base = if e < 0 { self.inv()? } else { *self };
        let mut acc = self.field.one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * b;
            }
            b = b * b;
            k >>= 1;
        }
        Ok(acc)
    }

    pub fn scale(&self, s: PAdicScalar) -> QuadExtScalar {
        self.field.elem(self.a * s, self.b * s)
    }

    /// Standard embedding `a + b√D ↦ [[a, b], [bD, a]]`.
    pub fn embed(&self) -> Mat2 {
        Mat2::new(self.a, self.b, self.b * self.field.d(), self.a)
    }

    /// Embedding attached to `√D′ = s√D`: `a + b√D ↦ [[a, b/s], [bsD, a]]`.
    /// Its image of `s√D` is `[[0, 1], [D′, 0]]`.
    pub fn embed_scaled(&self, s: PAdicScalar) -> Result<Mat2> {
        let d = self.field.d();
        Ok(Mat2::new(self.a, self.b * s.inv()?, self.b * s * d, self.a))
    }
}

impl Add for QuadExtScalar {
    type Output = QuadExtScalar;
    fn add(self, o: QuadExtScalar) -> QuadExtScalar {
        self.field.elem(self.a + o.a, self.b + o.b)
    }
}

impl Sub for QuadExtScalar {
    type Output = QuadExtScalar;
    fn sub(self, o: QuadExtScalar) -> QuadExtScalar {
        self.field.elem(self.a - o.a, self.b - o.b)
    }
}

impl Neg for QuadExtScalar {
    type Output = QuadExtScalar;
    fn neg(self) -> QuadExtScalar {
        self.field.elem(-self.a, -self.b)
    }
}

impl Mul for QuadExtScalar {
    type Output = QuadExtScalar;
    fn mul(self, o: QuadExtScalar) -> QuadExtScalar {
        let d = self.field.d();
        self.field
            .elem(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a)
    }
}

/// 2×2 matrix over `F`, row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub m: [[PAdicScalar; 2]; 2],
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]
        )
    }
}

impl Mat2 {
    pub fn new(a: PAdicScalar, b: PAdicScalar, c: PAdicScalar, d: PAdicScalar) -> Mat2 {
        Mat2 {
            m: [[a, b], [c, d]],
        }
    }

    pub fn identity(f: FieldDescriptor) -> Mat2 {
        Mat2::diag(f.one(), f.one())
    }

    pub fn diag(a: PAdicScalar, d: PAdicScalar) -> Mat2 {
        let z = a.field().zero();
        Mat2::new(a, z, z, d)
    }

    /// Upper unipotent `[[1, u], [0, 1]]`.
    pub fn unipotent(u: PAdicScalar) -> Mat2 {
        let f = u.field();
        Mat2::new(f.one(), u, f.zero(), f.one())
    }

    pub fn field(&self) -> FieldDescriptor {
        self.m[0][0].field()
    }

    pub fn det(&self) -> PAdicScalar {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> PAdicScalar {
        self.m[0][0] + self.m[1][1]
    }

    pub fn inv(&self) -> Result<Mat2> {
        let di = self.det().inv()?;
        let [[a, b], [c, d]] = self.m;
        Ok(Mat2::new(d * di, -b * di, -c * di, a * di))
    }

    pub fn scale(&self, s: PAdicScalar) -> Mat2 {
        let [[a, b], [c, d]] = self.m;
        Mat2::new(a * s, b * s, c * s, d * s)
    }

    /// `g - 1`.
    pub fn minus_identity(&self) -> Mat2 {
        *self - Mat2::identity(self.field())
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let [[a, b], [c, d]] = self.m;
        let [[e, f], [g, h]] = o.m;
        Mat2::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        let [[a, b], [c, d]] = self.m;
        let [[e, f], [g, h]] = o.m;
        Mat2::new(a + e, b + f, c + g, d + h)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        let [[a, b], [c, d]] = self.m;
        let [[e, f], [g, h]] = o.m;
        Mat2::new(a - e, b - f, c - g, d - h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e3() -> QuadExtDescriptor {
        QuadExtDescriptor::new(FieldDescriptor::new(3, 10).unwrap(), -3).unwrap()
    }

    #[test]
    fn rejects_squares_and_high_valuation() {
        let f = FieldDescriptor::new(3, 10).unwrap();
        assert_eq!(QuadExtDescriptor::new(f, 7), Err(Error::NotAField(7)));
        assert_eq!(QuadExtDescriptor::new(f, 9), Err(Error::NotAField(9)));
        assert!(!QuadExtDescriptor::new(f, 2).unwrap().is_ramified());
        assert!(QuadExtDescriptor::new(f, 3).unwrap().is_ramified());
    }

    #[test]
    fn embedding_of_sqrt_d() {
        let e = e3();
        let f = e.base();
        let m = e.sqrt_d().embed();
        assert_eq!(m, Mat2::new(f.zero(), f.one(), f.int(-3), f.zero()));
    }

    #[test]
    fn norm_trace_valuation() {
        let e = e3();
        let x = e.from_ints(1, 1);
        assert_eq!(x.norm(), e.base().int(4));
        assert_eq!(x.trace(), e.base().int(2));
        assert_eq!(x.valuation(), Some(0));
        assert_eq!(e.sqrt_d().valuation(), Some(1));
        assert_eq!(e.from_ints(3, 1).valuation(), Some(1));
        assert_eq!(e.from_ints(3, 3).valuation(), Some(2));
    }

    #[test]
    fn embedding_is_multiplicative_and_matches_norm() {
        let e = e3();
        let x = e.from_ints(2, 5);
        let y = e.from_ints(-7, 4);
        assert_eq!((x * y).embed(), x.embed() * y.embed());
        assert_eq!(x.embed().det(), x.norm());
        assert_eq!(x.embed().trace(), x.trace());
        assert_eq!(x * x.inv().unwrap(), e.one());
    }

    #[test]
    fn conjugation_by_sign_diagonal() {
        let e = e3();
        let f = e.base();
        let x = e.from_ints(4, -2);
        let s = Mat2::diag(f.int(-1), f.one());
        assert_eq!(s * x.embed() * s.inv().unwrap(), x.conj().embed());
    }

    #[test]
    fn scaled_embedding_sends_sqrt_dprime() {
        let e = e3();
        let f = e.base();
        let s = f.int(2);
        let m = e.sqrt_d().scale(s).embed_scaled(s).unwrap();
        assert_eq!(m, Mat2::new(f.zero(), f.one(), f.int(-12), f.zero()));
    }

    #[test]
    fn uniformizer_powers() {
        let e = e3();
        assert_eq!(e.uniformizer_pow(3), e.sqrt_d() * e.sqrt_d() * e.sqrt_d());
        assert_eq!(e.uniformizer_pow(-1) * e.sqrt_d(), e.one());
    }
}
