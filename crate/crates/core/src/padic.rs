//! Truncated p-adic numbers.
//!
//! A nonzero [`PAdicScalar`] is stored as `p^val * unit` where `unit` is known
//! modulo `p^rel` (its relative precision). The absolute precision
//! `abs = val + rel` says the value is known modulo `p^abs`. Zero carries only
//! an absolute precision. Every operation propagates the tightest precision it
//! can prove; nothing is silently rounded.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Mutex;

use once_cell::sync::Lazy;

use crate::error::{Error, Result};

/// Absolute precision of exact zero.
const EXACT: i64 = i64::MAX / 4;
const ZERO_VAL: i64 = i64::MAX;

static POWERS: Lazy<Mutex<HashMap<u64, &'static [u64]>>> = Lazy::new(Default::default);

fn power_table(p: u64) -> &'static [u64] {
    let mut map = POWERS.lock().expect("power table lock poisoned");
    map.entry(p).or_insert_with(|| {
        let mut v = vec![1u64];
        while let Some(next) = v.last().and_then(|x| x.checked_mul(p)) {
            if next > (1u64 << 62) {
                break;
            }
            v.push(next);
        }
        Box::leak(v.into_boxed_slice())
    })
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u128 % m as u128;
    let mut b = base as u128 % m as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Legendre symbol of `a` modulo the odd prime `p`: 1, -1 or 0.
pub fn legendre(a: i64, p: u64) -> i32 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if mod_pow(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Smallest generator of `(Z/p^2)^*`, which generates `(Z/p^k)^*` for all k.
pub fn primitive_root(p: u64) -> u64 {
    let pp = p * p;
    let order = p * (p - 1);
    let mut prime_factors = Vec::new();
    let mut m = order;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            prime_factors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        prime_factors.push(m);
    }
    (2..pp)
        .find(|&g| {
            g % p != 0
                && prime_factors
                    .iter()
                    .all(|&f| mod_pow(g, order / f, pp) != 1)
        })
        .expect("(Z/p^2)^* is cyclic")
}

/// The base field `F`: a `p`-adic field with residue field of order `q = p`,
/// together with the working precision `K` (retained relative digits).
#[derive(Clone, Copy)]
pub struct FieldDescriptor {
    p: u64,
    precision: u32,
    pows: &'static [u64],
}

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.precision == other.precision
    }
}

impl Eq for FieldDescriptor {}

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q_{}(K={})", self.p, self.precision)
    }
}

impl FieldDescriptor {
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        let pows = power_table(p);
        let max = (pows.len() - 1) as u32;
        if precision < 2 || precision > max {
            return Err(Error::PrecisionUnsupported {
                p,
                requested: precision,
                max,
            });
        }
        Ok(FieldDescriptor { p, precision, pows })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Residue field order.
    pub fn q(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Largest precision representable for this prime.
    pub fn max_precision(&self) -> u32 {
        (self.pows.len() - 1) as u32
    }

    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        FieldDescriptor::new(self.p, precision)
    }

    /// Fails unless the working precision is at least `needed`.
    pub fn require_precision(&self, needed: u32) -> Result<()> {
        if self.precision < needed {
            return Err(Error::PrecisionTooLow {
                needed,
                available: self.precision,
            });
        }
        Ok(())
    }

    pub(crate) fn pow(&self, e: u32) -> u64 {
        self.pows[e as usize]
    }

    pub fn zero(&self) -> PAdicScalar {
        PAdicScalar {
            field: *self,
            val: ZERO_VAL,
            unit: 0,
            abs: EXACT,
        }
    }

    pub fn one(&self) -> PAdicScalar {
        self.int(1)
    }

    pub fn int(&self, n: i64) -> PAdicScalar {
        self.int128(n as i128)
    }

    fn int128(&self, n: i128) -> PAdicScalar {
        if n == 0 {
            return self.zero();
        }
        let p = self.p as i128;
        let mut m = n;
        let mut v = 0i64;
        while m % p == 0 {
            m /= p;
            v += 1;
        }
        let modulus = self.pow(self.precision) as i128;
        let unit = m.rem_euclid(modulus) as u64;
        PAdicScalar {
            field: *self,
            val: v,
            unit,
            abs: v + self.precision as i64,
        }
    }

    /// The exact rational `num / den`.
    pub fn rational(&self, num: i64, den: i64) -> Result<PAdicScalar> {
        if den == 0 {
            return Err(Error::InverseOfZero);
        }
        Ok(self.int(num) * self.int(den).inv()?)
    }

    /// `p^k` for any integer `k`.
    pub fn uniformizer_pow(&self, k: i64) -> PAdicScalar {
        PAdicScalar {
            field: *self,
            val: k,
            unit: 1,
            abs: k + self.precision as i64,
        }
    }

    pub fn uniformizer(&self) -> PAdicScalar {
        self.uniformizer_pow(1)
    }
}

/// Element of `F` at finite precision.
#[derive(Clone, Copy)]
pub struct PAdicScalar {
    field: FieldDescriptor,
    val: i64,
    unit: u64,
    abs: i64,
}

impl PAdicScalar {
    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    /// True when the value is zero modulo its absolute precision.
    pub fn is_zero(&self) -> bool {
        self.val == ZERO_VAL
    }

    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.val)
    }

    /// Valuation, failing for a value indistinguishable from zero.
    pub fn checked_valuation(&self) -> Result<i64> {
        self.valuation().ok_or(Error::PrecisionLoss {
            needed: self.abs.saturating_add(1),
            available: self.abs,
        })
    }

    /// Absolute precision: the value is known modulo `p^precision`.
    pub fn precision(&self) -> i64 {
        self.abs
    }

    pub fn relative_precision(&self) -> Option<u32> {
        self.valuation().map(|v| (self.abs - v) as u32)
    }

    /// Unit part residue, modulo `p^rel`.
    pub fn unit_residue(&self) -> u64 {
        self.unit
    }

    /// Unit part as a scalar of valuation zero (zero maps to zero).
    pub fn unit_part(&self) -> PAdicScalar {
        if self.is_zero() {
            return *self;
        }
        PAdicScalar {
            val: 0,
            abs: self.abs - self.val,
            ..*self
        }
    }

    fn rel(&self) -> u32 {
        (self.abs - self.val) as u32
    }

    fn from_parts(field: FieldDescriptor, val: i64, unit: u64, rel: u32) -> Self {
        debug_assert!(rel >= 1 && !unit.is_multiple_of(field.p));
        PAdicScalar {
            field,
            val,
            unit: unit % field.pow(rel),
            abs: val + rel as i64,
        }
    }

    fn zero_at(field: FieldDescriptor, abs: i64) -> Self {
        PAdicScalar {
            field,
            val: ZERO_VAL,
            unit: 0,
            abs: abs.min(EXACT),
        }
    }

    /// Decides `v(x) >= k`.
    pub fn has_valuation_at_least(&self, k: i64) -> Result<bool> {
        match self.valuation() {
            Some(v) => Ok(v >= k),
            None if self.abs >= k => Ok(true),
            None => Err(Error::PrecisionLoss {
                needed: k,
                available: self.abs,
            }),
        }
    }

    /// `x mod p^k` for integral `x`, as an integer in `[0, p^k)`.
    pub fn residue(&self, k: u32) -> Result<u64> {
        let k64 = k as i64;
        match self.valuation() {
            None if self.abs >= k64 => Ok(0),
            None => Err(Error::PrecisionLoss {
                needed: k64,
                available: self.abs,
            }),
            Some(v) if v < 0 => Err(Error::NotIntegral),
            Some(v) if v >= k64 => Ok(0),
            Some(v) => {
                if self.abs < k64 {
                    return Err(Error::PrecisionLoss {
                        needed: k64,
                        available: self.abs,
                    });
                }
                let m = self.field.pow(k);
                let u = self.unit % self.field.pow(k - v as u32);
                Ok(((u as u128 * self.field.pow(v as u32) as u128) % m as u128) as u64)
            }
        }
    }

    /// Fractional part `x mod Z_p` as `(numerator, p^e)`.
    pub fn fractional_part(&self) -> Result<(u64, u64)> {
        match self.valuation() {
            None | Some(0..) => {
                if self.is_zero() && self.abs < 0 {
                    return Err(Error::PrecisionLoss {
                        needed: 0,
                        available: self.abs,
                    });
                }
                Ok((0, 1))
            }
            Some(v) => {
                if self.abs < 0 {
                    return Err(Error::PrecisionLoss {
                        needed: 0,
                        available: self.abs,
                    });
                }
                let e = (-v) as u32;
                let den = self.field.pow(e);
                Ok((self.unit % den, den))
            }
        }
    }

    /// Same value at the coarser of the two precisions.
    pub fn same_value(&self, other: &PAdicScalar) -> bool {
        (*self - *other).is_zero()
    }

    /// Unit residue mapped to the symmetric range `(-p^rel/2, p^rel/2]`.
    pub fn signed_unit(&self) -> i128 {
        if self.is_zero() {
            return 0;
        }
        let m = self.field.pow(self.rel()) as i128;
        let u = self.unit as i128;
        if u > m / 2 {
            u - m
        } else {
            u
        }
    }

    /// Approximate real value of the signed digit representative, for display.
    pub fn approx(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        self.signed_unit() as f64 * (self.field.p as f64).powi(self.val as i32)
    }

    pub fn inv(&self) -> Result<PAdicScalar> {
        if self.is_zero() {
            return Err(Error::InverseOfZero);
        }
        let rel = self.rel();
        let m = self.field.pow(rel);
        let u = mod_inverse(self.unit, m).ok_or(Error::InverseOfZero)?;
        Ok(PAdicScalar::from_parts(self.field, -self.val, u, rel))
    }

    pub fn div(&self, other: &PAdicScalar) -> Result<PAdicScalar> {
        Ok(*self * other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<PAdicScalar> {
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

    /// Decides whether `x` is a square modulo `p^m`.
    pub fn is_square_mod(&self, m: i64) -> Result<bool> {
        if self.has_valuation_at_least(m)? {
            return Ok(true);
        }
        let v = self.checked_valuation()?;
        Ok(v % 2 == 0 && legendre((self.unit % self.field.p) as i64, self.field.p) == 1)
    }

    /// Square root by Hensel lifting from the smallest residue root.
    pub fn sqrt(&self) -> Result<PAdicScalar> {
        let v = self.checked_valuation()?;
        let p = self.field.p;
        if v % 2 != 0 {
            return Err(Error::NotASquare);
        }
        let u0 = self.unit % p;
        let root0 = (1..p).find(|r| r * r % p == u0).ok_or(Error::NotASquare)?;
        let rel = self.rel();
        let m = self.field.pow(rel) as u128;
        let target = self.unit as u128 % m;
        let mut w = root0 as u128;
        let mut known = 1u32;
        while known < rel {
            known = (known * 2).min(rel);
            // w <- w - (w^2 - u) / (2w)
            let w2 = w * w % m;
            let diff = (w2 + m - target) % m;
            let inv2w = mod_inverse((2 * w % m) as u64, m as u64).ok_or(Error::NotASquare)? as u128;
            w = (w + m - diff * inv2w % m) % m;
        }
        debug_assert_eq!(w * w % m, target);
        Ok(PAdicScalar::from_parts(self.field, v / 2, w as u64, rel))
    }
}

impl PartialEq for PAdicScalar {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.same_value(other)
    }
}

impl fmt::Debug for PAdicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PAdicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.field.p;
        match self.valuation() {
            None if self.abs >= EXACT => write!(f, "0"),
            None => write!(f, "O({}^{})", p, self.abs),
            Some(v) => write!(
                f,
                "{}*{}^{} + O({}^{})",
                self.signed_unit(),
                p,
                v,
                p,
                self.abs
            ),
        }
    }
}

impl Neg for PAdicScalar {
    type Output = PAdicScalar;
    fn neg(self) -> PAdicScalar {
        if self.is_zero() {
            return self;
        }
        let m = self.field.pow(self.rel());
        PAdicScalar {
            unit: (m - self.unit % m) % m,
            ..self
        }
    }
}

impl Add for PAdicScalar {
    type Output = PAdicScalar;
    fn add(self, o: PAdicScalar) -> PAdicScalar {
        debug_assert_eq!(self.field.p, o.field.p);
        let field = self.field;
        let abs = self.abs.min(o.abs);
        let vmin = self.val.min(o.val);
        if vmin >= abs {
            return PAdicScalar::zero_at(field, abs);
        }
        let r = (abs - vmin) as u32;
        let m = field.pow(r) as u128;
        let term = |x: &PAdicScalar| -> u128 {
            if x.is_zero() {
                return 0;
            }
            let shift = (x.val - vmin) as u32;
            if shift >= r {
                0
            } else {
                (x.unit as u128 % m) * field.pow(shift) as u128 % m
            }
        };
        let s = (term(&self) + term(&o)) % m;
        if s == 0 {
            return PAdicScalar::zero_at(field, abs);
        }
        let mut s = s as u64;
        let mut t = 0u32;
        while s.is_multiple_of(field.p) {
            s /= field.p;
            t += 1;
        }
        PAdicScalar::from_parts(field, vmin + t as i64, s, r - t)
    }
}

impl Sub for PAdicScalar {
    type Output = PAdicScalar;
    fn sub(self, o: PAdicScalar) -> PAdicScalar {
        self + (-o)
    }
}

impl Mul for PAdicScalar {
    type Output = PAdicScalar;
    fn mul(self, o: PAdicScalar) -> PAdicScalar {
        debug_assert_eq!(self.field.p, o.field.p);
        let field = self.field;
        match (self.valuation(), o.valuation()) {
            (Some(v1), Some(v2)) => {
                let rel = self.rel().min(o.rel());
                let m = field.pow(rel) as u128;
                let u = (self.unit as u128 % m) * (o.unit as u128 % m) % m;
                PAdicScalar::from_parts(field, v1 + v2, u as u64, rel)
            }
            (None, Some(v)) => PAdicScalar::zero_at(field, self.abs.saturating_add(v)),
            (Some(v), None) => PAdicScalar::zero_at(field, o.abs.saturating_add(v)),
            (None, None) => PAdicScalar::zero_at(field, self.abs.saturating_add(o.abs)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> FieldDescriptor {
        FieldDescriptor::new(3, 10).unwrap()
    }

    #[test]
    fn rejects_two_and_composites() {
        assert_eq!(FieldDescriptor::new(2, 5), Err(Error::InvalidPrime(2)));
        assert_eq!(FieldDescriptor::new(9, 5), Err(Error::InvalidPrime(9)));
    }

    #[test]
    fn small_integer_arithmetic() {
        let f = f3();
        let two = f.one() + f.one();
        assert_eq!(two, f.int(2));
        assert_eq!(two.valuation(), Some(0));
    }

    #[test]
    fn inverse_of_uniformizer() {
        let f = f3();
        let x = f.int(3).inv().unwrap();
        assert_eq!(x.valuation(), Some(-1));
        assert_eq!(x.unit_residue(), 1);
    }

    #[test]
    fn product_matches_integer_multiplication() {
        let f = f3();
        let x = (f.int(1) + f.int(3)) * (f.int(1) - f.int(3));
        assert_eq!(x.valuation(), Some(0));
        let m = 3u64.pow(10) as i64;
        assert_eq!(x.unit_residue() as i64, (-8i64).rem_euclid(m));
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(f3().zero().inv(), Err(Error::InverseOfZero));
    }

    #[test]
    fn cancellation_reduces_precision() {
        let f = f3();
        let x = f.int(1) + f.uniformizer_pow(5);
        let y = x - f.int(1);
        assert_eq!(y.valuation(), Some(5));
        assert_eq!(y.precision(), 10);
        let w = f.int(1) + f.uniformizer_pow(10) - f.int(1);
        assert!(w.is_zero());
        assert_eq!(w.precision(), 10);
        let z = f.int(5) - f.int(5);
        assert!(z.is_zero());
    }

    #[test]
    fn square_roots_mod_27() {
        let f = f3();
        let x = f.int(7);
        assert!(x.is_square_mod(3).unwrap());
        let r = x.sqrt().unwrap();
        let res = r.residue(3).unwrap();
        assert!(res == 13 || res == 27 - 13);
        assert_eq!(r * r, x);
        assert_eq!(f.one().sqrt().unwrap(), f.one());
        assert!(!f.int(3).is_square_mod(2).unwrap());
        assert_eq!(f.int(3).sqrt(), Err(Error::NotASquare));
    }

    #[test]
    fn fractional_part_of_negative_powers() {
        let f = f3();
        let x = f.rational(1, 3).unwrap();
        assert_eq!(x.fractional_part().unwrap(), (1, 3));
        let y = f.rational(5, 9).unwrap();
        assert_eq!(y.fractional_part().unwrap(), (5, 9));
        assert_eq!(f.int(4).fractional_part().unwrap(), (0, 1));
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(3), 2);
        assert_eq!(primitive_root(5), 2);
        assert_eq!(primitive_root(7), 3);
    }
}
