//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! Values are stored on the power basis `1, ζ, …, ζ^{φ(N)-1}` with a common
//! integer denominator, reduced modulo the `N`-th cyclotomic polynomial so
//! that equality is coefficient equality.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;

use crate::error::{Error, Result};

/// A fraction modulo 1, the additive avatar of a root of unity.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RationalAngle {
    num: u64,
    den: u64,
}

impl RationalAngle {
    pub const ZERO: RationalAngle = RationalAngle { num: 0, den: 1 };

    pub fn new(num: i128, den: u64) -> RationalAngle {
        assert!(den > 0, "angle denominator must be positive");
        let n = num.rem_euclid(den as i128) as u64;
        let g = n.gcd(&den);
        RationalAngle {
            num: n / g,
            den: den / g,
        }
    }

    pub fn half() -> RationalAngle {
        RationalAngle::new(1, 2)
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn times(&self, k: i64) -> RationalAngle {
        RationalAngle::new(self.num as i128 * k as i128, self.den)
    }

    /// All `j` with `j·k ≡ self`, i.e. the `k` solutions `(self + i)/k`.
    pub fn divide(&self, k: u64) -> impl Iterator<Item = RationalAngle> + '_ {
        (0..k).map(move |i| {
            RationalAngle::new(
                self.num as i128 + i as i128 * self.den as i128,
                self.den * k,
            )
        })
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Add for RationalAngle {
    type Output = RationalAngle;
    fn add(self, o: RationalAngle) -> RationalAngle {
        let l = self.den.lcm(&o.den);
        RationalAngle::new(
            (self.num * (l / self.den)) as i128 + (o.num * (l / o.den)) as i128,
            l,
        )
    }
}

impl Neg for RationalAngle {
    type Output = RationalAngle;
    fn neg(self) -> RationalAngle {
        RationalAngle::new(-(self.num as i128), self.den)
    }
}

impl Sub for RationalAngle {
    type Output = RationalAngle;
    fn sub(self, o: RationalAngle) -> RationalAngle {
        self + (-o)
    }
}

impl fmt::Debug for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl serde::Serialize for RationalAngle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `{order, coeffs}` with coefficients as reduced fraction strings in the
/// power basis of `ζ_order`.
impl serde::Serialize for CycloNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let coeffs: Vec<String> = self.coeffs().iter().map(|c| c.to_string()).collect();
        let mut st = s.serialize_struct("CycloNumber", 2)?;
        st.serialize_field("order", &self.order)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

impl FromStr for RationalAngle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad angle '{s}'"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: i128 = n.trim().parse().map_err(|_| bad())?;
                let d: u64 = d.trim().parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                Ok(RationalAngle::new(n, d))
            }
            None => {
                let n: i128 = s.parse().map_err(|_| bad())?;
                Ok(RationalAngle::new(n, 1))
            }
        }
    }
}

static CYCLOTOMIC: Lazy<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = Lazy::new(Default::default);

/// Coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<i64>> {
    if let Some(p) = CYCLOTOMIC.lock().expect("cyclotomic cache").get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let div = cyclotomic_polynomial(d);
            num = poly_div_exact(&num, &div);
        }
    }
    let arc = Arc::new(num);
    CYCLOTOMIC
        .lock()
        .expect("cyclotomic cache")
        .insert(n, arc.clone());
    arc
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut r = num.to_vec();
    let dn = den.len() - 1;
    let mut q = vec![0i64; r.len() - dn];
    for k in (0..q.len()).rev() {
        let c = r[k + dn];
        q[k] = c;
        if c != 0 {
            for (i, &d) in den.iter().enumerate() {
                r[k + i] -= c * d;
            }
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    q
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            while n.is_multiple_of(d) {
                n /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Reduce an integer vector indexed by exponents (any length) into the power
/// basis of `Q(ζ_n)`.
fn reduce_big(n: u64, v: Vec<BigInt>) -> Vec<BigInt> {
    let phi_poly = cyclotomic_polynomial(n);
    let phi = phi_poly.len() - 1;
    let mut folded = vec![BigInt::zero(); n as usize];
    for (k, c) in v.into_iter().enumerate() {
        if !c.is_zero() {
            folded[k % n as usize] += c;
        }
    }
    for k in (phi..n as usize).rev() {
        if folded[k].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut folded[k]);
        for (i, &d) in phi_poly.iter().enumerate().take(phi) {
            if d != 0 {
                folded[k - phi + i] -= &c * d;
            }
        }
    }
    folded.truncate(phi);
    folded
}

/// Same reduction on machine integers, used for angle histograms.
fn reduce_i128(n: u64, mut folded: Vec<i128>) -> Vec<i128> {
    let phi_poly = cyclotomic_polynomial(n);
    let phi = phi_poly.len() - 1;
    debug_assert_eq!(folded.len(), n as usize);
    for k in (phi..n as usize).rev() {
        let c = folded[k];
        if c == 0 {
            continue;
        }
        folded[k] = 0;
        for (i, &d) in phi_poly.iter().enumerate().take(phi) {
            folded[k - phi + i] -= c * d as i128;
        }
    }
    folded.truncate(phi);
    folded
}

/// Exact element of a cyclotomic field.
#[derive(Clone)]
pub struct CycloNumber {
    order: u64,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycloNumber {
    fn normalize(mut self) -> CycloNumber {
        if self.den.is_negative() {
            self.den = -self.den;
            for c in &mut self.num {
                *c = -c.clone();
            }
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() && !g.is_zero() {
            for c in &mut self.num {
                *c /= &g;
            }
            self.den /= &g;
        }
        if self.order > 1 && self.num.iter().skip(1).all(|c| c.is_zero()) {
            let c0 = self.num.first().cloned().unwrap_or_default();
            self.order = 1;
            self.num = vec![c0];
        }
        if self.num.iter().all(|c| c.is_zero()) {
            self.den = BigInt::one();
        }
        self
    }

    pub fn from_rational(r: BigRational) -> CycloNumber {
        CycloNumber {
            order: 1,
            num: vec![r.numer().clone()],
            den: r.denom().clone(),
        }
        .normalize()
    }

    pub fn from_int(n: i64) -> CycloNumber {
        CycloNumber::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> CycloNumber {
        CycloNumber::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn zero() -> CycloNumber {
        CycloNumber::from_int(0)
    }

    pub fn one() -> CycloNumber {
        CycloNumber::from_int(1)
    }

    /// `ζ_den^num`.
    pub fn from_angle(a: RationalAngle) -> CycloNumber {
        let n = a.den();
        let mut v = vec![BigInt::zero(); n as usize];
        v[a.num() as usize] = BigInt::one();
        CycloNumber {
            order: n,
            num: reduce_big(n, v),
            den: BigInt::one(),
        }
        .normalize()
    }

    /// `Σ_k counts[k]·ζ_n^k / den`, with the reduction done in machine integers.
    pub fn from_histogram(n: u64, counts: Vec<i128>, den: BigInt) -> CycloNumber {
        let reduced = reduce_i128(n, counts);
        CycloNumber {
            order: n,
            num: reduced.into_iter().map(BigInt::from).collect(),
            den,
        }
        .normalize()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|c| BigRational::new(c.clone(), self.den.clone()))
            .collect()
    }

    /// The value as a rational, if it is one.
    pub fn as_rational(&self) -> Option<BigRational> {
        (self.order == 1).then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    fn lift(&self, m: u64) -> CycloNumber {
        if m == self.order {
            return self.clone();
        }
        let step = (m / self.order) as usize;
        let mut v = vec![BigInt::zero(); m as usize];
        for (k, c) in self.num.iter().enumerate() {
            v[k * step] = c.clone();
        }
        CycloNumber {
            order: m,
            num: reduce_big(m, v),
            den: self.den.clone(),
        }
    }

    fn merged_order(&self, o: &CycloNumber) -> u64 {
        self.order.lcm(&o.order)
    }

    /// Fails when the order of the result would exceed `cap`.
    pub fn check_cap(&self, cap: u64) -> Result<()> {
        if self.order > cap {
            return Err(Error::OrderBudgetExceeded {
                order: self.order,
                cap,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, o: &CycloNumber, cap: u64) -> Result<CycloNumber> {
        let m = self.merged_order(o);
        if m > cap {
            return Err(Error::OrderBudgetExceeded { order: m, cap });
        }
        Ok(self.clone() + o.clone())
    }

    pub fn try_mul(&self, o: &CycloNumber, cap: u64) -> Result<CycloNumber> {
        let m = self.merged_order(o);
        if m > cap {
            return Err(Error::OrderBudgetExceeded { order: m, cap });
        }
        Ok(self.clone() * o.clone())
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> CycloNumber {
        let n = self.order as usize;
        let mut v = vec![BigInt::zero(); n];
        for (k, c) in self.num.iter().enumerate() {
            v[(n - k) % n] = c.clone();
        }
        CycloNumber {
            order: self.order,
            num: reduce_big(self.order, v),
            den: self.den.clone(),
        }
        .normalize()
    }

    pub fn scale(&self, r: &BigRational) -> CycloNumber {
        CycloNumber {
            order: self.order,
            num: self.num.iter().map(|c| c * r.numer()).collect(),
            den: &self.den * r.denom(),
        }
        .normalize()
    }

    /// `x·conj(x)` when it is rational.
    pub fn abs_squared(&self) -> Result<BigRational> {
        (self.clone() * self.conj())
            .as_rational()
            .ok_or(Error::NotRational)
    }

    /// The angle `a` with `x = ζ^a`, if `x` is a root of unity.
    pub fn as_root_of_unity(&self) -> Result<RationalAngle> {
        let m = self.order.lcm(&2);
        let (re, im) = self.approx();
        if ((re * re + im * im) - 1.0).abs() > 1e-6 {
            return Err(Error::NotRootOfUnity);
        }
        let guess = (im.atan2(re) / std::f64::consts::TAU * m as f64).round() as i128;
        for k in [guess, guess - 1, guess + 1] {
            let a = RationalAngle::new(k, m);
            if CycloNumber::from_angle(a) == *self {
                return Ok(a);
            }
        }
        Err(Error::NotRootOfUnity)
    }

    /// Complex approximation.
    pub fn approx(&self) -> (f64, f64) {
        let d = bigint_to_f64(&self.den);
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = std::f64::consts::TAU * k as f64 / self.order as f64;
            let cf = bigint_to_f64(c) / d;
            re += cf * t.cos();
            im += cf * t.sin();
        }
        (re, im)
    }

    /// Positive square root of the odd prime `p`, via the quadratic Gauss sum.
    pub fn sqrt_prime(p: u64) -> CycloNumber {
        let mut g = CycloNumber::zero();
        for x in 1..p {
            let term = CycloNumber::from_angle(RationalAngle::new(x as i128, p));
            if crate::padic::legendre(x as i64, p) == 1 {
                g = g + term;
            } else {
                g = g - term;
            }
        }
        if p % 4 == 1 {
            g
        } else {
            // g = i·√p
            g * CycloNumber::from_angle(RationalAngle::new(3, 4))
        }
    }
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    x.to_string().parse::<f64>().unwrap_or(f64::NAN)
}

impl PartialEq for CycloNumber {
    fn eq(&self, o: &CycloNumber) -> bool {
        if self.order == o.order {
            return self.num == o.num && self.den == o.den;
        }
        let m = self.merged_order(o);
        let a = self.lift(m).normalize();
        let b = o.lift(m).normalize();
        a.order == b.order && a.num == b.num && a.den == b.den
    }
}

impl Eq for CycloNumber {}

impl Add for CycloNumber {
    type Output = CycloNumber;
    // common denominator
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, o: CycloNumber) -> CycloNumber {
        let m = self.merged_order(&o);
        let a = self.lift(m);
        let b = o.lift(m);
        let den = &a.den * &b.den;
        let num = a
            .num
            .iter()
            .zip(&b.num)
            .map(|(x, y)| x * &b.den + y * &a.den)
            .collect();
        CycloNumber { order: m, num, den }.normalize()
    }
}

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber {
            num: self.num.into_iter().map(|c| -c).collect(),
            ..self
        }
    }
}

impl Sub for CycloNumber {
    type Output = CycloNumber;
    fn sub(self, o: CycloNumber) -> CycloNumber {
        self + (-o)
    }
}

impl Mul for CycloNumber {
    type Output = CycloNumber;
    fn mul(self, o: CycloNumber) -> CycloNumber {
        let m = self.merged_order(&o);
        let a = self.lift(m);
        let b = o.lift(m);
        let mut v = vec![BigInt::zero(); (a.num.len() + b.num.len()).max(1)];
        for (i, x) in a.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.num.iter().enumerate() {
                if !y.is_zero() {
                    v[i + j] += x * y;
                }
            }
        }
        CycloNumber {
            order: m,
            num: reduce_big(m, v),
            den: a.den * b.den,
        }
        .normalize()
    }
}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z{}", self.order)?,
                _ => write!(f, "({c})z{}^{k}", self.order)?,
            }
        }
        Ok(())
    }
}

/// Default bound on cyclotomic orders produced by sums.
pub const DEFAULT_ORDER_CAP: u64 = 1 << 16;

/// Accumulates integer multiplicities of roots of unity, keyed by angle.
#[derive(Clone, Debug, Default)]
pub struct AngleSum {
    counts: HashMap<RationalAngle, i128>,
}

impl AngleSum {
    pub fn new() -> AngleSum {
        AngleSum::default()
    }

    pub fn add(&mut self, a: RationalAngle, mult: i128) {
        *self.counts.entry(a).or_insert(0) += mult;
    }

    pub fn merge(&mut self, other: &AngleSum) {
        for (a, c) in &other.counts {
            self.add(*a, *c);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.counts.values().all(|c| *c == 0)
    }

    /// Lcm of the denominators present.
    pub fn order(&self) -> u64 {
        self.counts
            .iter()
            .filter(|(_, c)| **c != 0)
            .fold(1u64, |m, (a, _)| m.lcm(&a.den()))
    }

    /// `Σ mult·ζ^angle / den`, failing if the order would exceed `cap`.
    pub fn finish(&self, den: BigInt, cap: u64) -> Result<CycloNumber> {
        let n = self.order();
        if n > cap {
            return Err(Error::OrderBudgetExceeded { order: n, cap });
        }
        let mut hist = vec![0i128; n as usize];
        for (a, c) in &self.counts {
            if *c != 0 {
                hist[(a.num() * (n / a.den())) as usize] += c;
            }
        }
        Ok(CycloNumber::from_histogram(n, hist, den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: i128, d: u64) -> CycloNumber {
        CycloNumber::from_angle(RationalAngle::new(n, d))
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(500).len() as u64 - 1, euler_phi(500));
    }

    #[test]
    fn cube_roots_sum_to_minus_one() {
        assert_eq!(z(1, 3) + z(2, 3), CycloNumber::from_int(-1));
    }

    #[test]
    fn conjugate_of_i() {
        assert_eq!(z(1, 4).conj(), -z(1, 4));
        assert_eq!(z(1, 4).conj(), z(3, 4));
    }

    #[test]
    fn unit_norm_of_omega() {
        let w = z(1, 3);
        assert_eq!(w.clone() * w.conj(), CycloNumber::one());
        assert_eq!(z(1, 4), CycloNumber::from_angle(RationalAngle::new(1, 4)));
    }

    #[test]
    fn abs_squared_examples() {
        let one_plus_i = CycloNumber::one() + z(1, 4);
        assert_eq!(
            one_plus_i.abs_squared().unwrap(),
            BigRational::from_integer(2.into())
        );
        let one_plus_w = CycloNumber::one() + z(1, 3);
        assert_eq!(
            one_plus_w.abs_squared().unwrap(),
            BigRational::from_integer(1.into())
        );
        assert_eq!(
            z(5, 12).abs_squared().unwrap(),
            BigRational::from_integer(1.into())
        );
    }

    #[test]
    fn mixed_orders_compare_after_lifting() {
        // ζ_12^4 = ζ_3
        assert_eq!(z(4, 12), z(1, 3));
        assert_eq!(
            (z(1, 4) * z(1, 3)).as_root_of_unity().unwrap(),
            RationalAngle::new(7, 12)
        );
    }

    #[test]
    fn square_roots_of_primes() {
        for p in [3u64, 5, 7, 11, 13] {
            let r = CycloNumber::sqrt_prime(p);
            assert_eq!(r.clone() * r.clone(), CycloNumber::from_int(p as i64));
            let (re, im) = r.approx();
            assert!(re > 0.0 && im.abs() < 1e-9);
        }
    }

    #[test]
    fn histogram_matches_sum_of_roots() {
        let counts = vec![1i128, 2, 0, -1, 0, 3];
        let h = CycloNumber::from_histogram(6, counts.clone(), BigInt::from(4));
        let mut s = CycloNumber::zero();
        for (k, c) in counts.iter().enumerate() {
            s = s + z(k as i128, 6) * CycloNumber::from_int(*c as i64);
        }
        assert_eq!(h, s * CycloNumber::from_ratio(1, 4));
    }

    #[test]
    fn cap_is_enforced() {
        let a = z(1, 5);
        let b = z(1, 7);
        assert_eq!(
            a.try_mul(&b, 30),
            Err(Error::OrderBudgetExceeded { order: 35, cap: 30 })
        );
        assert!(a.try_add(&b, 35).is_ok());
    }

    #[test]
    fn angle_arithmetic() {
        let a: RationalAngle = "2/3".parse().unwrap();
        assert_eq!(a + a, RationalAngle::new(1, 3));
        assert_eq!(-a, RationalAngle::new(1, 3));
        assert_eq!(a.times(3), RationalAngle::ZERO);
        assert_eq!(RationalAngle::new(-1, 3), a);
    }
}
