//! A common interface over `F` and its quadratic extensions, plus finite
//! unit quotients `O^×/U(c)` with canonical representatives.

use std::any::Any;
use std::collections::HashMap;
use std::fmt::Debug;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;

use crate::cyclo::RationalAngle;
use crate::error::{Error, Result};
use crate::padic::{FieldDescriptor, PAdicScalar};
use crate::quadext::{QuadExtDescriptor, QuadExtScalar};

/// Largest unit quotient built without an explicit budget override.
pub const DEFAULT_TABLE_BUDGET: u64 = 1 << 20;

pub trait LocalField: Copy + PartialEq + Debug + Send + Sync + 'static {
    type Elem: Copy + Debug + PartialEq + Send + Sync;

    fn base(&self) -> FieldDescriptor;
    fn one(&self) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn inv(&self, x: &Self::Elem) -> Result<Self::Elem>;
    fn embed_base(&self, x: PAdicScalar) -> Self::Elem;
    /// Galois conjugation (identity on `F`).
    fn conj(&self, x: &Self::Elem) -> Self::Elem;
    /// `ϖ_K^k` for the fixed uniformizer.
    fn uniformizer_pow(&self, k: i64) -> Self::Elem;
    fn valuation(&self, x: &Self::Elem) -> Option<i64>;
    fn ramification(&self) -> u32;
    /// Residue field degree over `F`.
    fn residue_degree(&self) -> u32;
    /// `c(ψ_K)` for `ψ_K = ψ∘Tr` with `ψ` unramified.
    fn additive_level(&self) -> i64;
    /// Number of residue classes of `O_K / ϖ_K^c`.
    fn key_count(&self, c: u32) -> u64;
    /// Canonical key of an integral element modulo `ϖ_K^c`.
    fn integral_key(&self, x: &Self::Elem, c: u32) -> Result<u64>;
    fn integral_from_key(&self, key: u64, c: u32) -> Self::Elem;
    fn is_unit_key(&self, key: u64, c: u32) -> bool;
    /// `ψ(Tr x)` as an angle.
    fn psi(&self, x: &Self::Elem) -> Result<RationalAngle>;
    /// Identifier used to share cached tables between equal fields.
    fn cache_key(&self) -> String;

    fn residue_order(&self) -> u64 {
        self.base().p().pow(self.residue_degree())
    }

    fn checked_valuation(&self, x: &Self::Elem) -> Result<i64> {
        self.valuation(x).ok_or(Error::PrecisionLoss {
            needed: 1,
            available: 0,
        })
    }

    /// `x = ϖ_K^k · u` with `u` a unit.
    fn split(&self, x: &Self::Elem) -> Result<(i64, Self::Elem)> {
        let k = self.checked_valuation(x)?;
        Ok((k, self.mul(x, &self.uniformizer_pow(-k))))
    }

    fn pow(&self, x: &Self::Elem, e: u64) -> Self::Elem {
        let mut acc = self.one();
        let mut b = *x;
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            k >>= 1;
        }
        acc
    }
}

/// Angle of `ψ(x) = exp(-2πi·frac(x))`.
pub fn psi_base(x: &PAdicScalar) -> Result<RationalAngle> {
    let (num, den) = x.fractional_part()?;
    Ok(RationalAngle::new(-(num as i128), den))
}

impl LocalField for FieldDescriptor {
    type Elem = PAdicScalar;

    fn base(&self) -> FieldDescriptor {
        *self
    }
    fn one(&self) -> PAdicScalar {
        FieldDescriptor::one(self)
    }
    fn mul(&self, x: &PAdicScalar, y: &PAdicScalar) -> PAdicScalar {
        *x * *y
    }
    fn add(&self, x: &PAdicScalar, y: &PAdicScalar) -> PAdicScalar {
        *x + *y
    }
    fn inv(&self, x: &PAdicScalar) -> Result<PAdicScalar> {
        x.inv()
    }
    fn embed_base(&self, x: PAdicScalar) -> PAdicScalar {
        x
    }
    fn conj(&self, x: &PAdicScalar) -> PAdicScalar {
        *x
    }
    fn uniformizer_pow(&self, k: i64) -> PAdicScalar {
        FieldDescriptor::uniformizer_pow(self, k)
    }
    fn valuation(&self, x: &PAdicScalar) -> Option<i64> {
        x.valuation()
    }
    fn ramification(&self) -> u32 {
        1
    }
    fn residue_degree(&self) -> u32 {
        1
    }
    fn additive_level(&self) -> i64 {
        0
    }
    fn key_count(&self, c: u32) -> u64 {
        self.p().pow(c)
    }
    fn integral_key(&self, x: &PAdicScalar, c: u32) -> Result<u64> {
        x.residue(c)
    }
    fn integral_from_key(&self, key: u64, _c: u32) -> PAdicScalar {
        self.int(key as i64)
    }
    fn is_unit_key(&self, key: u64, c: u32) -> bool {
        c == 0 || !key.is_multiple_of(self.p())
    }
    fn psi(&self, x: &PAdicScalar) -> Result<RationalAngle> {
        psi_base(x)
    }
    fn cache_key(&self) -> String {
        format!("F:{}:{}", self.p(), self.precision())
    }
}

impl QuadExtDescriptor {
    /// Digits `(a mod p^ka, b mod p^kb)` used for keys at level `c`.
    fn key_split(&self, c: u32) -> (u32, u32) {
        if self.is_ramified() {
            (c.div_ceil(2), c / 2)
        } else {
            (c, c)
        }
    }
}

impl LocalField for QuadExtDescriptor {
    type Elem = QuadExtScalar;

    fn base(&self) -> FieldDescriptor {
        QuadExtDescriptor::base(self)
    }
    fn one(&self) -> QuadExtScalar {
        QuadExtDescriptor::one(self)
    }
    fn mul(&self, x: &QuadExtScalar, y: &QuadExtScalar) -> QuadExtScalar {
        *x * *y
    }
    fn add(&self, x: &QuadExtScalar, y: &QuadExtScalar) -> QuadExtScalar {
        *x + *y
    }
    fn inv(&self, x: &QuadExtScalar) -> Result<QuadExtScalar> {
        x.inv()
    }
    fn embed_base(&self, x: PAdicScalar) -> QuadExtScalar {
        QuadExtDescriptor::embed_base(self, x)
    }
    fn conj(&self, x: &QuadExtScalar) -> QuadExtScalar {
        x.conj()
    }
    fn uniformizer_pow(&self, k: i64) -> QuadExtScalar {
        QuadExtDescriptor::uniformizer_pow(self, k)
    }
    fn valuation(&self, x: &QuadExtScalar) -> Option<i64> {
        x.valuation()
    }
    fn ramification(&self) -> u32 {
        self.ramification_index()
    }
    fn residue_degree(&self) -> u32 {
        if self.is_ramified() {
            1
        } else {
            2
        }
    }
    fn additive_level(&self) -> i64 {
        1 - self.ramification_index() as i64
    }
    fn key_count(&self, c: u32) -> u64 {
        let (ka, kb) = self.key_split(c);
        let p = QuadExtDescriptor::base(self).p();
        p.pow(ka) * p.pow(kb)
    }
    fn integral_key(&self, x: &QuadExtScalar, c: u32) -> Result<u64> {
        let (ka, kb) = self.key_split(c);
        let p = QuadExtDescriptor::base(self).p();
        Ok(x.a.residue(ka)? * p.pow(kb) + x.b.residue(kb)?)
    }
    fn integral_from_key(&self, key: u64, c: u32) -> QuadExtScalar {
        let (_, kb) = self.key_split(c);
        let m = QuadExtDescriptor::base(self).p().pow(kb);
        self.from_ints((key / m) as i64, (key % m) as i64)
    }
    fn is_unit_key(&self, key: u64, c: u32) -> bool {
        if c == 0 {
            return true;
        }
        let (_, kb) = self.key_split(c);
        let p = QuadExtDescriptor::base(self).p();
        let m = p.pow(kb);
        let (a, b) = (key / m, key % m);
        if self.is_ramified() {
            a % p != 0
        } else {
            a % p != 0 || b % p != 0
        }
    }
    fn psi(&self, x: &QuadExtScalar) -> Result<RationalAngle> {
        psi_base(&x.trace())
    }
    fn cache_key(&self) -> String {
        format!(
            "E:{}:{}:{}",
            QuadExtDescriptor::base(self).p(),
            self.d_int(),
            QuadExtDescriptor::base(self).precision()
        )
    }
}

/// `O_K^× / U_K(c)` with canonical representatives in key order.
pub struct UnitQuotient<K: LocalField> {
    field: K,
    level: u32,
    reps: Vec<K::Elem>,
    keys: Vec<u64>,
    index: Vec<u32>,
}

type QuotientCache = HashMap<(String, u32), Arc<dyn Any + Send + Sync>>;

static QUOTIENTS: Lazy<Mutex<QuotientCache>> = Lazy::new(Default::default);

impl<K: LocalField> UnitQuotient<K> {
    /// Builds (or fetches from the process-wide cache) the quotient at level `c`.
    pub fn get(field: K, level: u32) -> Result<Arc<UnitQuotient<K>>> {
        Self::get_with_budget(field, level, DEFAULT_TABLE_BUDGET)
    }

    pub fn get_with_budget(field: K, level: u32, budget: u64) -> Result<Arc<UnitQuotient<K>>> {
        let size = field.key_count(level);
        if size > budget {
            return Err(Error::BudgetExceeded {
                what: "unit quotient",
                size,
                budget,
            });
        }
        let key = (field.cache_key(), level);
        if let Some(q) = QUOTIENTS.lock().expect("quotient cache").get(&key) {
            if let Ok(q) = q.clone().downcast::<UnitQuotient<K>>() {
                return Ok(q);
            }
        }
        let mut reps = Vec::new();
        let mut keys = Vec::new();
        let mut index = vec![u32::MAX; size as usize];
        for k in 0..size {
            if field.is_unit_key(k, level) {
                index[k as usize] = reps.len() as u32;
                reps.push(field.integral_from_key(k, level));
                keys.push(k);
            }
        }
        let q = Arc::new(UnitQuotient {
            field,
            level,
            reps,
            keys,
            index,
        });
        QUOTIENTS
            .lock()
            .expect("quotient cache")
            .insert(key, q.clone());
        Ok(q)
    }

    pub fn field(&self) -> K {
        self.field
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn reps(&self) -> &[K::Elem] {
        &self.reps
    }

    pub fn rep(&self, i: usize) -> K::Elem {
        self.reps[i]
    }

    pub fn key_of(&self, i: usize) -> u64 {
        self.keys[i]
    }

    /// Index of the class of the unit `u`.
    pub fn index_of(&self, u: &K::Elem) -> Result<usize> {
        if self.level == 0 {
            return Ok(0);
        }
        let k = self.field.integral_key(u, self.level)?;
        match self.index[k as usize] {
            u32::MAX => Err(Error::NotIntegral),
            i => Ok(i as usize),
        }
    }

    pub fn identity_index(&self) -> usize {
        self.index_of(&self.field.one()).expect("1 is a unit")
    }

    /// Whether `u ≡ 1 mod ϖ^k` for the class `i` (with `k ≤ level`).
    pub fn is_in_congruence_subgroup(&self, i: usize, k: u32) -> bool {
        if k == 0 {
            return true;
        }
        let one = self
            .field
            .integral_key(&self.field.one(), k)
            .expect("1 is integral");
        self.field
            .integral_key(&self.reps[i], k)
            .expect("representatives are integral")
            == one
    }

    pub fn mul_index(&self, i: usize, j: usize) -> usize {
        let prod = self.field.mul(&self.reps[i], &self.reps[j]);
        self.index_of(&prod).expect("product of units is a unit")
    }

    /// Group order `(q-1)q^{c-1}` (1 at level 0).
    pub fn expected_order(&self) -> u64 {
        if self.level == 0 {
            1
        } else {
            let q = self.field.residue_order();
            (q - 1) * q.pow(self.level - 1)
        }
    }
}
