use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use crate::cyclo::{CycloNumber, RationalAngle};
use crate::error::{Error, Result};
use crate::field::{LocalField, UnitQuotient};
use crate::padic::FieldDescriptor;

/// A multiplicative character of `K^×` trivial on `U_K(level)`, stored as a
/// value table on `O_K^×/U_K(level)` and its value at the fixed uniformizer.
#[derive(Clone)]
pub struct MultChar<K: LocalField> {
    quotient: Arc<UnitQuotient<K>>,
    table: Vec<RationalAngle>,
    unif: RationalAngle,
}

impl<K: LocalField> fmt::Debug for MultChar<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "MultChar({:?}, level {}, conductor {}, unif {})",
            self.field(),
            self.level(),
            self.conductor(),
            self.unif
        )
    }
}

impl<K: LocalField> PartialEq for MultChar<K> {
    fn eq(&self, other: &Self) -> bool {
        if self.field() != other.field() || self.unif != other.unif {
            return false;
        }
        let level = self.level().max(other.level());
        match (self.at_level(level), other.at_level(level)) {
            (Ok(a), Ok(b)) => a.table == b.table,
            _ => false,
        }
    }
}

impl<K: LocalField> MultChar<K> {
    pub fn trivial(field: K) -> MultChar<K> {
        let quotient = UnitQuotient::get(field, 0).expect("level-0 quotient");
        MultChar {
            quotient,
            table: vec![RationalAngle::ZERO],
            unif: RationalAngle::ZERO,
        }
    }

    /// Unramified character with the given uniformizer value.
    pub fn unramified(field: K, unif: RationalAngle) -> MultChar<K> {
        MultChar {
            unif,
            ..MultChar::trivial(field)
        }
    }

    /// Wraps a full value table, verifying the homomorphism property.
    pub fn from_table(
        quotient: Arc<UnitQuotient<K>>,
        table: Vec<RationalAngle>,
        unif: RationalAngle,
    ) -> Result<MultChar<K>> {
        if table.len() != quotient.len() {
            return Err(Error::InconsistentTable(format!(
                "table has {} entries, quotient has {}",
                table.len(),
                quotient.len()
            )));
        }
        let chi = MultChar {
            quotient,
            table,
            unif,
        };
        chi.check_homomorphism()?;
        Ok(chi)
    }

    pub(crate) fn from_table_unchecked(
        quotient: Arc<UnitQuotient<K>>,
        table: Vec<RationalAngle>,
        unif: RationalAngle,
    ) -> MultChar<K> {
        debug_assert_eq!(table.len(), quotient.len());
        MultChar {
            quotient,
            table,
            unif,
        }
    }

    /// Extends generator values to the whole quotient by walking its Cayley
    /// graph. Fails if the values are inconsistent or do not generate.
    pub fn from_generators(
        field: K,
        level: u32,
        gens: &[(K::Elem, RationalAngle)],
        unif: RationalAngle,
    ) -> Result<MultChar<K>> {
        let quotient = UnitQuotient::get(field, level)?;
        let mut gen_idx = Vec::with_capacity(gens.len());
        for (g, a) in gens {
            let i = quotient
                .index_of(g)
                .map_err(|_| Error::InconsistentTable(format!("generator {g:?} is not a unit")))?;
            gen_idx.push((i, *a));
        }
        let n = quotient.len();
        let mut table: Vec<Option<RationalAngle>> = vec![None; n];
        let start = quotient.identity_index();
        table[start] = Some(RationalAngle::ZERO);
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let vi = table[i].expect("visited");
            for &(g, a) in &gen_idx {
                let j = quotient.mul_index(i, g);
                let vj = vi + a;
                match table[j] {
                    None => {
                        table[j] = Some(vj);
                        queue.push_back(j);
                    }
                    Some(old) if old != vj => {
                        return Err(Error::InconsistentTable(format!(
                            "class of {:?} receives both {old} and {vj}",
                            quotient.rep(j)
                        )));
                    }
                    Some(_) => {}
                }
            }
        }
        let table: Vec<RationalAngle> = table
            .into_iter()
            .map(|v| {
                v.ok_or_else(|| {
                    Error::InconsistentTable("generators do not span the quotient".into())
                })
            })
            .collect::<Result<_>>()?;
        Ok(MultChar {
            quotient,
            table,
            unif,
        })
    }

    pub fn field(&self) -> K {
        self.quotient.field()
    }

    /// Level of the stored table (an upper bound for the conductor).
    pub fn level(&self) -> u32 {
        self.quotient.level()
    }

    pub fn quotient(&self) -> &Arc<UnitQuotient<K>> {
        &self.quotient
    }

    pub fn table(&self) -> &[RationalAngle] {
        &self.table
    }

    pub fn unif_value(&self) -> RationalAngle {
        self.unif
    }

    pub fn eval_unit(&self, u: &K::Elem) -> Result<RationalAngle> {
        Ok(self.table[self.quotient.index_of(u)?])
    }

    pub fn eval(&self, x: &K::Elem) -> Result<RationalAngle> {
        let field = self.field();
        let (k, u) = field.split(x)?;
        Ok(self.unif.times(k) + self.eval_unit(&u)?)
    }

    pub fn value(&self, x: &K::Elem) -> Result<CycloNumber> {
        Ok(CycloNumber::from_angle(self.eval(x)?))
    }

    /// Smallest `c` with the character trivial on `U_K(c)`.
    pub fn conductor(&self) -> u32 {
        (0..=self.level())
            .find(|&c| {
                self.table
                    .iter()
                    .enumerate()
                    .all(|(i, a)| a.is_zero() || !self.quotient.is_in_congruence_subgroup(i, c))
            })
            .unwrap_or(self.level())
    }

    pub fn is_trivial(&self) -> bool {
        self.unif.is_zero() && self.table.iter().all(|a| a.is_zero())
    }

    /// Same character tabulated on `O^×/U(level)`; lowering requires the
    /// conductor to fit.
    pub fn at_level(&self, level: u32) -> Result<MultChar<K>> {
        if level == self.level() {
            return Ok(self.clone());
        }
        if level < self.level() && self.conductor() > level {
            return Err(Error::InconsistentTable(format!(
                "conductor {} exceeds requested level {level}",
                self.conductor()
            )));
        }
        let quotient = UnitQuotient::get(self.field(), level)?;
        let table = quotient
            .reps()
            .iter()
            .map(|r| self.eval_unit(r))
            .collect::<Result<Vec<_>>>()?;
        Ok(MultChar {
            quotient,
            table,
            unif: self.unif,
        })
    }

    /// Retabulated at its own conductor.
    pub fn minimal(&self) -> MultChar<K> {
        self.at_level(self.conductor())
            .expect("conductor level is valid")
    }

    pub fn product(&self, other: &MultChar<K>) -> Result<MultChar<K>> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        let level = self.level().max(other.level());
        let a = self.at_level(level)?;
        let b = other.at_level(level)?;
        let table = a.table.iter().zip(&b.table).map(|(x, y)| *x + *y).collect();
        Ok(MultChar {
            quotient: a.quotient,
            table,
            unif: a.unif + b.unif,
        })
    }

    pub fn inverse(&self) -> MultChar<K> {
        MultChar {
            quotient: self.quotient.clone(),
            table: self.table.iter().map(|a| -*a).collect(),
            unif: -self.unif,
        }
    }

    /// `x ↦ χ(x̄)`.
    pub fn bar_conjugate(&self) -> MultChar<K> {
        let field = self.field();
        let table = self
            .quotient
            .reps()
            .iter()
            .map(|r| self.eval_unit(&field.conj(r)).expect("conjugate of a unit"))
            .collect();
        let unif = self
            .eval(&field.conj(&field.uniformizer_pow(1)))
            .expect("uniformizer");
        MultChar {
            quotient: self.quotient.clone(),
            table,
            unif,
        }
    }

    /// Restriction to `F^×`.
    pub fn restrict_to_base(&self) -> Result<MultChar<FieldDescriptor>> {
        let field = self.field();
        let base = field.base();
        let level = self.level().div_ceil(field.ramification());
        let quotient = UnitQuotient::get(base, level)?;
        let table = quotient
            .reps()
            .iter()
            .map(|r| self.eval_unit(&field.embed_base(*r)))
            .collect::<Result<Vec<_>>>()?;
        let unif = self.eval(&field.embed_base(base.uniformizer()))?;
        Ok(MultChar {
            quotient,
            table,
            unif,
        })
    }

    /// Exhaustive check of `χ(xy) = χ(x) + χ(y)` on the table.
    pub fn check_homomorphism(&self) -> Result<()> {
        let n = self.quotient.len();
        for i in 0..n {
            for j in i..n {
                let k = self.quotient.mul_index(i, j);
                if self.table[k] != self.table[i] + self.table[j] {
                    return Err(Error::InconsistentTable(format!(
                        "not multiplicative at {:?} * {:?}",
                        self.quotient.rep(i),
                        self.quotient.rep(j)
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadext::QuadExtDescriptor;

    fn e3() -> QuadExtDescriptor {
        QuadExtDescriptor::new(FieldDescriptor::new(3, 12).unwrap(), -3).unwrap()
    }

    fn a(n: i128, d: u64) -> RationalAngle {
        RationalAngle::new(n, d)
    }

    fn theta3() -> MultChar<QuadExtDescriptor> {
        let e = e3();
        MultChar::from_generators(
            e,
            4,
            &[
                (e.from_ints(-1, 0), a(1, 2)),
                (e.from_ints(1, 1), a(2, 3)),
                (e.from_ints(1, -1), a(1, 3)),
                (e.from_ints(1, 3), a(1, 3)),
            ],
            a(1, 4),
        )
        .unwrap()
    }

    #[test]
    fn trivial_character_has_conductor_zero() {
        assert_eq!(MultChar::trivial(e3()).conductor(), 0);
    }

    #[test]
    fn generator_table_extends_to_a_homomorphism() {
        let t = theta3();
        t.check_homomorphism().unwrap();
        assert_eq!(t.conductor(), 4);
        assert_eq!(t.eval(&e3().sqrt_d()).unwrap(), a(1, 4));
        assert_eq!(t.eval(&e3().from_ints(-3, 0)).unwrap(), a(1, 2));
        assert_eq!(t.eval(&e3().from_ints(3, 0)).unwrap(), RationalAngle::ZERO);
    }

    #[test]
    fn inconsistent_generators_are_rejected() {
        let e = e3();
        let r =
            MultChar::from_generators(e, 1, &[(e.from_ints(-1, 0), a(1, 3))], RationalAngle::ZERO);
        assert!(matches!(r, Err(Error::InconsistentTable(_))));
        let r =
            MultChar::from_generators(e, 2, &[(e.from_ints(-1, 0), a(1, 2))], RationalAngle::ZERO);
        assert!(matches!(r, Err(Error::InconsistentTable(_))));
    }

    #[test]
    fn product_with_inverse_is_trivial() {
        let t = theta3();
        assert!(t.product(&t.inverse()).unwrap().is_trivial());
        assert_eq!(t.product(&MultChar::trivial(e3())).unwrap(), t);
    }

    #[test]
    fn conjugation_is_an_involution() {
        let t = theta3();
        assert_eq!(t.bar_conjugate().bar_conjugate(), t);
        let e = e3();
        let x = e.from_ints(1, 1);
        assert_eq!(
            t.bar_conjugate().eval(&x).unwrap(),
            t.eval(&x.conj()).unwrap()
        );
    }

    #[test]
    fn level_changes_preserve_values() {
        let t = theta3();
        let up = t.at_level(6).unwrap();
        assert_eq!(up, t);
        assert_eq!(up.conductor(), 4);
        assert!(t.at_level(3).is_err());
        let restricted = t.restrict_to_base().unwrap();
        assert_eq!(restricted.level(), 2);
    }
}
