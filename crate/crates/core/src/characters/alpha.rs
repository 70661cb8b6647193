use crate::error::{Error, Result};
use crate::field::{LocalField, UnitQuotient};
use crate::quadext::{QuadExtDescriptor, QuadExtScalar};

use super::mult::MultChar;

/// The element `α` with `ν(1+u) = ψ_K(α u)` for `v(u) ≥ ⌈c/2⌉`, known modulo
/// `ϖ_K^{ambiguity_level}`.
#[derive(Clone, Copy, Debug)]
pub struct AlphaElement<K: LocalField> {
    pub field: K,
    pub alpha: K::Elem,
    pub conductor: u32,
    pub ambiguity_level: i64,
}

impl<K: LocalField> AlphaElement<K> {
    pub fn valuation(&self) -> i64 {
        self.field.valuation(&self.alpha).expect("alpha is nonzero")
    }

    /// Whether `x` lies in the same class modulo the ambiguity ideal.
    pub fn in_class(&self, x: &K::Elem) -> bool {
        let minus_one = self.field.embed_base(self.field.base().int(-1));
        let diff = self.field.add(x, &self.field.mul(&minus_one, &self.alpha));
        match self.field.valuation(&diff) {
            None => true,
            Some(v) => v >= self.ambiguity_level,
        }
    }

    /// The defining identity on every `u` in the half-conductor domain.
    pub fn check_identity(&self, nu: &MultChar<K>) -> Result<bool> {
        identity_holds(nu, &self.alpha, self.conductor)
    }
}

impl AlphaElement<QuadExtDescriptor> {
    /// Drops the `F`-component when it lies in the ambiguity ideal, leaving
    /// `y√D`.
    pub fn trace_free(&self) -> Result<AlphaElement<QuadExtDescriptor>> {
        let a_part = self.field.embed_base(self.alpha.a);
        let negligible = match a_part.valuation() {
            None => true,
            Some(v) => v >= self.ambiguity_level,
        };
        if !negligible {
            return Err(Error::AlphaNotTraceFree);
        }
        let alpha = self.field.elem(self.field.base().zero(), self.alpha.b);
        Ok(AlphaElement { alpha, ..*self })
    }

    /// `y` in `α = y√D` (requires a trace-free representative).
    pub fn sqrt_d_coefficient(&self) -> Result<crate::padic::PAdicScalar> {
        Ok(self.trace_free()?.alpha.b)
    }
}

/// Domain `{ϖ^{⌈c/2⌉} z : z mod ϖ^{⌊c/2⌋}}` of the defining identity.
fn domain<K: LocalField>(field: K, c: u32) -> Vec<K::Elem> {
    let shift = field.uniformizer_pow(c.div_ceil(2) as i64);
    let k = c / 2;
    (0..field.key_count(k))
        .map(|key| field.mul(&shift, &field.integral_from_key(key, k)))
        .collect()
}

fn identity_holds<K: LocalField>(nu: &MultChar<K>, alpha: &K::Elem, c: u32) -> Result<bool> {
    let field = nu.field();
    let one = field.one();
    for u in domain(field, c) {
        let lhs = nu.eval_unit(&field.add(&one, &u))?;
        let rhs = field.psi(&field.mul(alpha, &u))?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exhaustive search for `α_ν` among `ϖ^{-c+c(ψ)}·w`, `w` a unit modulo
/// `ϖ^{⌊c/2⌋}`. Exactly one class must satisfy the identity.
pub fn alpha_of_char<K: LocalField>(nu: &MultChar<K>) -> Result<AlphaElement<K>> {
    let c = nu.conductor();
    if c < 2 {
        return Err(Error::ConductorTooSmall(c));
    }
    let field = nu.field();
    let c_psi = field.additive_level();
    let v_alpha = -(c as i64) + c_psi;
    let scale = field.uniformizer_pow(v_alpha);
    let candidates = UnitQuotient::get(field, c / 2)?;
    let mut found = None;
    for w in candidates.reps() {
        let alpha = field.mul(&scale, w);
        if identity_holds(nu, &alpha, c)? {
            if found.is_some() {
                return Err(Error::InconsistentTable(
                    "several classes satisfy the defining identity".into(),
                ));
            }
            found = Some(alpha);
        }
    }
    let alpha = found.ok_or(Error::NoSolution)?;
    Ok(AlphaElement {
        field,
        alpha,
        conductor: c,
        ambiguity_level: -(c.div_ceil(2) as i64) + c_psi,
    })
}

/// `α` for a trace-free representative, expressed as `y√D`.
pub fn trace_free_alpha(
    nu: &MultChar<QuadExtDescriptor>,
) -> Result<(AlphaElement<QuadExtDescriptor>, QuadExtScalar)> {
    let a = alpha_of_char(nu)?.trace_free()?;
    Ok((a, a.alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::RationalAngle;
    use crate::padic::FieldDescriptor;

    #[test]
    fn level_two_character_over_base() {
        let f = FieldDescriptor::new(3, 10).unwrap();
        // ν(1+3t) = ψ(t/3), trivial on -1
        let nu = MultChar::from_generators(
            f,
            2,
            &[
                (f.int(-1), RationalAngle::ZERO),
                (f.int(4), RationalAngle::new(2, 3)),
            ],
            RationalAngle::ZERO,
        )
        .unwrap();
        assert_eq!(nu.conductor(), 2);
        let a = alpha_of_char(&nu).unwrap();
        assert_eq!(a.valuation(), -2);
        assert!(a.in_class(&f.rational(1, 9).unwrap()));
        assert!(a.in_class(&f.rational(4, 9).unwrap()));
        assert!(!a.in_class(&f.rational(2, 9).unwrap()));
        assert!(a.check_identity(&nu).unwrap());
        // any member of the class satisfies the identity, others do not
        assert!(identity_holds(&nu, &f.rational(7, 9).unwrap(), 2).unwrap());
        assert!(!identity_holds(&nu, &f.rational(2, 9).unwrap(), 2).unwrap());
    }

    #[test]
    fn unramified_characters_have_no_alpha() {
        let f = FieldDescriptor::new(3, 10).unwrap();
        let nu = MultChar::unramified(f, RationalAngle::half());
        assert_eq!(alpha_of_char(&nu).unwrap_err(), Error::ConductorTooSmall(0));
    }
}
