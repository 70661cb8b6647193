use crate::characters::{alpha_of_char, AlphaElement, MultChar};
use crate::error::{Error, Result};
use crate::padic::PAdicScalar;
use crate::quadext::{Mat2, QuadExtDescriptor, QuadExtScalar};

use super::lattice::OrderLattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum CaseTag {
    /// `e = 2`, `c(θ) = 2n`, `c(π) = 2n + 1`.
    Case1,
    /// `e = 1`, `c(θ) = 2n`, `c(π) = 4n`.
    Case2,
    /// `e = 1`, `c(θ) = 2n + 1`, `c(π) = 4n + 2`.
    Case3,
}

/// Everything the matrix coefficient and the period engine need from `θ`.
///
/// `L = F(√D)` is re-identified with `F(√D′)` through `√D′ = s·√D`, where
/// `√D′ = 1/(α_θ ϖ_L^{c(θ)})`; `L` then sits in `M_2(F)` by the standard
/// embedding with respect to `D′`.
#[derive(Clone, Debug)]
pub struct SupercuspidalData {
    pub l: QuadExtDescriptor,
    pub theta: MultChar<QuadExtDescriptor>,
    pub alpha: AlphaElement<QuadExtDescriptor>,
    pub s: PAdicScalar,
    pub d_prime: PAdicScalar,
    pub c_theta: u32,
    pub n: u32,
    pub c_pi: u32,
    pub case: CaseTag,
    pub lattice: OrderLattice,
    pub alpha_matrix: Mat2,
}

/// Smallest working precision accepted for a character of conductor `c`.
pub fn required_precision(c: u32) -> u32 {
    2 * c + 4
}

/// Default working precision for a character of conductor `c`.
pub fn default_precision(c: u32) -> u32 {
    2 * c + 6
}

impl SupercuspidalData {
    pub fn classify(theta: &MultChar<QuadExtDescriptor>) -> Result<SupercuspidalData> {
        Self::classify_with_alpha(theta, None)
    }

    /// As [`classify`](Self::classify), optionally pinning the trace-free
    /// representative `α = y√D` (it must lie in the class found by search).
    pub fn classify_with_alpha(
        theta: &MultChar<QuadExtDescriptor>,
        alpha_override: Option<QuadExtScalar>,
    ) -> Result<SupercuspidalData> {
        let l = theta.field();
        let f = l.base();
        let c = theta.conductor();
        if c < 2 {
            return Err(Error::ConductorTooSmall(c));
        }
        f.require_precision(required_precision(c))?;
        let e = l.ramification_index();
        let n = c / 2;
        let (case, c_pi) = match (e, c % 2) {
            (2, 0) => (CaseTag::Case1, 2 * n + 1),
            (1, 0) => (CaseTag::Case2, 4 * n),
            (1, _) => (CaseTag::Case3, 4 * n + 2),
            _ => return Err(Error::UnsupportedCase("ramified L with odd c(θ)".into())),
        };
        let searched = alpha_of_char(theta)?;
        let mut alpha = searched.trace_free()?;
        if let Some(a) = alpha_override {
            if !a.a.is_zero() || !searched.in_class(&a) {
                return Err(Error::UnsupportedCase(
                    "α override is not a trace-free member of the class".into(),
                ));
            }
            alpha.alpha = a;
        }
        let y = alpha.alpha.b;
        let d = l.d();
        // ϖ_L^{c(θ)}: D^n when ramified, ϖ^c otherwise
        let unif_pow = if e == 2 {
            d.pow(n as i64)?
        } else {
            f.uniformizer_pow(c as i64)
        };
        let s = (y * d * unif_pow).inv()?;
        let d_prime = s * s * d;
        let alpha_matrix = Mat2::new(f.zero(), y * s.inv()?, y * s * d, f.zero());
        Ok(SupercuspidalData {
            l,
            theta: theta.clone(),
            alpha,
            s,
            d_prime,
            c_theta: c,
            n,
            c_pi,
            case,
            lattice: OrderLattice::new(e),
            alpha_matrix,
        })
    }

    pub fn e(&self) -> u32 {
        self.lattice.e()
    }

    /// `√D′` as an element of `L = F(√D)`.
    pub fn sqrt_d_prime(&self) -> QuadExtScalar {
        self.l.sqrt_d().scale(self.s)
    }

    /// Embedding of `L` attached to `D′`.
    pub fn embed_l(&self, x: &QuadExtScalar) -> Result<Mat2> {
        x.embed_scaled(self.s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::RationalAngle;
    use crate::padic::FieldDescriptor;

    fn a(n: i128, d: u64) -> RationalAngle {
        RationalAngle::new(n, d)
    }

    fn theta_big(p: u64) -> MultChar<QuadExtDescriptor> {
        let e = QuadExtDescriptor::new(FieldDescriptor::new(p, 14).unwrap(), -3).unwrap();
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
    fn case_one_conductor_five() {
        let d = SupercuspidalData::classify(&theta_big(3)).unwrap();
        assert_eq!(d.case, CaseTag::Case1);
        assert_eq!((d.n, d.c_pi), (2, 5));
        let f = d.l.base();
        assert_eq!(d.d_prime, f.int(-3));
        assert_eq!(d.s, f.one());
        // α_θ ↦ ϖ_L^{-c} (1/√D′) under the D′-embedding
        let alpha_img = d.embed_l(&d.alpha.alpha).unwrap();
        assert_eq!(alpha_img, d.alpha_matrix);
        let check = d.sqrt_d_prime().inv().unwrap() * d.l.uniformizer_pow(-(d.c_theta as i64));
        assert!(d.alpha.in_class(&check));
    }

    #[test]
    fn precision_floor_is_enforced() {
        let e = QuadExtDescriptor::new(FieldDescriptor::new(3, 10).unwrap(), -3).unwrap();
        let t = theta_big(3).at_level(4).unwrap();
        let low = MultChar::from_table(
            crate::field::UnitQuotient::get(e, 4).unwrap(),
            t.table().to_vec(),
            t.unif_value(),
        )
        .unwrap();
        assert!(matches!(
            SupercuspidalData::classify(&low),
            Err(Error::PrecisionTooLow { .. })
        ));
    }

    #[test]
    fn conductor_floor() {
        let e = QuadExtDescriptor::new(FieldDescriptor::new(3, 14).unwrap(), -3).unwrap();
        let t = MultChar::trivial(e);
        assert_eq!(
            SupercuspidalData::classify(&t).unwrap_err(),
            Error::ConductorTooSmall(0)
        );
    }
}
