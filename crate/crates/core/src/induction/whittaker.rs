//! Restriction of the Whittaker function of `φ₀` to the diagonal torus:
//! `W(a) = ∫_F Φ(diag(ϖ^N, 1) n(x) diag(a, 1)) ψ(−x) dx`, `N = ⌊c(π)/2⌋`.

use num_bigint::BigInt;
use num_traits::Pow;

use crate::cyclo::{AngleSum, CycloNumber, DEFAULT_ORDER_CAP};
use crate::error::{Error, Result};
use crate::field::psi_base;
use crate::padic::PAdicScalar;
use crate::quadext::Mat2;

use super::data::SupercuspidalData;

#[derive(Clone, Debug)]
pub struct WhittakerValue {
    pub value: CycloNumber,
    pub cutoff: i64,
    pub refined_equal: bool,
}

impl SupercuspidalData {
    /// Lowest valuation of `x` for which the integrand can be nonzero.
    fn whittaker_floor(&self, a: &PAdicScalar) -> Result<i64> {
        let big_n = (self.c_pi / 2) as i64;
        let det_val = big_n + a.checked_valuation()?;
        Ok(det_val.div_euclid(2) - big_n)
    }

    /// Riemann sum at step `ϖ^cutoff`, Haar measure with `vol(O_F) = 1`.
    pub fn whittaker_at(&self, a: &PAdicScalar, cutoff: i64) -> Result<CycloNumber> {
        let f = self.l.base();
        let lo = self.whittaker_floor(a)?;
        if cutoff < 0 {
            return Err(Error::UnsupportedCase("negative Whittaker cutoff".into()));
        }
        if cutoff <= lo {
            return Ok(CycloNumber::zero());
        }
        let span = (cutoff - lo) as u32;
        let count = f.p().checked_pow(span).ok_or(Error::BudgetExceeded {
            what: "Whittaker samples",
            size: u64::MAX,
            budget: 1 << 24,
        })?;
        if count > 1 << 24 {
            return Err(Error::BudgetExceeded {
                what: "Whittaker samples",
                size: count,
                budget: 1 << 24,
            });
        }
        let scale_n = f.uniformizer_pow((self.c_pi / 2) as i64);
        let step = f.uniformizer_pow(lo);
        let mut acc = AngleSum::new();
        for i in 0..count {
            let x = f.int(i as i64) * step;
            let g = Mat2::new(scale_n * *a, scale_n * x, f.zero(), f.one());
            if let Some(phi) = self.phi_angle(&g)? {
                acc.add(phi + psi_base(&-x)?, 1);
            }
        }
        acc.finish(BigInt::from(f.p()).pow(cutoff as u32), DEFAULT_ORDER_CAP)
    }

    /// `W(a)` at the local-constancy cutoff, certified against one further
    /// refinement.
    pub fn whittaker(&self, a: &PAdicScalar) -> Result<WhittakerValue> {
        let depth = (self.c_theta / self.e()) as i64;
        let cutoff = (a.checked_valuation()? + depth)
            .max(0)
            .max(self.whittaker_floor(a)? + 1);
        let value = self.whittaker_at(a, cutoff)?;
        let finer = self.whittaker_at(a, cutoff + 1)?;
        if value != finer {
            return Err(Error::UnstableSum(cutoff as u32));
        }
        Ok(WhittakerValue {
            value,
            cutoff,
            refined_equal: true,
        })
    }
}
