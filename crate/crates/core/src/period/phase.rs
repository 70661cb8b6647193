//! Phase factor of the off-diagonal term `{φ_v, φ_{v′}}` and the support of
//! that integral on the torus.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;

use crate::characters::MultChar;
use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};
use crate::induction::SupercuspidalData;
use crate::padic::PAdicScalar;
use crate::quadext::{Mat2, QuadExtDescriptor};

use super::integral::start_level;
use super::solver::{exact_roots, TwistInfo};
use super::spec::{EmbeddingSpec, TestVectorSpec};
use super::torus::torus_points;

#[derive(Clone, Debug)]
pub struct PhaseReport {
    pub v: PAdicScalar,
    pub v_prime: PAdicScalar,
    /// `Φ([[0, 1/v′], [vD, 0]]) χ(√D)`.
    pub direct: CycloNumber,
    /// `θχ(√D)`.
    pub predicted: CycloNumber,
}

impl PhaseReport {
    pub fn holds(&self) -> bool {
        self.direct == self.predicted
            && (self.predicted == CycloNumber::one() || self.predicted == CycloNumber::from_int(-1))
    }
}

fn roots(
    data: &SupercuspidalData,
    chi: &MultChar<QuadExtDescriptor>,
) -> Result<(PAdicScalar, PAdicScalar, u32)> {
    let tw = TwistInfo::new(data, chi)?;
    let l = tw
        .l()
        .ok_or_else(|| Error::HypothesisViolation("c(θχ̄) is odd".into()))?;
    if l == 0 || l > data.n || (data.n - l) % 2 == 1 {
        return Err(Error::HypothesisViolation(format!(
            "need 0 < l ≤ n with n − l even, got l = {l}"
        )));
    }
    let (v, v2) = exact_roots(data, &tw)?;
    Ok((v, v2, l))
}

pub fn phase_factor(
    data: &SupercuspidalData,
    chi: &MultChar<QuadExtDescriptor>,
) -> Result<PhaseReport> {
    let (v, v_prime, _) = roots(data, chi)?;
    let f = data.l.base();
    let e = chi.field();
    let g = Mat2::new(f.zero(), v_prime.inv()?, v * e.d(), f.zero());
    let phi = data.phi_angle(&g)?.ok_or(Error::NotOnSupport)?;
    let direct = CycloNumber::from_angle(phi + chi.eval(&e.sqrt_d())?);
    let predicted =
        CycloNumber::from_angle(data.theta.eval(&data.l.sqrt_d())? + chi.eval(&e.sqrt_d())?);
    Ok(PhaseReport {
        v,
        v_prime,
        direct,
        predicted,
    })
}

#[derive(Clone, Debug)]
pub struct SupportReport {
    pub l: u32,
    pub level: u32,
    /// Cosets `(twisted, y)` where the integrand is nonzero.
    pub scanned: Vec<(bool, u64)>,
    /// Cosets satisfying `v(b) = 0`, `v(a) ≥ ⌈(l+1)/2⌉`.
    pub predicted: Vec<(bool, u64)>,
    pub volume: BigRational,
    pub expected_volume: BigRational,
    /// `v v′ D = D′`.
    pub product_relation: bool,
    pub ratio_valuation: i64,
    pub expected_ratio_valuation: i64,
}

impl SupportReport {
    pub fn holds(&self) -> bool {
        self.scanned == self.predicted
            && self.volume == self.expected_volume
            && self.product_relation
            && self.ratio_valuation == self.expected_ratio_valuation
    }
}

/// Scans the integrand of `{φ_v, φ_{v′}}` over torus cosets and compares
/// with the predicted support.
pub fn support_of_integral(
    data: &SupercuspidalData,
    chi: &MultChar<QuadExtDescriptor>,
) -> Result<SupportReport> {
    let (v, v_prime, l) = roots(data, chi)?;
    let f = data.l.base();
    let e = chi.field();
    let emb = EmbeddingSpec::standard(e);
    let k = Mat2::diag(v, f.one());
    let k_prime_inv = Mat2::diag(v_prime.inv()?, f.one());
    let a_min = (l as i64 + 1 + 1).div_euclid(2);
    let level = start_level(data, chi, &TestVectorSpec::phi_x(v), &emb)?.max(a_min as u32);
    let mut scanned = Vec::new();
    let mut predicted = Vec::new();
    for pt in torus_points(e, level)? {
        let g = k_prime_inv * pt.t.embed() * k;
        if data.phi_angle(&g)?.is_some() {
            scanned.push((pt.twisted, pt.y));
        }
        let b_unit = !pt.t.b.has_valuation_at_least(1)?;
        if b_unit && pt.t.a.has_valuation_at_least(a_min)? {
            predicted.push((pt.twisted, pt.y));
        }
    }
    let den = BigInt::from(f.p()).pow(level);
    let volume = BigRational::new(BigInt::from(scanned.len()), den);
    let expected_volume = BigRational::new(BigInt::from(1), BigInt::from(f.p()).pow(l / 2));
    let product_relation = v * v_prime * e.d() == data.d_prime;
    let ratio_valuation = (v.div(&v_prime)? - f.one()).checked_valuation()?;
    Ok(SupportReport {
        l,
        level,
        scanned,
        predicted,
        volume,
        expected_volume,
        product_relation,
        ratio_valuation,
        expected_ratio_valuation: ((data.n - l) / 2) as i64,
    })
}
