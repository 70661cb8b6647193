//! The congruence deciding which `π(n(u) diag(v,1)) φ₀` are test vectors:
//! `(D/D′) v² − (2ϖ^n α√D − 2√(D/D′)) v + (1 − D u²) ≡ 0 mod ϖ^{n−⌊l/2⌋}`,
//! where `α = α_{θχ̄}`, `c(θχ̄) = 2l`, and `ϖ^n = ϖ_L^{2n} = D^n`.

use std::collections::BTreeSet;

use crate::characters::{alpha_of_char, MultChar};
use crate::error::{Error, Result};
use crate::induction::{CaseTag, SupercuspidalData};
use crate::padic::PAdicScalar;
use crate::quadext::QuadExtDescriptor;

use super::spec::unit_residues;

/// `θχ̄` with its conductor and, when ramified, `α_{θχ̄}√D ∈ F`.
#[derive(Clone, Debug)]
pub struct TwistInfo {
    pub nu: MultChar<QuadExtDescriptor>,
    pub conductor: u32,
    pub alpha_sqrt_d: Option<PAdicScalar>,
}

impl TwistInfo {
    pub fn new(data: &SupercuspidalData, chi: &MultChar<QuadExtDescriptor>) -> Result<TwistInfo> {
        let nu = data.theta.product(&chi.bar_conjugate())?;
        let conductor = nu.conductor();
        let alpha_sqrt_d = if conductor >= 2 {
            let a = alpha_of_char(&nu)?.sqrt_d_coefficient()?;
            Some(a * data.l.d())
        } else {
            None
        };
        Ok(TwistInfo {
            nu,
            conductor,
            alpha_sqrt_d,
        })
    }

    pub fn is_trivial(&self) -> bool {
        self.nu.is_trivial()
    }

    /// `l` with `c(θχ̄) = 2l`, if the conductor is even.
    pub fn l(&self) -> Option<u32> {
        self.conductor
            .is_multiple_of(2)
            .then_some(self.conductor / 2)
    }
}

#[derive(Clone, Debug)]
pub struct SolverOutput {
    pub l: u32,
    /// The congruence holds modulo `ϖ^modulus_exp`.
    pub modulus_exp: u32,
    /// Solutions are reported modulo `ϖ^residue_exp`.
    pub residue_exp: u32,
    pub solutions: Vec<u64>,
    pub discriminant: PAdicScalar,
    pub discriminant_is_square: bool,
}

/// `(A, B)` with the equation written `A v² − B v + C`.
fn coefficients(data: &SupercuspidalData, tw: &TwistInfo) -> Result<(PAdicScalar, PAdicScalar)> {
    let f = data.l.base();
    let alpha = tw
        .alpha_sqrt_d
        .ok_or_else(|| Error::HypothesisViolation("c(θχ̄) < 2".into()))?;
    let s_inv = data.s.inv()?;
    let a = s_inv * s_inv;
    let b = f.int(2) * data.l.d().pow(data.n as i64)? * alpha - f.int(2) * s_inv;
    Ok((a, b))
}

fn check_setting(data: &SupercuspidalData, tw: &TwistInfo) -> Result<u32> {
    if data.case != CaseTag::Case1 {
        return Err(Error::UnsupportedCase(
            "test-vector equation needs ramified L".into(),
        ));
    }
    let l = tw.l().filter(|l| *l > 0 && *l <= data.n).ok_or_else(|| {
        Error::HypothesisViolation(format!("c(θχ̄) = {} is not in (0, 2n]", tw.conductor))
    })?;
    Ok(l)
}

/// All `v mod ϖ^{⌈n/2⌉}` admitting a lift that solves the congruence.
pub fn solve_test_vector_equation(
    data: &SupercuspidalData,
    chi: &MultChar<QuadExtDescriptor>,
    u: &PAdicScalar,
) -> Result<SolverOutput> {
    let tw = TwistInfo::new(data, chi)?;
    solve_with(data, &tw, u)
}

pub fn solve_with(
    data: &SupercuspidalData,
    tw: &TwistInfo,
    u: &PAdicScalar,
) -> Result<SolverOutput> {
    let l = check_setting(data, tw)?;
    let f = data.l.base();
    let (a, b) = coefficients(data, tw)?;
    let c = f.one() - data.l.d() * *u * *u;
    let modulus_exp = data.n - l / 2;
    let residue_exp = data.n.div_ceil(2);
    let sweep_exp = modulus_exp.max(residue_exp);
    let project = f.p().pow(residue_exp);
    let mut found = BTreeSet::new();
    for v in unit_residues(f.p(), sweep_exp) {
        let vs = f.int(v as i64);
        let val = a * vs * vs - b * vs + c;
        if val.has_valuation_at_least(modulus_exp as i64)? {
            found.insert(v % project);
        }
    }
    let discriminant = b * b - f.int(4) * a * c;
    let discriminant_is_square = discriminant.is_square_mod(modulus_exp as i64)?;
    Ok(SolverOutput {
        l,
        modulus_exp,
        residue_exp,
        solutions: found.into_iter().collect(),
        discriminant,
        discriminant_is_square,
    })
}

/// Roots `v, v′` of the exact equation with `u = 0`; they satisfy
/// `v v′ D = D′`.
pub fn exact_roots(data: &SupercuspidalData, tw: &TwistInfo) -> Result<(PAdicScalar, PAdicScalar)> {
    check_setting(data, tw)?;
    let f = data.l.base();
    let (a, b) = coefficients(data, tw)?;
    let disc = b * b - f.int(4) * a;
    let r = disc.sqrt().map_err(|_| Error::NoSolution)?;
    let two_a = f.int(2) * a;
    Ok(((b + r).div(&two_a)?, (b - r).div(&two_a)?))
}
