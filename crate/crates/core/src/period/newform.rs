//! The newform period as a normalized double sum over the diagonal
//! translates `φ_x = π(diag(x, 1)) φ₀`, `x ∈ (O/ϖ^{⌈n/2⌉})^×`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;
use rayon::prelude::*;

use crate::characters::MultChar;
use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};
use crate::induction::{CaseTag, SupercuspidalData};
use crate::quadext::QuadExtDescriptor;

use super::integral::{check_central_character, period_integral, IntegralOptions, IntegralResult};
use super::solver::{solve_with, TwistInfo};
use super::spec::{unit_residues, EmbeddingSpec, TestVectorSpec};

/// Exponent `⌈c(θ)/2e⌉` of the modulus for `x`.
pub fn residue_exponent(data: &SupercuspidalData) -> u32 {
    data.c_theta.div_ceil(2 * data.e())
}

/// `x` representatives for the newform expansion.
pub fn newform_residues(data: &SupercuspidalData) -> Vec<u64> {
    unit_residues(data.l.base().p(), residue_exponent(data))
}

/// `1 / ((q−1) q^{⌈c(θ)/2e⌉−1})`.
pub fn newform_prefactor(data: &SupercuspidalData) -> BigRational {
    BigRational::new(
        BigInt::from(1),
        BigInt::from(newform_residues(data).len() as u64),
    )
}

/// `(Σ_x N^{-1} φ_x, Σ_x φ_x)`, whose pairing is the normalized newform
/// period.
pub fn newform_specs(data: &SupercuspidalData) -> (TestVectorSpec, TestVectorSpec) {
    let f = data.l.base();
    let pre = CycloNumber::from_rational(newform_prefactor(data));
    let mut left = TestVectorSpec { terms: Vec::new() };
    let mut right = TestVectorSpec { terms: Vec::new() };
    for x in newform_residues(data) {
        let phi = TestVectorSpec::phi_x(f.int(x as i64));
        left = left.plus(&phi.scaled(&pre));
        right = right.plus(&phi);
    }
    (left, right)
}

/// All `{φ_x, φ_{x′}}`, row `x`, column `x′`.
#[derive(Clone, Debug)]
pub struct PairMatrix {
    pub xs: Vec<u64>,
    pub values: Vec<Vec<IntegralResult>>,
}

impl PairMatrix {
    pub fn get(&self, i: usize, j: usize) -> &CycloNumber {
        &self.values[i][j].value
    }

    /// `N^{-1} Σ_{x,x′} {φ_x, φ_{x′}}`.
    pub fn normalized_sum(&self, prefactor: &BigRational) -> CycloNumber {
        let mut acc = CycloNumber::zero();
        for row in &self.values {
            for r in row {
                acc = acc + r.value.clone();
            }
        }
        acc.scale(prefactor)
    }
}

pub fn pair_matrix(
    data: &SupercuspidalData,
    chi: &MultChar<QuadExtDescriptor>,
    emb: &EmbeddingSpec,
    opts: &IntegralOptions,
) -> Result<PairMatrix> {
    let f = data.l.base();
    let xs = newform_residues(data);
    let values = xs
        .par_iter()
        .map(|x| {
            let phi = TestVectorSpec::phi_x(f.int(*x as i64));
            xs.iter()
                .map(|x2| {
                    let phi2 = TestVectorSpec::phi_x(f.int(*x2 as i64));
                    period_integral(data, chi, &phi, &phi2, emb, opts)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PairMatrix { xs, values })
}

/// Which closed form, if any, predicts the newform period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NewformBranch {
    /// `θχ̄ = 1`: a single nonvanishing diagonal term equal to 2.
    SingleTerm,
    /// `θχ̄` unramified and nontrivial: every term vanishes.
    UnramifiedVanishing,
    /// `0 < c(θχ̄) = 2l`, `n − l` even, solutions exist:
    /// `N^{-1} q^{−⌊l/2⌋} (1 + θχ(√D))²`.
    Phase,
    /// `0 < c(θχ̄)`, `n − l` even, no solution: the period vanishes.
    NoTestVector,
    /// No closed form applies; the reason is recorded.
    Unpredicted(String),
}

#[derive(Clone, Debug)]
pub struct NewformReport {
    /// One integral of the expanded newform spec.
    pub direct: IntegralResult,
    /// Prefactor times the sum of separately computed pair integrals.
    pub double_sum: CycloNumber,
    pub pairs: PairMatrix,
    pub branch: NewformBranch,
    pub prediction: Option<CycloNumber>,
    /// `true` when `χ` was replaced by `χ̄` to reach `c(θχ̄) ≤ c(θχ)`.
    pub conjugated: bool,
}

impl NewformReport {
    pub fn closed_form_holds(&self) -> Option<bool> {
        self.prediction
            .as_ref()
            .map(|p| *p == self.direct.value && *p == self.double_sum)
    }
}

/// Closed-form prediction for the newform period.
pub fn predict_newform(
    data: &SupercuspidalData,
    chi: &MultChar<QuadExtDescriptor>,
) -> Result<(NewformBranch, Option<CycloNumber>, bool)> {
    let f = data.l.base();
    if data.case != CaseTag::Case1 {
        return Ok((
            NewformBranch::Unpredicted("L is not ramified".into()),
            None,
            false,
        ));
    }
    if !data.theta.restrict_to_base()?.is_trivial() {
        return Ok((
            NewformBranch::Unpredicted("w_π is not trivial".into()),
            None,
            false,
        ));
    }
    let tw = TwistInfo::new(data, chi)?;
    let tw_bar = TwistInfo::new(data, &chi.bar_conjugate())?;
    // the newform is fixed by diag(−1, 1) up to reindexing x ↦ −x
    let (chi, tw, conjugated) = if tw_bar.conductor < tw.conductor {
        (chi.bar_conjugate(), tw_bar, true)
    } else {
        (chi.clone(), tw, false)
    };
    let pre = newform_prefactor(data);
    if tw.is_trivial() {
        let two = CycloNumber::from_int(2).scale(&pre);
        return Ok((NewformBranch::SingleTerm, Some(two), conjugated));
    }
    if tw.conductor == 0 {
        return Ok((
            NewformBranch::UnramifiedVanishing,
            Some(CycloNumber::zero()),
            conjugated,
        ));
    }
    let Some(l) = tw.l().filter(|l| *l <= data.n) else {
        return Ok((
            NewformBranch::Unpredicted(format!("c(θχ̄) = {}", tw.conductor)),
            None,
            conjugated,
        ));
    };
    if (data.n - l) % 2 == 1 {
        return Ok((
            NewformBranch::Unpredicted("n − l is odd".into()),
            None,
            conjugated,
        ));
    }
    let sol = solve_with(data, &tw, &f.zero())?;
    if sol.solutions.is_empty() {
        return Ok((
            NewformBranch::NoTestVector,
            Some(CycloNumber::zero()),
            conjugated,
        ));
    }
    let gamma = CycloNumber::from_angle(
        data.theta.eval(&data.l.sqrt_d())? + chi.eval(&chi.field().sqrt_d())?,
    );
    let one_plus = CycloNumber::one() + gamma;
    let q_pow = BigRational::new(BigInt::from(1), BigInt::from(f.p()).pow(l / 2));
    let value = (one_plus.clone() * one_plus).scale(&pre).scale(&q_pow);
    Ok((NewformBranch::Phase, Some(value), conjugated))
}

/// Direct newform period, the expanded double sum, and the closed form when
/// one applies.
pub fn newform_period(
    data: &SupercuspidalData,
    chi: &MultChar<QuadExtDescriptor>,
    emb: &EmbeddingSpec,
    opts: &IntegralOptions,
) -> Result<NewformReport> {
    check_central_character(data, chi)?;
    let (left, right) = newform_specs(data);
    let direct = period_integral(data, chi, &left, &right, emb, opts)?;
    let pairs = pair_matrix(data, chi, emb, opts)?;
    let double_sum = pairs.normalized_sum(&newform_prefactor(data));
    let (branch, prediction, conjugated) = if chi.field() == data.l {
        predict_newform(data, chi)?
    } else {
        (
            NewformBranch::Unpredicted("E differs from L".into()),
            None,
            false,
        )
    };
    Ok(NewformReport {
        direct,
        double_sum,
        pairs,
        branch,
        prediction,
        conjugated,
    })
}

/// Errors with `HypothesisViolation` when no closed form applies.
pub fn require_prediction(report: &NewformReport) -> Result<&CycloNumber> {
    match (&report.branch, &report.prediction) {
        (_, Some(p)) => Ok(p),
        (NewformBranch::Unpredicted(why), None) => Err(Error::HypothesisViolation(why.clone())),
        _ => Err(Error::HypothesisViolation("no prediction".into())),
    }
}
