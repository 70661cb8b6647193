//! The 3-adic period attached to `x³ + y³ = p` for `p ≡ 4, 7 mod 9`:
//! `K = Q(√−3)`, `F = Q₃`, `D = −3`, `c(θ₃) = c(χ₃) = 4`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::characters::{alpha_of_char, delta_theta, gauss_sum, lambda, MultChar};
use crate::cyclo::{CycloNumber, RationalAngle};
use crate::error::{Error, Result};
use crate::induction::SupercuspidalData;
use crate::padic::{FieldDescriptor, PAdicScalar};
use crate::period::newform::{newform_prefactor, newform_residues};
use crate::period::{
    period_integral, solve_with, Certificate, EmbeddingSpec, IntegralOptions, TestVectorSpec,
    TwistInfo,
};
use crate::quadext::{Mat2, QuadExtDescriptor, QuadExtScalar};

/// Conductor of `θ₃` and `χ₃`.
pub const CONDUCTOR: u32 = 4;

fn ang(n: i128, d: u64) -> RationalAngle {
    RationalAngle::new(n, d)
}

/// `Q₃(√−3)` at working precision `k`.
pub fn local_field(precision: u32) -> Result<QuadExtDescriptor> {
    QuadExtDescriptor::new(FieldDescriptor::new(3, precision)?, -3)
}

/// `Θ₃` from its values on `⟨±1⟩ × ⟨1+√−3⟩ × ⟨1−√−3⟩ × ⟨1+3√−3⟩` and at `√−3`.
pub fn theta3_from_table(e: QuadExtDescriptor) -> Result<MultChar<QuadExtDescriptor>> {
    let chi = MultChar::from_generators(
        e,
        CONDUCTOR,
        &[
            (e.from_ints(-1, 0), ang(1, 2)),
            (e.from_ints(1, 1), ang(2, 3)),
            (e.from_ints(1, -1), ang(1, 3)),
            (e.from_ints(1, 3), ang(1, 3)),
        ],
        ang(1, 4),
    )?;
    chi.check_homomorphism()?;
    Ok(chi)
}

/// `χ₃`: trivial on `Z₃^×`, values on `⟨1+√−3⟩ × ⟨1+3√−3⟩` by `p mod 9`.
pub fn chi3_from_table(e: QuadExtDescriptor, p_mod_9: u64) -> Result<MultChar<QuadExtDescriptor>> {
    let at_one_plus = match p_mod_9 {
        4 => ang(1, 3),
        7 => ang(2, 3),
        _ => return Err(Error::BadResidue(p_mod_9)),
    };
    let chi = MultChar::from_generators(
        e,
        CONDUCTOR,
        &[
            (e.from_ints(-1, 0), RationalAngle::ZERO),
            (e.from_ints(4, 0), RationalAngle::ZERO),
            (e.from_ints(1, 1), at_one_plus),
            (e.from_ints(1, 3), ang(1, 3)),
        ],
        RationalAngle::ZERO,
    )?;
    chi.check_homomorphism()?;
    Ok(chi)
}

/// `θ₃ = Θ₃·Δ` with the intermediate constants.
#[derive(Clone, Debug)]
pub struct Theta3 {
    pub big_theta: MultChar<QuadExtDescriptor>,
    pub theta: MultChar<QuadExtDescriptor>,
    /// `α_{Θ₃}` (trace-free representative).
    pub alpha: QuadExtScalar,
    /// `α_{Θ₃} ≡ 1/(9√−3)` modulo its ambiguity.
    pub alpha_matches: bool,
    pub lambda: CycloNumber,
    /// `τ(η₃, ψ₃(·/3))`.
    pub gauss_sum: CycloNumber,
    pub delta_at_sqrt_d: RationalAngle,
}

pub fn build_theta3(e: QuadExtDescriptor) -> Result<Theta3> {
    let f = e.base();
    let big_theta = theta3_from_table(e)?;
    let alpha = alpha_of_char(&big_theta)?.trace_free()?;
    // 1/(9√−3) = −√−3/27
    let expected = e.elem(f.zero(), f.rational(-1, 27)?);
    let alpha_matches = alpha.in_class(&expected);
    let delta = delta_theta(&big_theta, Some(&alpha))?;
    let theta = big_theta.product(&delta)?;
    Ok(Theta3 {
        alpha: alpha.alpha,
        alpha_matches,
        lambda: lambda(e, &f.one())?,
        gauss_sum: gauss_sum(e, &f.rational(1, 3)?)?,
        delta_at_sqrt_d: delta.eval(&e.sqrt_d())?,
        big_theta,
        theta,
    })
}

/// Verdicts on `θ₃χ̄₃` for one residue class.
#[derive(Clone, Debug, Serialize)]
pub struct TwistLemmaReport {
    pub p_mod_9: u64,
    /// `Θ₃χ̄₃` reproduces its tabulated generator values.
    pub big_twist_table_ok: bool,
    pub twist_conductor: u32,
    pub twist_trivial: bool,
    /// For `p ≡ 4`: `α_{θ₃χ̄₃} ≡ 1/(3√−3)`.
    pub alpha_matches: Option<bool>,
    pub theta_trivial_on_base: bool,
    pub chi_trivial_on_base: bool,
    pub holds: bool,
}

pub fn verify_twist_lemma(e: QuadExtDescriptor, p_mod_9: u64) -> Result<TwistLemmaReport> {
    let f = e.base();
    let t = build_theta3(e)?;
    let chi = chi3_from_table(e, p_mod_9)?;
    let big = t.big_theta.product(&chi.bar_conjugate())?;
    let (w1, w2) = if p_mod_9 == 4 {
        (ang(1, 3), ang(2, 3))
    } else {
        (RationalAngle::ZERO, RationalAngle::ZERO)
    };
    let expected = [
        (e.from_ints(-1, 0), ang(1, 2)),
        (e.from_ints(1, 1), w1),
        (e.from_ints(1, -1), w2),
        (e.from_ints(1, 3), RationalAngle::ZERO),
        (e.sqrt_d(), ang(1, 4)),
    ];
    let mut big_twist_table_ok = true;
    for (x, v) in &expected {
        big_twist_table_ok &= big.eval(x)? == *v;
    }
    let nu = t.theta.product(&chi.bar_conjugate())?;
    let twist_conductor = nu.conductor();
    let twist_trivial = nu.is_trivial();
    let alpha_matches = if twist_conductor >= 2 {
        // 1/(3√−3) = −√−3/9
        let target = e.elem(f.zero(), f.rational(-1, 9)?);
        Some(alpha_of_char(&nu)?.in_class(&target))
    } else {
        None
    };
    let theta_trivial_on_base = t.theta.restrict_to_base()?.is_trivial();
    let chi_trivial_on_base = chi.restrict_to_base()?.is_trivial();
    let class_ok = match p_mod_9 {
        7 => twist_trivial,
        _ => twist_conductor == 2 && alpha_matches == Some(true),
    };
    Ok(TwistLemmaReport {
        p_mod_9,
        big_twist_table_ok,
        twist_conductor,
        twist_trivial,
        alpha_matches,
        theta_trivial_on_base,
        chi_trivial_on_base,
        holds: class_ok && big_twist_table_ok && theta_trivial_on_base && chi_trivial_on_base,
    })
}

fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

fn v3(r: &BigRational) -> i64 {
    let three = BigInt::from(3);
    let mut v = 0;
    let (mut num, mut den) = (r.numer().clone(), r.denom().clone());
    while num.is_multiple_of(&three) {
        num /= &three;
        v += 1;
    }
    while den.is_multiple_of(&three) {
        den /= &three;
        v -= 1;
    }
    v
}

/// Residue mod `m` of a rational with denominator prime to `m`.
fn residue(r: &BigRational, m: i64) -> Option<i64> {
    let m_big = BigInt::from(m);
    let den = r.denom().mod_floor(&m_big).to_i64()?;
    let inv = (1..m).find(|k| (den * k) % m == 1)?;
    let num = r.numer().mod_floor(&m_big).to_i64()?;
    Some((num * inv).rem_euclid(m))
}

fn to_padic(f: FieldDescriptor, r: &BigRational) -> Result<PAdicScalar> {
    let budget = |_| Error::BudgetExceeded {
        what: "embedding entry",
        size: u64::MAX,
        budget: i64::MAX as u64,
    };
    let num = r.numer().to_i64().ok_or(()).map_err(budget)?;
    let den = r.denom().to_i64().ok_or(()).map_err(budget)?;
    f.rational(num, den)
}

/// Entries of the image of `√−3`, `[[a, b/9], [27c, −a]]`.
#[derive(Clone, Debug, Serialize)]
pub struct SylvesterParams {
    pub p: u64,
    #[serde(serialize_with = "ser_rational")]
    pub a: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub b: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub c: BigRational,
    pub checks: ParamChecks,
}

fn ser_rational<S: serde::Serializer>(
    r: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct ParamChecks {
    pub v3_a: i64,
    /// `3‖a` for `p ≡ 4`, `9‖a` for `p ≡ 7`.
    pub a_pattern: bool,
    pub b_mod_9: Option<i64>,
    pub b_congruent_p: bool,
    pub c_mod_9: Option<i64>,
    pub c_is_minus_one_mod_9: bool,
    /// `−c ≡ 1 mod 3`, which is what the translate computation uses.
    pub c_is_minus_one_mod_3: bool,
    pub norm_is_three: bool,
}

impl SylvesterParams {
    pub fn new(p: u64) -> Result<SylvesterParams> {
        if !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if p % 9 != 4 && p % 9 != 7 {
            return Err(Error::BadResidue(p));
        }
        let pr = BigRational::from_integer(BigInt::from(p));
        let int = |n: i64| BigRational::from_integer(BigInt::from(n));
        let a = int(4) * &pr + int(17) + int(72) / &pr;
        let b = (int(-8) * &pr / int(9) - int(4) - int(18) / &pr) * int(9);
        let c = (int(18) * &pr + int(72) + int(288) / &pr) / int(27);
        let v3_a = v3(&a);
        let a_pattern = if p % 9 == 4 { v3_a == 1 } else { v3_a == 2 };
        let b_mod_9 = residue(&b, 9);
        let c_mod_9 = residue(&c, 9);
        let checks = ParamChecks {
            v3_a,
            a_pattern,
            b_mod_9,
            b_congruent_p: b_mod_9 == Some((p % 9) as i64),
            c_mod_9,
            c_is_minus_one_mod_9: c_mod_9 == Some(8),
            c_is_minus_one_mod_3: c_mod_9.map(|r| r % 3) == Some(2),
            norm_is_three: -(&a * &a) - int(3) * &b * &c == int(3),
        };
        Ok(SylvesterParams { p, a, b, c, checks })
    }

    /// The conditions the computation relies on.
    pub fn usable(&self) -> bool {
        let k = &self.checks;
        k.a_pattern
            && k.b_congruent_p
            && k.c_is_minus_one_mod_3
            && k.norm_is_three
            && v3(&self.c) == 0
    }

    /// `M = [[−9c, a/3], [0, 1]]` over `Q₃`.
    pub fn conjugator(&self, f: FieldDescriptor) -> Result<Mat2> {
        let three = BigRational::from_integer(BigInt::from(3));
        let nine = BigRational::from_integer(BigInt::from(9));
        Ok(Mat2::new(
            to_padic(f, &(-(nine * &self.c)))?,
            to_padic(f, &(&self.a / &three))?,
            f.zero(),
            f.one(),
        ))
    }

    /// `[[a, b/9], [27c, −a]]` over `Q₃`.
    pub fn embedding_matrix(&self, f: FieldDescriptor) -> Result<Mat2> {
        let int = |n: i64| BigRational::from_integer(BigInt::from(n));
        Ok(Mat2::new(
            to_padic(f, &self.a)?,
            to_padic(f, &(&self.b / int(9)))?,
            to_padic(f, &(int(27) * &self.c))?,
            to_padic(f, &(-self.a.clone()))?,
        ))
    }

    /// `u = a/3 ∈ Z₃`.
    pub fn u(&self, f: FieldDescriptor) -> Result<PAdicScalar> {
        to_padic(f, &(&self.a / BigRational::from_integer(BigInt::from(3))))
    }
}

/// Which mechanism produced the value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SylvesterBranch {
    /// `θ₃χ̄₃ = 1`: one diagonal term, no cross terms.
    TrivialTwist,
    /// `l = 1`, `n − l` odd, `Δ(u) ≡ 0 mod ϖ²`.
    LevelOne,
}

#[derive(Clone, Debug, Serialize)]
pub struct Beta3Report {
    pub p: u64,
    pub params: SylvesterParams,
    pub branch: SylvesterBranch,
    /// `π(M)f₃` written as `N^{-1/2} Σ_x π(n(a/3) diag(x, 1)) φ₀`, standard embedding.
    pub beta_standard: CycloNumber,
    pub certificate: Certificate,
    /// `f₃ = N^{-1/2} Σ_x π(diag(x/9, 1)) φ₀` with `t ↦ M^{-1} t M`.
    pub beta_conjugated: CycloNumber,
    pub conjugated_certificate: Certificate,
    /// `M^{-1} ι(√−3) M` equals the given embedding matrix.
    pub conjugation_ok: bool,
    /// `v mod 3` solving the test-vector congruence at `u = a/3` (level-one branch).
    pub solutions: Vec<u64>,
    /// `Δ(u) ≡ 0 mod ϖ²` (level-one branch).
    pub discriminant_vanishes: Option<bool>,
    #[serde(serialize_with = "ser_rational")]
    pub beta: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub admissible_ratio: BigRational,
}

impl Beta3Report {
    pub fn expected_beta(&self) -> BigRational {
        if self.p % 9 == 7 {
            BigRational::one()
        } else {
            BigRational::new(1.into(), 2.into())
        }
    }

    pub fn holds(&self) -> bool {
        self.beta_standard == self.beta_conjugated
            && self.conjugation_ok
            && self.beta == self.expected_beta()
            && self.params.usable()
    }
}

/// `β⁰₃(f₃, f₃)` computed twice (standard translates, conjugated embedding).
pub fn beta3_newform(p: u64, precision: u32, opts: &IntegralOptions) -> Result<Beta3Report> {
    let params = SylvesterParams::new(p)?;
    let e = local_field(precision)?;
    let f = e.base();
    let t = build_theta3(e)?;
    let chi = chi3_from_table(e, p % 9)?;
    let data = SupercuspidalData::classify_with_alpha(&t.theta, Some(t.alpha))?;
    let m = params.conjugator(f)?;
    let conjugation_ok = m.inv()? * e.sqrt_d().embed() * m == params.embedding_matrix(f)?;
    let u = params.u(f)?;
    let pre = CycloNumber::from_rational(newform_prefactor(&data));
    let xs = newform_residues(&data);

    let mut left = TestVectorSpec { terms: Vec::new() };
    let mut right = TestVectorSpec { terms: Vec::new() };
    for x in &xs {
        let g = Mat2::unipotent(u) * Mat2::diag(f.int(*x as i64), f.one());
        left.terms.push((pre.clone(), g));
        right.terms.push((CycloNumber::one(), g));
    }
    let emb = EmbeddingSpec::standard(e);
    let standard = period_integral(&data, &chi, &left, &right, &emb, opts)?;

    let ninth = f.rational(1, 9)?;
    let mut left = TestVectorSpec { terms: Vec::new() };
    let mut right = TestVectorSpec { terms: Vec::new() };
    for x in &xs {
        let g = Mat2::diag(f.int(*x as i64) * ninth, f.one());
        left.terms.push((pre.clone(), g));
        right.terms.push((CycloNumber::one(), g));
    }
    let conj_emb = EmbeddingSpec::conjugated(e, m)?;
    let conjugated = period_integral(&data, &chi, &left, &right, &conj_emb, opts)?;

    let tw = TwistInfo::new(&data, &chi)?;
    let (branch, solutions, discriminant_vanishes) = if tw.is_trivial() {
        (SylvesterBranch::TrivialTwist, Vec::new(), None)
    } else {
        let out = solve_with(&data, &tw, &u)?;
        let vanishes = out.discriminant.has_valuation_at_least(2)?;
        (SylvesterBranch::LevelOne, out.solutions, Some(vanishes))
    };
    let beta = standard.value.as_rational().ok_or(Error::NotRational)?;
    let admissible_ratio = if beta.is_zero() || beta.is_negative() {
        BigRational::zero()
    } else {
        BigRational::from_integer(2.into()) / &beta
    };
    Ok(Beta3Report {
        p,
        params,
        branch,
        beta_standard: standard.value,
        certificate: standard.certificate,
        beta_conjugated: conjugated.value,
        conjugated_certificate: conjugated.certificate,
        conjugation_ok,
        solutions,
        discriminant_vanishes,
        beta,
        admissible_ratio,
    })
}

/// `β(f₃′, f₃′) / β(f₃, f₃)` with `β(f₃′, f₃′) = Vol(Q₃^×\K₃^×) = 2`.
pub fn admissible_ratio(p: u64, precision: u32, opts: &IntegralOptions) -> Result<BigRational> {
    Ok(beta3_newform(p, precision, opts)?.admissible_ratio)
}
