//! `{φ₁, φ₂} = ∫_{F^×\E^×} ⟨π(t)φ₁, φ₂⟩ χ(t) dt` as an exact finite sum.

use num_bigint::BigInt;
use num_traits::Pow;
use serde::Serialize;

use crate::characters::MultChar;
use crate::cyclo::{AngleSum, CycloNumber, RationalAngle, DEFAULT_ORDER_CAP};
use crate::error::{Error, Result};
use crate::induction::SupercuspidalData;
use crate::quadext::{Mat2, QuadExtDescriptor};

use super::spec::{EmbeddingSpec, TestVectorSpec};
use super::torus::torus_points;

#[derive(Clone, Copy, Debug)]
pub struct IntegralOptions {
    /// Extra levels tried past the first one before giving up.
    pub max_refine: u32,
    pub order_cap: u64,
    pub keep_trace: bool,
}

impl Default for IntegralOptions {
    fn default() -> Self {
        IntegralOptions {
            max_refine: 4,
            order_cap: DEFAULT_ORDER_CAP,
            keep_trace: false,
        }
    }
}

/// The pair of consecutive levels whose sums agreed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub m: u32,
    pub m_plus_one_equal: bool,
}

/// A torus coset with nonzero integrand for the term pair `(i, j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportEntry {
    pub term: (usize, usize),
    pub twisted: bool,
    pub y: u64,
    pub level: u32,
    pub angle: RationalAngle,
}

#[derive(Clone, Debug)]
pub struct IntegralResult {
    pub value: CycloNumber,
    pub certificate: Certificate,
    pub start_level: u32,
    pub support_trace: Vec<SupportEntry>,
}

/// Fails unless `χ|_{F^×} · w_π` is trivial, with `w_π = θ|_{F^×}`.
pub fn check_central_character(
    data: &SupercuspidalData,
    chi: &MultChar<QuadExtDescriptor>,
) -> Result<()> {
    let w = data.theta.restrict_to_base()?;
    let c = chi.restrict_to_base()?;
    if !w.product(&c)?.is_trivial() {
        return Err(Error::IncompatibleCentralCharacter);
    }
    Ok(())
}

/// First level at which the integrand is constant on every coset.
///
/// Right translation by `1 + δ√D`, `v(δ) ≥ m`, changes `χ` by a value on
/// `U_E(2m+1)` and `Φ(h^{-1} t g)` by `θ̃` on `g^{-1} ι(1+δ√D) g`, which
/// is trivial once that element lies in `K_A(c(θ))`.
pub fn start_level(
    data: &SupercuspidalData,
    chi: &MultChar<QuadExtDescriptor>,
    phi1: &TestVectorSpec,
    emb: &EmbeddingSpec,
) -> Result<u32> {
    let f = emb.e.base();
    let chi_level = chi.conductor().saturating_sub(1).div_ceil(2);
    let conj = emb.conjugator();
    let lattice = data.lattice;
    let lvl = |m: u32| -> i64 {
        let d = f.uniformizer_pow(m as i64);
        let x = Mat2::new(f.zero(), d, d * emb.e.d(), f.zero());
        lattice.level_of(&x).expect("nonzero")
    };
    let mut m0 = chi_level.max(1);
    for (_, g) in &phi1.terms {
        let g_eff = conj * *g;
        let spread = lattice.level_of(&g_eff).ok_or(Error::InverseOfZero)?
            + lattice
                .level_of(&g_eff.inv()?)
                .ok_or(Error::InverseOfZero)?;
        let mut m = 1u32;
        while spread + lvl(m) < data.c_theta as i64 {
            m += 1;
        }
        m0 = m0.max(m);
    }
    Ok(m0)
}

/// The sum at level `m`, plus the support entries if requested.
pub fn pairing_at_level(
    data: &SupercuspidalData,
    chi: &MultChar<QuadExtDescriptor>,
    phi1: &TestVectorSpec,
    phi2: &TestVectorSpec,
    emb: &EmbeddingSpec,
    m: u32,
    opts: &IntegralOptions,
) -> Result<(CycloNumber, Vec<SupportEntry>)> {
    let points = torus_points(emb.e, m)?;
    let left: Vec<Mat2> = phi2
        .terms
        .iter()
        .map(|(_, h)| h.inv())
        .collect::<Result<_>>()?;
    let n1 = phi1.len();
    let n2 = phi2.len();
    let mut sums = vec![AngleSum::new(); n1 * n2];
    let mut trace = Vec::new();
    for pt in &points {
        let chi_t = chi.eval(&pt.t)?;
        let et = emb.embed(&pt.t);
        for (i, (_, g)) in phi1.terms.iter().enumerate() {
            let tg = et * *g;
            for (j, hinv) in left.iter().enumerate() {
                if let Some(phi) = data.phi_angle(&(*hinv * tg))? {
                    let angle = phi + chi_t;
                    sums[i * n2 + j].add(angle, 1);
                    if opts.keep_trace {
                        trace.push(SupportEntry {
                            term: (i, j),
                            twisted: pt.twisted,
                            y: pt.y,
                            level: m,
                            angle,
                        });
                    }
                }
            }
        }
    }
    let den = BigInt::from(emb.e.base().p()).pow(m);
    let mut total = CycloNumber::zero();
    for (i, (c, _)) in phi1.terms.iter().enumerate() {
        for (j, (d, _)) in phi2.terms.iter().enumerate() {
            let s = &sums[i * n2 + j];
            if s.is_empty() {
                continue;
            }
            let inner = s.finish(den.clone(), opts.order_cap)?;
            let coeff = c.try_mul(&d.conj(), opts.order_cap)?;
            total = total.try_add(&coeff.try_mul(&inner, opts.order_cap)?, opts.order_cap)?;
        }
    }
    Ok((total, trace))
}

/// Evaluates `{φ₁, φ₂}` at the first locally constant level and certifies it
/// against the next one, refining further if they disagree.
pub fn period_integral(
    data: &SupercuspidalData,
    chi: &MultChar<QuadExtDescriptor>,
    phi1: &TestVectorSpec,
    phi2: &TestVectorSpec,
    emb: &EmbeddingSpec,
    opts: &IntegralOptions,
) -> Result<IntegralResult> {
    if chi.field() != emb.e {
        return Err(Error::FieldMismatch);
    }
    check_central_character(data, chi)?;
    let m0 = start_level(data, chi, phi1, emb)?;
    let (mut value, mut trace) = pairing_at_level(data, chi, phi1, phi2, emb, m0, opts)?;
    for m in m0..=m0 + opts.max_refine {
        let (next, next_trace) = pairing_at_level(data, chi, phi1, phi2, emb, m + 1, opts)?;
        if next == value {
            return Ok(IntegralResult {
                value,
                certificate: Certificate {
                    m,
                    m_plus_one_equal: true,
                },
                start_level: m0,
                support_trace: trace,
            });
        }
        value = next;
        trace = next_trace;
    }
    Err(Error::UnstableSum(m0 + opts.max_refine + 1))
}
