//! Quadratic character, Langlands' λ-constant, and the level ≤ 1 twist
//! relating the inducing character to the Langlands parameter.

use crate::cyclo::{CycloNumber, RationalAngle};
use crate::error::{Error, Result};
use crate::field::UnitQuotient;
use crate::padic::{legendre, FieldDescriptor, PAdicScalar};
use crate::quadext::QuadExtDescriptor;

use super::alpha::{alpha_of_char, AlphaElement};
use super::mult::MultChar;

fn sign_angle(s: i32) -> RationalAngle {
    if s == 1 {
        RationalAngle::ZERO
    } else {
        RationalAngle::half()
    }
}

/// `η_{E/F}` as a character of `F^×`.
pub fn eta(e: QuadExtDescriptor) -> MultChar<FieldDescriptor> {
    let f = e.base();
    let p = f.p();
    if e.is_ramified() {
        let q = UnitQuotient::get(f, 1).expect("level-1 quotient");
        let table = q
            .reps()
            .iter()
            .map(|r| sign_angle(legendre(r.residue(1).expect("integral") as i64, p)))
            .collect();
        MultChar::from_table_unchecked(q, table, sign_angle(legendre(-e.xi(), p)))
    } else {
        MultChar::unramified(f, RationalAngle::half())
    }
}

/// Value of `η_{E/F}` at `x ∈ F^×`.
pub fn eta_at(e: QuadExtDescriptor, x: &PAdicScalar) -> Result<RationalAngle> {
    eta(e).eval(x)
}

/// Quadratic Gauss sum `τ(η, ψ_γ) = Σ_{x ∈ F_p^×} η(x) ψ(γx)` for `v(γ) = -1`.
pub fn gauss_sum(e: QuadExtDescriptor, gamma: &PAdicScalar) -> Result<CycloNumber> {
    let f = e.base();
    if gamma.checked_valuation()? != -1 {
        return Err(Error::UnsupportedCase(
            "Gauss sum needs a level-one additive character".into(),
        ));
    }
    let eta_c = eta(e);
    let mut acc = CycloNumber::zero();
    for x in 1..f.p() {
        let xs = f.int(x as i64);
        let angle = eta_c.eval(&xs)? + crate::field::psi_base(&(*gamma * xs))?;
        acc = acc + CycloNumber::from_angle(angle);
    }
    Ok(acc)
}

/// `λ_{E/F}(ψ_β)` for ramified `E`, with `ψ_β(x) = ψ(βx)`.
pub fn lambda(e: QuadExtDescriptor, beta: &PAdicScalar) -> Result<CycloNumber> {
    if !e.is_ramified() {
        return Err(Error::UnsupportedCase(
            "λ is only tabulated for ramified extensions".into(),
        ));
    }
    let f = e.base();
    let v = beta.checked_valuation()?;
    let gamma = *beta * f.uniformizer_pow(-v - 1);
    let tau = gauss_sum(e, &gamma)?;
    let eta_pi = eta(e).unif_value().times(v + 1);
    let inv_sqrt_q = CycloNumber::sqrt_prime(f.p()).scale(&num_rational::BigRational::new(
        1.into(),
        (f.p() as i64).into(),
    ));
    Ok(CycloNumber::from_angle(eta_pi) * tau * inv_sqrt_q)
}

/// `λ_{E/F}(ψ)` for the unramified `ψ`, as an angle.
pub fn lambda_angle(e: QuadExtDescriptor) -> Result<RationalAngle> {
    lambda(e, &e.base().one())?.as_root_of_unity()
}

/// `Δ_θ`: for inert `L` the unramified quadratic character; for ramified `L`
/// the level-1 character with `Δ|_F = η` and
/// `Δ(ϖ_L) = η(ϖ_L^{c-1} α_θ)·λ(ψ)^{c-1}`.
pub fn delta_theta(
    theta: &MultChar<QuadExtDescriptor>,
    alpha: Option<&AlphaElement<QuadExtDescriptor>>,
) -> Result<MultChar<QuadExtDescriptor>> {
    delta_theta_at_uniformizer(theta, alpha, &theta.field().base().one())
}

/// Same construction with the uniformizer `ϖ_L` replaced by `w·ϖ_L` for a
/// unit `w ∈ O_F^×`; the result must not depend on `w`.
pub fn delta_theta_at_uniformizer(
    theta: &MultChar<QuadExtDescriptor>,
    alpha: Option<&AlphaElement<QuadExtDescriptor>>,
    w: &PAdicScalar,
) -> Result<MultChar<QuadExtDescriptor>> {
    let l = theta.field();
    if !l.is_ramified() {
        return Ok(MultChar::unramified(l, RationalAngle::half()));
    }
    let c = theta.conductor();
    if c == 0 || c % 2 == 1 {
        return Err(Error::OddConductor);
    }
    let owned;
    let alpha = match alpha {
        Some(a) => a,
        None => {
            owned = alpha_of_char(theta)?;
            &owned
        }
    };
    let y = alpha.sqrt_d_coefficient()?;
    let eta_c = eta(l);
    // ϖ'^{c-1}·y√D = w^{c-1}·D^{c/2}·y ∈ F
    let point = w.pow(c as i64 - 1)? * l.d().pow(c as i64 / 2)? * y;
    let lam = lambda_angle(l)?;
    let at_new_unif = eta_c.eval(&point)? + lam.times(c as i64 - 1);
    let unif = at_new_unif - eta_c.eval(w)?;
    let q = UnitQuotient::get(l, 1)?;
    let table = q
        .reps()
        .iter()
        .map(|r| eta_c.eval(&r.a))
        .collect::<Result<Vec<_>>>()?;
    Ok(MultChar::from_table_unchecked(q, table, unif))
}

/// `θ = Θ·Δ_Θ`, returning `θ` together with the shared `α`.
pub fn langlands_twist(
    big_theta: &MultChar<QuadExtDescriptor>,
) -> Result<(
    MultChar<QuadExtDescriptor>,
    Option<AlphaElement<QuadExtDescriptor>>,
)> {
    let l = big_theta.field();
    if !l.is_ramified() {
        let delta = delta_theta(big_theta, None)?;
        let alpha = alpha_of_char(big_theta).ok();
        return Ok((big_theta.product(&delta)?, alpha));
    }
    let alpha = alpha_of_char(big_theta)?.trace_free()?;
    let delta = delta_theta(big_theta, Some(&alpha))?;
    Ok((big_theta.product(&delta)?, Some(alpha)))
}
