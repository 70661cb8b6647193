use num_rational::BigRational;

use crate::characters::MultChar;
use crate::error::Result;
use crate::induction::SupercuspidalData;
use crate::quadext::{Mat2, QuadExtDescriptor};

use super::integral::{period_integral, IntegralOptions};
use super::newform::PairMatrix;
use super::solver::{solve_with, TwistInfo};
use super::spec::{unit_residues, EmbeddingSpec, TestVectorSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossTermReport {
    /// A vanishing diagonal entry kills its row and column.
    pub vanishing_ok: bool,
    /// Equal nonzero diagonal magnitudes give the same off-diagonal magnitude.
    pub magnitude_ok: bool,
    /// `|{φ_x, φ_x′}|² = |{φ_x′, φ_x}|²` for every pair.
    pub symmetric_ok: bool,
    pub nonvanishing_diagonal: usize,
}

impl CrossTermReport {
    pub fn holds(&self) -> bool {
        self.vanishing_ok && self.magnitude_ok && self.symmetric_ok
    }
}

pub fn cross_term_structure(m: &PairMatrix) -> Result<CrossTermReport> {
    let n = m.xs.len();
    let abs2 = |i: usize, j: usize| -> Result<BigRational> { m.get(i, j).abs_squared() };
    let mut vanishing_ok = true;
    let mut magnitude_ok = true;
    let mut symmetric_ok = true;
    let mut nonvanishing_diagonal = 0;
    for i in 0..n {
        let di = abs2(i, i)?;
        if m.get(i, i).is_zero() {
            vanishing_ok &= (0..n).all(|j| m.get(i, j).is_zero() && m.get(j, i).is_zero());
        } else {
            nonvanishing_diagonal += 1;
        }
        for j in 0..n {
            if abs2(i, j)? != abs2(j, i)? {
                symmetric_ok = false;
            }
            if i != j && !m.get(i, i).is_zero() && di == abs2(j, j)? && abs2(i, j)? != di {
                magnitude_ok = false;
            }
        }
    }
    Ok(CrossTermReport {
        vanishing_ok,
        magnitude_ok,
        symmetric_ok,
        nonvanishing_diagonal,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarSymmetryReport {
    /// `I(φ, χ) = I(π(diag(−1, 1))φ, χ̄)` on every sampled vector.
    pub integrals_equal: bool,
    pub sampled: usize,
    /// When `c(θχ) = c(θχ̄)` is in range: the solution set for `χ̄` is the
    /// negative of that for `χ`.
    pub solutions_negated: Option<bool>,
}

impl BarSymmetryReport {
    pub fn holds(&self) -> bool {
        self.integrals_equal && self.solutions_negated.unwrap_or(true)
    }
}

/// Samples `φ₀` and every `φ_v`, `v ∈ (O/ϖ^{⌈n/2⌉})^×`.
pub fn bar_symmetry_check(
    data: &SupercuspidalData,
    chi: &MultChar<QuadExtDescriptor>,
    opts: &IntegralOptions,
) -> Result<BarSymmetryReport> {
    let e = chi.field();
    let f = e.base();
    let emb = EmbeddingSpec::standard(e);
    let chi_bar = chi.bar_conjugate();
    let flip = Mat2::diag(f.int(-1), f.one());
    let k = data.n.div_ceil(2);
    let mut vectors = vec![TestVectorSpec::phi0(f)];
    for v in unit_residues(f.p(), k) {
        vectors.push(TestVectorSpec::test_vector(f.zero(), f.int(v as i64)));
    }
    let mut integrals_equal = true;
    for phi in &vectors {
        let lhs = period_integral(data, chi, phi, phi, &emb, opts)?.value;
        let flipped = phi.translated(&flip);
        let rhs = period_integral(data, &chi_bar, &flipped, &flipped, &emb, opts)?.value;
        integrals_equal &= lhs == rhs;
    }
    let tw = TwistInfo::new(data, chi)?;
    let tw_bar = TwistInfo::new(data, &chi_bar)?;
    let in_range = |t: &TwistInfo| t.l().is_some_and(|l| l > 0 && l <= data.n);
    let solutions_negated = if tw.conductor == tw_bar.conductor && in_range(&tw) {
        let modulus = f.p().pow(k);
        let a = solve_with(data, &tw, &f.zero())?.solutions;
        let mut b: Vec<u64> = solve_with(data, &tw_bar, &f.zero())?
            .solutions
            .into_iter()
            .map(|v| (modulus - v) % modulus)
            .collect();
        b.sort_unstable();
        Some(a == b)
    } else {
        None
    };
    Ok(BarSymmetryReport {
        integrals_equal,
        sampled: vectors.len(),
        solutions_negated,
    })
}
