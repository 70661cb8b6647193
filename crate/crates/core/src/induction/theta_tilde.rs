//! Membership in `J = L^× K_A(n)`, the character `θ̃` on `J`, and the
//! matrix coefficient of the minimal vector.
//!
//! Under the `D′`-embedding `ι(√D′) = Π = [[0, 1], [D′, 0]]` and every
//! `l ∈ L^×` is `ϖ^k Π^r ε` with `ε ∈ O_L^×`. Writing `g = ϖ^k Π^r h`, the
//! question `h ∈ ι(O_L^×) K_A(n)` reduces to `h − ι(ε) ∈ B^n`, which can be
//! decided entrywise by reading `ε` off the first row of `h`.

use crate::cyclo::{CycloNumber, RationalAngle};
use crate::error::{Error, Result};
use crate::field::psi_base;
use crate::quadext::{Mat2, QuadExtScalar};

use super::data::{CaseTag, SupercuspidalData};

/// A decomposition `g = ι(l)·k` with `k ∈ K_A(n)`.
#[derive(Clone, Debug)]
pub struct JDecomposition {
    pub l: QuadExtScalar,
    pub k: Mat2,
}

impl SupercuspidalData {
    /// `Π^{-1}` under the `D′`-embedding.
    fn pi_inverse(&self) -> Result<Mat2> {
        let f = self.l.base();
        Ok(Mat2::new(f.zero(), self.d_prime.inv()?, f.one(), f.zero()))
    }

    /// Returns `Some((l, k))` with `g = ι(l)k`, `k ∈ K_A(n)`, or `None` when
    /// `g ∉ J`.
    pub fn decompose_j(&self, g: &Mat2) -> Result<Option<JDecomposition>> {
        let f = self.l.base();
        let j = g.det().checked_valuation()?;
        let e = self.e() as i64;
        let (k, r) = if e == 2 {
            (j.div_euclid(2), j.rem_euclid(2))
        } else {
            (j.div_euclid(2), 0)
        };
        if e == 1 && j.rem_euclid(2) != 0 {
            return Ok(None);
        }
        let mut h = g.scale(f.uniformizer_pow(-k));
        if r == 1 {
            h = self.pi_inverse()? * h;
        }
        let x = h.m[0][0];
        let y = h.m[0][1];
        if !x.has_valuation_at_least(0)? || !y.has_valuation_at_least(0)? {
            return Ok(None);
        }
        let is_unit = if e == 2 {
            !x.has_valuation_at_least(1)?
        } else {
            !(x.has_valuation_at_least(1)? && y.has_valuation_at_least(1)?)
        };
        if !is_unit {
            return Ok(None);
        }
        let t = self.lattice.thresholds(self.n as i64);
        if !(h.m[1][1] - x).has_valuation_at_least(t[1][1])?
            || !(h.m[1][0] - y * self.d_prime).has_valuation_at_least(t[1][0])?
        {
            return Ok(None);
        }
        let eps = self.l.elem(x, y * self.s);
        let mut l = eps.scale(f.uniformizer_pow(k));
        if r == 1 {
            l = l * self.sqrt_d_prime();
        }
        let kmat = self.embed_l(&l.inv()?)? * *g;
        Ok(Some(JDecomposition { l, k: kmat }))
    }

    /// `θ̃(ι(l)k) = θ(l) + ψ(tr(α_θ (k − 1)))` for a given decomposition.
    pub fn theta_tilde_of(&self, dec: &JDecomposition) -> Result<RationalAngle> {
        let x = dec.k.minus_identity();
        let tr = (self.alpha_matrix * x).trace();
        Ok(self.theta.eval(&dec.l)? + psi_base(&tr)?)
    }

    /// `θ̃(g)`, or `None` off `J`.
    pub fn theta_tilde(&self, g: &Mat2) -> Result<Option<RationalAngle>> {
        match self.decompose_j(g)? {
            Some(dec) => self.theta_tilde_of(&dec).map(Some),
            None => Ok(None),
        }
    }

    fn require_one_dimensional(&self) -> Result<()> {
        if self.case == CaseTag::Case3 {
            return Err(Error::UnsupportedCase(
                "matrix coefficient for odd c(θ)".into(),
            ));
        }
        Ok(())
    }

    /// Matrix coefficient of the minimal vector as an angle: `Some(θ̃(g))` on
    /// `J`, `None` where it vanishes.
    pub fn phi_angle(&self, g: &Mat2) -> Result<Option<RationalAngle>> {
        self.require_one_dimensional()?;
        self.theta_tilde(g)
    }

    /// `Φ_{φ₀}(g)`.
    pub fn matrix_coefficient(&self, g: &Mat2) -> Result<CycloNumber> {
        Ok(match self.phi_angle(g)? {
            Some(a) => CycloNumber::from_angle(a),
            None => CycloNumber::zero(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::MultChar;
    use crate::padic::FieldDescriptor;
    use crate::quadext::QuadExtDescriptor;

    fn data() -> SupercuspidalData {
        let e = QuadExtDescriptor::new(FieldDescriptor::new(3, 14).unwrap(), -3).unwrap();
        let a = |n, d| RationalAngle::new(n, d);
        let theta = MultChar::from_generators(
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
        .unwrap();
        SupercuspidalData::classify(&theta).unwrap()
    }

    #[test]
    fn identity_and_torus_elements() {
        let d = data();
        let f = d.l.base();
        assert_eq!(
            d.matrix_coefficient(&Mat2::identity(f)).unwrap(),
            CycloNumber::one()
        );
        let r = d.sqrt_d_prime();
        let dec = d.decompose_j(&d.embed_l(&r).unwrap()).unwrap().unwrap();
        assert_eq!(dec.l, r);
        assert_eq!(dec.k, Mat2::identity(f));
        for (x, y) in [(1, 1), (2, 5), (4, -3), (1, 0)] {
            let l = d.l.from_ints(x, y) * d.l.uniformizer_pow(3);
            let ang = d.theta_tilde(&d.embed_l(&l).unwrap()).unwrap().unwrap();
            assert_eq!(ang, d.theta.eval(&l).unwrap());
        }
    }

    #[test]
    fn off_support_and_deep_level() {
        let d = data();
        let f = d.l.base();
        assert!(d
            .matrix_coefficient(&Mat2::diag(f.one(), f.int(3)))
            .unwrap()
            .is_zero());
        let deep = Mat2::new(f.int(1 + 81), f.int(27), f.int(81), f.int(1 - 27));
        assert_eq!(d.theta_tilde(&deep).unwrap(), Some(RationalAngle::ZERO));
    }

    #[test]
    fn theta_tilde_is_multiplicative_on_j() {
        let d = data();
        let f = d.l.base();
        let k1 = Mat2::new(f.int(1 + 9), f.int(3), f.int(9), f.int(1 - 9));
        let k2 = Mat2::new(f.int(1 - 3), f.int(9), f.int(27), f.int(1 + 3));
        let l1 = d.embed_l(&d.l.from_ints(2, 1)).unwrap();
        let l2 = d.embed_l(&d.sqrt_d_prime()).unwrap();
        let g1 = l1 * k1;
        let g2 = l2 * k2;
        let t = |g: &Mat2| d.theta_tilde(g).unwrap().unwrap();
        assert_eq!(t(&(g1 * g2)), t(&g1) + t(&g2));
        assert_eq!(t(&(g2 * g1)), t(&g1) + t(&g2));
    }
}
