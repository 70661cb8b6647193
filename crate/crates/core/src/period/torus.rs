use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;

use crate::error::{Error, Result};
use crate::quadext::{QuadExtDescriptor, QuadExtScalar};

/// One coset `ε(1 + y√D)(1 + ϖ^m √D O_F)` of `F^× \ E^×`.
#[derive(Clone, Copy, Debug)]
pub struct TorusPoint {
    /// `false` for `ε = 1`, `true` for `ε = √D`.
    pub twisted: bool,
    /// Residue of `y` modulo `p^m`.
    pub y: u64,
    pub t: QuadExtScalar,
}

/// Coset representatives of `F^× \ E^×` at level `m` for ramified `E`; each
/// carries weight `q^{-m}` and the total volume is 2.
pub fn torus_points(e: QuadExtDescriptor, m: u32) -> Result<Vec<TorusPoint>> {
    if !e.is_ramified() {
        return Err(Error::UnramifiedUnsupported);
    }
    let count = e
        .base()
        .p()
        .checked_pow(m)
        .filter(|c| *c <= 1 << 24)
        .ok_or(Error::BudgetExceeded {
            what: "torus representatives",
            size: u64::MAX,
            budget: 1 << 24,
        })?;
    let root = e.sqrt_d();
    let mut out = Vec::with_capacity(2 * count as usize);
    for twisted in [false, true] {
        for y in 0..count {
            let base = e.from_ints(1, y as i64);
            let t = if twisted { root * base } else { base };
            out.push(TorusPoint { twisted, y, t });
        }
    }
    Ok(out)
}

/// Weight of a single representative at level `m`.
pub fn point_weight(e: QuadExtDescriptor, m: u32) -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(e.base().p()).pow(m))
}

/// `(t, weight)` pairs.
pub fn torus_representatives(
    e: QuadExtDescriptor,
    m: u32,
) -> Result<Vec<(QuadExtScalar, BigRational)>> {
    let w = point_weight(e, m);
    Ok(torus_points(e, m)?
        .into_iter()
        .map(|pt| (pt.t, w.clone()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::FieldDescriptor;

    fn e3() -> QuadExtDescriptor {
        QuadExtDescriptor::new(FieldDescriptor::new(3, 12).unwrap(), -3).unwrap()
    }

    #[test]
    fn total_volume_is_two() {
        for m in 1..4 {
            let reps = torus_representatives(e3(), m).unwrap();
            assert_eq!(reps.len(), 2 * 3usize.pow(m));
            let total: BigRational = reps.iter().map(|(_, w)| w.clone()).sum();
            assert_eq!(total, BigRational::from_integer(2.into()));
        }
        let m1 = torus_representatives(e3(), 1).unwrap();
        assert_eq!(m1[0].1, BigRational::new(1.into(), 3.into()));
    }

    #[test]
    fn refinement_partitions_cosets() {
        let fine = torus_points(e3(), 2).unwrap();
        for parent in torus_points(e3(), 1).unwrap() {
            let kids = fine
                .iter()
                .filter(|k| k.twisted == parent.twisted && k.y % 3 == parent.y)
                .count();
            assert_eq!(kids, 3);
        }
    }

    #[test]
    fn inert_torus_is_rejected() {
        let e = QuadExtDescriptor::new(FieldDescriptor::new(3, 12).unwrap(), 2).unwrap();
        assert_eq!(
            torus_points(e, 1).unwrap_err(),
            Error::UnramifiedUnsupported
        );
    }
}
