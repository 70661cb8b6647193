use crate::error::Result;
use crate::padic::PAdicScalar;
use crate::quadext::Mat2;

/// The hereditary order `A` (`e = 1`: `M_2(O)`; `e = 2`: the Iwahori order)
/// and the filtration `K_A(m) = 1 + B^m` by powers of its radical.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderLattice {
    e: u32,
}

impl OrderLattice {
    pub fn new(e: u32) -> OrderLattice {
        assert!(e == 1 || e == 2, "ramification index must be 1 or 2");
        OrderLattice { e }
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    /// Minimal valuations `[[v11, v12], [v21, v22]]` of entries of `B^m`.
    pub fn thresholds(&self, m: i64) -> [[i64; 2]; 2] {
        if self.e == 1 {
            return [[m, m], [m, m]];
        }
        let up = (m + 1).div_euclid(2);
        let down = m.div_euclid(2);
        [[up, down], [down + 1, up]]
    }

    /// Decides `x ∈ B^m`.
    pub fn in_radical_power(&self, x: &Mat2, m: i64) -> Result<bool> {
        let t = self.thresholds(m);
        for (row, bounds) in x.m.iter().zip(&t) {
            for (entry, bound) in row.iter().zip(bounds) {
                if !entry.has_valuation_at_least(*bound)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Decides `g ∈ K_A(m)` for `m ≥ 1`.
    pub fn in_congruence_subgroup(&self, g: &Mat2, m: i64) -> Result<bool> {
        self.in_radical_power(&g.minus_identity(), m)
    }

    /// Largest `m` with `x ∈ B^m`, or `None` for the zero matrix.
    pub fn level_of(&self, x: &Mat2) -> Option<i64> {
        let w = |s: &PAdicScalar, scale: i64, shift: i64| s.valuation().map(|v| scale * v + shift);
        let vals = if self.e == 1 {
            [
                w(&x.m[0][0], 1, 0),
                w(&x.m[0][1], 1, 0),
                w(&x.m[1][0], 1, 0),
                w(&x.m[1][1], 1, 0),
            ]
        } else {
            [
                w(&x.m[0][0], 2, 0),
                w(&x.m[0][1], 2, 1),
                w(&x.m[1][0], 2, -1),
                w(&x.m[1][1], 2, 0),
            ]
        };
        vals.into_iter().flatten().min()
    }
}
