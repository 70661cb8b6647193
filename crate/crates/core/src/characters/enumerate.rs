use crate::cyclo::RationalAngle;
use crate::error::{Error, Result};
use crate::field::{LocalField, UnitQuotient, DEFAULT_TABLE_BUDGET};
use crate::padic::primitive_root;
use crate::quadext::QuadExtDescriptor;

use super::mult::MultChar;

/// Constraints for [`enumerate_characters`].
#[derive(Clone, Debug, Default)]
pub struct CharConstraints {
    /// Require `χ|_{F^×} = 1` (this also pins the uniformizer value up to sign).
    pub trivial_on_base: bool,
    /// Prescribed `χ(-1)`.
    pub parity: Option<RationalAngle>,
    /// Uniformizer values to emit when `trivial_on_base` is false
    /// (defaults to `[0]`).
    pub unif_values: Vec<RationalAngle>,
    /// Maximum unit-quotient size.
    pub budget: Option<u64>,
}

/// Partial character on a subgroup, as values indexed by quotient class.
type Partial = Vec<Option<RationalAngle>>;

fn close_under<K: LocalField>(
    q: &UnitQuotient<K>,
    start: Partial,
    gens: &[(usize, RationalAngle)],
) -> Option<Partial> {
    let mut h = start;
    let mut frontier: Vec<usize> = (0..h.len()).filter(|&i| h[i].is_some()).collect();
    while let Some(i) = frontier.pop() {
        let vi = h[i].expect("member");
        for &(g, a) in gens {
            let j = q.mul_index(i, g);
            let vj = vi + a;
            match h[j] {
                None => {
                    h[j] = Some(vj);
                    frontier.push(j);
                }
                Some(old) if old != vj => return None,
                Some(_) => {}
            }
        }
    }
    Some(h)
}

fn extend_all<K: LocalField>(q: &UnitQuotient<K>, h: Partial, out: &mut Vec<Vec<RationalAngle>>) {
    let Some(g) = h.iter().position(|v| v.is_none()) else {
        out.push(h.into_iter().map(|v| v.expect("complete")).collect());
        return;
    };
    // smallest k with g^k ∈ H
    let mut powers = vec![q.identity_index(), g];
    let mut idx = g;
    while h[idx].is_none() {
        idx = q.mul_index(idx, g);
        powers.push(idx);
    }
    let k = powers.len() as u64 - 1;
    let target = h[idx].expect("power lands in subgroup");
    let members: Vec<usize> = (0..h.len()).filter(|&i| h[i].is_some()).collect();
    for a in target.divide(k) {
        let mut next = h.clone();
        for &m in &members {
            let vm = h[m].expect("member");
            for (j, &pj) in powers.iter().enumerate().take(k as usize).skip(1) {
                next[q.mul_index(m, pj)] = Some(vm + a.times(j as i64));
            }
        }
        extend_all(q, next, out);
    }
}

/// All characters of `E^×` trivial on `U_E(c)` satisfying the constraints,
/// tabulated at level `c`, in a deterministic order.
pub fn enumerate_characters(
    e: QuadExtDescriptor,
    c: u32,
    constraints: &CharConstraints,
) -> Result<Vec<MultChar<QuadExtDescriptor>>> {
    let budget = constraints.budget.unwrap_or(DEFAULT_TABLE_BUDGET);
    let q = UnitQuotient::get_with_budget(e, c, budget)?;
    let f = e.base();
    let mut fixed: Vec<(usize, RationalAngle)> = Vec::new();
    if constraints.trivial_on_base {
        let g = f.int(primitive_root(f.p()) as i64);
        fixed.push((q.index_of(&e.embed_base(g))?, RationalAngle::ZERO));
        fixed.push((q.index_of(&e.from_ints(-1, 0))?, RationalAngle::ZERO));
    }
    if let Some(par) = constraints.parity {
        fixed.push((q.index_of(&e.from_ints(-1, 0))?, par));
    }
    let mut start: Partial = vec![None; q.len()];
    start[q.identity_index()] = Some(RationalAngle::ZERO);
    let Some(h0) = close_under(&q, start, &fixed) else {
        return Ok(Vec::new());
    };
    let mut tables = Vec::new();
    extend_all(&q, h0, &mut tables);
    let unifs: Vec<RationalAngle> = if constraints.trivial_on_base {
        if e.is_ramified() {
            vec![RationalAngle::ZERO, RationalAngle::half()]
        } else {
            vec![RationalAngle::ZERO]
        }
    } else if constraints.unif_values.is_empty() {
        vec![RationalAngle::ZERO]
    } else {
        constraints.unif_values.clone()
    };
    let mut out = Vec::with_capacity(tables.len() * unifs.len());
    for t in tables {
        for &u in &unifs {
            let chi = MultChar::from_table_unchecked(q.clone(), t.clone(), u);
            if constraints.trivial_on_base {
                let r = chi.restrict_to_base()?;
                if !r.is_trivial() {
                    return Err(Error::InconsistentTable(
                        "enumerated character is not trivial on F".into(),
                    ));
                }
            }
            out.push(chi);
        }
    }
    Ok(out)
}
