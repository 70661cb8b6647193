//! Text notation for characters and test vectors.
//!
//! A character is `LEVEL:UNIF:x=ANGLE;x=ANGLE;...`, listing generator values
//! of `O_E^×/U_E(LEVEL)` and the value at `√D`. Elements `x` are written
//! `a,b` for `a + b√D` with rational `a`, `b`; angles are fractions of a
//! full turn. Example: `4:1/4:-1,0=1/2;1,1=2/3;1,-1=1/3;1,3=1/3`.
//!
//! A test vector is `u,v;u,v;...` for `Σ π(n(u) diag(v, 1)) φ₀`.

use crate::cyclo::{CycloNumber, RationalAngle};
use crate::error::{Error, Result};
use crate::padic::{FieldDescriptor, PAdicScalar};
use crate::period::TestVectorSpec;
use crate::quadext::{Mat2, QuadExtDescriptor, QuadExtScalar};

use super::mult::MultChar;

fn parse_rational(f: FieldDescriptor, s: &str) -> Result<PAdicScalar> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<i64>().map_err(|_| bad())?,
            d.trim().parse::<i64>().map_err(|_| bad())?,
        ),
        None => (s.parse::<i64>().map_err(|_| bad())?, 1),
    };
    f.rational(n, d)
}

fn parse_pair(s: &str) -> Result<(&str, &str)> {
    s.split_once(',')
        .ok_or_else(|| Error::Parse(format!("expected 'a,b', found '{s}'")))
}

/// Parses `a,b` as `a + b√D`.
pub fn parse_element(e: QuadExtDescriptor, s: &str) -> Result<QuadExtScalar> {
    let (a, b) = parse_pair(s)?;
    Ok(e.elem(parse_rational(e.base(), a)?, parse_rational(e.base(), b)?))
}

pub fn parse_character(e: QuadExtDescriptor, s: &str) -> Result<MultChar<QuadExtDescriptor>> {
    let mut parts = s.trim().splitn(3, ':');
    let level = parts.next().unwrap_or_default();
    let level: u32 = level
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad level '{level}'")))?;
    let unif: RationalAngle = parts
        .next()
        .ok_or_else(|| Error::Parse("missing uniformizer value".into()))?
        .parse()?;
    let mut gens = Vec::new();
    for item in parts
        .next()
        .unwrap_or_default()
        .split(';')
        .filter(|t| !t.trim().is_empty())
    {
        let (x, a) = item
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected 'a,b=angle', found '{item}'")))?;
        gens.push((parse_element(e, x)?, a.parse::<RationalAngle>()?));
    }
    let chi = MultChar::from_generators(e, level, &gens, unif)?;
    chi.check_homomorphism()?;
    Ok(chi)
}

pub fn parse_test_vector(f: FieldDescriptor, s: &str) -> Result<TestVectorSpec> {
    let mut terms = Vec::new();
    for item in s.split(';').filter(|t| !t.trim().is_empty()) {
        let (u, v) = parse_pair(item)?;
        let g = Mat2::unipotent(parse_rational(f, u)?) * Mat2::diag(parse_rational(f, v)?, f.one());
        terms.push((CycloNumber::one(), g));
    }
    if terms.is_empty() {
        return Err(Error::Parse("empty test vector".into()));
    }
    Ok(TestVectorSpec { terms })
}
