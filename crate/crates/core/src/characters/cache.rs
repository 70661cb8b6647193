//! Versioned text serialization of character tables.
//!
//! ```text
//! TORIC-CHARTABLE v1
//! p 3
//! D -3
//! level 4
//! unif 1/4
//! 0 1/2
//! 1 0
//! ...
//! ```
//! Body lines are `index angle` in the canonical representative order.

use std::fs;
use std::path::{Path, PathBuf};

use crate::cyclo::RationalAngle;
use crate::error::{Error, Result};
use crate::field::UnitQuotient;
use crate::padic::FieldDescriptor;
use crate::quadext::QuadExtDescriptor;

use super::mult::MultChar;

pub const MAGIC: &str = "TORIC-CHARTABLE";
pub const VERSION: u32 = 1;
const EXTENSION: &str = "chartable";

pub fn serialize(chi: &MultChar<QuadExtDescriptor>) -> String {
    let e = chi.field();
    let mut s = format!(
        "{MAGIC} v{VERSION}\np {}\nD {}\nlevel {}\nunif {}\n",
        e.base().p(),
        e.d_int(),
        chi.level(),
        chi.unif_value()
    );
    for (i, a) in chi.table().iter().enumerate() {
        s.push_str(&format!("{i} {a}\n"));
    }
    s
}

fn header_field<'a>(line: Option<&'a str>, name: &str) -> Result<&'a str> {
    let line = line.ok_or_else(|| Error::Cache(format!("missing '{name}' line")))?;
    match line.split_once(' ') {
        Some((k, v)) if k == name => Ok(v.trim()),
        _ => Err(Error::Cache(format!("expected '{name}', found '{line}'"))),
    }
}

/// Parses a table, using `base` for the working precision. The prime in the
/// file must match `base`.
pub fn deserialize(text: &str, base: FieldDescriptor) -> Result<MultChar<QuadExtDescriptor>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Cache("empty file".into()))?;
    let (magic, version) = header
        .split_once(' ')
        .ok_or_else(|| Error::Cache(format!("bad header '{header}'")))?;
    if magic != MAGIC {
        return Err(Error::Cache(format!("not a character table: '{header}'")));
    }
    if version != format!("v{VERSION}") {
        return Err(Error::Cache(format!(
            "unsupported table version '{version}' (expected v{VERSION})"
        )));
    }
    let parse_err = |what: &str| Error::Cache(format!("malformed {what}"));
    let p: u64 = header_field(lines.next(), "p")?
        .parse()
        .map_err(|_| parse_err("p"))?;
    if p != base.p() {
        return Err(Error::Cache(format!(
            "table is for p = {p}, context has p = {}",
            base.p()
        )));
    }
    let d: i64 = header_field(lines.next(), "D")?
        .parse()
        .map_err(|_| parse_err("D"))?;
    let level: u32 = header_field(lines.next(), "level")?
        .parse()
        .map_err(|_| parse_err("level"))?;
    let unif: RationalAngle = header_field(lines.next(), "unif")?.parse()?;
    let e = QuadExtDescriptor::new(base, d)?;
    let q = UnitQuotient::get(e, level)?;
    let mut table = vec![None; q.len()];
    for line in lines.filter(|l| !l.trim().is_empty()) {
        let (i, a) = line
            .split_once(' ')
            .ok_or_else(|| parse_err("table line"))?;
        let i: usize = i.parse().map_err(|_| parse_err("index"))?;
        let slot = table
            .get_mut(i)
            .ok_or_else(|| Error::Cache(format!("index {i} out of range")))?;
        *slot = Some(a.parse::<RationalAngle>()?);
    }
    let table = table
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::Cache(format!("missing entry {i}"))))
        .collect::<Result<Vec<_>>>()?;
    MultChar::from_table(q, table, unif)
}

/// A directory of named character tables.
pub struct CharCache {
    dir: PathBuf,
}

impl CharCache {
    pub fn new(dir: impl Into<PathBuf>) -> CharCache {
        CharCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, name: &str) -> Result<PathBuf> {
        if name.is_empty()
            || !name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
        {
            return Err(Error::Cache(format!("invalid table name '{name}'")));
        }
        Ok(self.dir.join(format!("{name}.{EXTENSION}")))
    }

    pub fn store(&self, name: &str, chi: &MultChar<QuadExtDescriptor>) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path(name)?;
        fs::write(&path, serialize(chi))?;
        Ok(path)
    }

    pub fn fetch(
        &self,
        name: &str,
        base: FieldDescriptor,
    ) -> Result<Option<MultChar<QuadExtDescriptor>>> {
        let path = self.path(name)?;
        if !path.exists() {
            return Ok(None);
        }
        deserialize(&fs::read_to_string(&path)?, base).map(Some)
    }

    pub fn list(&self) -> Result<Vec<String>> {
        if !self.dir.exists() {
            return Ok(Vec::new());
        }
        let mut names: Vec<String> = fs::read_dir(&self.dir)?
            .filter_map(|e| e.ok())
            .filter_map(|e| {
                let p = e.path();
                (p.extension().and_then(|x| x.to_str()) == Some(EXTENSION))
                    .then(|| p.file_stem().and_then(|s| s.to_str()).map(str::to_owned))
                    .flatten()
            })
            .collect();
        names.sort();
        Ok(names)
    }

    /// Removes every table; returns how many were deleted.
    pub fn clear(&self) -> Result<usize> {
        let names = self.list()?;
        for n in &names {
            fs::remove_file(self.path(n)?)?;
        }
        Ok(names.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::enumerate::{enumerate_characters, CharConstraints};

    fn base() -> FieldDescriptor {
        FieldDescriptor::new(3, 12).unwrap()
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let e = QuadExtDescriptor::new(base(), -3).unwrap();
        for chi in enumerate_characters(
            e,
            4,
            &CharConstraints {
                trivial_on_base: true,
                ..Default::default()
            },
        )
        .unwrap()
        {
            let s = serialize(&chi);
            let back = deserialize(&s, base()).unwrap();
            assert_eq!(back, chi);
            assert_eq!(serialize(&back), s);
        }
    }

    #[test]
    fn version_mismatch_is_refused() {
        let e = QuadExtDescriptor::new(base(), -3).unwrap();
        let s = serialize(&MultChar::trivial(e)).replace("v1", "v2");
        assert!(matches!(deserialize(&s, base()), Err(Error::Cache(m)) if m.contains("version")));
        let bad = "SOMETHING v1\n";
        assert!(deserialize(bad, base()).is_err());
    }

    #[test]
    fn directory_cache() {
        let dir = tempfile::tempdir().unwrap();
        let cache = CharCache::new(dir.path());
        let e = QuadExtDescriptor::new(base(), -3).unwrap();
        let chi = MultChar::unramified(e, RationalAngle::half());
        cache.store("half", &chi).unwrap();
        assert_eq!(cache.list().unwrap(), vec!["half".to_string()]);
        assert_eq!(cache.fetch("half", base()).unwrap().unwrap(), chi);
        assert!(cache.fetch("absent", base()).unwrap().is_none());
        assert!(cache.store("../x", &chi).is_err());
        assert_eq!(cache.clear().unwrap(), 1);
    }
}
