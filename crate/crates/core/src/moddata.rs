//! Tables of Hecke eigenvalues a_p of classical newforms.
//!
//! File format: `key=value` header lines for `label`, `weight`, `level`,
//! `character` and optionally `values` (`ap`, the default, or `ap2` when the
//! rows hold a_p² because a_p itself is irrational), then rows `p,value`.
//! Lines starting with `#` and blank lines are ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::neighbour::is_prime;
use crate::Integer;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ApValues {
    #[default]
    Ap,
    ApSquared,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApTable {
    pub label: String,
    pub weight: u32,
    pub level: u64,
    pub character: String,
    pub values: ApValues,
    pub entries: BTreeMap<u64, Integer>,
}

impl ApTable {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.keys().copied()
    }

    pub fn ap(&self, p: u64) -> Result<Integer> {
        if self.values == ApValues::ApSquared {
            return Err(Error::InvalidArgument(format!("{} lists only a_p^2", self.label)));
        }
        self.raw(p).cloned()
    }

    pub fn ap_squared(&self, p: u64) -> Result<Integer> {
        let v = self.raw(p)?;
        Ok(match self.values {
            ApValues::Ap => v * v,
            ApValues::ApSquared => v.clone(),
        })
    }

    fn raw(&self, p: u64) -> Result<&Integer> {
        self.entries
            .get(&p)
            .ok_or_else(|| Error::InvalidArgument(format!("{} has no entry for p = {p}", self.label)))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "label={}", self.label).unwrap();
        writeln!(s, "weight={}", self.weight).unwrap();
        writeln!(s, "level={}", self.level).unwrap();
        writeln!(s, "character={}", self.character).unwrap();
        if self.values == ApValues::ApSquared {
            writeln!(s, "values=ap2").unwrap();
        }
        for (p, v) in &self.entries {
            writeln!(s, "{p},{v}").unwrap();
        }
        s
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

pub fn load_ap_table(path: &Path) -> Result<ApTable> {
    parse_ap_table(&std::fs::read_to_string(path)?)
}

pub fn parse_ap_table(text: &str) -> Result<ApTable> {
    let mut label = None;
    let mut weight = None;
    let mut level = None;
    let mut character = None;
    let mut values = ApValues::Ap;
    let mut entries = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let err = |msg: String| Error::Parse { line: i + 1, msg };
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some((key, value)) = line.split_once('=') {
            if !entries.is_empty() {
                return Err(err("header after data rows".into()));
            }
            let value = value.trim();
            match key.trim() {
                "label" => label = Some(value.to_string()),
                "weight" => weight = Some(value.parse().map_err(|_| err(format!("bad weight {value:?}")))?),
                "level" => level = Some(value.parse().map_err(|_| err(format!("bad level {value:?}")))?),
                "character" => character = Some(value.to_string()),
                "values" => {
                    values = match value {
                        "ap" => ApValues::Ap,
                        "ap2" => ApValues::ApSquared,
                        _ => return Err(err(format!("unknown value kind {value:?}"))),
                    }
                }
                other => return Err(err(format!("unknown header {other:?}"))),
            }
            continue;
        }
        let (p, v) = line
            .split_once(',')
            .ok_or_else(|| err(format!("expected p,a_p but found {line:?}")))?;
        let p: u64 = p.trim().parse().map_err(|_| err(format!("bad prime {p:?}")))?;
        if !is_prime(p) {
            return Err(err(format!("{p} is not prime")));
        }
        let v: Integer = v.trim().parse().map_err(|_| err(format!("non-integer entry {:?}", v.trim())))?;
        if entries.insert(p, v).is_some() {
            return Err(err(format!("duplicate prime {p}")));
        }
    }
    let missing = |what: &str| Error::Parse {
        line: 0,
        msg: format!("missing header {what}"),
    };
    Ok(ApTable {
        label: label.ok_or_else(|| missing("label"))?,
        weight: weight.ok_or_else(|| missing("weight"))?,
        level: level.ok_or_else(|| missing("level"))?,
        character: character.ok_or_else(|| missing("character"))?,
        values,
        entries,
    })
}
