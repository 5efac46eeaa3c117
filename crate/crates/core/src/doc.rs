//! JSON documents for modules. Matrices have rows indexed by the source basis
//! and columns by the target basis in degree `d - i`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::amodule::AModule;
use crate::error::{BgxError, Result};
use crate::f2::{BitMatrix, BitVec};
use crate::steenrod::{AlgebraSpec, MilnorElt};

/// An action key `"Sq<i>"`, ordered numerically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SqKey(pub u32);

impl Serialize for SqKey {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("Sq{}", self.0))
    }
}

impl<'de> Deserialize<'de> for SqKey {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.strip_prefix("Sq")
            .and_then(|i| i.parse().ok())
            .map(SqKey)
            .ok_or_else(|| de::Error::custom(format!("action key {s:?} is not of the form Sq<i>")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRange {
    pub min: i32,
    pub max: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDocument {
    pub name: String,
    pub algebra: String,
    pub degrees: DegreeRange,
    pub dims: BTreeMap<i32, usize>,
    pub basis: BTreeMap<i32, Vec<String>>,
    pub actions: BTreeMap<SqKey, BTreeMap<i32, Vec<Vec<u8>>>>,
}

impl fmt::Display for ModuleDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_json())
    }
}

fn schema(pointer: impl Into<String>, message: impl Into<String>) -> BgxError {
    BgxError::Schema {
        pointer: pointer.into(),
        message: message.into(),
    }
}

/// Rewrites every `Sq(r1,...,rk)` in a label to its normal form.
pub fn normalize_label(label: &str) -> String {
    let mut out = String::new();
    let mut rest = label;
    while let Some(pos) = rest.find("Sq(") {
        out.push_str(&rest[..pos]);
        let tail = &rest[pos..];
        match tail.find(')') {
            Some(end) => {
                let token = &tail[..=end];
                match token.parse::<MilnorElt>() {
                    Ok(m) => out.push_str(&m.to_string()),
                    Err(_) => out.push_str(token),
                }
                rest = &tail[end + 1..];
            }
            None => {
                out.push_str(tail);
                rest = "";
            }
        }
    }
    out.push_str(rest);
    out
}

impl ModuleDocument {
    pub fn from_module(m: &AModule) -> Self {
        let degrees = DegreeRange {
            min: m.min_degree(),
            max: m.max_degree(),
        };
        let dims = m.degrees().map(|d| (d, m.dim(d))).collect();
        let basis = m.degrees().map(|d| (d, m.labels(d).to_vec())).collect();
        let mut actions: BTreeMap<SqKey, BTreeMap<i32, Vec<Vec<u8>>>> = BTreeMap::new();
        for (&(i, d), mat) in m.actions() {
            if mat.is_zero() {
                continue;
            }
            let rows = mat
                .row_vecs()
                .iter()
                .map(|r| r.to_bools().into_iter().map(u8::from).collect())
                .collect();
            actions.entry(SqKey(i)).or_default().insert(d, rows);
        }
        Self {
            name: m.name().to_string(),
            algebra: m.algebra().name(),
            degrees,
            dims,
            basis,
            actions,
        }
    }

    /// Builds and validates the module.
    pub fn to_module(&self) -> Result<AModule> {
        let algebra = AlgebraSpec::from_name(&self.algebra).map_err(|e| schema("/algebra", e.to_string()))?;
        let DegreeRange { min, max } = self.degrees;
        if max < min - 1 {
            return Err(schema("/degrees", format!("max {max} is below min {min} - 1")));
        }
        for &d in self.dims.keys() {
            if d < min || d > max {
                return Err(schema(format!("/dims/{d}"), "degree outside the declared range"));
            }
        }
        let dims: Vec<usize> = (min..=max).map(|d| self.dims.get(&d).copied().unwrap_or(0)).collect();
        let mut labels = Vec::new();
        for d in min..=max {
            let n = self.dims.get(&d).copied().unwrap_or(0);
            let l = match self.basis.get(&d) {
                Some(l) if l.len() == n => l.iter().map(|s| normalize_label(s)).collect(),
                Some(l) => {
                    return Err(schema(
                        format!("/basis/{d}"),
                        format!("{} labels for dimension {n}", l.len()),
                    ))
                }
                None if n == 0 => Vec::new(),
                None => return Err(schema(format!("/basis/{d}"), "missing labels")),
            };
            labels.push(l);
        }
        for &d in self.basis.keys() {
            if !self.dims.contains_key(&d) && !self.basis[&d].is_empty() {
                return Err(schema(format!("/basis/{d}"), "labels for a degree without a dimension"));
            }
        }
        let dim = |d: i32| self.dims.get(&d).copied().unwrap_or(0);
        let mut actions = BTreeMap::new();
        for (&SqKey(i), per_degree) in &self.actions {
            if i == 0 {
                return Err(schema("/actions/Sq0", "Sq0 is the identity and is not stored"));
            }
            for (&d, rows) in per_degree {
                let ptr = format!("/actions/Sq{i}/{d}");
                let (r, c) = (dim(d), dim(d - i as i32));
                if rows.len() != r {
                    return Err(schema(ptr, format!("{} rows, expected {r}", rows.len())));
                }
                let mut out = Vec::new();
                for (k, row) in rows.iter().enumerate() {
                    if row.len() != c {
                        return Err(schema(format!("{ptr}/{k}"), format!("{} columns, expected {c}", row.len())));
                    }
                    if let Some(j) = row.iter().position(|&b| b > 1) {
                        return Err(schema(format!("{ptr}/{k}/{j}"), "entries must be 0 or 1"));
                    }
                    out.push(BitVec::from_bools(&row.iter().map(|&b| b == 1).collect::<Vec<_>>()));
                }
                actions.insert((i, d), BitMatrix::from_rows(c, out));
            }
        }
        let m = AModule::from_parts(self.name.clone(), algebra, min, dims, labels, actions)?;
        m.validate()?;
        Ok(m)
    }

    pub fn to_canonical_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            schema(
                format!("line {} column {}", e.line(), e.column()),
                e.to_string(),
            )
        })
    }
}

pub fn read_module(path: &Path) -> Result<AModule> {
    let text = std::fs::read_to_string(path)?;
    ModuleDocument::parse(&text)?.to_module()
}

pub fn write_module(m: &AModule, path: &Path) -> Result<()> {
    std::fs::write(path, ModuleDocument::from_module(m).to_canonical_json())?;
    Ok(())
}

/// Parse, validate and re-serialize.
pub fn convert(text: &str) -> Result<String> {
    let m = ModuleDocument::parse(text)?.to_module()?;
    Ok(ModuleDocument::from_module(&m).to_canonical_json())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brown_gitler::brown_gitler;

    #[test]
    fn round_trip() {
        let g = brown_gitler(5);
        let text = ModuleDocument::from_module(&g).to_canonical_json();
        assert_eq!(convert(&text).unwrap(), text);
        let back = ModuleDocument::parse(&text).unwrap().to_module().unwrap();
        assert!(back.same_structure(&g));
    }

    #[test]
    fn labels_normalize() {
        assert_eq!(normalize_label("ι3·Sq(1,0,0)"), "ι3·Sq(1)");
        assert_eq!(normalize_label("x"), "x");
    }
}
