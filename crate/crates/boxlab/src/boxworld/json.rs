//! The `box322-v1` interchange format.
//!
//! ```json
//! {"format": "box322-v1",
//!  "entries": {"UUU|+++": {"num": 1, "den": 2}, "UUD|++-": 0.5}}
//! ```
//!
//! Entry values are either a `{num, den}` rational or a plain float; keys
//! not listed are zero. Emission sorts keys so identical tables serialize
//! byte-identically.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{BoxError, ExactDistribution, JointDistribution};
use crate::scenario::{OutcomeTriple, SettingTriple, TableKey};

pub const BOX322_FORMAT: &str = "box322-v1";

#[derive(Serialize, Deserialize)]
struct Box322File {
    format: String,
    entries: BTreeMap<String, EntryValue>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EntryValue {
    Rational { num: i64, den: i64 },
    Float(f64),
}

impl EntryValue {
    fn as_f64(&self) -> Result<f64, BoxError> {
        match *self {
            EntryValue::Rational { num, den } => {
                if den == 0 {
                    return Err(BoxError::Parse("rational entry with den = 0".into()));
                }
                Ok(num as f64 / den as f64)
            }
            EntryValue::Float(v) => Ok(v),
        }
    }
}

impl JointDistribution {
    /// Serializes the nonzero entries as `box322-v1` JSON.
    pub fn to_box322_json(&self) -> String {
        let mut entries = BTreeMap::new();
        for s in SettingTriple::all() {
            for o in OutcomeTriple::all() {
                let v = self.entry(s, o);
                if v != 0.0 {
                    entries.insert(
                        TableKey { settings: s, outcomes: o }.to_string(),
                        EntryValue::Float(v),
                    );
                }
            }
        }
        let file = Box322File { format: BOX322_FORMAT.to_string(), entries };
        serde_json::to_string_pretty(&file).expect("box322 serialization cannot fail")
    }

    /// Parses `box322-v1` JSON; omitted keys are zero.
    pub fn from_box322_json(text: &str) -> Result<JointDistribution, BoxError> {
        let file: Box322File =
            serde_json::from_str(text).map_err(|e| BoxError::Parse(e.to_string()))?;
        if file.format != BOX322_FORMAT {
            return Err(BoxError::Parse(format!(
                "unsupported format `{}` (expected `{BOX322_FORMAT}`)",
                file.format
            )));
        }
        let mut table = [[0.0f64; 8]; 8];
        for (key, value) in &file.entries {
            let key: TableKey = key.parse()?;
            table[key.settings.index()][key.outcomes.index()] = value.as_f64()?;
        }
        JointDistribution::from_table(table)
    }
}

impl ExactDistribution {
    /// Serializes the nonzero entries with exact `{num, den}` values.
    pub fn to_box322_json(&self) -> String {
        let mut entries = BTreeMap::new();
        for (key, value) in self.nonzero_entries() {
            entries.insert(
                key.to_string(),
                EntryValue::Rational { num: *value.numer(), den: *value.denom() },
            );
        }
        let file = Box322File { format: BOX322_FORMAT.to_string(), entries };
        serde_json::to_string_pretty(&file).expect("box322 serialization cannot fail")
    }

    /// Parses `box322-v1` JSON, requiring every entry to be rational.
    pub fn from_box322_json(text: &str) -> Result<ExactDistribution, BoxError> {
        let file: Box322File =
            serde_json::from_str(text).map_err(|e| BoxError::Parse(e.to_string()))?;
        if file.format != BOX322_FORMAT {
            return Err(BoxError::Parse(format!(
                "unsupported format `{}` (expected `{BOX322_FORMAT}`)",
                file.format
            )));
        }
        let mut entries = Vec::new();
        for (key, value) in &file.entries {
            match *value {
                EntryValue::Rational { num, den } => {
                    if den == 0 {
                        return Err(BoxError::Parse("rational entry with den = 0".into()));
                    }
                    entries.push((key.clone(), num, den));
                }
                EntryValue::Float(_) => {
                    return Err(BoxError::Parse(format!(
                        "entry `{key}` is a float; exact table requires rationals"
                    )));
                }
            }
        }
        let borrowed: Vec<(&str, i64, i64)> =
            entries.iter().map(|(k, n, d)| (k.as_str(), *n, *d)).collect();
        ExactDistribution::from_entries(&borrowed)
    }
}
