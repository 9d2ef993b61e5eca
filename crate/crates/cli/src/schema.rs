//! Column schema accompanying an input CSV.
//!
//! ```json
//! {"columns": [
//!   {"name": "admitted", "type": "binary", "role": "target"},
//!   {"name": "age", "type": "continuous", "m": 6},
//!   {"name": "row_id", "type": "discrete", "role": "ignore"}
//! ]}
//! ```
//!
//! `role` defaults to `predictor`; `m` overrides the global score order.

use std::collections::BTreeSet;
use std::path::Path;

use metalp::DataType;
use serde::{Deserialize, Serialize};

use crate::error::InputError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Target,
    #[default]
    Predictor,
    Ignore,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColumnSpec {
    pub name: String,
    #[serde(rename = "type")]
    pub kind: DataType,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default)]
    pub role: Role,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemaFile {
    pub columns: Vec<ColumnSpec>,
}

impl SchemaFile {
    pub fn read(path: &Path) -> Result<Self, InputError> {
        let text = std::fs::read_to_string(path).map_err(|e| InputError::io(path, e))?;
        let schema: SchemaFile = serde_json::from_str(&text).map_err(|e| InputError::Schema(e.to_string()))?;
        schema.check()?;
        Ok(schema)
    }

    /// Structural checks that do not need the CSV header.
    pub fn check(&self) -> Result<(), InputError> {
        let mut seen = BTreeSet::new();
        for c in &self.columns {
            if !seen.insert(c.name.as_str()) {
                return Err(InputError::Schema(format!("column `{}` is listed twice", c.name)));
            }
            if c.m == Some(0) {
                return Err(InputError::Schema(format!("column `{}` has m = 0", c.name)));
            }
        }
        let targets: Vec<&ColumnSpec> = self.columns.iter().filter(|c| c.role == Role::Target).collect();
        match targets.as_slice() {
            [t] if t.kind == DataType::Binary => Ok(()),
            [t] => Err(InputError::Schema(format!(
                "target `{}` must be declared binary, not {}",
                t.name,
                t.kind.as_str()
            ))),
            [] => Err(InputError::Schema("no column has role `target`".into())),
            _ => Err(InputError::Schema(format!(
                "{} columns have role `target`",
                targets.len()
            ))),
        }
    }

    /// Every header column must be described and every described column present.
    pub fn check_header(&self, header: &[String]) -> Result<(), InputError> {
        for h in header {
            if self.get(h).is_none() {
                return Err(InputError::Schema(format!(
                    "CSV column `{h}` is not in the schema (mark it `\"role\": \"ignore\"` to skip it)"
                )));
            }
        }
        for c in &self.columns {
            if !header.contains(&c.name) {
                return Err(InputError::Schema(format!(
                    "schema column `{}` is missing from the CSV",
                    c.name
                )));
            }
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&ColumnSpec> {
        self.columns.iter().find(|c| c.name == name)
    }

    pub fn target(&self) -> &str {
        self.columns
            .iter()
            .find(|c| c.role == Role::Target)
            .map(|c| c.name.as_str())
            .expect("checked schemas have a target")
    }

    pub fn predictors(&self) -> impl Iterator<Item = &ColumnSpec> {
        self.columns.iter().filter(|c| c.role == Role::Predictor)
    }
}
