//! Typed columns and the in-memory dataset the pipeline operates on.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Declared measurement type of a column.
///
/// Scoring is identical for every type (the mid-rank transform absorbs ties and
/// discreteness); the declaration drives validation and the report only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataType {
    Continuous,
    Discrete,
    Binary,
    /// Categorical data scored through its integer codes, i.e. as if ordinal.
    #[serde(alias = "categorical")]
    CategoricalOrdinal,
}

impl DataType {
    pub fn as_str(self) -> &'static str {
        match self {
            DataType::Continuous => "continuous",
            DataType::Discrete => "discrete",
            DataType::Binary => "binary",
            DataType::CategoricalOrdinal => "categorical_ordinal",
        }
    }
}

/// One named column of real values, `None` marking a missing cell.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedColumn {
    name: String,
    values: Vec<Option<f64>>,
    declared_type: DataType,
}

impl MixedColumn {
    pub fn new(name: impl Into<String>, values: Vec<Option<f64>>, declared_type: DataType) -> Result<Self> {
        let name = name.into();
        if let Some(bad) = values.iter().flatten().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "values",
                reason: format!("column `{name}` holds non-finite value {bad}"),
            });
        }
        let column = Self {
            name,
            values,
            declared_type,
        };
        if declared_type == DataType::Binary {
            let distinct = column.distinct_values();
            if distinct.len() > 2 {
                return Err(Error::NotBinary {
                    column: column.name,
                    reason: format!("{} distinct values", distinct.len()),
                });
            }
        }
        Ok(column)
    }

    /// Column without missing cells.
    pub fn complete(
        name: impl Into<String>,
        values: impl IntoIterator<Item = f64>,
        declared_type: DataType,
    ) -> Result<Self> {
        Self::new(name, values.into_iter().map(Some).collect(), declared_type)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn declared_type(&self) -> DataType {
        self.declared_type
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn missing_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }

    /// Sorted distinct non-missing values.
    pub fn distinct_values(&self) -> Vec<f64> {
        let mut distinct: Vec<f64> = self.values.iter().flatten().copied().collect();
        distinct.sort_by(f64::total_cmp);
        distinct.dedup();
        distinct
    }

    /// Rows `rows` of this column, in the given order.
    pub fn select(&self, rows: &[usize]) -> MixedColumn {
        MixedColumn {
            name: self.name.clone(),
            values: rows.iter().map(|&r| self.values[r]).collect(),
            declared_type: self.declared_type,
        }
    }
}

/// Equal-length columns, one of which is usually the binary target.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dataset {
    columns: Vec<MixedColumn>,
}

impl Dataset {
    pub fn new(columns: Vec<MixedColumn>) -> Result<Self> {
        if let Some(first) = columns.first() {
            let expected = first.len();
            for column in &columns {
                if column.len() != expected {
                    return Err(Error::LengthMismatch {
                        column: column.name().to_string(),
                        expected,
                        found: column.len(),
                    });
                }
            }
        }
        Ok(Self { columns })
    }

    pub fn n_rows(&self) -> usize {
        self.columns.first().map_or(0, MixedColumn::len)
    }

    pub fn columns(&self) -> &[MixedColumn] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Result<&MixedColumn> {
        self.columns
            .iter()
            .find(|c| c.name() == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(MixedColumn::name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_columns_reject_a_third_value() {
        let err = MixedColumn::complete("y", [0.0, 1.0, 2.0], DataType::Binary).unwrap_err();
        assert!(matches!(err, Error::NotBinary { .. }));
        assert!(MixedColumn::new("y", vec![Some(0.0), None, Some(1.0)], DataType::Binary).is_ok());
    }

    #[test]
    fn dataset_rejects_ragged_columns() {
        let a = MixedColumn::complete("a", [1.0, 2.0], DataType::Continuous).unwrap();
        let b = MixedColumn::complete("b", [1.0], DataType::Continuous).unwrap();
        assert!(matches!(
            Dataset::new(vec![a, b]),
            Err(Error::LengthMismatch { found: 1, .. })
        ));
    }

    #[test]
    fn non_finite_values_are_rejected() {
        assert!(MixedColumn::complete("x", [f64::NAN], DataType::Continuous).is_err());
    }
}
