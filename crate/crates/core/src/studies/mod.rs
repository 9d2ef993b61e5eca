//! Small worked case studies and synthetic data generators.

mod berkeley;
mod simulate;
mod stein;

pub use berkeley::{berkeley_analysis, berkeley_table, BerkeleyAnalysis, BerkeleyTable, Department, UnitCd};
pub use simulate::{simulate_dataset, simulate_heterogeneous, HeterogeneousSpec, SimulationSpec};
pub use stein::{
    batting_records, stein_shrinkage, variance_stabilize, variance_unstabilize, BattingRecord, PlayerEstimate,
    SteinAnalysis,
};

use crate::error::{Error, Result};

/// Data rows of a checked-in fixture, header removed, split on commas.
fn fixture_rows(name: &'static str, text: &str, columns: usize) -> Result<Vec<Vec<String>>> {
    text.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let fields: Vec<String> = line.split(',').map(|f| f.trim().to_string()).collect();
            if fields.len() == columns {
                Ok(fields)
            } else {
                Err(Error::Fixture {
                    name,
                    reason: format!("expected {columns} fields in `{line}`"),
                })
            }
        })
        .collect()
}

fn parse_field<T: std::str::FromStr>(name: &'static str, field: &str) -> Result<T> {
    field.parse().map_err(|_| Error::Fixture {
        name,
        reason: format!("cannot parse `{field}`"),
    })
}
