//! Reproducible assignment of row groups to subpopulations.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::column::MixedColumn;
use crate::error::{invalid, Error, Result};

/// Name of the generator behind random plans, recorded in every plan.
pub const RANDOM_GENERATOR: &str = "chacha8";

/// Group key of rows whose grouping value is missing.
pub const MISSING_KEY: &str = "NA";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Random,
    ByColumn,
}

/// Assignment of group keys to partitions `0..k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionPlan {
    pub scheme: Scheme,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub column: Option<String>,
    pub assignment: BTreeMap<String, usize>,
}

impl PartitionPlan {
    pub fn partition_of(&self, key: &str) -> Option<usize> {
        self.assignment.get(key).copied()
    }

    /// Partition of every row, given each row's group key.
    pub fn assign_rows<S: AsRef<str>>(&self, keys: &[S]) -> Result<Vec<usize>> {
        keys.iter()
            .enumerate()
            .map(|(row, key)| {
                self.partition_of(key.as_ref()).ok_or_else(|| Error::UnassignedGroup {
                    row,
                    key: key.as_ref().to_string(),
                })
            })
            .collect()
    }

    /// Row indices of each partition, in row order.
    pub fn rows_by_partition(&self, row_partitions: &[usize]) -> Vec<Vec<usize>> {
        let mut rows = vec![Vec::new(); self.k];
        for (row, &p) in row_partitions.iter().enumerate() {
            rows[p].push(row);
        }
        rows
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plans always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let plan: PartitionPlan = serde_json::from_str(text).map_err(|e| invalid("plan", e.to_string()))?;
        if plan.k == 0 || plan.assignment.values().any(|&p| p >= plan.k) {
            return Err(invalid("plan", "partition ids must lie in [0, k)"));
        }
        Ok(plan)
    }
}

/// Number of subpopulations `floor(n^gamma + 0.5)`, at least 1.
pub fn subpop_count(n: usize, gamma: f64) -> usize {
    let k = ((n as f64).powf(gamma) + 0.5).floor();
    if k.is_finite() && k >= 1.0 {
        k as usize
    } else {
        1
    }
}

/// Uniform seeded assignment of each distinct group key to one of `k`
/// partitions. Keys are visited in sorted order, drawing one value per key
/// from ChaCha8 seeded with `seed`, so the plan depends only on the key set.
pub fn plan_random<S: AsRef<str>>(group_keys: &[S], k: usize, seed: u64) -> Result<PartitionPlan> {
    if k == 0 {
        return Err(invalid("k", "at least one partition is required"));
    }
    if group_keys.is_empty() {
        return Err(invalid("group_keys", "no rows to partition"));
    }
    let distinct: BTreeSet<&str> = group_keys.iter().map(AsRef::as_ref).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let assignment = distinct
        .into_iter()
        .map(|key| (key.to_string(), rng.random_range(0..k)))
        .collect();
    Ok(PartitionPlan {
        scheme: Scheme::Random,
        k,
        seed: Some(seed),
        generator: Some(RANDOM_GENERATOR.to_string()),
        column: None,
        assignment,
    })
}

/// Row-level keys `"0", "1", ...` for plans that assign individual rows.
pub fn row_keys(n_rows: usize) -> Vec<String> {
    (0..n_rows).map(|r| r.to_string()).collect()
}

fn value_key(v: Option<f64>) -> String {
    match v {
        // -0.0 matches too
        Some(0.0) => "0".to_string(),
        Some(x) => x.to_string(),
        None => MISSING_KEY.to_string(),
    }
}

/// Group key of every row of a grouping column.
pub fn column_keys(column: &MixedColumn) -> Vec<String> {
    column.values().iter().map(|&v| value_key(v)).collect()
}

/// One partition per distinct value, numbered in ascending value order, plus a
/// final partition for missing values when any are present.
pub fn plan_by_column(column: &MixedColumn) -> Result<PartitionPlan> {
    let distinct = column.distinct_values();
    if distinct.is_empty() {
        return Err(invalid(
            "column",
            format!("`{}` has no non-missing values", column.name()),
        ));
    }
    let mut assignment = BTreeMap::new();
    let mut next = 0;
    for v in distinct {
        if let std::collections::btree_map::Entry::Vacant(slot) = assignment.entry(value_key(Some(v))) {
            slot.insert(next);
            next += 1;
        }
    }
    if column.missing_count() > 0 {
        assignment.insert(MISSING_KEY.to_string(), next);
        next += 1;
    }
    Ok(PartitionPlan {
        scheme: Scheme::ByColumn,
        k: next,
        seed: None,
        generator: None,
        column: Some(column.name().to_string()),
        assignment,
    })
}
