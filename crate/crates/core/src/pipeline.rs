//! End-to-end divide-and-combine variable screening.
//!
//! The dataset is split by a [`PartitionPlan`]; every partition independently
//! yields LP statistics for every predictor (the map stage, run on a worker
//! pool); the per-partition summaries are then meta-combined per variable and
//! order (the reduce stage) and the variables ranked.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::column::{DataType, Dataset, MixedColumn};
use crate::error::{invalid, Error, Result};
use crate::meta::{cd_interval, cd_two_sided_pvalue, meta_analyze, Method, PartitionEstimate, RemlOptions};
use crate::partition::{self, column_keys, plan_by_column, plan_random, row_keys, subpop_count, PartitionPlan};
use crate::report::{sig12, sig12_opt};
use crate::score::{lp_statistics, SubpopSummary, DEFAULT_M};

/// How rows are split into subpopulations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "scheme")]
pub enum PartitionSpec {
    Random {
        k: usize,
        seed: u64,
    },
    /// `k = floor(n^gamma + 0.5)` random partitions.
    Gamma {
        gamma: f64,
        seed: u64,
    },
    ByColumn {
        column: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub target: String,
    pub m: usize,
    pub m_overrides: BTreeMap<String, usize>,
    pub method: Method,
    pub reml: RemlOptions,
    pub partition: PartitionSpec,
    /// Rows sharing a value of this column are assigned together (random schemes).
    pub group_by: Option<String>,
    pub ci_level: f64,
    pub worker_count: usize,
    /// Predictors to screen; `None` means every column other than the target
    /// and the grouping/partitioning columns.
    pub predictors: Option<Vec<String>>,
}

impl AnalysisConfig {
    pub fn new(target: impl Into<String>, partition: PartitionSpec) -> Self {
        Self {
            target: target.into(),
            m: DEFAULT_M,
            m_overrides: BTreeMap::new(),
            method: Method::Reml,
            reml: RemlOptions::default(),
            partition,
            group_by: None,
            ci_level: 0.95,
            worker_count: 1,
            predictors: None,
        }
    }

    pub fn m_for(&self, variable: &str) -> usize {
        self.m_overrides.get(variable).copied().unwrap_or(self.m)
    }

    fn structural_columns(&self) -> Vec<&str> {
        let mut cols = Vec::new();
        if let PartitionSpec::ByColumn { column } = &self.partition {
            cols.push(column.as_str());
        }
        if let Some(g) = &self.group_by {
            cols.push(g.as_str());
        }
        cols
    }

    pub fn predictor_names(&self, dataset: &Dataset) -> Vec<String> {
        match &self.predictors {
            Some(list) => list.clone(),
            None => {
                let skip = self.structural_columns();
                dataset
                    .column_names()
                    .filter(|name| *name != self.target && !skip.contains(name))
                    .map(str::to_string)
                    .collect()
            }
        }
    }

    /// Checks the configuration against `dataset` before any work is done.
    pub fn validate(&self, dataset: &Dataset) -> Result<()> {
        let target = dataset.column(&self.target)?;
        if target.declared_type() != DataType::Binary {
            return Err(Error::NotBinary {
                column: self.target.clone(),
                reason: format!("declared {}", target.declared_type().as_str()),
            });
        }
        let levels = target.distinct_values().len();
        if levels != 2 {
            return Err(Error::NotBinary {
                column: self.target.clone(),
                reason: format!("{levels} distinct values"),
            });
        }
        if self.m == 0 || self.m_overrides.values().any(|&m| m == 0) {
            return Err(invalid("m", "must be at least 1"));
        }
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return Err(invalid("ci_level", format!("{} is outside (0, 1)", self.ci_level)));
        }
        if self.worker_count == 0 {
            return Err(invalid("worker_count", "must be at least 1"));
        }
        match &self.partition {
            PartitionSpec::Random { k: 0, .. } => return Err(invalid("k", "must be at least 1")),
            PartitionSpec::Gamma { gamma, .. } if !(*gamma > 0.0 && *gamma < 1.0) => {
                return Err(invalid("gamma", format!("{gamma} is outside (0, 1)")))
            }
            PartitionSpec::ByColumn { column } => {
                dataset.column(column)?;
            }
            _ => {}
        }
        if let Some(g) = &self.group_by {
            dataset.column(g)?;
        }
        for name in self.predictor_names(dataset) {
            if name == self.target {
                return Err(invalid("predictors", "the target cannot be a predictor"));
            }
            dataset.column(&name)?;
        }
        Ok(())
    }
}

fn group_keys(dataset: &Dataset, config: &AnalysisConfig) -> Result<Vec<String>> {
    Ok(match (&config.partition, &config.group_by) {
        (PartitionSpec::ByColumn { column }, _) => column_keys(dataset.column(column)?),
        (_, Some(group)) => column_keys(dataset.column(group)?),
        _ => row_keys(dataset.n_rows()),
    })
}

/// Builds the partition plan the configuration asks for.
pub fn make_plan(dataset: &Dataset, config: &AnalysisConfig) -> Result<PartitionPlan> {
    match &config.partition {
        PartitionSpec::ByColumn { column } => plan_by_column(dataset.column(column)?),
        PartitionSpec::Random { k, seed } => plan_random(&group_keys(dataset, config)?, *k, *seed),
        PartitionSpec::Gamma { gamma, seed } => {
            let k = subpop_count(dataset.n_rows(), *gamma);
            plan_random(&group_keys(dataset, config)?, k, *seed)
        }
    }
}

/// Mapper output: `summaries[partition][variable]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapOutput {
    pub variables: Vec<String>,
    pub m: Vec<usize>,
    pub partition_sizes: Vec<usize>,
    pub summaries: Vec<Vec<SubpopSummary>>,
}

impl MapOutput {
    pub fn k(&self) -> usize {
        self.summaries.len()
    }

    /// `(lp, n)` of `variable` at order `j` across partitions.
    pub fn estimates(&self, variable: usize, j: usize) -> Vec<PartitionEstimate> {
        self.summaries
            .iter()
            .map(|row| {
                let s = &row[variable];
                let (lp, n) = s.order(j);
                PartitionEstimate::new(s.partition_id, lp, n)
            })
            .collect()
    }
}

fn map_partition(
    rows: &[usize],
    partition_id: usize,
    target: &MixedColumn,
    predictors: &[(&MixedColumn, usize)],
) -> Result<Vec<SubpopSummary>> {
    let y = target.select(rows);
    predictors
        .iter()
        .map(|&(x, m)| Ok(lp_statistics(&x.select(rows), &y, m)?.in_partition(partition_id)))
        .collect()
}

/// LP statistics of every predictor in every partition of `plan`.
///
/// Partitions are processed on a pool of `config.worker_count` threads and
/// gathered by partition id, so the output does not depend on the pool size.
pub fn run_map_stage(dataset: &Dataset, plan: &PartitionPlan, config: &AnalysisConfig) -> Result<MapOutput> {
    config.validate(dataset)?;
    let target = dataset.column(&config.target)?;
    let variables = config.predictor_names(dataset);
    let predictors: Vec<(&MixedColumn, usize)> = variables
        .iter()
        .map(|name| Ok((dataset.column(name)?, config.m_for(name))))
        .collect::<Result<_>>()?;

    let keys = group_keys(dataset, config)?;
    let rows = plan.rows_by_partition(&plan.assign_rows(&keys)?);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.worker_count)
        .build()
        .map_err(|e| invalid("worker_count", e.to_string()))?;
    let summaries = pool.install(|| {
        rows.par_iter()
            .enumerate()
            .map(|(p, r)| map_partition(r, p, target, &predictors))
            .collect::<Result<Vec<_>>>()
    })?;

    Ok(MapOutput {
        m: predictors.iter().map(|p| p.1).collect(),
        partition_sizes: rows.iter().map(Vec::len).collect(),
        variables,
        summaries,
    })
}

/// Combined inference for one LP order of one variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderResult {
    pub j: usize,
    #[serde(serialize_with = "sig12")]
    pub lp: f64,
    #[serde(serialize_with = "sig12")]
    pub se: f64,
    #[serde(serialize_with = "sig12")]
    pub ci_low: f64,
    #[serde(serialize_with = "sig12")]
    pub ci_high: f64,
    /// Two-sided confidence-distribution p-value for `LP = 0`.
    #[serde(serialize_with = "sig12")]
    pub p_value: f64,
    #[serde(serialize_with = "sig12")]
    pub q: f64,
    #[serde(serialize_with = "sig12")]
    pub i2_pre: f64,
    #[serde(serialize_with = "sig12_opt")]
    pub i2_post: Option<f64>,
    #[serde(serialize_with = "sig12")]
    pub tau2: f64,
    pub k_eff: usize,
}

impl OrderResult {
    pub fn excludes_zero(&self) -> bool {
        self.ci_low > 0.0 || self.ci_high < 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableResult {
    pub variable: String,
    /// Degenerate in every partition; excluded from ranking.
    pub untestable: bool,
    /// Some order has a confidence interval excluding zero.
    pub significant: bool,
    pub orders: Vec<OrderResult>,
}

impl VariableResult {
    pub fn order(&self, j: usize) -> Option<&OrderResult> {
        self.orders.iter().find(|o| o.j == j)
    }

    /// Largest `|lp|` over orders, the ranking score.
    pub fn max_abs_lp(&self) -> f64 {
        self.orders.iter().map(|o| o.lp.abs()).fold(0.0, f64::max)
    }
}

/// Meta-combines every (variable, order) of the mapper output.
pub fn run_reduce_stage(map: &MapOutput, config: &AnalysisConfig) -> Result<Vec<VariableResult>> {
    map.variables
        .iter()
        .enumerate()
        .map(|(v, name)| {
            let mut orders = Vec::new();
            for j in 1..=map.m[v] {
                let estimates = map.estimates(v, j);
                if estimates.iter().all(|e| e.n == 0) {
                    continue;
                }
                let cd = meta_analyze(&estimates, config.method, &config.reml)?;
                let (ci_low, ci_high) = cd_interval(&cd, config.ci_level)?;
                orders.push(OrderResult {
                    j,
                    lp: cd.mean,
                    se: cd.se(),
                    ci_low,
                    ci_high,
                    p_value: cd_two_sided_pvalue(&cd, 0.0),
                    q: cd.q,
                    i2_pre: cd.i2_pre,
                    i2_post: cd.i2_post,
                    tau2: cd.tau2,
                    k_eff: cd.k_eff,
                });
            }
            Ok(VariableResult {
                variable: name.clone(),
                untestable: orders.is_empty(),
                significant: orders.iter().any(OrderResult::excludes_zero),
                orders,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedVariable {
    pub rank: usize,
    pub variable: String,
    #[serde(serialize_with = "sig12")]
    pub max_abs_lp: f64,
    pub significant: bool,
}

/// Testable variables in descending order of `max_j |lp_j|`, ties broken by
/// name.
pub fn rank_variables(results: &[VariableResult]) -> Vec<RankedVariable> {
    let mut testable: Vec<&VariableResult> = results.iter().filter(|r| !r.untestable).collect();
    testable.sort_by(|a, b| {
        b.max_abs_lp()
            .total_cmp(&a.max_abs_lp())
            .then_with(|| a.variable.cmp(&b.variable))
    });
    testable
        .into_iter()
        .enumerate()
        .map(|(i, r)| RankedVariable {
            rank: i + 1,
            variable: r.variable.clone(),
            max_abs_lp: r.max_abs_lp(),
            significant: r.significant,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub target: String,
    pub n_rows: usize,
    pub k: usize,
    pub scheme: partition::Scheme,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub method: Method,
    #[serde(serialize_with = "sig12")]
    pub ci_level: f64,
    pub ranking: Vec<RankedVariable>,
    /// Ranked variables first, untestable ones last.
    pub variables: Vec<VariableResult>,
}

impl AnalysisReport {
    pub fn variable(&self, name: &str) -> Option<&VariableResult> {
        self.variables.iter().find(|v| v.variable == name)
    }
}

/// Plan, map, reduce and rank.
pub fn analyze(dataset: &Dataset, config: &AnalysisConfig) -> Result<AnalysisReport> {
    config.validate(dataset)?;
    let plan = make_plan(dataset, config)?;
    analyze_with_plan(dataset, &plan, config)
}

pub fn analyze_with_plan(dataset: &Dataset, plan: &PartitionPlan, config: &AnalysisConfig) -> Result<AnalysisReport> {
    let map = run_map_stage(dataset, plan, config)?;
    let results = run_reduce_stage(&map, config)?;
    let ranking = rank_variables(&results);

    let mut variables: Vec<VariableResult> = ranking
        .iter()
        .map(|r| {
            results
                .iter()
                .find(|v| v.variable == r.variable)
                .cloned()
                .expect("ranked variables come from the results")
        })
        .collect();
    variables.extend(results.into_iter().filter(|r| r.untestable));

    Ok(AnalysisReport {
        target: config.target.clone(),
        n_rows: dataset.n_rows(),
        k: plan.k,
        scheme: plan.scheme,
        seed: plan.seed,
        method: config.method,
        ci_level: config.ci_level,
        ranking,
        variables,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> Dataset {
        // x1 tracks y, x2 is noise-like, g is a grouping column
        let y = [0., 1., 0., 1., 1., 0., 1., 0., 1., 1., 0., 0., 1., 0., 1., 0.];
        let x1: Vec<f64> = y
            .iter()
            .enumerate()
            .map(|(i, v)| v * 2.0 + (i % 3) as f64 * 0.5)
            .collect();
        let x2: Vec<f64> = (0..16).map(|i| ((i * 7) % 5) as f64).collect();
        let g: Vec<f64> = (0..16).map(|i| (i / 4) as f64).collect();
        Dataset::new(vec![
            MixedColumn::complete("y", y, DataType::Binary).unwrap(),
            MixedColumn::complete("x1", x1, DataType::Continuous).unwrap(),
            MixedColumn::complete("x2", x2, DataType::Discrete).unwrap(),
            MixedColumn::complete("g", g, DataType::CategoricalOrdinal).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn validation_catches_bad_targets() {
        let data = toy();
        let cfg = AnalysisConfig::new("x1", PartitionSpec::Random { k: 2, seed: 1 });
        assert!(matches!(cfg.validate(&data), Err(Error::NotBinary { .. })));
        let cfg = AnalysisConfig::new("nope", PartitionSpec::Random { k: 2, seed: 1 });
        assert!(matches!(cfg.validate(&data), Err(Error::UnknownColumn(_))));
        let mut cfg = AnalysisConfig::new("y", PartitionSpec::Gamma { gamma: 1.5, seed: 1 });
        assert!(cfg.validate(&data).is_err());
        cfg.partition = PartitionSpec::Random { k: 2, seed: 1 };
        cfg.ci_level = 1.0;
        assert!(cfg.validate(&data).is_err());
    }

    #[test]
    fn structural_columns_are_not_predictors() {
        let data = toy();
        let cfg = AnalysisConfig::new("y", PartitionSpec::ByColumn { column: "g".into() });
        assert_eq!(cfg.predictor_names(&data), vec!["x1", "x2"]);
    }

    #[test]
    fn single_partition_matches_full_data() {
        let data = toy();
        let cfg = AnalysisConfig::new("y", PartitionSpec::Random { k: 1, seed: 0 });
        let report = analyze(&data, &cfg).unwrap();
        let full = lp_statistics(data.column("x1").unwrap(), data.column("y").unwrap(), 4).unwrap();
        let x1 = report.variable("x1").unwrap();
        for o in &x1.orders {
            assert_eq!(o.lp, full.lp[o.j - 1]);
            assert!((o.se - 1.0 / (16f64).sqrt()).abs() < 1e-15);
            assert_eq!(o.k_eff, 1);
            assert!(o.ci_low <= o.lp && o.lp <= o.ci_high);
        }
    }

    #[test]
    fn all_missing_variable_is_degenerate_in_that_partition_only() {
        let mut data = toy();
        let values: Vec<Option<f64>> = (0..16)
            .map(|i| if i < 4 { None } else { Some((i % 5) as f64) })
            .collect();
        let mut cols = data.columns().to_vec();
        cols.push(MixedColumn::new("gappy", values, DataType::Discrete).unwrap());
        data = Dataset::new(cols).unwrap();
        let cfg = AnalysisConfig::new("y", PartitionSpec::ByColumn { column: "g".into() });
        let plan = make_plan(&data, &cfg).unwrap();
        let map = run_map_stage(&data, &plan, &cfg).unwrap();
        let v = map.variables.iter().position(|n| n == "gappy").unwrap();
        assert!(map.summaries[0][v].degenerate);
        assert!(map.summaries[1..].iter().all(|row| !row[v].degenerate));
    }

    #[test]
    fn untestable_variables_are_not_ranked() {
        let mut cols = toy().columns().to_vec();
        cols.push(MixedColumn::complete("flat", [1.0; 16], DataType::Continuous).unwrap());
        let data = Dataset::new(cols).unwrap();
        let cfg = AnalysisConfig::new("y", PartitionSpec::Random { k: 2, seed: 3 });
        let report = analyze(&data, &cfg).unwrap();
        assert!(report.ranking.iter().all(|r| r.variable != "flat"));
        let last = report.variables.last().unwrap();
        assert_eq!(last.variable, "flat");
        assert!(last.untestable && last.orders.is_empty());
    }

    #[test]
    fn ranking_breaks_ties_by_name() {
        let mk = |name: &str, lp: f64| VariableResult {
            variable: name.into(),
            untestable: false,
            significant: false,
            orders: vec![OrderResult {
                j: 1,
                lp,
                se: 0.1,
                ci_low: lp - 0.2,
                ci_high: lp + 0.2,
                p_value: 0.5,
                q: 0.0,
                i2_pre: 0.0,
                i2_post: None,
                tau2: 0.0,
                k_eff: 1,
            }],
        };
        let ranked = rank_variables(&[mk("b", 0.3), mk("a", -0.3), mk("c", 0.5)]);
        let names: Vec<&str> = ranked.iter().map(|r| r.variable.as_str()).collect();
        assert_eq!(names, ["c", "a", "b"]);
        assert_eq!(rank_variables(&[mk("only", 0.0)])[0].rank, 1);
    }
}
