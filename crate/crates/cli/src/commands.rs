use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use metalp::pipeline::{analyze_with_plan, make_plan, AnalysisConfig, PartitionSpec};
use metalp::report::{to_csv, to_json};
use metalp::studies::{batting_records, berkeley_analysis, simulate_dataset, stein_shrinkage, SimulationSpec};
use metalp::{Dataset, Method};

use crate::args::{AnalyzeArgs, DemoArgs, DemoName, PartitionArgs, PlanArgs, SimulateArgs};
use crate::schema::{ColumnSpec, Role, SchemaFile};
use crate::table::read_dataset;

fn partition_spec(plan: &PlanArgs) -> PartitionSpec {
    let s = &plan.scheme;
    match (s.partitions, s.gamma, &s.partition_by) {
        (Some(k), _, _) => PartitionSpec::Random { k, seed: plan.seed },
        (_, Some(gamma), _) => PartitionSpec::Gamma { gamma, seed: plan.seed },
        (_, _, Some(column)) => PartitionSpec::ByColumn { column: column.clone() },
        _ => unreachable!("clap requires one partitioning flag"),
    }
}

/// Schema, data restricted to the columns the run needs, and the configuration.
fn load(input: &crate::args::InputArgs, plan: &PlanArgs) -> Result<(Dataset, AnalysisConfig)> {
    let schema = SchemaFile::read(&input.schema)?;
    let structural: Vec<&str> = [plan.scheme.partition_by.as_deref(), plan.group_by.as_deref()]
        .into_iter()
        .flatten()
        .collect();
    let needed = |name: &str| structural.contains(&name) || schema.get(name).is_some_and(|c| c.role != Role::Ignore);
    let dataset = read_dataset(&input.input, &schema, needed)?;

    let mut config = AnalysisConfig::new(schema.target(), partition_spec(plan));
    config.group_by = plan.group_by.clone();
    config.predictors = Some(
        schema
            .predictors()
            .filter(|c| !structural.contains(&c.name.as_str()))
            .map(|c| c.name.clone())
            .collect(),
    );
    config.m_overrides = schema
        .columns
        .iter()
        .filter_map(|c: &ColumnSpec| c.m.map(|m| (c.name.clone(), m)))
        .collect();
    Ok((dataset, config))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))
}

pub fn analyze(args: &AnalyzeArgs, out: &mut impl Write) -> Result<()> {
    let (dataset, mut config) = load(&args.input, &args.plan)?;
    config.method = Method::from(args.method);
    config.m = args.m;
    config.ci_level = args.ci;
    config.worker_count = args
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    config.validate(&dataset)?;

    let plan = make_plan(&dataset, &config)?;
    if let Some(path) = &args.emit_plan {
        write(path, &(plan.to_json() + "\n"))?;
    }
    let report = analyze_with_plan(&dataset, &plan, &config)?;

    create_dir(&args.output)?;
    write(&args.output.join("report.json"), &to_json(&report))?;
    write(&args.output.join("report.csv"), &to_csv(&report))?;

    writeln!(
        out,
        "{} rows, {} partitions, method {}, target {}",
        report.n_rows,
        report.k,
        report.method.as_str(),
        report.target
    )?;
    writeln!(out, "{:>4}  {:<24} {:>10}  significant", "rank", "variable", "max|lp|")?;
    for r in report.ranking.iter().take(args.top) {
        writeln!(
            out,
            "{:>4}  {:<24} {:>10.6}  {}",
            r.rank,
            r.variable,
            r.max_abs_lp,
            if r.significant { "yes" } else { "no" }
        )?;
    }
    let untestable: Vec<&str> = report
        .variables
        .iter()
        .filter(|v| v.untestable)
        .map(|v| v.variable.as_str())
        .collect();
    if !untestable.is_empty() {
        writeln!(out, "untestable: {}", untestable.join(", "))?;
    }
    Ok(())
}

pub fn partition(args: &PartitionArgs, out: &mut impl Write) -> Result<()> {
    let (dataset, config) = load(&args.input, &args.plan)?;
    config.validate(&dataset)?;
    let plan = make_plan(&dataset, &config)?.to_json() + "\n";
    match &args.output {
        Some(path) => write(path, &plan),
        None => Ok(out.write_all(plan.as_bytes())?),
    }
}

fn simulation_schema(dataset: &Dataset) -> SchemaFile {
    SchemaFile {
        columns: dataset
            .columns()
            .iter()
            .map(|c| ColumnSpec {
                name: c.name().to_string(),
                kind: c.declared_type(),
                m: None,
                role: if c.name() == "Y" { Role::Target } else { Role::Predictor },
            })
            .collect(),
    }
}

fn dataset_csv(dataset: &Dataset) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(dataset.column_names())?;
    let mut row = Vec::with_capacity(dataset.columns().len());
    for i in 0..dataset.n_rows() {
        row.clear();
        row.extend(
            dataset
                .columns()
                .iter()
                .map(|c| c.values()[i].map(|v| v.to_string()).unwrap_or_default()),
        );
        w.write_record(&row)?;
    }
    w.into_inner().context("flushing CSV")
}

pub fn simulate(args: &SimulateArgs, out: &mut impl Write) -> Result<()> {
    create_dir(&args.output)?;
    for seed in (args.seed..).take(args.reps) {
        let dataset = simulate_dataset(&SimulationSpec::new(args.n, seed))?;
        if seed == args.seed {
            let schema = serde_json::to_string_pretty(&simulation_schema(&dataset))? + "\n";
            write(&args.output.join("schema.json"), &schema)?;
        }
        let path = args.output.join(format!("data_{seed}.csv"));
        fs::write(&path, dataset_csv(&dataset)?).with_context(|| format!("cannot write {}", path.display()))?;
        writeln!(out, "{}", path.display())?;
    }
    Ok(())
}

pub fn demo(args: &DemoArgs, out: &mut impl Write) -> Result<()> {
    create_dir(&args.output)?;
    match args.name {
        DemoName::Berkeley => {
            let a = berkeley_analysis(args.method.into())?;
            writeln!(out, "{:<6} {:>6} {:>10}  {:>24}", "dept", "n", "lp", "95% CI")?;
            for d in a.departments.iter().chain(std::iter::once(&a.aggregate)) {
                writeln!(
                    out,
                    "{:<6} {:>6} {:>10.5}  [{:>10.5}, {:>10.5}]",
                    d.name, d.n, d.lp, d.ci.0, d.ci.1
                )?;
            }
            writeln!(
                out,
                "combined ({}): lp {:.5}, 95% CI [{:.5}, {:.5}], tau2 {:.3e}",
                a.method.as_str(),
                a.combined.mean,
                a.combined_ci.0,
                a.combined_ci.1,
                a.combined.tau2
            )?;
            writeln!(out, "p-value (H0: no male preference): {:.4}", a.p_value)?;
            writeln!(out, "aggregate-data p-value: {:.3e}", a.aggregate_p_value)?;
            write(&args.output.join("berkeley.json"), &to_json(&a))
        }
        DemoName::Stein => {
            let s = stein_shrinkage(&batting_records()?)?;
            writeln!(
                out,
                "{:<12} {:>6} {:>8} {:>8} {:>8}",
                "player", "mle", "lp", "js", "truth"
            )?;
            for p in &s.players {
                writeln!(
                    out,
                    "{:<12} {:>6.3} {:>8.3} {:>8.3} {:>8.3}",
                    p.player, p.mle, p.lp_estimate, p.js_estimate, p.remainder_avg
                )?;
            }
            writeln!(out, "tau2 {:.6}, lambda {:.4}", s.tau2, s.lambda)?;
            writeln!(
                out,
                "MSE ratio vs MLE: lp {:.3}, js {:.3}",
                s.mse_ratio_lp, s.mse_ratio_js
            )?;
            write(&args.output.join("stein.json"), &to_json(&s))
        }
    }
}
