//! Subcommands of the `mvela` binary.
//!
//! Each command writes its artifacts to files and returns a one-line JSON
//! summary for stdout. Paper-scale constants are only defaults.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mvela_core::analysis::{aggregate_repetitions, encoding_correlations, ward_cluster};
use mvela_core::encoding::Encoding;
use mvela_core::features::{featurize_design, featurize_repetitions, FeatureVector};
use mvela_core::performance::{
    build_perf_table, gap_closure, portfolio_summary, run_random_search, PerfTable, DEFAULT_BUDGET_FACTOR,
};
use mvela_core::problems;
use mvela_core::rng;
use mvela_core::sampling::{sample_design, DEFAULT_SAMPLE_FACTOR};
use mvela_core::selection::{
    cross_validate, greedy_select, instance_predictions, labels_from_perf, AasDataset, Step, DEFAULT_FOLDS,
};
use mvela_core::space::Problem;
use rayon::prelude::*;
use serde_json::json;

use crate::io::report::{SelectionReport, StepReport};
use crate::io::{aas, design, features, perf, report, space, traces};
use crate::{Error, Result};

pub const DEFAULT_REPETITIONS: u32 = 20;
pub const DEFAULT_RUNS: u32 = 10;
pub const DEFAULT_CLUSTERS: usize = 3;

#[derive(Debug, Parser)]
#[command(name = "mvela", version, about = "Landscape features and algorithm selection for mixed-variable problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the 40 features per repetition, instance and encoding.
    Featurize(FeaturizeArgs),
    /// Turn solver traces into per-(instance, algorithm) ERT records.
    Perf(PerfArgs),
    /// Greedy feature selection and cross-validated selector evaluation.
    Select(SelectArgs),
    /// Encoding correlations and Ward clustering of instances.
    Analyze(AnalyzeArgs),
    /// Write a uniform random design of a built-in problem.
    Sample(SampleArgs),
    /// Random-search baseline traces.
    SolveRs(SolveArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EncodingArg {
    Oh,
    Te,
    Both,
}

impl EncodingArg {
    fn encodings(self) -> Vec<Encoding> {
        match self {
            EncodingArg::Oh => vec![Encoding::OneHot],
            EncodingArg::Te => vec![Encoding::Target],
            EncodingArg::Both => vec![Encoding::OneHot, Encoding::Target],
        }
    }

    fn single(self) -> Result<Encoding> {
        match self {
            EncodingArg::Oh => Ok(Encoding::OneHot),
            EncodingArg::Te => Ok(Encoding::Target),
            EncodingArg::Both => Err(Error::Usage("this command needs a single encoding, oh or te".into())),
        }
    }
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// Built-in problem, `name` or `name@instance`; repeatable.
    #[arg(long = "problem")]
    pub problems: Vec<String>,
    /// Expand every `--problem` given without `@` to instances 0..N.
    #[arg(long)]
    pub instances: Option<u64>,
}

#[derive(Debug, Args)]
pub struct FeaturizeArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Search-space JSON; used with `--design` instead of `--problem`.
    #[arg(long)]
    pub space: Option<PathBuf>,
    /// Design CSV evaluated on `--space`.
    #[arg(long)]
    pub design: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "te")]
    pub encoding: EncodingArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_REPETITIONS)]
    pub reps: u32,
    /// Design size per decision variable.
    #[arg(long, default_value_t = DEFAULT_SAMPLE_FACTOR)]
    pub sample_factor: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PerfArgs {
    #[arg(long)]
    pub traces: PathBuf,
    /// Evaluation budget; defaults to the longest run of each instance.
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[arg(long)]
    pub features: PathBuf,
    #[arg(long)]
    pub perf: PathBuf,
    #[arg(long, value_enum, default_value = "te")]
    pub encoding: EncodingArg,
    #[arg(long, default_value_t = DEFAULT_FOLDS)]
    pub folds: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Design size per decision variable, charged to the selector.
    #[arg(long, default_value_t = DEFAULT_SAMPLE_FACTOR)]
    pub sample_factor: usize,
    /// Report JSON.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the labelled wide dataset.
    #[arg(long)]
    pub dataset_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub features: PathBuf,
    /// Encoding whose features are clustered.
    #[arg(long, value_enum, default_value = "te")]
    pub encoding: EncodingArg,
    #[arg(long, default_value_t = DEFAULT_CLUSTERS)]
    pub k: usize,
    /// Output directory for `correlations.csv` and `clusters.csv`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of points; defaults to `sample_factor · D`.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SAMPLE_FACTOR)]
    pub sample_factor: usize,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the problem's search space as JSON.
    #[arg(long)]
    pub space_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_RUNS)]
    pub runs: u32,
    /// Evaluation budget per decision variable.
    #[arg(long, default_value_t = DEFAULT_BUDGET_FACTOR)]
    pub budget_factor: usize,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(cli: &Cli) -> Result<String> {
    let summary = match &cli.command {
        Command::Featurize(a) => featurize(a)?,
        Command::Perf(a) => perf_cmd(a)?,
        Command::Select(a) => select(a)?,
        Command::Analyze(a) => analyze(a)?,
        Command::Sample(a) => sample(a)?,
        Command::SolveRs(a) => solve_rs(a)?,
    };
    Ok(summary.to_string())
}

fn resolve_problems(args: &ProblemArgs) -> Result<Vec<Problem>> {
    if args.problems.is_empty() {
        return Err(Error::Usage("at least one --problem is required".into()));
    }
    let mut out = Vec::new();
    for spec in &args.problems {
        let names: Vec<String> = match args.instances {
            Some(n) if !spec.contains('@') => (0..n).map(|i| format!("{spec}@{i}")).collect(),
            _ => vec![spec.clone()],
        };
        for name in names {
            let p = problems::builtin(&name).ok_or_else(|| {
                Error::Usage(format!(
                    "unknown problem `{name}` (built-ins: {}; hier1 has a single instance)",
                    problems::BUILTIN_NAMES.join(", ")
                ))
            })?;
            out.push(p);
        }
    }
    let mut seen = BTreeSet::new();
    if let Some(dup) = out.iter().find(|p| !seen.insert(p.name().to_string())) {
        return Err(Error::Usage(format!("problem `{}` given twice", dup.name())));
    }
    Ok(out)
}

fn positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(Error::Usage(format!("--{name} must be positive")));
    }
    Ok(())
}

fn featurize(a: &FeaturizeArgs) -> Result<serde_json::Value> {
    positive("sample-factor", a.sample_factor)?;
    positive("reps", a.reps as usize)?;
    let encodings = a.encoding.encodings();
    let vectors: Vec<FeatureVector> = match (&a.space, &a.design) {
        (Some(space_path), Some(design_path)) => {
            if !a.problem.problems.is_empty() {
                return Err(Error::Usage("use either --problem or --space with --design".into()));
            }
            let space = space::read_space(space_path)?;
            let d = design::read_design(design_path, &space)?;
            encodings
                .iter()
                .map(|&e| featurize_design(&d, &space, e, a.seed).map_err(Error::from))
                .collect::<Result<_>>()?
        }
        (Some(_), None) | (None, Some(_)) => {
            return Err(Error::Usage("--space and --design must be given together".into()));
        }
        (None, None) => {
            let problems = resolve_problems(&a.problem)?;
            problems
                .par_iter()
                .map(|p| {
                    let n = a.sample_factor * p.space().dim();
                    let mut all = Vec::new();
                    for &e in &encodings {
                        all.extend(featurize_repetitions(p, e, n, a.reps, a.seed)?);
                    }
                    Ok(all)
                })
                .collect::<Result<Vec<Vec<FeatureVector>>>>()?
                .into_iter()
                .flatten()
                .collect()
        }
    };
    features::write_features(&a.out, &vectors)?;
    Ok(json!({
        "command": "featurize",
        "vectors": vectors.len(),
        "rows": vectors.len() * mvela_core::features::N_FEATURES,
        "out": a.out,
    }))
}

fn perf_cmd(a: &PerfArgs) -> Result<serde_json::Value> {
    let runs = traces::read_traces(&a.traces)?;
    if a.budget == Some(0) {
        return Err(Error::Usage("--budget must be positive".into()));
    }
    let table = build_perf_table(&runs, a.budget)?;
    perf::write_perf(&a.out, &table)?;
    Ok(json!({
        "command": "perf",
        "records": table.records.len(),
        "instances": table.instances().len(),
        "algorithms": table.algorithms().len(),
        "out": a.out,
    }))
}

/// Restricts `table` to `instances`; every instance must be present.
fn restrict(table: &PerfTable, instances: &BTreeSet<&str>, path: &Path) -> Result<PerfTable> {
    let have: BTreeSet<&str> = table.instances().into_iter().collect();
    if let Some(missing) = instances.iter().find(|i| !have.contains(*i)) {
        return Err(Error::invalid(path, format!("no performance records for instance `{missing}`")));
    }
    Ok(PerfTable {
        records: table.records.iter().filter(|r| instances.contains(r.instance_id.as_str())).cloned().collect(),
    })
}

fn select(a: &SelectArgs) -> Result<serde_json::Value> {
    positive("sample-factor", a.sample_factor)?;
    let encoding = a.encoding.single()?;
    let all = features::read_features(&a.features)?;
    let vectors: Vec<FeatureVector> = all.into_iter().filter(|f| f.encoding == encoding).collect();
    if vectors.is_empty() {
        return Err(Error::invalid(&a.features, format!("no {encoding} feature vectors")));
    }
    let instances: BTreeSet<&str> = vectors.iter().map(|f| f.instance_id.as_str()).collect();
    if a.folds < 2 || a.folds > instances.len() {
        return Err(Error::Usage(format!(
            "--folds {} must lie in [2, {}], the number of instances",
            a.folds,
            instances.len()
        )));
    }
    let table = restrict(&perf::read_perf(&a.perf)?, &instances, &a.perf)?;
    let labels = labels_from_perf(&table)?;
    let data = AasDataset::from_features(&vectors, &labels)?;
    if let Some(path) = &a.dataset_out {
        aas::write_aas(path, &data)?;
    }

    let selection = greedy_select(&data, a.folds, a.seed)?;
    let cv = cross_validate(&data, &selection.subset, &selection.folds, a.seed)?;
    let predictions = instance_predictions(&data, &cv.predictions);
    let design_cost: BTreeMap<String, f64> = vectors
        .iter()
        .map(|f| {
            let d = f.get("dimension").unwrap_or(0.0);
            (f.instance_id.clone(), a.sample_factor as f64 * d)
        })
        .collect();
    let eval = mvela_core::selection::evaluate_selector(&predictions, &table, &design_cost)?;
    let portfolio = portfolio_summary(&table)?;
    let gap = gap_closure(portfolio.sbs_ert, portfolio.vbs_ert, eval.model_ert)?;

    let name = |j: usize| data.feature_names[j].clone();
    let report = SelectionReport {
        encoding: encoding.to_string(),
        folds: a.folds,
        seed: a.seed,
        instances: instances.len(),
        rows: data.rows.len(),
        subset: selection.subset.iter().map(|&j| name(j)).collect(),
        steps: selection
            .steps
            .iter()
            .map(|(s, acc)| match *s {
                Step::Add(j) => StepReport { action: "add", feature: name(j), accuracy: *acc },
                Step::Remove(j) => StepReport { action: "remove", feature: name(j), accuracy: *acc },
            })
            .collect(),
        baseline_accuracy: selection.baseline,
        cv_accuracy: cv.accuracy,
        model_evaluations: selection.evaluations,
        leakage: mvela_core::selection::leakage(&selection.folds),
        predictions,
        labels,
        design_cost,
        model_ert: eval.model_ert,
        sbs: portfolio.sbs.clone(),
        sbs_ert: portfolio.sbs_ert,
        vbs_ert: portfolio.vbs_ert,
        gap_closure: gap,
    };
    report::write_report(&a.out, &report)?;
    Ok(json!({
        "command": "select",
        "features_selected": report.subset.len(),
        "cv_accuracy": report.cv_accuracy,
        "model_ert": report.model_ert,
        "gap_closure": report.gap_closure,
        "out": a.out,
    }))
}

fn analyze(a: &AnalyzeArgs) -> Result<serde_json::Value> {
    let encoding = a.encoding.single()?;
    let all = features::read_features(&a.features)?;
    let (te, oh): (Vec<FeatureVector>, Vec<FeatureVector>) =
        all.iter().cloned().partition(|f| f.encoding == Encoding::Target);
    let chosen: Vec<FeatureVector> = all.into_iter().filter(|f| f.encoding == encoding).collect();
    if chosen.is_empty() {
        return Err(Error::invalid(&a.features, format!("no {encoding} feature vectors")));
    }
    let (ids, matrix) = aggregate_repetitions(&chosen);
    if a.k == 0 || a.k > ids.len() {
        return Err(Error::Usage(format!("--k {} must lie in [1, {}], the number of instances", a.k, ids.len())));
    }
    let clustering = ward_cluster(&matrix, a.k)?;
    let clusters_path = a.out.join("clusters.csv");
    report::write_clusters(&clusters_path, &ids, &clustering.labels)?;

    let correlations_path = if te.is_empty() || oh.is_empty() {
        eprintln!("note: features hold a single encoding, correlations skipped");
        None
    } else {
        let rows = encoding_correlations(&te, &oh).map_err(|e| Error::invalid(&a.features, e.to_string()))?;
        let path = a.out.join("correlations.csv");
        report::write_correlations(&path, &rows)?;
        Some(path)
    };
    Ok(json!({
        "command": "analyze",
        "instances": ids.len(),
        "clusters": a.k,
        "clusters_out": clusters_path,
        "correlations_out": correlations_path,
    }))
}

fn sample(a: &SampleArgs) -> Result<serde_json::Value> {
    let problems = resolve_problems(&a.problem)?;
    let [p] = problems.as_slice() else {
        return Err(Error::Usage("sample takes exactly one problem".into()));
    };
    let n = a.n.unwrap_or(a.sample_factor * p.space().dim());
    if n < 2 {
        return Err(Error::Usage("a design needs at least 2 points".into()));
    }
    let d = sample_design(p, n, a.seed)?;
    design::write_design(&a.out, &d, p.space())?;
    if let Some(path) = &a.space_out {
        space::write_space(path, p.space())?;
    }
    Ok(json!({ "command": "sample", "problem": p.name(), "n": n, "out": a.out }))
}

fn solve_rs(a: &SolveArgs) -> Result<serde_json::Value> {
    positive("runs", a.runs as usize)?;
    positive("budget-factor", a.budget_factor)?;
    let problems = resolve_problems(&a.problem)?;
    let runs: Vec<_> = problems
        .par_iter()
        .map(|p| {
            let budget = (a.budget_factor * p.space().dim()) as u64;
            let seed = rng::derive(a.seed, rng::hash_str(p.name()));
            (0..a.runs).map(|r| run_random_search(p, budget, r, seed)).collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    traces::write_traces(&a.out, &runs)?;
    Ok(json!({ "command": "solve-rs", "instances": problems.len(), "runs": runs.len(), "out": a.out }))
}
