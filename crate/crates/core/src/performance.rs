//! Solver traces, expected running time and portfolio summaries.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::rng::{self, stream};
use crate::sampling::draw_feasible;
use crate::space::Problem;
use crate::{stats, Error, Result};

/// Quantile of all observed objective values used as the target.
pub const TARGET_QUANTILE: f64 = 0.01;
/// Penalty factor applied to the largest possible ERT when no run succeeds.
pub const PAR_FACTOR: f64 = 10.0;
/// Default solver budget per decision variable.
pub const DEFAULT_BUDGET_FACTOR: usize = 100;
pub const RANDOM_SEARCH: &str = "RS";

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    /// 1-based evaluation index.
    pub fe: u64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub instance_id: String,
    pub algorithm: String,
    pub run_id: u32,
    pub evaluations: Vec<Evaluation>,
}

impl RunTrace {
    /// Evaluation indices must start at 1 or later and strictly increase;
    /// objective values must be finite.
    pub fn check(&self) -> Result<()> {
        let mut last = 0;
        for e in &self.evaluations {
            if e.fe <= last {
                return Err(Error::InvalidArgument(format!(
                    "trace {}/{}/{}: evaluation index {} after {last}",
                    self.instance_id, self.algorithm, self.run_id, e.fe
                )));
            }
            if !e.y.is_finite() {
                return Err(Error::NonFinite(format!(
                    "trace {}/{}/{} at fe {}",
                    self.instance_id, self.algorithm, self.run_id, e.fe
                )));
            }
            last = e.fe;
        }
        Ok(())
    }

    /// Running minimum of the objective.
    pub fn best_so_far(&self) -> Vec<f64> {
        let mut best = f64::INFINITY;
        self.evaluations
            .iter()
            .map(|e| {
                best = best.min(e.y);
                best
            })
            .collect()
    }

    /// First evaluation index reaching `target`.
    pub fn first_hit(&self, target: f64) -> Option<u64> {
        self.evaluations.iter().find(|e| e.y <= target).map(|e| e.fe)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PerfRecord {
    pub instance_id: String,
    pub algorithm: String,
    pub ert: f64,
    pub successes: usize,
    pub runs: usize,
    pub budget: u64,
    pub target: f64,
}

/// Evaluates `budget` uniform feasible samples in order.
pub fn run_random_search(problem: &Problem, budget: u64, run_id: u32, seed: u64) -> Result<RunTrace> {
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be >= 1".to_string()));
    }
    let space = problem.space();
    let order = space.dependency_order();
    let mut r = rng::rng(rng::derive(rng::derive(seed, stream::SOLVER), u64::from(run_id)));
    let evaluations = (1..=budget)
        .map(|fe| {
            let x = draw_feasible(space, &order, &mut r);
            problem.evaluate(&x).map(|y| Evaluation { fe, y })
        })
        .collect::<Result<_>>()?;
    Ok(RunTrace { instance_id: problem.name().to_string(), algorithm: RANDOM_SEARCH.to_string(), run_id, evaluations })
}

/// The 0.01-quantile of every objective value of every trace.
pub fn determine_target(traces: &[RunTrace]) -> Result<f64> {
    let ys: Vec<f64> = traces.iter().flat_map(|t| t.evaluations.iter().map(|e| e.y)).collect();
    if ys.is_empty() {
        return Err(Error::Empty("no evaluations to derive a target from".to_string()));
    }
    Ok(stats::quantile(&ys, TARGET_QUANTILE))
}

/// Expected running time of the runs of one (instance, algorithm) pair.
///
/// A run succeeds at its first evaluation with `y <= target` and contributes
/// that index; a failed run contributes the full budget. With no success
/// the score is PAR10, `10 · runs · budget`.
pub fn ert(traces: &[RunTrace], target: f64, budget: u64) -> Result<PerfRecord> {
    let first = traces.first().ok_or_else(|| Error::Empty("no runs".to_string()))?;
    let mut spent = 0u64;
    let mut successes = 0;
    for t in traces {
        if let Some(last) = t.evaluations.last() {
            if last.fe > budget {
                return Err(Error::Budget(format!(
                    "run {} of {}/{} reaches fe {} beyond budget {budget}",
                    t.run_id, t.instance_id, t.algorithm, last.fe
                )));
            }
        }
        match t.first_hit(target) {
            Some(fe) => {
                spent += fe;
                successes += 1;
            }
            None => spent += budget,
        }
    }
    let runs = traces.len();
    let ert = if successes == 0 { PAR_FACTOR * runs as f64 * budget as f64 } else { spent as f64 / successes as f64 };
    Ok(PerfRecord {
        instance_id: first.instance_id.clone(),
        algorithm: first.algorithm.clone(),
        ert,
        successes,
        runs,
        budget,
        target,
    })
}

/// Per-(instance, algorithm) ERT records.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PerfTable {
    pub records: Vec<PerfRecord>,
}

impl PerfTable {
    pub fn get(&self, instance: &str, algorithm: &str) -> Option<&PerfRecord> {
        self.records.iter().find(|r| r.instance_id == instance && r.algorithm == algorithm)
    }

    pub fn ert_of(&self, instance: &str, algorithm: &str) -> Result<f64> {
        self.get(instance, algorithm)
            .map(|r| r.ert)
            .ok_or_else(|| Error::MissingRecord { instance: instance.to_string(), algorithm: algorithm.to_string() })
    }

    pub fn instances(&self) -> Vec<&str> {
        let set: BTreeSet<&str> = self.records.iter().map(|r| r.instance_id.as_str()).collect();
        set.into_iter().collect()
    }

    pub fn algorithms(&self) -> Vec<&str> {
        let set: BTreeSet<&str> = self.records.iter().map(|r| r.algorithm.as_str()).collect();
        set.into_iter().collect()
    }

    /// Best algorithm per instance, ties to the lexicographically smallest.
    pub fn best_per_instance(&self) -> Result<BTreeMap<String, String>> {
        let algorithms = self.algorithms();
        let mut out = BTreeMap::new();
        for inst in self.instances() {
            let mut best: Option<(&str, f64)> = None;
            for alg in &algorithms {
                let e = self.ert_of(inst, alg)?;
                if best.is_none_or(|(_, b)| e < b) {
                    best = Some((alg, e));
                }
            }
            if let Some((alg, _)) = best {
                out.insert(inst.to_string(), alg.to_string());
            }
        }
        Ok(out)
    }
}

/// Groups traces by instance, derives each instance's target from all of its
/// traces, and scores every algorithm. `budget` defaults to the largest
/// evaluation index seen on the instance.
pub fn build_perf_table(traces: &[RunTrace], budget: Option<u64>) -> Result<PerfTable> {
    if traces.is_empty() {
        return Err(Error::Empty("no traces".to_string()));
    }
    let mut by_instance: BTreeMap<&str, BTreeMap<&str, Vec<RunTrace>>> = BTreeMap::new();
    for t in traces {
        t.check()?;
        by_instance.entry(t.instance_id.as_str()).or_default().entry(t.algorithm.as_str()).or_default().push(t.clone());
    }
    let mut records = Vec::new();
    for algs in by_instance.values() {
        let all: Vec<RunTrace> = algs.values().flatten().cloned().collect();
        let target = determine_target(&all)?;
        let b =
            budget.unwrap_or_else(|| all.iter().filter_map(|t| t.evaluations.last().map(|e| e.fe)).max().unwrap_or(1));
        for runs in algs.values() {
            records.push(ert(runs, target, b)?);
        }
    }
    Ok(PerfTable { records })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PortfolioSummary {
    pub sbs: String,
    pub sbs_ert: f64,
    pub vbs_ert: f64,
    pub best_per_instance: BTreeMap<String, String>,
}

/// Single best solver (lowest mean ERT over instances) and virtual best
/// solver (mean of per-instance minima).
pub fn portfolio_summary(table: &PerfTable) -> Result<PortfolioSummary> {
    let instances = table.instances();
    let algorithms = table.algorithms();
    if instances.is_empty() {
        return Err(Error::Empty("performance table".to_string()));
    }
    let n = instances.len() as f64;
    let mut sbs: Option<(&str, f64)> = None;
    for alg in &algorithms {
        let mut total = 0.0;
        for inst in &instances {
            total += table.ert_of(inst, alg)?;
        }
        let mean = total / n;
        if sbs.is_none_or(|(_, m)| mean < m) {
            sbs = Some((alg, mean));
        }
    }
    let best_per_instance = table.best_per_instance()?;
    let mut vbs_total = 0.0;
    for (inst, alg) in &best_per_instance {
        vbs_total += table.ert_of(inst, alg)?;
    }
    let (sbs, sbs_ert) = sbs.expect("at least one algorithm");
    Ok(PortfolioSummary { sbs: sbs.to_string(), sbs_ert, vbs_ert: vbs_total / n, best_per_instance })
}

/// Fraction of the SBS-VBS gap closed by a selector.
pub fn gap_closure(sbs_ert: f64, vbs_ert: f64, model_ert: f64) -> Result<f64> {
    if sbs_ert.is_nan() || vbs_ert.is_nan() || sbs_ert <= vbs_ert {
        return Err(Error::DegeneratePortfolio { sbs: sbs_ert, vbs: vbs_ert });
    }
    Ok((sbs_ert - model_ert) / (sbs_ert - vbs_ert))
}
