//! Benchmark orchestration: algorithms x instances x seeded runs, per-run
//! hypervolume under a shared per-instance normalization, aggregation, and
//! Friedman analysis.

use crate::algorithms::{self, AlgorithmId, RunConfig};
use crate::catalog::Catalog;
use crate::doml::{parse_doml, NamedInstance};
use crate::metrics::{build_bounds, hypervolume, normalize};
use crate::moea::VariationConfig;
use crate::problem::build_problem;
use crate::stats::{friedman, rank_table, FriedmanResult, StatsError};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("instance `{instance}`: {message}")]
    Instance { instance: String, message: String },
    #[error("benchmark plan needs at least one instance and one algorithm")]
    EmptyPlan,
    #[error("runs per cell must be >= 1")]
    NoRuns,
    #[error("malformed results CSV: {0}")]
    Csv(String),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("analysis group `{group}` has fewer than two instances")]
    GroupTooSmall { group: String },
}

/// Full description of a benchmark campaign.
#[derive(Debug, Clone)]
pub struct BenchmarkPlan {
    pub instances: Vec<NamedInstance>,
    pub algorithms: Vec<AlgorithmId>,
    pub runs_per_cell: usize,
    pub base_seed: u64,
    pub catalog: Catalog,
    pub population_size: usize,
    pub max_evaluations: usize,
    pub variation: Option<VariationConfig>,
}

impl BenchmarkPlan {
    /// The benchmark protocol defaults: 5 algorithms, 10 runs per cell,
    /// population 50, 2500 evaluations.
    pub fn new(instances: Vec<NamedInstance>, catalog: Catalog, base_seed: u64) -> Self {
        BenchmarkPlan {
            instances,
            algorithms: AlgorithmId::ALL.to_vec(),
            runs_per_cell: 10,
            base_seed,
            catalog,
            population_size: 50,
            max_evaluations: 2500,
            variation: None,
        }
    }
}

/// One benchmark cell outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultsRow {
    pub instance: String,
    pub algorithm: String,
    pub run: usize,
    pub seed: u64,
    pub hypervolume: f64,
    pub evaluations: usize,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultsTable {
    pub rows: Vec<ResultsRow>,
}

/// Per (instance, algorithm) mean hypervolume matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateMatrix {
    pub instances: Vec<String>,
    pub algorithms: Vec<String>,
    /// Rows follow `instances`, columns follow `algorithms`.
    pub means: Vec<Vec<f64>>,
}

/// Derive the per-run seed from the plan's base seed and the cell identity
/// (FNV-1a over the identifying fields).
pub fn stable_hash(base_seed: u64, instance: &str, algorithm: &str, run: usize) -> u64 {
    const OFFSET: u64 = 0xcbf29ce484222325;
    const PRIME: u64 = 0x100000001b3;
    let mut h = OFFSET;
    let mut absorb = |bytes: &[u8]| {
        for &b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(PRIME);
        }
    };
    absorb(&base_seed.to_le_bytes());
    absorb(instance.as_bytes());
    absorb(&[0]);
    absorb(algorithm.as_bytes());
    absorb(&[0]);
    absorb(&(run as u64).to_le_bytes());
    h
}

/// Execute every (instance, algorithm, run) cell. Per instance, all runs'
/// fronts are pooled to build normalization bounds, then each run's front is
/// scored with reference point (1, ..., 1). Rows come back sorted by
/// (instance, algorithm, run) regardless of execution order.
pub fn run_benchmark(plan: &BenchmarkPlan) -> Result<ResultsTable, BenchError> {
    if plan.instances.is_empty() || plan.algorithms.is_empty() {
        return Err(BenchError::EmptyPlan);
    }
    if plan.runs_per_cell == 0 {
        return Err(BenchError::NoRuns);
    }
    let mut rows = Vec::new();
    for named in &plan.instances {
        let instance_err = |message: String| BenchError::Instance {
            instance: named.name.clone(),
            message,
        };
        let spec = parse_doml(&named.text).map_err(|e| instance_err(e.to_string()))?;
        let problem =
            build_problem(&spec, &plan.catalog).map_err(|e| instance_err(e.to_string()))?;

        let cells: Vec<(usize, usize)> = (0..plan.algorithms.len())
            .flat_map(|a| (0..plan.runs_per_cell).map(move |r| (a, r)))
            .collect();
        let results: Vec<_> = cells
            .par_iter()
            .map(|&(alg_idx, run_idx)| {
                let algorithm = plan.algorithms[alg_idx];
                let seed = stable_hash(plan.base_seed, &named.name, algorithm.as_str(), run_idx);
                let cfg = RunConfig {
                    algorithm,
                    seed,
                    population_size: plan.population_size,
                    max_evaluations: plan.max_evaluations,
                    variation: plan.variation,
                };
                algorithms::run(&problem, &cfg)
                    .map(|result| (alg_idx, run_idx, result))
                    .map_err(|e| e.to_string())
            })
            .collect();
        let mut runs = Vec::with_capacity(results.len());
        for r in results {
            runs.push(r.map_err(instance_err)?);
        }

        // join point: pool all of this instance's fronts for the bounds
        let pooled: Vec<&[f64]> = runs
            .iter()
            .flat_map(|(_, _, r)| r.front.iter().map(|i| i.eval.objectives_min.as_slice()))
            .collect();
        let bounds =
            build_bounds(pooled.iter().copied()).map_err(|e| instance_err(e.to_string()))?;
        let reference = vec![1.0; problem.n_objectives()];
        for (alg_idx, run_idx, result) in runs {
            let points: Vec<Vec<f64>> = result
                .front
                .iter()
                .map(|i| i.eval.objectives_min.clone())
                .collect();
            let hv = hypervolume(&normalize(&points, &bounds), &reference)
                .map_err(|e| instance_err(e.to_string()))?;
            rows.push((
                alg_idx,
                ResultsRow {
                    instance: named.name.clone(),
                    algorithm: plan.algorithms[alg_idx].as_str().to_string(),
                    run: run_idx,
                    seed: result.seed,
                    hypervolume: hv,
                    evaluations: result.evaluations_used,
                    wall_ms: result.wall_time.as_millis() as u64,
                },
            ));
        }
    }
    rows.sort_by(|a, b| {
        (&a.1.instance, a.0, a.1.run).cmp(&(&b.1.instance, b.0, b.1.run))
    });
    Ok(ResultsTable { rows: rows.into_iter().map(|(_, r)| r).collect() })
}

/// Arithmetic mean over runs per (instance, algorithm) cell. Row and column
/// order follow first appearance in the (sorted) results.
pub fn aggregate_table(results: &ResultsTable) -> AggregateMatrix {
    let mut instances: Vec<String> = Vec::new();
    let mut algorithms: Vec<String> = Vec::new();
    for row in &results.rows {
        if !instances.contains(&row.instance) {
            instances.push(row.instance.clone());
        }
        if !algorithms.contains(&row.algorithm) {
            algorithms.push(row.algorithm.clone());
        }
    }
    let means = instances
        .iter()
        .map(|inst| {
            algorithms
                .iter()
                .map(|alg| {
                    let cell: Vec<f64> = results
                        .rows
                        .iter()
                        .filter(|r| &r.instance == inst && &r.algorithm == alg)
                        .map(|r| r.hypervolume)
                        .collect();
                    cell.iter().sum::<f64>() / cell.len() as f64
                })
                .collect()
        })
        .collect();
    AggregateMatrix { instances, algorithms, means }
}

/// How to group instances before the Friedman test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    None,
    ByObjectiveCount,
}

/// A Friedman result for one analysis group.
#[derive(Debug, Clone)]
pub struct AnalysisGroup {
    pub label: String,
    pub result: FriedmanResult,
}

/// Friedman analysis of an aggregate matrix, optionally split by the
/// objective-count field of `DOML_A_x-y-z` instance names.
pub fn analyze_results(
    matrix: &AggregateMatrix,
    split: Split,
) -> Result<Vec<AnalysisGroup>, BenchError> {
    let groups: Vec<(String, Vec<usize>)> = match split {
        Split::None => vec![("all instances".to_string(), (0..matrix.instances.len()).collect())],
        Split::ByObjectiveCount => {
            let mut keys: Vec<String> = Vec::new();
            let mut members: Vec<Vec<usize>> = Vec::new();
            for (i, name) in matrix.instances.iter().enumerate() {
                let key = objective_count_field(name).ok_or_else(|| BenchError::Csv(format!(
                    "instance name `{name}` does not follow DOML_A_x-y-z"
                )))?;
                match keys.iter().position(|k| k == &key) {
                    Some(pos) => members[pos].push(i),
                    None => {
                        keys.push(key);
                        members.push(vec![i]);
                    }
                }
            }
            keys.into_iter()
                .map(|k| (format!("{k} objectives"), members.remove(0)))
                .collect()
        }
    };
    groups
        .into_iter()
        .map(|(label, idx)| {
            if idx.len() < 2 {
                return Err(BenchError::GroupTooSmall { group: label });
            }
            let scores: Vec<Vec<f64>> = idx.iter().map(|&i| matrix.means[i].clone()).collect();
            let instances: Vec<String> =
                idx.iter().map(|&i| matrix.instances[i].clone()).collect();
            let table = rank_table(&matrix.algorithms, &instances, &scores, true)?;
            Ok(AnalysisGroup { label, result: friedman(&table)? })
        })
        .collect()
}

fn objective_count_field(name: &str) -> Option<String> {
    let rest = name.strip_prefix("DOML_")?;
    let (count, _) = rest.split_once('_')?;
    count.parse::<usize>().ok()?;
    Some(count.to_string())
}

// ---------------------------------------------------------------------------
// CSV serialization

pub const RESULTS_HEADER: &str = "instance,algorithm,run,seed,hypervolume,evaluations,wall_ms";

pub fn results_to_csv(results: &ResultsTable) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RESULTS_HEADER.split(',')).expect("in-memory write");
    for row in &results.rows {
        w.write_record(&[
            row.instance.clone(),
            row.algorithm.clone(),
            row.run.to_string(),
            row.seed.to_string(),
            format!("{:?}", row.hypervolume),
            row.evaluations.to_string(),
            row.wall_ms.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8")
}

pub fn results_from_csv(text: &str) -> Result<ResultsTable, BenchError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| BenchError::Csv(e.to_string()))?;
    let expected: Vec<&str> = RESULTS_HEADER.split(',').collect();
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(BenchError::Csv(format!("unexpected header `{}`", headers.iter().collect::<Vec<_>>().join(","))));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| BenchError::Csv(e.to_string()))?;
        let field = |i: usize| record.get(i).unwrap_or_default().to_string();
        let parse_err = |what: &str| BenchError::Csv(format!("invalid {what} in `{record:?}`"));
        rows.push(ResultsRow {
            instance: field(0),
            algorithm: field(1),
            run: field(2).parse().map_err(|_| parse_err("run"))?,
            seed: field(3).parse().map_err(|_| parse_err("seed"))?,
            hypervolume: field(4).parse().map_err(|_| parse_err("hypervolume"))?,
            evaluations: field(5).parse().map_err(|_| parse_err("evaluations"))?,
            wall_ms: field(6).parse().map_err(|_| parse_err("wall_ms"))?,
        });
    }
    Ok(ResultsTable { rows })
}

pub fn aggregate_to_csv(matrix: &AggregateMatrix) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["instance".to_string()];
    header.extend(matrix.algorithms.clone());
    w.write_record(&header).expect("in-memory write");
    for (inst, row) in matrix.instances.iter().zip(&matrix.means) {
        let mut record = vec![inst.clone()];
        record.extend(row.iter().map(|v| format!("{v:?}")));
        w.write_record(&record).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8")
}

pub fn aggregate_from_csv(text: &str) -> Result<AggregateMatrix, BenchError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| BenchError::Csv(e.to_string()))?;
    let mut iter = headers.iter();
    if iter.next() != Some("instance") {
        return Err(BenchError::Csv("first column must be `instance`".to_string()));
    }
    let algorithms: Vec<String> = iter.map(|s| s.to_string()).collect();
    if algorithms.is_empty() {
        return Err(BenchError::Csv("no algorithm columns".to_string()));
    }
    let mut instances = Vec::new();
    let mut means = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| BenchError::Csv(e.to_string()))?;
        if record.len() != algorithms.len() + 1 {
            return Err(BenchError::Csv(format!("ragged row `{record:?}`")));
        }
        instances.push(record.get(0).unwrap().to_string());
        means.push(
            (1..record.len())
                .map(|i| {
                    record
                        .get(i)
                        .unwrap()
                        .parse::<f64>()
                        .map_err(|_| BenchError::Csv(format!("invalid number in `{record:?}`")))
                })
                .collect::<Result<Vec<f64>, _>>()?,
        );
    }
    Ok(AggregateMatrix { instances, algorithms, means })
}

/// Plain-text rank report for one analysis group.
pub fn format_rank_report(group: &AnalysisGroup) -> String {
    let mut order: Vec<usize> = (0..group.result.algorithms.len()).collect();
    order.sort_by(|&a, &b| {
        group.result.mean_ranks[a]
            .partial_cmp(&group.result.mean_ranks[b])
            .unwrap()
    });
    let mut out = String::new();
    out.push_str(&format!("== Friedman rankings ({}) ==\n", group.label));
    out.push_str(&format!("{:<12} {:>8}\n", "Algorithm", "Ranking"));
    for &i in &order {
        out.push_str(&format!(
            "{:<12} {:>8.4}\n",
            group.result.algorithms[i], group.result.mean_ranks[i]
        ));
    }
    out.push_str(&format!(
        "chi-squared = {:.4} (df = {}, N = {})\n",
        group.result.statistic, group.result.degrees_of_freedom, group.result.n_instances
    ));
    out
}
