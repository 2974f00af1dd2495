//! The solver pool: NSGA-II, NSGA-III, SPEA2, SMS-EMOA and MoCell, plus the
//! objective-count-based algorithm selector.

mod mocell;
mod nsga2;
mod nsga3;
mod smsemoa;
mod spea2;

pub use spea2::spea2_fitness;

use crate::moea::{
    nondominated_sort, sbx_integer, polynomial_mutation_integer, Individual, RandomSource,
    VariationConfig,
};
use crate::problem::{Genotype, ProblemInstance};
use std::time::{Duration, Instant};
use thiserror::Error;

/// The implemented solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgorithmId {
    Nsga2,
    Nsga3,
    Spea2,
    SmsEmoa,
    MoCell,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 5] = [
        AlgorithmId::Nsga2,
        AlgorithmId::Nsga3,
        AlgorithmId::Spea2,
        AlgorithmId::SmsEmoa,
        AlgorithmId::MoCell,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            AlgorithmId::Nsga2 => "nsga2",
            AlgorithmId::Nsga3 => "nsga3",
            AlgorithmId::Spea2 => "spea2",
            AlgorithmId::SmsEmoa => "smsemoa",
            AlgorithmId::MoCell => "mocell",
        }
    }
}

impl std::fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for AlgorithmId {
    type Err = AlgorithmError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nsga2" => Ok(AlgorithmId::Nsga2),
            "nsga3" => Ok(AlgorithmId::Nsga3),
            "spea2" => Ok(AlgorithmId::Spea2),
            "smsemoa" => Ok(AlgorithmId::SmsEmoa),
            "mocell" => Ok(AlgorithmId::MoCell),
            other => Err(AlgorithmError::UnknownAlgorithm(other.to_string())),
        }
    }
}

#[derive(Debug, Error)]
pub enum AlgorithmError {
    #[error("unknown algorithm `{0}` (expected nsga2, nsga3, spea2, smsemoa, mocell)")]
    UnknownAlgorithm(String),
    #[error("invalid run configuration: {0}")]
    InvalidConfig(String),
    #[error("algorithm selection needs at least two objectives, got {0}")]
    TooFewObjectives(usize),
}

/// One solver execution's parameters.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub algorithm: AlgorithmId,
    pub seed: u64,
    pub population_size: usize,
    pub max_evaluations: usize,
    /// Defaults to [`VariationConfig::standard`] for the problem's genotype
    /// length when unset.
    pub variation: Option<VariationConfig>,
}

impl RunConfig {
    pub fn new(algorithm: AlgorithmId, seed: u64) -> Self {
        RunConfig {
            algorithm,
            seed,
            population_size: 50,
            max_evaluations: 2500,
            variation: None,
        }
    }

    fn validate(&self) -> Result<(), AlgorithmError> {
        if self.population_size < 2 {
            return Err(AlgorithmError::InvalidConfig(format!(
                "population size {} < 2",
                self.population_size
            )));
        }
        if self.max_evaluations < self.population_size {
            return Err(AlgorithmError::InvalidConfig(format!(
                "max evaluations {} below population size {}",
                self.max_evaluations, self.population_size
            )));
        }
        if let Some(v) = &self.variation {
            v.validate().map_err(AlgorithmError::InvalidConfig)?;
        }
        Ok(())
    }
}

/// Final front and bookkeeping of one solver run.
#[derive(Debug, Clone)]
pub struct RunResult {
    /// Feasibility-filtered, pairwise nondominated terminal set.
    pub front: Vec<Individual>,
    pub evaluations_used: usize,
    pub wall_time: Duration,
    pub seed: u64,
    pub algorithm: AlgorithmId,
}

pub(crate) struct ResolvedConfig {
    pub population_size: usize,
    pub max_evaluations: usize,
    pub variation: VariationConfig,
}

/// Execute the configured algorithm within its evaluation budget.
pub fn run(problem: &ProblemInstance, cfg: &RunConfig) -> Result<RunResult, AlgorithmError> {
    cfg.validate()?;
    if cfg.algorithm == AlgorithmId::MoCell && cfg.population_size != 50 {
        return Err(AlgorithmError::InvalidConfig(format!(
            "mocell uses a fixed 5x10 grid (population 50), got {}",
            cfg.population_size
        )));
    }
    let resolved = ResolvedConfig {
        population_size: cfg.population_size,
        max_evaluations: cfg.max_evaluations,
        variation: cfg
            .variation
            .unwrap_or_else(|| VariationConfig::standard(problem.n_slots())),
    };
    let mut rng = RandomSource::from_seed(cfg.seed);
    let start = Instant::now();
    let (pool, evaluations_used) = match cfg.algorithm {
        AlgorithmId::Nsga2 => nsga2::run(problem, &resolved, &mut rng),
        AlgorithmId::Nsga3 => nsga3::run(problem, &resolved, &mut rng),
        AlgorithmId::Spea2 => spea2::run(problem, &resolved, &mut rng),
        AlgorithmId::SmsEmoa => smsemoa::run(problem, &resolved, &mut rng),
        AlgorithmId::MoCell => mocell::run(problem, &resolved, &mut rng),
    };
    let front = extract_front(pool);
    Ok(RunResult {
        front,
        evaluations_used,
        wall_time: start.elapsed(),
        seed: cfg.seed,
        algorithm: cfg.algorithm,
    })
}

/// Feasibility-filter and reduce a terminal pool to its nondominated set,
/// deduplicated by genotype and deterministically ordered.
fn extract_front(pool: Vec<Individual>) -> Vec<Individual> {
    let any_feasible = pool.iter().any(|i| i.eval.feasible());
    let mut pool: Vec<Individual> = if any_feasible {
        pool.into_iter().filter(|i| i.eval.feasible()).collect()
    } else {
        pool
    };
    let mut seen = std::collections::HashSet::new();
    pool.retain(|i| seen.insert(i.genotype.clone()));
    let fronts = nondominated_sort(&pool);
    let mut front: Vec<Individual> = fronts
        .first()
        .map(|f| f.iter().map(|&i| pool[i].clone()).collect())
        .unwrap_or_default();
    front.sort_by(|a, b| a.genotype.0.cmp(&b.genotype.0));
    front
}

/// Multi-method selection by objective count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Selection {
    pub algorithm: AlgorithmId,
    /// True when the objective count is beyond the benchmark's evidence
    /// (more than three) and the choice is an extrapolation.
    pub extrapolated: bool,
}

/// Pick the solver for a problem: NSGA-II for two objectives, NSGA-III for
/// three or more.
pub fn select_algorithm(n_objectives: usize) -> Result<Selection, AlgorithmError> {
    match n_objectives {
        0 | 1 => Err(AlgorithmError::TooFewObjectives(n_objectives)),
        2 => Ok(Selection { algorithm: AlgorithmId::Nsga2, extrapolated: false }),
        3 => Ok(Selection { algorithm: AlgorithmId::Nsga3, extrapolated: false }),
        _ => Ok(Selection { algorithm: AlgorithmId::Nsga3, extrapolated: true }),
    }
}

/// Weight vectors on the unit simplex with components in multiples of `1/p`,
/// in lexicographic order; `C(m+p-1, p)` points.
pub fn das_dennis_points(m: usize, p: usize) -> Vec<Vec<f64>> {
    assert!(m >= 2 && p >= 1);
    let mut points = Vec::new();
    let mut current = Vec::with_capacity(m);
    fill_simplex(m, p, p, &mut current, &mut points);
    points
}

fn fill_simplex(m: usize, p: usize, remaining: usize, current: &mut Vec<f64>, out: &mut Vec<Vec<f64>>) {
    if current.len() == m - 1 {
        let mut point = current.clone();
        point.push(remaining as f64 / p as f64);
        out.push(point);
        return;
    }
    for i in 0..=remaining {
        current.push(i as f64 / p as f64);
        fill_simplex(m, p, remaining - i, current, out);
        current.pop();
    }
}

/// Smallest division count whose lattice has at least `minimum` points.
pub(crate) fn smallest_divisions(m: usize, minimum: usize) -> usize {
    let mut p = 1;
    loop {
        if simplex_lattice_size(m, p) >= minimum {
            return p;
        }
        p += 1;
    }
}

fn simplex_lattice_size(m: usize, p: usize) -> usize {
    // C(m+p-1, p)
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..(m - 1) {
        num *= (p + 1 + i) as u128;
        den *= (i + 1) as u128;
    }
    (num / den) as usize
}

/// Produce two mutated offspring from two tournament-selected parents.
pub(crate) fn make_offspring_pair(
    problem: &ProblemInstance,
    parents: (&Genotype, &Genotype),
    bounds: &[usize],
    variation: &VariationConfig,
    rng: &mut RandomSource,
) -> (Individual, Individual) {
    let (c1, c2) = sbx_integer(parents.0, parents.1, bounds, variation, rng);
    let g1 = polynomial_mutation_integer(&c1, bounds, variation, rng);
    let g2 = polynomial_mutation_integer(&c2, bounds, variation, rng);
    let e1 = problem.evaluate(&g1).expect("variation respects bounds");
    let e2 = problem.evaluate(&g2).expect("variation respects bounds");
    (
        Individual { genotype: g1, eval: e1 },
        Individual { genotype: g2, eval: e2 },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selector_follows_objective_count() {
        assert_eq!(select_algorithm(2).unwrap().algorithm, AlgorithmId::Nsga2);
        assert_eq!(select_algorithm(3).unwrap().algorithm, AlgorithmId::Nsga3);
        let beyond = select_algorithm(5).unwrap();
        assert_eq!(beyond.algorithm, AlgorithmId::Nsga3);
        assert!(beyond.extrapolated);
        assert!(matches!(
            select_algorithm(1),
            Err(AlgorithmError::TooFewObjectives(1))
        ));
    }

    #[test]
    fn simplex_corners_for_one_division() {
        let pts = das_dennis_points(3, 1);
        assert_eq!(
            pts,
            vec![
                vec![0.0, 0.0, 1.0],
                vec![0.0, 1.0, 0.0],
                vec![1.0, 0.0, 0.0],
            ]
        );
    }

    #[test]
    fn two_objective_lattice_is_evenly_spaced() {
        let pts = das_dennis_points(2, 4);
        assert_eq!(
            pts,
            vec![
                vec![0.0, 1.0],
                vec![0.25, 0.75],
                vec![0.5, 0.5],
                vec![0.75, 0.25],
                vec![1.0, 0.0],
            ]
        );
    }

    #[test]
    fn lattice_counts_are_binomial() {
        assert_eq!(das_dennis_points(3, 9).len(), 55);
        assert_eq!(smallest_divisions(2, 50), 49);
        assert_eq!(das_dennis_points(2, 49).len(), 50);
        assert_eq!(smallest_divisions(3, 50), 9);
    }

    #[test]
    fn unknown_algorithm_name_rejected() {
        assert!("moead".parse::<AlgorithmId>().is_err());
        assert_eq!("nsga2".parse::<AlgorithmId>().unwrap(), AlgorithmId::Nsga2);
    }
}
