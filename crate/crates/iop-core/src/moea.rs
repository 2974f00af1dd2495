//! Shared evolutionary machinery: constrained dominance, fast nondominated
//! sorting, crowding distance, integer-adapted SBX and polynomial mutation,
//! and binary tournament selection.

use crate::problem::{Evaluation, Genotype, ProblemInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;

/// Deterministic random source; identical seeds give identical sequences
/// across runs and platforms.
#[derive(Debug, Clone)]
pub struct RandomSource {
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn from_seed(seed: u64) -> Self {
        RandomSource { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Uniform draw in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform index in [0, n).
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }
}

/// A genotype paired with its evaluation under the run's problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genotype: Genotype,
    pub eval: Evaluation,
}

/// SBX / polynomial-mutation parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationConfig {
    pub crossover_probability: f64,
    pub crossover_distribution_index: f64,
    pub mutation_probability: f64,
    pub mutation_distribution_index: f64,
}

impl VariationConfig {
    /// Community-standard defaults: SBX with p=0.9, eta=20; polynomial
    /// mutation with p=1/L, eta=20.
    pub fn standard(genotype_len: usize) -> Self {
        VariationConfig {
            crossover_probability: 0.9,
            crossover_distribution_index: 20.0,
            mutation_probability: 1.0 / genotype_len.max(1) as f64,
            mutation_distribution_index: 20.0,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(0.0..=1.0).contains(&self.crossover_probability) {
            return Err(format!(
                "crossover probability {} outside [0, 1]",
                self.crossover_probability
            ));
        }
        if !(0.0..=1.0).contains(&self.mutation_probability) {
            return Err(format!(
                "mutation probability {} outside [0, 1]",
                self.mutation_probability
            ));
        }
        if self.crossover_distribution_index <= 0.0 || self.mutation_distribution_index <= 0.0 {
            return Err("distribution indices must be > 0".to_string());
        }
        Ok(())
    }
}

/// Pareto dominance in minimization space: no worse everywhere, strictly
/// better somewhere.
pub fn pareto_dominates(a: &[f64], b: &[f64]) -> bool {
    assert_eq!(a.len(), b.len(), "mismatched objective counts");
    let mut strictly_better = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strictly_better = true;
        }
    }
    strictly_better
}

/// Constrained dominance: feasible beats infeasible, infeasible compare by
/// violation, feasible compare by Pareto dominance.
pub fn constrained_dominates(a: &Individual, b: &Individual) -> bool {
    match (a.eval.feasible(), b.eval.feasible()) {
        (true, false) => true,
        (false, true) => false,
        (false, false) => a.eval.violation < b.eval.violation,
        (true, true) => pareto_dominates(&a.eval.objectives_min, &b.eval.objectives_min),
    }
}

/// Fast nondominated sort under constrained dominance. Returns fronts as
/// index lists; front 0 holds the individuals dominated by nobody.
pub fn nondominated_sort(pop: &[Individual]) -> Vec<Vec<usize>> {
    let n = pop.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if constrained_dominates(&pop[i], &pop[j]) {
                dominated_by[i].push(j);
                domination_count[j] += 1;
            } else if constrained_dominates(&pop[j], &pop[i]) {
                dominated_by[j].push(i);
                domination_count[i] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| domination_count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by[i] {
                domination_count[j] -= 1;
                if domination_count[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(std::mem::replace(&mut current, next));
    }
    fronts
}

/// Crowding distance over a mutually nondominated front. Boundary individuals
/// get infinity; zero-range objectives contribute nothing.
pub fn crowding_distance(front: &[Individual]) -> Vec<f64> {
    let n = front.len();
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let m = front[0].eval.objectives_min.len();
    let mut distance = vec![0.0f64; n];
    let mut order: Vec<usize> = (0..n).collect();
    for obj in 0..m {
        order.sort_by(|&a, &b| {
            front[a].eval.objectives_min[obj]
                .partial_cmp(&front[b].eval.objectives_min[obj])
                .unwrap_or(Ordering::Equal)
        });
        let lo = front[order[0]].eval.objectives_min[obj];
        let hi = front[order[n - 1]].eval.objectives_min[obj];
        distance[order[0]] = f64::INFINITY;
        distance[order[n - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for w in 1..n - 1 {
            let prev = front[order[w - 1]].eval.objectives_min[obj];
            let next = front[order[w + 1]].eval.objectives_min[obj];
            distance[order[w]] += (next - prev) / range;
        }
    }
    distance
}

fn sbx_gene(x1: f64, x2: f64, eta: f64, rng: &mut RandomSource) -> (f64, f64) {
    let u = rng.next_f64();
    let beta = if u <= 0.5 {
        (2.0 * u).powf(1.0 / (eta + 1.0))
    } else {
        (1.0 / (2.0 * (1.0 - u))).powf(1.0 / (eta + 1.0))
    };
    let c1 = 0.5 * ((1.0 + beta) * x1 + (1.0 - beta) * x2);
    let c2 = 0.5 * ((1.0 - beta) * x1 + (1.0 + beta) * x2);
    (c1, c2)
}

/// Stochastic rounding: up with probability equal to the fractional part.
/// Deterministic nearest-rounding would swallow the small perturbations the
/// distribution indices produce on narrow index ranges, crippling exploration.
fn round_clamp(v: f64, upper: usize, rng: &mut RandomSource) -> usize {
    let floor = v.floor();
    let rounded = if rng.next_f64() < v - floor { floor + 1.0 } else { floor };
    if rounded <= 0.0 {
        0
    } else if rounded >= upper as f64 {
        upper
    } else {
        rounded as usize
    }
}

/// Integer-adapted simulated binary crossover: real-coded SBX gene-wise,
/// stochastically rounded and clamped into the slot's candidate range.
pub fn sbx_integer(
    p1: &Genotype,
    p2: &Genotype,
    bounds: &[usize],
    cfg: &VariationConfig,
    rng: &mut RandomSource,
) -> (Genotype, Genotype) {
    assert_eq!(p1.len(), p2.len(), "parent length mismatch");
    assert_eq!(p1.len(), bounds.len(), "bounds length mismatch");
    let mut c1 = p1.0.clone();
    let mut c2 = p2.0.clone();
    if rng.next_f64() < cfg.crossover_probability {
        for i in 0..c1.len() {
            if rng.next_f64() < 0.5 {
                let (x1, x2) = (p1.0[i] as f64, p2.0[i] as f64);
                let (y1, y2) = sbx_gene(x1, x2, cfg.crossover_distribution_index, rng);
                let upper = bounds[i] - 1;
                c1[i] = round_clamp(y1, upper, rng);
                c2[i] = round_clamp(y2, upper, rng);
            }
        }
    }
    (Genotype(c1), Genotype(c2))
}

fn polynomial_perturb(x: f64, lower: f64, upper: f64, eta: f64, rng: &mut RandomSource) -> f64 {
    let range = upper - lower;
    if range <= 0.0 {
        return x;
    }
    let d1 = (x - lower) / range;
    let d2 = (upper - x) / range;
    let u = rng.next_f64();
    let pow = 1.0 / (eta + 1.0);
    let delta = if u < 0.5 {
        (2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1).powf(eta + 1.0)).powf(pow) - 1.0
    } else {
        1.0 - (2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2).powf(eta + 1.0)).powf(pow)
    };
    x + delta * range
}

/// Integer-adapted polynomial mutation over the continuous candidate range,
/// rounded and clamped.
pub fn polynomial_mutation_integer(
    g: &Genotype,
    bounds: &[usize],
    cfg: &VariationConfig,
    rng: &mut RandomSource,
) -> Genotype {
    let mut genes = g.0.clone();
    for i in 0..genes.len() {
        if rng.next_f64() < cfg.mutation_probability {
            let upper = bounds[i] - 1;
            let y = polynomial_perturb(
                genes[i] as f64,
                0.0,
                upper as f64,
                cfg.mutation_distribution_index,
                rng,
            );
            genes[i] = round_clamp(y, upper, rng);
        }
    }
    Genotype(genes)
}

/// Binary tournament with replacement; the comparator returns `Less` when its
/// first argument wins, and the first-drawn individual wins ties.
pub fn binary_tournament<F>(pop: &[Individual], comparator: F, rng: &mut RandomSource) -> usize
where
    F: Fn(&Individual, &Individual) -> Ordering,
{
    assert!(!pop.is_empty(), "empty population");
    let a = rng.index(pop.len());
    let b = rng.index(pop.len());
    match comparator(&pop[a], &pop[b]) {
        Ordering::Greater => b,
        _ => a,
    }
}

/// Comparator over constrained dominance only; mutually nondominated pairs
/// tie.
pub fn dominance_comparator(a: &Individual, b: &Individual) -> Ordering {
    if constrained_dominates(a, b) {
        Ordering::Less
    } else if constrained_dominates(b, a) {
        Ordering::Greater
    } else {
        Ordering::Equal
    }
}

/// Per-slot candidate counts, the gene bounds used by the variation operators.
pub fn gene_bounds(problem: &ProblemInstance) -> Vec<usize> {
    (0..problem.n_slots()).map(|i| problem.candidate_count(i)).collect()
}

/// Uniform random evaluated population of size `n`.
pub fn init_population(problem: &ProblemInstance, n: usize, rng: &mut RandomSource) -> Vec<Individual> {
    (0..n)
        .map(|_| {
            let genes: Vec<usize> = (0..problem.n_slots())
                .map(|slot| rng.index(problem.candidate_count(slot)))
                .collect();
            let genotype = Genotype(genes);
            let eval = problem.evaluate(&genotype).expect("genes drawn within bounds");
            Individual { genotype, eval }
        })
        .collect()
}
