//! Generational NSGA-II: rank/crowding tournaments, SBX + polynomial
//! mutation, survivor selection by nondominated sorting with crowding
//! truncation of the last admitted front.

use super::{make_offspring_pair, ResolvedConfig};
use crate::moea::{crowding_distance, gene_bounds, init_population, nondominated_sort, Individual, RandomSource};
use crate::problem::ProblemInstance;
use std::cmp::Ordering;

/// Per-individual rank (front index) and crowding distance of a population.
pub(super) fn rank_and_crowding(pop: &[Individual]) -> (Vec<usize>, Vec<f64>) {
    let fronts = nondominated_sort(pop);
    let mut rank = vec![0usize; pop.len()];
    let mut crowd = vec![0.0f64; pop.len()];
    for (r, front) in fronts.iter().enumerate() {
        let members: Vec<Individual> = front.iter().map(|&i| pop[i].clone()).collect();
        let distances = crowding_distance(&members);
        for (&i, d) in front.iter().zip(distances) {
            rank[i] = r;
            crowd[i] = d;
        }
    }
    (rank, crowd)
}

/// Tournament by rank, then crowding; the first-drawn individual wins ties.
fn tournament(rank: &[usize], crowd: &[f64], rng: &mut RandomSource) -> usize {
    let a = rng.index(rank.len());
    let b = rng.index(rank.len());
    let ordering = rank[a]
        .cmp(&rank[b])
        .then_with(|| crowd[b].partial_cmp(&crowd[a]).unwrap_or(Ordering::Equal));
    match ordering {
        Ordering::Greater => b,
        _ => a,
    }
}

/// Keep the best `n` of a combined population: whole fronts first, the split
/// front truncated by descending crowding distance.
pub(super) fn survivor_selection(pop: Vec<Individual>, n: usize) -> Vec<Individual> {
    let fronts = nondominated_sort(&pop);
    let mut survivors = Vec::with_capacity(n);
    for front in fronts {
        if survivors.len() + front.len() <= n {
            survivors.extend(front.iter().map(|&i| pop[i].clone()));
            if survivors.len() == n {
                break;
            }
        } else {
            let members: Vec<Individual> = front.iter().map(|&i| pop[i].clone()).collect();
            let distances = crowding_distance(&members);
            let mut order: Vec<usize> = (0..members.len()).collect();
            order.sort_by(|&a, &b| {
                distances[b].partial_cmp(&distances[a]).unwrap_or(Ordering::Equal)
            });
            for &i in order.iter().take(n - survivors.len()) {
                survivors.push(members[i].clone());
            }
            break;
        }
    }
    survivors
}

pub(super) fn run(
    problem: &ProblemInstance,
    cfg: &ResolvedConfig,
    rng: &mut RandomSource,
) -> (Vec<Individual>, usize) {
    let bounds = gene_bounds(problem);
    let n = cfg.population_size;
    let mut pop = init_population(problem, n, rng);
    let mut evaluations = n;
    while evaluations + n <= cfg.max_evaluations {
        let (rank, crowd) = rank_and_crowding(&pop);
        let mut offspring = Vec::with_capacity(n);
        while offspring.len() < n {
            let p1 = tournament(&rank, &crowd, rng);
            let p2 = tournament(&rank, &crowd, rng);
            let (c1, c2) = make_offspring_pair(
                problem,
                (&pop[p1].genotype, &pop[p2].genotype),
                &bounds,
                &cfg.variation,
                rng,
            );
            offspring.push(c1);
            if offspring.len() < n {
                offspring.push(c2);
            }
        }
        evaluations += offspring.len();
        pop.extend(offspring);
        pop = survivor_selection(pop, n);
    }
    (pop, evaluations)
}
