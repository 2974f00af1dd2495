//! Steady-state SMS-EMOA: one offspring per step, survivor removal by least
//! exclusive hypervolume contribution within the worst front.

use super::{make_offspring_pair, ResolvedConfig};
use crate::metrics::hv_contributions;
use crate::moea::{
    binary_tournament, dominance_comparator, gene_bounds, init_population, nondominated_sort,
    Individual, RandomSource,
};
use crate::problem::ProblemInstance;

pub(super) fn run(
    problem: &ProblemInstance,
    cfg: &ResolvedConfig,
    rng: &mut RandomSource,
) -> (Vec<Individual>, usize) {
    let bounds = gene_bounds(problem);
    let n = cfg.population_size;
    let mut pop = init_population(problem, n, rng);
    let mut evaluations = n;
    while evaluations + 1 <= cfg.max_evaluations {
        let p1 = binary_tournament(&pop, dominance_comparator, rng);
        let p2 = binary_tournament(&pop, dominance_comparator, rng);
        let (child, _) = make_offspring_pair(
            problem,
            (&pop[p1].genotype, &pop[p2].genotype),
            &bounds,
            &cfg.variation,
            rng,
        );
        evaluations += 1;
        pop.push(child);
        let victim = select_victim(&pop);
        pop.remove(victim);
    }
    (pop, evaluations)
}

/// Population index to drop: the worst-front member with the least exclusive
/// hypervolume contribution, measured against the front's own nadir + 1.
fn select_victim(pop: &[Individual]) -> usize {
    let fronts = nondominated_sort(pop);
    let worst = fronts.last().expect("population is non-empty");
    if worst.len() == 1 {
        return worst[0];
    }
    let points: Vec<Vec<f64>> = worst
        .iter()
        .map(|&i| pop[i].eval.objectives_min.clone())
        .collect();
    let m = points[0].len();
    let reference: Vec<f64> = (0..m)
        .map(|j| points.iter().map(|p| p[j]).fold(f64::NEG_INFINITY, f64::max) + 1.0)
        .collect();
    let contributions = hv_contributions(&points, &reference).expect("2 or 3 objectives");
    // ties resolved toward the larger index in front order
    let mut best = 0usize;
    for (k, &c) in contributions.iter().enumerate() {
        if c <= contributions[best] {
            best = k;
        }
    }
    worst[best]
}
