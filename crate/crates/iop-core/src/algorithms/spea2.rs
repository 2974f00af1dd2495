//! SPEA2: strength/raw/density fitness, fixed-size archive with
//! nearest-neighbor truncation, binary tournament mating on fitness.

use super::{make_offspring_pair, ResolvedConfig};
use crate::moea::{
    constrained_dominates, gene_bounds, init_population, Individual, RandomSource,
};
use crate::problem::ProblemInstance;
use std::cmp::Ordering;

/// SPEA2 fitness over the union of population and archive.
///
/// Strength S(i) counts individuals i dominates, raw fitness R(i) sums the
/// strengths of i's dominators, density D(i) = 1 / (sigma_k + 2) with sigma_k
/// the distance to the k-th nearest neighbor (k = floor(sqrt(set size))).
/// Lower fitness is better; nondominated individuals score below 1.
pub fn spea2_fitness(set: &[Individual]) -> Vec<f64> {
    let n = set.len();
    let mut strength = vec![0usize; n];
    let mut dominators: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            if i != j && constrained_dominates(&set[i], &set[j]) {
                strength[i] += 1;
                dominators[j].push(i);
            }
        }
    }
    let k = ((n as f64).sqrt().floor() as usize).max(1).min(n.saturating_sub(1).max(1));
    (0..n)
        .map(|i| {
            let raw: usize = dominators[i].iter().map(|&j| strength[j]).sum();
            let mut dists: Vec<f64> = (0..n)
                .filter(|&j| j != i)
                .map(|j| objective_distance(&set[i], &set[j]))
                .collect();
            dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let sigma_k = dists.get(k - 1).copied().or_else(|| dists.last().copied()).unwrap_or(0.0);
            raw as f64 + 1.0 / (sigma_k + 2.0)
        })
        .collect()
}

fn objective_distance(a: &Individual, b: &Individual) -> f64 {
    a.eval
        .objectives_min
        .iter()
        .zip(&b.eval.objectives_min)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Environmental selection: keep nondominated members, truncate by removing
/// the individual whose sorted nearest-neighbor distance list is
/// lexicographically smallest, fill shortfalls with best-fitness dominated
/// individuals.
fn environmental_selection(union: &[Individual], fitness: &[f64], n: usize) -> Vec<Individual> {
    let mut selected: Vec<usize> = (0..union.len()).filter(|&i| fitness[i] < 1.0).collect();
    if selected.len() < n {
        let mut dominated: Vec<usize> = (0..union.len()).filter(|&i| fitness[i] >= 1.0).collect();
        dominated.sort_by(|&a, &b| fitness[a].partial_cmp(&fitness[b]).unwrap_or(Ordering::Equal));
        selected.extend(dominated.into_iter().take(n - selected.len()));
        return selected.into_iter().map(|i| union[i].clone()).collect();
    }

    // distance matrix among the selected, updated as members drop out
    let mut members: Vec<usize> = selected;
    while members.len() > n {
        let dist_lists: Vec<Vec<f64>> = members
            .iter()
            .map(|&i| {
                let mut d: Vec<f64> = members
                    .iter()
                    .filter(|&&j| j != i)
                    .map(|&j| objective_distance(&union[i], &union[j]))
                    .collect();
                d.sort_by(|a, b| a.partial_cmp(b).unwrap());
                d
            })
            .collect();
        let victim = (0..members.len())
            .min_by(|&a, &b| {
                lexicographic_cmp(&dist_lists[a], &dist_lists[b])
            })
            .unwrap();
        members.remove(victim);
    }
    members.into_iter().map(|i| union[i].clone()).collect()
}

fn lexicographic_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y).unwrap_or(Ordering::Equal) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
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
    let mut archive: Vec<Individual> = Vec::new();

    loop {
        let union: Vec<Individual> = pop.iter().chain(&archive).cloned().collect();
        let fitness = spea2_fitness(&union);
        archive = environmental_selection(&union, &fitness, n);
        if evaluations + n > cfg.max_evaluations {
            break;
        }
        // mating pool by binary tournament on fitness over the archive
        let archive_fitness = spea2_fitness(&archive);
        let pick = |rng: &mut RandomSource| {
            let a = rng.index(archive.len());
            let b = rng.index(archive.len());
            if archive_fitness[b] < archive_fitness[a] {
                b
            } else {
                a
            }
        };
        let mut offspring = Vec::with_capacity(n);
        while offspring.len() < n {
            let p1 = pick(rng);
            let p2 = pick(rng);
            let (c1, c2) = make_offspring_pair(
                problem,
                (&archive[p1].genotype, &archive[p2].genotype),
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
        pop = offspring;
    }
    let mut pool = pop;
    pool.extend(archive);
    (pool, evaluations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{Evaluation, Genotype};

    fn individual(objectives_min: Vec<f64>) -> Individual {
        Individual {
            genotype: Genotype(vec![0]),
            eval: Evaluation {
                objectives_natural: objectives_min.clone(),
                objectives_min,
                violation: 0.0,
            },
        }
    }

    #[test]
    fn dominator_of_all_has_sub_unit_fitness() {
        let set = vec![
            individual(vec![0.0, 0.0]),
            individual(vec![1.0, 1.0]),
            individual(vec![2.0, 2.0]),
        ];
        let f = spea2_fitness(&set);
        assert!(f[0] < 1.0);
        assert!(f[1] >= 1.0);
        assert!(f[2] >= 1.0);
    }

    #[test]
    fn mutually_nondominated_pair_has_zero_raw_fitness() {
        let set = vec![individual(vec![0.0, 1.0]), individual(vec![1.0, 0.0])];
        let f = spea2_fitness(&set);
        assert!(f.iter().all(|&v| v < 1.0));
    }

    #[test]
    fn five_point_hand_table() {
        // points: a(0,0) dominates everything; b(1,2) and c(2,1) mutually
        // nondominated, both dominated by a; d(3,3) dominated by a, b, c;
        // e(1,2) duplicates b (duplicates do not dominate each other).
        let set = vec![
            individual(vec![0.0, 0.0]),
            individual(vec![1.0, 2.0]),
            individual(vec![2.0, 1.0]),
            individual(vec![3.0, 3.0]),
            individual(vec![1.0, 2.0]),
        ];
        // strengths: S(a)=4, S(b)=S(c)=S(e)=1 (only d), S(d)=0
        // raw: R(a)=0, R(b)=R(e)=4 (a), R(c)=4 (a), R(d)=4+1+1+1=7
        // k = floor(sqrt(5)) = 2; sigma_2 per point:
        //   a: dists {sqrt5, sqrt5, sqrt5, sqrt18} -> sigma_2 = sqrt5
        //   b: {0, sqrt2, sqrt5, sqrt5} -> sigma_2 = sqrt2
        //   c: {sqrt2, sqrt2, sqrt5, sqrt5} -> sigma_2 = sqrt2
        //   d: {sqrt5, sqrt5, sqrt5, sqrt18} -> sigma_2 = sqrt5
        //   e: same as b
        let s2 = 2.0f64.sqrt();
        let s5 = 5.0f64.sqrt();
        let expected = [
            0.0 + 1.0 / (s5 + 2.0),
            4.0 + 1.0 / (s2 + 2.0),
            4.0 + 1.0 / (s2 + 2.0),
            7.0 + 1.0 / (s5 + 2.0),
            4.0 + 1.0 / (s2 + 2.0),
        ];
        let f = spea2_fitness(&set);
        for (got, want) in f.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn truncation_keeps_spread() {
        let union = vec![
            individual(vec![0.0, 1.0]),
            individual(vec![0.05, 0.95]),
            individual(vec![0.5, 0.5]),
            individual(vec![1.0, 0.0]),
        ];
        let fitness = spea2_fitness(&union);
        let kept = environmental_selection(&union, &fitness, 3);
        assert_eq!(kept.len(), 3);
        // one of the two crowded near-duplicates must go
        let near: usize = kept
            .iter()
            .filter(|i| i.eval.objectives_min[0] < 0.1)
            .count();
        assert_eq!(near, 1);
    }
}
