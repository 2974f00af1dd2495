//! Generational NSGA-III: nondominated sorting plus reference-point
//! association and niching over a Das-Dennis simplex lattice.

use super::{das_dennis_points, make_offspring_pair, smallest_divisions, ResolvedConfig};
use crate::moea::{
    binary_tournament, dominance_comparator, gene_bounds, init_population, nondominated_sort,
    Individual, RandomSource,
};
use crate::problem::ProblemInstance;

const EPS: f64 = 1e-10;

pub(super) fn run(
    problem: &ProblemInstance,
    cfg: &ResolvedConfig,
    rng: &mut RandomSource,
) -> (Vec<Individual>, usize) {
    let m = problem.n_objectives();
    let divisions = smallest_divisions(m, cfg.population_size);
    let reference_points = das_dennis_points(m, divisions);

    let bounds = gene_bounds(problem);
    let n = cfg.population_size;
    let mut pop = init_population(problem, n, rng);
    let mut evaluations = n;
    // running ideal point over everything evaluated so far
    let mut ideal = vec![f64::INFINITY; m];
    update_ideal(&mut ideal, &pop);

    while evaluations + n <= cfg.max_evaluations {
        let mut offspring = Vec::with_capacity(n);
        while offspring.len() < n {
            let p1 = binary_tournament(&pop, dominance_comparator, rng);
            let p2 = binary_tournament(&pop, dominance_comparator, rng);
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
        update_ideal(&mut ideal, &offspring);
        pop.extend(offspring);
        pop = survivor_selection(pop, n, &ideal, &reference_points, rng);
    }
    (pop, evaluations)
}

fn update_ideal(ideal: &mut [f64], pop: &[Individual]) {
    for ind in pop {
        for (lo, &v) in ideal.iter_mut().zip(&ind.eval.objectives_min) {
            if v < *lo {
                *lo = v;
            }
        }
    }
}

fn survivor_selection(
    pop: Vec<Individual>,
    n: usize,
    ideal: &[f64],
    reference_points: &[Vec<f64>],
    rng: &mut RandomSource,
) -> Vec<Individual> {
    // The integer encoding produces many duplicate genotypes, which inflate
    // the first front past the population size and let copies crowd newly
    // found trade-offs out of their reference niches. Select among unique
    // genotypes; duplicates only pad the population back to size afterwards.
    let mut seen = std::collections::HashSet::new();
    let mut duplicates: Vec<Individual> = Vec::new();
    let mut pop: Vec<Individual> = pop
        .into_iter()
        .filter(|ind| {
            if seen.insert(ind.genotype.0.clone()) {
                true
            } else {
                duplicates.push(ind.clone());
                false
            }
        })
        .collect();
    if pop.len() <= n {
        let shortfall = n - pop.len();
        pop.extend(duplicates.into_iter().take(shortfall));
        return pop;
    }

    let fronts = nondominated_sort(&pop);
    let mut accepted: Vec<usize> = Vec::with_capacity(n);
    let mut split_front: Vec<usize> = Vec::new();
    for front in fronts {
        if accepted.len() + front.len() <= n {
            accepted.extend(front);
            if accepted.len() == n {
                break;
            }
        } else {
            split_front = front;
            break;
        }
    }
    if split_front.is_empty() {
        return accepted.into_iter().map(|i| pop[i].clone()).collect();
    }

    // normalize accepted + split members together
    let considered: Vec<usize> = accepted.iter().chain(&split_front).copied().collect();
    let scale = normalization_scale(&pop, &considered, ideal);
    let normalized: Vec<Vec<f64>> = considered
        .iter()
        .map(|&i| {
            pop[i]
                .eval
                .objectives_min
                .iter()
                .zip(ideal)
                .zip(&scale)
                .map(|((&f, &z), &s)| (f - z) / s.max(EPS))
                .collect()
        })
        .collect();

    // associate everyone with the closest reference direction
    let association: Vec<(usize, f64)> = normalized
        .iter()
        .map(|point| closest_reference(point, reference_points))
        .collect();

    let mut niche_count = vec![0usize; reference_points.len()];
    for idx in 0..accepted.len() {
        niche_count[association[idx].0] += 1;
    }
    // remaining candidates: (position in considered, ref index, distance)
    let mut candidates: Vec<(usize, usize, f64)> = (accepted.len()..considered.len())
        .map(|pos| (pos, association[pos].0, association[pos].1))
        .collect();

    let mut excluded = vec![false; reference_points.len()];
    while accepted.len() < n {
        // reference point with the smallest niche count, random among ties
        let min_count = niche_count
            .iter()
            .zip(&excluded)
            .filter(|(_, &ex)| !ex)
            .map(|(&c, _)| c)
            .min()
            .expect("some reference point remains");
        let tied: Vec<usize> = (0..reference_points.len())
            .filter(|&j| !excluded[j] && niche_count[j] == min_count)
            .collect();
        let j = tied[rng.index(tied.len())];

        let members: Vec<usize> = candidates
            .iter()
            .enumerate()
            .filter(|(_, c)| c.1 == j)
            .map(|(ci, _)| ci)
            .collect();
        if members.is_empty() {
            excluded[j] = true;
            continue;
        }
        let chosen_ci = if min_count == 0 {
            // closest member of the split front to this direction
            *members
                .iter()
                .min_by(|&&a, &&b| candidates[a].2.partial_cmp(&candidates[b].2).unwrap())
                .unwrap()
        } else {
            members[rng.index(members.len())]
        };
        let (pos, _, _) = candidates.swap_remove(chosen_ci);
        accepted.push(considered[pos]);
        niche_count[j] += 1;
    }
    accepted.into_iter().map(|i| pop[i].clone()).collect()
}

/// Per-objective normalization denominators: extreme-point intercepts when
/// the system is well conditioned, otherwise the considered set's nadir
/// ranges.
fn normalization_scale(pop: &[Individual], considered: &[usize], ideal: &[f64]) -> Vec<f64> {
    let m = ideal.len();
    let translated: Vec<Vec<f64>> = considered
        .iter()
        .map(|&i| {
            pop[i]
                .eval
                .objectives_min
                .iter()
                .zip(ideal)
                .map(|(&f, &z)| f - z)
                .collect()
        })
        .collect();

    // extreme point per axis: minimizer of the achievement scalarizing
    // function with that axis's weight vector
    let mut extremes: Vec<usize> = Vec::with_capacity(m);
    for axis in 0..m {
        let best = (0..translated.len())
            .min_by(|&a, &b| {
                asf(&translated[a], axis)
                    .partial_cmp(&asf(&translated[b], axis))
                    .unwrap()
            })
            .unwrap();
        extremes.push(best);
    }

    if let Some(intercepts) = plane_intercepts(&extremes.iter().map(|&i| translated[i].clone()).collect::<Vec<_>>()) {
        if intercepts.iter().all(|&v| v > EPS) {
            return intercepts;
        }
    }
    // fallback: nadir ranges of the considered set
    (0..m)
        .map(|j| {
            translated
                .iter()
                .map(|p| p[j])
                .fold(0.0f64, f64::max)
                .max(EPS)
        })
        .collect()
}

fn asf(point: &[f64], axis: usize) -> f64 {
    point
        .iter()
        .enumerate()
        .map(|(j, &v)| if j == axis { v } else { v / 1e-6 })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Solve for the axis intercepts of the hyperplane through the extreme
/// points; `None` when the system is singular.
fn plane_intercepts(extremes: &[Vec<f64>]) -> Option<Vec<f64>> {
    let m = extremes.len();
    // Gaussian elimination on E * x = 1
    let mut a: Vec<Vec<f64>> = extremes.iter().map(|r| {
        let mut row = r.clone();
        row.push(1.0);
        row
    }).collect();
    for col in 0..m {
        let pivot = (col..m).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        let p = a[col][col];
        for j in col..=m {
            a[col][j] /= p;
        }
        for i in 0..m {
            if i != col {
                let factor = a[i][col];
                for j in col..=m {
                    a[i][j] -= factor * a[col][j];
                }
            }
        }
    }
    let intercepts: Vec<f64> = (0..m)
        .map(|i| {
            let coeff = a[i][m];
            if coeff.abs() < 1e-12 {
                f64::NAN
            } else {
                1.0 / coeff
            }
        })
        .collect();
    if intercepts.iter().any(|v| !v.is_finite()) {
        None
    } else {
        Some(intercepts)
    }
}

/// Index and perpendicular distance of the closest reference direction.
fn closest_reference(point: &[f64], reference_points: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0usize, f64::INFINITY);
    for (j, w) in reference_points.iter().enumerate() {
        let d = perpendicular_distance(point, w);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

fn perpendicular_distance(point: &[f64], direction: &[f64]) -> f64 {
    let norm_sq: f64 = direction.iter().map(|w| w * w).sum();
    if norm_sq <= 0.0 {
        return point.iter().map(|v| v * v).sum::<f64>().sqrt();
    }
    let dot: f64 = point.iter().zip(direction).map(|(p, w)| p * w).sum();
    let t = dot / norm_sq;
    point
        .iter()
        .zip(direction)
        .map(|(p, w)| (p - t * w).powi(2))
        .sum::<f64>()
        .sqrt()
}
