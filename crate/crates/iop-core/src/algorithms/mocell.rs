//! Synchronous cellular model on a 5x10 toroidal grid with Moore
//! neighborhoods and a bounded crowding archive with feedback.

use super::ResolvedConfig;
use crate::moea::{
    constrained_dominates, crowding_distance, gene_bounds, init_population,
    polynomial_mutation_integer, sbx_integer, Individual, RandomSource,
};
use crate::problem::ProblemInstance;

const GRID_ROWS: usize = 5;
const GRID_COLS: usize = 10;

fn neighborhood(cell: usize) -> [usize; 9] {
    let row = (cell / GRID_COLS) as isize;
    let col = (cell % GRID_COLS) as isize;
    let mut out = [0usize; 9];
    let mut k = 0;
    for dr in -1..=1isize {
        for dc in -1..=1isize {
            let r = (row + dr).rem_euclid(GRID_ROWS as isize) as usize;
            let c = (col + dc).rem_euclid(GRID_COLS as isize) as usize;
            out[k] = r * GRID_COLS + c;
            k += 1;
        }
    }
    out
}

/// Insert into a bounded nondominated archive, truncating by crowding
/// distance when the capacity is exceeded.
fn archive_insert(archive: &mut Vec<Individual>, candidate: Individual, capacity: usize) {
    if archive.iter().any(|a| constrained_dominates(a, &candidate)) {
        return;
    }
    archive.retain(|a| !constrained_dominates(&candidate, a));
    if archive.iter().any(|a| a.genotype == candidate.genotype) {
        return;
    }
    archive.push(candidate);
    if archive.len() > capacity {
        let distances = crowding_distance(archive);
        let victim = (0..archive.len())
            .min_by(|&a, &b| distances[a].partial_cmp(&distances[b]).unwrap())
            .unwrap();
        archive.remove(victim);
    }
}

pub(super) fn run(
    problem: &ProblemInstance,
    cfg: &ResolvedConfig,
    rng: &mut RandomSource,
) -> (Vec<Individual>, usize) {
    assert_eq!(
        cfg.population_size,
        GRID_ROWS * GRID_COLS,
        "cellular grid is fixed at {}x{}",
        GRID_ROWS,
        GRID_COLS
    );
    let bounds = gene_bounds(problem);
    let n = cfg.population_size;
    let mut grid = init_population(problem, n, rng);
    let mut evaluations = n;
    let mut archive: Vec<Individual> = Vec::new();
    for ind in &grid {
        archive_insert(&mut archive, ind.clone(), n);
    }

    while evaluations + n <= cfg.max_evaluations {
        let mut next = grid.clone();
        for cell in 0..n {
            let hood = neighborhood(cell);
            let pick = |rng: &mut RandomSource| {
                let a = hood[rng.index(hood.len())];
                let b = hood[rng.index(hood.len())];
                if constrained_dominates(&grid[b], &grid[a]) {
                    b
                } else {
                    a
                }
            };
            let p1 = pick(rng);
            let p2 = pick(rng);
            let (c1, _) = sbx_integer(
                &grid[p1].genotype,
                &grid[p2].genotype,
                &bounds,
                &cfg.variation,
                rng,
            );
            let genotype = polynomial_mutation_integer(&c1, &bounds, &cfg.variation, rng);
            let eval = problem.evaluate(&genotype).expect("variation respects bounds");
            let child = Individual { genotype, eval };
            evaluations += 1;
            if !constrained_dominates(&grid[cell], &child) {
                next[cell] = child.clone();
            }
            archive_insert(&mut archive, child, n);
        }
        grid = next;
        // feedback: a random archive member overwrites a random cell
        if !archive.is_empty() {
            let member = archive[rng.index(archive.len())].clone();
            let cell = rng.index(n);
            grid[cell] = member;
        }
    }

    debug_assert_eq!(grid.len(), n);
    debug_assert!(archive.len() <= n);
    let mut pool = grid;
    pool.extend(archive);
    (pool, evaluations)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_neighborhood_wraps() {
        let hood = neighborhood(0);
        assert_eq!(hood.len(), 9);
        // contains the cell itself and the opposite corner via wrap-around
        assert!(hood.contains(&0));
        let last = (GRID_ROWS - 1) * GRID_COLS + (GRID_COLS - 1);
        assert!(hood.contains(&last));
        // all distinct on a 5x10 grid
        let unique: std::collections::HashSet<_> = hood.iter().collect();
        assert_eq!(unique.len(), 9);
    }
}
