//! Nonparametric comparison machinery: tie-averaged ranks and the Friedman
//! chi-squared test, plus the embedded reference result matrix used to
//! self-test the pipeline.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("need at least two entries to rank, got {0}")]
    TooFewEntries(usize),
    #[error("rank table needs at least two instances, got {0}")]
    TooFewInstances(usize),
    #[error("rank row {row} has {got} entries, expected {expected}")]
    DimensionMismatch { row: usize, got: usize, expected: usize },
}

/// Per-instance average ranks of competing algorithms.
#[derive(Debug, Clone, PartialEq)]
pub struct RankTable {
    pub algorithms: Vec<String>,
    pub instances: Vec<String>,
    /// One row per instance, one rank per algorithm.
    pub ranks: Vec<Vec<f64>>,
}

/// Friedman test outcome: column mean ranks and the chi-squared statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct FriedmanResult {
    pub algorithms: Vec<String>,
    pub mean_ranks: Vec<f64>,
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub n_instances: usize,
}

/// Rank scores with rank 1 = best; tied scores share the mean of the rank
/// positions they span.
pub fn average_ranks(values: &[f64], higher_is_better: bool) -> Result<Vec<f64>, StatsError> {
    let k = values.len();
    if k < 2 {
        return Err(StatsError::TooFewEntries(k));
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        let cmp = values[a].partial_cmp(&values[b]).unwrap();
        if higher_is_better {
            cmp.reverse()
        } else {
            cmp
        }
    });
    let mut ranks = vec![0.0; k];
    let mut i = 0;
    while i < k {
        let mut j = i;
        while j + 1 < k && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // positions i..=j are tied; ranks are 1-based
        let mean_rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = mean_rank;
        }
        i = j + 1;
    }
    Ok(ranks)
}

/// Build a rank table from a score matrix (rows = instances).
pub fn rank_table(
    algorithms: &[String],
    instances: &[String],
    scores: &[Vec<f64>],
    higher_is_better: bool,
) -> Result<RankTable, StatsError> {
    let k = algorithms.len();
    let mut ranks = Vec::with_capacity(scores.len());
    for (row, score_row) in scores.iter().enumerate() {
        if score_row.len() != k {
            return Err(StatsError::DimensionMismatch { row, got: score_row.len(), expected: k });
        }
        ranks.push(average_ranks(score_row, higher_is_better)?);
    }
    Ok(RankTable {
        algorithms: algorithms.to_vec(),
        instances: instances.to_vec(),
        ranks,
    })
}

/// Friedman chi-squared over a rank table:
/// `12N / (k(k+1)) * sum_j (mean_rank_j - (k+1)/2)^2` with k-1 degrees of
/// freedom.
pub fn friedman(table: &RankTable) -> Result<FriedmanResult, StatsError> {
    let k = table.algorithms.len();
    let n = table.ranks.len();
    if n < 2 {
        return Err(StatsError::TooFewInstances(n));
    }
    for (row, r) in table.ranks.iter().enumerate() {
        if r.len() != k {
            return Err(StatsError::DimensionMismatch { row, got: r.len(), expected: k });
        }
    }
    let mean_ranks: Vec<f64> = (0..k)
        .map(|j| table.ranks.iter().map(|r| r[j]).sum::<f64>() / n as f64)
        .collect();
    let center = (k + 1) as f64 / 2.0;
    let statistic = 12.0 * n as f64 / (k as f64 * (k + 1) as f64)
        * mean_ranks.iter().map(|r| (r - center).powi(2)).sum::<f64>();
    Ok(FriedmanResult {
        algorithms: table.algorithms.clone(),
        mean_ranks,
        statistic,
        degrees_of_freedom: k - 1,
        n_instances: n,
    })
}

/// Embedded reference dataset: mean hypervolumes reported by the original
/// nine-solver study on the 12-instance suite, with the rankings it derived.
/// Used by `analyze --fixture-check` and the self-tests.
pub mod fixture {
    /// Algorithm columns of the reference matrix.
    pub const ALGORITHMS: [&str; 9] = [
        "GWASFGA", "MoCell", "MOMBI", "MOMBI2", "SMSEMOA", "SPEA2", "WASFGA", "NSGA-II",
        "NSGA-III",
    ];

    /// Instance rows of the reference matrix.
    pub const INSTANCES: [&str; 12] = [
        "DOML_2_0-4-4",
        "DOML_2_1-1-1",
        "DOML_2_2-2-2",
        "DOML_2_4-3-3",
        "DOML_2_5-5-5",
        "DOML_2_6-0-0",
        "DOML_3_0-4-4",
        "DOML_3_1-1-1",
        "DOML_3_2-2-2",
        "DOML_3_4-3-3",
        "DOML_3_5-5-5",
        "DOML_3_6-0-0",
    ];

    /// Mean hypervolume per (instance, algorithm); higher is better.
    pub const MEAN_HYPERVOLUME: [[f64; 9]; 12] = [
        [0.725, 0.891, 0.976, 0.817, 0.966, 0.858, 0.632, 0.998, 0.907],
        [0.790, 0.964, 0.989, 0.597, 0.947, 0.816, 0.523, 0.966, 0.784],
        [0.796, 0.983, 0.973, 0.923, 0.922, 0.982, 0.825, 0.983, 0.973],
        [0.937, 0.964, 0.976, 0.937, 0.966, 0.985, 0.973, 0.964, 0.913],
        [0.546, 0.928, 0.890, 0.824, 0.961, 0.939, 0.670, 0.970, 0.950],
        [0.886, 0.980, 0.924, 0.901, 0.966, 0.983, 0.805, 0.995, 0.998],
        [0.626, 0.977, 0.969, 0.749, 0.969, 0.953, 0.497, 0.987, 0.996],
        [0.718, 0.544, 0.660, 0.648, 0.745, 0.693, 0.610, 0.727, 0.750],
        [0.543, 0.727, 0.711, 0.592, 0.734, 0.709, 0.841, 0.625, 0.756],
        [0.549, 0.858, 0.963, 0.674, 0.970, 0.965, 0.590, 0.957, 0.966],
        [0.513, 0.971, 0.790, 0.822, 0.944, 0.927, 0.517, 0.946, 0.968],
        [0.458, 0.940, 0.975, 0.526, 0.984, 0.972, 0.610, 0.964, 0.944],
    ];

    /// Published mean Friedman ranks over all 12 instances.
    pub const PUBLISHED_RANKS_ALL: [f64; 9] =
        [7.9583, 4.5, 4.1667, 7.2083, 3.2917, 4.1667, 7.0833, 3.1667, 3.4583];

    /// Published mean ranks over the six two-objective instances.
    pub const PUBLISHED_RANKS_2OBJ: [f64; 9] =
        [7.9167, 4.1667, 3.5833, 7.25, 4.0, 3.6667, 7.3333, 2.3333, 4.75];

    /// Published mean ranks over the six three-objective instances.
    pub const PUBLISHED_RANKS_3OBJ: [f64; 9] =
        [8.0, 4.8333, 4.75, 7.1667, 2.5833, 4.6667, 6.8333, 4.0, 2.1667];

    pub fn scores() -> Vec<Vec<f64>> {
        MEAN_HYPERVOLUME.iter().map(|r| r.to_vec()).collect()
    }

    pub fn algorithm_names() -> Vec<String> {
        ALGORITHMS.iter().map(|s| s.to_string()).collect()
    }

    pub fn instance_names() -> Vec<String> {
        INSTANCES.iter().map(|s| s.to_string()).collect()
    }
}
