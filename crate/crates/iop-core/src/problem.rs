//! Builds an evaluable constrained multiobjective problem over integer
//! genotypes from a parsed spec and a catalog.

use crate::catalog::{Catalog, CatalogElement, ElementType};
use crate::doml::{BoundKind, Metric, ObjectiveSpec, OptimizationSpec, Sense};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("infeasible model: no catalog candidates of type `{0}` after filtering")]
    InfeasibleModel(ElementType),
    #[error("gene {position} = {gene} out of range (slot has {candidates} candidates)")]
    GeneOutOfRange {
        position: usize,
        gene: usize,
        candidates: usize,
    },
    #[error("genotype length {got} does not match slot count {expected}")]
    LengthMismatch { got: usize, expected: usize },
}

/// One integer catalog index per deployment slot.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Genotype(pub Vec<usize>);

impl Genotype {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Objective values and constraint violation of one genotype.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    /// Per-objective values in natural sense (cost EUR, availability percent,
    /// performance index).
    pub objectives_natural: Vec<f64>,
    /// Same values converted to minimization (maximized metrics negated).
    pub objectives_min: Vec<f64>,
    /// Total normalized constraint violation, >= 0.
    pub violation: f64,
}

impl Evaluation {
    pub fn feasible(&self) -> bool {
        self.violation == 0.0
    }
}

/// Immutable problem model: slots, per-slot candidate lists (after
/// categorical filtering), objectives, and retained numeric bounds.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    slots: Vec<ElementType>,
    /// Filtered per-type candidate lists, shared by every slot of that type.
    candidates: [Vec<CatalogElement>; 3],
    objectives: Vec<ObjectiveSpec>,
    bounds: Vec<(Metric, BoundKind, f64)>,
}

fn type_index(t: ElementType) -> usize {
    match t {
        ElementType::Vm => 0,
        ElementType::Db => 1,
        ElementType::Storage => 2,
    }
}

/// Apply categorical requirements as hard filters and assemble the model.
pub fn build_problem(
    spec: &OptimizationSpec,
    catalog: &Catalog,
) -> Result<ProblemInstance, ProblemError> {
    let filtered = catalog.filter(&spec.categorical_constraints());
    let slots = spec.slots().to_vec();
    let mut candidates: [Vec<CatalogElement>; 3] = Default::default();
    for t in ElementType::ALL {
        candidates[type_index(t)] = filtered.of_type(t).cloned().collect();
    }
    for &slot in &slots {
        if candidates[type_index(slot)].is_empty() {
            return Err(ProblemError::InfeasibleModel(slot));
        }
    }
    Ok(ProblemInstance {
        slots,
        candidates,
        objectives: spec.objectives.clone(),
        bounds: spec.bounds(),
    })
}

impl ProblemInstance {
    pub fn slots(&self) -> &[ElementType] {
        &self.slots
    }

    pub fn n_slots(&self) -> usize {
        self.slots.len()
    }

    pub fn n_objectives(&self) -> usize {
        self.objectives.len()
    }

    pub fn objectives(&self) -> &[ObjectiveSpec] {
        &self.objectives
    }

    pub fn bounds(&self) -> &[(Metric, BoundKind, f64)] {
        &self.bounds
    }

    /// Number of candidates addressable by the gene at `slot`.
    pub fn candidate_count(&self, slot: usize) -> usize {
        self.candidates[type_index(self.slots[slot])].len()
    }

    pub fn candidates_of(&self, slot: usize) -> &[CatalogElement] {
        &self.candidates[type_index(self.slots[slot])]
    }

    /// Product of per-slot candidate counts.
    pub fn search_space_size(&self) -> u128 {
        self.slots
            .iter()
            .map(|&t| self.candidates[type_index(t)].len() as u128)
            .product()
    }

    /// Map a genotype to its concrete catalog elements.
    pub fn decode(&self, g: &Genotype) -> Result<Vec<&CatalogElement>, ProblemError> {
        if g.len() != self.slots.len() {
            return Err(ProblemError::LengthMismatch {
                got: g.len(),
                expected: self.slots.len(),
            });
        }
        g.0.iter()
            .enumerate()
            .map(|(i, &gene)| {
                let pool = self.candidates_of(i);
                pool.get(gene).ok_or(ProblemError::GeneOutOfRange {
                    position: i,
                    gene,
                    candidates: pool.len(),
                })
            })
            .collect()
    }

    /// Evaluate a genotype.
    ///
    /// Aggregation: cost is the sum of element costs, availability the
    /// series-system product scaled to percent, performance the arithmetic
    /// mean. Each violated bound contributes its shortfall normalized by the
    /// bound magnitude.
    pub fn evaluate(&self, g: &Genotype) -> Result<Evaluation, ProblemError> {
        let elements = self.decode(g)?;
        let cost: f64 = elements.iter().map(|e| e.cost_eur_month).sum();
        let availability: f64 = 100.0
            * elements
                .iter()
                .map(|e| e.availability_pct / 100.0)
                .product::<f64>();
        let performance: f64 =
            elements.iter().map(|e| e.performance).sum::<f64>() / elements.len() as f64;
        let metric_value = |m: Metric| match m {
            Metric::Cost => cost,
            Metric::Availability => availability,
            Metric::Performance => performance,
        };

        let objectives_natural: Vec<f64> =
            self.objectives.iter().map(|o| metric_value(o.metric)).collect();
        let objectives_min: Vec<f64> = self
            .objectives
            .iter()
            .zip(&objectives_natural)
            .map(|(o, &v)| match o.sense {
                Sense::Min => v,
                Sense::Max => -v,
            })
            .collect();

        let violation: f64 = self
            .bounds
            .iter()
            .map(|&(metric, kind, bound)| {
                let actual = metric_value(metric);
                let shortfall = match kind {
                    BoundKind::Max => actual - bound,
                    BoundKind::Min => bound - actual,
                };
                (shortfall / bound.abs()).max(0.0)
            })
            .sum();

        Ok(Evaluation { objectives_natural, objectives_min, violation })
    }
}
