//! The infrastructural element catalog: the pool of deployable options
//! (virtual machines, databases, storage) a solver can pick from.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The three kinds of deployable elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementType {
    Vm,
    Db,
    Storage,
}

impl ElementType {
    pub const ALL: [ElementType; 3] = [ElementType::Vm, ElementType::Db, ElementType::Storage];

    pub fn as_str(&self) -> &'static str {
        match self {
            ElementType::Vm => "vm",
            ElementType::Db => "db",
            ElementType::Storage => "storage",
        }
    }

    fn index(self) -> usize {
        match self {
            ElementType::Vm => 0,
            ElementType::Db => 1,
            ElementType::Storage => 2,
        }
    }
}

impl std::fmt::Display for ElementType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One deployable option with its commercial attributes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogElement {
    pub id: String,
    #[serde(rename = "type")]
    pub element_type: ElementType,
    pub provider: String,
    pub region: String,
    /// Monthly cost in EUR, strictly positive.
    pub cost_eur_month: f64,
    /// Availability percentage in (0, 100].
    pub availability_pct: f64,
    /// Dimensionless performance index, strictly positive.
    pub performance: f64,
}

/// Properties a categorical requirement may filter on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogProperty {
    Region,
    Provider,
}

impl CatalogProperty {
    pub fn as_str(&self) -> &'static str {
        match self {
            CatalogProperty::Region => "region",
            CatalogProperty::Provider => "provider",
        }
    }
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("malformed catalog document: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("duplicate element id `{id}`")]
    DuplicateId { id: String },
    #[error("element `{id}`: field `{field}` out of range ({message})")]
    OutOfRange {
        id: String,
        field: &'static str,
        message: String,
    },
}

/// Immutable pool of catalog elements with a per-type index.
///
/// A genotype gene `g` for a slot of type `t` addresses position `g` in the
/// per-type sub-list of `t`, preserving document order.
#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    elements: Vec<CatalogElement>,
    by_type: [Vec<usize>; 3],
}

impl Catalog {
    pub fn new(elements: Vec<CatalogElement>) -> Result<Self, CatalogError> {
        let mut seen = std::collections::HashSet::new();
        for e in &elements {
            if !seen.insert(e.id.clone()) {
                return Err(CatalogError::DuplicateId { id: e.id.clone() });
            }
            validate_element(e)?;
        }
        let mut by_type: [Vec<usize>; 3] = Default::default();
        for (i, e) in elements.iter().enumerate() {
            by_type[e.element_type.index()].push(i);
        }
        Ok(Catalog { elements, by_type })
    }

    pub fn elements(&self) -> &[CatalogElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Ordered sub-list of elements of the given type.
    pub fn of_type(&self, t: ElementType) -> impl Iterator<Item = &CatalogElement> {
        self.by_type[t.index()].iter().map(|&i| &self.elements[i])
    }

    pub fn count_of_type(&self, t: ElementType) -> usize {
        self.by_type[t.index()].len()
    }

    /// Keep only elements whose property value is allowed by every constraint.
    pub fn filter(&self, constraints: &[(CatalogProperty, Vec<String>)]) -> Catalog {
        let kept = self
            .elements
            .iter()
            .filter(|e| {
                constraints.iter().all(|(prop, allowed)| {
                    let value = match prop {
                        CatalogProperty::Region => &e.region,
                        CatalogProperty::Provider => &e.provider,
                    };
                    allowed.iter().any(|a| a == value)
                })
            })
            .cloned()
            .collect();
        // kept elements already passed validation and remain unique
        Catalog::new(kept).expect("filtered subset of a valid catalog is valid")
    }
}

fn validate_element(e: &CatalogElement) -> Result<(), CatalogError> {
    let err = |field, message: String| CatalogError::OutOfRange {
        id: e.id.clone(),
        field,
        message,
    };
    if !(e.cost_eur_month > 0.0) {
        return Err(err("cost_eur_month", format!("{} is not > 0", e.cost_eur_month)));
    }
    if !(e.availability_pct > 0.0 && e.availability_pct <= 100.0) {
        return Err(err(
            "availability_pct",
            format!("{} is not in (0, 100]", e.availability_pct),
        ));
    }
    if !(e.performance > 0.0) {
        return Err(err("performance", format!("{} is not > 0", e.performance)));
    }
    Ok(())
}

/// Parse a catalog JSON document (an array of element records).
pub fn load_catalog(text: &str) -> Result<Catalog, CatalogError> {
    let elements: Vec<CatalogElement> = serde_json::from_str(text)?;
    Catalog::new(elements)
}

/// Render a catalog back to its JSON document form.
pub fn render_catalog(catalog: &Catalog) -> String {
    serde_json::to_string_pretty(catalog.elements()).expect("catalog serializes")
}

/// Per-type element counts for synthetic generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TypeCounts {
    pub vm: usize,
    pub db: usize,
    pub storage: usize,
}

impl Default for TypeCounts {
    /// The benchmark catalog composition: 99 VMs, 24 DBs, 33 storage elements.
    fn default() -> Self {
        TypeCounts { vm: 99, db: 24, storage: 33 }
    }
}

pub const PROVIDERS: [&str; 4] = ["amazon", "google", "openstack", "azure"];
pub const REGIONS: [&str; 7] = ["00EU", "01US", "02AS", "ES", "FR", "DE", "IT"];

/// Generate a synthetic catalog, deterministic for a given seed.
///
/// Costs are log-uniform at cloud-provider magnitudes (per type), availability
/// uniform in [99.0, 99.99] percent, performance uniform in [1, 100]. Each
/// type's block is emitted sorted by cost: genotypes index candidates by
/// position, and a cost-ordered catalog gives the integer variation operators
/// metric locality (neighboring indices are similar elements).
pub fn generate_catalog(seed: u64, counts: TypeCounts) -> Catalog {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut elements = Vec::with_capacity(counts.vm + counts.db + counts.storage);
    let specs = [
        (ElementType::Vm, counts.vm, (5.0, 500.0)),
        (ElementType::Db, counts.db, (10.0, 400.0)),
        (ElementType::Storage, counts.storage, (1.0, 100.0)),
    ];
    for (element_type, count, (cost_lo, cost_hi)) in specs {
        let mut drawn: Vec<(f64, f64, f64, &str, &str)> = (0..count)
            .map(|_| {
                let cost = log_uniform(&mut rng, cost_lo, cost_hi);
                let availability = rng.random_range(99.0..99.99);
                let performance = rng.random_range(1.0..100.0);
                let provider = PROVIDERS[rng.random_range(0..PROVIDERS.len())];
                let region = REGIONS[rng.random_range(0..REGIONS.len())];
                (cost, availability, performance, provider, region)
            })
            .collect();
        drawn.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for (i, (cost, availability, performance, provider, region)) in
            drawn.into_iter().enumerate()
        {
            elements.push(CatalogElement {
                id: format!("{}-{:03}", element_type.as_str(), i),
                element_type,
                provider: provider.to_string(),
                region: region.to_string(),
                cost_eur_month: round_to(cost, 2),
                availability_pct: round_to(availability, 3),
                performance: round_to(performance, 2),
            });
        }
    }
    Catalog::new(elements).expect("generated attributes are in range")
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

fn round_to(v: f64, decimals: u32) -> f64 {
    let f = 10f64.powi(decimals as i32);
    (v * f).round() / f
}

#[cfg(test)]
mod tests {
    use super::*;

    fn element(id: &str, t: ElementType) -> CatalogElement {
        CatalogElement {
            id: id.to_string(),
            element_type: t,
            provider: "amazon".into(),
            region: "00EU".into(),
            cost_eur_month: 10.0,
            availability_pct: 99.5,
            performance: 50.0,
        }
    }

    #[test]
    fn load_minimal_document() {
        let doc = r#"[
            {"id":"vm-0","type":"vm","provider":"amazon","region":"00EU",
             "cost_eur_month":10.0,"availability_pct":99.5,"performance":50.0},
            {"id":"db-0","type":"db","provider":"google","region":"00EU",
             "cost_eur_month":20.0,"availability_pct":99.9,"performance":30.0},
            {"id":"st-0","type":"storage","provider":"azure","region":"01US",
             "cost_eur_month":5.0,"availability_pct":99.0,"performance":10.0}
        ]"#;
        let cat = load_catalog(doc).unwrap();
        assert_eq!(cat.len(), 3);
        for t in ElementType::ALL {
            assert_eq!(cat.count_of_type(t), 1);
        }
    }

    #[test]
    fn availability_out_of_range_names_element() {
        let mut e = element("bad", ElementType::Vm);
        e.availability_pct = 101.0;
        let err = Catalog::new(vec![e]).unwrap_err();
        match err {
            CatalogError::OutOfRange { id, field, .. } => {
                assert_eq!(id, "bad");
                assert_eq!(field, "availability_pct");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn duplicate_id_rejected() {
        let err = Catalog::new(vec![
            element("x", ElementType::Vm),
            element("x", ElementType::Db),
        ])
        .unwrap_err();
        assert!(matches!(err, CatalogError::DuplicateId { .. }));
    }

    #[test]
    fn generated_catalog_has_requested_composition() {
        let cat = generate_catalog(42, TypeCounts::default());
        assert_eq!(cat.len(), 156);
        assert_eq!(cat.count_of_type(ElementType::Vm), 99);
        assert_eq!(cat.count_of_type(ElementType::Db), 24);
        assert_eq!(cat.count_of_type(ElementType::Storage), 33);
        // loading the rendered document reproduces it
        let loaded = load_catalog(&render_catalog(&cat)).unwrap();
        assert_eq!(loaded, cat);
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_catalog(42, TypeCounts::default());
        let b = generate_catalog(42, TypeCounts::default());
        assert_eq!(a, b);
        let empty = generate_catalog(42, TypeCounts { vm: 0, db: 0, storage: 0 });
        assert!(empty.is_empty());
    }

    #[test]
    fn default_catalog_has_eu_elements_of_every_type() {
        let cat = generate_catalog(42, TypeCounts::default());
        let eu = cat.filter(&[(CatalogProperty::Region, vec!["00EU".into()])]);
        for t in ElementType::ALL {
            assert!(eu.count_of_type(t) >= 1, "no 00EU element of type {t}");
        }
    }

    #[test]
    fn filter_keeps_only_matching_elements() {
        let cat = generate_catalog(7, TypeCounts { vm: 20, db: 10, storage: 10 });
        let expected = cat
            .elements()
            .iter()
            .filter(|e| e.region == "00EU")
            .count();
        let filtered = cat.filter(&[(CatalogProperty::Region, vec!["00EU".into()])]);
        assert_eq!(filtered.len(), expected);
        assert!(filtered.elements().iter().all(|e| e.region == "00EU"));
        // empty constraint set is the identity
        assert_eq!(cat.filter(&[]), cat);
        // idempotent
        let twice = filtered.filter(&[(CatalogProperty::Region, vec!["00EU".into()])]);
        assert_eq!(twice, filtered);
    }

    #[test]
    fn per_type_sizes_partition_the_catalog() {
        let cat = generate_catalog(3, TypeCounts { vm: 5, db: 4, storage: 3 });
        let total: usize = ElementType::ALL.iter().map(|&t| cat.count_of_type(t)).sum();
        assert_eq!(total, cat.len());
    }
}
