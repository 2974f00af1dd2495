//! Property-based invariants over the parser, variation operators, and the
//! hypervolume indicator.

use iop_core::catalog::load_catalog;
use iop_core::doml::parse_doml;
use iop_core::metrics::hypervolume;
use iop_core::moea::{polynomial_mutation_integer, sbx_integer, RandomSource, VariationConfig};
use iop_core::problem::Genotype;
use proptest::prelude::*;

proptest! {
    #[test]
    fn parser_never_panics(text in "\\PC*") {
        let _ = parse_doml(&text);
    }

    #[test]
    fn parser_never_panics_on_braced_soup(
        text in "optimization [a-z]{1,8} \\{[ a-z\"=>;{}0-9]{0,64}"
    ) {
        let _ = parse_doml(&text);
    }

    #[test]
    fn catalog_loader_never_panics(text in "\\PC*") {
        let _ = load_catalog(&text);
    }

    #[test]
    fn variation_respects_gene_bounds(
        seed in any::<u64>(),
        bounds in proptest::collection::vec(1usize..200, 1..8),
    ) {
        let mut rng = RandomSource::from_seed(seed);
        let variation = VariationConfig::standard(bounds.len());
        let random_genotype = |rng: &mut RandomSource| {
            Genotype(bounds.iter().map(|&b| rng.index(b)).collect())
        };
        let p1 = random_genotype(&mut rng);
        let p2 = random_genotype(&mut rng);
        let (c1, c2) = sbx_integer(&p1, &p2, &bounds, &variation, &mut rng);
        for child in [&c1, &c2] {
            let mutated = polynomial_mutation_integer(child, &bounds, &variation, &mut rng);
            for (gene, &bound) in mutated.0.iter().zip(&bounds) {
                prop_assert!(*gene < bound);
            }
        }
    }

    #[test]
    fn hypervolume_is_bounded_by_the_reference_box(
        seed in any::<u64>(),
        n in 1usize..12,
        m in 2usize..4,
    ) {
        let mut rng = RandomSource::from_seed(seed);
        let front: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..m).map(|_| rng.next_f64() * 2.0 - 0.5).collect())
            .collect();
        let reference = vec![1.0; m];
        let hv = hypervolume(&front, &reference).unwrap();
        // points span [-0.5, 1.5); the dominated region within the unit-ish
        // box below (1,...,1) can measure at most 1.5^m
        prop_assert!(hv >= 0.0);
        prop_assert!(hv <= 1.5f64.powi(m as i32) + 1e-12);
    }

    #[test]
    fn adding_a_point_never_shrinks_hypervolume(
        seed in any::<u64>(),
        n in 1usize..10,
    ) {
        let mut rng = RandomSource::from_seed(seed);
        let mut front: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..2).map(|_| rng.next_f64()).collect())
            .collect();
        let reference = vec![1.0, 1.0];
        let before = hypervolume(&front, &reference).unwrap();
        front.push(vec![rng.next_f64(), rng.next_f64()]);
        let after = hypervolume(&front, &reference).unwrap();
        prop_assert!(after >= before - 1e-12);
    }
}
