use proptest::prelude::*;

use qsd_core::analysis::{block_graph, has_class_coclique_partition, srg_check, SRG_PARAMS};
use qsd_core::bh::{verify_design, same_class_cross_clique_intersections, TOTAL_DESIGNS};
use qsd_core::gf2::BinaryCode;
use qsd_core::{DesignChoice, Universe};
use std::sync::OnceLock;

fn universe() -> &'static Universe {
    static U: OnceLock<Universe> = OnceLock::new();
    U.get_or_init(|| Universe::build().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn random_designs_satisfy_the_axioms(index in 0..TOTAL_DESIGNS) {
        let u = universe();
        let choice = DesignChoice::from_index(index).unwrap();
        let d = u.assemble_design(choice);
        let report = verify_design(u, &d);
        prop_assert!(report.passed(), "{:?}", report.failures);
        prop_assert_eq!(d.blocks.len(), 336);
    }

    #[test]
    fn choice_index_round_trips(index in 0..TOTAL_DESIGNS) {
        let c = DesignChoice::from_index(index).unwrap();
        prop_assert_eq!(c.index(), index);
        prop_assert_eq!(c.to_string().parse::<DesignChoice>().unwrap(), c);
    }
}

#[test]
fn index_bounds() {
    assert!(DesignChoice::from_index(TOTAL_DESIGNS).is_err());
    assert_eq!(DesignChoice::from_index(TOTAL_DESIGNS - 1).unwrap().trits, [2; 21]);
    assert!(DesignChoice::from_slice(&[3; 21]).is_err());
}

#[test]
fn mixing_cliques_within_a_class_breaks_the_design() {
    let u = universe();
    let mut d = u.assemble_design(DesignChoice::ZERO);
    // swap one block of class 0 for a block from a different clique of class 0
    d.blocks[0] = u.cliques[1].blocks[0];
    assert!(!verify_design(u, &d).passed());
    let sizes = same_class_cross_clique_intersections(u);
    assert!(sizes.keys().any(|&s| s != 8 && s != 12));
}

#[test]
fn blocks_are_dual_codewords_and_code_is_closed() {
    let u = universe();
    let blocks = u.all_blocks();
    assert_eq!(blocks.len(), 1008);
    assert!(blocks.iter().all(|b| b.weight() == 24 && u.dual_code.contains(*b)));
    let spanned = BinaryCode::span(&blocks);
    assert_eq!(spanned.dimension(), 13);
}

#[test]
fn block_graphs_split_into_class_cocliques() {
    let u = universe();
    for idx in [0u64, 1, 3_000_000_000, TOTAL_DESIGNS - 1] {
        let bg = block_graph(&u.assemble_design(DesignChoice::from_index(idx).unwrap())).unwrap();
        assert_eq!(srg_check(&bg.graph), Ok(SRG_PARAMS));
        assert!(has_class_coclique_partition(&bg));
    }
}
