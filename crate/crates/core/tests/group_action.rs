use std::sync::OnceLock;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};

use qsd_core::bh::TOTAL_DESIGNS;
use qsd_core::classify::process_family;
use qsd_core::group::QUOTIENT_ORDER;
use qsd_core::{DesignChoice, QuotientGroup, Universe};

struct Ctx {
    u: Universe,
    q: QuotientGroup,
}

fn ctx() -> &'static Ctx {
    static C: OnceLock<Ctx> = OnceLock::new();
    C.get_or_init(|| {
        let u = Universe::build().unwrap();
        let q = QuotientGroup::build(&u).unwrap();
        Ctx { u, q }
    })
}

fn choice(trits: &[u8]) -> DesignChoice {
    let mut t = [0u8; 21];
    t[..trits.len()].copy_from_slice(trits);
    DesignChoice::new(t).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn canonical_form_is_idempotent_and_orbit_constant(index in 0..TOTAL_DESIGNS, seed in any::<u64>()) {
        let Ctx { q, .. } = ctx();
        let c = DesignChoice::from_index(index).unwrap();
        let canon = q.canonical_choice(&c);
        prop_assert!(canon.index() <= c.index());
        prop_assert_eq!(q.canonical_choice(&canon), canon);
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        for _ in 0..2 {
            let image = q.apply(rng.gen_range(0..q.order()), &c);
            prop_assert_eq!(q.canonical_choice(&image), canon);
        }
    }
}

#[test]
fn orbit_times_stabilizer_is_the_group_order() {
    let Ctx { q, .. } = ctx();
    for c in [DesignChoice::ZERO, choice(&[0, 1]), choice(&[2, 1, 1])] {
        let stab = q.stabilizer_order(&c) as usize;
        let orbit: std::collections::HashSet<DesignChoice> = (0..q.order()).map(|g| q.apply(g, &c)).collect();
        assert_eq!(orbit.len() * stab, QUOTIENT_ORDER);
    }
}

#[test]
fn composition_matches_action_on_random_pairs() {
    let Ctx { q, .. } = ctx();
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for _ in 0..1000 {
        let (i, j) = (rng.gen_range(0..q.order()), rng.gen_range(0..q.order()));
        let c = DesignChoice::from_index(rng.gen_range(0..TOTAL_DESIGNS)).unwrap();
        let ij = q.compose(i, j);
        assert!(ij < q.order());
        assert_eq!(q.apply(ij, &c), q.apply(i, &q.apply(j, &c)));
        assert_eq!(q.compose(i, q.inverse(i)), q.identity());
    }
}

#[test]
fn transitive_on_parallel_classes() {
    let Ctx { q, .. } = ctx();
    let mut hit = [false; 21];
    for m in q.monomials() {
        hit[m.class_perm[0] as usize] = true;
    }
    assert!(hit.iter().all(|&h| h));
}

#[test]
fn known_designs_have_expected_automorphism_orders() {
    let Ctx { q, .. } = ctx();
    assert_eq!(64 * q.stabilizer_order(&DesignChoice::ZERO), 8192);
    assert_eq!(q.stabilizer_order(&DesignChoice::ZERO), 128);
    assert_eq!(64 * q.stabilizer_order(&choice(&[0, 1])), 2048);
    assert_eq!(64 * q.stabilizer_order(&choice(&[2, 1, 1])), 20480);
    let other = choice(&[0, 2, 2, 2, 2, 1, 1, 1, 1, 1, 1, 1, 1]);
    assert_eq!(64 * q.stabilizer_order(&other), 20480);
    assert_eq!(q.canonical_choice(&other), other);
}

#[test]
fn fixed_designs_have_rich_stabilizers() {
    let Ctx { q, .. } = ctx();
    let classes = q.involution_classes();
    let mut rng = rand::rngs::StdRng::seed_from_u64(5);
    for class in &classes {
        let fixed = qsd_core::classify::fixed_designs(q.monomial(class.representative), class.representative);
        for _ in 0..20 {
            let c = fixed.choices[rng.gen_range(0..fixed.choices.len())];
            assert_eq!(q.apply(class.representative, &c), c);
            // T together with a lift of the involution: at least 128 automorphisms
            assert!(64 * q.stabilizer_order(&c) >= 128);
        }
    }
}

#[test]
fn small_family_yields_seventeen_classes() {
    let Ctx { u, q } = ctx();
    let classes = q.involution_classes();
    let small = classes.iter().find(|c| c.centralizer.len() == 336).unwrap();
    let f = process_family(u, q, small).unwrap();
    assert_eq!(f.name, "H2");
    assert_eq!(f.fixed_count, 2187);
    assert!(f.centralizer_orbits >= 17);
    assert_eq!(f.classes.len(), 17);
}
