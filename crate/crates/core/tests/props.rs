//! Property tests for canonical forms, file formats and the group action.

use std::sync::OnceLock;

use num::BigInt;
use proptest::prelude::*;

use bellpoly::scenario::Scenario;
use bellpoly::symmetry::{self, SymmetryGroup};
use bellpoly::Inequality;

fn group_222() -> &'static SymmetryGroup {
    static GROUP: OnceLock<SymmetryGroup> = OnceLock::new();
    GROUP.get_or_init(|| SymmetryGroup::new(&Scenario::parse("2,2,2").unwrap()))
}

fn group_22() -> &'static SymmetryGroup {
    static GROUP: OnceLock<SymmetryGroup> = OnceLock::new();
    GROUP.get_or_init(|| SymmetryGroup::new(&Scenario::parse("2,2").unwrap()))
}

fn nonzero_coeffs(len: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-9i64..=9, len)
        .prop_filter("nonzero", |v| v.iter().any(|&c| c != 0))
}

proptest! {
    #[test]
    fn canonicalize_is_idempotent_and_scale_invariant(
        raw in nonzero_coeffs(9),
        scale in prop_oneof![1i64..=7, -7i64..=-1],
    ) {
        let a = Inequality::from_i64(&raw).unwrap();
        let again = Inequality::from_coeffs(a.coeffs().to_vec()).unwrap();
        prop_assert_eq!(&a, &again);
        let scaled: Vec<BigInt> = raw.iter().map(|&c| BigInt::from(c * scale)).collect();
        let b = Inequality::from_coeffs(scaled).unwrap();
        if scale > 0 {
            prop_assert_eq!(a, b);
        } else {
            // negation flips back to the canonical orientation
            prop_assert_eq!(a.coeffs()[0].clone().max(BigInt::from(0)) > BigInt::from(0),
                            b.coeffs()[0].clone().max(BigInt::from(0)) > BigInt::from(0));
        }
    }

    #[test]
    fn facet_line_round_trips(raw in nonzero_coeffs(16)) {
        let ineq = Inequality::from_i64(&raw).unwrap();
        let parsed = Inequality::parse_line(&ineq.to_line()).unwrap();
        prop_assert_eq!(ineq, parsed);
    }

    #[test]
    fn action_is_a_group_action_on_222(
        raw in nonzero_coeffs(27),
        gi in 0usize..3072,
        hi in 0usize..3072,
    ) {
        let group = group_222();
        let sc = group.scenario();
        let x = Inequality::from_i64(&raw).unwrap();
        let g = &group.elements()[gi];
        let h = &group.elements()[hi];
        let composed = symmetry::apply(&g.compose(h), &x, sc).unwrap();
        let sequential = symmetry::apply(g, &symmetry::apply(h, &x, sc).unwrap(), sc).unwrap();
        prop_assert_eq!(composed, sequential);
        // inverse undoes the action
        let back = symmetry::apply(&g.inverse(), &symmetry::apply(g, &x, sc).unwrap(), sc).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn canonical_representative_is_constant_on_orbits(
        raw in nonzero_coeffs(9),
        gi in 0usize..128,
    ) {
        let group = group_22();
        let sc = group.scenario();
        let x = Inequality::from_i64(&raw).unwrap();
        let g = &group.elements()[gi];
        let moved = symmetry::apply(g, &x, sc).unwrap();
        prop_assert_eq!(
            group.canonical_representative(&moved),
            group.canonical_representative(&x)
        );
    }

    #[test]
    fn orbit_size_divides_group_order(raw in nonzero_coeffs(9)) {
        let group = group_22();
        let x = Inequality::from_i64(&raw).unwrap();
        let orbit = group.expand_orbit(&x);
        prop_assert_eq!(group.order() % orbit.len(), 0);
        // the canonical representative is the first (minimal) member
        prop_assert!(orbit.windows(2).all(|w| w[0] < w[1]));
    }
}
