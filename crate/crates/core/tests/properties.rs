use proptest::prelude::*;

use starnet::criterion::CriterionGraph;
use starnet::linking::Linking;
use starnet::shape::{parse_shape, Atom, Shape};

fn arb_shape() -> impl Strategy<Value = Shape> {
    let leaf = prop_oneof![
        Just(Shape::unit()),
        prop_oneof![Just("a"), Just("b"), Just("c"), Just("d")].prop_map(Shape::gen),
    ];
    leaf.prop_recursive(5, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Shape::tensor(l, r)),
            inner.prop_map(Shape::dual),
        ]
    })
}

proptest! {
    #[test]
    fn display_parse_round_trip(s in arb_shape()) {
        let printed = s.to_string();
        prop_assert_eq!(parse_shape(&printed).unwrap(), s);
    }

    #[test]
    fn leaves_match_leaf_count(s in arb_shape()) {
        prop_assert_eq!(s.leaves().len(), s.leaf_count());
    }

    #[test]
    fn dual_flips_every_sign(s in arb_shape()) {
        let plain = s.leaves();
        let dualled = Shape::dual(s).leaves();
        prop_assert_eq!(plain.len(), dualled.len());
        for (a, b) in plain.entries().iter().zip(dualled.entries()) {
            prop_assert_eq!(&a.0, &b.0);
            prop_assert_eq!(a.1.flip(), b.1);
        }
    }

    #[test]
    fn identity_has_one_edge_per_leaf(s in arb_shape()) {
        // positive leaves map from the source copy, negative leaves from
        // the target copy, so every leaf contributes exactly one edge
        let id = Linking::identity(&s);
        prop_assert_eq!(id.fun().edge_count(), s.leaf_count());
        prop_assert_eq!(id.check(), Ok(()));
    }

    #[test]
    fn identity_generator_edges_are_identity_paths(s in arb_shape()) {
        let id = Linking::identity(&s);
        let leaves = s.leaves();
        for (from, edge) in id.fun().edges() {
            match leaves.atom(from.index).unwrap() {
                Atom::Gen(_) => prop_assert!(edge.label.as_ref().unwrap().is_identity()),
                Atom::Unit => prop_assert!(edge.label.is_none()),
            }
        }
    }

    /// fast contraction = brute-force enumeration on small random graphs
    #[test]
    fn contraction_agrees_with_enumeration(
        n in 1usize..8,
        raw_edges in proptest::collection::vec((0usize..8, 0usize..8), 0..10),
        raw_switched in proptest::collection::vec((0usize..8, 0usize..8, 0usize..8), 0..4),
    ) {
        let mut g = CriterionGraph::new(n);
        for (a, b) in raw_edges {
            g.add_edge(a % n, b % n);
        }
        for (v, l, r) in raw_switched {
            g.add_switched(v % n, l % n, r % n);
        }
        let brute = g.check_bruteforce(10).map_err(|_| ()).is_ok();
        prop_assert_eq!(g.check_fast(), brute);
    }
}
