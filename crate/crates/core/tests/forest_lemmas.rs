//! Property suites for the two forest-cardinality lemmas, checked against a
//! direct pre-order walk of the forest and through the entailment oracle.

use proptest::prelude::*;

mod common;

use common::forest::{forest_as_sum_instance, kstar, shifted_forest_instance, walk, Table};

fn tables() -> impl Strategy<Value = Table> {
    (prop::collection::vec(0u64..=2, 0..10), any::<bool>()).prop_map(|(children, total)| Table { children, total })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn shifted_forests(table in tables(), i in 0u64..=4, j in 0u64..=4, k in 0u64..=4) {
        if let Err(e) = shifted_forest_instance(&table, i, j, k) {
            prop_assert!(false, "{}", e);
        }
    }

    #[test]
    fn forests_as_sums_of_trees(table in tables(), j in 0u64..=4) {
        if let Err(e) = forest_as_sum_instance(&table, j) {
            prop_assert!(false, "{}", e);
        }
    }
}

#[test]
fn the_walk_counts_the_two_tree_forest() {
    let kstar = kstar();
    let count = |start, trees| walk(start, trees, &|n| kstar.get(n));
    assert_eq!([count(0, 2), count(0, 1), count(8, 1), count(2, 3)], [Some(13), Some(8), Some(5), Some(6)]);
}

#[test]
fn partial_tables_make_both_sides_undefined() {
    let table = Table {
        children: vec![2, 0],
        total: false,
    };
    assert_eq!(walk(0, 1, &|n| table.get(n)), None);
    shifted_forest_instance(&table, 0, 0, 1).unwrap();
    forest_as_sum_instance(&table, 2).unwrap();
}
