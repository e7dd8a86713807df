//! Property tests of both miners against the lattice oracle.

mod common;

use std::collections::{HashMap, HashSet};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use raremine::aranim::{self, generate_candidates, LevelState, MinedItemSet};
use raremine::class::result_line;
use raremine::{
    combinable, mine, mine_frequent, oracle, Class, ItemSet, MiningConfig, TransactionDatabase,
};

fn arb_case() -> impl Strategy<Value = (TransactionDatabase, usize)> {
    (
        any::<u64>(),
        1usize..=8,
        0usize..=20,
        0.05f64..0.95,
        any::<u64>(),
    )
        .prop_map(|(seed, items, rows, density, pick)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let db = common::random_db(&mut rng, items, rows, density);
            let sigma = 1 + (pick as usize) % (db.len() + 1);
            (db, sigma)
        })
}

fn as_map(results: &[MinedItemSet]) -> HashMap<ItemSet, (usize, Class)> {
    results
        .iter()
        .map(|m| (m.itemset.clone(), (m.support.count(), m.class)))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bottom_up_matches_oracle((db, sigma) in arb_case()) {
        let mined = as_map(&mine(&db, &MiningConfig::new(sigma)).unwrap());
        let lattice = oracle::classify_all(&db, sigma).unwrap();
        let expected: HashMap<ItemSet, (usize, Class)> = lattice
            .entries()
            .iter()
            .filter(|e| e.class != Class::Frequent)
            .map(|e| (e.itemset.clone(), (e.support.count(), e.class)))
            .collect();
        prop_assert_eq!(mined, expected);
    }

    #[test]
    fn apriori_matches_oracle((db, sigma) in arb_case()) {
        let mined: HashMap<ItemSet, usize> = mine_frequent(&db, sigma)
            .unwrap()
            .into_iter()
            .map(|f| (f.itemset, f.support.count()))
            .collect();
        let expected: HashMap<ItemSet, usize> = oracle::classify_all(&db, sigma)
            .unwrap()
            .of_class(Class::Frequent)
            .map(|e| (e.itemset.clone(), e.support.count()))
            .collect();
        prop_assert_eq!(mined, expected);
    }

    #[test]
    fn pruning_changes_nothing((db, sigma) in arb_case()) {
        let render = |prune: bool| -> Vec<String> {
            mine(&db, &MiningConfig::new(sigma).with_pruning(prune))
                .unwrap()
                .iter()
                .map(|m| result_line(&db, &m.itemset, m.support, m.class))
                .collect()
        };
        prop_assert_eq!(render(true), render(false));
    }

    #[test]
    fn results_are_upward_closed_and_classes_consistent((db, sigma) in arb_case()) {
        let results = mine(&db, &MiningConfig::new(sigma)).unwrap();
        let set: HashSet<&ItemSet> = results.iter().map(|m| &m.itemset).collect();
        for m in &results {
            prop_assert_eq!(m.class == Class::NonPresent, m.support.count() == 0);
            prop_assert!(m.support.count() < sigma);
            for extra in m.itemset.complement_iter() {
                prop_assert!(set.contains(&m.itemset.with(extra)));
            }
        }
    }

    #[test]
    fn frequent_results_are_downward_closed((db, sigma) in arb_case()) {
        let results = mine_frequent(&db, sigma).unwrap();
        let set: HashSet<&ItemSet> = results.iter().map(|f| &f.itemset).collect();
        for f in &results {
            for item in f.itemset.iter() {
                let smaller = f.itemset.without(item);
                prop_assert!(smaller.is_empty() || set.contains(&smaller));
            }
        }
    }

    #[test]
    fn monotone_in_sigma((db, sigma) in arb_case()) {
        let lower: HashSet<MinedItemSet> = mine(&db, &MiningConfig::new(sigma)).unwrap().into_iter().collect();
        for higher in sigma..=db.len() + 1 {
            let upper: HashSet<ItemSet> = mine(&db, &MiningConfig::new(higher))
                .unwrap()
                .into_iter()
                .map(|m| m.itemset)
                .collect();
            prop_assert!(lower.iter().all(|m| upper.contains(&m.itemset)));
        }
    }

    #[test]
    fn output_independent_of_item_registration_order((db, sigma) in arb_case()) {
        // Re-parse the canonical text: ids change, rendered output must not.
        let reparsed = TransactionDatabase::parse(&db.to_fimi()).unwrap();
        prop_assume!(reparsed.num_items() == db.num_items());
        let render = |d: &TransactionDatabase| -> Vec<String> {
            mine(d, &MiningConfig::new(sigma))
                .unwrap()
                .iter()
                .map(|m| result_line(d, &m.itemset, m.support, m.class))
                .collect()
        };
        prop_assert_eq!(render(&db), render(&reparsed));
    }

    #[test]
    fn bucketed_generation_equals_pairwise_intersection(
        width in 2usize..=9,
        masks in proptest::collection::vec(any::<u64>(), 0..40),
        k in 1usize..8,
    ) {
        prop_assume!(k < width);
        let mut level: Vec<ItemSet> = masks
            .into_iter()
            .map(|m| ItemSet::from_mask(width, m))
            .filter(|s| s.len() == k + 1)
            .collect();
        level.sort();
        level.dedup();
        let state = LevelState {
            k: k + 1,
            interesting: level
                .iter()
                .map(|s| MinedItemSet { itemset: s.clone(), support: Default::default(), class: Class::NonPresent })
                .collect(),
            frequent_record: Vec::new(),
        };
        let mut pairwise = Vec::new();
        for (i, a) in level.iter().enumerate() {
            for b in &level[i + 1..] {
                if combinable(a, b, k) {
                    pairwise.push(a.intersect(b));
                }
            }
        }
        pairwise.sort();
        pairwise.dedup();
        prop_assert_eq!(generate_candidates(&state), pairwise);
    }
}

#[test]
fn everything_is_reported_at_unreachable_threshold() {
    for case in common::corpus(7, 50) {
        let all = mine(&case.db, &MiningConfig::new(case.db.len() + 1)).unwrap();
        assert_eq!(all.len(), (1usize << case.db.num_items()) - 1);
    }
}

#[test]
fn wide_universe_uses_multiple_words() {
    // 70 items; transaction i holds every item but the i-th.
    let labels: Vec<String> = (0..70).map(|i| format!("w{i}")).collect();
    let mut text = String::new();
    for skip in 0..70 {
        let row: Vec<&str> = labels
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, l)| l.as_str())
            .collect();
        text.push_str(&row.join(" "));
        text.push('\n');
    }
    let db = TransactionDatabase::parse_with_cap(&text, 70).unwrap();
    let results = aranim::mine(&db, &MiningConfig::new(1).with_max_items(70)).unwrap();
    // Only the full item-set is missing from every transaction.
    assert_eq!(results.len(), 1);
    assert_eq!(results[0].itemset.len(), 70);
}
