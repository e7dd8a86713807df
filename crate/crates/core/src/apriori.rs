//! Classical top-down Apriori for frequent item-sets.
//!
//! Used as the baseline miner and as the complement of the bottom-up miner:
//! with `minsupp == sigma` the two outputs partition the lattice.

use std::collections::HashSet;

use crate::aranim::check_threshold;
use crate::database::TransactionDatabase;
use crate::error::Result;
use crate::itemset::{ItemId, ItemSet, Support};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FrequentItemSet {
    pub itemset: ItemSet,
    pub support: Support,
}

/// Every non-empty item-set with `support >= minsupp`, sorted by cardinality
/// then label sequence.
pub fn mine_frequent(db: &TransactionDatabase, minsupp: usize) -> Result<Vec<FrequentItemSet>> {
    check_threshold(minsupp, db)?;
    let width = db.num_items();
    let mut results = Vec::new();

    let mut level: Vec<ItemSet> = (0..width)
        .map(|i| ItemSet::from_items(width, [ItemId::from(i)]))
        .collect();
    loop {
        let mut frequent = Vec::new();
        for candidate in level {
            let support = db.support(&candidate);
            if support.count() >= minsupp {
                frequent.push(candidate.clone());
                results.push(FrequentItemSet {
                    itemset: candidate,
                    support,
                });
            }
        }
        if frequent.is_empty() {
            break;
        }
        level = join_candidates(&frequent);
    }

    db.sort_canonical(&mut results, |f| &f.itemset);
    Ok(results)
}

/// Builds the `k`-candidates from the frequent `(k-1)`-item-sets.
///
/// Item lists are kept in ascending id order; two sets join when they agree on
/// all but their last item. A joined candidate survives only if each of its
/// `(k-1)`-subsets is in `frequent`.
pub fn join_candidates(frequent: &[ItemSet]) -> Vec<ItemSet> {
    let Some(first) = frequent.first() else {
        return Vec::new();
    };
    let width = first.width();
    let known: HashSet<&ItemSet> = frequent.iter().collect();

    let mut lists: Vec<Vec<ItemId>> = frequent.iter().map(|f| f.iter().collect()).collect();
    lists.sort();
    lists.dedup();

    let mut candidates = Vec::new();
    let mut start = 0;
    while start < lists.len() {
        let prefix = &lists[start][..lists[start].len() - 1];
        let mut end = start + 1;
        while end < lists.len() && &lists[end][..lists[end].len() - 1] == prefix {
            end += 1;
        }
        for i in start..end {
            for j in i + 1..end {
                let mut items = lists[i].clone();
                items.push(*lists[j].last().unwrap());
                let candidate = ItemSet::from_items(width, items.iter().copied());
                let all_subsets_frequent = items
                    .iter()
                    .all(|&drop| known.contains(&candidate.without(drop)));
                if all_subsets_frequent {
                    candidates.push(candidate);
                }
            }
        }
        start = end;
    }
    candidates
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE_1: &str = "a b c d\nb d\na b c e\nc d e\na b c\n";

    fn sets(db: &TransactionDatabase, specs: &[&str]) -> Vec<ItemSet> {
        specs
            .iter()
            .map(|s| {
                let labels: Vec<String> = s.chars().map(String::from).collect();
                let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
                db.itemset(&refs).unwrap()
            })
            .collect()
    }

    #[test]
    fn worked_example_minsupp_3() {
        let db = TransactionDatabase::parse(TABLE_1).unwrap();
        let got: Vec<String> = mine_frequent(&db, 3)
            .unwrap()
            .iter()
            .map(|f| format!("{}:{}", db.sorted_labels(&f.itemset).concat(), f.support))
            .collect();
        assert_eq!(
            got,
            ["a:3", "b:4", "c:4", "d:3", "ab:3", "ac:3", "bc:3", "abc:3"]
        );
    }

    #[test]
    fn extreme_thresholds() {
        let db = TransactionDatabase::parse(TABLE_1).unwrap();
        assert!(mine_frequent(&db, 6).unwrap().is_empty());
        assert_eq!(mine_frequent(&db, 1).unwrap().len(), 25);
        assert!(mine_frequent(&db, 0).is_err());
        assert!(mine_frequent(&db, 7).is_err());
    }

    #[test]
    fn join_cases() {
        let db = TransactionDatabase::parse("a b c d\n").unwrap();
        assert_eq!(
            join_candidates(&sets(&db, &["ab", "ac", "bc"])),
            sets(&db, &["abc"])
        );
        assert!(join_candidates(&sets(&db, &["ab", "cd"])).is_empty());
        assert!(join_candidates(&sets(&db, &["ab", "ac"])).is_empty());
        assert!(join_candidates(&[]).is_empty());
        assert_eq!(
            join_candidates(&sets(&db, &["a", "b", "c"])),
            sets(&db, &["ab", "ac", "bc"])
        );
    }

    #[test]
    fn empty_database() {
        let db = TransactionDatabase::parse("").unwrap();
        assert!(mine_frequent(&db, 1).unwrap().is_empty());
    }
}
