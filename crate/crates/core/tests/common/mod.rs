#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use raremine::oracle;
use raremine::rpmsud::Event;
use raremine::{Class, DatabaseBuilder, TransactionDatabase};

pub const TABLE_1: &str = "a b c d\nb d\na b c e\nc d e\na b c\n";

pub fn table_1() -> TransactionDatabase {
    TransactionDatabase::parse(TABLE_1).unwrap()
}

/// A random database and a threshold in `[1, |D| + 1]`.
pub struct Case {
    pub db: TransactionDatabase,
    pub sigma: usize,
}

/// Universe of exactly `items` labels registered in shuffled order, so id
/// order and label order disagree; `rows` transactions with per-item
/// inclusion probability `density`.
pub fn random_db(
    rng: &mut impl Rng,
    items: usize,
    rows: usize,
    density: f64,
) -> TransactionDatabase {
    let mut labels: Vec<String> = (0..items).map(|i| format!("i{i:02}")).collect();
    labels.shuffle(rng);
    let mut builder = DatabaseBuilder::new();
    for label in &labels {
        builder.add_item(label);
    }
    for line in 0..rows {
        let row: Vec<&str> = labels
            .iter()
            .filter(|_| rng.gen_bool(density))
            .map(String::as_str)
            .collect();
        builder.add_transaction(line, row);
    }
    builder.build(usize::MAX).unwrap()
}

/// Deterministic corpus: |I| in [1, 10], |D| in [0, 30], random densities
/// and thresholds.
pub fn corpus(seed: u64, count: usize) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let items = rng.gen_range(1..=10);
            let rows = rng.gen_range(0..=30);
            let density = rng.gen_range(0.05..0.95);
            let db = random_db(&mut rng, items, rows, density);
            let sigma = rng.gen_range(1..=db.len() + 1);
            Case { db, sigma }
        })
        .collect()
}

/// Label-sets classified rare in each bucket, counted across buckets, by
/// brute-force enumeration of every bucket's lattice.
pub fn brute_force_alerts(buckets: &[Vec<Event>], sigma: usize, cycles: usize) -> Vec<Vec<String>> {
    let mut counts: BTreeMap<(usize, Vec<String>), usize> = BTreeMap::new();
    for bucket in buckets {
        let mut builder = DatabaseBuilder::new();
        for (line, e) in bucket.iter().enumerate() {
            builder.add_transaction(line, e.items.iter().map(String::as_str));
        }
        let db = builder.build(usize::MAX).unwrap();
        let lattice = oracle::classify_all(&db, sigma).unwrap();
        for entry in lattice.of_class(Class::Rare) {
            let labels: Vec<String> = db
                .sorted_labels(&entry.itemset)
                .into_iter()
                .map(String::from)
                .collect();
            *counts.entry((labels.len(), labels)).or_insert(0) += 1;
        }
    }
    counts
        .into_iter()
        .filter(|&(_, n)| n >= cycles)
        .map(|((_, labels), _)| labels)
        .collect()
}

/// A random stream over `items` labels, `cycles` buckets of `duration` ms,
/// with the bucket contents returned alongside.
pub fn random_stream(
    rng: &mut impl Rng,
    items: usize,
    cycles: usize,
    duration: u64,
) -> (Vec<Event>, Vec<Vec<Event>>) {
    let labels: Vec<String> = (0..items).map(|i| format!("e{i}")).collect();
    let start = rng.gen_range(0..1000u64);
    let mut events = Vec::new();
    let mut buckets = vec![Vec::new(); cycles];
    for (c, bucket) in buckets.iter_mut().enumerate() {
        let n = rng.gen_range(0..=8);
        let density = rng.gen_range(0.1..0.8);
        let mut stamps: Vec<u64> = (0..n).map(|_| rng.gen_range(0..duration)).collect();
        stamps.sort_unstable();
        for offset in stamps {
            let row: Vec<&str> = labels
                .iter()
                .filter(|_| rng.gen_bool(density))
                .map(String::as_str)
                .collect();
            if let Some(e) = Event::new(start + c as u64 * duration + offset, row) {
                bucket.push(e.clone());
                events.push(e);
            }
        }
    }
    // The first event fixes the window start; make sure it is the first
    // bucket's start so replay buckets line up with ours.
    let anchor = Event::new(start, ["anchor"]).unwrap();
    events.insert(0, anchor.clone());
    buckets[0].insert(0, anchor);
    (events, buckets)
}
