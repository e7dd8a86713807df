//! Bottom-up level-wise mining of rare and non-present item-sets.
//!
//! The search starts from the item-set holding every item of the universe and
//! walks down the lattice one cardinality at a time. Supersets of a rare or
//! non-present item-set are themselves rare or non-present, so every
//! interesting `k`-item-set has all of its `(k+1)`-supersets among the
//! interesting item-sets of the level above and can be reached by intersecting
//! two of them. Candidates that sit below an item-set already found frequent
//! are frequent too and get pruned before their supports are counted.

use std::collections::{HashMap, HashSet};

use crate::class::{Class, Emit};
use crate::database::{TransactionDatabase, DEFAULT_MAX_ITEMS};
use crate::error::{Error, Result};
use crate::itemset::{ItemSet, Support};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MiningConfig {
    /// Exclusive upper bound on the support of a reported item-set.
    pub sigma: usize,
    pub pruning_enabled: bool,
    pub emit: Emit,
    pub max_items: usize,
}

impl MiningConfig {
    pub fn new(sigma: usize) -> Self {
        MiningConfig {
            sigma,
            pruning_enabled: true,
            emit: Emit::Both,
            max_items: DEFAULT_MAX_ITEMS,
        }
    }

    pub fn with_pruning(mut self, enabled: bool) -> Self {
        self.pruning_enabled = enabled;
        self
    }

    pub fn with_emit(mut self, emit: Emit) -> Self {
        self.emit = emit;
        self
    }

    pub fn with_max_items(mut self, max_items: usize) -> Self {
        self.max_items = max_items;
        self
    }

    /// Checks `1 <= sigma <= |D| + 1` and the item cap.
    pub fn validate(&self, db: &TransactionDatabase) -> Result<()> {
        check_threshold(self.sigma, db)?;
        if db.num_items() > self.max_items {
            return Err(Error::TooManyItems {
                items: db.num_items(),
                cap: self.max_items,
            });
        }
        Ok(())
    }
}

pub(crate) fn check_threshold(value: usize, db: &TransactionDatabase) -> Result<()> {
    let max = db.len() + 1;
    if value == 0 || value > max {
        return Err(Error::ThresholdOutOfRange {
            value,
            max,
            transactions: db.len(),
        });
    }
    Ok(())
}

/// A reported item-set. `class` is `NonPresent` iff `support` is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MinedItemSet {
    pub itemset: ItemSet,
    pub support: Support,
    pub class: Class,
}

/// The outcome of testing the candidates of one level.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LevelState {
    pub k: usize,
    /// Candidates with support below sigma.
    pub interesting: Vec<MinedItemSet>,
    /// Candidates found frequent; everything below them is frequent too.
    pub frequent_record: Vec<ItemSet>,
}

/// What happened at one level, for inspection and tests.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LevelTrace {
    pub k: usize,
    pub generated: Vec<ItemSet>,
    pub pruned: Vec<ItemSet>,
    pub state: LevelState,
}

/// Result of [`cand_test`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CandidateOutcome {
    pub interesting: Vec<MinedItemSet>,
    pub frequent: Vec<ItemSet>,
}

/// Counts the support of every candidate. Those below `sigma` are kept and
/// classified, the rest are returned as frequent.
pub fn cand_test(
    candidates: &[ItemSet],
    db: &TransactionDatabase,
    sigma: usize,
) -> CandidateOutcome {
    let mut outcome = CandidateOutcome::default();
    for candidate in candidates {
        let support = db.support(candidate);
        if support.count() < sigma {
            outcome.interesting.push(MinedItemSet {
                itemset: candidate.clone(),
                support,
                class: Class::of(support.count(), sigma),
            });
        } else {
            outcome.frequent.push(candidate.clone());
        }
    }
    outcome
}

fn level_from(k: usize, outcome: CandidateOutcome) -> LevelState {
    LevelState {
        k,
        interesting: outcome.interesting,
        frequent_record: outcome.frequent,
    }
}

/// Tests the full item-set and the item-sets one item short of it.
///
/// Returns the state of level `N` and of level `N - 1`. The latter's
/// candidates are the single-item deletions of every interesting `N`-item-set,
/// so a frequent full item-set leaves level `N - 1` empty.
pub fn init_top(db: &TransactionDatabase, sigma: usize) -> (LevelState, LevelState) {
    let n = db.num_items();
    let top = level_from(n, cand_test(&[db.full_itemset()], db, sigma));
    let next = level_from(
        n.saturating_sub(1),
        cand_test(&deletion_candidates(&top), db, sigma),
    );
    (top, next)
}

// Single-item deletions of the interesting item-sets of `level`, excluding
// the empty set.
fn deletion_candidates(level: &LevelState) -> Vec<ItemSet> {
    if level.k <= 1 {
        return Vec::new();
    }
    let mut candidates: Vec<ItemSet> = level
        .interesting
        .iter()
        .flat_map(|f| f.itemset.iter().map(move |item| f.itemset.without(item)))
        .collect();
    candidates.sort();
    candidates.dedup();
    candidates
}

/// Intersections of every pair of interesting `(k+1)`-item-sets in `level`
/// that share exactly `k` items, deduplicated and sorted.
///
/// Two distinct `(k+1)`-sets share `k` items exactly when deleting one item
/// from each yields the same `k`-set, and that set is their intersection. So
/// rather than trying all pairs, each set's single-item deletions are counted
/// and those reached from two or more parents are kept.
pub fn generate_candidates(level: &LevelState) -> Vec<ItemSet> {
    if level.k <= 1 {
        return Vec::new();
    }
    let mut parents: HashMap<ItemSet, u32> = HashMap::new();
    for f in &level.interesting {
        for item in f.itemset.iter() {
            *parents.entry(f.itemset.without(item)).or_insert(0) += 1;
        }
    }
    let mut candidates: Vec<ItemSet> = parents
        .into_iter()
        .filter(|&(_, count)| count >= 2)
        .map(|(set, _)| set)
        .collect();
    candidates.sort();
    candidates
}

/// Splits `candidates` into those kept and those that are a subset of some
/// member of `frequent_record`. Record members have one item more than the
/// candidates, so the subset test reduces to a lookup of each single-item
/// extension.
pub fn prune(
    candidates: Vec<ItemSet>,
    frequent_record: &[ItemSet],
) -> (Vec<ItemSet>, Vec<ItemSet>) {
    if frequent_record.is_empty() {
        return (candidates, Vec::new());
    }
    let width = frequent_record[0].width();
    let below_frequent: Box<dyn Fn(&ItemSet) -> bool> = if frequent_record.len() <= width {
        Box::new(|c: &ItemSet| frequent_record.iter().any(|f| c.is_subset(f)))
    } else {
        let record: HashSet<&ItemSet> = frequent_record.iter().collect();
        Box::new(move |c: &ItemSet| c.complement_iter().any(|x| record.contains(&c.with(x))))
    };
    candidates.into_iter().partition(|c| !below_frequent(c))
}

/// Mines every non-empty item-set with support below `config.sigma`,
/// filtered by `config.emit` and sorted by cardinality then label sequence.
pub fn mine(db: &TransactionDatabase, config: &MiningConfig) -> Result<Vec<MinedItemSet>> {
    run(db, config, None)
}

/// Like [`mine`], also returning what happened at each level from `N` down.
pub fn mine_traced(
    db: &TransactionDatabase,
    config: &MiningConfig,
) -> Result<(Vec<MinedItemSet>, Vec<LevelTrace>)> {
    let mut trace = Vec::new();
    let results = run(db, config, Some(&mut trace))?;
    Ok((results, trace))
}

fn run(
    db: &TransactionDatabase,
    config: &MiningConfig,
    mut trace: Option<&mut Vec<LevelTrace>>,
) -> Result<Vec<MinedItemSet>> {
    config.validate(db)?;
    if db.num_items() == 0 {
        return Ok(Vec::new());
    }
    let sigma = config.sigma;
    let mut results = Vec::new();

    let full = vec![db.full_itemset()];
    let top = level_from(db.num_items(), cand_test(&full, db, sigma));
    let generated = deletion_candidates(&top);
    let mut level = level_from(top.k - 1, cand_test(&generated, db, sigma));
    if let Some(trace) = trace.as_deref_mut() {
        trace.push(LevelTrace {
            k: top.k,
            generated: full,
            pruned: Vec::new(),
            state: top.clone(),
        });
        if level.k > 0 {
            trace.push(LevelTrace {
                k: level.k,
                generated,
                pruned: Vec::new(),
                state: level.clone(),
            });
        }
    }
    results.extend(top.interesting);
    results.extend(level.interesting.iter().cloned());

    while level.k > 1 && !level.interesting.is_empty() {
        let generated = generate_candidates(&level);
        let (kept, pruned) = if config.pruning_enabled {
            prune(generated.clone(), &level.frequent_record)
        } else {
            (generated.clone(), Vec::new())
        };
        let next = level_from(level.k - 1, cand_test(&kept, db, sigma));
        results.extend(next.interesting.iter().cloned());
        if let Some(trace) = trace.as_deref_mut() {
            trace.push(LevelTrace {
                k: next.k,
                generated,
                pruned,
                state: next.clone(),
            });
        }
        level = next;
    }

    results.retain(|m| config.emit.admits(m.class));
    db.sort_canonical(&mut results, |m| &m.itemset);
    Ok(results)
}
