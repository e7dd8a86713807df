//! Brute-force enumeration of the whole item-set lattice.
//!
//! Every non-empty subset of the universe is visited in integer order of its
//! bit mask and its support counted by a plain per-item membership scan. It
//! is deliberately slow and independent of the miners' code paths, so it can
//! serve as ground truth for them.

use crate::class::Class;
use crate::database::TransactionDatabase;
use crate::error::{Error, Result};
use crate::itemset::{ItemSet, Support};

/// Largest universe the oracle will enumerate by default.
pub const DEFAULT_ORACLE_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeEntry {
    pub itemset: ItemSet,
    pub support: Support,
    pub class: Class,
}

/// Every non-empty item-set of a database with its support and class.
#[derive(Clone, Debug)]
pub struct LatticeClassification {
    sigma: usize,
    // Indexed by mask - 1.
    entries: Vec<LatticeEntry>,
}

impl LatticeClassification {
    pub fn sigma(&self) -> usize {
        self.sigma
    }

    /// Entries in integer order of the bit mask.
    pub fn entries(&self) -> &[LatticeEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, set: &ItemSet) -> Option<&LatticeEntry> {
        let mask = set
            .iter()
            .fold(0usize, |m, item| m | (1usize << item.index()));
        mask.checked_sub(1).and_then(|i| self.entries.get(i))
    }

    pub fn of_class(&self, class: Class) -> impl Iterator<Item = &LatticeEntry> {
        self.entries.iter().filter(move |e| e.class == class)
    }

    pub fn count(&self, class: Class) -> usize {
        self.of_class(class).count()
    }
}

fn transaction_masks(db: &TransactionDatabase) -> Vec<u64> {
    db.transactions()
        .iter()
        .map(|t| {
            (0..db.num_items())
                .filter(|&i| t.items.contains(i.into()))
                .fold(0u64, |m, i| m | (1 << i))
        })
        .collect()
}

fn check_cap(db: &TransactionDatabase, cap: usize) -> Result<()> {
    // Masks are u64; anything near that is far beyond a sane cap anyway.
    let cap = cap.min(63);
    if db.num_items() > cap {
        return Err(Error::OracleCapExceeded {
            items: db.num_items(),
            cap,
        });
    }
    Ok(())
}

/// Classifies all `2^|I| - 1` non-empty item-sets against `sigma`:
/// support `>= sigma` is frequent, `0 < support < sigma` rare, `0` non-present.
pub fn classify_all(db: &TransactionDatabase, sigma: usize) -> Result<LatticeClassification> {
    classify_all_with_cap(db, sigma, DEFAULT_ORACLE_CAP)
}

pub fn classify_all_with_cap(
    db: &TransactionDatabase,
    sigma: usize,
    cap: usize,
) -> Result<LatticeClassification> {
    check_cap(db, cap)?;
    let width = db.num_items();
    let transactions = transaction_masks(db);
    let entries = (1u64..(1u64 << width))
        .map(|mask| {
            let support = transactions.iter().filter(|&&t| mask & t == mask).count();
            LatticeEntry {
                itemset: ItemSet::from_mask(width, mask),
                support: Support(support),
                class: Class::of(support, sigma),
            }
        })
        .collect();
    Ok(LatticeClassification { sigma, entries })
}

/// The coverage of a database: every item-set with at least one instance.
pub fn coverage(db: &TransactionDatabase) -> Result<Vec<ItemSet>> {
    coverage_with_cap(db, DEFAULT_ORACLE_CAP)
}

pub fn coverage_with_cap(db: &TransactionDatabase, cap: usize) -> Result<Vec<ItemSet>> {
    check_cap(db, cap)?;
    let width = db.num_items();
    let transactions = transaction_masks(db);
    Ok((1u64..(1u64 << width))
        .filter(|&mask| transactions.iter().any(|&t| mask & t == mask))
        .map(|mask| ItemSet::from_mask(width, mask))
        .collect())
}
