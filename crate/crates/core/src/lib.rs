//! Rare and non-present item-set mining.
//!
//! * [`aranim`] walks the item-set lattice bottom-up from the full item-set
//!   and reports every item-set whose support is below a threshold, split into
//!   rare (seen, but seldom) and non-present (never seen).
//! * [`apriori`] is the classical frequent item-set miner, the exact
//!   complement of the former at the same threshold.
//! * [`oracle`] enumerates the whole lattice by brute force and is the ground
//!   truth for both miners.
//! * [`rpmsud`] mines an event stream in fixed cycles and alerts on patterns
//!   that stay rare across a whole window.

pub mod apriori;
pub mod aranim;
pub mod class;
pub mod cli;
pub mod database;
pub mod error;
pub mod itemset;
pub mod oracle;
pub mod rpmsud;

pub use apriori::{mine_frequent, FrequentItemSet};
pub use aranim::{mine, MinedItemSet, MiningConfig};
pub use class::{Class, Emit};
pub use database::{DatabaseBuilder, ItemDictionary, TransactionDatabase};
pub use error::{Error, Result};
pub use itemset::{combinable, ItemId, ItemSet, Support};
