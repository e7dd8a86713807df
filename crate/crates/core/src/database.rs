//! Transaction databases: item interning, FIMI-style ingestion, support
//! counting and canonical rendering.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::itemset::{ItemId, ItemSet, Support};

/// Default cap on the number of distinct items a database may hold.
pub const DEFAULT_MAX_ITEMS: usize = 24;

/// Label <-> id interning. Ids are handed out in first-appearance order.
#[derive(Clone, Debug, Default)]
pub struct ItemDictionary {
    labels: Vec<String>,
    index: HashMap<String, ItemId>,
}

impl ItemDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, label: &str) -> ItemId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = ItemId::from(self.labels.len());
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), id);
        id
    }

    pub fn get(&self, label: &str) -> Option<ItemId> {
        self.index.get(label).copied()
    }

    pub fn label(&self, id: ItemId) -> &str {
        &self.labels[id.index()]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Lexicographically sorted labels of the members of `set`.
    pub fn sorted_labels<'a>(&'a self, set: &ItemSet) -> Vec<&'a str> {
        let mut labels: Vec<&str> = set.iter().map(|id| self.label(id)).collect();
        labels.sort_unstable();
        labels
    }

    /// Space-separated sorted labels; the empty set renders as "".
    pub fn render(&self, set: &ItemSet) -> String {
        self.sorted_labels(set).join(" ")
    }

    /// Set over this dictionary's universe holding the given labels, or
    /// `None` if any label is unknown.
    pub fn itemset_of<'a, I>(&self, labels: I) -> Option<ItemSet>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut set = ItemSet::empty(self.len());
        for label in labels {
            set.insert(self.get(label)?);
        }
        Some(set)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transaction {
    /// Zero-based line of the source text this transaction came from.
    pub line: usize,
    pub items: ItemSet,
}

/// Accumulates transactions before the item universe is fixed.
#[derive(Debug, Default)]
pub struct DatabaseBuilder {
    dictionary: ItemDictionary,
    rows: Vec<(usize, Vec<ItemId>)>,
}

impl DatabaseBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers an item without adding a transaction, so the universe can
    /// hold items that occur nowhere.
    pub fn add_item(&mut self, label: &str) -> ItemId {
        self.dictionary.intern(label)
    }

    /// Adds one transaction. Duplicate labels collapse and an empty label
    /// list is ignored.
    pub fn add_transaction<'a, I>(&mut self, line: usize, labels: I)
    where
        I: IntoIterator<Item = &'a str>,
    {
        let ids: Vec<ItemId> = labels
            .into_iter()
            .map(|label| self.dictionary.intern(label))
            .collect();
        if !ids.is_empty() {
            self.rows.push((line, ids));
        }
    }

    pub fn item_count(&self) -> usize {
        self.dictionary.len()
    }

    pub fn build(self, max_items: usize) -> Result<TransactionDatabase> {
        let width = self.dictionary.len();
        if width > max_items {
            return Err(Error::TooManyItems {
                items: width,
                cap: max_items,
            });
        }
        let transactions = self
            .rows
            .into_iter()
            .map(|(line, ids)| Transaction {
                line,
                items: ItemSet::from_items(width, ids),
            })
            .collect();
        Ok(TransactionDatabase::new(self.dictionary, transactions))
    }
}

/// An item dictionary plus an ordered list of non-empty transactions.
#[derive(Clone, Debug)]
pub struct TransactionDatabase {
    dictionary: ItemDictionary,
    transactions: Vec<Transaction>,
    // Position of each item id in lexicographic label order.
    label_rank: Vec<usize>,
}

impl TransactionDatabase {
    fn new(dictionary: ItemDictionary, transactions: Vec<Transaction>) -> Self {
        let mut order: Vec<usize> = (0..dictionary.len()).collect();
        order.sort_by(|&a, &b| dictionary.labels[a].cmp(&dictionary.labels[b]));
        let mut label_rank = vec![0; order.len()];
        for (rank, id) in order.into_iter().enumerate() {
            label_rank[id] = rank;
        }
        TransactionDatabase {
            dictionary,
            transactions,
            label_rank,
        }
    }

    /// Parses FIMI-style text with the default item cap.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with_cap(text, DEFAULT_MAX_ITEMS)
    }

    /// One transaction per line, whitespace-separated item labels. Lines
    /// starting with `#` and blank lines are skipped.
    pub fn parse_with_cap(text: &str, max_items: usize) -> Result<Self> {
        let mut builder = DatabaseBuilder::new();
        for (line_no, line) in text.lines().enumerate() {
            if line.trim_start().starts_with('#') {
                continue;
            }
            builder.add_transaction(line_no, line.split_whitespace());
        }
        builder.build(max_items)
    }

    pub fn dictionary(&self) -> &ItemDictionary {
        &self.dictionary
    }

    pub fn transactions(&self) -> &[Transaction] {
        &self.transactions
    }

    /// |D|
    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    /// |I|
    pub fn num_items(&self) -> usize {
        self.dictionary.len()
    }

    pub fn full_itemset(&self) -> ItemSet {
        ItemSet::full(self.num_items())
    }

    pub fn empty_itemset(&self) -> ItemSet {
        ItemSet::empty(self.num_items())
    }

    /// Number of transactions containing `set`.
    pub fn support(&self, set: &ItemSet) -> Support {
        debug_assert_eq!(set.width(), self.num_items());
        Support(
            self.transactions
                .iter()
                .filter(|t| set.is_subset(&t.items))
                .count(),
        )
    }

    pub fn itemset(&self, labels: &[&str]) -> Option<ItemSet> {
        self.dictionary.itemset_of(labels.iter().copied())
    }

    pub fn render(&self, set: &ItemSet) -> String {
        self.dictionary.render(set)
    }

    pub fn sorted_labels(&self, set: &ItemSet) -> Vec<&str> {
        self.dictionary.sorted_labels(set)
    }

    /// Output order: cardinality ascending, then the sorted label sequences
    /// compared lexicographically.
    pub fn canonical_cmp(&self, a: &ItemSet, b: &ItemSet) -> Ordering {
        a.len()
            .cmp(&b.len())
            .then_with(|| self.rank_key(a).cmp(&self.rank_key(b)))
    }

    fn rank_key(&self, set: &ItemSet) -> Vec<usize> {
        let mut ranks: Vec<usize> = set.iter().map(|id| self.label_rank[id.index()]).collect();
        ranks.sort_unstable();
        ranks
    }

    /// Sorts `items` into output order by the item-set `key` extracts.
    pub fn sort_canonical<T, F>(&self, items: &mut [T], key: F)
    where
        F: Fn(&T) -> &ItemSet,
    {
        items.sort_by_cached_key(|item| {
            let set = key(item);
            (set.len(), self.rank_key(set))
        });
    }

    /// FIMI text for this database, one canonically rendered transaction
    /// per line.
    pub fn to_fimi(&self) -> String {
        let mut out = String::new();
        for t in &self.transactions {
            out.push_str(&self.render(&t.items));
            out.push('\n');
        }
        out
    }
}
