//! Fixed-width bit-vector item-sets.
//!
//! An [`ItemSet`] is a subset of the interned item universe of one
//! [`TransactionDatabase`](crate::TransactionDatabase). Both the patterns being
//! mined and the transactions they are matched against use this type, and
//! generality between patterns is plain set inclusion.

use std::cmp::Ordering;
use std::fmt;

const WORD_BITS: usize = 64;

/// Dense index of an item in a database dictionary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemId(pub u32);

impl ItemId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for ItemId {
    fn from(index: usize) -> Self {
        ItemId(index as u32)
    }
}

/// Number of transactions containing an item-set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Support(pub usize);

impl Support {
    pub fn count(self) -> usize {
        self.0
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of items over a universe of `width` items.
///
/// Bits beyond `width` in the last word are always zero, so equality and
/// hashing can work on the raw words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ItemSet {
    width: usize,
    words: Box<[u64]>,
}

fn word_count(width: usize) -> usize {
    width.div_ceil(WORD_BITS)
}

impl ItemSet {
    pub fn empty(width: usize) -> Self {
        ItemSet {
            width,
            words: vec![0; word_count(width)].into_boxed_slice(),
        }
    }

    /// The set of every item in the universe.
    pub fn full(width: usize) -> Self {
        let mut set = Self::empty(width);
        for (i, word) in set.words.iter_mut().enumerate() {
            let remaining = width - i * WORD_BITS;
            *word = if remaining >= WORD_BITS {
                u64::MAX
            } else {
                (1u64 << remaining) - 1
            };
        }
        set
    }

    pub fn from_items<I>(width: usize, items: I) -> Self
    where
        I: IntoIterator<Item = ItemId>,
    {
        let mut set = Self::empty(width);
        for item in items {
            set.insert(item);
        }
        set
    }

    /// Builds a set from the low `width` bits of `mask`. Only for universes of
    /// at most 64 items.
    pub fn from_mask(width: usize, mask: u64) -> Self {
        assert!(width <= WORD_BITS, "from_mask needs width <= 64");
        let mut set = Self::empty(width);
        if width > 0 {
            let keep = if width == WORD_BITS {
                u64::MAX
            } else {
                (1u64 << width) - 1
            };
            set.words[0] = mask & keep;
        }
        set
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn insert(&mut self, item: ItemId) {
        let i = item.index();
        assert!(
            i < self.width,
            "item {i} outside universe of {}",
            self.width
        );
        self.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
    }

    pub fn remove(&mut self, item: ItemId) {
        let i = item.index();
        if i < self.width {
            self.words[i / WORD_BITS] &= !(1 << (i % WORD_BITS));
        }
    }

    pub fn contains(&self, item: ItemId) -> bool {
        let i = item.index();
        i < self.width && self.words[i / WORD_BITS] & (1 << (i % WORD_BITS)) != 0
    }

    /// Cardinality, which is also the level of the set in the lattice.
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Members in ascending id order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            word_index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    /// True iff every member of `self` is a member of `other`.
    pub fn is_subset(&self, other: &ItemSet) -> bool {
        debug_assert_eq!(self.width, other.width);
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_superset(&self, other: &ItemSet) -> bool {
        other.is_subset(self)
    }

    pub fn intersect(&self, other: &ItemSet) -> ItemSet {
        debug_assert_eq!(self.width, other.width);
        ItemSet {
            width: self.width,
            words: self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn union(&self, other: &ItemSet) -> ItemSet {
        debug_assert_eq!(self.width, other.width);
        ItemSet {
            width: self.width,
            words: self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn intersection_len(&self, other: &ItemSet) -> usize {
        self.words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Copy of `self` without `item`.
    pub fn without(&self, item: ItemId) -> ItemSet {
        let mut out = self.clone();
        out.remove(item);
        out
    }

    /// Copy of `self` with `item` added.
    pub fn with(&self, item: ItemId) -> ItemSet {
        let mut out = self.clone();
        out.insert(item);
        out
    }

    /// Items of the universe that are not in `self`.
    pub fn complement_iter(&self) -> impl Iterator<Item = ItemId> + '_ {
        (0..self.width)
            .map(ItemId::from)
            .filter(move |&i| !self.contains(i))
    }
}

/// Whether `a` and `b` may be merged by intersection into a `k`-item-set:
/// both hold `k + 1` items and they share exactly `k` of them.
pub fn combinable(a: &ItemSet, b: &ItemSet, k: usize) -> bool {
    a.len() == k + 1 && b.len() == k + 1 && a.intersection_len(b) == k
}

/// Orders by cardinality, then by the ascending id sequence.
impl Ord for ItemSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
            .then_with(|| self.width.cmp(&other.width))
    }
}

impl PartialOrd for ItemSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|i| i.0)).finish()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    word_index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = ItemId;

    fn next(&mut self) -> Option<ItemId> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(ItemId::from(self.word_index * WORD_BITS + bit));
            }
            self.word_index += 1;
            if self.word_index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_index];
        }
    }
}

impl<'a> IntoIterator for &'a ItemSet {
    type Item = ItemId;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Items a..e of the worked example are ids 0..4.
    fn set(letters: &str) -> ItemSet {
        ItemSet::from_items(
            5,
            letters.bytes().map(|b| ItemId::from((b - b'a') as usize)),
        )
    }

    #[test]
    fn subset_cases() {
        assert!(set("bd").is_subset(&set("abcd")));
        assert!(!set("e").is_subset(&set("abcd")));
        assert!(ItemSet::empty(5).is_subset(&set("a")));
        assert!(ItemSet::empty(5).is_subset(&ItemSet::empty(5)));
    }

    #[test]
    fn intersect_cases() {
        assert_eq!(set("acde").intersect(&set("bcde")), set("cde"));
        assert_eq!(set("abcd").intersect(&set("abce")), set("abc"));
        assert_eq!(set("abd").intersect(&set("abd")), set("abd"));
    }

    #[test]
    fn combinable_cases() {
        assert!(combinable(&set("acde"), &set("bcde"), 3));
        assert!(!combinable(&set("abcd"), &set("abcd"), 3));
        assert!(!combinable(&set("ab"), &set("cde"), 1));
    }

    #[test]
    fn full_and_multiword() {
        assert_eq!(ItemSet::full(5).len(), 5);
        assert_eq!(ItemSet::full(64).len(), 64);
        let wide = ItemSet::full(130);
        assert_eq!(wide.len(), 130);
        assert_eq!(wide.iter().last(), Some(ItemId(129)));
        let a = ItemSet::from_items(130, [ItemId(3), ItemId(70), ItemId(129)]);
        assert!(a.is_subset(&wide));
        assert_eq!(
            a.iter().collect::<Vec<_>>(),
            vec![ItemId(3), ItemId(70), ItemId(129)]
        );
        assert_eq!(a.without(ItemId(70)).len(), 2);
        assert!(ItemSet::full(0).is_empty());
    }

    #[test]
    fn ordering_is_size_then_ids() {
        let mut v = vec![set("bc"), set("a"), set("abc"), set("ac"), set("e")];
        v.sort();
        assert_eq!(
            v,
            vec![set("a"), set("e"), set("ac"), set("bc"), set("abc")]
        );
    }

    fn arb_set(width: usize) -> impl Strategy<Value = ItemSet> {
        any::<u64>().prop_map(move |m| ItemSet::from_mask(width, m))
    }

    proptest! {
        #[test]
        fn intersect_algebra(a in arb_set(12), b in arb_set(12), c in arb_set(12)) {
            prop_assert_eq!(a.intersect(&b), b.intersect(&a));
            prop_assert_eq!(a.intersect(&b).intersect(&c), a.intersect(&b.intersect(&c)));
            prop_assert_eq!(a.intersect(&a), a.clone());
            let i = a.intersect(&b);
            prop_assert!(i.is_subset(&a) && i.is_subset(&b));
            prop_assert!(i.len() <= a.len().min(b.len()));
        }

        #[test]
        fn subset_matches_membership(a in arb_set(10), b in arb_set(10)) {
            let by_members = a.iter().all(|i| b.contains(i));
            prop_assert_eq!(a.is_subset(&b), by_members);
        }
    }
}
