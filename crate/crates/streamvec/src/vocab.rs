//! Fixed-capacity vocabulary backed by a Misra-Gries frequency sketch.
//!
//! Words map to stable slot indexes in `[0, capacity)`. When the vocabulary
//! is full and an unseen word arrives, every resident counter is decremented
//! by one and words whose counter reaches zero are evicted; the incoming word
//! takes the lowest freed slot. Eviction events are reported so the owning
//! model can recycle the stale parameter row.
//!
//! The decrement-all step is implemented with a global `debt` offset: a
//! word's counter is `stored - debt`, so decrementing all residents is one
//! addition plus draining the bucket index of dead entries. This is
//! state-for-state identical to the textbook loop (asserted in tests).

use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Outcome of observing one token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VocabEvent {
    /// Word already resident; its counter was incremented.
    Incremented { slot: usize },
    /// Word inserted into a free slot with counter 1.
    Inserted { slot: usize },
    /// Vocabulary was full: all counters decremented, zeroed words evicted,
    /// the new word inserted into the lowest freed slot.
    EvictedThenInserted {
        slot: usize,
        evicted: Vec<EvictedWord>,
    },
    /// Vocabulary full and no counter reached zero; the word was not admitted.
    Dropped,
}

/// A word removed by a decrement round, with the slot it occupied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvictedWord {
    pub word: String,
    pub slot: usize,
}

#[derive(Debug, Clone)]
struct Entry {
    slot: usize,
    /// Counter plus the debt at insertion time; effective count is
    /// `stored - debt`.
    stored: u64,
}

/// Misra-Gries bounded vocabulary: at most `capacity` resident words, each
/// with a stable slot and a frequency estimate.
///
/// Classic sketch guarantee: after a stream of `N` tokens, every word with
/// true count above `N / (capacity + 1)` is resident, and each resident
/// counter is within `N / (capacity + 1)` below its true count.
#[derive(Debug, Clone)]
pub struct BoundedVocab {
    capacity: usize,
    entries: HashMap<String, Entry>,
    slot_words: Vec<Option<String>>,
    /// stored-counter value → slots holding it; lets eviction drain exactly
    /// the dead entries.
    buckets: BTreeMap<u64, BTreeSet<usize>>,
    debt: u64,
    next_fresh: usize,
    recycled: BTreeSet<usize>,
}

impl BoundedVocab {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity >= 1, "vocabulary capacity must be >= 1");
        Self {
            capacity,
            entries: HashMap::new(),
            slot_words: Vec::new(),
            buckets: BTreeMap::new(),
            debt: 0,
            next_fresh: 0,
            recycled: BTreeSet::new(),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Number of resident words.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Misra-Gries update for one token.
    pub fn observe(&mut self, word: &str) -> VocabEvent {
        debug_assert!(!word.is_empty(), "observe requires a nonempty token");

        if let Some(entry) = self.entries.get_mut(word) {
            let slot = entry.slot;
            let old = entry.stored;
            entry.stored += 1;
            let new = entry.stored;
            Self::move_bucket(&mut self.buckets, slot, old, new);
            return VocabEvent::Incremented { slot };
        }

        if let Some(slot) = self.take_free_slot() {
            self.insert_at(word, slot);
            return VocabEvent::Inserted { slot };
        }

        // Full: decrement every resident counter by one and evict the zeros.
        self.debt += 1;
        let evicted = self.drain_dead();
        if evicted.is_empty() {
            self.debt_bound_check();
            return VocabEvent::Dropped;
        }
        let slot = *self
            .recycled
            .first()
            .expect("eviction must have freed a slot");
        self.recycled.remove(&slot);
        self.insert_at(word, slot);
        VocabEvent::EvictedThenInserted { slot, evicted }
    }

    /// Resident slot of `word`, if any. Never mutates state.
    pub fn slot_of(&self, word: &str) -> Option<usize> {
        self.entries.get(word).map(|e| e.slot)
    }

    /// Sketch counter for `word` (0 if not resident). This is the Misra-Gries
    /// estimate, not the true stream count.
    pub fn frequency(&self, word: &str) -> u64 {
        self.entries.get(word).map_or(0, |e| e.stored - self.debt)
    }

    /// Word occupying `slot`, if any.
    pub fn word_at(&self, slot: usize) -> Option<&str> {
        self.slot_words.get(slot)?.as_deref()
    }

    /// Resident `(word, slot, counter)` triples ordered by slot. Used for
    /// snapshots and dumps, where deterministic order matters.
    pub fn resident_sorted_by_slot(&self) -> Vec<(String, usize, u64)> {
        let mut out: Vec<(String, usize, u64)> = self
            .entries
            .iter()
            .map(|(w, e)| (w.clone(), e.slot, e.stored - self.debt))
            .collect();
        out.sort_by_key(|(_, slot, _)| *slot);
        out
    }

    /// Iterator over resident words (arbitrary order).
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    fn take_free_slot(&mut self) -> Option<usize> {
        if let Some(&slot) = self.recycled.first() {
            self.recycled.remove(&slot);
            return Some(slot);
        }
        if self.next_fresh < self.capacity {
            let slot = self.next_fresh;
            self.next_fresh += 1;
            self.slot_words.push(None);
            return Some(slot);
        }
        None
    }

    fn insert_at(&mut self, word: &str, slot: usize) {
        let stored = self.debt + 1;
        self.entries.insert(
            word.to_owned(),
            Entry {
                slot,
                stored,
            },
        );
        self.slot_words[slot] = Some(word.to_owned());
        self.buckets.entry(stored).or_default().insert(slot);
    }

    /// Removes every entry whose effective counter dropped to zero, returning
    /// them sorted by slot.
    fn drain_dead(&mut self) -> Vec<EvictedWord> {
        let mut evicted = Vec::new();
        while let Some((&stored, _)) = self.buckets.first_key_value() {
            if stored > self.debt {
                break;
            }
            let slots = self.buckets.remove(&stored).unwrap();
            for slot in slots {
                let word = self.slot_words[slot]
                    .take()
                    .expect("bucket slot must be occupied");
                self.entries.remove(&word);
                self.recycled.insert(slot);
                evicted.push(EvictedWord { word, slot });
            }
        }
        evicted.sort_by_key(|e| e.slot);
        evicted
    }

    fn move_bucket(
        buckets: &mut BTreeMap<u64, BTreeSet<usize>>,
        slot: usize,
        old: u64,
        new: u64,
    ) {
        let bucket = buckets.get_mut(&old).expect("stale bucket index");
        bucket.remove(&slot);
        if bucket.is_empty() {
            buckets.remove(&old);
        }
        buckets.entry(new).or_default().insert(slot);
    }

    fn debt_bound_check(&self) {
        debug_assert!(
            self.buckets
                .first_key_value()
                .is_none_or(|(&k, _)| k > self.debt),
            "resident entry with zero counter"
        );
    }
}
