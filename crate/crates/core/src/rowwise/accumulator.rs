const EMPTY: usize = usize::MAX;
// 2^64 / golden ratio
const HASH_MUL: u64 = 0x9E37_79B9_7F4A_7C15;

/// Open-addressed hash table keyed by column index, with linear probing and
/// multiply-shift hashing.
///
/// The active capacity is the smallest power of two that is at least twice
/// the bound passed to [`prepare`](Self::prepare), so a row never triggers a
/// rehash. Clearing touches only occupied slots.
#[derive(Clone, Debug)]
pub struct HashAccumulator {
    keys: Vec<usize>,
    vals: Vec<f64>,
    capacity: usize,
    shift: u32,
    used: Vec<usize>,
    scratch: Vec<(usize, f64)>,
}

impl Default for HashAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl HashAccumulator {
    pub fn new() -> Self {
        let mut acc = HashAccumulator {
            keys: Vec::new(),
            vals: Vec::new(),
            capacity: 0,
            shift: 0,
            used: Vec::new(),
            scratch: Vec::new(),
        };
        acc.prepare(0);
        acc
    }

    pub fn with_bound(bound: usize) -> Self {
        let mut acc = Self::new();
        acc.prepare(bound);
        acc
    }

    /// Empties the table and sizes it for at most `bound` distinct keys.
    pub fn prepare(&mut self, bound: usize) {
        self.clear();
        let capacity = (2 * bound.max(1)).next_power_of_two();
        if capacity > self.keys.len() {
            self.keys.resize(capacity, EMPTY);
            self.vals.resize(capacity, 0.0);
        }
        self.capacity = capacity;
        self.shift = 64 - capacity.trailing_zeros();
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.used.len()
    }

    pub fn is_empty(&self) -> bool {
        self.used.is_empty()
    }

    #[inline]
    fn find_slot(&self, key: usize) -> usize {
        debug_assert!(key != EMPTY);
        let mask = self.capacity - 1;
        let mut slot = ((key as u64).wrapping_mul(HASH_MUL) >> self.shift) as usize;
        loop {
            let k = self.keys[slot];
            if k == key || k == EMPTY {
                return slot;
            }
            slot = (slot + 1) & mask;
        }
    }

    /// Inserts `key` with value 0.0 if absent. Returns true when it was new.
    #[inline]
    pub fn insert_key(&mut self, key: usize) -> bool {
        let slot = self.find_slot(key);
        if self.keys[slot] == EMPTY {
            debug_assert!(self.used.len() < self.capacity / 2, "accumulator bound exceeded");
            self.keys[slot] = key;
            self.vals[slot] = 0.0;
            self.used.push(slot);
            true
        } else {
            false
        }
    }

    /// Adds `value` to the entry for `key`, inserting it if absent.
    #[inline]
    pub fn accumulate(&mut self, key: usize, value: f64) {
        let slot = self.find_slot(key);
        if self.keys[slot] == EMPTY {
            debug_assert!(self.used.len() < self.capacity / 2, "accumulator bound exceeded");
            self.keys[slot] = key;
            self.vals[slot] = value;
            self.used.push(slot);
        } else {
            self.vals[slot] += value;
        }
    }

    pub fn get(&self, key: usize) -> Option<f64> {
        let slot = self.find_slot(key);
        (self.keys[slot] == key).then(|| self.vals[slot])
    }

    /// Occupied keys in insertion order.
    pub fn keys(&self) -> impl Iterator<Item = usize> + '_ {
        self.used.iter().map(move |&s| self.keys[s])
    }

    /// Occupied `(key, value)` pairs in insertion order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.used.iter().map(move |&s| (self.keys[s], self.vals[s]))
    }

    /// Calls `f` for every entry in ascending key order, then clears.
    pub fn drain_sorted(&mut self, mut f: impl FnMut(usize, f64)) {
        let mut scratch = std::mem::take(&mut self.scratch);
        scratch.clear();
        scratch.extend(self.entries());
        scratch.sort_unstable_by_key(|&(k, _)| k);
        for &(k, v) in &scratch {
            f(k, v);
        }
        self.scratch = scratch;
        self.clear();
    }

    /// Writes entries in ascending key order into the two slices, then clears.
    /// Both slices must have length exactly [`len`](Self::len).
    pub fn drain_sorted_into(&mut self, cols: &mut [usize], vals: &mut [f64]) {
        assert_eq!(cols.len(), self.len());
        assert_eq!(vals.len(), self.len());
        let mut n = 0;
        self.drain_sorted(|k, v| {
            cols[n] = k;
            vals[n] = v;
            n += 1;
        });
    }

    pub fn clear(&mut self) {
        for &s in &self.used {
            self.keys[s] = EMPTY;
        }
        self.used.clear();
    }
}
