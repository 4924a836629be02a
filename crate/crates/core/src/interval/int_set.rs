use std::collections::VecDeque;
use std::fmt;

/// Closed integer interval `[lo, hi]`; `hi == i64::MAX` encodes `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntInterval {
    lo: i64,
    hi: i64,
}

const INF: i64 = i64::MAX;

impl IntInterval {
    /// `[lo, hi]`, or `[lo, ∞)` when `hi` is `None`. Panics if `lo > hi`.
    pub fn new(lo: i64, hi: Option<i64>) -> Self {
        let hi = hi.unwrap_or(INF);
        assert!(lo <= hi, "empty integer interval [{lo}, {hi}]");
        IntInterval { lo, hi }
    }

    pub fn closed(lo: i64, hi: i64) -> Self {
        IntInterval::new(lo, Some(hi))
    }

    pub fn lower(&self) -> i64 {
        self.lo
    }

    pub fn upper(&self) -> Option<i64> {
        (self.hi != INF).then_some(self.hi)
    }

    pub fn contains(&self, k: i64) -> bool {
        self.lo <= k && k <= self.hi
    }
}

impl fmt::Display for IntInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.upper() {
            Some(hi) if hi == self.lo => write!(f, "{{{hi}}}"),
            Some(hi) => write!(f, "[{},{}]", self.lo, hi),
            None => write!(f, "[{},inf]", self.lo),
        }
    }
}

/// Canonical union of closed integer intervals.
///
/// Intervals are sorted and separated by at least one missing integer
/// (`hi + 1 < next.lo`), so equal sets have equal representations. Only the
/// last interval can be unbounded.
///
/// Insertions near the back and pruning at the front are O(1) amortized,
/// which is the access pattern of forward-shifted monitor state.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IntIntervalSet {
    items: VecDeque<IntInterval>,
}

impl IntIntervalSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(ivl: IntInterval) -> Self {
        let mut s = Self::new();
        s.items.push_back(ivl);
        s
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Number of maximal intervals.
    pub fn interval_count(&self) -> usize {
        self.items.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &IntInterval> + '_ {
        self.items.iter()
    }

    pub fn clear(&mut self) {
        self.items.clear();
    }

    /// `self ∪ ivl`.
    pub fn insert(&mut self, ivl: IntInterval) {
        let IntInterval { lo, hi } = ivl;
        match self.items.back_mut() {
            None => {
                self.items.push_back(ivl);
                return;
            }
            Some(last) if last.hi.saturating_add(1) < lo => {
                self.items.push_back(ivl);
                return;
            }
            // Overlaps or touches only the last interval.
            Some(last) if last.lo <= lo => {
                last.hi = last.hi.max(hi);
                return;
            }
            Some(_) => {}
        }
        // First interval that could touch `ivl` from the left, and the first
        // one strictly beyond its reach on the right.
        let first = self.items.partition_point(|x| x.hi.saturating_add(1) < lo);
        let beyond = self.items.partition_point(|x| x.lo <= hi.saturating_add(1));
        if first == beyond {
            self.items.insert(first, ivl);
            return;
        }
        let merged = IntInterval {
            lo: lo.min(self.items[first].lo),
            hi: hi.max(self.items[beyond - 1].hi),
        };
        self.items.drain(first + 1..beyond);
        self.items[first] = merged;
    }

    /// `self ∩ [k, ∞)`.
    pub fn prune_below(&mut self, k: i64) {
        while let Some(front) = self.items.front_mut() {
            if front.hi < k {
                self.items.pop_front();
            } else {
                if front.lo < k {
                    front.lo = k;
                }
                break;
            }
        }
    }

    pub fn contains(&self, k: i64) -> bool {
        // Monitors query the current step, which is almost always the front.
        match self.items.front() {
            None => false,
            Some(front) if k <= front.hi => front.lo <= k,
            Some(_) => {
                let i = self.items.partition_point(|x| x.hi < k);
                i < self.items.len() && self.items[i].lo <= k
            }
        }
    }

    /// Smallest element, if any.
    pub fn min(&self) -> Option<i64> {
        self.items.front().map(|x| x.lo)
    }

    /// Largest element; `Some(None)` when the set is unbounded.
    pub fn max(&self) -> Option<Option<i64>> {
        self.items.back().map(|x| x.upper())
    }
}

impl FromIterator<IntInterval> for IntIntervalSet {
    fn from_iter<T: IntoIterator<Item = IntInterval>>(iter: T) -> Self {
        let mut s = IntIntervalSet::new();
        for ivl in iter {
            s.insert(ivl);
        }
        s
    }
}

impl fmt::Display for IntIntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.items.is_empty() {
            return f.write_str("{}");
        }
        let parts: Vec<String> = self.items.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(" u "))
    }
}
