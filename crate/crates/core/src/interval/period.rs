use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::time::{ExtTime, Time};

/// Open time period `(start, end)` with `start < end`; `end` may be `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Period {
    pub start: Time,
    pub end: ExtTime,
}

impl Period {
    /// Panics when the period would be empty.
    pub fn new(start: Time, end: impl Into<ExtTime>) -> Self {
        let end = end.into();
        assert!(end > start, "empty period ({start}, {end})");
        Period { start, end }
    }

    /// `None` when `end <= start`.
    pub fn try_new(start: Time, end: impl Into<ExtTime>) -> Option<Self> {
        let end = end.into();
        (end > start).then_some(Period { start, end })
    }

    pub fn ints(start: i64, end: i64) -> Self {
        Period::new(Time::from_int(start), Time::from_int(end))
    }

    /// Whether `(start, end)` lies entirely inside this period.
    pub fn covers(&self, start: Time, end: ExtTime) -> bool {
        self.start <= start && end <= self.end
    }

    pub fn contains_point(&self, t: Time) -> bool {
        self.start < t && ExtTime::Finite(t) < self.end
    }

    pub fn intersect(&self, other: &Period) -> Option<Period> {
        Period::try_new(self.start.max(other.start), self.end.min(other.end))
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PeriodError {
    #[error("period {period} lies outside span {span}")]
    OutsideSpan { period: Period, span: Period },
    #[error("malformed period set `{0}`")]
    Malformed(String),
}

/// Canonical union of open periods.
///
/// Periods are sorted and strictly separated (`end < next.start`). Periods
/// that overlap or merely abut are merged, because the shared boundary
/// instant carries no duration. Only the last period may be unbounded.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PeriodSet {
    items: Vec<Period>,
}

impl PeriodSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(p: Period) -> Self {
        PeriodSet { items: vec![p] }
    }

    /// Canonicalizes an arbitrary collection of periods.
    pub fn from_periods(periods: impl IntoIterator<Item = Period>) -> Self {
        let mut items: Vec<Period> = periods.into_iter().collect();
        items.sort_by(|a, b| a.start.cmp(&b.start).then(a.end.cmp(&b.end)));
        let mut out: Vec<Period> = Vec::with_capacity(items.len());
        for p in items {
            match out.last_mut() {
                Some(last) if p.start <= last.end => last.end = last.end.max(p.end),
                _ => out.push(p),
            }
        }
        PeriodSet { items: out }
    }

    pub fn from_ints(pairs: &[(i64, i64)]) -> Self {
        Self::from_periods(pairs.iter().map(|&(a, b)| Period::ints(a, b)))
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn periods(&self) -> &[Period] {
        &self.items
    }

    pub fn iter(&self) -> impl Iterator<Item = &Period> + '_ {
        self.items.iter()
    }

    pub fn clear(&mut self) {
        self.items.clear();
    }

    /// Adds one period in place. Cheap when `p` lands at the back, which is
    /// how monitor state grows.
    pub fn insert(&mut self, p: Period) {
        match self.items.last_mut() {
            None => {
                self.items.push(p);
                return;
            }
            Some(last) if last.end < p.start => {
                self.items.push(p);
                return;
            }
            Some(last) if last.start <= p.start => {
                last.end = last.end.max(p.end);
                return;
            }
            Some(_) => {}
        }
        let first = self.items.partition_point(|x| x.end < p.start);
        let beyond = self.items.partition_point(|x| x.start <= p.end);
        if first == beyond {
            self.items.insert(first, p);
            return;
        }
        let merged = Period {
            start: p.start.min(self.items[first].start),
            end: p.end.max(self.items[beyond - 1].end),
        };
        self.items.drain(first + 1..beyond);
        self.items[first] = merged;
    }

    /// `self ∩ (t, ∞)`.
    pub fn prune_before(&mut self, t: Time) {
        let drop = self.items.partition_point(|x| x.end <= t);
        if drop > 0 {
            self.items.drain(..drop);
        }
        if let Some(first) = self.items.first_mut() {
            if first.start < t {
                first.start = t;
            }
        }
    }

    /// `self ∩ span`.
    pub fn clip(&self, span: &Period) -> PeriodSet {
        let items = self.items.iter().filter_map(|p| p.intersect(span)).collect();
        PeriodSet { items }
    }

    pub fn union(&self, other: &PeriodSet) -> PeriodSet {
        let mut merged: Vec<Period> = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.items.len() || j < other.items.len() {
            let take_left = match (self.items.get(i), other.items.get(j)) {
                (Some(a), Some(b)) => a.start <= b.start,
                (Some(_), None) => true,
                _ => false,
            };
            let p = if take_left {
                i += 1;
                self.items[i - 1]
            } else {
                j += 1;
                other.items[j - 1]
            };
            match merged.last_mut() {
                Some(last) if p.start <= last.end => {
                    let last: &mut Period = last;
                    last.end = last.end.max(p.end);
                }
                _ => merged.push(p),
            }
        }
        PeriodSet { items: merged }
    }

    pub fn intersect(&self, other: &PeriodSet) -> PeriodSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.items.len() && j < other.items.len() {
            let (a, b) = (self.items[i], other.items[j]);
            if let Some(p) = a.intersect(&b) {
                out.push(p);
            }
            if a.end <= b.end {
                i += 1;
            } else {
                j += 1;
            }
        }
        // Pieces of two canonical sets cannot abut unless one input had a
        // gap of zero length, which canonical sets do not.
        PeriodSet { items: out }
    }

    /// Maximal periods of `span` not covered by `self`.
    pub fn complement(&self, span: &Period) -> Result<PeriodSet, PeriodError> {
        let mut out = Vec::new();
        let mut cursor = ExtTime::Finite(span.start);
        for p in &self.items {
            if !span.covers(p.start, p.end) {
                return Err(PeriodError::OutsideSpan { period: *p, span: *span });
            }
            if let ExtTime::Finite(c) = cursor {
                if let Some(gap) = Period::try_new(c, p.start) {
                    out.push(gap);
                }
            }
            cursor = p.end;
        }
        if let ExtTime::Finite(c) = cursor {
            if let Some(gap) = Period::try_new(c, span.end) {
                out.push(gap);
            }
        }
        Ok(PeriodSet { items: out })
    }

    /// Whether the open period `(start, end)` lies inside one maximal period.
    pub fn covers(&self, start: Time, end: ExtTime) -> bool {
        let i = self.items.partition_point(|x| x.end < end);
        i < self.items.len() && self.items[i].start <= start
    }

    /// Whether `t` lies strictly inside one of the periods.
    pub fn contains_point(&self, t: Time) -> bool {
        let i = self.items.partition_point(|x| x.end <= t);
        i < self.items.len() && self.items[i].start < t
    }

    /// Total length of the bounded part of the set.
    pub fn measure(&self) -> Option<Time> {
        self.items.iter().try_fold(Time::ZERO, |acc, p| Some(acc + (p.end.finite()? - p.start)))
    }
}

impl FromIterator<Period> for PeriodSet {
    fn from_iter<T: IntoIterator<Item = Period>>(iter: T) -> Self {
        PeriodSet::from_periods(iter)
    }
}

impl fmt::Display for PeriodSet {
    /// `{(s1,e1),(s2,e2),...}` with exact decimal endpoints.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.items.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl FromStr for PeriodSet {
    type Err = PeriodError;

    /// Reads the textual form written by `Display`; input need not be
    /// canonical.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PeriodError::Malformed(s.to_string());
        let body: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = body
            .strip_prefix('{')
            .and_then(|b| b.strip_suffix('}'))
            .ok_or_else(bad)?;
        if inner.is_empty() || inner == "∅" {
            return Ok(PeriodSet::new());
        }
        let mut periods = Vec::new();
        for part in inner.split("),") {
            let part = part.strip_prefix('(').ok_or_else(bad)?;
            let part = part.strip_suffix(')').unwrap_or(part);
            let (a, b) = part.split_once(',').ok_or_else(bad)?;
            let start: Time = a.parse().map_err(|_| bad())?;
            let end: ExtTime = b.parse().map_err(|_| bad())?;
            periods.push(Period::try_new(start, end).ok_or_else(bad)?);
        }
        Ok(PeriodSet::from_periods(periods))
    }
}
