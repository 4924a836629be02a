use thiserror::Error;

use super::period::{Period, PeriodSet};
use crate::time::{ExtTime, Time};

/// A valued piece `(start, end)` of a chunk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub start: Time,
    pub end: Time,
    pub values: Vec<bool>,
}

impl Segment {
    pub fn new(start: Time, end: Time, values: Vec<bool>) -> Self {
        assert!(start < end, "empty segment ({start}, {end})");
        Segment { start, end, values }
    }

    pub fn period(&self) -> Period {
        Period::new(self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChunkError {
    #[error("chunk has no segments")]
    Empty,
    #[error("segment ({start}, {end}) is empty")]
    EmptySegment { start: Time, end: Time },
    #[error("segment starting at {found} does not continue from {expected}")]
    Gap { expected: Time, found: Time },
    #[error("segment has {found} values, expected {expected}")]
    Width { expected: usize, found: usize },
    #[error("span ({a_start}, {a_end}) differs from ({b_start}, {b_end})")]
    SpanMismatch { a_start: Time, a_end: Time, b_start: Time, b_end: Time },
    #[error("unknown signal `{0}`")]
    UnknownSignal(String),
    #[error("cut point {0} lies outside the chunk")]
    BadCut(Time),
}

/// Finite piece of a point-free behavior: named signals over a span tiled
/// by segments. Values need not be constant across the chunk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chunk {
    names: Vec<String>,
    segments: Vec<Segment>,
}

impl Chunk {
    /// Validates that the segments tile a nonempty span.
    pub fn new(names: Vec<String>, segments: Vec<Segment>) -> Result<Self, ChunkError> {
        let first = segments.first().ok_or(ChunkError::Empty)?;
        let mut expected = first.start;
        for s in &segments {
            if s.start >= s.end {
                return Err(ChunkError::EmptySegment { start: s.start, end: s.end });
            }
            if s.start != expected {
                return Err(ChunkError::Gap { expected, found: s.start });
            }
            if s.values.len() != names.len() {
                return Err(ChunkError::Width { expected: names.len(), found: s.values.len() });
            }
            expected = s.end;
        }
        Ok(Chunk { names, segments })
    }

    /// Builds a chunk over `(start, end)` from one maximal-period set per
    /// signal. Sets are clipped to the span.
    pub fn from_columns(
        start: Time,
        end: Time,
        columns: Vec<(String, PeriodSet)>,
    ) -> Result<Self, ChunkError> {
        let span = Period::try_new(start, end)
            .ok_or(ChunkError::EmptySegment { start, end })?;
        let (names, sets): (Vec<String>, Vec<PeriodSet>) = columns
            .into_iter()
            .map(|(n, s)| (n, s.clip(&span)))
            .unzip();
        let mut cuts = vec![start, end];
        for s in &sets {
            for p in s.iter() {
                cuts.push(p.start);
                if let ExtTime::Finite(e) = p.end {
                    cuts.push(e);
                }
            }
        }
        cuts.sort();
        cuts.dedup();
        let segments = cuts
            .windows(2)
            .map(|w| {
                let values = sets.iter().map(|s| s.covers(w[0], w[1].into())).collect();
                Segment::new(w[0], w[1], values)
            })
            .collect();
        Ok(Chunk { names, segments }.merge_stutter())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn start(&self) -> Time {
        self.segments[0].start
    }

    pub fn end(&self) -> Time {
        self.segments[self.segments.len() - 1].end
    }

    pub fn span(&self) -> Period {
        Period::new(self.start(), self.end())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Maximal true periods of one signal.
    pub fn column(&self, name: &str) -> Result<PeriodSet, ChunkError> {
        let i = self.index_of(name).ok_or_else(|| ChunkError::UnknownSignal(name.to_string()))?;
        Ok(self.column_at(i))
    }

    pub fn column_at(&self, i: usize) -> PeriodSet {
        let mut out = PeriodSet::new();
        for s in self.segments.iter().filter(|s| s.values[i]) {
            out.insert(s.period());
        }
        out
    }

    /// Coalesces neighbouring segments with equal values.
    pub fn merge_stutter(mut self) -> Chunk {
        let mut out: Vec<Segment> = Vec::with_capacity(self.segments.len());
        for s in self.segments.drain(..) {
            match out.last_mut() {
                Some(last) if last.values == s.values => last.end = s.end,
                _ => out.push(s),
            }
        }
        Chunk { names: self.names, segments: out }
    }

    /// Splits at `t`, which must lie strictly inside the span.
    pub fn split_at(&self, t: Time) -> Result<(Chunk, Chunk), ChunkError> {
        if t <= self.start() || t >= self.end() {
            return Err(ChunkError::BadCut(t));
        }
        let (mut left, mut right) = (Vec::new(), Vec::new());
        for s in &self.segments {
            if s.end <= t {
                left.push(s.clone());
            } else if s.start >= t {
                right.push(s.clone());
            } else {
                left.push(Segment::new(s.start, t, s.values.clone()));
                right.push(Segment::new(t, s.end, s.values.clone()));
            }
        }
        Ok((
            Chunk { names: self.names.clone(), segments: left },
            Chunk { names: self.names.clone(), segments: right },
        ))
    }

    /// Cuts the chunk at each of `cuts` (sorted, strictly inside the span).
    pub fn split_many(&self, cuts: &[Time]) -> Result<Vec<Chunk>, ChunkError> {
        let mut out = Vec::with_capacity(cuts.len() + 1);
        let mut rest = self.clone();
        for &t in cuts {
            let (l, r) = rest.split_at(t)?;
            out.push(l);
            rest = r;
        }
        out.push(rest);
        Ok(out)
    }
}

/// Refines two chunks over the same span into segments on which both are
/// constant. Values of `a` come first in each segment.
pub fn synchronize(a: &Chunk, b: &Chunk) -> Result<Vec<Segment>, ChunkError> {
    if a.start() != b.start() || a.end() != b.end() {
        return Err(ChunkError::SpanMismatch {
            a_start: a.start(),
            a_end: a.end(),
            b_start: b.start(),
            b_end: b.end(),
        });
    }
    let (sa, sb) = (a.segments(), b.segments());
    let (mut i, mut j) = (0, 0);
    let mut t = a.start();
    let mut out = Vec::with_capacity(sa.len() + sb.len());
    while i < sa.len() && j < sb.len() {
        let end = sa[i].end.min(sb[j].end);
        let mut values = sa[i].values.clone();
        values.extend_from_slice(&sb[j].values);
        out.push(Segment::new(t, end, values));
        t = end;
        if sa[i].end == end {
            i += 1;
        }
        if sb[j].end == end {
            j += 1;
        }
    }
    Ok(out)
}

/// One synchronized piece of two signals over a span.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SyncPiece {
    pub start: Time,
    pub end: Time,
    pub left: bool,
    pub right: bool,
}

/// [`synchronize`] specialised to two maximal-period sets, which is what a
/// since node sees. Consecutive pieces always differ in at least one value.
pub fn synchronize_sets(span_start: Time, span_end: Time, a: &PeriodSet, b: &PeriodSet) -> Vec<SyncPiece> {
    let mut cuts: Vec<Time> = Vec::with_capacity(2 * (a.len() + b.len()) + 2);
    cuts.push(span_start);
    for p in a.iter().chain(b.iter()) {
        if p.start > span_start && p.start < span_end {
            cuts.push(p.start);
        }
        if let ExtTime::Finite(e) = p.end {
            if e > span_start && e < span_end {
                cuts.push(e);
            }
        }
    }
    cuts.push(span_end);
    cuts.sort_unstable();
    cuts.dedup();
    let (pa, pb) = (a.periods(), b.periods());
    let (mut i, mut j) = (0, 0);
    let mut out: Vec<SyncPiece> = Vec::with_capacity(cuts.len());
    for w in cuts.windows(2) {
        let (s, e) = (w[0], w[1]);
        let end = ExtTime::Finite(e);
        while i < pa.len() && pa[i].end < end {
            i += 1;
        }
        while j < pb.len() && pb[j].end < end {
            j += 1;
        }
        let left = i < pa.len() && pa[i].start <= s;
        let right = j < pb.len() && pb[j].start <= s;
        match out.last_mut() {
            Some(last) if last.left == left && last.right == right => last.end = e,
            _ => out.push(SyncPiece { start: s, end: e, left, right }),
        }
    }
    out
}
