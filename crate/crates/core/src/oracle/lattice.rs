//! Exact integer coordinates for the dense oracles.
//!
//! Every endpoint and bound of an instance is a multiple of `1/D`, where `D`
//! is the least common denominator. One grid cell spans `1/D` (times an
//! optional refinement) and is subdivided into `UNIT` ticks, leaving room
//! for the repeated halving that quantifier enumeration needs.

use num_integer::Integer;
use num_rational::Ratio;

use super::HomStructure;
use crate::formula::Formula;
use crate::interval::PeriodSet;
use crate::time::{ExtTime, Time};

pub(super) const UNIT: i64 = 1 << 24;

#[derive(Debug, Clone, Copy)]
pub(super) struct Lattice {
    origin: Ratio<i64>,
    cell: Ratio<i64>,
}

fn bound_times(f: &Formula, out: &mut Vec<Time>) {
    match f {
        Formula::Since(_, _, Some(b)) | Formula::Once(_, Some(b)) | Formula::Historically(_, Some(b)) => {
            out.push(b.lower);
            out.extend(b.upper);
        }
        _ => {}
    }
    for c in f.children() {
        bound_times(c, out);
    }
}

impl Lattice {
    /// Grid of `f` over `h`, with cells refined by `refine`.
    pub fn new(f: &Formula, h: &HomStructure, refine: i64) -> Self {
        let mut times = Vec::new();
        bound_times(f, &mut times);
        Lattice::with_times(h, &times, refine)
    }

    /// Grid of `h` that also contains every value in `extra`.
    pub fn with_times(h: &HomStructure, extra: &[Time], refine: i64) -> Self {
        let mut times = vec![h.start(), h.end()];
        times.extend_from_slice(extra);
        for name in h.names() {
            for p in h.get(name).unwrap().iter() {
                times.push(p.start);
                times.extend(p.end.finite());
            }
        }
        let d = times.iter().fold(1i64, |acc, t| acc.lcm(&t.denom()));
        Lattice { origin: h.start().ratio(), cell: Ratio::new(1, d * refine) }
    }

    /// Grid coordinate of `x`, which must lie on the grid.
    pub fn index(&self, x: Time) -> i64 {
        let r = (x.ratio() - self.origin) / self.cell;
        assert!(r.is_integer(), "{x} is off the grid");
        r.to_integer()
    }

    /// Grid coordinate of a bound (a length, not a position).
    pub fn length(&self, x: Time) -> i64 {
        let r = x.ratio() / self.cell;
        assert!(r.is_integer(), "{x} is off the grid");
        r.to_integer()
    }

    pub fn time(&self, index: i64) -> Time {
        Time::from(self.origin + self.cell * index)
    }

    pub fn ticks(&self, x: Time) -> i64 {
        self.index(x) * UNIT
    }

    /// Maximal periods as tick pairs.
    pub fn periods(&self, s: &PeriodSet) -> Vec<(i64, i64)> {
        s.iter()
            .map(|p| match p.end {
                ExtTime::Finite(e) => (self.ticks(p.start), self.ticks(e)),
                ExtTime::Infinity => (self.ticks(p.start), i64::MAX),
            })
            .collect()
    }
}

pub(super) fn covers(set: &[(i64, i64)], lo: i64, hi: i64) -> bool {
    let i = set.partition_point(|&(_, e)| e < hi);
    i < set.len() && set[i].0 <= lo
}

pub(super) fn offset(x: i64) -> i64 {
    x.rem_euclid(UNIT)
}

/// Points `g·UNIT + off` strictly inside `(lo, hi)`, for every grid index
/// `g` and every offset, sorted and deduplicated.
pub(super) fn cuts(lo: i64, hi: i64, offsets: &[i64]) -> Vec<i64> {
    let mut out = Vec::new();
    for &off in offsets.iter().chain(std::iter::once(&0)) {
        let mut g = (lo - off).div_euclid(UNIT);
        loop {
            let x = g * UNIT + off;
            if x >= hi {
                break;
            }
            if x > lo {
                out.push(x);
            }
            g += 1;
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

pub(super) fn mid(a: i64, b: i64) -> i64 {
    assert!((a + b) % 2 == 0, "tick lattice too coarse for this instance");
    (a + b) / 2
}

/// Midpoints of the pieces `lo | cuts | hi`.
pub(super) fn midpoints(lo: i64, hi: i64, cuts: &[i64]) -> Vec<i64> {
    let mut prev = lo;
    let mut out = Vec::with_capacity(cuts.len() + 1);
    for &c in cuts.iter().chain(std::iter::once(&hi)) {
        out.push(mid(prev, c));
        prev = c;
    }
    out
}

/// Cut points together with piece midpoints, sorted.
pub(super) fn candidates(lo: i64, hi: i64, offsets: &[i64]) -> Vec<i64> {
    if lo >= hi {
        return Vec::new();
    }
    let c = cuts(lo, hi, offsets);
    let mut all = midpoints(lo, hi, &c);
    all.extend_from_slice(&c);
    all.sort_unstable();
    all
}
