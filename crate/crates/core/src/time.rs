//! Exact time values.
//!
//! Dense time endpoints are exact rationals. Open period bounds make any
//! floating-point rounding observable, so nothing in the dense pipeline uses
//! floats.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use thiserror::Error;

/// An exact, finite point on the timeline.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Time(Ratio<i64>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TimeParseError {
    #[error("empty number")]
    Empty,
    #[error("invalid decimal number `{0}`")]
    Invalid(String),
    #[error("number `{0}` is out of range")]
    Overflow(String),
}

impl Time {
    pub const ZERO: Time = Time(Ratio::new_raw(0, 1));

    pub fn from_int(n: i64) -> Self {
        Time(Ratio::from_integer(n))
    }

    /// Builds `numer / denom` in lowest terms. Panics if `denom == 0`.
    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Time(Ratio::new(numer, denom))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// The integer value, if this time is integral.
    pub fn to_integer(&self) -> Option<i64> {
        self.is_integer().then(|| self.0.to_integer())
    }

    pub fn midpoint(self, other: Time) -> Time {
        Time((self.0 + other.0) / 2)
    }

    pub fn mul_int(self, k: i64) -> Time {
        Time(self.0 * k)
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }
}

impl Ord for Time {
    /// Streams mostly compare times with equal denominators; keep that
    /// case inlinable.
    #[inline]
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0.denom() == other.0.denom() {
            self.0.numer().cmp(other.0.numer())
        } else {
            self.0.cmp(&other.0)
        }
    }
}

impl PartialOrd for Time {
    #[inline]
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for Time {
    fn from(n: i64) -> Self {
        Time::from_int(n)
    }
}

impl From<Ratio<i64>> for Time {
    fn from(r: Ratio<i64>) -> Self {
        Time(r)
    }
}

impl Add for Time {
    type Output = Time;
    fn add(self, rhs: Time) -> Time {
        Time(self.0 + rhs.0)
    }
}

impl Sub for Time {
    type Output = Time;
    fn sub(self, rhs: Time) -> Time {
        Time(self.0 - rhs.0)
    }
}

impl FromStr for Time {
    type Err = TimeParseError;

    /// Parses a non-negative or negative decimal such as `12`, `0.25` or `-3.5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(TimeParseError::Empty);
        }
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        let digits_ok = |d: &str| d.bytes().all(|b| b.is_ascii_digit());
        if (int_part.is_empty() && frac_part.is_empty())
            || !digits_ok(int_part)
            || !digits_ok(frac_part)
        {
            return Err(TimeParseError::Invalid(s.to_string()));
        }
        let overflow = || TimeParseError::Overflow(s.to_string());
        let mut numer: i64 = 0;
        for b in int_part.bytes().chain(frac_part.bytes()) {
            numer = numer
                .checked_mul(10)
                .and_then(|n| n.checked_add(i64::from(b - b'0')))
                .ok_or_else(overflow)?;
        }
        let denom = 10i64
            .checked_pow(u32::try_from(frac_part.len()).map_err(|_| overflow())?)
            .ok_or_else(overflow)?;
        let numer = if neg { -numer } else { numer };
        Ok(Time(Ratio::new(numer, denom)))
    }
}

impl fmt::Display for Time {
    /// Prints an exact decimal when the denominator divides a power of ten,
    /// and `p/q` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = (self.numer(), self.denom());
        if d == 1 {
            return write!(f, "{n}");
        }
        let mut rest = d;
        let (mut twos, mut fives) = (0u32, 0u32);
        while rest % 2 == 0 {
            rest /= 2;
            twos += 1;
        }
        while rest % 5 == 0 {
            rest /= 5;
            fives += 1;
        }
        if rest != 1 {
            return write!(f, "{n}/{d}");
        }
        let places = twos.max(fives);
        let scale = 10i128.pow(places);
        let scaled = i128::from(n) * (scale / i128::from(d));
        let sign = if scaled < 0 { "-" } else { "" };
        let abs = scaled.abs();
        let (int, frac) = abs.div_rem(&scale);
        let frac = format!("{:0width$}", frac, width = places as usize);
        write!(f, "{sign}{int}.{}", frac.trim_end_matches('0'))
    }
}

impl fmt::Debug for Time {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A time point that may also be `+∞`; used for open-ended state periods.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtTime {
    Finite(Time),
    Infinity,
}

impl ExtTime {
    pub fn finite(self) -> Option<Time> {
        match self {
            ExtTime::Finite(t) => Some(t),
            ExtTime::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtTime::Infinity)
    }

    pub fn add(self, delta: Time) -> ExtTime {
        match self {
            ExtTime::Finite(t) => ExtTime::Finite(t + delta),
            ExtTime::Infinity => ExtTime::Infinity,
        }
    }
}

impl From<Time> for ExtTime {
    fn from(t: Time) -> Self {
        ExtTime::Finite(t)
    }
}

impl PartialOrd for ExtTime {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtTime {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtTime::Finite(a), ExtTime::Finite(b)) => a.cmp(b),
            (ExtTime::Finite(_), ExtTime::Infinity) => Ordering::Less,
            (ExtTime::Infinity, ExtTime::Finite(_)) => Ordering::Greater,
            (ExtTime::Infinity, ExtTime::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialEq<Time> for ExtTime {
    fn eq(&self, other: &Time) -> bool {
        *self == ExtTime::Finite(*other)
    }
}

impl PartialOrd<Time> for ExtTime {
    fn partial_cmp(&self, other: &Time) -> Option<Ordering> {
        Some(self.cmp(&ExtTime::Finite(*other)))
    }
}

impl PartialEq<ExtTime> for Time {
    fn eq(&self, other: &ExtTime) -> bool {
        ExtTime::Finite(*self) == *other
    }
}

impl PartialOrd<ExtTime> for Time {
    fn partial_cmp(&self, other: &ExtTime) -> Option<Ordering> {
        Some(ExtTime::Finite(*self).cmp(other))
    }
}

impl fmt::Display for ExtTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtTime::Finite(t) => fmt::Display::fmt(t, f),
            ExtTime::Infinity => f.write_str("inf"),
        }
    }
}

impl fmt::Debug for ExtTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExtTime {
    type Err = TimeParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "+inf" | "∞" => Ok(ExtTime::Infinity),
            other => other.parse().map(ExtTime::Finite),
        }
    }
}
