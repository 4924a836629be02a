//! Benchmark properties, their trace generators, and timing runners.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dense::{ChunkBuilder, DenseNetwork};
use crate::discrete::DiscreteNetwork;
use crate::formula::{parse, Formula, TimeModel};
use crate::time::Time;

/// The benchmark properties.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Property {
    /// `historically((r && !q && once q) -> (p since[a:b] q))`
    Qpr(i64, i64),
    /// `p since[a:b] q` with both operands always true
    Pandq(i64, i64),
    /// `p since[b:b] q` with `q` true at every other step
    Delay(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown property `{0}` (expected qpr(a,b), pandq(a,b) or delay(b))")]
pub struct PropertyParseError(String);

impl Property {
    pub fn formula_text(&self) -> String {
        match *self {
            Property::Qpr(a, b) => format!("historically((r && !q && once q) -> (p since[{a}:{b}] q))"),
            Property::Pandq(a, b) => format!("p since[{a}:{b}] q"),
            // A point bound keeps one singleton window per pulse; with a
            // wider bound the windows of successive pulses would merge.
            Property::Delay(b) => format!("p since[{b}:{b}] q"),
        }
    }

    pub fn formula(&self) -> Formula {
        parse(&self.formula_text(), TimeModel::Discrete).expect("benchmark formulas parse")
    }

    pub fn names(&self) -> Vec<String> {
        let names: &[&str] = match self {
            Property::Qpr(..) => &["p", "q", "r"],
            _ => &["p", "q"],
        };
        names.iter().map(|s| s.to_string()).collect()
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::Qpr(a, b) => write!(f, "qpr({a},{b})"),
            Property::Pandq(a, b) => write!(f, "pandq({a},{b})"),
            Property::Delay(b) => write!(f, "delay({b})"),
        }
    }
}

impl FromStr for Property {
    type Err = PropertyParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PropertyParseError(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (name, rest) = compact.split_once('(').ok_or_else(bad)?;
        let args = rest.strip_suffix(')').ok_or_else(bad)?;
        let nums = args
            .split(',')
            .map(|x| x.parse::<i64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        let valid = |a: i64, b: i64| a >= 0 && a <= b;
        match (name, nums.as_slice()) {
            ("qpr", &[a, b]) if valid(a, b) => Ok(Property::Qpr(a, b)),
            ("pandq", &[a, b]) if valid(a, b) => Ok(Property::Pandq(a, b)),
            ("delay", &[b]) if b >= 0 => Ok(Property::Delay(b)),
            _ => Err(bad()),
        }
    }
}

/// A property plus the trace to run it on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchSpec {
    pub property: Property,
    pub len: usize,
    pub seed: u64,
    /// Probabilities of `p`, `q`, `r` being true in qpr traces.
    pub densities: [f64; 3],
}

impl BenchSpec {
    pub fn new(property: Property, len: usize) -> Self {
        BenchSpec { property, len, seed: 0, densities: [0.5, 0.1, 0.1] }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// The whole trace, row-major, one byte (0/1) per value.
    pub fn generate(&self) -> Trace {
        let names = self.property.names();
        let width = names.len();
        let mut data = vec![0u8; self.len * width];
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for (k, row) in data.chunks_mut(width).enumerate() {
            let step = k + 1;
            match self.property {
                Property::Pandq(..) => row.fill(1),
                Property::Delay(_) => {
                    row[0] = 1;
                    row[1] = (step % 2 == 1) as u8;
                }
                Property::Qpr(..) => {
                    for (v, &d) in row.iter_mut().zip(&self.densities) {
                        *v = rng.gen_bool(d) as u8;
                    }
                }
            }
        }
        Trace { names, width, data }
    }
}

/// A generated trace in compact form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub names: Vec<String>,
    pub width: usize,
    pub data: Vec<u8>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.data.len() / self.width
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> + '_ {
        self.data.chunks(self.width)
    }

    /// `p` always true, `q` alternating in runs of `run` steps.
    pub fn stuttering(len: usize, run: usize) -> Trace {
        let mut data = Vec::with_capacity(2 * len);
        for k in 0..len {
            data.push(1);
            data.push(((k / run) % 2 == 0) as u8);
        }
        Trace { names: vec!["p".into(), "q".into()], width: 2, data }
    }

    /// Discrete CSV: a header of names, then one 0/1 row per step.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{}", self.names.join(","))?;
        let mut line = String::with_capacity(2 * self.width);
        for row in self.rows() {
            line.clear();
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    line.push(',');
                }
                line.push(if *v == 1 { '1' } else { '0' });
            }
            line.push('\n');
            w.write_all(line.as_bytes())?;
        }
        Ok(())
    }
}

/// Outcome of one timed run.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub label: String,
    pub steps: usize,
    pub elapsed: Duration,
    pub peak_intervals: usize,
    /// Steps (discrete) or time units (dense) at which the output held.
    pub true_count: u64,
}

impl BenchReport {
    pub fn steps_per_sec(&self) -> f64 {
        self.steps as f64 / self.elapsed.as_secs_f64().max(1e-9)
    }

    pub const CSV_HEADER: &'static str = "label,steps,seconds,steps_per_sec,peak_intervals,true_count";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.6},{:.0},{},{}",
            self.label,
            self.steps,
            self.elapsed.as_secs_f64(),
            self.steps_per_sec(),
            self.peak_intervals,
            self.true_count
        )
    }
}

/// Runs the discrete engine over `trace`, timing only the monitor.
pub fn run_discrete(label: &str, f: &Formula, trace: &Trace) -> BenchReport {
    let mut net = DiscreteNetwork::compile(f).expect("integer bounds");
    let order: Vec<usize> = net
        .propositions()
        .iter()
        .map(|p| trace.names.iter().position(|n| n == p).expect("trace has every proposition"))
        .collect();
    let mut row = vec![false; order.len()];
    let mut trues = 0u64;
    let start = Instant::now();
    for values in trace.rows() {
        for (slot, &col) in row.iter_mut().zip(&order) {
            *slot = values[col] == 1;
        }
        trues += net.step(&row).expect("width matches") as u64;
    }
    let elapsed = start.elapsed();
    BenchReport {
        label: label.to_string(),
        steps: trace.len(),
        elapsed,
        peak_intervals: net.peak_interval_count(),
        true_count: trues,
    }
}

/// Runs the dense engine over `trace`, reading step `k` as the unit period
/// `(k−1, k)` and grouping `chunk_rows` rows per chunk. Chunk building is
/// part of the measured time.
pub fn run_dense(label: &str, f: &Formula, trace: &Trace, chunk_rows: usize) -> BenchReport {
    let mut net = DenseNetwork::compile(f, Time::ZERO).expect("no pre");
    let mut builder = ChunkBuilder::new(trace.names.clone(), Time::ZERO, chunk_rows);
    let mut row = vec![false; trace.width];
    let mut peak = 0;
    let mut covered = Time::ZERO;
    let mut feed = |net: &mut DenseNetwork, chunk| {
        let out = net.feed_chunk(&chunk).expect("chunks are contiguous");
        for p in out.iter() {
            covered = covered + (p.end.finite().expect("bounded") - p.start);
        }
        peak = peak.max(net.period_count());
    };
    let start = Instant::now();
    for (k, values) in trace.rows().enumerate() {
        row.clear();
        row.extend(values.iter().map(|&v| v == 1));
        if let Some(chunk) = builder.push(Time::from_int(k as i64 + 1), &row).expect("monotone") {
            feed(&mut net, chunk);
        }
    }
    if let Some(chunk) = builder.flush() {
        feed(&mut net, chunk);
    }
    let elapsed = start.elapsed();
    BenchReport {
        label: label.to_string(),
        steps: trace.len(),
        elapsed,
        peak_intervals: peak,
        true_count: covered.to_integer().unwrap_or(0).max(0) as u64,
    }
}

/// Median of `runs` timings of `f`.
pub fn median_of<F: FnMut() -> BenchReport>(runs: usize, mut f: F) -> BenchReport {
    let mut all: Vec<BenchReport> = (0..runs.max(1)).map(|_| f()).collect();
    all.sort_by_key(|r| r.elapsed);
    all.swap_remove(all.len() / 2)
}
