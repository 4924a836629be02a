//! Point-free dense-time networks.
//!
//! Signals are sets of open periods. Boolean nodes are set operations over
//! the current chunk's span; a `since` node walks the synchronized segments
//! of its operands and carries its forward-shifted state `V` from one chunk
//! to the next, so outputs never depend on how the input was chunked.

use std::collections::HashMap;

use thiserror::Error;

use crate::formula::{Formula, FormulaError, NodeKind, SubformulaDag};
use crate::interval::{synchronize_sets, Chunk, Period, PeriodSet, Segment};
use crate::time::{ExtTime, Time};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DenseError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("chunk has no signal `{0}`")]
    MissingProposition(String),
    #[error("chunk starts at {found} but the monitor clock is at {expected}")]
    ClockMismatch { expected: Time, found: Time },
    #[error("the stream has already been finished")]
    Finished,
    #[error("time {found} does not advance past {previous}")]
    NonMonotone { previous: Time, found: Time },
    #[error("expected {expected} values per row, got {found}")]
    Width { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy)]
enum Op {
    Const(bool),
    Input(usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    /// `a since_(lo,hi) b`; `None` when the bound is empty (`lo == hi`).
    Since(usize, usize, Option<(Time, ExtTime)>),
}

/// State of one since node after one local step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SinceStep {
    pub node: usize,
    pub start: Time,
    pub end: Time,
    pub left: bool,
    pub right: bool,
    pub state: PeriodSet,
}

/// A compiled dense-time monitor.
#[derive(Debug, Clone)]
pub struct DenseNetwork {
    dag: SubformulaDag,
    props: Vec<String>,
    ops: Vec<Op>,
    states: Vec<PeriodSet>,
    clock: Time,
    finished: bool,
    tracing: bool,
    trace: Vec<SinceStep>,
}

impl DenseNetwork {
    /// Compiles `f` after rewriting `once`/`historically` into `since`.
    /// The stream starts at `t0`.
    pub fn compile(f: &Formula, t0: Time) -> Result<Self, DenseError> {
        let f = f.desugar_for_dense()?;
        let dag = f.build_dag();
        let props = f.propositions();
        let slot: HashMap<&str, usize> =
            props.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
        let ops = dag
            .nodes()
            .iter()
            .map(|node| match node {
                NodeKind::True => Op::Const(true),
                NodeKind::False => Op::Const(false),
                NodeKind::Prop(p) => Op::Input(slot[p.as_str()]),
                NodeKind::Not(a) => Op::Not(*a),
                NodeKind::And(a, b) => Op::And(*a, *b),
                NodeKind::Or(a, b) => Op::Or(*a, *b),
                NodeKind::Implies(a, b) => Op::Implies(*a, *b),
                NodeKind::Since(a, b, bound) => {
                    let (lo, hi) = match bound {
                        Some(bd) => (bd.lower, bd.upper.map_or(ExtTime::Infinity, ExtTime::Finite)),
                        None => (Time::ZERO, ExtTime::Infinity),
                    };
                    // a < d < a has no solution: the operator never holds.
                    Op::Since(*a, *b, (hi > lo).then_some((lo, hi)))
                }
                NodeKind::Pre(_) | NodeKind::Once(..) | NodeKind::Historically(..) => {
                    unreachable!("removed by desugaring")
                }
            })
            .collect::<Vec<_>>();
        let n = ops.len();
        Ok(DenseNetwork {
            dag,
            props,
            ops,
            states: vec![PeriodSet::new(); n],
            clock: t0,
            finished: false,
            tracing: false,
            trace: Vec::new(),
        })
    }

    pub fn propositions(&self) -> &[String] {
        &self.props
    }

    /// The DAG of the desugared formula.
    pub fn dag(&self) -> &SubformulaDag {
        &self.dag
    }

    /// End of the last consumed chunk.
    pub fn clock(&self) -> Time {
        self.clock
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    /// Carried state `V` of a since node.
    pub fn since_state(&self, i: usize) -> Option<&PeriodSet> {
        matches!(self.ops[i], Op::Since(..)).then(|| &self.states[i])
    }

    /// Periods held across all since states.
    pub fn period_count(&self) -> usize {
        self.states.iter().map(PeriodSet::len).sum()
    }

    /// Record every local since step of the following chunks.
    pub fn set_tracing(&mut self, on: bool) {
        self.tracing = on;
        self.trace.clear();
    }

    /// Local steps of the last chunk when tracing is on.
    pub fn trace(&self) -> &[SinceStep] {
        &self.trace
    }

    /// Consumes the next chunk and returns the root's true periods inside
    /// its span.
    pub fn feed_chunk(&mut self, chunk: &Chunk) -> Result<PeriodSet, DenseError> {
        if self.finished {
            return Err(DenseError::Finished);
        }
        if chunk.start() != self.clock {
            return Err(DenseError::ClockMismatch { expected: self.clock, found: chunk.start() });
        }
        let columns = self
            .props
            .iter()
            .map(|p| chunk.index_of(p).ok_or_else(|| DenseError::MissingProposition(p.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let span = chunk.span();
        let (start, end) = (chunk.start(), chunk.end());
        self.trace.clear();
        let mut out: Vec<PeriodSet> = Vec::with_capacity(self.ops.len());
        for i in 0..self.ops.len() {
            let v = match self.ops[i] {
                Op::Const(true) => PeriodSet::single(span),
                Op::Const(false) => PeriodSet::new(),
                Op::Input(s) => chunk.column_at(columns[s]),
                Op::Not(a) => complement(&out[a], &span),
                Op::And(a, b) => out[a].intersect(&out[b]),
                Op::Or(a, b) => out[a].union(&out[b]),
                Op::Implies(a, b) => complement(&out[a], &span).union(&out[b]),
                Op::Since(_, _, None) => PeriodSet::new(),
                Op::Since(a, b, Some((lo, hi))) => {
                    let pieces = synchronize_sets(start, end, &out[a], &out[b]);
                    let state = &mut self.states[i];
                    let mut y = PeriodSet::new();
                    for p in pieces {
                        state.prune_before(p.start);
                        match (p.left, p.right) {
                            (true, true) => {
                                if let Some(w) = Period::try_new(p.start + lo, hi.add(p.end)) {
                                    state.insert(w);
                                }
                            }
                            (false, true) => {
                                state.clear();
                                if let Some(w) = Period::try_new(p.end + lo, hi.add(p.end)) {
                                    state.insert(w);
                                }
                            }
                            (true, false) => {}
                            (false, false) => state.clear(),
                        }
                        let local = Period::new(p.start, p.end);
                        for q in state.iter() {
                            if q.start >= p.end {
                                break;
                            }
                            if let Some(x) = q.intersect(&local) {
                                y.insert(x);
                            }
                        }
                        if self.tracing {
                            self.trace.push(SinceStep {
                                node: i,
                                start: p.start,
                                end: p.end,
                                left: p.left,
                                right: p.right,
                                state: state.clone(),
                            });
                        }
                    }
                    y
                }
            };
            out.push(v);
        }
        self.clock = end;
        Ok(out.swap_remove(self.dag.root()).clip(&span))
    }

    /// Ends the stream; later chunks are rejected.
    pub fn finish(&mut self) -> Result<(), DenseError> {
        if self.finished {
            return Err(DenseError::Finished);
        }
        self.finished = true;
        Ok(())
    }
}

fn complement(s: &PeriodSet, span: &Period) -> PeriodSet {
    s.complement(span).expect("node outputs stay inside the chunk span")
}

/// Groups timestamped rows into chunks.
///
/// A row `(t, values)` means the values hold on `(previous t, t)`. Rows with
/// the same values as their predecessor extend its segment instead of
/// adding a new one.
#[derive(Debug, Clone)]
pub struct ChunkBuilder {
    names: Vec<String>,
    chunk_rows: usize,
    previous: Time,
    rows: usize,
    segments: Vec<Segment>,
}

impl ChunkBuilder {
    pub fn new(names: Vec<String>, t0: Time, chunk_rows: usize) -> Self {
        assert!(chunk_rows >= 1, "chunks need at least one row");
        ChunkBuilder { names, chunk_rows, previous: t0, rows: 0, segments: Vec::new() }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Adds a row; returns a chunk once `chunk_rows` rows have accumulated.
    #[inline]
    pub fn push(&mut self, t: Time, values: &[bool]) -> Result<Option<Chunk>, DenseError> {
        if values.len() != self.names.len() {
            return Err(DenseError::Width { expected: self.names.len(), found: values.len() });
        }
        if t <= self.previous {
            return Err(DenseError::NonMonotone { previous: self.previous, found: t });
        }
        // Stuttering rows are the hot path; compare without calling memcmp.
        match self.segments.last_mut() {
            Some(last) if last.values.iter().zip(values).all(|(a, b)| a == b) => last.end = t,
            _ => self.segments.push(Segment::new(self.previous, t, values.to_vec())),
        }
        self.previous = t;
        self.rows += 1;
        Ok(if self.rows >= self.chunk_rows { self.flush() } else { None })
    }

    /// Emits whatever has accumulated, if anything.
    pub fn flush(&mut self) -> Option<Chunk> {
        if self.segments.is_empty() {
            return None;
        }
        self.rows = 0;
        let segments = std::mem::take(&mut self.segments);
        Some(Chunk::new(self.names.clone(), segments).expect("rows tile the span"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, TimeModel};

    fn t(n: i64) -> Time {
        Time::from_int(n)
    }

    fn compile(text: &str) -> DenseNetwork {
        DenseNetwork::compile(&parse(text, TimeModel::Dense).unwrap(), Time::ZERO).unwrap()
    }

    fn chunk(start: i64, end: i64, cols: &[(&str, &[(i64, i64)])]) -> Chunk {
        let cols = cols.iter().map(|(n, p)| (n.to_string(), PeriodSet::from_ints(p))).collect();
        Chunk::from_columns(t(start), t(end), cols).unwrap()
    }

    #[test]
    fn boolean_layer_matches_worked_example() {
        let c = chunk(0, 20, &[("p", &[(2, 4), (7, 10), (11, 17)]), ("q", &[(3, 8), (14, 15)])]);
        let run = |f: &str| compile(f).feed_chunk(&c).unwrap().to_string();
        assert_eq!(run("!p"), "{(0,2),(4,7),(10,11),(17,20)}");
        assert_eq!(run("p && q"), "{(3,4),(7,8),(14,15)}");
        assert_eq!(run("p || q"), "{(2,10),(11,17)}");
    }

    #[test]
    fn desugared_operators() {
        let c = chunk(0, 10, &[("p", &[(1, 2)])]);
        assert_eq!(compile("once[1:2] p").feed_chunk(&c).unwrap(), PeriodSet::from_ints(&[(2, 4)]));
        assert_eq!(
            compile("historically[1:2] !p").feed_chunk(&c).unwrap(),
            PeriodSet::from_ints(&[(0, 2), (4, 10)])
        );
        assert!(matches!(
            DenseNetwork::compile(&parse("pre p", TimeModel::Dense).unwrap(), Time::ZERO),
            Err(DenseError::Formula(FormulaError::PreInDense))
        ));
    }

    #[test]
    fn false_right_operand_never_holds() {
        let mut n = compile("p since[1:3] q");
        let out = n.feed_chunk(&chunk(0, 10, &[("p", &[(0, 10)]), ("q", &[])])).unwrap();
        assert!(out.is_empty());
        assert!(n.since_state(n.dag().root()).unwrap().is_empty());
    }

    #[test]
    fn point_bound_is_empty() {
        let mut n = compile("p since[2:2] q");
        let out = n.feed_chunk(&chunk(0, 10, &[("p", &[(0, 10)]), ("q", &[(0, 10)])])).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn clock_and_finish() {
        let mut n = compile("p");
        let c = chunk(0, 5, &[("p", &[(1, 2)])]);
        n.feed_chunk(&c).unwrap();
        assert_eq!(n.clock(), t(5));
        assert!(matches!(n.feed_chunk(&c), Err(DenseError::ClockMismatch { .. })));
        n.finish().unwrap();
        assert_eq!(n.clock(), t(5));
        assert_eq!(n.finish(), Err(DenseError::Finished));
        assert_eq!(n.feed_chunk(&chunk(5, 6, &[("p", &[])])), Err(DenseError::Finished));
        let mut fresh = compile("p");
        assert!(fresh.finish().is_ok());
    }

    #[test]
    fn missing_signal() {
        let mut n = compile("p && r");
        let err = n.feed_chunk(&chunk(0, 5, &[("p", &[(1, 2)])])).unwrap_err();
        assert_eq!(err, DenseError::MissingProposition("r".into()));
    }

    #[test]
    fn builder_merges_stuttering_rows() {
        let mut b = ChunkBuilder::new(vec!["p".into()], t(0), 3);
        assert!(b.push(t(1), &[true]).unwrap().is_none());
        assert!(b.push(t(2), &[true]).unwrap().is_none());
        let c = b.push(t(3), &[false]).unwrap().unwrap();
        assert_eq!(c.segments().len(), 2);
        assert_eq!(c.column("p").unwrap(), PeriodSet::from_ints(&[(0, 2)]));
        assert!(matches!(b.push(t(3), &[true]), Err(DenseError::NonMonotone { .. })));
        assert!(b.flush().is_none());
        b.push(t(4), &[true]).unwrap();
        assert_eq!(b.flush().unwrap().span(), Period::ints(3, 4));
    }
}
