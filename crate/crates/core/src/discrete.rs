//! Discrete-time sequential networks.
//!
//! Every unique subformula owns one state variable. Untimed operators keep
//! a Boolean; timed `once`, `historically` and `since` keep the set of
//! future steps at which they will hold (or, for `historically`, fail),
//! stored as forward-shifted windows `[k+a, k+b]`.

use std::collections::HashMap;

use thiserror::Error;

use crate::formula::{Formula, NodeKind, SubformulaDag, TimeBound};
use crate::interval::{IntInterval, IntIntervalSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiscreteError {
    #[error("bound {0} is not a pair of integers")]
    NonIntegerBound(TimeBound),
    #[error("no value given for proposition `{0}`")]
    MissingProposition(String),
    #[error("expected {expected} input values, got {found}")]
    InputWidth { expected: usize, found: usize },
    #[error("strong historically must be chosen before the first step")]
    AlreadyRunning,
}

/// Integer bound `[lo, hi]`; `hi == None` is `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct IntBound {
    lo: i64,
    hi: Option<i64>,
}

impl IntBound {
    fn from_bound(b: &TimeBound) -> Result<Self, DiscreteError> {
        let lo = b.lower.to_integer().ok_or(DiscreteError::NonIntegerBound(*b))?;
        let hi = match b.upper {
            Some(u) => Some(u.to_integer().ok_or(DiscreteError::NonIntegerBound(*b))?),
            None => None,
        };
        Ok(IntBound { lo, hi })
    }

    fn window(&self, k: i64) -> IntInterval {
        IntInterval::new(k + self.lo, self.hi.map(|h| k + h))
    }
}

#[derive(Debug, Clone, Copy)]
enum Op {
    Const(bool),
    Input(usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Pre(usize),
    Since(usize, usize),
    Once(usize),
    Historically(usize),
    TimedSince(usize, usize, IntBound),
    TimedOnce(usize, IntBound),
    TimedHistorically(usize, IntBound),
}

#[derive(Debug, Clone)]
enum State {
    None,
    Bool(bool),
    Set(IntIntervalSet),
}

/// A compiled discrete monitor. Inputs are fed one step at a time; the
/// first step is `k = 1`.
#[derive(Debug, Clone)]
pub struct DiscreteNetwork {
    dag: SubformulaDag,
    props: Vec<String>,
    ops: Vec<Op>,
    states: Vec<State>,
    out: Vec<bool>,
    k: i64,
    strong: bool,
    peak: usize,
}

impl DiscreteNetwork {
    pub fn compile(f: &Formula) -> Result<Self, DiscreteError> {
        let dag = f.build_dag();
        let props = f.propositions();
        let slot: HashMap<&str, usize> =
            props.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
        let mut ops = Vec::with_capacity(dag.len());
        for node in dag.nodes() {
            let op = match node {
                NodeKind::True => Op::Const(true),
                NodeKind::False => Op::Const(false),
                NodeKind::Prop(p) => Op::Input(slot[p.as_str()]),
                NodeKind::Not(a) => Op::Not(*a),
                NodeKind::And(a, b) => Op::And(*a, *b),
                NodeKind::Or(a, b) => Op::Or(*a, *b),
                NodeKind::Implies(a, b) => Op::Implies(*a, *b),
                NodeKind::Pre(a) => Op::Pre(*a),
                NodeKind::Since(a, b, None) => Op::Since(*a, *b),
                NodeKind::Once(a, None) => Op::Once(*a),
                NodeKind::Historically(a, None) => Op::Historically(*a),
                NodeKind::Since(a, b, Some(bd)) => Op::TimedSince(*a, *b, IntBound::from_bound(bd)?),
                NodeKind::Once(a, Some(bd)) => Op::TimedOnce(*a, IntBound::from_bound(bd)?),
                NodeKind::Historically(a, Some(bd)) => {
                    Op::TimedHistorically(*a, IntBound::from_bound(bd)?)
                }
            };
            ops.push(op);
        }
        let n = ops.len();
        let mut net = DiscreteNetwork {
            dag,
            props,
            ops,
            states: vec![State::None; n],
            out: vec![false; n],
            k: 0,
            strong: false,
            peak: 0,
        };
        net.reset();
        Ok(net)
    }

    /// Proposition names in the order [`step`](Self::step) expects them.
    pub fn propositions(&self) -> &[String] {
        &self.props
    }

    pub fn dag(&self) -> &SubformulaDag {
        &self.dag
    }

    /// Number of steps consumed so far.
    pub fn steps(&self) -> i64 {
        self.k
    }

    /// Restores the initial state, keeping the compiled structure and the
    /// strong-historically choice.
    pub fn reset(&mut self) {
        self.k = 0;
        self.peak = 0;
        self.out.iter_mut().for_each(|v| *v = false);
        for (state, op) in self.states.iter_mut().zip(&self.ops) {
            *state = match op {
                Op::Pre(_) | Op::Since(..) | Op::Once(_) => State::Bool(false),
                // Weak reading: holds vacuously before the trace starts.
                Op::Historically(_) => State::Bool(!self.strong),
                Op::TimedSince(..) | Op::TimedOnce(..) => State::Set(IntIntervalSet::new()),
                Op::TimedHistorically(_, bd) => State::Set(if self.strong {
                    IntIntervalSet::singleton(IntInterval::new(0, bd.hi))
                } else {
                    IntIntervalSet::new()
                }),
                _ => State::None,
            };
        }
    }

    /// Treat steps before the trace start as violations of `historically`.
    pub fn set_strong_historically(&mut self, enabled: bool) -> Result<(), DiscreteError> {
        if self.k > 0 {
            return Err(DiscreteError::AlreadyRunning);
        }
        self.strong = enabled;
        self.reset();
        Ok(())
    }

    /// Advances one step. `values` follows [`propositions`](Self::propositions).
    pub fn step(&mut self, values: &[bool]) -> Result<bool, DiscreteError> {
        if values.len() != self.props.len() {
            return Err(DiscreteError::InputWidth { expected: self.props.len(), found: values.len() });
        }
        Ok(self.advance(values))
    }

    /// Advances one step with named inputs; extra names are ignored.
    pub fn step_map(&mut self, values: &HashMap<String, bool>) -> Result<bool, DiscreteError> {
        let row = self
            .props
            .iter()
            .map(|p| values.get(p).copied().ok_or_else(|| DiscreteError::MissingProposition(p.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.advance(&row))
    }

    fn advance(&mut self, input: &[bool]) -> bool {
        self.k += 1;
        let k = self.k;
        let mut intervals = 0;
        for i in 0..self.ops.len() {
            let out = &self.out;
            let v = match (self.ops[i], &mut self.states[i]) {
                (Op::Const(c), _) => c,
                (Op::Input(s), _) => input[s],
                (Op::Not(a), _) => !out[a],
                (Op::And(a, b), _) => out[a] && out[b],
                (Op::Or(a, b), _) => out[a] || out[b],
                (Op::Implies(a, b), _) => !out[a] || out[b],
                (Op::Pre(a), State::Bool(prev)) => std::mem::replace(prev, out[a]),
                (Op::Since(a, b), State::Bool(v)) => {
                    *v = out[b] || (out[a] && *v);
                    *v
                }
                (Op::Once(a), State::Bool(v)) => {
                    *v = out[a] || *v;
                    *v
                }
                (Op::Historically(a), State::Bool(v)) => {
                    *v = out[a] && *v;
                    *v
                }
                (Op::TimedOnce(a, bd), State::Set(set)) => {
                    if out[a] {
                        set.insert(bd.window(k));
                    }
                    set.prune_below(k);
                    intervals += set.interval_count();
                    set.contains(k)
                }
                (Op::TimedHistorically(a, bd), State::Set(set)) => {
                    if !out[a] {
                        set.insert(bd.window(k));
                    }
                    set.prune_below(k);
                    intervals += set.interval_count();
                    !set.contains(k)
                }
                (Op::TimedSince(a, b, bd), State::Set(set)) => {
                    match (out[a], out[b]) {
                        (true, true) => set.insert(bd.window(k)),
                        (false, true) => *set = IntIntervalSet::singleton(bd.window(k)),
                        (true, false) => {}
                        (false, false) => set.clear(),
                    }
                    set.prune_below(k);
                    intervals += set.interval_count();
                    set.contains(k)
                }
                (op, _) => unreachable!("state does not match {op:?}"),
            };
            self.out[i] = v;
        }
        self.peak = self.peak.max(intervals);
        self.out[self.dag.root()]
    }

    /// Output of DAG node `i` at the current step.
    pub fn node_output(&self, i: usize) -> bool {
        self.out[i]
    }

    /// Forward-shifted state of a timed DAG node.
    pub fn timed_state(&self, i: usize) -> Option<&IntIntervalSet> {
        match &self.states[i] {
            State::Set(s) => Some(s),
            _ => None,
        }
    }

    /// Intervals currently held by all timed nodes together.
    pub fn interval_count(&self) -> usize {
        self.states
            .iter()
            .map(|s| match s {
                State::Set(s) => s.interval_count(),
                _ => 0,
            })
            .sum()
    }

    /// Largest [`interval_count`](Self::interval_count) seen after any step.
    pub fn peak_interval_count(&self) -> usize {
        self.peak
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, TimeModel};

    fn net(text: &str) -> DiscreteNetwork {
        DiscreteNetwork::compile(&parse(text, TimeModel::Discrete).unwrap()).unwrap()
    }

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    fn run(n: &mut DiscreteNetwork, cols: &[&str]) -> String {
        let len = cols[0].len();
        (0..len)
            .map(|k| {
                let row: Vec<bool> = cols.iter().map(|c| bits(c)[k]).collect();
                if n.step(&row).unwrap() { '1' } else { '0' }
            })
            .collect()
    }

    #[test]
    fn untimed_since_network() {
        let mut n = net("(p || q) since !r");
        assert_eq!(n.dag().nodes().iter().filter(|x| !x.is_proposition()).count(), 3);
        // props sorted: p, q, r
        assert_eq!(run(&mut n, &["0000", "0000", "1011"]), "0100");
        let mut n = net("(p || q) since !r");
        assert_eq!(run(&mut n, &["0110", "0000", "0111"]), "1110");
    }

    #[test]
    fn untimed_once_and_historically() {
        let mut n = net("once p");
        assert_eq!(run(&mut n, &["00100"]), "00111");
        let mut n = net("historically p");
        assert_eq!(run(&mut n, &["11011"]), "11000");
        n.reset();
        n.set_strong_historically(true).unwrap();
        assert_eq!(run(&mut n, &["111"]), "000");
    }

    #[test]
    fn pre_is_false_at_the_first_step() {
        let mut n = net("pre p");
        assert_eq!(run(&mut n, &["1101"]), "0110");
    }

    #[test]
    fn once_with_unbounded_upper_end() {
        let mut n = net("once[2:inf] p");
        assert_eq!(run(&mut n, &["100000"]), "001111");
        assert_eq!(n.timed_state(1).unwrap().to_string(), "[6,inf]");
    }

    #[test]
    fn since_with_zero_lower_bound_accepts_current_step() {
        let mut n = net("p since[0:2] q");
        assert_eq!(run(&mut n, &["01110", "10000"]), "11100");
    }

    #[test]
    fn missing_inputs_are_reported() {
        let mut n = net("p && q");
        let m: HashMap<String, bool> = [("p".to_string(), true)].into();
        assert_eq!(n.step_map(&m), Err(DiscreteError::MissingProposition("q".into())));
        assert!(matches!(n.step(&[true]), Err(DiscreteError::InputWidth { .. })));
    }

    #[test]
    fn strong_mode_cannot_change_mid_run() {
        let mut n = net("historically[1:2] p");
        n.step(&[true]).unwrap();
        assert_eq!(n.set_strong_historically(true), Err(DiscreteError::AlreadyRunning));
    }

    #[test]
    fn fractional_bounds_are_rejected() {
        let f = parse("once[0.5:2] p", TimeModel::Dense).unwrap();
        assert!(matches!(DiscreteNetwork::compile(&f), Err(DiscreteError::NonIntegerBound(_))));
    }
}
