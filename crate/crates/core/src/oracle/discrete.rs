use std::collections::HashMap;

use super::OracleError;
use crate::formula::{Formula, TimeBound};

/// A finite discrete trace; step `t` ranges over `1..=len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteTrace {
    names: Vec<String>,
    rows: Vec<Vec<bool>>,
}

impl DiscreteTrace {
    pub fn new(names: Vec<String>, rows: Vec<Vec<bool>>) -> Result<Self, OracleError> {
        if rows.iter().any(|r| r.len() != names.len()) {
            return Err(OracleError::RaggedTrace);
        }
        Ok(DiscreteTrace { names, rows })
    }

    /// One column per proposition; columns must have equal length.
    pub fn from_columns(columns: &[(&str, Vec<bool>)]) -> Result<Self, OracleError> {
        let len = columns.first().map_or(0, |c| c.1.len());
        if columns.iter().any(|c| c.1.len() != len) {
            return Err(OracleError::RaggedTrace);
        }
        let names = columns.iter().map(|c| c.0.to_string()).collect();
        let rows = (0..len).map(|k| columns.iter().map(|c| c.1[k]).collect()).collect();
        Ok(DiscreteTrace { names, rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Values at step `t` (1-based), in [`names`](Self::names) order.
    pub fn row(&self, t: usize) -> &[bool] {
        &self.rows[t - 1]
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PointyOptions {
    /// Steps before the trace start falsify `historically`.
    pub strong_historically: bool,
}

/// Truth of `f` at step `t` of `w` under the weak reading.
pub fn eval_pointy_discrete(f: &Formula, w: &DiscreteTrace, t: i64) -> Result<bool, OracleError> {
    eval_pointy_discrete_with(f, w, t, PointyOptions::default())
}

pub fn eval_pointy_discrete_with(
    f: &Formula,
    w: &DiscreteTrace,
    t: i64,
    opts: PointyOptions,
) -> Result<bool, OracleError> {
    if t < 1 || t as usize > w.len() {
        return Err(OracleError::StepOutOfRange { t, len: w.len() });
    }
    let slot: HashMap<&str, usize> =
        w.names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let ev = Eval { w, slot, opts };
    ev.check(f)?;
    Ok(ev.at(f, t))
}

struct Eval<'a> {
    w: &'a DiscreteTrace,
    slot: HashMap<&'a str, usize>,
    opts: PointyOptions,
}

/// `[lo, hi]` as integers; `hi == None` is unbounded.
fn ints(b: &Option<TimeBound>) -> (i64, Option<i64>) {
    match b {
        None => (0, None),
        Some(b) => (
            b.lower.to_integer().expect("checked"),
            b.upper.map(|u| u.to_integer().expect("checked")),
        ),
    }
}

impl Eval<'_> {
    fn check(&self, f: &Formula) -> Result<(), OracleError> {
        match f {
            Formula::Prop(p) if !self.slot.contains_key(p.as_str()) => {
                return Err(OracleError::UnknownProposition(p.clone()))
            }
            Formula::Since(_, _, Some(b)) | Formula::Once(_, Some(b)) | Formula::Historically(_, Some(b)) => {
                let integral = b.lower.is_integer() && b.upper.map_or(true, |u| u.is_integer());
                if !integral {
                    return Err(OracleError::NonIntegerBound(*b));
                }
            }
            _ => {}
        }
        f.children().into_iter().try_for_each(|c| self.check(c))
    }

    fn at(&self, f: &Formula, t: i64) -> bool {
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Prop(p) => self.w.row(t as usize)[self.slot[p.as_str()]],
            Formula::Not(a) => !self.at(a, t),
            Formula::And(a, b) => self.at(a, t) && self.at(b, t),
            Formula::Or(a, b) => self.at(a, t) || self.at(b, t),
            Formula::Implies(a, b) => !self.at(a, t) || self.at(b, t),
            Formula::Pre(a) => t > 1 && self.at(a, t - 1),
            // ∃t' ≤ t. t−t' ∈ [lo,hi], φ2 at t', φ1 on (t', t]
            Formula::Since(a, b, bound) => {
                let (lo, hi) = ints(bound);
                let mut s = t;
                while s >= 1 {
                    let d = t - s;
                    if hi.is_some_and(|h| d > h) {
                        return false;
                    }
                    if d >= lo && self.at(b, s) {
                        return true;
                    }
                    if !self.at(a, s) {
                        return false;
                    }
                    s -= 1;
                }
                false
            }
            Formula::Once(a, bound) => {
                let (lo, hi) = ints(bound);
                let first = hi.map_or(1, |h| (t - h).max(1));
                (first..=t - lo).any(|s| self.at(a, s))
            }
            Formula::Historically(a, bound) => {
                let (lo, hi) = ints(bound);
                // The window [t−hi, t−lo] reaches step 0 or earlier.
                if self.opts.strong_historically && hi.map_or(true, |h| t - h <= 0) {
                    return false;
                }
                let first = hi.map_or(1, |h| (t - h).max(1));
                (first..=t - lo).all(|s| self.at(a, s))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, TimeModel};

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    fn outputs(f: &str, w: &DiscreteTrace, opts: PointyOptions) -> String {
        let f = parse(f, TimeModel::Discrete).unwrap();
        (1..=w.len() as i64)
            .map(|t| if eval_pointy_discrete_with(&f, w, t, opts).unwrap() { '1' } else { '0' })
            .collect()
    }

    #[test]
    fn timed_since_run() {
        let w = DiscreteTrace::from_columns(&[("p", bits("001111")), ("q", bits("010010"))]).unwrap();
        assert_eq!(outputs("p since[2:3] q", &w, PointyOptions::default()), "000110");
    }

    #[test]
    fn nested_once_run() {
        let w = DiscreteTrace::from_columns(&[("p", bits("100000")), ("q", bits("000010"))]).unwrap();
        assert_eq!(outputs("once[1:2] once[1:2] (p || q)", &w, PointyOptions::default()), "001110");
        let f = parse("p", TimeModel::Discrete).unwrap();
        assert!(!eval_pointy_discrete(&f, &w, 2).unwrap());
    }

    #[test]
    fn historically_weak_and_strong() {
        let w = DiscreteTrace::from_columns(&[("psi", bits("001110"))]).unwrap();
        let weak = PointyOptions::default();
        let strong = PointyOptions { strong_historically: true };
        assert_eq!(outputs("historically[1:2] psi", &w, weak), "100011");
        assert_eq!(outputs("historically[1:2] psi", &w, strong), "000011");
        assert_eq!(outputs("historically psi", &w, weak), "000000");
        let ones = DiscreteTrace::from_columns(&[("psi", bits("111"))]).unwrap();
        assert_eq!(outputs("historically psi", &ones, weak), "111");
        assert_eq!(outputs("historically psi", &ones, strong), "000");
        assert_eq!(outputs("historically[2:inf] psi", &ones, strong), "000");
        assert_eq!(outputs("historically[2:inf] psi", &ones, weak), "111");
    }

    #[test]
    fn errors() {
        let w = DiscreteTrace::from_columns(&[("p", bits("10"))]).unwrap();
        let f = parse("p", TimeModel::Discrete).unwrap();
        assert!(matches!(eval_pointy_discrete(&f, &w, 0), Err(OracleError::StepOutOfRange { .. })));
        assert!(matches!(eval_pointy_discrete(&f, &w, 3), Err(OracleError::StepOutOfRange { .. })));
        let g = parse("q", TimeModel::Discrete).unwrap();
        assert_eq!(eval_pointy_discrete(&g, &w, 1), Err(OracleError::UnknownProposition("q".into())));
        let h = parse("once[0.5:1] p", TimeModel::Dense).unwrap();
        assert!(matches!(eval_pointy_discrete(&h, &w, 1), Err(OracleError::NonIntegerBound(_))));
    }
}
