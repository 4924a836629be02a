//! Past-MTL formulas: syntax tree, concrete syntax, and the shared
//! subformula DAG that both engines compile from.

mod dag;
mod parser;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::time::Time;

pub use dag::{NodeKind, SubformulaDag};
pub use parser::{parse, ParseError};

/// Which engine a formula is destined for. Bounds share one surface syntax
/// but discrete bounds are closed integer intervals `[a,b]` while dense
/// bounds are open rational periods `(a,b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TimeModel {
    Discrete,
    Dense,
}

/// Duration constraint of a timed operator. `upper == None` means `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TimeBound {
    pub lower: Time,
    pub upper: Option<Time>,
}

impl TimeBound {
    pub fn new(lower: Time, upper: Option<Time>) -> Self {
        debug_assert!(upper.map_or(true, |u| lower <= u));
        TimeBound { lower, upper }
    }

    pub fn finite(lower: i64, upper: i64) -> Self {
        TimeBound::new(Time::from_int(lower), Some(Time::from_int(upper)))
    }

    /// `[0, ∞)`, which is the same as no bound at all.
    pub fn is_unbounded(&self) -> bool {
        self.lower == Time::ZERO && self.upper.is_none()
    }
}

impl fmt::Display for TimeBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.upper {
            Some(u) => write!(f, "[{}:{}]", self.lower, u),
            None => write!(f, "[{}:inf]", self.lower),
        }
    }
}

/// Abstract syntax of past MTL.
///
/// A missing bound on `Since`, `Once` or `Historically` means the untimed
/// operator, i.e. the bound `[0, ∞)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Prop(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Pre(Box<Formula>),
    Since(Box<Formula>, Box<Formula>, Option<TimeBound>),
    Once(Box<Formula>, Option<TimeBound>),
    Historically(Box<Formula>, Option<TimeBound>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("`pre` has no meaning over dense time")]
    PreInDense,
}

impl Formula {
    pub fn prop(name: impl Into<String>) -> Self {
        Formula::Prop(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn pre(f: Formula) -> Self {
        Formula::Pre(Box::new(f))
    }

    pub fn since(a: Formula, b: Formula, bound: Option<TimeBound>) -> Self {
        Formula::Since(Box::new(a), Box::new(b), normalize(bound))
    }

    pub fn once(f: Formula, bound: Option<TimeBound>) -> Self {
        Formula::Once(Box::new(f), normalize(bound))
    }

    pub fn historically(f: Formula, bound: Option<TimeBound>) -> Self {
        Formula::Historically(Box::new(f), normalize(bound))
    }

    /// Number of syntax-tree nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::True | Formula::False | Formula::Prop(_) => vec![],
            Formula::Not(f) | Formula::Pre(f) | Formula::Once(f, _) | Formula::Historically(f, _) => {
                vec![f]
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Since(a, b, _) => vec![a, b],
        }
    }

    /// Proposition names, sorted and deduplicated.
    pub fn propositions(&self) -> Vec<String> {
        fn walk<'a>(f: &'a Formula, out: &mut BTreeSet<&'a str>) {
            if let Formula::Prop(p) = f {
                out.insert(p);
            }
            for c in f.children() {
                walk(c, out);
            }
        }
        let mut set = BTreeSet::new();
        walk(self, &mut set);
        set.into_iter().map(str::to_string).collect()
    }

    pub fn contains_pre(&self) -> bool {
        matches!(self, Formula::Pre(_)) || self.children().iter().any(|c| c.contains_pre())
    }

    /// Rewrites `once` and `historically` into `since`, which is all the
    /// dense engine implements:
    /// `once_I f = true since_I f` and `historically_I f = !(true since_I !f)`.
    pub fn desugar_for_dense(&self) -> Result<Formula, FormulaError> {
        Ok(match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Prop(p) => Formula::Prop(p.clone()),
            Formula::Not(f) => Formula::not(f.desugar_for_dense()?),
            Formula::And(a, b) => Formula::and(a.desugar_for_dense()?, b.desugar_for_dense()?),
            Formula::Or(a, b) => Formula::or(a.desugar_for_dense()?, b.desugar_for_dense()?),
            Formula::Implies(a, b) => {
                Formula::implies(a.desugar_for_dense()?, b.desugar_for_dense()?)
            }
            Formula::Pre(_) => return Err(FormulaError::PreInDense),
            Formula::Since(a, b, bound) => {
                Formula::since(a.desugar_for_dense()?, b.desugar_for_dense()?, *bound)
            }
            Formula::Once(f, bound) => Formula::since(Formula::True, f.desugar_for_dense()?, *bound),
            Formula::Historically(f, bound) => Formula::not(Formula::since(
                Formula::True,
                Formula::not(f.desugar_for_dense()?),
                *bound,
            )),
        })
    }

    pub fn build_dag(&self) -> SubformulaDag {
        SubformulaDag::build(self)
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            Formula::Since(..) => 4,
            Formula::Not(_) | Formula::Pre(_) | Formula::Once(..) | Formula::Historically(..) => 5,
            Formula::True | Formula::False | Formula::Prop(_) => 6,
        }
    }
}

fn normalize(bound: Option<TimeBound>) -> Option<TimeBound> {
    bound.filter(|b| !b.is_unbounded())
}

struct Operand<'a>(&'a Formula, u8);

impl fmt::Display for Operand<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.precedence() < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

fn fmt_bound(bound: &Option<TimeBound>) -> String {
    bound.map(|b| b.to_string()).unwrap_or_default()
}

impl fmt::Display for Formula {
    /// Prints in the concrete syntax accepted by [`parse`], with the minimal
    /// parentheses needed to read back the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Prop(p) => f.write_str(p),
            Formula::Not(x) => write!(f, "!{}", Operand(x, 5)),
            Formula::Pre(x) => write!(f, "pre {}", Operand(x, 5)),
            Formula::Once(x, b) => write!(f, "once{} {}", fmt_bound(b), Operand(x, 5)),
            Formula::Historically(x, b) => {
                write!(f, "historically{} {}", fmt_bound(b), Operand(x, 5))
            }
            Formula::Since(a, c, b) => {
                write!(f, "{} since{} {}", Operand(a, 5), fmt_bound(b), Operand(c, 5))
            }
            Formula::And(a, b) => write!(f, "{} && {}", Operand(a, 3), Operand(b, 4)),
            Formula::Or(a, b) => write!(f, "{} || {}", Operand(a, 2), Operand(b, 3)),
            Formula::Implies(a, b) => write!(f, "{} -> {}", Operand(a, 2), Operand(b, 1)),
        }
    }
}
