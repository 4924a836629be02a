//! Slow reference evaluators used as ground truth for the engines.
//!
//! None of these share code with the networks: the discrete oracle is a
//! direct recursion over the quantifiers, and the dense oracles work on an
//! explicit grid (a cell table, and a literal period-by-period evaluator).

mod discrete;
mod lattice;
mod mcl;
mod pointfree;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::formula::{Formula, FormulaError, TimeBound};
use crate::interval::{Chunk, Period, PeriodSet};
use crate::time::{ExtTime, Time};

pub use discrete::{eval_pointy_discrete, eval_pointy_discrete_with, DiscreteTrace, PointyOptions};
pub use mcl::{check_mcl_equivalences, eval_mcl, translate_to_mcl, MclFormula, NegationStyle, Relation};
pub use pointfree::{check_continuity, check_flattening, eval_pointfree, eval_pointfree_refined};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("no data for proposition `{0}`")]
    UnknownProposition(String),
    #[error("step {t} is outside the trace 1..={len}")]
    StepOutOfRange { t: i64, len: usize },
    #[error("bound {0} is not a pair of integers")]
    NonIntegerBound(TimeBound),
    #[error("time span is empty")]
    EmptySpan,
    #[error("period {0} lies outside the structure span")]
    OutsideSpan(Period),
    #[error("rows have different widths")]
    RaggedTrace,
}

/// Point-free behaviors of named propositions over a finite span, read as
/// homogeneous valuations: a proposition holds on every sub-period of its
/// maximal periods.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomStructure {
    start: Time,
    end: Time,
    props: BTreeMap<String, PeriodSet>,
}

impl HomStructure {
    pub fn new(start: Time, end: Time) -> Result<Self, OracleError> {
        if end <= start {
            return Err(OracleError::EmptySpan);
        }
        Ok(HomStructure { start, end, props: BTreeMap::new() })
    }

    /// Adds a proposition; its periods must lie inside the span.
    pub fn with(mut self, name: &str, set: PeriodSet) -> Result<Self, OracleError> {
        let span = self.span();
        if let Some(p) = set.iter().find(|p| !span.covers(p.start, p.end)) {
            return Err(OracleError::OutsideSpan(*p));
        }
        self.props.insert(name.to_string(), set);
        Ok(self)
    }

    pub fn from_chunk(chunk: &Chunk) -> Self {
        let props = chunk
            .names()
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), chunk.column_at(i)))
            .collect();
        HomStructure { start: chunk.start(), end: chunk.end(), props }
    }

    /// The whole behavior as one chunk.
    pub fn to_chunk(&self) -> Chunk {
        let cols = self.props.iter().map(|(n, s)| (n.clone(), s.clone())).collect();
        Chunk::from_columns(self.start, self.end, cols).expect("span is nonempty")
    }

    pub fn start(&self) -> Time {
        self.start
    }

    pub fn end(&self) -> Time {
        self.end
    }

    pub fn span(&self) -> Period {
        Period::new(self.start, ExtTime::Finite(self.end))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> + '_ {
        self.props.keys().map(String::as_str)
    }

    pub fn get(&self, name: &str) -> Option<&PeriodSet> {
        self.props.get(name)
    }

    fn require(&self, f: &Formula) -> Result<(), OracleError> {
        match f.propositions().into_iter().find(|p| !self.props.contains_key(p)) {
            Some(p) => Err(OracleError::UnknownProposition(p)),
            None => Ok(()),
        }
    }
}
