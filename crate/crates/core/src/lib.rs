//! Online monitors for past metric temporal logic built as sequential
//! networks: one state variable per subformula, updated once per input.
//!
//! Two engines share the formula front end:
//!
//! * [`DiscreteNetwork`] consumes one Boolean vector per integer step.
//!   Timed operators keep *forward-shifted* windows `[k+a, k+b]` in an
//!   [`IntIntervalSet`], so the cost of a step does not depend on the
//!   trace length.
//! * [`DenseNetwork`] consumes point-free behaviors chunk by chunk. Signals
//!   are sets of open periods ([`PeriodSet`]); stuttering input costs
//!   nothing extra.
//!
//! The [`oracle`] module holds slow, independent evaluators used for
//! differential testing.

pub mod dense;
pub mod discrete;
pub mod formula;
pub mod interval;
pub mod oracle;
pub mod random;
pub mod time;
pub mod workload;

pub use dense::{ChunkBuilder, DenseError, DenseNetwork};
pub use discrete::{DiscreteError, DiscreteNetwork};
pub use formula::{parse, Formula, FormulaError, NodeKind, ParseError, SubformulaDag, TimeBound, TimeModel};
pub use interval::{Chunk, ChunkError, IntInterval, IntIntervalSet, Period, PeriodError, PeriodSet, Segment};
pub use time::{ExtTime, Time};
