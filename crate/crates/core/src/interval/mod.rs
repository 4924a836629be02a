//! Exact set algebra: integer interval sets for discrete monitor state,
//! open rational period sets for dense behaviors, and chunks.

mod chunk;
mod int_set;
mod period;

pub use chunk::{synchronize, synchronize_sets, Chunk, ChunkError, Segment, SyncPiece};
pub use int_set::{IntInterval, IntIntervalSet};
pub use period::{Period, PeriodError, PeriodSet};
