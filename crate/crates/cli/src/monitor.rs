//! Streaming a CSV trace through a compiled monitor.
//!
//! A reader thread parses rows into batches and hands them to the engine
//! over a bounded queue, so parsing overlaps monitoring and the reader
//! blocks when the engine falls behind.

use std::io::{Read, Write};
use std::sync::mpsc::{sync_channel, SyncSender};
use std::thread;

use seqmon::{ChunkBuilder, DenseError, DenseNetwork, DiscreteNetwork, Formula, Time};

use crate::csvio::RowReader;
use crate::error::CliError;

const BATCH_ROWS: usize = 1024;
const QUEUE_BATCHES: usize = 8;

/// Options of a single `monitor` run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub chunk_rows: usize,
    pub t0: Time,
    pub strong_historically: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { chunk_rows: 64, t0: Time::ZERO, strong_historically: false }
    }
}

struct Batch {
    first_row: u64,
    rows: usize,
    times: Vec<Time>,
    values: Vec<bool>,
}

type Message = Result<Batch, CliError>;

fn produce<R: Read>(mut reader: RowReader<R>, width: usize, tx: &SyncSender<Message>) -> Result<(), CliError> {
    let mut row = Vec::with_capacity(width);
    loop {
        let mut batch = Batch { first_row: reader.row() + 1, rows: 0, times: Vec::new(), values: Vec::new() };
        let mut done = false;
        for _ in 0..BATCH_ROWS {
            match reader.next_into(&mut row)? {
                None => {
                    done = true;
                    break;
                }
                Some(t) => {
                    batch.rows += 1;
                    batch.times.extend(t);
                    batch.values.extend_from_slice(&row);
                }
            }
        }
        if batch.rows > 0 {
            // A closed receiver means the engine stopped early; its error wins.
            if tx.send(Ok(batch)).is_err() {
                return Ok(());
            }
        }
        if done {
            return Ok(());
        }
    }
}

fn pipelined<R, C>(reader: RowReader<R>, width: usize, mut consume: C) -> Result<(), CliError>
where
    R: Read + Send,
    C: FnMut(Batch) -> Result<(), CliError>,
{
    let (tx, rx) = sync_channel::<Message>(QUEUE_BATCHES);
    thread::scope(|s| {
        s.spawn(move || {
            if let Err(e) = produce(reader, width, &tx) {
                let _ = tx.send(Err(e));
            }
        });
        for msg in rx {
            consume(msg?)?;
        }
        Ok(())
    })
}

/// Writes one `0`/`1` line per input row.
pub fn monitor_discrete<R: Read + Send, W: Write>(
    f: &Formula,
    input: R,
    mut out: W,
    cfg: &RunConfig,
) -> Result<(), CliError> {
    let mut net = DiscreteNetwork::compile(f)?;
    net.set_strong_historically(cfg.strong_historically)?;
    let width = net.propositions().len();
    let Some(reader) = RowReader::discrete(input, net.propositions())? else {
        return Ok(());
    };
    let mut text = Vec::with_capacity(2 * BATCH_ROWS);
    pipelined(reader, width, |batch| {
        text.clear();
        for k in 0..batch.rows {
            let v = net.step(&batch.values[k * width..(k + 1) * width])?;
            text.extend_from_slice(if v { b"1\n" } else { b"0\n" });
        }
        out.write_all(&text)?;
        out.flush()?;
        Ok(())
    })
}

/// Writes the true periods of each chunk as `begin,end` lines, flushed per
/// chunk. A period may abut the last one of the previous chunk.
pub fn monitor_dense<R: Read + Send, W: Write>(
    f: &Formula,
    input: R,
    mut out: W,
    cfg: &RunConfig,
) -> Result<(), CliError> {
    if cfg.chunk_rows == 0 {
        return Err(CliError::Usage("chunk rows must be at least 1".into()));
    }
    let mut net = DenseNetwork::compile(f, cfg.t0)?;
    let props = net.propositions().to_vec();
    let width = props.len();
    let Some(reader) = RowReader::dense(input, &props)? else {
        return Ok(());
    };
    let mut builder = ChunkBuilder::new(props, cfg.t0, cfg.chunk_rows);
    let emit = |net: &mut DenseNetwork, chunk, out: &mut W| -> Result<(), CliError> {
        let periods = net.feed_chunk(&chunk)?;
        for p in periods.iter() {
            writeln!(out, "{},{}", p.start, p.end)?;
        }
        out.flush()?;
        Ok(())
    };
    pipelined(reader, width, |batch| {
        for (k, &t) in batch.times.iter().enumerate() {
            let values = &batch.values[k * width..(k + 1) * width];
            match builder.push(t, values) {
                Ok(Some(chunk)) => emit(&mut net, chunk, &mut out)?,
                Ok(None) => {}
                Err(e @ DenseError::NonMonotone { .. }) => {
                    return Err(CliError::Row { row: batch.first_row + k as u64, msg: e.to_string() })
                }
                Err(e) => return Err(e.into()),
            }
        }
        Ok(())
    })?;
    if let Some(chunk) = builder.flush() {
        emit(&mut net, chunk, &mut out)?;
    }
    net.finish()?;
    Ok(())
}
