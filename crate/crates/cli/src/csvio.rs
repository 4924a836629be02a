//! Trace wire formats.
//!
//! Discrete: a header of proposition names, then one row of `0`/`1` values
//! per step. Dense: a header `time,p1,...`; the row `t,v1,...` gives the
//! values on `(previous t, t)`, where the first previous time is the origin.

use std::io::{Read, Write};

use seqmon::oracle::{DiscreteTrace, HomStructure};
use seqmon::{Chunk, Time};

use crate::error::CliError;

/// Reads rows and projects them onto `props`, in that order.
pub struct RowReader<R: Read> {
    inner: csv::Reader<R>,
    columns: Vec<usize>,
    dense: bool,
    record: csv::StringRecord,
    row: u64,
}

impl<R: Read> RowReader<R> {
    /// Returns `None` for an input without any header line.
    pub fn discrete(input: R, props: &[String]) -> Result<Option<Self>, CliError> {
        Self::open(input, props, false)
    }

    pub fn dense(input: R, props: &[String]) -> Result<Option<Self>, CliError> {
        Self::open(input, props, true)
    }

    fn open(input: R, props: &[String], dense: bool) -> Result<Option<Self>, CliError> {
        let mut inner = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
        let header = inner.headers().map_err(|e| CliError::Data(format!("bad header: {e}")))?.clone();
        if header.is_empty() {
            return Ok(None);
        }
        let names: Vec<&str> = header.iter().collect();
        let offset = if dense {
            if names[0] != "time" {
                return Err(CliError::Data(format!("dense header must start with `time`, found `{}`", names[0])));
            }
            1
        } else {
            0
        };
        let columns = props
            .iter()
            .map(|p| {
                names[offset..]
                    .iter()
                    .position(|n| n == p)
                    .map(|i| i + offset)
                    .ok_or_else(|| CliError::Data(format!("input has no column `{p}`")))
            })
            .collect::<Result<_, _>>()?;
        Ok(Some(RowReader { inner, columns, dense, record: csv::StringRecord::new(), row: 0 }))
    }

    /// Number of the last row read, counting data rows from 1.
    pub fn row(&self) -> u64 {
        self.row
    }

    /// Reads the next row into `values`; the returned time is `Some` in
    /// dense mode.
    pub fn next_into(&mut self, values: &mut Vec<bool>) -> Result<Option<Option<Time>>, CliError> {
        let more = self.inner.read_record(&mut self.record).map_err(|e| CliError::Row {
            row: self.row + 1,
            msg: match e.kind() {
                csv::ErrorKind::UnequalLengths { expected_len, len, .. } => {
                    format!("expected {expected_len} fields, found {len}")
                }
                _ => e.to_string(),
            },
        })?;
        if !more {
            return Ok(None);
        }
        self.row += 1;
        values.clear();
        for &c in &self.columns {
            values.push(match &self.record[c] {
                "1" => true,
                "0" => false,
                other => {
                    return Err(CliError::Row { row: self.row, msg: format!("value `{other}` is not 0 or 1") })
                }
            });
        }
        if !self.dense {
            return Ok(Some(None));
        }
        let t = self.record[0]
            .parse::<Time>()
            .map_err(|e| CliError::Row { row: self.row, msg: e.to_string() })?;
        Ok(Some(Some(t)))
    }
}

pub fn write_discrete_trace<W: Write>(w: &DiscreteTrace, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{}", w.names().join(","))?;
    for row in w.rows() {
        let cells: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "0" }).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

/// Dense CSV of a chunk, one row per segment. The origin is `chunk.start()`.
pub fn write_dense_chunk<W: Write>(chunk: &Chunk, mut out: W) -> std::io::Result<()> {
    writeln!(out, "time,{}", chunk.names().join(","))?;
    for s in chunk.segments() {
        let cells: Vec<&str> = s.values.iter().map(|&b| if b { "1" } else { "0" }).collect();
        writeln!(out, "{},{}", s.end, cells.join(","))?;
    }
    Ok(())
}

pub fn write_dense_behavior<W: Write>(h: &HomStructure, out: W) -> std::io::Result<()> {
    write_dense_chunk(&h.to_chunk(), out)
}
