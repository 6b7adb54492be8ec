//! Text formats for per-iteration solver output.
//!
//! Strategy file: line `t` (0-based) holds `s_{h,t}` as `D` space-separated
//! probabilities with 17 significant digits, so values round-trip exactly.
//! Guess-count file: line `t` holds ING for iteration `t` as integers.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::engine::HiderStrategy;

#[derive(Debug, Error)]
pub enum StrategyFileError {
    #[error("i/o error reading strategy data")]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("need {needed} lines but only {found} are present")]
    TooShort { needed: usize, found: usize },
}

pub fn write_strategy_line<W: Write>(mut out: W, s: &HiderStrategy) -> io::Result<()> {
    let mut first = true;
    for p in s.probs() {
        if !first {
            out.write_all(b" ")?;
        }
        first = false;
        write!(out, "{p:.16e}")?;
    }
    out.write_all(b"\n")
}

/// Parses one strategy line; `line` is 1-based and only used for messages.
pub fn parse_strategy_line(
    text: &str,
    line: usize,
    expected_len: Option<usize>,
) -> Result<HiderStrategy, StrategyFileError> {
    let parse_err = |message: String| StrategyFileError::Parse { line, message };
    let probs = text
        .split_ascii_whitespace()
        .map(|f| f.parse::<f64>().map_err(|e| parse_err(format!("bad probability {f:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(d) = expected_len {
        if probs.len() != d {
            return Err(parse_err(format!("expected {d} fields, found {}", probs.len())));
        }
    }
    HiderStrategy::new(probs).map_err(|e| parse_err(e.to_string()))
}

/// Reads up to `limit` strategies (all when `None`). Every line must have
/// the same number of fields as the first.
pub fn read_strategies<R: BufRead>(
    reader: R,
    limit: Option<usize>,
) -> Result<Vec<HiderStrategy>, StrategyFileError> {
    let mut out: Vec<HiderStrategy> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        if limit.is_some_and(|n| out.len() >= n) {
            break;
        }
        let line = line?;
        let expected = out.first().map(HiderStrategy::len);
        out.push(parse_strategy_line(&line, i + 1, expected)?);
    }
    if let Some(needed) = limit {
        if out.len() < needed {
            return Err(StrategyFileError::TooShort {
                needed,
                found: out.len(),
            });
        }
    }
    Ok(out)
}

pub fn write_ing_line<W: Write>(mut out: W, ing: &[u32]) -> io::Result<()> {
    let mut first = true;
    for g in ing {
        if !first {
            out.write_all(b" ")?;
        }
        first = false;
        write!(out, "{g}")?;
    }
    out.write_all(b"\n")
}

pub fn read_ing_history<R: BufRead>(
    reader: R,
    limit: Option<usize>,
) -> Result<Vec<Vec<u32>>, StrategyFileError> {
    let mut out: Vec<Vec<u32>> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        if limit.is_some_and(|n| out.len() >= n) {
            break;
        }
        let line = line?;
        let row = line
            .split_ascii_whitespace()
            .map(|f| {
                f.parse::<u32>().map_err(|e| StrategyFileError::Parse {
                    line: i + 1,
                    message: format!("bad guess count {f:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.push(row);
    }
    if let Some(needed) = limit {
        if out.len() < needed {
            return Err(StrategyFileError::TooShort {
                needed,
                found: out.len(),
            });
        }
    }
    Ok(out)
}
