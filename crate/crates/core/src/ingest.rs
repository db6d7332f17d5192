//! Empirical payoff distributions from trade or bet histories.
//!
//! The input is a CSV of `outcome,payoff` rows (`win`/`loss`, case-insensitive;
//! payoff may be empty on losses), optionally preceded by a header row.

use std::fmt;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dist::PayoffDistribution;

/// Minimum number of observations above `xmin` for a tail fit.
pub const MIN_TAIL: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum TradeRecord {
    Win { payoff: f64 },
    Loss,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowError {
    pub line: u64,
    pub reason: String,
}

impl fmt::Display for RowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.reason)
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read trade file: {0}")]
    Io(#[from] std::io::Error),
    #[error("{} malformed row(s), first at {}", .0.len(), .0[0])]
    Parse(Vec<RowError>),
    #[error("trade file contains no records")]
    EmptyFile,
    #[error("degenerate sample: {n_wins} wins and {n_losses} losses (need at least one of each)")]
    DegenerateSample { n_wins: usize, n_losses: usize },
    #[error("bin count must be positive")]
    InvalidBins,
    #[error("tail fit needs xmin > 0, got {0}")]
    InvalidXmin(f64),
    #[error("only {n_tail} payoffs above xmin (need at least {MIN_TAIL})")]
    InsufficientTail { n_tail: usize },
    #[error("fitted tail exponent {alpha} <= 1 implies an infinite mean")]
    InfiniteMeanFit { alpha: f64 },
}

pub fn load_trades(path: impl AsRef<Path>) -> Result<Vec<TradeRecord>, IngestError> {
    let file = std::fs::File::open(path)?;
    parse_trades(file)
}

pub fn parse_trades<R: Read>(reader: R) -> Result<Vec<TradeRecord>, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let mut records = Vec::new();
    let mut errors = Vec::new();
    for (index, row) in rdr.records().enumerate() {
        let row = match row {
            Ok(row) => row,
            Err(e) => {
                if let csv::ErrorKind::Io(_) = e.kind() {
                    return Err(IngestError::Io(std::io::Error::other(e.to_string())));
                }
                let line = e.position().map_or(0, |p| p.line());
                errors.push(RowError {
                    line,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        let line = row.position().map_or(index as u64 + 1, |p| p.line());
        if index == 0 && looks_like_header(&row) {
            continue;
        }
        match parse_row(&row) {
            Ok(rec) => records.push(rec),
            Err(reason) => errors.push(RowError { line, reason }),
        }
    }

    if !errors.is_empty() {
        return Err(IngestError::Parse(errors));
    }
    if records.is_empty() {
        return Err(IngestError::EmptyFile);
    }
    Ok(records)
}

fn looks_like_header(row: &csv::StringRecord) -> bool {
    let first = row.get(0).unwrap_or("");
    let is_outcome = first.eq_ignore_ascii_case("win") || first.eq_ignore_ascii_case("loss");
    let second_numeric = row.get(1).is_some_and(|s| s.parse::<f64>().is_ok());
    !is_outcome && !second_numeric
}

fn parse_row(row: &csv::StringRecord) -> Result<TradeRecord, String> {
    if row.len() > 2 {
        return Err(format!("expected 2 fields, found {}", row.len()));
    }
    let outcome = row.get(0).unwrap_or("");
    let payoff = row.get(1).unwrap_or("");
    if outcome.eq_ignore_ascii_case("loss") {
        return Ok(TradeRecord::Loss);
    }
    if !outcome.eq_ignore_ascii_case("win") {
        return Err(format!("unknown outcome {outcome:?}"));
    }
    if payoff.is_empty() {
        return Err("missing payoff on win".into());
    }
    let b: f64 = payoff
        .parse()
        .map_err(|_| format!("invalid payoff {payoff:?}"))?;
    if !b.is_finite() {
        return Err("non-finite payoff".into());
    }
    if b < 0.0 {
        return Err("negative payoff".into());
    }
    Ok(TradeRecord::Win { payoff: b })
}

/// Win frequency and payoff distribution estimated from a record stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSummary {
    pub p_hat: f64,
    pub dist: PayoffDistribution,
    pub n_wins: usize,
    pub n_losses: usize,
}

pub fn win_payoffs(records: &[TradeRecord]) -> Vec<f64> {
    records
        .iter()
        .filter_map(|r| match r {
            TradeRecord::Win { payoff } => Some(*payoff),
            TradeRecord::Loss => None,
        })
        .collect()
}

/// Builds equal-weight atoms over the win payoffs (duplicates merged), or an
/// equal-width histogram over `[min, max]` when `bins` is given.
pub fn build_empirical(records: &[TradeRecord], bins: Option<usize>) -> Result<EmpiricalSummary, IngestError> {
    let mut wins = win_payoffs(records);
    let n_wins = wins.len();
    let n_losses = records.len() - n_wins;
    if n_wins == 0 || n_losses == 0 {
        return Err(IngestError::DegenerateSample { n_wins, n_losses });
    }
    if bins == Some(0) {
        return Err(IngestError::InvalidBins);
    }

    wins.sort_by(f64::total_cmp);
    let n = n_wins as f64;
    let (min, max) = (wins[0], wins[n_wins - 1]);

    let dist = match bins {
        Some(bins) if max > min => {
            let width = (max - min) / bins as f64;
            let mut counts = vec![0usize; bins];
            for &b in &wins {
                let i = (((b - min) / width) as usize).min(bins - 1);
                counts[i] += 1;
            }
            let mut edges: Vec<f64> = (0..bins).map(|i| min + i as f64 * width).collect();
            edges.push(max);
            let masses = counts.iter().map(|&c| c as f64 / n).collect::<Vec<_>>();
            PayoffDistribution::histogram(edges, masses)
        }
        _ => {
            let mut points: Vec<(f64, f64)> = Vec::new();
            let mut i = 0;
            while i < n_wins {
                let b = wins[i];
                let run = wins[i..].iter().take_while(|&&x| x == b).count();
                points.push((b, run as f64 / n));
                i += run;
            }
            PayoffDistribution::atoms(points)
        }
    };

    Ok(EmpiricalSummary {
        p_hat: n / records.len() as f64,
        dist,
        n_wins,
        n_losses,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParetoFit {
    pub alpha: f64,
    pub xmin: f64,
    pub n_tail: usize,
}

impl ParetoFit {
    pub fn distribution(&self) -> PayoffDistribution {
        PayoffDistribution::pareto(self.alpha, self.xmin)
    }
}

/// Maximum-likelihood tail exponent over the payoffs strictly above `xmin`:
/// `alpha = n_tail / sum(ln(b / xmin))`.
pub fn fit_pareto_tail(payoffs: &[f64], xmin: f64) -> Result<ParetoFit, IngestError> {
    if !(xmin > 0.0 && xmin.is_finite()) {
        return Err(IngestError::InvalidXmin(xmin));
    }
    let (n_tail, log_sum) = payoffs
        .iter()
        .filter(|&&b| b > xmin)
        .fold((0usize, 0.0), |(n, s), &b| (n + 1, s + (b / xmin).ln()));
    if n_tail < MIN_TAIL {
        return Err(IngestError::InsufficientTail { n_tail });
    }
    let alpha = n_tail as f64 / log_sum;
    if alpha <= 1.0 {
        return Err(IngestError::InfiniteMeanFit { alpha });
    }
    Ok(ParetoFit { alpha, xmin, n_tail })
}
