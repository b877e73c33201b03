//! Frontier and history CSV files, JSON summaries.

use std::io::{Read, Write};
use std::path::Path;

use parden_core::{FrontierSet, ObjectivePoint, RunHistory};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FileError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("unexpected header {found:?}, expected {expected:?}")]
    Header { found: String, expected: &'static str },
    #[error("row {row}: {message}")]
    Parse { row: u64, message: String },
}

/// Rounds to the 6 decimals the frontier file keeps.
pub fn round6(x: f64) -> f64 {
    format!("{x:.6}").parse().expect("formatted float parses")
}

/// The frontier exactly as it reads back from its file.
pub fn rounded_frontier(front: &FrontierSet) -> FrontierSet {
    let pts: Vec<ObjectivePoint> = front
        .iter()
        .map(|p| ObjectivePoint::new(round6(p.risk_pct()), round6(p.return_pct())).expect("finite"))
        .collect();
    FrontierSet::pareto_of(&pts)
}

fn check_header<R: Read>(rdr: &mut csv::Reader<R>, expected: &'static str) -> Result<(), FileError> {
    let found = rdr.headers()?.iter().collect::<Vec<_>>().join(",");
    if found != expected {
        return Err(FileError::Header { found, expected });
    }
    Ok(())
}

fn parse_field<T: std::str::FromStr>(rec: &csv::StringRecord, k: usize) -> Result<T, FileError>
where
    T::Err: std::fmt::Display,
{
    let row = rec.position().map_or(0, |p| p.line());
    let s = rec.get(k).ok_or_else(|| FileError::Parse {
        row,
        message: format!("missing field {k}"),
    })?;
    s.trim().parse().map_err(|e: T::Err| FileError::Parse {
        row,
        message: format!("{e} ({s:?})"),
    })
}

pub fn write_frontier<W: Write>(writer: W, front: &FrontierSet) -> Result<(), FileError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["Risk", "Return"])?;
    for p in front.iter() {
        w.write_record([format!("{:.6}", p.risk_pct()), format!("{:.6}", p.return_pct())])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_frontier<R: Read>(reader: R) -> Result<FrontierSet, FileError> {
    let mut rdr = csv::Reader::from_reader(reader);
    check_header(&mut rdr, "Risk,Return")?;
    let mut pts = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let (r, m): (f64, f64) = (parse_field(&rec, 0)?, parse_field(&rec, 1)?);
        pts.push(ObjectivePoint::new(r, m).map_err(|e| FileError::Parse {
            row: rec.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?);
    }
    Ok(FrontierSet::new(pts))
}

pub fn write_history<W: Write>(writer: W, history: &RunHistory) -> Result<(), FileError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["generation", "evaluations", "hypervolume"])?;
    for (g, r) in history.records().iter().enumerate() {
        w.write_record([g.to_string(), r.evaluations.to_string(), r.hypervolume.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_history<R: Read>(reader: R, seed: u64) -> Result<RunHistory, FileError> {
    let mut rdr = csv::Reader::from_reader(reader);
    check_header(&mut rdr, "generation,evaluations,hypervolume")?;
    let mut h = RunHistory::new(seed);
    for rec in rdr.records() {
        let rec = rec?;
        let evaluations: usize = parse_field(&rec, 1)?;
        let hypervolume: f64 = parse_field(&rec, 2)?;
        h.push(evaluations, hypervolume).map_err(|e| FileError::Parse {
            row: rec.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
    }
    Ok(h)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FileError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}

pub fn save_frontier(path: &Path, front: &FrontierSet) -> Result<(), FileError> {
    write_frontier(std::io::BufWriter::new(std::fs::File::create(path)?), front)
}

pub fn load_frontier(path: &Path) -> Result<FrontierSet, FileError> {
    read_frontier(std::fs::File::open(path)?)
}

pub fn save_history(path: &Path, history: &RunHistory) -> Result<(), FileError> {
    write_history(std::io::BufWriter::new(std::fs::File::create(path)?), history)
}

pub fn load_history(path: &Path, seed: u64) -> Result<RunHistory, FileError> {
    read_history(std::fs::File::open(path)?, seed)
}
