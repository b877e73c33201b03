//! Per-run indicator tables and pairwise one-sided tests.

use std::io::{Read, Write};

use parden_core::stats::{hochberg_adjust, mann_whitney_one_sided, Alternative, StatsError};
use serde::{Deserialize, Serialize};

use crate::experiment::{IndicatorRow, RunStatus};
use crate::files::FileError;
use crate::spec::Method;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Indicator {
    Hv,
    GdPlus,
    IgdPlus,
    /// Evaluations to reach the success threshold, `budget + 1` if never.
    Aesr,
}

impl Indicator {
    pub fn name(self) -> &'static str {
        match self {
            Indicator::Hv => "hv",
            Indicator::GdPlus => "gd_plus",
            Indicator::IgdPlus => "igd_plus",
            Indicator::Aesr => "aesr",
        }
    }

    pub fn parse(s: &str) -> Option<Indicator> {
        [Indicator::Hv, Indicator::GdPlus, Indicator::IgdPlus, Indicator::Aesr]
            .into_iter()
            .find(|i| i.name() == s)
    }

    /// Direction in which `x` is the better method.
    pub fn better(self) -> Alternative {
        match self {
            Indicator::Hv => Alternative::XGreater,
            _ => Alternative::XLess,
        }
    }

    pub fn of(self, row: &IndicatorRow) -> f64 {
        match self {
            Indicator::Hv => row.hypervolume,
            Indicator::GdPlus => row.gd_plus,
            Indicator::IgdPlus => row.igd_plus,
            Indicator::Aesr => row.aesr,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsRow {
    pub indicator: Indicator,
    pub x: Method,
    pub y: Method,
    /// `greater` or `less`: the hypothesis that `x` is better than `y`.
    pub alternative: &'static str,
    pub p_value: f64,
    pub p_adjusted: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct StatsReport {
    pub rows: Vec<StatsRow>,
}

fn alternative_name(a: Alternative) -> &'static str {
    match a {
        Alternative::XGreater => "greater",
        Alternative::XLess => "less",
    }
}

impl StatsReport {
    /// Tests `methods[i]` better than `methods[j]` for every `i < j` on
    /// each tested indicator, using completed runs only. The indicators of
    /// one pair form a Hochberg family.
    pub fn build(rows: &[IndicatorRow], methods: &[Method], tested: &[Indicator]) -> Result<Self, StatsError> {
        let sample = |m: Method, ind: Indicator| -> Vec<f64> {
            rows.iter()
                .filter(|r| r.method == m && r.status == RunStatus::Ok)
                .map(|r| ind.of(r))
                .collect()
        };
        let mut out = Vec::new();
        for (i, &x) in methods.iter().enumerate() {
            for &y in &methods[i + 1..] {
                let mut family = Vec::new();
                for &ind in tested {
                    let (xs, ys) = (sample(x, ind), sample(y, ind));
                    if xs.is_empty() || ys.is_empty() {
                        continue;
                    }
                    let p = mann_whitney_one_sided(&xs, &ys, ind.better())?;
                    family.push(StatsRow {
                        indicator: ind,
                        x,
                        y,
                        alternative: alternative_name(ind.better()),
                        p_value: p,
                        p_adjusted: p,
                    });
                }
                let raw: Vec<f64> = family.iter().map(|r| r.p_value).collect();
                for (r, adj) in family.iter_mut().zip(hochberg_adjust(&raw)?) {
                    r.p_adjusted = adj;
                }
                out.extend(family);
            }
        }
        Ok(Self { rows: out })
    }

    pub fn find(&self, indicator: Indicator, x: Method, y: Method) -> Option<&StatsRow> {
        self.rows
            .iter()
            .find(|r| r.indicator == indicator && r.x == x && r.y == y)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), FileError> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["indicator", "x", "y", "alternative", "p_value", "p_adjusted"])?;
        for r in &self.rows {
            w.write_record([
                r.indicator.name(),
                r.x.name(),
                r.y.name(),
                r.alternative,
                &r.p_value.to_string(),
                &r.p_adjusted.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

const INDICATOR_HEADER: [&str; 10] = [
    "method",
    "seed",
    "status",
    "evaluations",
    "hypervolume",
    "best_hypervolume",
    "gd_plus",
    "igd_plus",
    "aesr",
    "agsr",
];

pub fn write_indicators<W: Write>(writer: W, rows: &[IndicatorRow]) -> Result<(), FileError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(INDICATOR_HEADER)?;
    for r in rows {
        w.write_record([
            r.method.name().to_string(),
            r.seed.to_string(),
            r.status.name().to_string(),
            r.evaluations.to_string(),
            r.hypervolume.to_string(),
            r.best_hypervolume.to_string(),
            r.gd_plus.to_string(),
            r.igd_plus.to_string(),
            r.aesr.to_string(),
            r.agsr.map_or(String::new(), |g| g.to_string()),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_indicators<R: Read>(reader: R) -> Result<Vec<IndicatorRow>, FileError> {
    let mut rdr = csv::Reader::from_reader(reader);
    let header = rdr.headers()?.iter().collect::<Vec<_>>().join(",");
    if header != INDICATOR_HEADER.join(",") {
        return Err(FileError::Header {
            found: header,
            expected: "method,seed,status,evaluations,hypervolume,best_hypervolume,gd_plus,igd_plus,aesr,agsr",
        });
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let row = rec.position().map_or(0, |p| p.line());
        let bad = |what: &str, s: &str| FileError::Parse {
            row,
            message: format!("bad {what} {s:?}"),
        };
        let get = |k: usize| rec.get(k).unwrap_or("").trim();
        let num = |k: usize| get(k).parse::<f64>().map_err(|_| bad(INDICATOR_HEADER[k], get(k)));
        let int = |k: usize| get(k).parse::<u64>().map_err(|_| bad(INDICATOR_HEADER[k], get(k)));
        out.push(IndicatorRow {
            method: Method::parse(get(0)).ok_or_else(|| bad("method", get(0)))?,
            seed: int(1)?,
            status: RunStatus::parse(get(2)).ok_or_else(|| bad("status", get(2)))?,
            evaluations: int(3)? as usize,
            hypervolume: num(4)?,
            best_hypervolume: num(5)?,
            gd_plus: num(6)?,
            igd_plus: num(7)?,
            aesr: num(8)?,
            agsr: if get(9).is_empty() { None } else { Some(int(9)? as usize) },
        });
    }
    Ok(out)
}
