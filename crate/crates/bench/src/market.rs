//! Long-format market CSV: `date,asset,open,close,volume`, one row per asset
//! and day, dates as `YYYY-MM-DD`.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;
use parden_core::backtest::{AssetSeries, BacktestError, MarketData};
use thiserror::Error;

const COLUMNS: [&str; 5] = ["date", "asset", "open", "close", "volume"];

#[derive(Debug, Error)]
pub enum MarketFileError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("missing column `{0}`")]
    MissingColumn(&'static str),
    #[error("row {row}, column `{column}`: {message}")]
    Parse {
        row: u64,
        column: &'static str,
        message: String,
    },
    #[error("row {row}: duplicate entry for asset {asset}")]
    Duplicate { row: u64, asset: String },
    #[error("no asset covers every date")]
    NoCompleteAsset,
    #[error(transparent)]
    Market(#[from] BacktestError),
}

/// A parsed market plus the ids of assets dropped for missing days.
#[derive(Debug, Clone)]
pub struct LoadedMarket {
    pub data: MarketData,
    pub dropped: Vec<String>,
}

fn epoch() -> NaiveDate {
    NaiveDate::from_ymd_opt(1970, 1, 1).expect("valid date")
}

pub fn day_number(date: NaiveDate) -> i64 {
    (date - epoch()).num_days()
}

pub fn format_day(day: i64) -> String {
    (epoch() + chrono::Duration::days(day)).format("%Y-%m-%d").to_string()
}

type Row = (f64, f64, f64);

pub fn read_market<R: Read>(reader: R) -> Result<LoadedMarket, MarketFileError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let mut idx = [0usize; 5];
    for (k, name) in COLUMNS.iter().enumerate() {
        idx[k] = headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or(MarketFileError::MissingColumn(name))?;
    }
    let mut table: BTreeMap<String, BTreeMap<i64, Row>> = BTreeMap::new();
    let mut order: Vec<String> = Vec::new();
    let mut all_dates = BTreeSet::new();
    for rec in rdr.records() {
        let rec = rec?;
        // header is line 1
        let row = rec.position().map_or(0, |p| p.line());
        let field = |k: usize| rec.get(idx[k]).unwrap_or("");
        let date = NaiveDate::parse_from_str(field(0), "%Y-%m-%d").map_err(|e| MarketFileError::Parse {
            row,
            column: COLUMNS[0],
            message: format!("{e} ({:?})", field(0)),
        })?;
        let asset = field(1).to_string();
        if asset.is_empty() {
            return Err(MarketFileError::Parse {
                row,
                column: COLUMNS[1],
                message: "empty asset id".into(),
            });
        }
        let mut num = [0.0; 3];
        for (j, k) in (2..5).enumerate() {
            num[j] = field(k).parse::<f64>().map_err(|e| MarketFileError::Parse {
                row,
                column: COLUMNS[k],
                message: format!("{e} ({:?})", field(k)),
            })?;
        }
        let day = day_number(date);
        all_dates.insert(day);
        if !table.contains_key(&asset) {
            order.push(asset.clone());
        }
        let series = table.entry(asset.clone()).or_default();
        if series.insert(day, (num[0], num[1], num[2])).is_some() {
            return Err(MarketFileError::Duplicate { row, asset });
        }
    }
    let dates: Vec<i64> = all_dates.into_iter().collect();
    let mut assets = Vec::new();
    let mut dropped = Vec::new();
    for id in order {
        let series = &table[&id];
        if series.len() != dates.len() {
            dropped.push(id);
            continue;
        }
        let (mut open, mut close, mut volume) = (Vec::new(), Vec::new(), Vec::new());
        for (o, c, v) in series.values() {
            open.push(*o);
            close.push(*c);
            volume.push(*v);
        }
        assets.push(AssetSeries { id, open, close, volume });
    }
    if assets.is_empty() {
        return Err(MarketFileError::NoCompleteAsset);
    }
    Ok(LoadedMarket {
        data: MarketData::new(dates, assets)?,
        dropped,
    })
}

pub fn write_market<W: Write>(writer: W, data: &MarketData) -> Result<(), MarketFileError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(COLUMNS)?;
    for (t, &day) in data.dates().iter().enumerate() {
        let date = format_day(day);
        for a in data.assets() {
            w.write_record([
                date.as_str(),
                a.id.as_str(),
                &a.open[t].to_string(),
                &a.close[t].to_string(),
                &a.volume[t].to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn load_market(path: &Path) -> Result<LoadedMarket, MarketFileError> {
    read_market(std::fs::File::open(path)?)
}

pub fn save_market(path: &Path, data: &MarketData) -> Result<(), MarketFileError> {
    write_market(std::io::BufWriter::new(std::fs::File::create(path)?), data)
}
