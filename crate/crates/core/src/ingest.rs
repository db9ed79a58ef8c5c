//! CSV ingestion of dated price series, alignment on common dates, and the
//! returns transformation r_t = 100·(ln p_t − ln p_{t−1}).

use std::collections::HashMap;
use std::path::Path;

use chrono::NaiveDate;

use crate::error::{Error, Result};

/// A dated, strictly positive price series.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    pub name: String,
    /// Strictly increasing observation dates, one per price.
    pub dates: Vec<NaiveDate>,
    pub values: Vec<f64>,
}

/// Continuously compounded percentage returns derived from a price series.
///
/// Each return is dated by the later observation of its consecutive price
/// pair, so the series is one element shorter than its source.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    pub name: String,
    pub dates: Vec<NaiveDate>,
    pub values: Vec<f64>,
}

/// Several series restricted to their common dates.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedPanel {
    pub dates: Vec<NaiveDate>,
    /// One (name, values) column per input series, all of equal length,
    /// in input order.
    pub columns: Vec<(String, Vec<f64>)>,
    /// Per-series count of observations dropped by the intersection,
    /// in input order.
    pub dropped: Vec<(String, usize)>,
}

impl AlignedPanel {
    /// Reassemble the aligned columns as standalone price series.
    pub fn price_series(&self) -> Vec<PriceSeries> {
        self.columns
            .iter()
            .map(|(name, values)| PriceSeries {
                name: name.clone(),
                dates: self.dates.clone(),
                values: values.clone(),
            })
            .collect()
    }
}

/// Column schema and parsing options for [`load_price_csv`].
#[derive(Debug, Clone)]
pub struct CsvSchema {
    pub date_col: String,
    pub price_col: String,
    /// `chrono` format string; ISO-8601 dates by default.
    pub date_format: String,
    pub delimiter: u8,
    /// In lenient mode rows with a missing or unparseable date/price are
    /// dropped (and counted) instead of aborting the load. Structural
    /// violations — non-positive prices, unordered dates — are errors in
    /// both modes.
    pub lenient: bool,
}

impl Default for CsvSchema {
    fn default() -> Self {
        CsvSchema {
            date_col: "date".into(),
            price_col: "price".into(),
            date_format: "%Y-%m-%d".into(),
            delimiter: b',',
            lenient: false,
        }
    }
}

/// Load one dated price series from a headed CSV file.
///
/// The series takes its name from the file stem. Returns the series plus
/// the number of rows dropped (always 0 in strict mode).
///
/// # Errors
/// `FileNotFound`, `MalformedRow`, `NonPositivePrice`, `UnsortedDates`,
/// and `SeriesTooShort` for a file with no usable rows.
pub fn load_price_csv(path: &Path, schema: &CsvSchema) -> Result<(PriceSeries, usize)> {
    if !path.is_file() {
        return Err(Error::FileNotFound(path.to_path_buf()));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .delimiter(schema.delimiter)
        .flexible(true)
        .from_path(path)?;

    let headers = reader.headers()?.clone();
    let col_index = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::MalformedRow {
                line: 1,
                reason: format!("missing column '{name}' in header"),
            })
    };
    let date_idx = col_index(&schema.date_col)?;
    let price_idx = col_index(&schema.price_col)?;

    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "series".into());

    let mut dates: Vec<NaiveDate> = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    let mut dropped = 0usize;

    for record in reader.records() {
        let record = record?;
        let line = record
            .position()
            .map(|p| p.line() as usize)
            .unwrap_or(dates.len() + 2);

        let parsed = parse_row(&record, date_idx, price_idx, &schema.date_format, line);
        let (date, price) = match parsed {
            Ok(pair) => pair,
            Err(err) => {
                if schema.lenient && matches!(err, Error::MalformedRow { .. }) {
                    dropped += 1;
                    continue;
                }
                return Err(err);
            }
        };
        if price <= 0.0 || !price.is_finite() {
            return Err(Error::NonPositivePrice { line });
        }
        if let Some(last) = dates.last() {
            if date <= *last {
                return Err(Error::UnsortedDates { line });
            }
        }
        dates.push(date);
        values.push(price);
    }

    if dates.is_empty() {
        return Err(Error::SeriesTooShort { needed: 1, got: 0 });
    }
    Ok((
        PriceSeries {
            name,
            dates,
            values,
        },
        dropped,
    ))
}

fn parse_row(
    record: &csv::StringRecord,
    date_idx: usize,
    price_idx: usize,
    date_format: &str,
    line: usize,
) -> Result<(NaiveDate, f64)> {
    let date_str = record.get(date_idx).unwrap_or("").trim();
    let price_str = record.get(price_idx).unwrap_or("").trim();
    if date_str.is_empty() || price_str.is_empty() {
        return Err(Error::MalformedRow {
            line,
            reason: "empty date or price field".into(),
        });
    }
    let date = NaiveDate::parse_from_str(date_str, date_format).map_err(|e| Error::MalformedRow {
        line,
        reason: format!("unparseable date '{date_str}': {e}"),
    })?;
    let price: f64 = price_str.parse().map_err(|_| Error::MalformedRow {
        line,
        reason: format!("unparseable price '{price_str}'"),
    })?;
    Ok((date, price))
}

/// Restrict several price series to the intersection of their dates,
/// preserving chronological order.
///
/// # Errors
/// `DomainError` for fewer than two series; `EmptyIntersection` when no
/// date is shared by all of them.
pub fn align(series: &[PriceSeries]) -> Result<AlignedPanel> {
    if series.len() < 2 {
        return Err(Error::DomainError(
            "alignment needs at least two series".into(),
        ));
    }
    // Each series has strictly increasing (hence unique) dates, so a date
    // shared by all of them appears exactly `series.len()` times in total.
    let mut counts: HashMap<NaiveDate, usize> = HashMap::new();
    for s in series {
        for d in &s.dates {
            *counts.entry(*d).or_insert(0) += 1;
        }
    }
    let keep = |d: &NaiveDate| counts.get(d).copied() == Some(series.len());

    let dates: Vec<NaiveDate> = series[0].dates.iter().copied().filter(|d| keep(d)).collect();
    if dates.is_empty() {
        return Err(Error::EmptyIntersection);
    }

    let mut columns = Vec::with_capacity(series.len());
    let mut dropped = Vec::with_capacity(series.len());
    for s in series {
        let values: Vec<f64> = s
            .dates
            .iter()
            .zip(&s.values)
            .filter(|(d, _)| keep(d))
            .map(|(_, v)| *v)
            .collect();
        dropped.push((s.name.clone(), s.values.len() - values.len()));
        columns.push((s.name.clone(), values));
    }

    Ok(AlignedPanel {
        dates,
        columns,
        dropped,
    })
}

/// Transform prices into continuously compounded percentage returns:
/// r_t = 100·(ln p_t − ln p_{t−1}).
///
/// # Errors
/// `SeriesTooShort` for fewer than two prices.
///
/// # Examples
/// ```
/// use chrono::NaiveDate;
/// use xbicorr_core::ingest::{to_returns, PriceSeries};
///
/// let d = |s: &str| NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap();
/// let p = PriceSeries {
///     name: "demo".into(),
///     dates: vec![d("2014-01-29"), d("2014-01-30")],
///     values: vec![100.0, 105.0],
/// };
/// let r = to_returns(&p).unwrap();
/// assert_eq!(r.values.len(), 1);
/// assert!((r.values[0] - 100.0 * 1.05f64.ln()).abs() < 1e-9);
/// ```
pub fn to_returns(p: &PriceSeries) -> Result<ReturnSeries> {
    if p.values.len() < 2 {
        return Err(Error::SeriesTooShort {
            needed: 2,
            got: p.values.len(),
        });
    }
    let values: Vec<f64> = p
        .values
        .windows(2)
        .map(|w| 100.0 * (w[1].ln() - w[0].ln()))
        .collect();
    Ok(ReturnSeries {
        name: p.name.clone(),
        dates: p.dates[1..].to_vec(),
        values,
    })
}
