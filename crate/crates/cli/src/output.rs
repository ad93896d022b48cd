use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::CliResult;

/// Marker written into CSV cells with no value.
pub const UNAVAILABLE: &str = "unavailable";

/// `x` with 17 significant digits; parses back to the same `f64`.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// One line of `compare` output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub family: String,
    pub n: u64,
    pub params: String,
    pub exact_log_det: Option<f64>,
    pub predicted_log_det: f64,
    pub residual: Option<f64>,
    /// Decimal string; counts outgrow every fixed-width integer.
    pub tree_count: Option<String>,
}

pub const COMPARE_HEADER: [&str; 7] = [
    "family",
    "n",
    "params",
    "exact_log_det",
    "predicted_log_det",
    "residual",
    "tree_count",
];

impl CompareRow {
    pub fn to_record(&self) -> [String; 7] {
        let opt = |x: Option<f64>| x.map_or_else(|| UNAVAILABLE.to_string(), fmt17);
        [
            self.family.clone(),
            self.n.to_string(),
            self.params.clone(),
            opt(self.exact_log_det),
            fmt17(self.predicted_log_det),
            opt(self.residual),
            self.tree_count.clone().unwrap_or_else(|| UNAVAILABLE.to_string()),
        ]
    }

    /// Inverse of [`CompareRow::to_record`].
    pub fn from_record(record: &csv::StringRecord) -> Result<Self, String> {
        if record.len() != 7 {
            return Err(format!("expected 7 fields, got {}", record.len()));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| format!("bad number {s:?}: {e}"));
        let opt = |s: &str| if s == UNAVAILABLE { Ok(None) } else { num(s).map(Some) };
        Ok(Self {
            family: record[0].to_string(),
            n: record[1].parse().map_err(|e| format!("bad n: {e}"))?,
            params: record[2].to_string(),
            exact_log_det: opt(&record[3])?,
            predicted_log_det: num(&record[4])?,
            residual: opt(&record[5])?,
            tree_count: (&record[6] != UNAVAILABLE).then(|| record[6].to_string()),
        })
    }
}

/// `#` lines before CSV output: a timestamp plus any diagnostics.
pub fn write_comments<W: Write + ?Sized>(out: &mut W, no_header: bool, extra: &[String]) -> CliResult<()> {
    if no_header {
        return Ok(());
    }
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    writeln!(out, "# generated by ctrees {} at unix time {secs}", env!("CARGO_PKG_VERSION"))?;
    for line in extra {
        writeln!(out, "# {line}")?;
    }
    Ok(())
}

pub fn write_csv<W: Write + ?Sized>(out: &mut W, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    out.write_all(&bytes)?;
    Ok(())
}

pub fn write_json<W: Write + ?Sized, T: Serialize>(out: &mut W, value: &T) -> CliResult<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}
