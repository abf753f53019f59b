//! Machine-readable sweep reports.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sweep::PairReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(Error::InvalidParameter(format!("unknown report format '{s}'"))),
        }
    }
}

impl ReportFormat {
    /// JSON for a `.json` extension, CSV otherwise.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => ReportFormat::Json,
            _ => ReportFormat::Csv,
        }
    }
}

/// One output row. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub column_a: String,
    pub column_b: String,
    pub overlap_n: usize,
    pub predep_alpha: Option<f64>,
    pub predep_alpha_raw: Option<f64>,
    pub s_marginal: Option<f64>,
    pub s_conditional: Option<f64>,
    pub ci_lo: Option<f64>,
    pub ci_hi: Option<f64>,
    pub pearson: Option<f64>,
    pub spearman: Option<f64>,
    pub dcor: Option<f64>,
    pub degenerate_bins: Option<usize>,
    pub seed: u64,
}

pub const REPORT_COLUMNS: [&str; 14] = [
    "column_a",
    "column_b",
    "overlap_n",
    "predep_alpha",
    "predep_alpha_raw",
    "s_marginal",
    "s_conditional",
    "ci_lo",
    "ci_hi",
    "pearson",
    "spearman",
    "dcor",
    "degenerate_bins",
    "seed",
];

/// `v` rounded to six significant digits.
pub fn round_sig6(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.5e}").parse().unwrap_or(v)
}

impl ReportRow {
    pub fn from_report<T: Scalar>(r: &PairReport<T>) -> Self {
        let f = |v: Option<T>| v.map(|v| round_sig6(v.as_f64()));
        let p = r.predep.as_ref();
        Self {
            column_a: r.column_a.clone(),
            column_b: r.column_b.clone(),
            overlap_n: r.overlap_n,
            predep_alpha: f(p.map(|p| p.alpha)),
            predep_alpha_raw: f(p.map(|p| p.alpha_raw)),
            s_marginal: f(p.map(|p| p.s_marginal)),
            s_conditional: f(p.map(|p| p.s_conditional)),
            ci_lo: f(p.and_then(|p| p.ci).map(|c| c.0)),
            ci_hi: f(p.and_then(|p| p.ci).map(|c| c.1)),
            pearson: f(r.pearson),
            spearman: f(r.spearman),
            dcor: f(r.dcor),
            degenerate_bins: p.map(|p| p.degenerate_bins),
            seed: r.seed.value(),
        }
    }
}

/// Writes the reports to `writer`.
pub fn write_report<T: Scalar, W: Write>(reports: &[PairReport<T>], format: ReportFormat, writer: W) -> Result<()> {
    let rows: Vec<ReportRow> = reports.iter().map(ReportRow::from_report).collect();
    write_rows(&rows, format, writer).map_err(|message| Error::Format {
        path: "<output>".into(),
        message,
    })
}

fn write_rows<W: Write>(rows: &[ReportRow], format: ReportFormat, mut writer: W) -> std::result::Result<(), String> {
    match format {
        ReportFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(writer);
            w.write_record(REPORT_COLUMNS).map_err(|e| e.to_string())?;
            for row in rows {
                w.serialize(row).map_err(|e| e.to_string())?;
            }
            w.flush().map_err(|e| e.to_string())
        }
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut writer, rows).map_err(|e| e.to_string())?;
            writer.write_all(b"\n").map_err(|e| e.to_string())?;
            writer.flush().map_err(|e| e.to_string())
        }
    }
}

/// Writes the reports to `path`.
pub fn emit_report<T: Scalar>(reports: &[PairReport<T>], format: ReportFormat, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io)?;
    let mut writer = BufWriter::new(file);
    let rows: Vec<ReportRow> = reports.iter().map(ReportRow::from_report).collect();
    write_rows(&rows, format, &mut writer).map_err(|message| Error::Format {
        path: path.to_path_buf(),
        message,
    })?;
    writer.flush().map_err(io)
}

/// Parses a JSON report back into rows.
pub fn parse_json_report(text: &str) -> Result<Vec<ReportRow>> {
    serde_json::from_str(text).map_err(|e| Error::Format {
        path: "<json>".into(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::{Direction, PredepResult};
    use crate::sampling::RngSeed;

    fn sample() -> PairReport<f64> {
        PairReport {
            column_a: "gdp".into(),
            column_b: "life, expectancy".into(),
            direction: Direction::YGivenX,
            overlap_n: 120,
            predep: Some(PredepResult {
                alpha_raw: 0.123456789,
                alpha: 0.123456789,
                s_marginal: 1.0 / 3.0,
                s_conditional: 2.0e-7 / 3.0,
                direction: Direction::YGivenX,
                ci: Some((0.1, 0.2)),
                degenerate_bins: 1,
                bins: 11,
                marginal_degenerate: false,
            }),
            pearson: Some(-0.5),
            spearman: None,
            dcor: Some(0.75),
            seed: RngSeed(42),
        }
    }

    #[test]
    fn sig6_rounding() {
        assert_eq!(round_sig6(0.123456789), 0.123457);
        assert_eq!(round_sig6(123456789.0), 123457000.0);
        assert_eq!(round_sig6(0.0), 0.0);
        assert_eq!(round_sig6(-9.9999996), -10.0);
    }

    #[test]
    fn empty_reports() {
        let mut csv = Vec::new();
        write_report::<f64, _>(&[], ReportFormat::Csv, &mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), REPORT_COLUMNS.join(",") + "\n");
        let mut json = Vec::new();
        write_report::<f64, _>(&[], ReportFormat::Json, &mut json).unwrap();
        assert_eq!(String::from_utf8(json).unwrap().trim(), "[]");
    }

    #[test]
    fn one_row_has_fourteen_fields() {
        let mut buf = Vec::new();
        write_report(&[sample()], ReportFormat::Csv, &mut buf).unwrap();
        let mut rdr = csv::Reader::from_reader(buf.as_slice());
        let headers = rdr.headers().unwrap().clone();
        assert_eq!(headers.iter().collect::<Vec<_>>(), REPORT_COLUMNS);
        let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].len(), 14);
        assert_eq!(&rows[0][1], "life, expectancy");
        assert_eq!(&rows[0][3], "0.123457");
        assert_eq!(&rows[0][10], "");
    }

    #[test]
    fn json_round_trip() {
        let mut buf = Vec::new();
        write_report(&[sample()], ReportFormat::Json, &mut buf).unwrap();
        let rows = parse_json_report(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(rows, vec![ReportRow::from_report(&sample())]);
        let r = &rows[0];
        assert_eq!(r.s_marginal, Some(0.333333));
        assert_eq!(r.s_conditional, Some(6.66667e-8));
        assert_eq!(r.spearman, None);
        assert_eq!(r.seed, 42);
    }

    #[test]
    fn io_error_names_path() {
        let err = emit_report::<f64>(&[], ReportFormat::Csv, "/nonexistent/dir/out.csv").unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/out.csv"));
    }
}
