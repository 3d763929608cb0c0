//! CSV tables written by the subcommands.
//!
//! Files have a header row, comma separators and LF line endings. Floats use
//! the shortest text that parses back to the same value, so reruns with the
//! same seeds give byte-identical files.

use std::path::Path;

use qir_core::correlator::CorrelationSeries;
use qir_core::experiment::{ComparisonReport, SweepTable, TrialResult};

use crate::config::fmt_f64;
use crate::CliError;

pub const SERIES_HEADER: &[&str] = &["lag_bins", "c1", "c2", "s", "se1", "se2", "n_overlap"];
pub const TRIALS_HEADER: &[&str] = &["trial_index", "detected", "lag_hat", "distance_m", "peak_density", "snr"];
pub const SWEEP_HEADER: &[&str] = &["eta", "lo_intensity", "p_detect", "ci_low", "ci_high", "crossing_flag"];
pub const COMPARE_HEADER: &[&str] = &["pipeline", "peak_density_mc", "peak_density_pred", "snr", "p_detect"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<String> = lines
            .next()
            .ok_or_else(|| CliError::Config("CSV file is empty".into()))?
            .split(',')
            .map(|h| h.trim().to_string())
            .collect();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let row: Vec<String> = line.split(',').map(|c| c.trim().to_string()).collect();
            if row.len() != header.len() {
                return Err(CliError::Config(format!(
                    "CSV row {} has {} fields, header has {}",
                    i + 2,
                    row.len(),
                    header.len()
                )));
            }
            rows.push(row);
        }
        Ok(Self { header, rows })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Parses column `name` as floats.
    pub fn floats(&self, name: &str) -> Result<Vec<f64>, CliError> {
        let k = self.column(name).ok_or_else(|| CliError::Config(format!("missing column {name}")))?;
        self.rows
            .iter()
            .map(|r| {
                r[k].parse::<f64>().map_err(|_| CliError::Config(format!("column {name}: cannot parse {:?}", r[k])))
            })
            .collect()
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_csv())
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
    }
}

pub fn series_table(series: &CorrelationSeries) -> Table {
    let mut t = Table::new(SERIES_HEADER);
    for k in 0..series.len() {
        t.push(vec![
            series.lags[k].to_string(),
            fmt_f64(series.c1[k]),
            fmt_f64(series.c2[k]),
            fmt_f64(series.s[k]),
            fmt_f64(series.se1[k]),
            fmt_f64(series.se2[k]),
            series.n_overlap[k].to_string(),
        ]);
    }
    t
}

pub fn trials_table(results: &[TrialResult]) -> Table {
    let mut t = Table::new(TRIALS_HEADER);
    for r in results {
        t.push(vec![
            r.trial_index.to_string(),
            r.detected.to_string(),
            r.range.lag_hat.to_string(),
            fmt_f64(r.range.distance),
            fmt_f64(r.peak_density),
            fmt_f64(r.range.snr),
        ]);
    }
    t
}

pub fn sweep_table(sweep: &SweepTable) -> Table {
    let mut t = Table::new(SWEEP_HEADER);
    for c in &sweep.cells {
        t.push(vec![
            fmt_f64(c.eta),
            fmt_f64(c.lo_intensity),
            fmt_f64(c.estimate.p_detect),
            fmt_f64(c.estimate.ci_low),
            fmt_f64(c.estimate.ci_high),
            c.crossing.to_string(),
        ]);
    }
    t
}

pub fn compare_table(report: &ComparisonReport) -> Table {
    let mut t = Table::new(COMPARE_HEADER);
    for (name, p) in [("quantum", &report.quantum), ("classical", &report.classical)] {
        t.push(vec![
            name.to_string(),
            fmt_f64(p.peak_density_mc),
            fmt_f64(p.peak_density_pred),
            fmt_f64(p.mean_snr),
            fmt_f64(p.detection.p_detect),
        ]);
    }
    t
}
