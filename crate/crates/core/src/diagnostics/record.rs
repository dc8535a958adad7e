use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::fit::{fit_decay_exponent, DecayFit};
use crate::error::{Error, Result};

/// A fitted slope with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeRecord {
    pub series: String,
    pub fit: DecayFit,
    /// Reference exponent from the linear theory, if any.
    pub predicted: Option<f64>,
}

/// Sampled time series of one run.
///
/// Column `i` of `values` belongs to `columns[i]`; rows follow `times`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub columns: Vec<String>,
    pub times: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub slopes: Vec<SlopeRecord>,
    /// Free-form run metadata (configuration echo, final accumulators).
    pub meta: serde_json::Map<String, serde_json::Value>,
}

impl RunRecord {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            ..Self::default()
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Appends one row; times must increase and values must be finite.
    pub fn push(&mut self, t: f64, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Dimension(format!(
                "row has {} values for {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        if self.times.last().is_some_and(|&last| t <= last) {
            return Err(Error::Domain(format!("sample time {t} does not increase")));
        }
        if let Some((i, v)) = row.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Rejected(format!(
                "non-finite value {v} in column '{}' at t = {t}",
                self.columns[i]
            )));
        }
        self.times.push(t);
        self.values.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.values.iter().map(|r| r[i]).collect())
    }

    /// Fits the named series on `window` and stores the result.
    pub fn fit(&mut self, name: &str, window: (f64, f64), predicted: Option<f64>) -> Result<DecayFit> {
        let y = self
            .column(name)
            .ok_or_else(|| Error::Fit(format!("no series named '{name}'")))?;
        let fit = fit_decay_exponent(&self.times, &y, window)?;
        self.slopes.push(SlopeRecord {
            series: name.to_string(),
            fit,
            predicted,
        });
        Ok(fit)
    }

    pub fn slope(&self, name: &str) -> Option<&SlopeRecord> {
        self.slopes.iter().find(|s| s.series == name)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let mut header = vec!["t".to_string()];
        header.extend(self.columns.iter().cloned());
        writeln!(w, "{}", header.join(","))?;
        for (t, row) in self.times.iter().zip(&self.values) {
            let mut line = t.to_string();
            for v in row {
                line.push(',');
                line.push_str(&v.to_string());
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    pub fn save_json(&self, path: &Path) -> Result<()> {
        let f = std::io::BufWriter::new(std::fs::File::create(path)?);
        serde_json::to_writer_pretty(f, self)?;
        Ok(())
    }

    pub fn load_json(path: &Path) -> Result<Self> {
        let f = std::io::BufReader::new(std::fs::File::open(path)?);
        Ok(serde_json::from_reader(f)?)
    }
}
