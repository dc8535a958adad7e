//! CSV, JSON and SVG output for a run record.

use std::path::{Path, PathBuf};

use plotters::prelude::*;
use strata_core::diagnostics::RunRecord;

use crate::error::{CliError, Result};

pub const CSV_NAME: &str = "record.csv";
pub const JSON_NAME: &str = "record.json";
pub const PLOT_NAME: &str = "decay.svg";

/// Exponents `(m, s, alpha)` used for the reference lines of one series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceExponents {
    pub m: f64,
    pub s: f64,
    pub alpha: f64,
}

impl ReferenceExponents {
    /// `(-(m - s) / (2 (1 + alpha)), -(1 + (m - s) / (2 (1 + alpha))))`.
    pub fn slopes(&self) -> (f64, f64) {
        let r = (self.m - self.s) / (2.0 * (1.0 + self.alpha));
        (-r, -(1.0 + r))
    }
}

/// Writes `record.csv`, `record.json` and, when `plots` is set and there is
/// something positive to draw, `decay.svg` into `dir`.
pub fn emit_report(record: &RunRecord, dir: &Path, plots: bool) -> Result<Vec<PathBuf>> {
    if record.is_empty() {
        return Err(CliError::Config("refusing to report an empty record".into()));
    }
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let csv = dir.join(CSV_NAME);
    std::fs::write(&csv, record.to_csv_string()).map_err(|e| CliError::io(&csv, e))?;
    let json = dir.join(JSON_NAME);
    record.save_json(&json).map_err(|e| match e {
        strata_core::Error::Io(io) => CliError::io(&json, io),
        other => other.into(),
    })?;
    let mut files = vec![csv, json];
    if plots {
        let svg = dir.join(PLOT_NAME);
        if plot_decay(record, &svg)? {
            files.push(svg);
        }
    }
    Ok(files)
}

/// Sobolev index encoded in a column name such as `theta_bar_H2` (default 0).
fn column_s(name: &str) -> f64 {
    name.rsplit_once("_H")
        .and_then(|(_, s)| s.parse().ok())
        .unwrap_or(0.0)
}

fn reference_for(record: &RunRecord, series: &str) -> Option<ReferenceExponents> {
    let cfg = record.meta.get("config")?;
    Some(ReferenceExponents {
        m: cfg.get("m")?.as_f64()?,
        alpha: cfg.get("alpha")?.as_f64()?,
        s: column_s(series),
    })
}

/// Log-log plot of every fitted series against `1 + t`, with the fitted line
/// and the two reference slopes anchored at the start of the fit window.
/// Returns `false` when there is nothing to draw.
pub fn plot_decay(record: &RunRecord, path: &Path) -> Result<bool> {
    let mut series: Vec<String> = record.slopes.iter().map(|s| s.series.clone()).collect();
    if series.is_empty() {
        series = record.columns.clone();
    }
    let curves: Vec<(String, Vec<(f64, f64)>)> = series
        .into_iter()
        .filter_map(|name| {
            let ys = record.column(&name)?;
            let pts: Vec<(f64, f64)> = record
                .times
                .iter()
                .zip(ys)
                .filter(|(_, y)| *y > 0.0 && y.is_finite())
                .map(|(&t, y)| (1.0 + t, y))
                .collect();
            (pts.len() >= 2).then_some((name, pts))
        })
        .collect();
    if curves.is_empty() {
        return Ok(false);
    }
    let x_max = curves.iter().flat_map(|(_, p)| p.iter().map(|q| q.0)).fold(1.0, f64::max);
    let (mut y_min, mut y_max) = (f64::INFINITY, 0.0f64);
    for (_, pts) in &curves {
        for &(_, y) in pts {
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    let y_min = y_min * 0.5;
    let y_max = y_max * 2.0;
    let x_max = if x_max > 1.0 { x_max } else { 2.0 };

    let plot_err = |e: &dyn std::fmt::Display| CliError::Plot(e.to_string());
    let root = SVGBackend::new(path, (800, 600)).into_drawing_area();
    root.fill(&WHITE).map_err(|e| plot_err(&e))?;
    let mut chart = ChartBuilder::on(&root)
        .caption("norm decay", ("sans-serif", 20))
        .margin(10)
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d((1.0..x_max).log_scale(), (y_min..y_max).log_scale())
        .map_err(|e| plot_err(&e))?;
    chart
        .configure_mesh()
        .x_desc("1 + t")
        .y_desc("norm")
        .draw()
        .map_err(|e| plot_err(&e))?;

    for (i, (name, pts)) in curves.iter().enumerate() {
        let color = Palette99::pick(i).to_rgba();
        chart
            .draw_series(LineSeries::new(pts.iter().copied(), color.stroke_width(2)))
            .map_err(|e| plot_err(&e))?
            .label(name.clone())
            .legend(move |(x, y)| PathElement::new([(x, y), (x + 16, y)], color));
        let Some(slope) = record.slope(name) else {
            continue;
        };
        let (a, b) = slope.fit.window;
        let (xa, xb) = (1.0 + a.max(0.0), 1.0 + b);
        let fit_line = |k: f64, y0: f64| [(xa, y0), (xb, y0 * (xb / xa).powf(k))];
        let y_fit = slope.fit.intercept.exp() * xa.powf(slope.fit.slope);
        chart
            .draw_series(LineSeries::new(fit_line(slope.fit.slope, y_fit), color.stroke_width(1)))
            .map_err(|e| plot_err(&e))?
            .label(format!("{name} fit {:.3}", slope.fit.slope))
            .legend(move |(x, y)| PathElement::new([(x, y), (x + 16, y)], color));
        if let Some(r) = reference_for(record, name) {
            let (k1, k2) = r.slopes();
            for (k, style) in [(k1, BLACK), (k2, RGBColor(128, 128, 128))] {
                chart
                    .draw_series(DashedLineSeries::new(fit_line(k, y_fit), 6, 4, style.into()))
                    .map_err(|e| plot_err(&e))?
                    .label(format!("reference {k:.3}"))
                    .legend(move |(x, y)| PathElement::new([(x, y), (x + 16, y)], style));
            }
        }
    }
    chart
        .configure_series_labels()
        .background_style(WHITE.mix(0.8))
        .border_style(BLACK)
        .draw()
        .map_err(|e| plot_err(&e))?;
    root.present().map_err(|e| plot_err(&e))?;
    Ok(true)
}
