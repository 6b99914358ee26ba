//! CSV and image output.
//!
//! | file            | columns                                                        |
//! |-----------------|----------------------------------------------------------------|
//! | metrics         | `step,discovered,deaths,discovered_stderr,deaths_stderr`       |
//! | run log         | `step,z,a,z_next,reward,event`                                 |
//! | heatmap         | `x,y,value` (value empty for walls)                            |
//! | summary         | `reward,seeds,steps,discovered_mean,discovered_stderr,deaths_mean,deaths_stderr,ratio_mean,ratio_stderr` |
//!
//! Images are binary PPM (`P6`): each non-wall cell is a gray level scaled
//! linearly from the field minimum (black) to its maximum (white); walls
//! are black.

use super::heatmap::HeatField;
use super::metrics::MetricSeries;
use super::run::RunLog;
use super::HarnessError;
use serde::Serialize;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

#[derive(Serialize)]
struct MetricRow {
    step: usize,
    discovered: f64,
    deaths: f64,
    discovered_stderr: f64,
    deaths_stderr: f64,
}

#[derive(Serialize)]
struct LogRow {
    step: usize,
    z: u32,
    a: usize,
    z_next: u32,
    reward: f64,
    event: &'static str,
}

#[derive(Serialize)]
struct HeatRow {
    x: usize,
    y: usize,
    value: Option<f64>,
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    reward: &'a str,
    seeds: usize,
    steps: usize,
    discovered_mean: f64,
    discovered_stderr: f64,
    deaths_mean: f64,
    deaths_stderr: f64,
    ratio_mean: f64,
    ratio_stderr: f64,
}

fn create(path: &Path) -> Result<BufWriter<File>, HarnessError> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    Ok(BufWriter::new(File::create(path)?))
}

pub fn write_metrics_csv<W: Write>(series: &MetricSeries, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    for t in 0..series.steps() {
        w.serialize(MetricRow {
            step: t + 1,
            discovered: series.discovered_mean[t],
            deaths: series.deaths_mean[t],
            discovered_stderr: series.discovered_stderr[t],
            deaths_stderr: series.deaths_stderr[t],
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_run_log_csv<W: Write>(log: &RunLog, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    for r in &log.records {
        w.serialize(LogRow { step: r.step, z: r.z.0, a: r.a, z_next: r.next.0, reward: r.reward, event: r.event.as_str() })?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_heatmap_csv<W: Write>(field: &HeatField, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    for y in 0..field.height {
        for x in 0..field.width {
            w.serialize(HeatRow { x, y, value: field.get(x, y) })?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary_csv<W: Write>(all: &[MetricSeries], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    for s in all {
        let name = s.reward.kind.as_str();
        w.serialize(SummaryRow {
            reward: name,
            seeds: s.seeds.len(),
            steps: s.steps(),
            discovered_mean: s.final_discovered_mean(),
            discovered_stderr: s.discovered_stderr.last().copied().unwrap_or(0.0),
            deaths_mean: s.final_deaths_mean(),
            deaths_stderr: s.deaths_stderr.last().copied().unwrap_or(0.0),
            ratio_mean: s.ratio_mean,
            ratio_stderr: s.ratio_stderr,
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Gray level of each cell, `None` for walls. A constant field maps to black.
pub fn gray_levels(field: &HeatField) -> Vec<Option<u8>> {
    let (lo, hi) = field.range().unwrap_or((0.0, 0.0));
    let span = hi - lo;
    field
        .values
        .iter()
        .map(|v| {
            v.map(|v| if span > 0.0 { (255.0 * (v - lo) / span).round().clamp(0.0, 255.0) as u8 } else { 0 })
        })
        .collect()
}

pub fn write_ppm<W: Write>(field: &HeatField, mut out: W) -> Result<(), HarnessError> {
    write!(out, "P6\n{} {}\n255\n", field.width, field.height)?;
    let mut pixels = Vec::with_capacity(field.values.len() * 3);
    for g in gray_levels(field) {
        let g = g.unwrap_or(0);
        pixels.extend_from_slice(&[g, g, g]);
    }
    out.write_all(&pixels)?;
    out.flush()?;
    Ok(())
}

pub fn export_metrics(series: &MetricSeries, path: &Path) -> Result<(), HarnessError> {
    write_metrics_csv(series, create(path)?)
}

pub fn export_run_log(log: &RunLog, path: &Path) -> Result<(), HarnessError> {
    write_run_log_csv(log, create(path)?)
}

pub fn export_summary(all: &[MetricSeries], path: &Path) -> Result<(), HarnessError> {
    write_summary_csv(all, create(path)?)
}

/// Writes `<stem>.csv` and `<stem>.ppm` into `dir`.
pub fn export_heatmap(field: &HeatField, dir: &Path, stem: &str) -> Result<(), HarnessError> {
    write_heatmap_csv(field, create(&dir.join(format!("{stem}.csv")))?)?;
    write_ppm(field, create(&dir.join(format!("{stem}.ppm")))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::heatmap::HeatMetric;
    use crate::harness::metrics::aggregate;
    use crate::harness::{run_single, EnvSpec, RunConfig};

    fn field() -> HeatField {
        HeatField { metric: HeatMetric::Sum, width: 3, height: 1, values: vec![None, Some(1.0), Some(3.0)] }
    }

    #[test]
    fn metrics_shape() {
        let cfg = RunConfig { env: EnvSpec::Small, total_steps: 3, ..RunConfig::default() };
        let log = run_single(&cfg, 0).unwrap();
        let series = aggregate(cfg.reward, &[log.clone()]);
        let mut out = Vec::new();
        write_metrics_csv(&series, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "step,discovered,deaths,discovered_stderr,deaths_stderr");

        let mut out = Vec::new();
        write_run_log_csv(&log, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().next().unwrap(), "step,z,a,z_next,reward,event");
        assert_eq!(text.lines().count(), 4);
    }

    #[test]
    fn ppm_layout() {
        let mut out = Vec::new();
        write_ppm(&field(), &mut out).unwrap();
        let header = b"P6\n3 1\n255\n";
        assert_eq!(&out[..header.len()], header);
        assert_eq!(&out[header.len()..], &[0, 0, 0, 0, 0, 0, 255, 255, 255]);
    }

    #[test]
    fn heatmap_csv_marks_walls_empty() {
        let mut out = Vec::new();
        write_heatmap_csv(&field(), &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "x,y,value\n0,0,\n1,0,1.0\n2,0,3.0\n");
    }

    #[test]
    fn re_export_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        export_heatmap(&field(), dir.path(), "a").unwrap();
        export_heatmap(&field(), dir.path(), "b").unwrap();
        for ext in ["csv", "ppm"] {
            let a = std::fs::read(dir.path().join(format!("a.{ext}"))).unwrap();
            let b = std::fs::read(dir.path().join(format!("b.{ext}"))).unwrap();
            assert_eq!(a, b);
        }
    }
}
