//! CSV tables and static SVG plots for experiment results.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::{EnsembleRecord, TraceSeries};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub fn ensemble_csv<T: Real>(records: &[EnsembleRecord<T>]) -> String {
    let mut out = String::from("trial,dim,c2,ef,final_fidelity,final_probability,k_used\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{:?},{:?},{:?},{:?},{}",
            r.trial, r.dim, r.c2, r.ef, r.final_fidelity, r.final_probability, r.k_used
        );
    }
    out
}

pub fn trace_csv<T: Real>(series: &[TraceSeries<T>]) -> String {
    let mut out = String::from("dim,iteration,probability,fidelity,k_marker\n");
    for s in series {
        for r in &s.trace.records {
            let _ = writeln!(
                out,
                "{},{},{:?},{:?},{}",
                s.dim, r.iteration, r.probability, r.fidelity, s.k_marker
            );
        }
    }
    out
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 56.0;
const RIGHT: f64 = 132.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 44.0;

struct Plot {
    body: String,
    x_max: f64,
}

impl Plot {
    fn new(title: &str, x_label: &str, x_max: f64) -> Self {
        let x_max = x_max.max(1.0);
        let mut body = String::new();
        let _ = writeln!(
            body,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(body, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            body,
            r#"<text x="{:.1}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
            LEFT + (WIDTH - LEFT - RIGHT) / 2.0,
            title
        );
        let mut plot = Plot { body, x_max };
        let (x0, y0) = plot.map(0.0, 0.0);
        let (x1, y1) = plot.map(x_max, 1.0);
        let _ = writeln!(
            plot.body,
            r#"<rect x="{x0:.1}" y="{y1:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="black"/>"#,
            x1 - x0,
            y0 - y1
        );
        for i in 0..=5 {
            let v = i as f64 / 5.0;
            let (_, y) = plot.map(0.0, v);
            let _ = writeln!(
                plot.body,
                r##"<line x1="{x0:.1}" y1="{y:.1}" x2="{x1:.1}" y2="{y:.1}" stroke="#dddddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">{v:.1}</text>"##,
                x0 - 6.0,
                y + 4.0
            );
        }
        let ticks = x_max.min(10.0) as usize;
        for i in 0..=ticks {
            let v = (x_max * i as f64 / ticks as f64).round();
            let (x, _) = plot.map(v, 0.0);
            let _ = writeln!(
                plot.body,
                r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{v}</text>"#,
                y0 + 16.0
            );
        }
        let _ = writeln!(
            plot.body,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{x_label}</text>"#,
            (x0 + x1) / 2.0,
            HEIGHT - 8.0
        );
        plot
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let y = y.clamp(0.0, 1.0);
        let px = LEFT + x / self.x_max * (WIDTH - LEFT - RIGHT);
        let py = HEIGHT - BOTTOM - y * (HEIGHT - TOP - BOTTOM);
        (px, py)
    }

    fn series(&mut self, slot: usize, label: &str, color: &str, points: &[(f64, f64)]) {
        let pts: Vec<String> = points
            .iter()
            .map(|&(x, y)| {
                let (px, py) = self.map(x, y);
                format!("{px:.2},{py:.2}")
            })
            .collect();
        let _ = writeln!(
            self.body,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        let ly = TOP + 12.0 + 18.0 * slot as f64;
        let lx = WIDTH - RIGHT + 12.0;
        let _ = writeln!(
            self.body,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{:.1}">{label}</text>"#,
            lx + 18.0,
            lx + 24.0,
            ly + 4.0
        );
    }

    fn marker(&mut self, x: f64, label: &str) {
        let (px, top) = self.map(x, 1.0);
        let (_, bottom) = self.map(x, 0.0);
        let _ = writeln!(
            self.body,
            r#"<line x1="{px:.1}" y1="{top:.1}" x2="{px:.1}" y2="{bottom:.1}" stroke="black" stroke-dasharray="6,4"/><text x="{:.1}" y="{:.1}">{label}</text>"#,
            px + 4.0,
            top + 14.0
        );
    }

    fn finish(mut self) -> String {
        self.body.push_str("</svg>\n");
        self.body
    }
}

const FIDELITY: &str = "#1f77b4";
const PROBABILITY: &str = "#d62728";
const ESTIMATE: &str = "#2ca02c";

/// Fidelity, probability and estimated fidelity per trial for one `dim`.
pub fn ensemble_svg<T: Real>(records: &[EnsembleRecord<T>], dim: usize) -> String {
    let rs: Vec<_> = records.iter().filter(|r| r.dim == dim).collect();
    let x_max = rs.iter().map(|r| r.trial).max().unwrap_or(0) as f64;
    let mut plot = Plot::new(&format!("order {dim}"), "trial", x_max);
    let pick = |f: &dyn Fn(&EnsembleRecord<T>) -> T| -> Vec<(f64, f64)> {
        rs.iter().map(|r| (r.trial as f64, f(r).as_f64())).collect()
    };
    plot.series(0, "fidelity", FIDELITY, &pick(&|r| r.final_fidelity));
    plot.series(1, "probability", PROBABILITY, &pick(&|r| r.final_probability));
    plot.series(2, "estimated", ESTIMATE, &pick(&|r| r.ef));
    plot.finish()
}

/// Probability and fidelity per iteration with a dashed marker at `k`.
pub fn trace_svg<T: Real>(series: &TraceSeries<T>) -> String {
    let recs = &series.trace.records;
    let x_max = recs.last().map_or(0, |r| r.iteration) as f64;
    let mut plot = Plot::new(&format!("order {}", series.dim), "iteration", x_max);
    let fid: Vec<_> = recs.iter().map(|r| (r.iteration as f64, r.fidelity.as_f64())).collect();
    let prob: Vec<_> = recs.iter().map(|r| (r.iteration as f64, r.probability.as_f64())).collect();
    plot.series(0, "fidelity", FIDELITY, &fid);
    plot.series(1, "probability", PROBABILITY, &prob);
    plot.marker(series.k_marker as f64, &format!("k={}", series.k_marker));
    plot.finish()
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}

/// `ensemble.csv` plus `ensemble_<dim>.svg` per dimension.
pub fn write_ensemble<T: Real>(records: &[EnsembleRecord<T>], dir: &Path) -> Result<Vec<PathBuf>> {
    if records.is_empty() {
        return Err(Error::InvalidConfig("no records to write".into()));
    }
    fs::create_dir_all(dir)?;
    let mut written = vec![write(dir, "ensemble.csv", &ensemble_csv(records))?];
    let mut dims: Vec<usize> = records.iter().map(|r| r.dim).collect();
    dims.dedup();
    for d in dims {
        written.push(write(dir, &format!("ensemble_{d}.svg"), &ensemble_svg(records, d))?);
    }
    Ok(written)
}

/// `trace.csv` plus `trace_<dim>.svg` per dimension.
pub fn write_traces<T: Real>(series: &[TraceSeries<T>], dir: &Path) -> Result<Vec<PathBuf>> {
    if series.is_empty() {
        return Err(Error::InvalidConfig("no traces to write".into()));
    }
    fs::create_dir_all(dir)?;
    let mut written = vec![write(dir, "trace.csv", &trace_csv(series))?];
    for s in series {
        written.push(write(dir, &format!("trace_{}.svg", s.dim), &trace_svg(s))?);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;

    fn cfg(kind: ExperimentKind) -> ExperimentConfig {
        ExperimentConfig {
            dims: vec![8],
            trials: 100,
            seed: 2,
            variant: Variant::Adjoint,
            experiment: kind,
            ..Default::default()
        }
    }

    #[test]
    fn ensemble_csv_has_header_and_rows() {
        let recs = run_ensemble::<f64>(&cfg(ExperimentKind::Ensemble)).unwrap();
        let csv = ensemble_csv(&recs);
        assert_eq!(csv.lines().count(), 101);
        assert_eq!(
            csv.lines().next().unwrap(),
            "trial,dim,c2,ef,final_fidelity,final_probability,k_used"
        );
        assert_eq!(csv, ensemble_csv(&run_ensemble::<f64>(&cfg(ExperimentKind::Ensemble)).unwrap()));
    }

    #[test]
    fn trace_svg_structure() {
        let series = run_trace::<f64>(&cfg(ExperimentKind::Trace)).unwrap();
        let svg = trace_svg(&series[0]);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg.matches("stroke-dasharray").count(), 1);
        assert!(svg.contains(&format!("k={}", series[0].k_marker)));
        assert!(!svg.contains("<script"));
        let csv = trace_csv(&series);
        assert!(csv.starts_with("dim,iteration,probability,fidelity,k_marker\n"));
    }

    #[test]
    fn writes_files_and_reports_bad_paths() {
        let recs = run_ensemble::<f64>(&ExperimentConfig { trials: 4, ..cfg(ExperimentKind::Ensemble) }).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let files = write_ensemble(&recs, dir.path()).unwrap();
        assert_eq!(files.len(), 2);
        assert!(files.iter().all(|f| f.exists()));

        let blocker = dir.path().join("file");
        std::fs::write(&blocker, "x").unwrap();
        assert!(matches!(write_ensemble(&recs, &blocker.join("sub")), Err(Error::Io(_))));
        assert!(write_ensemble::<f64>(&[], dir.path()).is_err());
    }
}
