//! Report files: metrics.json, predictions.csv, scatter.svg and the
//! cross-model comparison table.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{EvalError, EvalReport, Metrics};
use crate::io::write_atomic;
use crate::models::ModelKind;

pub const METRICS_FILE: &str = "metrics.json";
pub const PREDICTIONS_FILE: &str = "predictions.csv";
pub const SCATTER_FILE: &str = "scatter.svg";

pub fn predictions_csv(report: &EvalReport) -> Result<Vec<u8>, EvalError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for p in &report.pairs {
        w.serialize(p)?;
    }
    w.into_inner().map_err(|e| EvalError::Io(e.into_error()))
}

/// Predicted (y) against actual (x) on fixed 0-100 axes with the identity line.
pub fn scatter_svg(report: &EvalReport) -> String {
    const SIZE: f64 = 400.0;
    const PAD: f64 = 50.0;
    let px = |v: f64| PAD + v / 100.0 * SIZE;
    let py = |v: f64| PAD + SIZE - v / 100.0 * SIZE;
    let total = SIZE + 2.0 * PAD;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="{total}" viewBox="0 0 {total} {total}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{total}" height="{total}" fill="white"/>"#
    );
    for tick in (0..=100).step_by(20) {
        let t = tick as f64;
        let _ = writeln!(
            s,
            r##"<line x1="{x}" y1="{y0}" x2="{x}" y2="{y1}" stroke="#ddd"/><text x="{x}" y="{ty}" text-anchor="middle">{tick}</text>"##,
            x = px(t),
            y0 = py(0.0),
            y1 = py(100.0),
            ty = py(0.0) + 18.0
        );
        let _ = writeln!(
            s,
            r##"<line x1="{x0}" y1="{y}" x2="{x1}" y2="{y}" stroke="#ddd"/><text x="{tx}" y="{ty}" text-anchor="end">{tick}</text>"##,
            x0 = px(0.0),
            x1 = px(100.0),
            y = py(t),
            tx = px(0.0) - 6.0,
            ty = py(t) + 4.0
        );
    }
    let _ = writeln!(
        s,
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#888" stroke-dasharray="4 4"/>"##,
        px(0.0),
        py(0.0),
        px(100.0),
        py(100.0)
    );
    for p in &report.pairs {
        let _ = writeln!(
            s,
            r##"<circle cx="{:.2}" cy="{:.2}" r="3" fill="#1f77b4"><title>{}</title></circle>"##,
            px(p.actual.clamp(0.0, 100.0)),
            py(p.predicted.clamp(0.0, 100.0)),
            xml_escape(&p.company)
        );
    }
    let m = &report.metrics;
    let r = m.pearson_r.map_or("n/a".to_string(), |r| format!("{r:.3}"));
    let _ = writeln!(
        s,
        r#"<text x="{}" y="20" text-anchor="middle">{} holdout: MAE {}, r = {}, n = {}</text>"#,
        total / 2.0,
        m.model,
        m.mae_display,
        r,
        m.n_test
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">actual</text>"#,
        total / 2.0,
        total - 8.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{c}" text-anchor="middle" transform="rotate(-90 14 {c})">predicted</text>"#,
        c = total / 2.0
    );
    s.push_str("</svg>\n");
    s
}

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Writes metrics.json, predictions.csv and scatter.svg into `dir`.
pub fn save_report(dir: impl AsRef<Path>, report: &EvalReport) -> Result<(), EvalError> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let mut json = serde_json::to_vec_pretty(&report.metrics)?;
    json.push(b'\n');
    write_atomic(dir.join(METRICS_FILE), &json)?;
    write_atomic(dir.join(PREDICTIONS_FILE), &predictions_csv(report)?)?;
    write_atomic(dir.join(SCATTER_FILE), scatter_svg(report).as_bytes())?;
    Ok(())
}

pub fn load_metrics(path: impl AsRef<Path>) -> Result<Metrics, EvalError> {
    Ok(serde_json::from_slice(&std::fs::read(path)?)?)
}

/// One line of the model comparison table. Missing correlation is left blank.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub kind: ModelKind,
    pub mae: f64,
    pub r: Option<f64>,
    pub p: Option<f64>,
}

impl From<&Metrics> for ComparisonRow {
    fn from(m: &Metrics) -> Self {
        ComparisonRow {
            kind: m.model,
            mae: m.mae,
            r: m.pearson_r,
            p: m.p_value,
        }
    }
}

pub fn comparison_csv(rows: &[ComparisonRow]) -> Result<Vec<u8>, EvalError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["kind", "mae", "r", "p"])?;
    let opt = |v: Option<f64>| v.map_or(String::new(), |v| v.to_string());
    for row in rows {
        w.write_record([
            row.kind.to_string(),
            row.mae.to_string(),
            opt(row.r),
            opt(row.p),
        ])?;
    }
    w.into_inner().map_err(|e| EvalError::Io(e.into_error()))
}

pub fn save_comparison(path: impl AsRef<Path>, rows: &[ComparisonRow]) -> Result<(), EvalError> {
    write_atomic(path.as_ref(), &comparison_csv(rows)?)?;
    Ok(())
}
