//! CSV, JSON-lines and SVG output for traces and check reports.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use super::checks::CheckReport;
use super::trial::{Trace, TraceRow};
use crate::concepts::Domain;
use crate::error::{Error, Result};
use crate::processes::AdversaryTrace;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
    Svg,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            "svg" => Ok(Format::Svg),
            other => Err(Error::Config(format!("unknown format {other}"))),
        }
    }
}

pub const ADVERSARY_COLUMNS: [&str; 5] = ["t", "point", "y", "node", "on_path"];

pub const TRACE_COLUMNS: [&str; 7] = ["t", "point", "y", "yhat", "mistake", "cum_mistakes", "cum_regret"];

fn csv_error(e: csv::Error) -> Error {
    Error::Parse {
        line: e.position().map_or(0, |p| p.line() as usize),
        msg: e.to_string(),
    }
}

/// Rows of one or more traces under a single header.
pub fn traces_csv(traces: &[Trace]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(TRACE_COLUMNS).map_err(csv_error)?;
    for row in traces.iter().flat_map(|t| &t.rows) {
        w.serialize(row).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invariant(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn trace_csv(trace: &Trace) -> Result<String> {
    traces_csv(std::slice::from_ref(trace))
}

pub fn parse_trace_csv(text: &str) -> Result<Vec<TraceRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers().map_err(csv_error)?.iter().map(str::to_string).collect();
    if header != TRACE_COLUMNS {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected columns {}", TRACE_COLUMNS.join(",")),
        });
    }
    r.deserialize().map(|row| row.map_err(csv_error)).collect()
}

/// Adversary rows; `node` is empty when the BFS index does not fit in 64 bits.
pub fn adversary_csv(trace: &AdversaryTrace, domain: &Domain) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(ADVERSARY_COLUMNS).map_err(csv_error)?;
    for r in &trace.rows {
        w.write_record([
            r.t.to_string(),
            domain.id(r.point).to_string(),
            r.y.as_u8().to_string(),
            r.node.map_or(String::new(), |n| n.to_string()),
            u8::from(r.on_path).to_string(),
        ])
        .map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invariant(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// A metadata line per trace, then its rows.
pub fn traces_jsonl(traces: &[Trace]) -> String {
    #[derive(Serialize)]
    struct Meta<'a> {
        meta: &'a super::trial::TraceMeta,
    }
    let mut out = String::new();
    for t in traces {
        out.push_str(&serde_json::to_string(&Meta { meta: &t.meta }).expect("serializable"));
        out.push('\n');
        for row in &t.rows {
            out.push_str(&serde_json::to_string(row).expect("serializable"));
            out.push('\n');
        }
    }
    out
}

pub fn report_csv(report: &CheckReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "statistic"]).map_err(csv_error)?;
    for (n, v) in &report.series {
        w.write_record([n.to_string(), format!("{v:.6}")]).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invariant(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn report_jsonl(report: &CheckReport) -> String {
    serde_json::to_string(report).expect("serializable") + "\n"
}

/// One named polyline.
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// A line chart as SVG text.
pub fn svg_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let all = series.iter().flat_map(|s| &s.points);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y1) = (0.0, 1.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(out, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(title));
    let _ = writeln!(
        out,
        r#"<line x1="{m}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/><line x1="{m}" y1="{m}" x2="{m}" y2="{b}" stroke="black"/>"#,
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    for (v, anchor_x, anchor_y) in [(x0, sx(x0), HEIGHT - MARGIN + 15.0), (x1, sx(x1), HEIGHT - MARGIN + 15.0)] {
        let _ = writeln!(out, r#"<text x="{anchor_x:.1}" y="{anchor_y:.1}" text-anchor="middle">{}</text>"#, tick(v));
    }
    for v in [y0, y1] {
        let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, MARGIN - 5.0, sy(v) + 4.0, tick(v));
    }
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, WIDTH / 2.0, HEIGHT - 10.0, escape(x_label));
    let _ = writeln!(
        out,
        r#"<text x="15" y="{y}" text-anchor="middle" transform="rotate(-90 15 {y})">{}</text>"#,
        escape(y_label),
        y = HEIGHT / 2.0
    );
    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" fill="{color}">{}</text>"#,
            WIDTH - MARGIN - 120.0,
            MARGIN + 15.0 * i as f64,
            escape(&s.name)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn tick(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e9 {
        format!("{v:.0}")
    } else {
        format!("{v:.3}")
    }
}

/// `cum_mistakes / t` against `t`, one line per trace.
pub fn traces_svg(traces: &[Trace]) -> String {
    let series: Vec<Series> = traces
        .iter()
        .map(|t| Series {
            name: format!("{} seed {}", t.meta.learner, t.meta.seed),
            points: t.rows.iter().map(|r| (r.t as f64, r.cum_mistakes as f64 / r.t as f64)).collect(),
        })
        .collect();
    svg_chart("mistake rate", "t", "cum_mistakes / t", &series)
}

pub fn report_svg(report: &CheckReport) -> String {
    let series = [Series {
        name: format!("{} ({})", report.check, report.verdict),
        points: report.series.iter().map(|&(n, v)| (n as f64, v)).collect(),
    }];
    svg_chart(&report.check, "n", &report.statistic, &series)
}

pub fn render_traces(traces: &[Trace], format: Format) -> Result<String> {
    Ok(match format {
        Format::Csv => traces_csv(traces)?,
        Format::Jsonl => traces_jsonl(traces),
        Format::Svg => traces_svg(traces),
    })
}

pub fn render_report(report: &CheckReport, format: Format) -> Result<String> {
    Ok(match format {
        Format::Csv => report_csv(report)?,
        Format::Jsonl => report_jsonl(report),
        Format::Svg => report_svg(report),
    })
}

pub fn write_file(path: impl AsRef<Path>, contents: &str) -> Result<()> {
    let path = path.as_ref();
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::trial::TraceMeta;

    fn trace(n: usize) -> Trace {
        let rows = (1..=n)
            .map(|t| TraceRow {
                t,
                point: format!("p{t}"),
                y: (t % 2) as u8,
                yhat: 0,
                mistake: (t % 2) as u8,
                cum_mistakes: t.div_ceil(2) as u64,
                cum_regret: t.div_ceil(2) as i64,
            })
            .collect();
        Trace {
            meta: TraceMeta {
                learner: "constant".into(),
                process: "iid".into(),
                class: "thresholds(3)".into(),
                seed: 1,
                comparator: "truth".into(),
                caps: String::new(),
            },
            rows,
        }
    }

    #[test]
    fn csv_shapes() {
        assert_eq!(trace_csv(&trace(0)).unwrap(), "t,point,y,yhat,mistake,cum_mistakes,cum_regret\n");
        assert_eq!(trace_csv(&trace(3)).unwrap().lines().count(), 4);
    }

    #[test]
    fn csv_round_trip() {
        let t = trace(7);
        assert_eq!(parse_trace_csv(&trace_csv(&t).unwrap()).unwrap(), t.rows);
        assert!(parse_trace_csv("a,b\n1,2\n").is_err());
    }

    #[test]
    fn other_formats() {
        let t = trace(3);
        assert_eq!(traces_jsonl(std::slice::from_ref(&t)).lines().count(), 4);
        let svg = traces_svg(&[t]);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(traces_svg(&[]).contains("</svg>"));
        assert!("pdf".parse::<Format>().is_err());
    }

    #[test]
    fn writes_into_new_directories() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a/b/out.csv");
        write_file(&path, "x\n").unwrap();
        assert_eq!(std::fs::read_to_string(path).unwrap(), "x\n");
    }
}
