//! CSV tables and the SVG slice plot.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    /// Floats are written with 17 significant digits.
    pub fn render(&self) -> String {
        match self {
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_owned())
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Float)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

pub fn emit_csv(table: &Table, path: &Path) -> Result<()> {
    std::fs::write(path, table.to_csv_string()?)?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    /// Draw as a polyline; otherwise as dots.
    pub line: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RefLine {
    pub label: String,
    pub at: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SlicePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub hlines: Vec<RefLine>,
    pub vlines: Vec<RefLine>,
}

const W: f64 = 720.0;
const H: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Renders a self-contained SVG document (no scripts, fonts or links).
pub fn render_svg(plot: &SlicePlot) -> String {
    let xs = plot.series.iter().flat_map(|s| s.points.iter().map(|p| p.0)).chain(plot.vlines.iter().map(|l| l.at));
    let ys = plot.series.iter().flat_map(|s| s.points.iter().map(|p| p.1)).chain(plot.hlines.iter().map(|l| l.at));
    let (x0, x1) = bounds(xs, 0.0);
    let (y0, y1) = bounds(ys, 0.0);
    let (x1, y1) = (pad(x0, x1), pad(y0, y1));
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * (W - LEFT - RIGHT);
    let py = |y: f64| H - BOTTOM - (y - y0) / (y1 - y0) * (H - TOP - BOTTOM);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, esc(&plot.title));

    // axes and ticks
    let (ax0, ay0, ax1, ay1) = (px(x0), py(y0), px(x1), py(y1));
    let _ = writeln!(s, r#"<line x1="{ax0:.2}" y1="{ay0:.2}" x2="{ax1:.2}" y2="{ay0:.2}" stroke="black"/>"#);
    let _ = writeln!(s, r#"<line x1="{ax0:.2}" y1="{ay0:.2}" x2="{ax0:.2}" y2="{ay1:.2}" stroke="black"/>"#);
    for i in 0..=5 {
        let x = x0 + (x1 - x0) * i as f64 / 5.0;
        let y = y0 + (y1 - y0) * i as f64 / 5.0;
        let _ = writeln!(
            s,
            r#"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="black"/><text x="{0:.2}" y="{3:.2}" text-anchor="middle">{4:.3}</text>"#,
            px(x), ay0, ay0 + 5.0, ay0 + 20.0, x
        );
        let _ = writeln!(
            s,
            r#"<line x1="{0:.2}" y1="{1:.2}" x2="{2:.2}" y2="{1:.2}" stroke="black"/><text x="{3:.2}" y="{4:.2}" text-anchor="end">{5:.3}</text>"#,
            ax0 - 5.0, py(y), ax0, ax0 - 8.0, py(y) + 4.0, y
        );
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, (ax0 + ax1) / 2.0, H - 15.0, esc(&plot.x_label));
    let _ = writeln!(
        s,
        r#"<text x="18" y="{0:.2}" text-anchor="middle" transform="rotate(-90 18 {0:.2})">{1}</text>"#,
        (ay0 + ay1) / 2.0,
        esc(&plot.y_label)
    );

    for l in &plot.hlines {
        let y = py(l.at);
        let _ = writeln!(s, r##"<line x1="{ax0:.2}" y1="{y:.2}" x2="{ax1:.2}" y2="{y:.2}" stroke="#555" stroke-dasharray="6 4"/>"##);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, ax1 - 4.0, y - 5.0, esc(&l.label));
    }
    for l in &plot.vlines {
        let x = px(l.at);
        let _ = writeln!(s, r##"<line x1="{x:.2}" y1="{ay0:.2}" x2="{x:.2}" y2="{ay1:.2}" stroke="#555" stroke-dasharray="2 3"/>"##);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x + 4.0, ay1 + 14.0, esc(&l.label));
    }

    for (i, series) in plot.series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        if series.line {
            let pts: Vec<String> = series.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
            let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#, pts.join(" "));
        } else {
            for &(x, y) in &series.points {
                let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, px(x), py(y));
            }
        }
        // legend sits in the lower-left corner, below decreasing series
        let ly = ay0 - 16.0 * (plot.series.len() - i) as f64;
        let _ = writeln!(
            s,
            r#"<rect x="{:.2}" y="{:.2}" width="12" height="4" fill="{color}"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            ax0 + 12.0, ly, ax0 + 30.0, ly + 5.0, esc(&series.name)
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn emit_svg_plot(plot: &SlicePlot, path: &Path) -> Result<()> {
    std::fs::write(path, render_svg(plot))?;
    Ok(())
}

fn bounds(values: impl Iterator<Item = f64>, floor: f64) -> (f64, f64) {
    values.filter(|v| v.is_finite()).fold((floor, floor), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

fn pad(lo: f64, hi: f64) -> f64 {
    if hi > lo {
        hi + 0.05 * (hi - lo)
    } else {
        lo + 1.0
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_table_is_header_only() {
        let t = Table::new(&["a", "b"]);
        assert_eq!(t.to_csv_string().unwrap(), "a,b\n");
    }

    #[test]
    fn floats_use_seventeen_digits() {
        let mut t = Table::new(&["x", "flag", "name", "missing"]);
        t.push(vec![0.1.into(), true.into(), "conv".into(), Cell::Empty]);
        let csv = t.to_csv_string().unwrap();
        assert_eq!(csv, "x,flag,name,missing\n1.0000000000000001e-1,true,conv,\n");
        let back: f64 = "1.0000000000000001e-1".parse().unwrap();
        assert_eq!(back, 0.1);
    }

    #[test]
    fn svg_is_self_contained() {
        let plot = SlicePlot {
            title: "t".into(),
            x_label: "|z1|".into(),
            y_label: "bound".into(),
            series: vec![Series { name: "s".into(), points: vec![(0.1, 0.5), (0.3, 0.2)], line: true }],
            hlines: vec![RefLine { label: "r/2".into(), at: 0.2 }],
            vlines: vec![RefLine { label: "beta".into(), at: 0.25 }],
        };
        let svg = render_svg(&plot);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(!svg.contains("href") && !svg.contains("<script"));
        assert!(svg.contains("r/2") && svg.contains("beta") && svg.contains("|z1|"));
    }
}
