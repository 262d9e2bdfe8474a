use std::fmt::Write as _;
use std::path::Path;

use flotilla::floatgeom::Family;
use flotilla::{ClosedConvexCurve, PlaneVector};
use serde::{Deserialize, Serialize};

use crate::run::DeltaRun;
use crate::CliError;

/// JSON Schema for `report.json`.
pub const REPORT_SCHEMA: &str = include_str!("report.schema.json");

/// Column order of `curves.csv`.
pub const CSV_HEADER: [&str; 15] = [
    "delta",
    "family",
    "s",
    "x",
    "y",
    "tx",
    "ty",
    "kappa",
    "kappa_prime",
    "chord_s",
    "chord_t",
    "alpha",
    "beta",
    "norm_c",
    "affine_norm_c",
];

/// One row of `curves.csv`: a derived-curve sample with the chord it sits on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportRecord {
    pub delta: f64,
    pub family: Family,
    pub s: f64,
    pub x: f64,
    pub y: f64,
    pub tx: f64,
    pub ty: f64,
    pub kappa: Option<f64>,
    pub kappa_prime: Option<f64>,
    pub chord_s: f64,
    pub chord_t: f64,
    pub alpha: f64,
    pub beta: f64,
    pub norm_c: f64,
    pub affine_norm_c: Option<f64>,
}

/// 17 significant digits, which round-trips every finite `f64`.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

impl ExportRecord {
    fn fields(&self) -> [String; 15] {
        [
            num(self.delta),
            self.family.as_str().to_string(),
            num(self.s),
            num(self.x),
            num(self.y),
            num(self.tx),
            num(self.ty),
            opt(self.kappa),
            opt(self.kappa_prime),
            num(self.chord_s),
            num(self.chord_t),
            num(self.alpha),
            num(self.beta),
            num(self.norm_c),
            opt(self.affine_norm_c),
        ]
    }
}

pub fn write_csv_to<W: std::io::Write>(out: W, records: &[ExportRecord]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv(path: &Path, records: &[ExportRecord]) -> Result<(), CliError> {
    write_csv_to(std::fs::File::create(path)?, records)
}

pub fn read_csv_from<R: std::io::Read>(input: R) -> Result<Vec<ExportRecord>, CliError> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(CliError::Config(format!("unexpected CSV header {header:?}")));
    }
    r.deserialize().map(|row| row.map_err(CliError::from)).collect()
}

pub fn read_csv(path: &Path) -> Result<Vec<ExportRecord>, CliError> {
    read_csv_from(std::fs::File::open(path)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub label: String,
    pub color: &'static str,
    pub points: Vec<PlaneVector>,
}

/// Everything drawn in a figure: the body, the derived curves and the chords
/// they were read off.
#[derive(Debug, Clone, PartialEq)]
pub struct SvgBundle {
    pub boundary: Vec<PlaneVector>,
    pub layers: Vec<Layer>,
    pub chords: Vec<(PlaneVector, PlaneVector)>,
}

fn color(f: Family) -> &'static str {
    match f {
        Family::FlotationBoundary => "#1f77b4",
        Family::BuoyancyCurve => "#d62728",
        Family::IlluminationBoundary => "#2ca02c",
        Family::IlluminationCentroid => "#9467bd",
    }
}

/// Chord stride used by `flotilla export svg` when none is given.
pub const DEFAULT_FIGURE_STRIDE: usize = 16;

const CHORD_COLOR: &str = "#7f7f7f";

impl SvgBundle {
    pub fn from_runs(curve: &ClosedConvexCurve, runs: &[DeltaRun], n: usize) -> Self {
        let mut layers = Vec::new();
        let mut chords = Vec::new();
        for run in runs {
            for (family, samples) in &run.families {
                layers.push(Layer {
                    label: format!("{} δ={:.4}", family.as_str(), run.delta),
                    color: color(*family),
                    points: samples.iter().map(|d| d.point).collect(),
                });
            }
            chords.extend(run.flotation.chords.iter().map(|cm| (cm.x, cm.y)));
        }
        Self { boundary: curve.sample_points(n), layers, chords }
    }

    /// Rebuilds a bundle from `curves.csv` rows, reading chord endpoints off
    /// the curve.
    pub fn from_records(curve: &ClosedConvexCurve, records: &[ExportRecord], n: usize) -> Self {
        let mut layers: Vec<(f64, Family, Layer)> = Vec::new();
        let mut chords = Vec::new();
        for r in records {
            let idx = match layers.iter().position(|(d, f, _)| *d == r.delta && *f == r.family) {
                Some(i) => i,
                None => {
                    let label = format!("{} δ={:.4}", r.family.as_str(), r.delta);
                    layers.push((r.delta, r.family, Layer { label, color: color(r.family), points: Vec::new() }));
                    layers.len() - 1
                }
            };
            layers[idx].2.points.push(PlaneVector::new(r.x, r.y));
            if r.family == Family::FlotationBoundary {
                chords.push((curve.point(r.chord_s), curve.point(r.chord_t)));
            }
        }
        Self { boundary: curve.sample_points(n), layers: layers.into_iter().map(|l| l.2).collect(), chords }
    }

    /// `(min_x, min_y, width, height)` of everything drawn, in SVG
    /// coordinates (y flipped), padded by 5% of each extent.
    pub fn view_box(&self, chord_stride: usize) -> (f64, f64, f64, f64) {
        let (mut lo, mut hi) =
            (PlaneVector::new(f64::INFINITY, f64::INFINITY), PlaneVector::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        let mut add = |p: PlaneVector| {
            let q = flip(p);
            lo = PlaneVector::new(lo.x.min(q.x), lo.y.min(q.y));
            hi = PlaneVector::new(hi.x.max(q.x), hi.y.max(q.y));
        };
        self.boundary.iter().chain(self.layers.iter().flat_map(|l| &l.points)).for_each(|p| add(*p));
        for (a, b) in self.strided_chords(chord_stride) {
            add(a);
            add(b);
        }
        let (w, h) = (hi.x - lo.x, hi.y - lo.y);
        (lo.x - 0.05 * w, lo.y - 0.05 * h, 1.1 * w, 1.1 * h)
    }

    fn strided_chords(&self, stride: usize) -> impl Iterator<Item = (PlaneVector, PlaneVector)> + '_ {
        let (take, step) = if stride == 0 { (0, 1) } else { (self.chords.len(), stride) };
        self.chords.iter().take(take).step_by(step).copied()
    }
}

fn flip(p: PlaneVector) -> PlaneVector {
    PlaneVector::new(p.x, -p.y)
}

fn polyline(points: &[PlaneVector]) -> String {
    let mut s = String::new();
    for p in points.iter().chain(points.first()) {
        let q = flip(*p);
        let _ = write!(s, "{},{} ", q.x, q.y);
    }
    s.trim_end().to_string()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Layered SVG: the body, each derived curve, every `chord_stride`-th chord
/// (none for 0) and a legend. Equal aspect via the default
/// `preserveAspectRatio`.
pub fn render_svg(bundle: &SvgBundle, chord_stride: usize) -> String {
    let (x0, y0, w, h) = bundle.view_box(chord_stride);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0} {y0} {w} {h}" width="800" height="{}">"#,
        (800.0 * h / w).round()
    );
    let stroke = r#"fill="none" vector-effect="non-scaling-stroke""#;
    let _ = writeln!(s, r#"<g id="chords" stroke="{CHORD_COLOR}" stroke-width="0.5">"#);
    for (a, b) in bundle.strided_chords(chord_stride) {
        let (a, b) = (flip(a), flip(b));
        let _ = writeln!(s, r#"<line x1="{}" y1="{}" x2="{}" y2="{}" {stroke}/>"#, a.x, a.y, b.x, b.y);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<polyline id="boundary" points="{}" stroke="black" stroke-width="1.5" {stroke}/>"#,
        polyline(&bundle.boundary)
    );
    for (i, l) in bundle.layers.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<polyline id="layer{i}" points="{}" stroke="{}" stroke-width="1" {stroke}><title>{}</title></polyline>"#,
            polyline(&l.points),
            l.color,
            escape(&l.label)
        );
    }
    let font = 0.03 * h.max(w);
    let _ = writeln!(s, r#"<g id="legend" font-family="sans-serif" font-size="{font}">"#);
    let entries =
        std::iter::once(("K".to_string(), "black")).chain(bundle.layers.iter().map(|l| (l.label.clone(), l.color)));
    for (i, (label, color)) in entries.enumerate() {
        let y = y0 + font * (1.5 + 1.2 * i as f64);
        let _ = writeln!(s, r#"<text x="{}" y="{y}" fill="{color}">{}</text>"#, x0 + 0.5 * font, escape(&label));
    }
    let _ = writeln!(s, "</g>\n</svg>");
    s
}

pub fn write_svg(path: &Path, bundle: &SvgBundle, chord_stride: usize) -> Result<(), CliError> {
    if bundle.boundary.is_empty() && bundle.layers.iter().all(|l| l.points.is_empty()) {
        return Err(CliError::Config("nothing to draw".into()));
    }
    std::fs::write(path, render_svg(bundle, chord_stride))?;
    Ok(())
}
