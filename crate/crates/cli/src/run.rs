use std::path::Path;

use flotilla::chord::{sweep, ChordKind, ChordMap, Sweep};
use flotilla::floatgeom::{buoyancy_curve, flotation_curve, DerivedCurveSample, Family};
use flotilla::homothety::carousel::{
    build_carousel, solve_carousel_delta, thm07_diagnostics, Carousel, Thm07Diagnostics,
};
use flotilla::homothety::criteria::{check_thm1_from_sweep, duality_parameters};
use flotilla::homothety::fit::constancy_threshold;
use flotilla::homothety::Thm1Report;
use flotilla::illumgeom::{illumination_centroid_curve, illumination_curve};
use flotilla::CurveSpec;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::checks::{evaluate, CheckRecord};
use crate::config::{CheckName, Resolved};
use crate::export::{write_csv, write_svg, ExportRecord, SvgBundle, REPORT_SCHEMA};
use crate::{is_numerical, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaHatSource {
    Duality,
    Config,
}

/// Sweeps and derived curves for one δ.
#[derive(Debug, Clone)]
pub struct DeltaRun {
    pub delta: f64,
    pub flotation: Sweep,
    pub thm1: Thm1Report,
    pub homothetic: bool,
    pub delta_hat: Option<(f64, DeltaHatSource)>,
    pub illumination: Option<Sweep>,
    pub families: Vec<(Family, Vec<DerivedCurveSample>)>,
}

impl DeltaRun {
    pub fn family(&self, f: Family) -> Option<&[DerivedCurveSample]> {
        self.families.iter().find(|(g, _)| *g == f).map(|(_, v)| v.as_slice())
    }

    /// The chord a family's samples are read off.
    pub fn chords_for(&self, f: Family) -> Option<&[ChordMap]> {
        match f {
            Family::FlotationBoundary | Family::BuoyancyCurve => Some(&self.flotation.chords),
            Family::IlluminationBoundary | Family::IlluminationCentroid => {
                self.illumination.as_ref().map(|s| s.chords.as_slice())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DeltaSummary {
    pub delta: f64,
    pub implied_lambda: f64,
    pub thm1_cv: Option<f64>,
    pub homothetic: bool,
    pub delta_hat: Option<f64>,
    pub delta_hat_source: Option<DeltaHatSource>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub curve: String,
    pub curve_spec: CurveSpec,
    pub area: f64,
    pub n_samples: usize,
    pub deltas: Vec<DeltaSummary>,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: Report,
    pub records: Vec<ExportRecord>,
    pub bundle: SvgBundle,
    pub runs: Vec<DeltaRun>,
}

impl RunOutput {
    pub fn exit_code(&self) -> u8 {
        if self.report.pass {
            0
        } else {
            1
        }
    }
}

fn numerical(e: flotilla::Error) -> CliError {
    CliError::Numerical(e)
}

type Illuminated = (Sweep, Vec<DerivedCurveSample>, Vec<DerivedCurveSample>);

fn illuminate(res: &Resolved, delta_hat: f64) -> flotilla::Result<Illuminated> {
    let sw = sweep(&res.curve, ChordKind::Illumination, delta_hat, res.n_samples)?;
    let boundary = illumination_curve(&sw)?;
    let centroid = illumination_centroid_curve(&res.curve, &sw)?;
    Ok((sw, boundary, centroid))
}

fn run_delta(res: &Resolved, delta: f64) -> Result<(DeltaRun, Vec<String>), CliError> {
    let curve = &res.curve;
    let flotation = sweep(curve, ChordKind::Flotation, delta, res.n_samples).map_err(numerical)?;
    let thm1 = check_thm1_from_sweep(&flotation).map_err(numerical)?;
    let threshold = res.tolerances.get(&CheckName::Thm1).copied().unwrap_or(constancy_threshold(curve.is_sampled()));
    let homothetic = thm1.constancy.is_constant(threshold);
    let mut warnings = Vec::new();
    let derived = if homothetic { duality_parameters(delta, thm1.implied_lambda).ok().map(|(dh, _)| dh) } else { None };
    let delta_hat = match (derived, res.delta_hat) {
        (Some(dh), _) => Some((dh, DeltaHatSource::Duality)),
        (None, Some(dh)) => Some((dh, DeltaHatSource::Config)),
        (None, None) => {
            warnings.push(format!(
                "δ = {delta}: no homothety detected (CV {:.3e}) and no deltaHat given; illumination families skipped",
                thm1.constancy.coefficient_of_variation
            ));
            None
        }
    };
    let mut families = vec![
        (Family::FlotationBoundary, flotation_curve(&flotation).map_err(numerical)?),
        (Family::BuoyancyCurve, buoyancy_curve(curve, &flotation).map_err(numerical)?),
    ];
    let illumination = match delta_hat.map(|(dh, _)| illuminate(res, dh)) {
        Some(Ok((sw, boundary, centroid))) => {
            families.push((Family::IlluminationBoundary, boundary));
            families.push((Family::IlluminationCentroid, centroid));
            Some(sw)
        }
        Some(Err(e)) if is_numerical(&e) => return Err(numerical(e)),
        Some(Err(e)) => {
            warnings.push(format!("δ = {delta}: illumination families skipped: {e}"));
            None
        }
        None => None,
    };
    let run = DeltaRun { delta, flotation, thm1, homothetic, delta_hat, illumination, families };
    Ok((run, warnings))
}

fn export_records(runs: &[DeltaRun]) -> Vec<ExportRecord> {
    let mut out = Vec::new();
    for run in runs {
        for (family, samples) in &run.families {
            let chords = run.chords_for(*family).expect("family present only with its sweep");
            for (d, cm) in samples.iter().zip(chords) {
                out.push(ExportRecord {
                    delta: run.delta,
                    family: *family,
                    s: d.s,
                    x: d.point.x,
                    y: d.point.y,
                    tx: d.tangent.x,
                    ty: d.tangent.y,
                    kappa: d.kappa,
                    kappa_prime: d.kappa_prime,
                    chord_s: cm.s,
                    chord_t: cm.t,
                    alpha: cm.alpha,
                    beta: cm.beta,
                    norm_c: cm.norm_c(),
                    affine_norm_c: cm.affine_norm_c(),
                });
            }
        }
    }
    out
}

/// Runs every δ concurrently, then the requested checks.
pub fn execute(res: &Resolved) -> Result<RunOutput, CliError> {
    let results: Vec<(DeltaRun, Vec<String>)> =
        res.deltas.par_iter().map(|d| run_delta(res, *d)).collect::<Result<_, _>>()?;
    let (runs, warnings): (Vec<DeltaRun>, Vec<Vec<String>>) = results.into_iter().unzip();
    let warnings: Vec<String> = warnings.into_iter().flatten().collect();
    let checks = evaluate(res, &runs)?;
    let deltas = runs
        .iter()
        .map(|r| DeltaSummary {
            delta: r.delta,
            implied_lambda: r.thm1.implied_lambda,
            thm1_cv: Some(r.thm1.constancy.coefficient_of_variation).filter(|v| v.is_finite()),
            homothetic: r.homothetic,
            delta_hat: r.delta_hat.map(|d| d.0),
            delta_hat_source: r.delta_hat.map(|d| d.1),
        })
        .collect();
    let report = Report {
        curve: res.spec.label(),
        curve_spec: res.spec.clone(),
        area: res.area,
        n_samples: res.n_samples,
        deltas,
        pass: checks.iter().all(|c| c.pass),
        checks,
        warnings,
    };
    let bundle = SvgBundle::from_runs(&res.curve, &runs, res.n_samples);
    Ok(RunOutput { report, records: export_records(&runs), bundle, runs })
}

/// Writes `curves.csv`, `report.json`, `report.schema.json` and `figure.svg`.
pub fn write_outputs(dir: &Path, out: &RunOutput, chord_stride: usize) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    write_csv(&dir.join("curves.csv"), &out.records)?;
    let json = serde_json::to_string_pretty(&out.report).expect("report serializes");
    std::fs::write(dir.join("report.json"), json + "\n")?;
    std::fs::write(dir.join("report.schema.json"), REPORT_SCHEMA)?;
    write_svg(&dir.join("figure.svg"), &out.bundle, chord_stride)
}

#[derive(Debug, Clone, Serialize)]
pub struct CarouselReport {
    pub curve: String,
    pub area: f64,
    pub delta_fraction: f64,
    pub carousel: Carousel,
    /// Density-1/3 diagnostics over carousels started around the curve.
    pub thm07: Option<Thm07Diagnostics>,
    pub note: Option<String>,
}

/// Starts in the density-1/3 diagnostics of `flotilla carousel`.
const THM07_STARTS: usize = 32;

/// Finds the δ at which `q` chords from `s0` wind `p` times and builds that
/// carousel.
pub fn carousel_report(res: &Resolved, p: usize, q: usize, s0: f64) -> Result<CarouselReport, CliError> {
    let curve = &res.curve;
    let soft =
        |e: flotilla::Error| if is_numerical(&e) { CliError::Numerical(e) } else { CliError::Check(e.to_string()) };
    let delta = solve_carousel_delta(curve, p, q, s0).map_err(soft)?;
    let carousel = build_carousel(curve, p, q, delta, s0).map_err(soft)?;
    let (thm07, note) = if (p, q) == (1, 3) {
        match thm07_diagnostics(curve, delta, THM07_STARTS) {
            Ok(d) => (Some(d), None),
            Err(e) if is_numerical(&e) => return Err(CliError::Numerical(e)),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, None)
    };
    Ok(CarouselReport {
        curve: res.spec.label(),
        area: res.area,
        delta_fraction: delta / res.area,
        carousel,
        thm07,
        note,
    })
}
