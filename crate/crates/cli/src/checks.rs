use std::f64::consts::TAU;

use flotilla::curve::TrigCurve;
use flotilla::floatgeom::{buoyancy_affine_normal_check, omega_identity_from_sweep, Family};
use flotilla::homothety::carousel::{solve_carousel_delta, thm07_diagnostics};
use flotilla::homothety::criteria::{
    affine_cut_lengths_from_sweep, buoyancy_affine_normals, duality_pointwise_check, eq13_residual,
    intersection_body_polar, petty_condition_report, proper_affine_sphere_residual, radon_check,
};
use flotilla::homothety::fit::{constancy_threshold, fit_homothety, ConstancyReport};
use flotilla::homothety::limits::{densify_closed, hausdorff_distance_polygons, scaled_flotation_boundary};
use flotilla::{ClosedConvexCurve, Error};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{CheckName, Resolved};
use crate::run::DeltaRun;
use crate::{is_numerical, CliError};

/// Carousels sampled per `carousel` check.
const CAROUSEL_STARTS: usize = 32;
/// `ε` values for the `limits` check, as fractions of the area.
const LIMIT_FRACTIONS: [f64; 3] = [0.03, 0.015, 0.0075];
const LIMIT_DENSIFY: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: CheckName,
    pub curve: String,
    /// `None` for checks on the curve alone.
    pub delta: Option<f64>,
    pub statistic: String,
    /// `None` when the statistic could not be evaluated.
    pub value: Option<f64>,
    pub threshold: f64,
    pub pass: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
struct Outcome {
    statistic: &'static str,
    value: f64,
    note: Option<String>,
}

impl Outcome {
    fn new(statistic: &'static str, value: f64) -> Self {
        Self { statistic, value, note: None }
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

pub fn default_threshold(check: CheckName, sampled: bool) -> f64 {
    let pick = |analytic: f64| if sampled { analytic.max(1e-6) } else { analytic };
    match check {
        CheckName::Thm1 | CheckName::CutLength | CheckName::Petty => constancy_threshold(sampled),
        CheckName::Homothety | CheckName::Duality | CheckName::Omega | CheckName::AffineNormal => 1e-6,
        CheckName::Eq13 | CheckName::AffineSphere | CheckName::Carousel => pick(1e-8),
        CheckName::Dupin | CheckName::Radon => pick(1e-9),
        CheckName::Limits => 1.0,
    }
}

fn statistic_name(check: CheckName) -> &'static str {
    match check {
        CheckName::Thm1 => "cv_affine_norm_c_cubed",
        CheckName::Homothety => "fit_rms_over_diameter",
        CheckName::Duality => "max_pole_distance_over_diameter",
        CheckName::Eq13 => "max_relative_eq13_residual",
        CheckName::CutLength => "cv_affine_cut_length",
        CheckName::Omega => "omega_relative_residual",
        CheckName::AffineNormal => "max_affine_normal_angle",
        CheckName::Dupin => "max_tangent_chord_misalignment",
        CheckName::AffineSphere => "rms_normal_distance_over_diameter",
        CheckName::Petty => "cv_petty_value",
        CheckName::Radon => "max_radon_residual",
        CheckName::Carousel => "max_lambda_product_deviation",
        CheckName::Limits => "max_hausdorff_step_ratio",
    }
}

fn delta_check(check: CheckName, res: &Resolved, run: &DeltaRun) -> flotilla::Result<Outcome> {
    let curve = &res.curve;
    let flot = &run.flotation;
    let name = statistic_name(check);
    Ok(match check {
        CheckName::Thm1 => Outcome::new(name, run.thm1.constancy.coefficient_of_variation).note(format!(
            "implied λ = {:.10}, {} chords with parallel end tangents skipped",
            run.thm1.implied_lambda, run.thm1.skipped
        )),
        CheckName::Homothety => {
            let (f, b) = (run.family(Family::FlotationBoundary), run.family(Family::BuoyancyCurve));
            let fit = fit_homothety(f.expect("flotation family"), b.expect("buoyancy family"))?;
            Outcome::new(name, fit.relative_residual()).note(format!(
                "ratio {:.10}, |ratio − implied λ| = {:.3e}",
                fit.ratio,
                (fit.ratio - run.thm1.implied_lambda).abs()
            ))
        }
        CheckName::Duality => {
            let d = duality_pointwise_check(curve, run.delta, res.n_samples)?;
            let out = Outcome::new(name, d.max_error / curve.diameter());
            let detail = format!("δ̂ = {:.10}, λ̂ = {:.10}, {} poles at infinity", d.delta_hat, d.lambda_hat, d.skipped);
            if run.homothetic {
                out.note(detail)
            } else {
                out.note(format!("{detail}; flotation body not homothetic, informative only"))
            }
        }
        CheckName::Eq13 => {
            let worst = flot
                .chords
                .iter()
                .map(|cm| {
                    let (ks, kt) = cm.endpoint_curvatures();
                    let size = cm.alpha.sin().powi(3) / ks + cm.beta.sin().powi(3) / kt;
                    eq13_residual(cm).raw.abs() / size
                })
                .fold(0.0, f64::max);
            Outcome::new(name, worst)
        }
        CheckName::CutLength => {
            let lengths: Vec<f64> = affine_cut_lengths_from_sweep(curve, flot)?.iter().map(|c| c.length).collect();
            let r = ConstancyReport::from_values(&lengths)?;
            Outcome::new(name, r.coefficient_of_variation).note(format!("mean affine cut length {:.10}", r.mean))
        }
        CheckName::Omega => {
            let o = omega_identity_from_sweep(curve, flot)?;
            Outcome::new(name, o.residual).note(format!("lhs {:.12}, rhs {:.12}", o.lhs, o.rhs))
        }
        CheckName::AffineNormal => {
            let (mut angle, mut magnitude, mut skipped) = (0.0f64, 0.0f64, 0usize);
            for cm in &flot.chords {
                match buoyancy_affine_normal_check(cm)? {
                    Some(c) => {
                        angle = angle.max(c.angle_error);
                        magnitude = magnitude.max(c.magnitude_error);
                    }
                    None => skipped += 1,
                }
            }
            if skipped == flot.len() {
                return Err(Error::Domain("every chord has parallel end tangents".into()));
            }
            Outcome::new(name, angle).note(format!("max magnitude error {magnitude:.3e}, {skipped} chords skipped"))
        }
        CheckName::Dupin => {
            let mut worst = 0.0f64;
            let mut missing = Vec::new();
            for family in Family::ALL {
                match (run.family(family), run.chords_for(family)) {
                    (Some(samples), Some(chords)) => worst = worst.max(dupin_misalignment(samples, chords)),
                    _ => missing.push(family.as_str()),
                }
            }
            let out = Outcome::new(name, worst);
            if missing.is_empty() {
                out
            } else {
                out.note(format!("families not evaluated: {}", missing.join(", ")))
            }
        }
        CheckName::AffineSphere => {
            let c = proper_affine_sphere_residual(&buoyancy_affine_normals(curve, flot)?)?;
            let out = Outcome::new(name, c.rms_distance / curve.diameter());
            let detail = format!("centre ({:.10}, {:.10}), condition {:.3e}", c.point.x, c.point.y, c.condition);
            if c.ill_conditioned {
                out.note(format!("{detail}; nearly parallel normals"))
            } else {
                out.note(detail)
            }
        }
        CheckName::Petty | CheckName::Radon | CheckName::Carousel | CheckName::Limits => {
            unreachable!("curve-level check {check} evaluated per δ")
        }
    })
}

/// Angle between the spectral tangent of a sampled derived curve and the
/// chord it was read off, skipping vertex singularities.
fn dupin_misalignment(
    samples: &[flotilla::floatgeom::DerivedCurveSample],
    chords: &[flotilla::chord::ChordMap],
) -> f64 {
    let points: Vec<_> = samples.iter().map(|d| d.point).collect();
    let trig = TrigCurve::interpolate(&points);
    let n = points.len() as f64;
    samples
        .iter()
        .zip(chords)
        .enumerate()
        .filter(|(_, (d, _))| d.kappa.is_some())
        .map(|(j, (_, cm))| {
            let t = trig.derivatives(TAU * j as f64 / n, 1)[1];
            t.det(cm.c).abs() / (t.norm() * cm.norm_c())
        })
        .fold(0.0, f64::max)
}

fn curve_check(check: CheckName, res: &Resolved) -> flotilla::Result<Outcome> {
    let curve = &res.curve;
    let name = statistic_name(check);
    Ok(match check {
        CheckName::Petty => {
            let p = petty_condition_report(curve, res.n_samples)?;
            if !p.origin_inside {
                return Err(Error::Domain("origin is not inside the curve".into()));
            }
            Outcome::new(name, p.constancy.coefficient_of_variation).note(format!("mean {:.12}", p.constancy.mean))
        }
        CheckName::Radon => Outcome::new(name, radon_check(curve, res.n_samples)?),
        CheckName::Carousel => {
            let delta = solve_carousel_delta(curve, 1, 3, 0.0)?;
            let d = thm07_diagnostics(curve, delta, CAROUSEL_STARTS)?;
            Outcome::new(name, d.product_deviation_max).note(format!(
                "δ = {delta:.12} ({:.6} of area), centroid drift {:.3e}, medial defect {:.3e}",
                delta / res.area,
                d.centroid_drift_max,
                d.medial_defect_max
            ))
        }
        CheckName::Limits => limits(curve, res)?,
        _ => unreachable!("δ-dependent check {check} evaluated on the curve alone"),
    })
}

fn limits(curve: &ClosedConvexCurve, res: &Resolved) -> flotilla::Result<Outcome> {
    let star = intersection_body_polar(curve)?.sample_points(LIMIT_DENSIFY);
    let distances = LIMIT_FRACTIONS
        .iter()
        .map(|f| {
            let pts = scaled_flotation_boundary(curve, f * res.area, res.n_samples)?;
            hausdorff_distance_polygons(&densify_closed(&pts, LIMIT_DENSIFY), &star)
        })
        .collect::<flotilla::Result<Vec<f64>>>()?;
    let ratio = distances.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
    let listed: Vec<String> = distances.iter().map(|d| format!("{d:.3e}")).collect();
    Ok(Outcome::new(statistic_name(CheckName::Limits), ratio).note(format!("d_H = {}", listed.join(", "))))
}

fn record(
    check: CheckName,
    res: &Resolved,
    delta: Option<f64>,
    outcome: flotilla::Result<Outcome>,
) -> Result<CheckRecord, CliError> {
    let threshold =
        res.tolerances.get(&check).copied().unwrap_or_else(|| default_threshold(check, res.curve.is_sampled()));
    let (statistic, value, note) = match outcome {
        Ok(o) => (o.statistic, Some(o.value).filter(|v| v.is_finite()), o.note),
        Err(e) if is_numerical(&e) => return Err(CliError::Numerical(e)),
        Err(e) => (statistic_name(check), None, Some(e.to_string())),
    };
    Ok(CheckRecord {
        check,
        curve: res.spec.label(),
        delta,
        statistic: statistic.to_string(),
        value,
        threshold,
        pass: value.is_some_and(|v| v < threshold),
        note,
    })
}

/// Worst record over δ: any unevaluated one, else the largest value.
fn worst(records: Vec<CheckRecord>) -> CheckRecord {
    records
        .into_iter()
        .max_by(|a, b| match (a.value, b.value) {
            (None, None) => std::cmp::Ordering::Equal,
            (None, _) => std::cmp::Ordering::Greater,
            (_, None) => std::cmp::Ordering::Less,
            (Some(x), Some(y)) => x.total_cmp(&y),
        })
        .expect("at least one δ")
}

/// One record per requested check, in request order.
pub fn evaluate(res: &Resolved, runs: &[DeltaRun]) -> Result<Vec<CheckRecord>, CliError> {
    res.checks
        .par_iter()
        .map(|&check| {
            if check.is_curve_level() {
                return record(check, res, None, curve_check(check, res));
            }
            let per_delta = runs
                .par_iter()
                .map(|run| record(check, res, Some(run.delta), delta_check(check, res, run)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(worst(per_delta))
        })
        .collect()
}
