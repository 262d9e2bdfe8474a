use rayon::prelude::*;
use serde::Serialize;

use super::fit::{fit_homothety, ConstancyReport, HomothetyFit};
use crate::chord::{sweep, ChordKind, ChordMap, Sweep};
use crate::curve::ClosedConvexCurve;
use crate::error::{Error, Result};
use crate::floatgeom::{buoyancy_affine_normal, buoyancy_curve, flotation_curve, is_vertex_singularity};
use crate::illumgeom::pole_of_chord;
use crate::solve::{safeguarded_newton, scan_sign_changes, Tolerance};
use crate::vector::PlaneVector;

fn grid(curve: &ClosedConvexCurve, n: usize) -> impl IndexedParallelIterator<Item = f64> {
    let h = curve.period() / n as f64;
    (0..n).into_par_iter().map(move |j| j as f64 * h)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thm1Report {
    /// Constancy of `‖c‖³` over the chords with a finite tangent triangle.
    pub constancy: ConstancyReport,
    /// `mean‖c‖³/(12δ)` for flotation, `mean‖c‖³/(24δ̂)` for illumination.
    pub implied_lambda: f64,
    /// Chords skipped because their end tangents are parallel.
    pub skipped: usize,
}

pub fn check_thm1_from_sweep(sw: &Sweep) -> Result<Thm1Report> {
    let values: Vec<f64> = sw.chords.iter().filter_map(ChordMap::affine_norm_c_cubed).collect();
    let skipped = sw.len() - values.len();
    if values.is_empty() {
        return Err(Error::domain("every chord of the sweep has parallel end tangents"));
    }
    let constancy = ConstancyReport::from_values(&values)?;
    let scale = match sw.kind {
        ChordKind::Flotation => 12.0,
        ChordKind::Illumination => 24.0,
    };
    Ok(Thm1Report { constancy, implied_lambda: constancy.mean / (scale * sw.delta), skipped })
}

/// Constancy of `‖c‖³` along the chords of flotation (`= 12δλ`) or the
/// silhouette chords (`= 24δ̂λ̂`).
pub fn check_thm1(curve: &ClosedConvexCurve, delta: f64, kind: ChordKind, n: usize) -> Result<Thm1Report> {
    check_thm1_from_sweep(&sweep(curve, kind, delta, n)?)
}

/// Both sides of the homothety theorem for the flotation body: `‖c‖³`
/// constancy and a direct fit of Γ_δ against Π_δ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HomothetyBiconditional {
    pub thm1: Thm1Report,
    pub fit: HomothetyFit,
}

impl HomothetyBiconditional {
    /// `|fit.ratio − impliedLambda|`.
    pub fn lambda_gap(&self) -> f64 {
        (self.fit.ratio - self.thm1.implied_lambda).abs()
    }
}

pub fn homothety_biconditional_from_sweep(curve: &ClosedConvexCurve, sw: &Sweep) -> Result<HomothetyBiconditional> {
    if sw.kind != ChordKind::Flotation {
        return Err(Error::domain("the homothety biconditional needs a flotation sweep"));
    }
    let thm1 = check_thm1_from_sweep(sw)?;
    let fit = fit_homothety(&flotation_curve(sw)?, &buoyancy_curve(curve, sw)?)?;
    Ok(HomothetyBiconditional { thm1, fit })
}

pub fn homothety_biconditional(curve: &ClosedConvexCurve, delta: f64, n: usize) -> Result<HomothetyBiconditional> {
    homothety_biconditional_from_sweep(curve, &sweep(curve, ChordKind::Flotation, delta, n)?)
}

/// `(δ̂, λ̂)` with `δ̂ = (3/2)δλ − δ` and `1/λ̂ + 2/λ = 3`.
pub fn duality_parameters(delta: f64, lambda: f64) -> Result<(f64, f64)> {
    if !(delta > 0.0) || !lambda.is_finite() {
        return Err(Error::domain(format!("need δ > 0 and finite λ, got δ={delta}, λ={lambda}")));
    }
    if lambda <= 2.0 / 3.0 {
        return Err(Error::domain(format!("λ = {lambda} ≤ 2/3 leaves no positive dual ratio")));
    }
    let delta_hat = 1.5 * delta * lambda - delta;
    let lambda_hat = lambda / (3.0 * lambda - 2.0);
    let lhs = 1.0 / (delta_hat * lambda_hat);
    let rhs = 2.0 / (delta * lambda);
    debug_assert!((lhs - rhs).abs() <= 1e-12 * rhs, "dual relation 1/(δ̂λ̂) = 2/(δλ) broken");
    Ok((delta_hat, lambda_hat))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualityCheck {
    pub lambda: f64,
    pub delta_hat: f64,
    pub lambda_hat: f64,
    /// Max over samples of |pole of the flotation chord − Π^δ̂ point|.
    pub max_error: f64,
    /// Samples whose flotation chord has its pole at infinity.
    pub skipped: usize,
}

/// Compares the polar image of Π_δ with Π^δ̂ for δ̂ from the dual relation,
/// matching the flotation and silhouette chords at equal `s`.
pub fn duality_pointwise_check(curve: &ClosedConvexCurve, delta: f64, n: usize) -> Result<DualityCheck> {
    let flot = sweep(curve, ChordKind::Flotation, delta, n)?;
    let lambda = check_thm1_from_sweep(&flot)?.implied_lambda;
    let (delta_hat, lambda_hat) = duality_parameters(delta, lambda)?;
    let ill = sweep(curve, ChordKind::Illumination, delta_hat, n)?;
    let errors: Vec<Option<f64>> = flot
        .chords
        .par_iter()
        .zip(&ill.chords)
        .map(|(f, i)| {
            let pole = pole_of_chord(curve, f.s, f.t)?.pole.finite();
            Ok(pole.zip(i.z).map(|(p, z)| p.distance(z)))
        })
        .collect::<Result<_>>()?;
    let skipped = errors.iter().filter(|e| e.is_none()).count();
    let max_error = errors.iter().flatten().fold(0.0f64, |m, e| m.max(*e));
    Ok(DualityCheck { lambda, delta_hat, lambda_hat, max_error, skipped })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Eq13Residual {
    /// `sin³α/κ(s) − sin³β/κ(t)`.
    pub raw: f64,
    /// `det(γ′(s),x−y)³/det(γ′(s),γ″(s)) − det(γ′(t),y−x)³/det(γ′(t),γ″(t))`,
    /// the equi-affine invariant form, equal to `−|c|³·raw`.
    pub determinant_form: f64,
}

/// Residual of the equal-cut condition on one chord.
pub fn eq13_residual(cm: &ChordMap) -> Eq13Residual {
    let (ks, kt) = cm.endpoint_curvatures();
    let raw = cm.alpha.sin().powi(3) / ks - cm.beta.sin().powi(3) / kt;
    let (x1, x2, y1, y2) = (cm.gs[1], cm.gs[2], cm.gt[1], cm.gt[2]);
    let determinant_form = (-x1.det(cm.c)).powi(3) / x1.det(x2) - y1.det(cm.c).powi(3) / y1.det(y2);
    let scale = cm.norm_c().powi(3);
    debug_assert!(
        (determinant_form + scale * raw).abs()
            <= 1e-9 * scale * (cm.alpha.sin().powi(3) / ks + cm.beta.sin().powi(3) / kt),
        "determinant and angle forms of the cut residual disagree"
    );
    Eq13Residual { raw, determinant_form }
}

/// `d/ds` of the affine arc length of `γ[s, t(s)]` along a flotation sweep:
/// `|γ′(s)| sinα (κ(t)^{1/3}/sinβ − κ(s)^{1/3}/sinα)`.
pub fn cut_length_derivative(cm: &ChordMap) -> f64 {
    let (ks, kt) = cm.endpoint_curvatures();
    let (sa, sb) = (cm.alpha.sin(), cm.beta.sin());
    cm.gs[1].norm() * sa * (kt.cbrt() / sb - ks.cbrt() / sa)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CutLengthSample {
    pub s: f64,
    pub length: f64,
    pub derivative: f64,
    pub residual: Eq13Residual,
}

pub fn affine_cut_lengths_from_sweep(curve: &ClosedConvexCurve, sw: &Sweep) -> Result<Vec<CutLengthSample>> {
    if sw.kind != ChordKind::Flotation {
        return Err(Error::domain("affine cut lengths need a flotation sweep"));
    }
    sw.chords
        .par_iter()
        .map(|cm| {
            Ok(CutLengthSample {
                s: cm.s,
                length: curve.affine_arclength(cm.s, cm.t)?,
                derivative: cut_length_derivative(cm),
                residual: eq13_residual(cm),
            })
        })
        .collect()
}

/// Constancy of the affine arc length cut off by the chords of flotation.
pub fn affine_cut_length_report(curve: &ClosedConvexCurve, delta: f64, n: usize) -> Result<ConstancyReport> {
    let sw = sweep(curve, ChordKind::Flotation, delta, n)?;
    let lengths: Vec<f64> = affine_cut_lengths_from_sweep(curve, &sw)?.iter().map(|c| c.length).collect();
    ConstancyReport::from_values(&lengths)
}

/// A line through `point` with direction `direction`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalLine {
    pub point: PlaneVector,
    pub direction: PlaneVector,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConcurrencyResidual {
    pub point: PlaneVector,
    pub rms_distance: f64,
    /// Ratio of the extreme eigenvalues of the normal-equation matrix.
    pub condition: f64,
    pub ill_conditioned: bool,
}

/// Condition number above which a bundle counts as nearly parallel.
pub const CONCURRENCY_CONDITION_LIMIT: f64 = 1e8;

/// Least-squares common point of a bundle of lines.
pub fn proper_affine_sphere_residual(lines: &[NormalLine]) -> Result<ConcurrencyResidual> {
    if lines.len() < 3 {
        return Err(Error::domain("concurrency needs at least 3 lines"));
    }
    let (mut m, mut r) = ([[0.0; 2]; 2], PlaneVector::ZERO);
    let mut projectors = Vec::with_capacity(lines.len());
    for l in lines {
        let u = l.direction.normalized();
        if !u.is_finite() {
            return Err(Error::domain("affine normal line with zero direction"));
        }
        let p = [[1.0 - u.x * u.x, -u.x * u.y], [-u.x * u.y, 1.0 - u.y * u.y]];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] += p[i][j];
            }
        }
        r += PlaneVector::new(p[0][0] * l.point.x + p[0][1] * l.point.y, p[1][0] * l.point.x + p[1][1] * l.point.y);
        projectors.push(u);
    }
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = (0.25 * tr * tr - det).max(0.0).sqrt();
    let (emax, emin) = (0.5 * tr + disc, 0.5 * tr - disc);
    let condition = if emin > 0.0 { emax / emin } else { f64::INFINITY };
    let ill_conditioned = condition > CONCURRENCY_CONDITION_LIMIT;
    if det == 0.0 {
        return Err(Error::domain("all lines are parallel; no concurrency point"));
    }
    let point = PlaneVector::new((m[1][1] * r.x - m[0][1] * r.y) / det, (m[0][0] * r.y - m[1][0] * r.x) / det);
    let sq: f64 = lines.iter().zip(&projectors).map(|(l, u)| u.det(point - l.point).powi(2)).sum();
    let rms_distance = (sq / lines.len() as f64).sqrt();
    Ok(ConcurrencyResidual { point, rms_distance, condition, ill_conditioned })
}

/// Affine normal lines of the boundary at `n` uniform parameters.
pub fn boundary_affine_normals(curve: &ClosedConvexCurve, n: usize) -> Result<Vec<NormalLine>> {
    grid(curve, n).map(|s| Ok(NormalLine { point: curve.point(s), direction: curve.affine_normal(s)? })).collect()
}

/// Affine normal lines of Γ_δ along a flotation sweep.
pub fn buoyancy_affine_normals(curve: &ClosedConvexCurve, sw: &Sweep) -> Result<Vec<NormalLine>> {
    let points = buoyancy_curve(curve, sw)?;
    Ok(sw
        .chords
        .iter()
        .zip(points)
        .map(|(cm, p)| NormalLine { point: p.point, direction: buoyancy_affine_normal(cm) })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PettyReport {
    pub constancy: ConstancyReport,
    /// False when the origin is not strictly inside the curve.
    pub origin_inside: bool,
}

/// Constancy of `det(γ,γ′)³/det(γ′,γ″)` about the origin.
pub fn petty_condition_report(curve: &ClosedConvexCurve, n: usize) -> Result<PettyReport> {
    let pairs: Vec<(f64, f64)> = grid(curve, n)
        .map(|s| {
            let d = curve.derivatives(s, 2);
            (d[0].det(d[1]), d[1].det(d[2]))
        })
        .collect();
    let origin_inside = pairs.iter().all(|(a, _)| *a > 0.0);
    let values: Vec<f64> = pairs.iter().map(|(a, b)| a.powi(3) / b).collect();
    Ok(PettyReport { constancy: ConstancyReport::from_values(&values)?, origin_inside })
}

/// Relative tolerance (against the diameter) for origin symmetry.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// Max of `|γ(s + period/2) + γ(s)|` over the curve's sampling grid.
pub fn symmetry_defect(curve: &ClosedConvexCurve) -> f64 {
    let half = 0.5 * curve.period();
    grid(curve, curve.resolution()).map(|s| (curve.point(s + half) + curve.point(s)).norm()).reduce(|| 0.0, f64::max)
}

fn require_origin_symmetric(curve: &ClosedConvexCurve) -> Result<()> {
    let defect = symmetry_defect(curve);
    let diam = curve.diameter();
    if defect > SYMMETRY_TOLERANCE * diam {
        return Err(Error::domain(format!("curve is not origin-symmetric (defect {defect:e})")));
    }
    Ok(())
}

/// `γ*(s) = γ′(s)/(2det(γ(s),γ′(s)))`.
pub fn gamma_star(curve: &ClosedConvexCurve, s: f64) -> PlaneVector {
    let d = curve.derivatives(s, 1);
    d[1] / (2.0 * d[0].det(d[1]))
}

/// `dγ*/ds`, parallel to `γ(s)`.
pub fn gamma_star_derivative(curve: &ClosedConvexCurve, s: f64) -> PlaneVector {
    let d = curve.derivatives(s, 2);
    let w = d[0].det(d[1]);
    d[2] / (2.0 * w) - d[1] * (d[0].det(d[2]) / (2.0 * w * w))
}

/// Boundary of the polar of the intersection body of an origin-symmetric
/// body, sampled at the curve's resolution.
pub fn intersection_body_polar(curve: &ClosedConvexCurve) -> Result<ClosedConvexCurve> {
    require_origin_symmetric(curve)?;
    let n = curve.resolution();
    let h = curve.period() / n as f64;
    if (0..n).any(|j| {
        let d = curve.derivatives(j as f64 * h, 1);
        d[0].det(d[1]) <= 0.0
    }) {
        return Err(Error::domain("origin is not inside the curve"));
    }
    ClosedConvexCurve::sample_fn(n, |s| gamma_star(curve, s))
}

/// Max over `s` of the Radon involution residual
/// `|det(γ′(t), γ(s))|/(|γ′(t)||γ(s)|)`, where `γ(t)` is the radius parallel
/// to (and pointing along) `γ′(s)`.
pub fn radon_check(curve: &ClosedConvexCurve, n: usize) -> Result<f64> {
    require_origin_symmetric(curve)?;
    let period = curve.period();
    let residuals: Vec<f64> = grid(curve, n)
        .map(|s| {
            let ds = curve.derivatives(s, 1);
            let dir = ds[1];
            let f = |u: f64| curve.point(u).det(dir);
            let brackets = scan_sign_changes(f, s, s + period, 64);
            if brackets.len() != 2 {
                return Err(Error::solver(format!(
                    "expected 2 radial directions parallel to the tangent at s = {s}, found {}",
                    brackets.len()
                )));
            }
            let mut best = None;
            for (a, b, _) in brackets {
                let t = safeguarded_newton(
                    |u| {
                        let d = curve.derivatives(u, 1);
                        Ok((d[0].det(dir), d[1].det(dir)))
                    },
                    a,
                    b,
                    None,
                    Tolerance::default(),
                )?;
                if curve.point(t).dot(dir) > 0.0 {
                    best = Some(t);
                }
            }
            let t = best.ok_or_else(|| Error::solver(format!("no forward radius parallel to γ′({s})")))?;
            let dt = curve.derivatives(t, 1);
            Ok(dt[1].det(ds[0]).abs() / (dt[1].norm() * ds[0].norm()))
        })
        .collect::<Result<_>>()?;
    Ok(residuals.into_iter().fold(0.0, f64::max))
}

/// True when no chord of the sweep has parallel end tangents.
pub fn sweep_is_regular(sw: &Sweep) -> bool {
    !sw.chords.iter().any(is_vertex_singularity)
}
