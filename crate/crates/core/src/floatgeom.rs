//! The curve of flotation Π_δ (envelope of the chords cutting area δ) and the
//! curve of buoyancy Γ_δ (centroids of the cut-off caps).

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chord::{sweep, ChordKind, ChordMap, Sweep, PARALLEL_TOLERANCE};
use crate::curve::{ClosedConvexCurve, TrigCurve};
use crate::error::{Error, Result};
use crate::jet::{affine_normal_jet, curvature_and_arc_derivative, JetVec};
use crate::quadrature::{periodic_trapezoid, Quadrature};
use crate::vector::PlaneVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    FlotationBoundary,
    BuoyancyCurve,
    IlluminationBoundary,
    IlluminationCentroid,
}

impl Family {
    pub const ALL: [Family; 4] =
        [Family::FlotationBoundary, Family::BuoyancyCurve, Family::IlluminationBoundary, Family::IlluminationCentroid];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::FlotationBoundary => "flotation_boundary",
            Family::BuoyancyCurve => "buoyancy_curve",
            Family::IlluminationBoundary => "illumination_boundary",
            Family::IlluminationCentroid => "illumination_centroid",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.as_str() == s)
    }
}

/// A point of a derived curve with its tangent `dr/ds` and curvature.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedCurveSample {
    pub family: Family,
    pub s: f64,
    pub point: PlaneVector,
    pub tangent: PlaneVector,
    /// `None` at vertex singularities.
    pub kappa: Option<f64>,
    /// Derivative of `kappa` with respect to the derived curve's own
    /// Euclidean arc length.
    pub kappa_prime: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomothetyConstants {
    pub delta: f64,
    pub delta_bar: f64,
    pub lambda: Option<f64>,
}

impl HomothetyConstants {
    pub fn new(delta: f64, lambda: Option<f64>) -> Self {
        Self { delta, delta_bar: 1.5 * delta, lambda }
    }
}

fn require(cm: &ChordMap, kind: ChordKind) -> Result<()> {
    if cm.kind != kind {
        return Err(Error::domain(format!("expected a {kind:?} chord, got {:?}", cm.kind)));
    }
    Ok(())
}

fn cot(a: f64) -> f64 {
    a.cos() / a.sin()
}

/// True when the end tangents of the chord are parallel.
pub fn is_vertex_singularity(cm: &ChordMap) -> bool {
    let (x1, y1) = (cm.gs[1], cm.gt[1]);
    x1.det(y1).abs() <= PARALLEL_TOLERANCE * x1.norm() * y1.norm()
}

/// Midpoint of a chord of flotation, the point where it touches Π_δ.
pub fn flotation_point(cm: &ChordMap) -> Result<DerivedCurveSample> {
    require(cm, ChordKind::Flotation)?;
    let point = (cm.x + cm.y) * 0.5;
    let (tangent, kappa, kappa_prime) = if is_vertex_singularity(cm) {
        (PlaneVector::ZERO, None, None)
    } else {
        let tangent = cm.c * (cm.gs[1].det(cm.gt[1]) / (2.0 * cm.c.det(cm.gt[1])));
        let kappa = cm.affine_norm_c_cubed().map(|n3| n3 / cm.norm_c().powi(3));
        (tangent, kappa, kappa_prime_flotation(cm))
    };
    Ok(DerivedCurveSample { family: Family::FlotationBoundary, s: cm.s, point, tangent, kappa, kappa_prime })
}

/// `κ₁ = 4/(|c|(cot α + cot β))`.
pub fn flotation_kappa_cot(cm: &ChordMap) -> f64 {
    4.0 / (cm.norm_c() * (cot(cm.alpha) + cot(cm.beta)))
}

/// `dκ₁/dσ₁` along Π_δ:
/// `24(cot α − cot β)/(S²|c|²) − 8(κ(s)/sin³α − κ(t)/sin³β)/(S³|c|)`
/// with `S = cot α + cot β`.
pub fn kappa_prime_flotation(cm: &ChordMap) -> Option<f64> {
    if cm.kind != ChordKind::Flotation || is_vertex_singularity(cm) {
        return None;
    }
    let (ks, kt) = cm.endpoint_curvatures();
    let (ca, cb) = (cot(cm.alpha), cot(cm.beta));
    let sum = ca + cb;
    let c = cm.norm_c();
    let skew = ks / cm.alpha.sin().powi(3) - kt / cm.beta.sin().powi(3);
    Some(24.0 * (ca - cb) / (sum * sum * c * c) - 8.0 * skew / (sum.powi(3) * c))
}

/// Area and centroid of the cap cut off by the chord, from one shared set of
/// quadrature panels.
pub fn cap_centroid(curve: &ClosedConvexCurve, s: f64, t: f64) -> Result<(f64, PlaneVector)> {
    let x = curve.point(s);
    let q = Quadrature { initial_panels: 4, ..Default::default() };
    let [a, mx, my] = q.integrate(
        |u| {
            let d = curve.derivatives(u, 1);
            let v = d[0] - x;
            let w = v.det(d[1]);
            [0.5 * w, v.x * w, v.y * w]
        },
        s,
        t,
    )?;
    Ok((a, x + PlaneVector::new(mx, my) / (3.0 * a)))
}

/// Centroid of the cap, the point of Γ_δ.
pub fn buoyancy_point(curve: &ClosedConvexCurve, cm: &ChordMap) -> Result<DerivedCurveSample> {
    require(cm, ChordKind::Flotation)?;
    let delta = cm.delta;
    let x = cm.x;
    let q = Quadrature { initial_panels: 4, ..Default::default() };
    let [mx, my] = q.integrate(
        |u| {
            let d = curve.derivatives(u, 1);
            let v = d[0] - x;
            let w = v.det(d[1]);
            [v.x * w, v.y * w]
        },
        cm.s,
        cm.t,
    )?;
    let point = x + PlaneVector::new(mx, my) / (3.0 * delta);
    let tangent = cm.c * (-cm.c.det(cm.gs[1]) / (6.0 * delta));
    let kappa = 12.0 * delta / cm.norm_c().powi(3);
    Ok(DerivedCurveSample {
        family: Family::BuoyancyCurve,
        s: cm.s,
        point,
        tangent,
        kappa: Some(kappa),
        kappa_prime: Some(kappa_prime_buoyancy(cm)),
    })
}

/// `dκ₂/dσ₂ = 216δ²(cot α − cot β)/|c|⁶`.
pub fn kappa_prime_buoyancy(cm: &ChordMap) -> f64 {
    216.0 * cm.delta * cm.delta * (cot(cm.alpha) - cot(cm.beta)) / cm.norm_c().powi(6)
}

/// Jet of `r₁(s)` (order 3), for curvature by direct differentiation.
pub fn flotation_jet(cm: &ChordMap) -> JetVec {
    let j = cm.jets(3);
    j.x[0].add(&j.y[0]).scale_f(0.5)
}

/// Jet of `ṙ₂(s) = c·(−det(c, γ′(s))/(6δ))` (order 2).
pub fn buoyancy_velocity_jet(cm: &ChordMap) -> JetVec {
    let j = cm.jets(3);
    let c = j.c().truncate(2);
    let w = c.det(&j.x[1].truncate(2)) * (-1.0 / (6.0 * cm.delta));
    c.scale(&w)
}

/// Curvature and arc-length derivative of Π_δ from the jet of `r₁`.
pub fn flotation_curvature_from_jet(cm: &ChordMap) -> (f64, f64) {
    curvature_and_arc_derivative(&flotation_jet(cm))
}

/// Curvature and arc-length derivative of Γ_δ from the jet of `ṙ₂`.
pub fn buoyancy_curvature_from_jet(cm: &ChordMap) -> (f64, f64) {
    let v = buoyancy_velocity_jet(cm);
    // integrate once so the generic routine sees a position jet
    let r = JetVec::new(v.x.integral(0.0), v.y.integral(0.0));
    curvature_and_arc_derivative(&r)
}

/// Affine normal of Γ_δ at `r₂`.
pub fn buoyancy_affine_normal(cm: &ChordMap) -> PlaneVector {
    let v = buoyancy_velocity_jet(cm);
    affine_normal_jet(&JetVec::new(v.x.integral(0.0), v.y.integral(0.0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineNormalCheck {
    /// Angle (radians) between the affine normal of Γ_δ and `r₁ − z`.
    pub angle_error: f64,
    /// `| |r₂″| − 8δ̄^{1/3}|r₁ − z|/‖c‖³ |` relative to the predicted length.
    pub magnitude_error: f64,
}

/// Compares the affine normal of Γ_δ with `(8δ̄^{1/3}/‖c‖³)(r₁ − z)`. `None`
/// when the end tangents are parallel.
pub fn buoyancy_affine_normal_check(cm: &ChordMap) -> Result<Option<AffineNormalCheck>> {
    require(cm, ChordKind::Flotation)?;
    let (Some(z), Some(n3)) = (cm.z, cm.affine_norm_c_cubed()) else {
        return Ok(None);
    };
    let normal = buoyancy_affine_normal(cm);
    let r1 = (cm.x + cm.y) * 0.5;
    let delta_bar = HomothetyConstants::new(cm.delta, None).delta_bar;
    let predicted = (r1 - z) * (8.0 * delta_bar.cbrt() / n3);
    let angle_error = normal.det(predicted).atan2(normal.dot(predicted)).abs();
    let magnitude_error = (normal.norm() - predicted.norm()).abs() / predicted.norm();
    Ok(Some(AffineNormalCheck { angle_error, magnitude_error }))
}

/// Π_δ along a flotation sweep.
pub fn flotation_curve(sw: &Sweep) -> Result<Vec<DerivedCurveSample>> {
    sw.chords.iter().map(flotation_point).collect()
}

/// Γ_δ along a flotation sweep.
pub fn buoyancy_curve(curve: &ClosedConvexCurve, sw: &Sweep) -> Result<Vec<DerivedCurveSample>> {
    sw.chords.par_iter().map(|cm| buoyancy_point(curve, cm)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlotationBodyArea {
    pub value: f64,
    /// False when Π_δ has cusps or vertex singularities, in which case the
    /// value is a signed area rather than the area of a convex body.
    pub simple: bool,
}

/// `Vol₂(F_δ) = Vol₂(K) − ¼∮det(−c, γ′(s)) ds` over a uniform sweep.
pub fn flotation_body_area_from_sweep(curve_area: f64, sw: &Sweep) -> FlotationBodyArea {
    let vals: Vec<f64> = sw.chords.iter().map(|cm| -cm.c.det(cm.gs[1])).collect();
    let value = curve_area - 0.25 * periodic_trapezoid(&vals, TAU);
    let simple =
        sw.chords.iter().all(|cm| cm.gs[1].det(cm.gt[1]) > PARALLEL_TOLERANCE * cm.gs[1].norm() * cm.gt[1].norm());
    FlotationBodyArea { value, simple }
}

pub fn flotation_body_area(curve: &ClosedConvexCurve, delta: f64, n: usize) -> Result<FlotationBodyArea> {
    let sw = sweep(curve, ChordKind::Flotation, delta, n)?;
    Ok(flotation_body_area_from_sweep(curve.area()?, &sw))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaIdentity {
    /// `(Vol₂(K) − Vol₂(F_δ))/δ̄^{2/3}`, with `Vol₂(F_δ)` the signed area
    /// enclosed by the sampled Π_δ.
    pub lhs: f64,
    /// `½Ω(Γ_δ)`, the half affine perimeter of the sampled Γ_δ.
    pub rhs: f64,
    pub residual: f64,
}

/// Evaluates both sides of the affine-perimeter identity for Γ_δ from
/// independent samples of Π_δ and Γ_δ.
pub fn omega_identity(curve: &ClosedConvexCurve, delta: f64, n: usize) -> Result<OmegaIdentity> {
    let sw = sweep(curve, ChordKind::Flotation, delta, n)?;
    omega_identity_from_sweep(curve, &sw)
}

pub fn omega_identity_from_sweep(curve: &ClosedConvexCurve, sw: &Sweep) -> Result<OmegaIdentity> {
    let r1: Vec<PlaneVector> = sw.chords.iter().map(|cm| (cm.x + cm.y) * 0.5).collect();
    let r2: Vec<PlaneVector> = buoyancy_curve(curve, sw)?.into_iter().map(|d| d.point).collect();
    let flotation_body = TrigCurve::interpolate(&r1).signed_area();
    let delta_bar = HomothetyConstants::new(sw.delta, None).delta_bar;
    let lhs = (curve.area()? - flotation_body) / delta_bar.powf(2.0 / 3.0);
    let rhs = 0.5 * TrigCurve::interpolate(&r2).affine_length();
    Ok(OmegaIdentity { lhs, rhs, residual: (lhs - rhs).abs() / rhs.abs() })
}

pub fn omega_identity_residual(curve: &ClosedConvexCurve, delta: f64, n: usize) -> Result<f64> {
    omega_identity(curve, delta, n).map(|o| o.residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chord::{solve_flotation_chord, sweep};
    use std::f64::consts::{FRAC_PI_3, PI};

    fn circle() -> ClosedConvexCurve {
        ClosedConvexCurve::circle(1.0).unwrap()
    }

    fn ellipse() -> ClosedConvexCurve {
        ClosedConvexCurve::ellipse(2.0, 1.0, PlaneVector::ZERO, 0.0).unwrap()
    }

    fn segment(theta: f64) -> f64 {
        theta - theta.sin() * theta.cos()
    }

    #[test]
    fn circle_flotation_point() {
        let cm = solve_flotation_chord(&circle(), 0.4, segment(FRAC_PI_3), None).unwrap();
        let p = flotation_point(&cm).unwrap();
        assert!((p.point.norm() - 0.5).abs() < 1e-12);
        assert!((p.kappa.unwrap() - 2.0).abs() < 1e-10);
        assert!(p.kappa_prime.unwrap().abs() < 1e-10);
        let half = solve_flotation_chord(&circle(), 0.4, PI / 2.0, None).unwrap();
        let p = flotation_point(&half).unwrap();
        assert_eq!(p.tangent, PlaneVector::ZERO);
        assert!(p.kappa.is_none());
    }

    #[test]
    fn cot_form_agrees_with_affine_form() {
        let e = ellipse();
        for s in [0.1, 0.9, 2.2, 4.0] {
            let cm = solve_flotation_chord(&e, s, 1.3, None).unwrap();
            let k = flotation_point(&cm).unwrap().kappa.unwrap();
            assert!((k - flotation_kappa_cot(&cm)).abs() < 1e-10 * k);
        }
    }

    #[test]
    fn buoyancy_examples() {
        let c = circle();
        let cm = solve_flotation_chord(&c, 0.0, PI / 2.0, None).unwrap();
        let p = buoyancy_point(&c, &cm).unwrap();
        assert!((p.point.norm() - 4.0 / (3.0 * PI)).abs() < 1e-12);
        assert!((p.kappa.unwrap() - 3.0 * PI / 4.0).abs() < 1e-12);
        let cm = solve_flotation_chord(&c, 0.0, segment(FRAC_PI_3), None).unwrap();
        let p = buoyancy_point(&c, &cm).unwrap();
        let th = FRAC_PI_3;
        let oracle = 12.0 * segment(th) / (2.0 * th.sin()).powi(3);
        assert!((p.kappa.unwrap() - oracle).abs() < 1e-12);
        assert!((oracle - 1.418399).abs() < 1e-6);
        // inside the cap: beyond the chord, within the disk
        let mid = (cm.x + cm.y) * 0.5;
        assert!(p.point.norm() < 1.0 && p.point.norm() > mid.norm());
        let (a, g) = cap_centroid(&c, cm.s, cm.t).unwrap();
        assert!((a - cm.delta).abs() < 1e-12 && (g - p.point).norm() < 1e-12);
    }

    #[test]
    fn closed_forms_match_direct_differentiation() {
        let f = ClosedConvexCurve::fourier_radial(1.0, vec![0.0, 0.0, 0.05], vec![0.0, 0.02]).unwrap();
        for s in [0.3, 1.7, 3.9] {
            let cm = solve_flotation_chord(&f, s, 0.8, None).unwrap();
            let p1 = flotation_point(&cm).unwrap();
            let (k1, k1p) = flotation_curvature_from_jet(&cm);
            assert!((p1.kappa.unwrap() - k1).abs() < 1e-9 * k1.abs());
            assert!(
                (p1.kappa_prime.unwrap() - k1p).abs() < 1e-7 * (1.0 + k1p.abs()),
                "{} vs {k1p}",
                p1.kappa_prime.unwrap()
            );
            let p2 = buoyancy_point(&f, &cm).unwrap();
            let (k2, k2p) = buoyancy_curvature_from_jet(&cm);
            assert!((p2.kappa.unwrap() - k2).abs() < 1e-9 * k2);
            assert!((p2.kappa_prime.unwrap() - k2p).abs() < 1e-7 * (1.0 + k2p.abs()));
        }
    }

    #[test]
    fn kappa_prime_flips_under_reflection() {
        // reflecting the configuration swaps the roles of s and t
        let e = ClosedConvexCurve::fourier_radial(1.0, vec![0.0, 0.0, 0.05], vec![]).unwrap();
        let cm = solve_flotation_chord(&e, 0.3, 0.8, None).unwrap();
        let mirrored = solve_flotation_chord(&e, -cm.t, 0.8, None).unwrap();
        assert!((mirrored.t + cm.s).abs() < 1e-10);
        let (a, b) = (kappa_prime_flotation(&cm).unwrap(), kappa_prime_flotation(&mirrored).unwrap());
        assert!((a + b).abs() < 1e-9 * a.abs());
        assert!((kappa_prime_buoyancy(&cm) + kappa_prime_buoyancy(&mirrored)).abs() < 1e-9);
    }

    #[test]
    fn dupin_tangency_and_envelope() {
        let f = ClosedConvexCurve::fourier_radial(1.0, vec![0.0, 0.0, 0.05], vec![0.0, 0.02]).unwrap();
        let sw = sweep(&f, ChordKind::Flotation, 0.8, 64).unwrap();
        for (cm, p) in sw.chords.iter().zip(buoyancy_curve(&f, &sw).unwrap()) {
            assert!(p.tangent.det(cm.c).abs() < 1e-12 * p.tangent.norm() * cm.c.norm());
            let r1 = flotation_jet(cm);
            assert!(r1.derivative().value().det(cm.c).abs() < 1e-10 * cm.c.norm());
        }
    }

    #[test]
    fn flotation_body_area_examples() {
        let c = circle();
        let a = flotation_body_area(&c, segment(FRAC_PI_3), 64).unwrap();
        assert!((a.value - PI / 4.0).abs() < 1e-12 && a.simple);
        let small = flotation_body_area(&c, 1e-6, 64).unwrap();
        assert!((small.value - PI).abs() < 1e-3);
        let e = flotation_body_area(&ellipse(), 2.0 * segment(FRAC_PI_3), 64).unwrap();
        assert!((e.value - PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn omega_identity_examples() {
        let th = FRAC_PI_3;
        let o = omega_identity(&circle(), segment(th), 64).unwrap();
        let expected = PI * th.sin().powi(2) / (1.5 * segment(th)).powf(2.0 / 3.0);
        assert!((o.lhs - expected).abs() < 1e-10 && (o.rhs - expected).abs() < 1e-10);
        assert!(omega_identity_residual(&ellipse(), 1.0, 128).unwrap() < 1e-8);
        let f = ClosedConvexCurve::fourier_radial(1.0, vec![0.0, 0.0, 0.05], vec![]).unwrap();
        assert!(omega_identity_residual(&f, 0.8, 256).unwrap() < 1e-6);
    }

    #[test]
    fn affine_normal_proposition() {
        let c = circle();
        let cm = solve_flotation_chord(&c, 0.0, segment(FRAC_PI_3), None).unwrap();
        let chk = buoyancy_affine_normal_check(&cm).unwrap().unwrap();
        assert!(chk.angle_error < 1e-7 && chk.magnitude_error < 1e-7);
        // on the circle the affine normal of Γ_δ points at the center with length ρ^{-1/3}
        let rho = buoyancy_point(&c, &cm).unwrap().point.norm();
        assert!((buoyancy_affine_normal(&cm).norm() - rho.powf(-1.0 / 3.0)).abs() < 1e-10);
        let f = ClosedConvexCurve::fourier_radial(1.0, vec![0.0, 0.0, 0.05], vec![0.0, 0.02]).unwrap();
        for s in [0.0, 1.0, 2.5, 5.0] {
            let cm = solve_flotation_chord(&f, s, 0.8, None).unwrap();
            let chk = buoyancy_affine_normal_check(&cm).unwrap().unwrap();
            assert!(chk.angle_error < 1e-8 && chk.magnitude_error < 1e-8, "{chk:?}");
        }
        let half = solve_flotation_chord(&c, 0.0, PI / 2.0, None).unwrap();
        assert!(buoyancy_affine_normal_check(&half).unwrap().is_none());
    }
}
