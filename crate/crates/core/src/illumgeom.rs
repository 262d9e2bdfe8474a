//! The boundary Π^δ̂ of the body of illumination (apexes of the tangent cones
//! of area δ̂), its centroid curve Γ^δ̂, and the pole/polar correspondence
//! induced by tangency with the boundary.

use rayon::prelude::*;

use crate::chord::{ChordKind, ChordMap, Sweep};
use crate::curve::ClosedConvexCurve;
use crate::error::{Error, Result};
use crate::floatgeom::{DerivedCurveSample, Family};
use crate::jet::{curvature_jet, JetVec};
use crate::quadrature::Quadrature;
use crate::solve::{safeguarded_newton, scan_sign_changes, Tolerance};
use crate::vector::PlaneVector;

fn require(cm: &ChordMap) -> Result<PlaneVector> {
    if cm.kind != ChordKind::Illumination {
        return Err(Error::domain(format!("expected an Illumination chord, got {:?}", cm.kind)));
    }
    cm.z.ok_or(Error::NoApex { s: cm.s, t: cm.t })
}

/// `4(sin³α/κ(s) + sin³β/κ(t))/‖c‖³`.
pub fn illumination_kappa(cm: &ChordMap) -> Option<f64> {
    let (ks, kt) = cm.endpoint_curvatures();
    let n3 = cm.affine_norm_c_cubed()?;
    Some(4.0 * (cm.alpha.sin().powi(3) / ks + cm.beta.sin().powi(3) / kt) / n3)
}

/// Curvature of Π^δ̂ written with determinants of boundary derivatives only.
pub fn illumination_kappa_raw(cm: &ChordMap) -> f64 {
    let (x1, x2, y1, y2) = (cm.gs[1], cm.gs[2], cm.gt[1], cm.gt[2]);
    let c = cm.c;
    let (a, b) = (c.det(x1), c.det(y1));
    let (px, py) = (x1.det(x2), y1.det(y2));
    -x1.det(y1) * (b.powi(3) * px - a.powi(3) * py) / (c.norm().powi(3) * a * b * px * py)
}

/// Apex of the tangent cone, the point of Π^δ̂.
pub fn illumination_point(cm: &ChordMap) -> Result<DerivedCurveSample> {
    let z = require(cm)?;
    let (x1, x2, y1) = (cm.gs[1], cm.gs[2], cm.gt[1]);
    let c = cm.c;
    let tangent = c * (-c.det(y1) * x1.det(x2) / (c.det(x1) * x1.det(y1)));
    Ok(DerivedCurveSample {
        family: Family::IlluminationBoundary,
        s: cm.s,
        point: z,
        tangent,
        kappa: illumination_kappa(cm),
        kappa_prime: None,
    })
}

/// Centroid of the tangent cone, the point of Γ^δ̂.
pub fn illumination_centroid_point(curve: &ClosedConvexCurve, cm: &ChordMap) -> Result<DerivedCurveSample> {
    let z = require(cm)?;
    let dh = cm.delta;
    let q = Quadrature { initial_panels: 4, ..Default::default() };
    let [mx, my] = q.integrate(
        |u| {
            let d = curve.derivatives(u, 1);
            let v = d[0] - z;
            let w = v.det(d[1]);
            [v.x * w, v.y * w]
        },
        cm.s,
        cm.t,
    )?;
    let point = z - PlaneVector::new(mx, my) / (3.0 * dh);
    let (x1, x2, y1) = (cm.gs[1], cm.gs[2], cm.gt[1]);
    let c = cm.c;
    let d = x1.det(y1);
    let tangent = c * (c.det(y1).powi(2) * x1.det(x2) / (6.0 * dh * d * d));
    let kappa = cm.affine_norm_c_cubed().map(|n3| {
        let (ks, kt) = cm.endpoint_curvatures();
        96.0 * dh * (cm.alpha.sin().powi(3) / ks + cm.beta.sin().powi(3) / kt) / (n3 * n3)
    });
    Ok(DerivedCurveSample { family: Family::IlluminationCentroid, s: cm.s, point, tangent, kappa, kappa_prime: None })
}

/// Jet of `r₃(s) = γ(s) + γ′(s)·det(c, γ′(t))/det(γ′(s), γ′(t))` (order 3).
pub fn illumination_jet(cm: &ChordMap) -> JetVec {
    let j = cm.jets(3);
    let c = j.c();
    let w = c.det(&j.y[1]) / j.x[1].det(&j.y[1]);
    j.x[0].add(&j.x[1].scale(&w))
}

/// Curvature of Π^δ̂ from the jet of `r₃`.
pub fn illumination_curvature_from_jet(cm: &ChordMap) -> f64 {
    curvature_jet(&illumination_jet(cm)).value()
}

pub fn illumination_curve(sw: &Sweep) -> Result<Vec<DerivedCurveSample>> {
    sw.chords.iter().map(illumination_point).collect()
}

pub fn illumination_centroid_curve(curve: &ClosedConvexCurve, sw: &Sweep) -> Result<Vec<DerivedCurveSample>> {
    sw.chords.par_iter().map(|cm| illumination_centroid_point(curve, cm)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pole {
    Finite(PlaneVector),
    /// Parallel end tangents; the pole is the point at infinity in this
    /// direction.
    AtInfinity {
        direction: PlaneVector,
    },
}

impl Pole {
    pub fn finite(&self) -> Option<PlaneVector> {
        match self {
            Pole::Finite(p) => Some(*p),
            Pole::AtInfinity { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarityResult {
    pub pole: Pole,
    /// Tangency parameters, `s < t < s + period`.
    pub s: f64,
    pub t: f64,
}

/// The pole of the line through `γ(s)` and `γ(t)`.
pub fn pole_of_chord(curve: &ClosedConvexCurve, s: f64, t: f64) -> Result<PolarityResult> {
    if !(s.is_finite() && t.is_finite()) {
        return Err(Error::domain("chord parameters must be finite"));
    }
    let period = curve.period();
    let gap = (t - s).rem_euclid(period);
    if gap == 0.0 {
        return Err(Error::domain("a chord needs two distinct endpoints"));
    }
    let t = s + gap;
    let (ds, dt) = (curve.derivatives(s, 1), curve.derivatives(t, 1));
    let d = ds[1].det(dt[1]);
    let pole = if d.abs() <= crate::chord::PARALLEL_TOLERANCE * ds[1].norm() * dt[1].norm() {
        Pole::AtInfinity { direction: ds[1].normalized() }
    } else {
        let c = dt[0] - ds[0];
        Pole::Finite(ds[0] + ds[1] * (c.det(dt[1]) / d))
    };
    Ok(PolarityResult { pole, s, t })
}

/// The two tangency parameters of the tangent lines from an exterior point.
pub fn polar_of_point(curve: &ClosedConvexCurve, p: PlaneVector) -> Result<PolarityResult> {
    if !p.is_finite() {
        return Err(Error::domain("pole must be finite"));
    }
    let period = curve.period();
    let f = |u: f64| {
        let d = curve.derivatives(u, 1);
        (d[0] - p).det(d[1])
    };
    let n = 4 * curve.resolution();
    let changes = scan_sign_changes(f, 0.0, period, n);
    if changes.is_empty() {
        return Err(Error::domain(format!("point ({}, {}) is not outside the curve", p.x, p.y)));
    }
    if changes.len() != 2 {
        return Err(Error::solver(format!("expected 2 tangency sign changes, found {}", changes.len())));
    }
    let refine = |(a, b, _): (f64, f64, f64)| {
        safeguarded_newton(
            |u| {
                let d = curve.derivatives(u, 2);
                Ok(((d[0] - p).det(d[1]), (d[0] - p).det(d[2])))
            },
            a,
            b,
            None,
            Tolerance::default(),
        )
    };
    // s: the sign goes + → −, t: − → +
    let (down, up) = if changes[0].2 > 0.0 { (changes[0], changes[1]) } else { (changes[1], changes[0]) };
    let s = refine(down)?;
    let mut t = refine(up)?;
    if t < s {
        t += period;
    }
    let pole = Pole::Finite(p);
    Ok(PolarityResult { pole, s, t })
}
