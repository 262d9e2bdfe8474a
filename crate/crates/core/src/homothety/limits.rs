use rayon::prelude::*;

use crate::chord::{sweep, ChordKind};
use crate::curve::{ClosedConvexCurve, TrigCurve};
use crate::error::{Error, Result};
use crate::vector::PlaneVector;

fn one_sided<F: Fn(PlaneVector, &[PlaneVector]) -> f64 + Sync>(a: &[PlaneVector], b: &[PlaneVector], d: F) -> f64 {
    a.par_iter().map(|p| d(*p, b)).reduce(|| 0.0, f64::max)
}

fn point_to_set(p: PlaneVector, set: &[PlaneVector]) -> f64 {
    set.iter().map(|q| p.distance(*q)).fold(f64::INFINITY, f64::min)
}

fn point_to_segment(p: PlaneVector, a: PlaneVector, b: PlaneVector) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return p.distance(a);
    }
    let u = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.distance(a + ab * u)
}

fn point_to_polygon(p: PlaneVector, poly: &[PlaneVector]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| point_to_segment(p, poly[i], poly[(i + 1) % n])).fold(f64::INFINITY, f64::min)
}

fn check_non_empty(a: &[PlaneVector], b: &[PlaneVector]) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::domain("Hausdorff distance of an empty sample set"));
    }
    Ok(())
}

/// Symmetric Hausdorff distance between two finite point sets.
pub fn hausdorff_distance(a: &[PlaneVector], b: &[PlaneVector]) -> Result<f64> {
    check_non_empty(a, b)?;
    Ok(one_sided(a, b, point_to_set).max(one_sided(b, a, point_to_set)))
}

/// Symmetric Hausdorff distance between the vertex sets of two closed
/// polygons, measured from each vertex to the other polygon's edges.
pub fn hausdorff_distance_polygons(a: &[PlaneVector], b: &[PlaneVector]) -> Result<f64> {
    check_non_empty(a, b)?;
    Ok(one_sided(a, b, point_to_polygon).max(one_sided(b, a, point_to_polygon)))
}

/// Resamples a closed curve given by uniformly parametrized samples at `m`
/// points of its trigonometric interpolant.
pub fn densify_closed(points: &[PlaneVector], m: usize) -> Vec<PlaneVector> {
    let trig = TrigCurve::interpolate(points);
    (0..m).map(|j| trig.derivatives(std::f64::consts::TAU * j as f64 / m as f64, 0)[0]).collect()
}

/// `ε⁻¹·Π_δ` at `δ = area/2 − ε`, sampled along a flotation sweep of `n`
/// chords. Scaling is about the origin, so the body should be centred there.
pub fn scaled_flotation_boundary(curve: &ClosedConvexCurve, eps: f64, n: usize) -> Result<Vec<PlaneVector>> {
    let area = curve.area()?;
    if !(eps > 0.0 && eps < 0.5 * area) {
        return Err(Error::domain(format!("ε = {eps} outside (0, area/2)")));
    }
    let sw = sweep(curve, ChordKind::Flotation, 0.5 * area - eps, n)?;
    Ok(sw.chords.iter().map(|cm| (cm.x + cm.y) * (0.5 / eps)).collect())
}

/// `(2δ̂)⁻¹·Π^δ̂`, sampled along a silhouette sweep of `n` chords.
pub fn scaled_illumination_boundary(curve: &ClosedConvexCurve, delta_hat: f64, n: usize) -> Result<Vec<PlaneVector>> {
    if !(delta_hat > 0.0) {
        return Err(Error::domain(format!("δ̂ = {delta_hat} must be positive")));
    }
    let sw = sweep(curve, ChordKind::Illumination, delta_hat, n)?;
    sw.chords.iter().map(|cm| cm.z.map(|z| z / (2.0 * delta_hat)).ok_or(Error::NoApex { s: cm.s, t: cm.t })).collect()
}
