//! Implicit chord maps `s ↦ t(s)`: chords cutting a fixed area off the body
//! (flotation) and chords whose tangent cone over the arc has a fixed area
//! (illumination).

use serde::{Deserialize, Serialize};

use crate::curve::{ClosedConvexCurve, Derivatives};
use crate::error::{Error, Result};
use crate::jet::{Jet, JetVec, MAX_ORDER};
use crate::quadrature::Quadrature;
use crate::solve::{safeguarded_newton, scan_sign_changes, Tolerance};
use crate::vector::PlaneVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChordKind {
    Flotation,
    Illumination,
}

/// A solved chord `γ(s)γ(t)` with its local geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct ChordMap {
    pub kind: ChordKind,
    pub delta: f64,
    pub s: f64,
    /// Unwrapped, `s < t < s + period`.
    pub t: f64,
    pub x: PlaneVector,
    pub y: PlaneVector,
    pub c: PlaneVector,
    /// Intersection of the end tangents; `None` when they are parallel.
    pub z: Option<PlaneVector>,
    pub alpha: f64,
    pub beta: f64,
    pub dt_ds: f64,
    /// `γ^{(k)}(s)`, `k = 0..=4`.
    pub gs: Derivatives,
    /// `γ^{(k)}(t)`, `k = 0..=4`.
    pub gt: Derivatives,
}

impl ChordMap {
    /// Assembles the chord geometry at `(s, t)`.
    pub fn at(curve: &ClosedConvexCurve, kind: ChordKind, delta: f64, s: f64, t: f64) -> Self {
        let gs = curve.derivatives(s, MAX_ORDER);
        let gt = curve.derivatives(t, MAX_ORDER);
        let (x, y) = (gs[0], gt[0]);
        let c = y - x;
        let (x1, y1) = (gs[1], gt[1]);
        let alpha = (-c.det(x1)).atan2(c.dot(x1));
        let beta = c.det(y1).atan2(c.dot(y1));
        let z = tangent_intersection_from(&gs, &gt);
        let dt_ds = match kind {
            ChordKind::Flotation => -c.det(x1) / c.det(y1),
            ChordKind::Illumination => {
                let (a, b) = (c.det(x1), c.det(y1));
                b * b * x1.det(gs[2]) / (a * a * y1.det(gt[2]))
            }
        };
        Self { kind, delta, s, t, x, y, c, z, alpha, beta, dt_ds, gs, gt }
    }

    /// Euclidean chord length `|c|`.
    pub fn norm_c(&self) -> f64 {
        self.c.norm()
    }

    /// Tangent triangle area `T = ½det(γ′(s),c)det(c,γ′(t))/det(γ′(s),γ′(t))`.
    pub fn triangle_area(&self) -> Option<f64> {
        let (x1, y1) = (self.gs[1], self.gt[1]);
        let d = x1.det(y1);
        if d.abs() <= PARALLEL_TOLERANCE * x1.norm() * y1.norm() {
            return None;
        }
        Some(0.5 * x1.det(self.c) * self.c.det(y1) / d)
    }

    /// Affine chord length `‖c‖ = 2T^{1/3}`.
    pub fn affine_norm_c(&self) -> Option<f64> {
        self.triangle_area().map(|t| 2.0 * t.cbrt())
    }

    /// `‖c‖³ = 8T`.
    pub fn affine_norm_c_cubed(&self) -> Option<f64> {
        self.triangle_area().map(|t| 8.0 * t)
    }

    /// Euclidean curvatures of the boundary at the two endpoints.
    pub fn endpoint_curvatures(&self) -> (f64, f64) {
        let k = |d: &Derivatives| d[1].det(d[2]) / d[1].norm().powi(3);
        (k(&self.gs), k(&self.gt))
    }

    /// Exact Taylor jets of the chord quantities in `s`.
    pub fn jets(&self, order: usize) -> ChordJets {
        ChordJets::new(self, order)
    }
}

/// Relative size of `det(γ′(s), γ′(t))` below which the end tangents count as
/// parallel.
pub const PARALLEL_TOLERANCE: f64 = 1e-12;

fn tangent_intersection_from(gs: &Derivatives, gt: &Derivatives) -> Option<PlaneVector> {
    let (x1, y1) = (gs[1], gt[1]);
    let d = x1.det(y1);
    if d.abs() <= PARALLEL_TOLERANCE * x1.norm() * y1.norm() {
        return None;
    }
    let c = gt[0] - gs[0];
    Some(gs[0] + x1 * (c.det(y1) / d))
}

fn check_order(curve: &ClosedConvexCurve, s: f64, t: f64) -> Result<()> {
    if !(s.is_finite() && t.is_finite()) || t < s || t > s + curve.period() * (1.0 + 1e-14) {
        return Err(Error::domain(format!("need s ≤ t ≤ s + period, got s={s}, t={t}")));
    }
    Ok(())
}

fn cap_quadrature() -> Quadrature {
    Quadrature { initial_panels: 4, ..Default::default() }
}

/// Area cut off by the chord: `½∫ₛᵗ det(γ(u) − γ(s), γ′(u)) du`.
pub fn cap_area(curve: &ClosedConvexCurve, s: f64, t: f64) -> Result<f64> {
    check_order(curve, s, t)?;
    let x = curve.point(s);
    cap_quadrature().integrate_scalar(
        |u| {
            let d = curve.derivatives(u, 1);
            0.5 * (d[0] - x).det(d[1])
        },
        s,
        t,
    )
}

/// Area between the two end tangents and the arc from `s` to `t`.
pub fn cone_area(curve: &ClosedConvexCurve, s: f64, t: f64) -> Result<f64> {
    check_order(curve, s, t)?;
    if t == s {
        return Ok(0.0);
    }
    let cm = ChordMap::at(curve, ChordKind::Illumination, 0.0, s, t);
    let tri = cm.triangle_area().ok_or(Error::NoApex { s, t })?;
    Ok(tri - cap_area(curve, s, t)?)
}

/// Intersection of the tangent lines at `γ(s)` and `γ(t)`.
pub fn tangent_intersection(curve: &ClosedConvexCurve, s: f64, t: f64) -> Result<PlaneVector> {
    tangent_intersection_from(&curve.derivatives(s, 1), &curve.derivatives(t, 1)).ok_or(Error::NoApex { s, t })
}

fn solver_tolerance(curve_area: f64) -> Tolerance {
    Tolerance { ftol: 1e-14 * curve_area, xtol: 1e-15, max_iter: 200 }
}

/// Finds `t ∈ (s, s + period)` with `cap_area(s, t) = delta`.
pub fn solve_flotation_chord(curve: &ClosedConvexCurve, s: f64, delta: f64, hint: Option<f64>) -> Result<ChordMap> {
    let area = curve.area()?;
    solve_flotation_chord_with_area(curve, area, s, delta, hint)
}

pub(crate) fn solve_flotation_chord_with_area(
    curve: &ClosedConvexCurve,
    area: f64,
    s: f64,
    delta: f64,
    hint: Option<f64>,
) -> Result<ChordMap> {
    if !(delta > 0.0 && delta < area) {
        return Err(Error::domain(format!("flotation area must lie in (0, {area}), got {delta}")));
    }
    if !s.is_finite() {
        return Err(Error::domain("chord parameter must be finite"));
    }
    let period = curve.period();
    let x = curve.point(s);
    let f = |t: f64| -> Result<(f64, f64)> {
        let a = cap_area(curve, s, t)?;
        let d = curve.derivatives(t, 1);
        Ok((a - delta, 0.5 * (d[0] - x).det(d[1])))
    };
    let (lo, hi) = bracket(&f, s, s + period, hint, period / 64.0)?;
    let t = safeguarded_newton(f, lo, hi, hint, solver_tolerance(area))?;
    Ok(ChordMap::at(curve, ChordKind::Flotation, delta, s, t))
}

/// Narrows `[lo, hi]` around `hint` by geometric expansion, falling back to
/// the full window. `f` must be increasing with `f(lo) < 0 < f(hi)`.
fn bracket(
    f: &impl Fn(f64) -> Result<(f64, f64)>,
    lo: f64,
    hi: f64,
    hint: Option<f64>,
    width: f64,
) -> Result<(f64, f64)> {
    let Some(h) = hint.filter(|h| *h > lo && *h < hi) else {
        return Ok((lo, hi));
    };
    let mut w = width;
    let (mut a, mut b) = (h, h);
    for _ in 0..60 {
        a = (h - w).max(lo);
        b = (h + w).min(hi);
        let fa = if a == lo { -1.0 } else { f(a)?.0 };
        let fb = if b == hi { 1.0 } else { f(b)?.0 };
        if fa <= 0.0 && fb >= 0.0 {
            return Ok((a, b));
        }
        if a == lo && b == hi {
            break;
        }
        w *= 4.0;
    }
    Ok((a.min(lo), b.max(hi)))
}

/// First `u ∈ (s, s + period)` where the tangent at `γ(u)` is antiparallel to
/// the tangent at `γ(s)`; cone areas blow up there.
pub fn antipodal_parameter(curve: &ClosedConvexCurve, s: f64) -> Result<f64> {
    let period = curve.period();
    let xs = curve.derivatives(s, 1)[1];
    let g = |u: f64| xs.det(curve.derivatives(u, 1)[1]);
    let n = 4 * curve.resolution().max(64);
    let h = period / n as f64;
    let change = scan_sign_changes(g, s + h, s + period - h, n - 2)
        .into_iter()
        .find(|&(_, _, sign)| sign > 0.0)
        .ok_or_else(|| Error::solver(format!("no antipodal tangent found for s = {s}")))?;
    safeguarded_newton(
        |u| {
            let d = curve.derivatives(u, 2);
            Ok((-xs.det(d[1]), -xs.det(d[2])))
        },
        change.0,
        change.1,
        None,
        Tolerance::default(),
    )
}

/// Finds `t` with `cone_area(s, t) = delta_hat`; requires strong convexity.
pub fn solve_silhouette_chord(
    curve: &ClosedConvexCurve,
    s: f64,
    delta_hat: f64,
    hint: Option<f64>,
) -> Result<ChordMap> {
    let area = curve.area()?;
    solve_silhouette_chord_with_area(curve, area, s, delta_hat, hint)
}

pub(crate) fn solve_silhouette_chord_with_area(
    curve: &ClosedConvexCurve,
    area: f64,
    s: f64,
    delta_hat: f64,
    hint: Option<f64>,
) -> Result<ChordMap> {
    if !(delta_hat > 0.0 && delta_hat.is_finite()) {
        return Err(Error::domain(format!("silhouette area must be positive, got {delta_hat}")));
    }
    if !s.is_finite() {
        return Err(Error::domain("chord parameter must be finite"));
    }
    let ds = curve.derivatives(s, 2);
    if !(ds[1].det(ds[2]) > 0.0) {
        return Err(Error::DegenerateCurve { s, det: ds[1].det(ds[2]) });
    }
    let t_max = antipodal_parameter(curve, s)?;
    let x = ds[0];
    let x1 = ds[1];
    let span = t_max - s;
    let f = |t: f64| -> Result<(f64, f64)> {
        if t - s <= 1e-12 * span {
            return Ok((-delta_hat, 0.0));
        }
        let d = curve.derivatives(t, 2);
        let c = d[0] - x;
        let den = x1.det(d[1]);
        let tri = 0.5 * x1.det(c) * c.det(d[1]) / den;
        let a = tri - cap_area(curve, s, t)?;
        let slope = 0.5 * c.det(x1).powi(2) * d[1].det(d[2]) / (den * den);
        Ok((a - delta_hat, slope))
    };
    // stay clear of the apex at infinity
    let hi = t_max - 1e-6 * span;
    let top = f(hi)?.0;
    if !(top > 0.0) {
        return Err(Error::solver(format!(
            "silhouette area {delta_hat} exceeds the cone area {:.6e} reachable before the antipodal tangent at t = {t_max}",
            top + delta_hat
        )));
    }
    let (lo, hi) = bracket(&f, s, hi, hint, span / 64.0)?;
    let t = safeguarded_newton(f, lo, hi, hint, solver_tolerance(area))?;
    Ok(ChordMap::at(curve, ChordKind::Illumination, delta_hat, s, t))
}

/// Chord maps along a uniform grid of `s`, continued from one to the next.
#[derive(Debug, Clone)]
pub struct Sweep {
    pub kind: ChordKind,
    pub delta: f64,
    pub chords: Vec<ChordMap>,
    /// `t(s₀ + period) − t(s₀) − period`.
    pub closure_defect: f64,
}

impl Sweep {
    pub fn len(&self) -> usize {
        self.chords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chords.is_empty()
    }
}

/// Solves chords at `s_j = s0 + j·period/n`, `j = 0..n`, each warm-started
/// from its predecessor, and closes the loop at `s0 + period`.
pub fn sweep(curve: &ClosedConvexCurve, kind: ChordKind, delta: f64, n: usize) -> Result<Sweep> {
    sweep_from(curve, kind, delta, n, 0.0)
}

pub fn sweep_from(curve: &ClosedConvexCurve, kind: ChordKind, delta: f64, n: usize, s0: f64) -> Result<Sweep> {
    if n < 16 {
        return Err(Error::domain(format!("sweep needs at least 16 samples, got {n}")));
    }
    let area = curve.area()?;
    let period = curve.period();
    let h = period / n as f64;
    let solve = |s: f64, hint: Option<f64>| match kind {
        ChordKind::Flotation => solve_flotation_chord_with_area(curve, area, s, delta, hint),
        ChordKind::Illumination => solve_silhouette_chord_with_area(curve, area, s, delta, hint),
    };
    let mut chords: Vec<ChordMap> = Vec::with_capacity(n);
    let mut hint = None;
    for j in 0..=n {
        let s = s0 + j as f64 * h;
        let cm = solve(s, hint)?;
        if let Some(prev) = chords.last() {
            if !(cm.t > prev.t) {
                return Err(Error::solver(format!(
                    "chord map lost monotonicity at s = {s}: t = {} after {}",
                    cm.t, prev.t
                )));
            }
        }
        hint = Some(cm.t + h * cm.dt_ds);
        chords.push(cm);
    }
    let last = chords.pop().expect("n ≥ 16");
    let closure_defect = last.t - chords[0].t - period;
    Ok(Sweep { kind, delta, chords, closure_defect })
}

/// Taylor jets in `s` of the chord endpoint derivatives and of `t(s)`.
///
/// `x[k]` is `γ^{(k)}(s)`, `y[k]` is `γ^{(k)}(t(s))`. The jet of `t` is built
/// by repeatedly integrating the exact chord-map derivative.
#[derive(Debug, Clone)]
pub struct ChordJets {
    pub t: Jet,
    pub x: [JetVec; 3],
    pub y: [JetVec; 3],
}

impl ChordJets {
    /// `order` ≤ 4 for flotation and ≤ 3 for illumination chords.
    pub fn new(cm: &ChordMap, order: usize) -> Self {
        let max = match cm.kind {
            ChordKind::Flotation => MAX_ORDER,
            ChordKind::Illumination => MAX_ORDER - 1,
        };
        let order = order.min(max);
        let xs = |k: usize| JetVec::from_derivatives(&cm.gs[k..=(k + order).min(MAX_ORDER)]);
        let x = [xs(0), xs(1), xs(2)];
        let ys = |t: &Jet, k: usize| JetVec::compose(&cm.gt[k..], t);
        let mut t = Jet::constant(cm.t, 0);
        for k in 0..order {
            let y0 = ys(&t, 0);
            let y1 = ys(&t, 1);
            let c = y0.sub(&x[0]);
            let rhs = match cm.kind {
                ChordKind::Flotation => -(c.det(&x[1]) / c.det(&y1)),
                ChordKind::Illumination => {
                    let y2 = ys(&t, 2);
                    let a = c.det(&x[1]);
                    let b = c.det(&y1);
                    b * b * x[1].det(&x[2]) / (a * a * y1.det(&y2))
                }
            };
            t = rhs.truncate(k).integral(cm.t);
        }
        let y = [ys(&t, 0), ys(&t, 1), ys(&t, 2)];
        Self { t, x, y }
    }

    /// `c(s) = γ(t(s)) − γ(s)`.
    pub fn c(&self) -> JetVec {
        self.y[0].sub(&self.x[0])
    }
}
