use rayon::prelude::*;
use serde::Serialize;

use super::fit::ConstancyReport;
use crate::chord::{solve_flotation_chord_with_area, tangent_intersection, ChordMap};
use crate::curve::ClosedConvexCurve;
use crate::error::{Error, Result};
use crate::solve::{illinois, Tolerance};
use crate::vector::PlaneVector;

/// Chain of `q` equal-area chords starting at `s0` that should wind `p` times.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Carousel {
    pub p: usize,
    pub q: usize,
    pub delta: f64,
    pub s0: f64,
    /// `t₀ = s0 < t₁ < … < t_q`.
    pub vertices: Vec<f64>,
    /// `t_q − t₀ − p·period`.
    pub closure_defect: f64,
    /// Mean of the `q` chair positions `γ(t₀), …, γ(t_{q−1})`.
    pub centroid: PlaneVector,
    /// `det(γ(t_i)−γ(t_{i−1}), γ′(t_i)+γ′(t_{i−1}))` normalised by
    /// `|γ(t_i)−γ(t_{i−1})|·(|γ′(t_i)|+|γ′(t_{i−1})|)`. Zero only when the
    /// parametrization advances every chair at the same rate.
    pub chaining_residuals: Vec<f64>,
    /// Tangent-triangle ratios `λ₁, λ₂, λ₃` (only for `q = 3`).
    pub lambdas: Option<[f64; 3]>,
    /// Max distance between a chair and the midpoint of its side of the
    /// tangent triangle (only for `q = 3`).
    pub medial_defect: Option<f64>,
}

impl Carousel {
    pub fn lambda_product(&self) -> Option<f64> {
        self.lambdas.map(|l| l[0] * l[1] * l[2])
    }
}

fn check_args(area: f64, p: usize, q: usize, delta: f64) -> Result<()> {
    if !(p > 0 && p < q) {
        return Err(Error::domain(format!("need 0 < p < q, got p={p}, q={q}")));
    }
    if !(delta > 0.0 && delta < area) {
        return Err(Error::domain(format!("δ = {delta} outside (0, {area})")));
    }
    Ok(())
}

fn chain(curve: &ClosedConvexCurve, area: f64, q: usize, delta: f64, s0: f64) -> Result<Vec<f64>> {
    let mut ts = Vec::with_capacity(q + 1);
    ts.push(s0);
    for _ in 0..q {
        let s = *ts.last().expect("non-empty");
        ts.push(solve_flotation_chord_with_area(curve, area, s, delta, None)?.t);
    }
    Ok(ts)
}

fn closure_defect(curve: &ClosedConvexCurve, area: f64, p: usize, q: usize, delta: f64, s0: f64) -> Result<f64> {
    let ts = chain(curve, area, q, delta, s0)?;
    Ok(ts[q] - s0 - p as f64 * curve.period())
}

/// Chains `t_i = t(t_{i−1})` along chords of flotation of area `delta`.
pub fn build_carousel(curve: &ClosedConvexCurve, p: usize, q: usize, delta: f64, s0: f64) -> Result<Carousel> {
    let area = curve.area()?;
    build_carousel_with_area(curve, area, p, q, delta, s0)
}

fn build_carousel_with_area(
    curve: &ClosedConvexCurve,
    area: f64,
    p: usize,
    q: usize,
    delta: f64,
    s0: f64,
) -> Result<Carousel> {
    check_args(area, p, q, delta)?;
    let period = curve.period();
    let vertices = chain(curve, area, q, delta, s0)?;
    if let Some(i) = (1..q).find(|&i| vertices[i] - s0 >= p as f64 * period) {
        return Err(Error::CarouselOverflow { steps: i });
    }
    let closure_defect = vertices[q] - s0 - p as f64 * period;
    let derivs: Vec<_> = vertices.iter().map(|&t| curve.derivatives(t, 1)).collect();
    let centroid = derivs[..q].iter().fold(PlaneVector::ZERO, |acc, d| acc + d[0]) / q as f64;
    let chaining_residuals = derivs
        .windows(2)
        .map(|w| {
            let c = w[1][0] - w[0][0];
            let v = w[1][1] + w[0][1];
            c.det(v) / (c.norm() * (w[1][1].norm() + w[0][1].norm()))
        })
        .collect();
    let (lambdas, medial_defect) = if q == 3 {
        let (x, y, z) = (derivs[0][0], derivs[1][0], derivs[2][0]);
        let (tx, ty, tz) = (vertices[0], vertices[1], vertices[2]);
        let xh = tangent_intersection(curve, ty, tz)?;
        let yh = tangent_intersection(curve, tz, tx + period)?;
        let zh = tangent_intersection(curve, tx, ty)?;
        let l =
            [(yh - x).norm() / (x - zh).norm(), (zh - y).norm() / (y - xh).norm(), (xh - z).norm() / (z - yh).norm()];
        let medial = [((yh + zh) * 0.5 - x).norm(), ((zh + xh) * 0.5 - y).norm(), ((xh + yh) * 0.5 - z).norm()];
        (Some(l), Some(medial.into_iter().fold(0.0, f64::max)))
    } else {
        (None, None)
    };
    Ok(Carousel { p, q, delta, s0, vertices, closure_defect, centroid, chaining_residuals, lambdas, medial_defect })
}

/// The δ for which the carousel from `s0` closes after `q` chords and `p`
/// turns.
pub fn solve_carousel_delta(curve: &ClosedConvexCurve, p: usize, q: usize, s0: f64) -> Result<f64> {
    if q < 2 || p == 0 || p >= q {
        return Err(Error::domain(format!("need q ≥ 2 and 0 < p < q, got p={p}, q={q}")));
    }
    let area = curve.area()?;
    let period = curve.period();
    let (lo, hi) = (1e-6 * area, (1.0 - 1e-6) * area);
    let f = |d: f64| closure_defect(curve, area, p, q, d, s0);
    let (flo, fhi) = (f(lo)?, f(hi)?);
    if flo.signum() == fhi.signum() {
        return Err(Error::NoClosure);
    }
    illinois(f, lo, hi, Tolerance { ftol: 1e-13 * period, xtol: 1e-16, max_iter: 200 })
}

/// Closure tolerance, relative to the period, for the density-1/3 diagnostics.
pub const CLOSURE_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Thm07Diagnostics {
    /// All `λ₁, λ₂, λ₃` over every sample.
    pub lambda_report: ConstancyReport,
    /// Max `|λ₁λ₂λ₃ − 1|`.
    pub product_deviation_max: f64,
    /// Max `|μ(s) − μ(s₀)|`.
    pub centroid_drift_max: f64,
    pub medial_defect_max: f64,
    pub chaining_residual_max: f64,
    pub closure_defect_max: f64,
    pub centroid_track: Vec<(f64, PlaneVector)>,
}

/// Density-1/3 carousels at `n` starting points `s ∈ [0, period)`.
pub fn thm07_diagnostics(curve: &ClosedConvexCurve, delta: f64, n: usize) -> Result<Thm07Diagnostics> {
    if n == 0 {
        return Err(Error::domain("need at least one sample"));
    }
    let area = curve.area()?;
    let period = curve.period();
    let h = period / n as f64;
    let carousels: Vec<Carousel> = (0..n)
        .into_par_iter()
        .map(|j| build_carousel_with_area(curve, area, 1, 3, delta, j as f64 * h))
        .collect::<Result<_>>()?;
    let closure_defect_max = carousels.iter().map(|c| c.closure_defect.abs()).fold(0.0, f64::max);
    if closure_defect_max > CLOSURE_TOLERANCE * period {
        return Err(Error::domain(format!(
            "density-1/3 carousel does not close at δ = {delta} (defect {closure_defect_max:e})"
        )));
    }
    let lambdas: Vec<f64> = carousels.iter().flat_map(|c| c.lambdas.expect("q = 3")).collect();
    let lambda_report = ConstancyReport::from_values(&lambdas)?;
    let product_deviation_max =
        carousels.iter().map(|c| (c.lambda_product().expect("q = 3") - 1.0).abs()).fold(0.0, f64::max);
    let mu0 = carousels[0].centroid;
    let centroid_drift_max = carousels.iter().map(|c| (c.centroid - mu0).norm()).fold(0.0, f64::max);
    let medial_defect_max = carousels.iter().map(|c| c.medial_defect.expect("q = 3")).fold(0.0, f64::max);
    let chaining_residual_max =
        carousels.iter().flat_map(|c| c.chaining_residuals.iter().map(|r| r.abs())).fold(0.0, f64::max);
    let centroid_track = carousels.iter().map(|c| (c.s0, c.centroid)).collect();
    Ok(Thm07Diagnostics {
        lambda_report,
        product_deviation_max,
        centroid_drift_max,
        medial_defect_max,
        chaining_residual_max,
        closure_defect_max,
        centroid_track,
    })
}

/// `Π sinαᵢ/sinβᵢ` over the chords of a carousel, which equals `λ₁λ₂λ₃` for
/// `q = 3` by the law of sines in each tangent triangle.
pub fn angle_ratio_product(curve: &ClosedConvexCurve, carousel: &Carousel) -> f64 {
    carousel
        .vertices
        .windows(2)
        .map(|w| {
            let cm = ChordMap::at(curve, crate::chord::ChordKind::Flotation, carousel.delta, w[0], w[1]);
            cm.alpha.sin() / cm.beta.sin()
        })
        .product()
}
