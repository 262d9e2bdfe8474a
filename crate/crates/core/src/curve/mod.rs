//! Smooth closed convex plane curves and their Euclidean and equi-affine
//! differential invariants.
//!
//! Every curve is parametrized over `[0, 2π)` and positively oriented.
//! Analytic kinds evaluate exact derivatives; sampled curves use
//! trigonometric interpolation, so derivatives up to order four are available
//! for every kind.

mod spec;
mod spectral;

use std::f64::consts::{FRAC_PI_2, TAU};

pub use spec::CurveSpec;
pub use spectral::{TrigCurve, TrigSeries};

use crate::error::{Error, Result};
use crate::jet::{affine_normal_from_derivatives, JetVec, MAX_ORDER};
use crate::quadrature::Quadrature;
use crate::vector::{AffineFrame, PlaneVector};

/// Resolution used for convexity checks of analytic kinds.
pub const DEFAULT_RESOLUTION: usize = 512;

/// `det(γ′, γ″)/|γ′|²` below this magnitude counts as a flat point.
const FLAT_TOLERANCE: f64 = 1e-10;

pub type Derivatives = [PlaneVector; MAX_ORDER + 1];

#[derive(Debug, Clone, PartialEq)]
pub enum CurveKind {
    /// `center + R(rotation)·(a cos s, b sin s)`.
    Ellipse { a: f64, b: f64, center: PlaneVector, rotation: f64 },
    /// `r(s)·(cos s, sin s)` with `r(s) = r0 + Σ cos[k-1]·cos ks + sin[k-1]·sin ks`.
    FourierRadial { r0: f64, cos: Vec<f64>, sin: Vec<f64> },
    /// Trigonometric interpolant of uniform samples.
    SampledPeriodic(TrigCurve),
    /// Image of another curve under an affine frame; `reversed` flips the
    /// parameter to keep the orientation positive when `det < 0`.
    Mapped { base: Box<ClosedConvexCurve>, frame: AffineFrame, reversed: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedConvexCurve {
    kind: CurveKind,
    resolution: usize,
}

impl ClosedConvexCurve {
    pub fn ellipse(a: f64, b: f64, center: PlaneVector, rotation: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() || !center.is_finite() || !rotation.is_finite() {
            return Err(Error::InvalidCurve(format!("ellipse needs finite positive semi-axes, got a={a}, b={b}")));
        }
        Ok(Self { kind: CurveKind::Ellipse { a, b, center, rotation }, resolution: DEFAULT_RESOLUTION })
    }

    pub fn circle(radius: f64) -> Result<Self> {
        Self::ellipse(radius, radius, PlaneVector::ZERO, 0.0)
    }

    pub fn fourier_radial(r0: f64, cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        if cos.iter().chain(&sin).chain(std::iter::once(&r0)).any(|v| !v.is_finite()) {
            return Err(Error::InvalidCurve("non-finite Fourier coefficient".into()));
        }
        let modes = cos.len().max(sin.len());
        let resolution = DEFAULT_RESOLUTION.max(8 * modes);
        let curve = Self { kind: CurveKind::FourierRadial { r0, cos, sin }, resolution };
        curve.validate()?;
        Ok(curve)
    }

    /// Interpolates uniformly spaced samples; clockwise input is reversed.
    pub fn sampled(points: &[PlaneVector]) -> Result<Self> {
        if points.len() < 8 {
            return Err(Error::InvalidCurve(format!("need at least 8 samples, got {}", points.len())));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidCurve("non-finite sample".into()));
        }
        let mut trig = TrigCurve::interpolate(points);
        if trig.signed_area() < 0.0 {
            let mut rev: Vec<PlaneVector> = points.to_vec();
            rev[1..].reverse();
            trig = TrigCurve::interpolate(&rev);
        }
        let curve = Self { resolution: points.len(), kind: CurveKind::SampledPeriodic(trig) };
        curve.validate()?;
        Ok(curve)
    }

    /// Samples `f` at `n` uniform parameters and interpolates.
    pub fn sample_fn(n: usize, f: impl Fn(f64) -> PlaneVector) -> Result<Self> {
        let pts: Vec<PlaneVector> = (0..n).map(|j| f(TAU * j as f64 / n as f64)).collect();
        Self::sampled(&pts)
    }

    pub fn kind(&self) -> &CurveKind {
        &self.kind
    }

    pub fn period(&self) -> f64 {
        TAU
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn is_sampled(&self) -> bool {
        match &self.kind {
            CurveKind::SampledPeriodic(_) => true,
            CurveKind::Mapped { base, .. } => base.is_sampled(),
            _ => false,
        }
    }

    /// Checks regularity and convexity at `4N` uniform parameters. Isolated
    /// flat points (`det(γ′, γ″) = 0` up to rounding) are accepted.
    pub fn validate(&self) -> Result<()> {
        let n = 4 * self.resolution;
        let samples: Vec<(f64, Derivatives)> = (0..n)
            .map(|j| {
                let s = TAU * j as f64 / n as f64;
                (s, self.derivatives(s, 2))
            })
            .collect();
        let scale = samples.iter().fold(0.0f64, |m, (_, d)| m.max(d[1].norm()));
        for (s, d) in samples {
            let speed = d[1].norm();
            if !(speed > 1e-12 * scale) {
                return Err(Error::SingularParametrization { s });
            }
            let det = d[1].det(d[2]);
            if !(det >= -FLAT_TOLERANCE * speed * speed) {
                return Err(Error::DegenerateCurve { s, det });
            }
        }
        Ok(())
    }

    /// True when `det(γ′, γ″)` stays clear of zero at the validation grid.
    pub fn is_strongly_convex(&self) -> bool {
        let n = 4 * self.resolution;
        (0..n).all(|j| {
            let d = self.derivatives(TAU * j as f64 / n as f64, 2);
            d[1].det(d[2]) > FLAT_TOLERANCE * d[1].norm_squared()
        })
    }

    /// Derivatives `γ, γ′, …, γ^{(max_order)}` at `s`; entries past
    /// `max_order` are zero.
    pub fn derivatives(&self, s: f64, max_order: usize) -> Derivatives {
        let mut out = [PlaneVector::ZERO; MAX_ORDER + 1];
        match &self.kind {
            CurveKind::Ellipse { a, b, center, rotation } => {
                let (rs, rc) = rotation.sin_cos();
                for (k, o) in out.iter_mut().enumerate().take(max_order + 1) {
                    let phase = s + k as f64 * FRAC_PI_2;
                    let (x, y) = (a * phase.cos(), b * phase.sin());
                    *o = PlaneVector::new(rc * x - rs * y, rs * x + rc * y);
                }
                out[0] += *center;
            }
            CurveKind::FourierRadial { r0, cos, sin } => {
                let r = radial_derivatives(*r0, cos, sin, s, max_order);
                for (n, o) in out.iter_mut().enumerate().take(max_order + 1) {
                    let mut acc = PlaneVector::ZERO;
                    let mut binom = 1.0;
                    for j in 0..=n {
                        if j > 0 {
                            binom = binom * (n - j + 1) as f64 / j as f64;
                        }
                        acc += PlaneVector::from_angle(s + (n - j) as f64 * FRAC_PI_2) * (binom * r[j]);
                    }
                    *o = acc;
                }
            }
            CurveKind::SampledPeriodic(trig) => {
                out = trig.derivatives(s, max_order);
            }
            CurveKind::Mapped { base, frame, reversed } => {
                let inner = base.derivatives(if *reversed { -s } else { s }, max_order);
                for k in 0..=max_order {
                    let sign = if *reversed && k % 2 == 1 { -1.0 } else { 1.0 };
                    out[k] = frame.apply_linear(inner[k]) * sign;
                }
                out[0] += frame.translation;
            }
        }
        out
    }

    /// The `order`-th derivative of the parametrization at `s`.
    pub fn evaluate(&self, s: f64, order: usize) -> Result<PlaneVector> {
        if order > 3 {
            return Err(Error::UnsupportedOrder(order));
        }
        if !s.is_finite() {
            return Err(Error::domain(format!("parameter must be finite, got {s}")));
        }
        Ok(self.derivatives(s, order)[order])
    }

    #[inline]
    pub fn point(&self, s: f64) -> PlaneVector {
        self.derivatives(s, 0)[0]
    }

    /// Jet of `γ` at `s` up to `order` (≤ 4).
    pub fn jet(&self, s: f64, order: usize) -> JetVec {
        JetVec::from_derivatives(&self.derivatives(s, order)[..=order])
    }

    pub fn euclidean_curvature(&self, s: f64) -> Result<f64> {
        let d = self.derivatives(s, 2);
        let speed = d[1].norm();
        if speed == 0.0 {
            return Err(Error::SingularParametrization { s });
        }
        Ok(d[1].det(d[2]) / speed.powi(3))
    }

    /// Enclosed area `½∮det(γ, γ′)`.
    pub fn area(&self) -> Result<f64> {
        let q = Quadrature { initial_panels: 8, ..Default::default() };
        q.integrate_scalar(
            |u| {
                let d = self.derivatives(u, 1);
                0.5 * d[0].det(d[1])
            },
            0.0,
            TAU,
        )
    }

    /// `∫_{s0}^{s1} det(γ′, γ″)^{1/3} du`.
    pub fn affine_arclength(&self, s0: f64, s1: f64) -> Result<f64> {
        if !(s0.is_finite() && s1.is_finite()) || s1 < s0 || s1 - s0 > TAU * (1.0 + 1e-12) {
            return Err(Error::domain(format!("need s0 ≤ s1 ≤ s0 + period, got [{s0}, {s1}]")));
        }
        let mut bad: Option<(f64, f64)> = None;
        let v = Quadrature::default().integrate_scalar(
            |u| {
                let d = self.derivatives(u, 2);
                let phi = d[1].det(d[2]);
                if phi < -FLAT_TOLERANCE * d[1].norm_squared() && bad.is_none() {
                    bad = Some((u, phi));
                }
                phi.max(0.0).cbrt()
            },
            s0,
            s1,
        )?;
        match bad {
            Some((s, det)) => Err(Error::DegenerateCurve { s, det }),
            None => Ok(v),
        }
    }

    fn nondegenerate(&self, s: f64) -> Result<Derivatives> {
        let d = self.derivatives(s, 4);
        let det = d[1].det(d[2]);
        if !(det > 0.0) {
            return Err(Error::DegenerateCurve { s, det });
        }
        Ok(d)
    }

    /// Equi-affine curvature `det(x″, x‴)` with primes in affine arc length.
    pub fn affine_curvature(&self, s: f64) -> Result<f64> {
        let d = self.nondegenerate(s)?;
        let g = JetVec::from_derivatives(&d);
        let g1 = g.derivative();
        let g2 = g1.derivative();
        let g1 = g1.truncate(2);
        let phi = g1.det(&g2);
        let dphi = phi.derivative();
        let phi1 = phi.truncate(1);
        // x″ = γ″φ^{-2/3} − ⅓γ′φ^{-5/3}φ′, order 1 in s
        let x2 = g2
            .truncate(1)
            .scale(&phi1.powf(-2.0 / 3.0))
            .sub(&g1.truncate(1).scale(&(phi1.powf(-5.0 / 3.0) * dphi * (1.0 / 3.0))));
        let x3 = x2.derivative().scale_f(phi.value().powf(-1.0 / 3.0));
        Ok(x2.value().det(x3.value()))
    }

    /// Affine normal `d²γ/dσ²`.
    pub fn affine_normal(&self, s: f64) -> Result<PlaneVector> {
        let d = self.nondegenerate(s)?;
        Ok(affine_normal_from_derivatives(d[1], d[2], d[3]))
    }

    /// Image of the curve under `frame`. Orientation-reversing frames also
    /// reverse the parameter so the result stays positively oriented.
    pub fn apply_affine(&self, frame: &AffineFrame) -> Result<Self> {
        if frame.determinant == 0.0 || !frame.determinant.is_finite() {
            return Err(Error::SingularFrame(frame.determinant));
        }
        Ok(Self {
            kind: CurveKind::Mapped { base: Box::new(self.clone()), frame: *frame, reversed: frame.determinant < 0.0 },
            resolution: self.resolution,
        })
    }

    /// Uniform samples `γ(2πj/n)`.
    pub fn sample_points(&self, n: usize) -> Vec<PlaneVector> {
        (0..n).map(|j| self.point(TAU * j as f64 / n as f64)).collect()
    }

    /// Largest distance between two of `n` uniform samples.
    pub fn diameter(&self) -> f64 {
        diameter(&self.sample_points(256))
    }
}

/// Largest pairwise distance in a point set.
pub fn diameter(points: &[PlaneVector]) -> f64 {
    let mut d = 0.0f64;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            d = d.max(p.distance(*q));
        }
    }
    d
}

fn radial_derivatives(r0: f64, cos: &[f64], sin: &[f64], s: f64, max_order: usize) -> [f64; MAX_ORDER + 1] {
    let mut r = [0.0; MAX_ORDER + 1];
    r[0] = r0;
    let modes = cos.len().max(sin.len());
    for i in 0..modes {
        let k = (i + 1) as f64;
        let a = cos.get(i).copied().unwrap_or(0.0);
        let b = sin.get(i).copied().unwrap_or(0.0);
        let mut km = 1.0;
        for (j, rj) in r.iter_mut().enumerate().take(max_order + 1) {
            let phase = k * s + j as f64 * FRAC_PI_2;
            *rj += km * (a * phase.cos() + b * phase.sin());
            km *= k;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn unit_circle() -> ClosedConvexCurve {
        ClosedConvexCurve::circle(1.0).unwrap()
    }

    fn ellipse21() -> ClosedConvexCurve {
        ClosedConvexCurve::ellipse(2.0, 1.0, PlaneVector::ZERO, 0.0).unwrap()
    }

    fn near(a: PlaneVector, b: PlaneVector, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn evaluate_examples() {
        let c = unit_circle();
        assert!(near(c.evaluate(0.0, 0).unwrap(), PlaneVector::new(1.0, 0.0), 1e-15));
        assert!(near(c.evaluate(0.0, 2).unwrap(), PlaneVector::new(-1.0, 0.0), 1e-15));
        let e = ellipse21();
        assert!(near(e.evaluate(PI / 2.0, 1).unwrap(), PlaneVector::new(-2.0, 0.0), 1e-15));
        assert_eq!(c.evaluate(0.0, 4), Err(Error::UnsupportedOrder(4)));
        assert!(matches!(c.evaluate(f64::NAN, 0), Err(Error::Domain(_))));
    }

    #[test]
    fn curvature_examples() {
        assert!((unit_circle().euclidean_curvature(1.234).unwrap() - 1.0).abs() < 1e-14);
        assert!((ClosedConvexCurve::circle(3.0).unwrap().euclidean_curvature(0.2).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        assert!((ellipse21().euclidean_curvature(0.0).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn fourier_derivatives_match_finite_differences() {
        let c = ClosedConvexCurve::fourier_radial(1.0, vec![0.0, 0.0, 0.05], vec![0.0, 0.02]).unwrap();
        let s = 0.71;
        let h = 1e-3;
        for k in 0..4 {
            let fd = (c.derivatives(s + h, 4)[k] - c.derivatives(s - h, 4)[k]) / (2.0 * h);
            assert!(near(fd, c.derivatives(s, 4)[k + 1], 1e-4), "order {k}");
        }
    }

    #[test]
    fn area_examples() {
        assert!((unit_circle().area().unwrap() - PI).abs() < 1e-13);
        assert!((ellipse21().area().unwrap() - 2.0 * PI).abs() < 1e-13);
        let f = ClosedConvexCurve::fourier_radial(1.0, vec![0.0, 0.0, 0.1], vec![]).unwrap();
        // dense Riemann sum of ½r² (periodic, so the midpoint rule is spectrally accurate)
        let n = 100_000;
        let oracle: f64 = (0..n)
            .map(|j| {
                let s = TAU * (j as f64 + 0.5) / n as f64;
                let r = 1.0 + 0.1 * (3.0 * s).cos();
                0.5 * r * r
            })
            .sum::<f64>()
            * TAU
            / n as f64;
        assert!((f.area().unwrap() - oracle).abs() < 1e-10);
    }

    #[test]
    fn affine_arclength_examples() {
        assert!((unit_circle().affine_arclength(0.0, TAU).unwrap() - TAU).abs() < 1e-12);
        assert!((ellipse21().affine_arclength(0.0, TAU).unwrap() - TAU * 2f64.cbrt()).abs() < 1e-12);
        assert_eq!(ellipse21().affine_arclength(0.4, 0.4).unwrap(), 0.0);
        assert!(ellipse21().affine_arclength(1.0, 0.5).is_err());
    }

    #[test]
    fn affine_curvature_of_conics() {
        assert!((unit_circle().affine_curvature(0.3).unwrap() - 1.0).abs() < 1e-12);
        let e = ellipse21();
        for s in [0.0, 0.4, 2.0, 5.0] {
            assert!((e.affine_curvature(s).unwrap() - 2f64.powf(-2.0 / 3.0)).abs() < 1e-12);
        }
        assert!((2f64.powf(-2.0 / 3.0) - 0.629961).abs() < 1e-6);
    }

    #[test]
    fn affine_normal_of_ellipse_hits_center() {
        let e = ClosedConvexCurve::ellipse(2.0, 1.0, PlaneVector::new(0.5, -0.3), 0.6).unwrap();
        let center = PlaneVector::new(0.5, -0.3);
        assert!(near(unit_circle().affine_normal(0.0).unwrap(), PlaneVector::new(-1.0, 0.0), 1e-14));
        for j in 0..64 {
            let s = TAU * j as f64 / 64.0;
            let n = e.affine_normal(s).unwrap();
            let p = e.point(s);
            let dist = n.normalized().det(center - p).abs();
            assert!(dist < 1e-8 * 2.0, "s={s} dist={dist}");
        }
    }

    #[test]
    fn affine_images() {
        let c = unit_circle();
        let id = c.apply_affine(&AffineFrame::identity()).unwrap();
        let e = c.apply_affine(&AffineFrame::new([[2.0, 0.0], [0.0, 1.0]], PlaneVector::ZERO).unwrap()).unwrap();
        let e0 = ellipse21();
        for j in 0..16 {
            let s = j as f64 * 0.4;
            assert!(near(id.point(s), c.point(s), 1e-15));
            for k in 0..4 {
                assert!(near(e.derivatives(s, 3)[k], e0.derivatives(s, 3)[k], 1e-14));
            }
        }
        let f = AffineFrame::new([[1.0, 2.0], [0.5, -1.5]], PlaneVector::new(1.0, 1.0)).unwrap();
        let img = e0.apply_affine(&f).unwrap();
        assert!((img.area().unwrap() - f.determinant.abs() * 2.0 * PI).abs() < 1e-12);
        img.validate().unwrap();
        assert!(c.apply_affine(&AffineFrame { determinant: 0.0, ..AffineFrame::identity() }).is_err());
    }

    #[test]
    fn sampled_curve_matches_analytic_source() {
        let f = ClosedConvexCurve::fourier_radial(1.0, vec![0.0, 0.0, 0.1], vec![]).unwrap();
        let s = ClosedConvexCurve::sample_fn(128, |u| f.point(u)).unwrap();
        for u in [0.1, 1.7, 4.4] {
            for k in 0..4 {
                assert!(near(s.derivatives(u, 3)[k], f.derivatives(u, 3)[k], 1e-10));
            }
            assert!((s.affine_curvature(u).unwrap() - f.affine_curvature(u).unwrap()).abs() < 1e-8);
        }
        assert!((s.area().unwrap() - f.area().unwrap()).abs() < 1e-12);
    }

    #[test]
    fn clockwise_samples_are_reoriented() {
        let pts: Vec<PlaneVector> = (0..64).map(|j| PlaneVector::from_angle(-TAU * j as f64 / 64.0)).collect();
        let c = ClosedConvexCurve::sampled(&pts).unwrap();
        assert!((c.area().unwrap() - PI).abs() < 1e-12);
    }

    #[test]
    fn flat_points_are_convex_but_not_strongly_convex() {
        // r = 1 + 0.1 cos 3s has zero curvature where cos 3s = −1
        let c = ClosedConvexCurve::fourier_radial(1.0, vec![0.0, 0.0, 0.1], vec![]).unwrap();
        assert!(!c.is_strongly_convex());
        assert!(c.euclidean_curvature(PI).unwrap().abs() < 1e-12);
        assert!(matches!(c.affine_curvature(PI), Err(Error::DegenerateCurve { .. })));
        assert!(ClosedConvexCurve::fourier_radial(1.0, vec![0.0, 0.0, 0.05], vec![]).unwrap().is_strongly_convex());
    }

    #[test]
    fn nonconvex_input_rejected() {
        // r = 1 + 0.1 cos 4s has inflections
        assert!(matches!(
            ClosedConvexCurve::fourier_radial(1.0, vec![0.0, 0.0, 0.0, 0.1], vec![]),
            Err(Error::DegenerateCurve { .. })
        ));
        assert!(ClosedConvexCurve::ellipse(0.0, 1.0, PlaneVector::ZERO, 0.0).is_err());
    }
}
