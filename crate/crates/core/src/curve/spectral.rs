//! Trigonometric interpolation of uniformly sampled periodic plane curves.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::jet::MAX_ORDER;
use crate::vector::PlaneVector;

/// Real trigonometric series `a₀ + Σ_{k≥1} (a_k cos ks + b_k sin ks)` on
/// the period `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigSeries {
    a0: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl TrigSeries {
    /// Interpolant through `values[j]` at `s_j = 2πj/N`. For even `N` the
    /// Nyquist mode is taken as a pure cosine.
    pub fn interpolate(values: &[f64]) -> Self {
        let n = values.len();
        let mut buf: Vec<Complex<f64>> = values.iter().map(|&v| Complex::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let nf = n as f64;
        let half = n / 2;
        let mut a = Vec::with_capacity(half);
        let mut b = Vec::with_capacity(half);
        for k in 1..=half {
            if 2 * k == n {
                a.push(buf[k].re / nf);
                b.push(0.0);
            } else {
                a.push(2.0 * buf[k].re / nf);
                b.push(-2.0 * buf[k].im / nf);
            }
        }
        Self { a0: buf[0].re / nf, a, b }
    }

    pub fn from_coefficients(a0: f64, a: Vec<f64>, b: Vec<f64>) -> Self {
        assert_eq!(a.len(), b.len());
        Self { a0, a, b }
    }

    pub fn modes(&self) -> usize {
        self.a.len()
    }

    /// Value and derivatives `0..=max_order` at `s`.
    pub fn eval_derivatives(&self, s: f64, max_order: usize, out: &mut [f64; MAX_ORDER + 1]) {
        *out = [0.0; MAX_ORDER + 1];
        out[0] = self.a0;
        let step = Complex::from_polar(1.0, s);
        let mut rot = Complex::new(1.0, 0.0);
        for (i, (&ak, &bk)) in self.a.iter().zip(&self.b).enumerate() {
            let k = (i + 1) as f64;
            // exact evaluation every 16 modes keeps the recurrence from drifting
            rot = if i % 16 == 15 { Complex::from_polar(1.0, k * s) } else { rot * step };
            let (c, sn) = (rot.re, rot.im);
            // d^m/ds^m of a cos ks + b sin ks cycles through (c, −s, −c, s)
            let f0 = ak * c + bk * sn;
            let f1 = k * (-ak * sn + bk * c);
            out[0] += f0;
            if max_order >= 1 {
                out[1] += f1;
            }
            let mut km = k * k;
            for m in 2..=max_order {
                let base = if m % 2 == 0 { f0 } else { f1 / k };
                let sign = if (m / 2) % 2 == 0 { 1.0 } else { -1.0 };
                out[m] += sign * km * base;
                km *= k;
            }
        }
    }
}

/// A closed plane curve given by trigonometric interpolation of its samples.
/// No convexity requirement.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigCurve {
    x: TrigSeries,
    y: TrigSeries,
    samples: Vec<PlaneVector>,
}

impl TrigCurve {
    pub fn interpolate(points: &[PlaneVector]) -> Self {
        let xs: Vec<f64> = points.iter().map(|p| p.x).collect();
        let ys: Vec<f64> = points.iter().map(|p| p.y).collect();
        Self { x: TrigSeries::interpolate(&xs), y: TrigSeries::interpolate(&ys), samples: points.to_vec() }
    }

    pub fn samples(&self) -> &[PlaneVector] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn derivatives(&self, s: f64, max_order: usize) -> [PlaneVector; MAX_ORDER + 1] {
        let mut xs = [0.0; MAX_ORDER + 1];
        let mut ys = [0.0; MAX_ORDER + 1];
        self.x.eval_derivatives(s, max_order, &mut xs);
        self.y.eval_derivatives(s, max_order, &mut ys);
        let mut out = [PlaneVector::ZERO; MAX_ORDER + 1];
        for k in 0..=max_order {
            out[k] = PlaneVector::new(xs[k], ys[k]);
        }
        out
    }

    fn node_derivatives(&self) -> Vec<[PlaneVector; MAX_ORDER + 1]> {
        let n = self.len();
        (0..n).map(|j| self.derivatives(std::f64::consts::TAU * j as f64 / n as f64, 2)).collect()
    }

    /// Signed enclosed area `½∮det(γ, γ′)`, exact for the interpolant.
    pub fn signed_area(&self) -> f64 {
        let n = self.len() as f64;
        let sum: f64 = self.node_derivatives().iter().map(|d| d[0].det(d[1])).sum();
        0.5 * sum * std::f64::consts::TAU / n
    }

    /// Total affine arc length `∮ det(γ′,γ″)^{1/3}` by the periodic
    /// trapezoid rule on the sample nodes.
    pub fn affine_length(&self) -> f64 {
        let n = self.len() as f64;
        let sum: f64 = self.node_derivatives().iter().map(|d| d[1].det(d[2]).cbrt()).sum();
        sum * std::f64::consts::TAU / n
    }
}
