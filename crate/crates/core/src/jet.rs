//! Truncated Taylor arithmetic in one variable.
//!
//! A [`Jet`] holds the Taylor coefficients `f(s₀), f′(s₀), f″(s₀)/2!, …` of a
//! scalar function up to a runtime order (at most [`MAX_ORDER`]). Binary
//! operations truncate to the smaller order of their operands. This is what
//! lets the derived curves be differentiated exactly through the implicit
//! chord map `t(s)` without finite differences.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::vector::PlaneVector;

pub const MAX_ORDER: usize = 4;
const LEN: usize = MAX_ORDER + 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    coeffs: [f64; LEN],
    order: usize,
}

impl Jet {
    pub fn constant(value: f64, order: usize) -> Self {
        let mut coeffs = [0.0; LEN];
        coeffs[0] = value;
        Self { coeffs, order: order.min(MAX_ORDER) }
    }

    /// The identity function `s ↦ s` expanded at `s₀`.
    pub fn variable(s0: f64, order: usize) -> Self {
        let mut j = Self::constant(s0, order);
        if j.order >= 1 {
            j.coeffs[1] = 1.0;
        }
        j
    }

    /// Builds a jet from derivative values `f(s₀), f′(s₀), f″(s₀), …`.
    pub fn from_derivatives(derivs: &[f64]) -> Self {
        assert!(!derivs.is_empty() && derivs.len() <= LEN);
        let mut coeffs = [0.0; LEN];
        let mut fact = 1.0;
        for (k, d) in derivs.iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            coeffs[k] = d / fact;
        }
        Self { coeffs, order: derivs.len() - 1 }
    }

    pub fn from_coeffs(c: &[f64]) -> Self {
        assert!(!c.is_empty() && c.len() <= LEN);
        let mut coeffs = [0.0; LEN];
        coeffs[..c.len()].copy_from_slice(c);
        Self { coeffs, order: c.len() - 1 }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    #[inline]
    pub fn coeff(&self, k: usize) -> f64 {
        if k <= self.order {
            self.coeffs[k]
        } else {
            f64::NAN
        }
    }

    /// `k`-th derivative at the expansion point.
    pub fn derivative_at(&self, k: usize) -> f64 {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        self.coeff(k) * fact
    }

    /// Derivative as a jet of one lower order.
    pub fn derivative(&self) -> Self {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let mut coeffs = [0.0; LEN];
        for k in 0..self.order {
            coeffs[k] = (k + 1) as f64 * self.coeffs[k + 1];
        }
        Self { coeffs, order: self.order - 1 }
    }

    /// Antiderivative with the given constant term, one order higher.
    pub fn integral(&self, constant: f64) -> Self {
        let order = (self.order + 1).min(MAX_ORDER);
        let mut coeffs = [0.0; LEN];
        coeffs[0] = constant;
        for k in 1..=order {
            coeffs[k] = self.coeffs[k - 1] / k as f64;
        }
        Self { coeffs, order }
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        let mut coeffs = [0.0; LEN];
        coeffs[..=order].copy_from_slice(&self.coeffs[..=order]);
        Self { coeffs, order }
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut out = *self;
        for c in out.coeffs[..=self.order].iter_mut() {
            *c *= k;
        }
        out
    }

    pub fn recip(&self) -> Self {
        Jet::constant(1.0, self.order) / *self
    }

    /// Real power `g^a`; the constant term uses the signed cube root when
    /// `a = 1/3` style exponents meet negative values.
    pub fn powf(&self, a: f64) -> Self {
        let g = &self.coeffs;
        let g0 = g[0];
        let h0 = signed_pow(g0, a);
        let mut h = [0.0; LEN];
        h[0] = h0;
        for n in 1..=self.order {
            let mut acc = 0.0;
            for k in 1..=n {
                acc += (a * k as f64 - (n - k) as f64) * g[k] * h[n - k];
            }
            h[n] = acc / (n as f64 * g0);
        }
        Self { coeffs: h, order: self.order }
    }

    pub fn cbrt(&self) -> Self {
        self.powf(1.0 / 3.0)
    }

    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    /// Shift by the constant term: `self − self(s₀)`.
    fn increment(&self) -> Self {
        let mut out = *self;
        out.coeffs[0] = 0.0;
        out
    }
}

fn signed_pow(x: f64, a: f64) -> f64 {
    if x >= 0.0 {
        x.powf(a)
    } else if (a * 3.0).fract() == 0.0 && (a * 3.0) as i64 % 2 != 0 {
        // odd multiples of 1/3 have real odd roots
        -(-x).powf(a)
    } else {
        x.powf(a)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let order = self.order.min(o.order);
        let mut coeffs = [0.0; LEN];
        for k in 0..=order {
            coeffs[k] = self.coeffs[k] + o.coeffs[k];
        }
        Jet { coeffs, order }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let order = self.order.min(o.order);
        let mut coeffs = [0.0; LEN];
        for n in 0..=order {
            coeffs[n] = (0..=n).map(|k| self.coeffs[k] * o.coeffs[n - k]).sum();
        }
        Jet { coeffs, order }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        let order = self.order.min(o.order);
        let mut q = [0.0; LEN];
        for n in 0..=order {
            let acc: f64 = (1..=n).map(|k| o.coeffs[k] * q[n - k]).sum();
            q[n] = (self.coeffs[n] - acc) / o.coeffs[0];
        }
        Jet { coeffs: q, order }
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, k: f64) -> Jet {
        self.coeffs[0] += k;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, k: f64) -> Jet {
        self.scale(k)
    }
}

/// A plane curve expanded as a pair of jets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JetVec {
    pub x: Jet,
    pub y: Jet,
}

impl JetVec {
    pub fn new(x: Jet, y: Jet) -> Self {
        Self { x, y }
    }

    pub fn constant(v: PlaneVector, order: usize) -> Self {
        Self::new(Jet::constant(v.x, order), Jet::constant(v.y, order))
    }

    /// From derivative vectors `γ(s₀), γ′(s₀), …`.
    pub fn from_derivatives(derivs: &[PlaneVector]) -> Self {
        let xs: Vec<f64> = derivs.iter().map(|v| v.x).collect();
        let ys: Vec<f64> = derivs.iter().map(|v| v.y).collect();
        Self::new(Jet::from_derivatives(&xs), Jet::from_derivatives(&ys))
    }

    pub fn order(&self) -> usize {
        self.x.order().min(self.y.order())
    }

    pub fn value(&self) -> PlaneVector {
        PlaneVector::new(self.x.value(), self.y.value())
    }

    pub fn derivative_at(&self, k: usize) -> PlaneVector {
        PlaneVector::new(self.x.derivative_at(k), self.y.derivative_at(k))
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.x.derivative(), self.y.derivative())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.x.truncate(order), self.y.truncate(order))
    }

    pub fn det(&self, o: &JetVec) -> Jet {
        self.x * o.y - self.y * o.x
    }

    pub fn dot(&self, o: &JetVec) -> Jet {
        self.x * o.x + self.y * o.y
    }

    pub fn scale(&self, k: &Jet) -> Self {
        Self::new(self.x * *k, self.y * *k)
    }

    pub fn scale_f(&self, k: f64) -> Self {
        Self::new(self.x * k, self.y * k)
    }

    pub fn add(&self, o: &JetVec) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }

    pub fn sub(&self, o: &JetVec) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }

    pub fn norm(&self) -> Jet {
        self.dot(self).sqrt()
    }

    /// Composes a curve with a jet: given derivatives `γ^{(j)}(t₀)` for
    /// `j = 0..=m` and a jet `t(s)` with `t(s₀) = t₀`, returns `γ(t(s))`.
    pub fn compose(derivs_at_t0: &[PlaneVector], t: &Jet) -> Self {
        let order = t.order().min(derivs_at_t0.len() - 1);
        let dt = t.increment().truncate(order);
        let mut x = Jet::constant(derivs_at_t0[0].x, order);
        let mut y = Jet::constant(derivs_at_t0[0].y, order);
        let mut power = Jet::constant(1.0, order);
        let mut fact = 1.0;
        for (j, d) in derivs_at_t0.iter().enumerate().skip(1).take(order) {
            power = power * dt;
            fact *= j as f64;
            x = x + power * (d.x / fact);
            y = y + power * (d.y / fact);
        }
        Self::new(x, y)
    }
}

/// Oriented curvature `det(ṙ, r̈)/|ṙ|³` as a jet; needs `r` of order ≥ 2 and
/// returns order `r.order() − 2`.
pub fn curvature_jet(r: &JetVec) -> Jet {
    let d1 = r.derivative();
    let d2 = d1.derivative();
    let d1 = d1.truncate(d2.order());
    d1.det(&d2) / d1.dot(&d1).powf(1.5)
}

/// Curvature and its derivative w.r.t. the curve's own Euclidean arc length,
/// from a jet of order ≥ 3.
pub fn curvature_and_arc_derivative(r: &JetVec) -> (f64, f64) {
    let k = curvature_jet(r);
    let speed = r.derivative().norm().value();
    (k.value(), k.derivative_at(1) / speed)
}

/// Affine normal `d²r/dσ²` (σ the affine arc length) from a jet of order ≥ 3.
pub fn affine_normal_jet(r: &JetVec) -> PlaneVector {
    let d1 = r.derivative();
    let d2 = d1.derivative();
    let d3 = d2.derivative();
    let (r1, r2, r3) = (d1.value(), d2.value(), d3.value());
    affine_normal_from_derivatives(r1, r2, r3)
}

/// `r̈·det(ṙ,r̈)^{-2/3} − ⅓·ṙ·det(ṙ,r̈)^{-5/3}·det(ṙ,r⃛)`.
pub fn affine_normal_from_derivatives(r1: PlaneVector, r2: PlaneVector, r3: PlaneVector) -> PlaneVector {
    let phi = r1.det(r2);
    r2 * signed_pow(phi, -2.0 / 3.0) - r1 * (signed_pow(phi, -5.0 / 3.0) * r1.det(r3) / 3.0)
}
