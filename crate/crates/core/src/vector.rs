//! Plane vectors, linear elements and affine frames.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlaneVector {
    pub x: f64,
    pub y: f64,
}

impl PlaneVector {
    pub const ZERO: PlaneVector = PlaneVector { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, s)
    }

    #[inline]
    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// `det(self, other) = self.x·other.y − self.y·other.x`.
    #[inline]
    pub fn det(self, other: Self) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    /// Counter-clockwise quarter turn.
    #[inline]
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Self {
        self / self.norm()
    }

    pub fn distance(self, other: Self) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for PlaneVector {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for PlaneVector {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for PlaneVector {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl SubAssign for PlaneVector {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        self.x -= o.x;
        self.y -= o.y;
    }
}

impl Neg for PlaneVector {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl Mul<f64> for PlaneVector {
    type Output = Self;
    #[inline]
    fn mul(self, k: f64) -> Self {
        Self::new(self.x * k, self.y * k)
    }
}

impl Mul<PlaneVector> for f64 {
    type Output = PlaneVector;
    #[inline]
    fn mul(self, v: PlaneVector) -> PlaneVector {
        v * self
    }
}

impl Div<f64> for PlaneVector {
    type Output = Self;
    #[inline]
    fn div(self, k: f64) -> Self {
        Self::new(self.x / k, self.y / k)
    }
}

impl From<[f64; 2]> for PlaneVector {
    fn from([x, y]: [f64; 2]) -> Self {
        Self::new(x, y)
    }
}

impl From<PlaneVector> for [f64; 2] {
    fn from(v: PlaneVector) -> Self {
        [v.x, v.y]
    }
}

/// Sign-preserving cube root.
#[inline]
pub fn signed_cbrt(x: f64) -> f64 {
    x.cbrt()
}

/// A point together with a direction through it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearElement {
    pub point: PlaneVector,
    pub direction: PlaneVector,
}

impl LinearElement {
    pub fn new(point: PlaneVector, direction: PlaneVector) -> Result<Self> {
        if !(direction.norm() > 0.0) || !point.is_finite() {
            return Err(Error::domain("linear element needs a finite point and nonzero direction"));
        }
        Ok(Self { point, direction })
    }
}

/// Signed area of the triangle cut out by two linear elements: the two
/// points plus the intersection of their lines.
pub fn tangent_triangle_area(e1: &LinearElement, e2: &LinearElement) -> Result<f64> {
    let d = e1.direction.det(e2.direction);
    if d == 0.0 {
        return Err(Error::ParallelElements);
    }
    let c = e2.point - e1.point;
    Ok(0.5 * e1.direction.det(c) * c.det(e2.direction) / d)
}

/// Signed affine distance `2·T^{1/3}` of two linear elements.
pub fn affine_distance(e1: &LinearElement, e2: &LinearElement) -> Result<f64> {
    let scale = e1.direction.norm() * e2.direction.norm();
    if e1.direction.det(e2.direction).abs() <= 1e-15 * scale {
        return Err(Error::ParallelElements);
    }
    Ok(2.0 * signed_cbrt(tangent_triangle_area(e1, e2)?))
}

/// `p ↦ M·p + translation`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineFrame {
    pub matrix: [[f64; 2]; 2],
    pub translation: PlaneVector,
    pub determinant: f64,
}

impl AffineFrame {
    pub fn new(matrix: [[f64; 2]; 2], translation: PlaneVector) -> Result<Self> {
        let determinant = matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0];
        if determinant == 0.0 || !determinant.is_finite() {
            return Err(Error::SingularFrame(determinant));
        }
        Ok(Self { matrix, translation, determinant })
    }

    pub fn identity() -> Self {
        Self { matrix: [[1.0, 0.0], [0.0, 1.0]], translation: PlaneVector::ZERO, determinant: 1.0 }
    }

    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { matrix: [[c, -s], [s, c]], translation: PlaneVector::ZERO, determinant: 1.0 }
    }

    pub fn is_unimodular(&self) -> bool {
        (self.determinant - 1.0).abs() <= 1e-12
    }

    /// Applies the linear part only (for tangent vectors).
    #[inline]
    pub fn apply_linear(&self, v: PlaneVector) -> PlaneVector {
        let m = &self.matrix;
        PlaneVector::new(m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y)
    }

    #[inline]
    pub fn apply(&self, p: PlaneVector) -> PlaneVector {
        self.apply_linear(p) + self.translation
    }

    pub fn apply_element(&self, e: &LinearElement) -> LinearElement {
        LinearElement { point: self.apply(e.point), direction: self.apply_linear(e.direction) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn circle_chord(theta: f64) -> (LinearElement, LinearElement) {
        let x = PlaneVector::new(theta.cos(), -theta.sin());
        let y = PlaneVector::new(theta.cos(), theta.sin());
        let dx = PlaneVector::new(theta.sin(), theta.cos());
        let dy = PlaneVector::new(-theta.sin(), theta.cos());
        (LinearElement::new(x, dx).unwrap(), LinearElement::new(y, dy).unwrap())
    }

    #[test]
    fn circle_chord_affine_distance() {
        let theta = PI / 3.0;
        let (e1, e2) = circle_chord(theta);
        let t = tangent_triangle_area(&e1, &e2).unwrap();
        assert!((t - theta.sin().powi(3) / theta.cos()).abs() < 1e-14);
        assert!((t - 1.299038105676658).abs() < 1e-12);
        let d = affine_distance(&e1, &e2).unwrap();
        assert!((d - 2.0 * (theta.sin().powi(3) / theta.cos()).cbrt()).abs() < 1e-14);
        assert!((d - 2.182247).abs() < 1e-6);
    }

    #[test]
    fn cube_of_affine_distance_is_eight_triangle_areas() {
        let theta = 0.7;
        let (e1, e2) = circle_chord(theta);
        let d = affine_distance(&e1, &e2).unwrap();
        // apex of the tangent lines at (1/cosθ, 0), shoelace area
        let z = PlaneVector::new(1.0 / theta.cos(), 0.0);
        let (x, y) = (e1.point, e2.point);
        let shoelace = 0.5 * ((y - x).det(z - x)).abs();
        assert!((d.powi(3) - 8.0 * shoelace).abs() < 1e-12);
    }

    #[test]
    fn parallel_elements_rejected() {
        let e1 = LinearElement::new(PlaneVector::new(0.0, 0.0), PlaneVector::new(1.0, 0.0)).unwrap();
        let e2 = LinearElement::new(PlaneVector::new(0.0, 1.0), PlaneVector::new(-2.0, 0.0)).unwrap();
        assert_eq!(affine_distance(&e1, &e2), Err(Error::ParallelElements));
    }

    #[test]
    fn negative_triangle_gives_negative_distance() {
        let (e1, e2) = circle_chord(2.0);
        assert!(affine_distance(&e1, &e2).unwrap() < 0.0);
    }

    #[test]
    fn unimodular_frame_preserves_affine_distance() {
        let (e1, e2) = circle_chord(0.9);
        let f = AffineFrame::new([[2.0, 0.7], [0.3, 0.605]], PlaneVector::new(3.0, -1.0)).unwrap();
        assert!(f.is_unimodular());
        let d0 = affine_distance(&e1, &e2).unwrap();
        let d1 = affine_distance(&f.apply_element(&e1), &f.apply_element(&e2)).unwrap();
        assert!((d0 - d1).abs() < 1e-12);
    }

    #[test]
    fn singular_frame_rejected() {
        assert!(matches!(AffineFrame::new([[1.0, 2.0], [2.0, 4.0]], PlaneVector::ZERO), Err(Error::SingularFrame(_))));
    }
}
