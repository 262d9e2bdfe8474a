//! Composite Gauss–Legendre quadrature on a uniform panel grid.
//!
//! The panel count is doubled until two successive estimates agree to the
//! requested relative tolerance. Integrands are vector valued (`[f64; K]`) so
//! that an area and its first moments can share the same panels.

use crate::error::{Error, Result};

const GL8_NODES: [f64; 4] =
    [0.183_434_642_495_649_8, 0.525_532_409_916_329, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
const GL8_WEIGHTS: [f64; 4] =
    [0.362_683_783_378_362, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub initial_panels: usize,
    pub max_panels: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self { rel_tol: 1e-12, abs_tol: 1e-15, initial_panels: 2, max_panels: 1 << 15 }
    }
}

impl Quadrature {
    /// Fixed-panel rule; no refinement.
    pub fn fixed<const K: usize>(mut f: impl FnMut(f64) -> [f64; K], a: f64, b: f64, panels: usize) -> [f64; K] {
        let h = (b - a) / panels as f64;
        let mut acc = [0.0; K];
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * h;
            let half = 0.5 * h;
            for (node, w) in GL8_NODES.iter().zip(GL8_WEIGHTS.iter()) {
                for u in [mid - half * node, mid + half * node] {
                    let v = f(u);
                    for k in 0..K {
                        acc[k] += w * half * v[k];
                    }
                }
            }
        }
        acc
    }

    pub fn integrate<const K: usize>(&self, mut f: impl FnMut(f64) -> [f64; K], a: f64, b: f64) -> Result<[f64; K]> {
        if a == b {
            return Ok([0.0; K]);
        }
        let mut panels = self.initial_panels.max(1);
        let mut prev = Self::fixed(&mut f, a, b, panels);
        loop {
            panels *= 2;
            let next = Self::fixed(&mut f, a, b, panels);
            if next.iter().any(|v| !v.is_finite()) {
                return Err(Error::Accuracy { a, b, tol: self.rel_tol });
            }
            let diff = max_abs_diff(&prev, &next);
            let mag = next.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if diff <= self.rel_tol * mag + self.abs_tol {
                return Ok(next);
            }
            if panels >= self.max_panels {
                return Err(Error::Accuracy { a, b, tol: self.rel_tol });
            }
            prev = next;
        }
    }

    pub fn integrate_scalar(&self, mut f: impl FnMut(f64) -> f64, a: f64, b: f64) -> Result<f64> {
        self.integrate(|u| [f(u)], a, b).map(|[v]| v)
    }
}

fn max_abs_diff<const K: usize>(a: &[f64; K], b: &[f64; K]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

/// Periodic trapezoid rule over uniformly spaced samples of one period.
pub fn periodic_trapezoid(values: &[f64], period: f64) -> f64 {
    values.iter().sum::<f64>() * period / values.len() as f64
}
