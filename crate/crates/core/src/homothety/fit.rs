use serde::Serialize;

use crate::curve::diameter;
use crate::error::{Error, Result};
use crate::floatgeom::DerivedCurveSample;
use crate::vector::PlaneVector;

/// Ratios closer to 1 than this are treated as pure translations.
pub const TRANSLATION_RATIO_TOLERANCE: f64 = 1e-9;

/// Relative RMS residual (against the diameter) below which two sampled
/// curves count as homothetic.
pub const MATCH_TOLERANCE: f64 = 1e-6;

/// Least-squares dilation `B ≈ center + ratio·(A − center)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HomothetyFit {
    /// `None` in translation mode.
    pub center: Option<PlaneVector>,
    /// Offset `B − A` in translation mode.
    pub translation: Option<PlaneVector>,
    pub ratio: f64,
    pub rms_residual: f64,
    pub diameter: f64,
    pub matched: bool,
}

impl HomothetyFit {
    pub fn relative_residual(&self) -> f64 {
        self.rms_residual / self.diameter
    }
}

/// Fits a homothety between two parametrically matched point lists.
pub fn fit_points(a: &[PlaneVector], b: &[PlaneVector]) -> Result<HomothetyFit> {
    if a.len() != b.len() {
        return Err(Error::domain(format!("sample counts differ: {} vs {}", a.len(), b.len())));
    }
    if a.len() < 3 {
        return Err(Error::domain("a homothety fit needs at least 3 samples"));
    }
    let n = a.len() as f64;
    let mean = |v: &[PlaneVector]| v.iter().fold(PlaneVector::ZERO, |acc, p| acc + *p) / n;
    let (ma, mb) = (mean(a), mean(b));
    let (mut num, mut den) = (0.0, 0.0);
    for (p, q) in a.iter().zip(b) {
        let (da, db) = (*p - ma, *q - mb);
        num += da.dot(db);
        den += da.norm_squared();
    }
    if den == 0.0 {
        return Err(Error::domain("first curve collapses to a point; ratio undefined"));
    }
    let ratio = num / den;
    let offset = mb - ma * ratio;
    let sq: f64 = a.iter().zip(b).map(|(p, q)| (*q - *p * ratio - offset).norm_squared()).sum();
    let rms_residual = (sq / n).sqrt();
    let mut all = a.to_vec();
    all.extend_from_slice(b);
    let diameter = diameter(&all);
    let (center, translation) = if (ratio - 1.0).abs() < TRANSLATION_RATIO_TOLERANCE {
        (None, Some(offset))
    } else {
        (Some(offset / (1.0 - ratio)), None)
    };
    let matched = ratio > 0.0 && rms_residual < MATCH_TOLERANCE * diameter;
    Ok(HomothetyFit { center, translation, ratio, rms_residual, diameter, matched })
}

/// Fits a homothety between two derived curves sampled at the same `s`.
pub fn fit_homothety(a: &[DerivedCurveSample], b: &[DerivedCurveSample]) -> Result<HomothetyFit> {
    if a.len() != b.len() {
        return Err(Error::domain(format!("sample counts differ: {} vs {}", a.len(), b.len())));
    }
    if let Some((p, q)) = a.iter().zip(b).find(|(p, q)| (p.s - q.s).abs() > 1e-12 * (1.0 + p.s.abs())) {
        return Err(Error::domain(format!("samples are not matched by parameter: {} vs {}", p.s, q.s)));
    }
    let pa: Vec<PlaneVector> = a.iter().map(|d| d.point).collect();
    let pb: Vec<PlaneVector> = b.iter().map(|d| d.point).collect();
    fit_points(&pa, &pb)
}

/// Summary of how far a sampled quantity is from constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstancyReport {
    pub mean: f64,
    pub coefficient_of_variation: f64,
    pub max_abs_deviation: f64,
    pub count: usize,
}

impl ConstancyReport {
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("constancy report of an empty sample"));
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        let max_abs_deviation = values.iter().fold(0.0f64, |m, v| m.max((v - mean).abs()));
        let coefficient_of_variation = if mean == 0.0 {
            if var == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            var.sqrt() / mean.abs()
        };
        Ok(Self { mean, coefficient_of_variation, max_abs_deviation, count: values.len() })
    }

    pub fn is_constant(&self, threshold: f64) -> bool {
        self.coefficient_of_variation < threshold
    }
}

/// Default coefficient-of-variation threshold for "constant".
pub fn constancy_threshold(sampled: bool) -> f64 {
    if sampled {
        1e-4
    } else {
        1e-6
    }
}
