use serde::{Deserialize, Serialize};

use super::ClosedConvexCurve;
use crate::error::Result;
use crate::vector::PlaneVector;

/// JSON description of a curve, tagged by `"kind"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
    Ellipse {
        a: f64,
        b: f64,
        #[serde(default = "origin")]
        center: [f64; 2],
        #[serde(default)]
        rotation: f64,
    },
    FourierRadial {
        r0: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
    Samples {
        points: Vec<[f64; 2]>,
    },
}

fn origin() -> [f64; 2] {
    [0.0, 0.0]
}

impl CurveSpec {
    pub fn build(&self) -> Result<ClosedConvexCurve> {
        match self {
            CurveSpec::Ellipse { a, b, center, rotation } => {
                ClosedConvexCurve::ellipse(*a, *b, PlaneVector::from(*center), *rotation)
            }
            CurveSpec::FourierRadial { r0, cos, sin } => {
                ClosedConvexCurve::fourier_radial(*r0, cos.clone(), sin.clone())
            }
            CurveSpec::Samples { points } => {
                let pts: Vec<PlaneVector> = points.iter().map(|p| PlaneVector::from(*p)).collect();
                ClosedConvexCurve::sampled(&pts)
            }
        }
    }

    /// Short human-readable label used in reports.
    pub fn label(&self) -> String {
        match self {
            CurveSpec::Ellipse { a, b, .. } if a == b => format!("circle(r={a})"),
            CurveSpec::Ellipse { a, b, .. } => format!("ellipse(a={a},b={b})"),
            CurveSpec::FourierRadial { r0, .. } => format!("fourier_radial(r0={r0})"),
            CurveSpec::Samples { points } => format!("samples(n={})", points.len()),
        }
    }
}
