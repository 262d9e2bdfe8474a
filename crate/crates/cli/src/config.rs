use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use flotilla::{ClosedConvexCurve, CurveSpec};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const MIN_SAMPLES: usize = 64;
pub const DEFAULT_SAMPLES: usize = 512;
pub const DEFAULT_CHORD_STRIDE: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    Thm1,
    Homothety,
    Duality,
    Eq13,
    CutLength,
    Omega,
    AffineNormal,
    Dupin,
    AffineSphere,
    Petty,
    Radon,
    Carousel,
    Limits,
}

impl CheckName {
    pub const ALL: [CheckName; 13] = [
        CheckName::Thm1,
        CheckName::Homothety,
        CheckName::Duality,
        CheckName::Eq13,
        CheckName::CutLength,
        CheckName::Omega,
        CheckName::AffineNormal,
        CheckName::Dupin,
        CheckName::AffineSphere,
        CheckName::Petty,
        CheckName::Radon,
        CheckName::Carousel,
        CheckName::Limits,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::Thm1 => "thm1",
            CheckName::Homothety => "homothety",
            CheckName::Duality => "duality",
            CheckName::Eq13 => "eq13",
            CheckName::CutLength => "cut_length",
            CheckName::Omega => "omega",
            CheckName::AffineNormal => "affine_normal",
            CheckName::Dupin => "dupin",
            CheckName::AffineSphere => "affine_sphere",
            CheckName::Petty => "petty",
            CheckName::Radon => "radon",
            CheckName::Carousel => "carousel",
            CheckName::Limits => "limits",
        }
    }

    /// Checks that depend on the curve alone rather than on δ.
    pub fn is_curve_level(self) -> bool {
        matches!(self, CheckName::Petty | CheckName::Radon | CheckName::Carousel | CheckName::Limits)
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckName {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Self::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| {
            let known: Vec<&str> = Self::ALL.iter().map(|c| c.as_str()).collect();
            CliError::Config(format!("unknown check {s:?} (known: {})", known.join(", ")))
        })
    }
}

/// A δ given either as an area or as a fraction of the body's area.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DeltaSpec {
    Absolute(f64),
    Fraction { fraction: f64 },
}

impl DeltaSpec {
    pub fn resolve(self, area: f64) -> f64 {
        match self {
            DeltaSpec::Absolute(d) => d,
            DeltaSpec::Fraction { fraction } => fraction * area,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RunConfig {
    #[serde(alias = "curveSpec")]
    pub curve: CurveSpec,
    pub deltas: Vec<DeltaSpec>,
    #[serde(default = "default_samples")]
    pub n_samples: usize,
    #[serde(default)]
    pub checks: Vec<CheckName>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Silhouette area used when δ̂ cannot be derived from a detected homothety.
    #[serde(default)]
    pub delta_hat: Option<f64>,
    #[serde(default)]
    pub tolerances_override: BTreeMap<CheckName, f64>,
    #[serde(default = "default_stride")]
    pub chord_stride: usize,
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

fn default_stride() -> usize {
    DEFAULT_CHORD_STRIDE
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// A validated configuration with its curve built and δ values resolved.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub spec: CurveSpec,
    pub curve: ClosedConvexCurve,
    pub area: f64,
    pub deltas: Vec<f64>,
    pub n_samples: usize,
    pub checks: Vec<CheckName>,
    pub delta_hat: Option<f64>,
    pub tolerances: BTreeMap<CheckName, f64>,
    pub chord_stride: usize,
}

impl Resolved {
    pub fn new(config: &RunConfig) -> Result<Self, CliError> {
        let curve = config.curve.build().map_err(|e| CliError::Config(format!("curve: {e}")))?;
        let area = curve.area().map_err(CliError::Numerical)?;
        if config.n_samples < MIN_SAMPLES {
            return Err(CliError::Config(format!("nSamples = {} is below {MIN_SAMPLES}", config.n_samples)));
        }
        if config.deltas.is_empty() {
            return Err(CliError::Config("deltas is empty".into()));
        }
        let deltas: Vec<f64> = config.deltas.iter().map(|d| d.resolve(area)).collect();
        if let Some(bad) = deltas.iter().find(|d| !(**d > 0.0 && **d < area)) {
            return Err(CliError::Config(format!("δ = {bad} outside (0, {area})")));
        }
        if let Some(dh) = config.delta_hat {
            if !(dh > 0.0 && dh.is_finite()) {
                return Err(CliError::Config(format!("deltaHat = {dh} must be positive")));
            }
        }
        if let Some((name, tol)) = config.tolerances_override.iter().find(|(_, t)| !(**t > 0.0)) {
            return Err(CliError::Config(format!("tolerance for {name} must be positive, got {tol}")));
        }
        let mut checks = Vec::new();
        for c in &config.checks {
            if !checks.contains(c) {
                checks.push(*c);
            }
        }
        Ok(Self {
            spec: config.curve.clone(),
            curve,
            area,
            deltas,
            n_samples: config.n_samples,
            checks,
            delta_hat: config.delta_hat,
            tolerances: config.tolerances_override.clone(),
            chord_stride: config.chord_stride,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunConfig, CliError> {
        RunConfig::from_json(text)
    }

    #[test]
    fn parses_both_delta_forms_and_aliases() {
        let c = parse(
            r#"{"curveSpec": {"kind": "ellipse", "a": 2, "b": 1}, "deltas": [0.5, {"fraction": 0.25}],
                "checks": ["thm1", "cut_length"], "tolerancesOverride": {"thm1": 1e-3}}"#,
        )
        .unwrap();
        assert_eq!(c.n_samples, DEFAULT_SAMPLES);
        assert_eq!(c.checks, vec![CheckName::Thm1, CheckName::CutLength]);
        let r = Resolved::new(&c).unwrap();
        assert_eq!(r.deltas[0], 0.5);
        assert!((r.deltas[1] - 0.25 * 2.0 * std::f64::consts::PI).abs() < 1e-12);
        assert_eq!(r.tolerances[&CheckName::Thm1], 1e-3);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(parse("{").is_err());
        assert!(parse(r#"{"curve": {"kind": "ellipse", "a": 1, "b": 1}, "deltas": [1], "bogus": 1}"#).is_err());
        assert!(parse(r#"{"curve": {"kind": "ellipse", "a": 1, "b": 1}, "deltas": [1], "checks": ["nope"]}"#).is_err());
        let small = parse(r#"{"curve": {"kind": "ellipse", "a": 1, "b": 1}, "deltas": [1], "nSamples": 32}"#).unwrap();
        assert!(matches!(Resolved::new(&small), Err(CliError::Config(_))));
        let big = parse(r#"{"curve": {"kind": "ellipse", "a": 1, "b": 1}, "deltas": [4]}"#).unwrap();
        assert!(matches!(Resolved::new(&big), Err(CliError::Config(_))));
    }

    #[test]
    fn check_names_round_trip() {
        for c in CheckName::ALL {
            assert_eq!(c.as_str().parse::<CheckName>().unwrap(), c);
            assert_eq!(serde_json::to_string(&c).unwrap(), format!("\"{c}\""));
        }
    }
}
