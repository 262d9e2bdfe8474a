use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("derivative order {0} is not supported (max 3)")]
    UnsupportedOrder(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular parametrization at s = {s}")]
    SingularParametrization { s: f64 },

    #[error("degenerate curve: det(γ′, γ″) = {det:e} at s = {s}")]
    DegenerateCurve { s: f64, det: f64 },

    #[error("linear elements have parallel directions")]
    ParallelElements,

    #[error("affine frame is singular (det = {0:e})")]
    SingularFrame(f64),

    #[error("tangent lines at s = {s} and t = {t} are parallel; no apex")]
    NoApex { s: f64, t: f64 },

    #[error("quadrature did not reach tolerance {tol:e} on [{a}, {b}]")]
    Accuracy { a: f64, b: f64, tol: f64 },

    #[error("root solver failed: {0}")]
    Solver(String),

    #[error("carousel chain left the admissible parameter window after {steps} chords")]
    CarouselOverflow { steps: usize },

    #[error("carousel closure defect has no sign change on the δ bracket")]
    NoClosure,

    #[error("invalid curve: {0}")]
    InvalidCurve(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn solver(msg: impl Into<String>) -> Self {
        Error::Solver(msg.into())
    }
}
