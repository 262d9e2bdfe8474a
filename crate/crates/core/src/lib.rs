//! Flotation, buoyancy and illumination curves of smooth planar convex
//! bodies, their closed-form differential invariants, and numeric checks of
//! the homothety, duality and carousel criteria that relate them.

pub mod chord;
pub mod curve;
pub mod error;
pub mod floatgeom;
pub mod homothety;
pub mod illumgeom;
pub mod jet;
pub mod quadrature;
pub mod solve;
pub mod vector;

pub use curve::{ClosedConvexCurve, CurveKind, CurveSpec};
pub use error::{Error, Result};
pub use vector::{AffineFrame, LinearElement, PlaneVector};
