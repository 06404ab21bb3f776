//! Polygon shortening flows.
//!
//! Vertices are complex numbers. The crate provides the linear circulant
//! scheme with its closed-form spectral solution, the Menger-Melnikov
//! curvature flow and the perimeter-gradient (angle bisector) flow, plus
//! RK4 integration and checks for the invariants each flow preserves.

pub mod analysis;
pub mod flows;
pub mod geometry;
pub mod io;
pub mod reproduce;
pub mod simulate;
pub mod spectral;
pub mod validate;

pub use analysis::{AnalysisError, CheckReport};
pub use flows::{BisectorSpeed, FlowError, FlowSpec, VelocityField};
pub use geometry::{GeometryError, Point, Polygon};
pub use simulate::{run, SimConfig, SimError, Termination, Trajectory};
pub use spectral::{decompose, EllipseParams, SpectralDecomposition, SpectralError};
