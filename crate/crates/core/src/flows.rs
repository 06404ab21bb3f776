//! Vertex velocity fields for the three shortening flows.
//!
//! Every field is a pure function of the current vertex positions. The
//! slice-level `*_into` functions are what the integrator calls on its
//! intermediate stage states, which need not be valid [`Polygon`]s.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{circumcircle, Point, Polygon};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("vertices around index {0} coincide; curvature is undefined")]
    DegenerateTriple(usize),
    #[error("side {0} has zero length")]
    CoincidentVertices(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BisectorSpeed {
    /// Every vertex moves with the same speed.
    #[default]
    Unit,
    /// `u_i = d_i / 2`, comparable in size to the linear field.
    NormMatched,
}

fn default_speed() -> f64 {
    1.0
}

/// Which velocity field drives the evolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FlowSpec {
    /// `dz_i/dt = (z_{i+1} - z_i)/2 + (z_{i-1} - z_i)/2`.
    Linear,
    /// Each vertex moves to its circumcenter scaled by `1/R^2`.
    MengerMelnikov,
    /// Steepest descent of the perimeter at fixed per-vertex speed.
    Bisector {
        #[serde(default)]
        speed_mode: BisectorSpeed,
        /// Only used in [`BisectorSpeed::Unit`] mode.
        #[serde(default = "default_speed")]
        speed: f64,
    },
}

impl FlowSpec {
    pub fn bisector_unit(speed: f64) -> Self {
        FlowSpec::Bisector {
            speed_mode: BisectorSpeed::Unit,
            speed,
        }
    }

    pub fn bisector_norm_matched() -> Self {
        FlowSpec::Bisector {
            speed_mode: BisectorSpeed::NormMatched,
            speed: 1.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FlowSpec::Linear => "linear",
            FlowSpec::MengerMelnikov => "menger-melnikov",
            FlowSpec::Bisector { .. } => "bisector",
        }
    }

    /// Evaluates the field on raw vertex positions.
    pub fn velocity_into(&self, z: &[Point], out: &mut [Point]) -> Result<(), FlowError> {
        match *self {
            FlowSpec::Linear => {
                linear_into(z, out);
                Ok(())
            }
            FlowSpec::MengerMelnikov => menger_melnikov_into(z, out),
            FlowSpec::Bisector { speed_mode, speed } => bisector_into(z, speed_mode, speed, out),
        }
    }

    pub fn velocity(&self, poly: &Polygon) -> Result<VelocityField, FlowError> {
        let mut out = vec![Point::new(0.0, 0.0); poly.len()];
        self.velocity_into(poly.vertices(), &mut out)?;
        Ok(VelocityField(out))
    }
}

/// One velocity vector per vertex, aligned with the polygon's numbering.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityField(pub Vec<Point>);

impl VelocityField {
    pub fn zeros(n: usize) -> Self {
        VelocityField(vec![Point::new(0.0, 0.0); n])
    }

    pub fn as_slice(&self) -> &[Point] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_speed(&self) -> f64 {
        self.0.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn sum(&self) -> Point {
        self.0.iter().sum()
    }
}

pub fn linear_into(z: &[Point], out: &mut [Point]) {
    let n = z.len();
    for i in 0..n {
        let (prev, next) = (z[(i + n - 1) % n], z[(i + 1) % n]);
        out[i] = 0.5 * (next - z[i]) + 0.5 * (prev - z[i]);
    }
}

pub fn menger_melnikov_into(z: &[Point], out: &mut [Point]) -> Result<(), FlowError> {
    let n = z.len();
    for i in 0..n {
        let (prev, v, next) = (z[(i + n - 1) % n], z[i], z[(i + 1) % n]);
        if prev == v || v == next || prev == next {
            return Err(FlowError::DegenerateTriple(i));
        }
        out[i] = match circumcircle(prev, v, next) {
            Ok(c) => (c.center - v) / (c.radius * c.radius),
            // zero curvature
            Err(_) => Point::new(0.0, 0.0),
        };
    }
    Ok(())
}

/// Sum of the two unit vectors from each vertex along its sides. Errors on
/// a zero-length side.
pub fn bisector_directions(z: &[Point]) -> Result<Vec<Point>, FlowError> {
    let n = z.len();
    let mut units = Vec::with_capacity(n);
    for i in 0..n {
        let side = z[(i + 1) % n] - z[i];
        let len = side.norm();
        if len == 0.0 {
            return Err(FlowError::CoincidentVertices(i));
        }
        units.push(side / len);
    }
    // unit(z_{i-1} - z_i) = -units[i-1], unit(z_{i+1} - z_i) = units[i]
    Ok((0..n).map(|i| units[i] - units[(i + n - 1) % n]).collect())
}

pub fn bisector_into(
    z: &[Point],
    mode: BisectorSpeed,
    speed: f64,
    out: &mut [Point],
) -> Result<(), FlowError> {
    let directions = bisector_directions(z)?;
    for (o, d) in out.iter_mut().zip(directions) {
        *o = match mode {
            BisectorSpeed::NormMatched => 0.5 * d,
            BisectorSpeed::Unit => {
                let len = d.norm();
                // anti-parallel sides: no preferred direction
                if len <= 1e-12 {
                    Point::new(0.0, 0.0)
                } else {
                    d * (speed / len)
                }
            }
        };
    }
    Ok(())
}

/// The linear scheme: each vertex heads for the midpoint of its neighbours.
pub fn linear_velocity(poly: &Polygon) -> VelocityField {
    let mut out = vec![Point::new(0.0, 0.0); poly.len()];
    linear_into(poly.vertices(), &mut out);
    VelocityField(out)
}

/// `(C_i - z_i) / R_i^2` from the circumcircle of `z_{i-1}, z_i, z_{i+1}`;
/// zero where that triple is collinear.
pub fn menger_melnikov_velocity(poly: &Polygon) -> Result<VelocityField, FlowError> {
    FlowSpec::MengerMelnikov.velocity(poly)
}

/// Perimeter-descent direction, bisecting each internal angle.
pub fn bisector_velocity(
    poly: &Polygon,
    mode: BisectorSpeed,
    speed: f64,
) -> Result<VelocityField, FlowError> {
    FlowSpec::Bisector {
        speed_mode: mode,
        speed,
    }
    .velocity(poly)
}
