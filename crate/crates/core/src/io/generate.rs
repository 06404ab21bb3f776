//! Seeded polygon generators. Each generator's shape guarantee is checked
//! on its output before it is returned.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::fixtures::{BOOMERANG, CRESCENT};
use super::rng::Rng;
use crate::geometry::{classify_convexity, classify_star, ConvexityKind, Point, Polygon, StarKind};

pub const MIN_VERTICES: usize = 3;
pub const MAX_VERTICES: usize = 1000;
pub const MAX_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerateError {
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),
    #[error("{kind} generator found no valid polygon in {attempts} attempts")]
    GenerationFailed { kind: &'static str, attempts: usize },
}

fn default_r_min() -> f64 {
    0.5
}
fn default_r_max() -> f64 {
    1.5
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    /// Unit circumradius, counterclockwise, first vertex at (1, 0).
    Regular { n: usize },
    /// Counterclockwise star about the centroid with radii in `[r_min, r_max]`.
    RandomStar {
        n: usize,
        #[serde(default = "default_r_min")]
        r_min: f64,
        #[serde(default = "default_r_max")]
        r_max: f64,
    },
    /// Strictly convex and counterclockwise.
    RandomConvex { n: usize },
    /// Distinct points on a random line.
    Collinear { n: usize },
    /// The committed area-increasing fixture.
    Boomerang,
    /// The committed fixture that self-intersects.
    EmbeddedLoss,
}

impl GeneratorSpec {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorSpec::Regular { .. } => "regular",
            GeneratorSpec::RandomStar { .. } => "random_star",
            GeneratorSpec::RandomConvex { .. } => "random_convex",
            GeneratorSpec::Collinear { .. } => "collinear",
            GeneratorSpec::Boomerang => "boomerang",
            GeneratorSpec::EmbeddedLoss => "embedded_loss",
        }
    }

    fn validate(&self) -> Result<(), GenerateError> {
        let n = match *self {
            GeneratorSpec::Regular { n }
            | GeneratorSpec::RandomConvex { n }
            | GeneratorSpec::Collinear { n } => n,
            GeneratorSpec::RandomStar { n, r_min, r_max } => {
                if !(r_min > 0.0 && r_min <= r_max && r_max.is_finite()) {
                    return Err(GenerateError::InvalidParameter(format!(
                        "radius range [{r_min}, {r_max}] must satisfy 0 < r_min <= r_max"
                    )));
                }
                n
            }
            GeneratorSpec::Boomerang | GeneratorSpec::EmbeddedLoss => return Ok(()),
        };
        if !(MIN_VERTICES..=MAX_VERTICES).contains(&n) {
            return Err(GenerateError::InvalidParameter(format!(
                "n = {n} is outside [{MIN_VERTICES}, {MAX_VERTICES}]"
            )));
        }
        Ok(())
    }
}

/// Builds the polygon described by `spec`. Random kinds are a pure function
/// of `(spec, seed)`.
pub fn generate(spec: &GeneratorSpec, seed: u64) -> Result<Polygon, GenerateError> {
    generate_with(spec, &mut Rng::new(seed))
}

/// Like [`generate`], drawing from an existing stream.
pub fn generate_with(spec: &GeneratorSpec, rng: &mut Rng) -> Result<Polygon, GenerateError> {
    spec.validate()?;
    match *spec {
        GeneratorSpec::Regular { n } => Ok(regular(n)),
        GeneratorSpec::RandomStar { n, r_min, r_max } => random_star(n, r_min, r_max, rng),
        GeneratorSpec::RandomConvex { n } => random_convex(n, rng),
        GeneratorSpec::Collinear { n } => collinear(n, rng),
        GeneratorSpec::Boomerang => Ok(fixture(&BOOMERANG)),
        GeneratorSpec::EmbeddedLoss => Ok(fixture(&CRESCENT)),
    }
}

fn fixture(xy: &[[f64; 2]]) -> Polygon {
    Polygon::from_xy(xy).expect("committed fixtures are valid polygons")
}

fn regular(n: usize) -> Polygon {
    Polygon::new(
        (0..n)
            .map(|k| Point::from_polar(1.0, TAU * k as f64 / n as f64))
            .collect(),
    )
    .expect("roots of unity are distinct")
}

fn random_star(n: usize, r_min: f64, r_max: f64, rng: &mut Rng) -> Result<Polygon, GenerateError> {
    for _ in 0..MAX_ATTEMPTS {
        let weights: Vec<f64> = (0..n).map(|_| rng.uniform(0.1, 1.0)).collect();
        let total: f64 = weights.iter().sum();
        let steps: Vec<f64> = weights.iter().map(|w| TAU * w / total).collect();
        // each increment must stay clear of pi
        if steps.iter().any(|&a| a >= PI - 1e-3) {
            continue;
        }
        let mut theta = rng.uniform(0.0, TAU);
        let mut z = Vec::with_capacity(n);
        for step in steps {
            z.push(Point::from_polar(rng.uniform(r_min, r_max), theta));
            theta += step;
        }
        let Ok(p) = Polygon::new(z) else { continue };
        // the star was built about the origin; it must hold about the centroid
        if classify_star(&p).kind == StarKind::CcwStar {
            return Ok(p);
        }
    }
    Err(GenerateError::GenerationFailed {
        kind: "random_star",
        attempts: MAX_ATTEMPTS,
    })
}

fn random_convex(n: usize, rng: &mut Rng) -> Result<Polygon, GenerateError> {
    let mut jitter = 0.2;
    for attempt in 0..MAX_ATTEMPTS {
        if attempt > 0 && attempt % 50 == 0 {
            jitter *= 0.5;
        }
        let mut angles: Vec<f64> = (0..n).map(|_| rng.uniform(0.0, TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let stretch = rng.uniform(0.4, 1.0);
        let rotation = Point::from_polar(1.0, rng.uniform(0.0, TAU));
        let z: Vec<Point> = angles
            .iter()
            .map(|&a| {
                let w = Point::from_polar(1.0 + rng.uniform(-jitter, jitter), a);
                rotation * Point::new(w.re, stretch * w.im)
            })
            .collect();
        let Ok(p) = Polygon::new(z) else { continue };
        if classify_convexity(&p).kind == ConvexityKind::StrictlyConvex && p.signed_area() > 0.0 {
            return Ok(p);
        }
    }
    Err(GenerateError::GenerationFailed {
        kind: "random_convex",
        attempts: MAX_ATTEMPTS,
    })
}

/// `n` uniform points in the unit square, scaled to unit diameter. No
/// shape guarantee beyond distinct vertices.
pub fn random_cloud(n: usize, rng: &mut Rng) -> Result<Polygon, GenerateError> {
    GeneratorSpec::Regular { n }.validate()?;
    for _ in 0..MAX_ATTEMPTS {
        let z: Vec<Point> = (0..n)
            .map(|_| Point::new(rng.next_f64(), rng.next_f64()))
            .collect();
        let Ok(p) = Polygon::new(z) else { continue };
        let scale = 1.0 / p.diameter();
        if let Ok(q) = Polygon::new(p.vertices().iter().map(|z| z * scale).collect()) {
            return Ok(q);
        }
    }
    Err(GenerateError::GenerationFailed {
        kind: "random_cloud",
        attempts: MAX_ATTEMPTS,
    })
}

fn collinear(n: usize, rng: &mut Rng) -> Result<Polygon, GenerateError> {
    for _ in 0..MAX_ATTEMPTS {
        let dir = Point::from_polar(1.0, rng.uniform(0.0, PI));
        let base = Point::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        let z: Vec<Point> = (0..n)
            .map(|_| base + dir * rng.uniform(-1.0, 1.0))
            .collect();
        let Ok(p) = Polygon::new(z) else { continue };
        let tol = 1e-12 * p.diameter();
        if p.vertices()
            .iter()
            .all(|&w| ((w - base) * dir.conj()).im.abs() <= tol)
        {
            return Ok(p);
        }
    }
    Err(GenerateError::GenerationFailed {
        kind: "collinear",
        attempts: MAX_ATTEMPTS,
    })
}
