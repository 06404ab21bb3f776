//! Polygon representation and the planar measures used by every flow.
//!
//! Vertices live in the complex plane ([`Point`] is `Complex64`), so the
//! formulas for the angle functions and the Fourier modes read the same way
//! they are usually written by hand. Indices are cyclic throughout: vertex
//! `n` is vertex `0`.

mod classify;
mod predicates;

use std::collections::HashSet;

use num_complex::Complex64;
use thiserror::Error;

pub use classify::{
    classify_convexity, classify_star, internal_angle, ConvexityClass, ConvexityKind, StarClass,
    StarKind,
};
pub use predicates::{
    circumcircle, convex_function, cross, is_simple, orient, segments_intersect, star_function,
    Circumcircle,
};

/// A vertex position (or a velocity vector) in the plane.
pub type Point = Complex64;

/// Relative tolerance for the quadratic predicates.
///
/// Comparisons are made against `DEGENERACY_TOL * scale^2`, where `scale` is
/// the diameter of the points involved.
pub const DEGENERACY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("a polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("vertices {first} and {second} coincide")]
    DuplicateVertex { first: usize, second: usize },
    #[error("the three points are collinear")]
    Collinear,
}

/// A closed circuit of `n >= 3` pairwise distinct vertices.
///
/// The circuit may self-intersect; use [`is_simple`] to test for that.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    /// Validates and wraps a vertex list.
    ///
    /// Distinctness is checked with exact equality; near-duplicates are
    /// legal polygons.
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        if vertices.len() < 3 {
            return Err(GeometryError::TooFewVertices(vertices.len()));
        }
        if let Some(i) = vertices
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(GeometryError::NonFinite(i));
        }
        // Adding 0.0 folds -0.0 into +0.0 so the bit patterns compare like floats.
        let mut seen = HashSet::with_capacity(vertices.len());
        for (i, z) in vertices.iter().enumerate() {
            let key = ((z.re + 0.0).to_bits(), (z.im + 0.0).to_bits());
            if !seen.insert(key) {
                let first = vertices[..i].iter().position(|w| w == z).unwrap_or(0);
                return Err(GeometryError::DuplicateVertex { first, second: i });
            }
        }
        Ok(Self { vertices })
    }

    pub fn from_xy(coords: &[[f64; 2]]) -> Result<Self, GeometryError> {
        Self::new(coords.iter().map(|&[x, y]| Point::new(x, y)).collect())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Point> {
        self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// Always false; kept alongside `len` for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertex at a cyclic index; negative indices wrap backwards.
    pub fn vertex(&self, i: isize) -> Point {
        let n = self.vertices.len() as isize;
        self.vertices[i.rem_euclid(n) as usize]
    }

    /// The same circuit traversed in the opposite direction.
    pub fn reversed(&self) -> Polygon {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Polygon { vertices }
    }

    pub fn xy(&self) -> Vec<[f64; 2]> {
        self.vertices.iter().map(|z| [z.re, z.im]).collect()
    }

    pub fn centroid(&self) -> Point {
        centroid_of(&self.vertices)
    }

    pub fn perimeter(&self) -> f64 {
        perimeter_of(&self.vertices)
    }

    pub fn signed_area(&self) -> f64 {
        signed_area_of(&self.vertices)
    }

    pub fn diameter(&self) -> f64 {
        diameter_of(&self.vertices)
    }

    pub fn min_edge(&self) -> f64 {
        min_edge_of(&self.vertices)
    }

    pub fn edge_lengths(&self) -> Vec<f64> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| (self.vertices[(i + 1) % n] - self.vertices[i]).norm())
            .collect()
    }
}

/// Arithmetic mean of the vertices. This is the point the linear flow keeps
/// fixed.
pub fn centroid_of(vertices: &[Point]) -> Point {
    let sum: Point = vertices.iter().sum();
    sum / vertices.len() as f64
}

/// Sum of the cyclic side lengths `|z_{i+1} - z_i|`.
pub fn perimeter_of(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|i| (vertices[(i + 1) % n] - vertices[i]).norm())
        .sum()
}

/// Shoelace area; positive for counterclockwise simple polygons.
pub fn signed_area_of(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    let twice: f64 = (0..n)
        .map(|i| {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            a.re * b.im - b.re * a.im
        })
        .sum();
    0.5 * twice
}

/// Largest pairwise distance, by brute force.
pub fn diameter_of(vertices: &[Point]) -> f64 {
    let mut best = 0.0f64;
    for (i, a) in vertices.iter().enumerate() {
        for b in &vertices[i + 1..] {
            best = best.max((a - b).norm_sqr());
        }
    }
    best.sqrt()
}

pub fn min_edge_of(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|i| (vertices[(i + 1) % n] - vertices[i]).norm())
        .fold(f64::INFINITY, f64::min)
}
