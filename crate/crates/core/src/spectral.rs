//! Exact solution of the linear scheme through its circulant structure.
//!
//! The generator `A = circ(-1, 1/2, 0, ..., 0, 1/2)` is diagonalised by the
//! discrete Fourier basis. Mode `k` (0-based) has eigenvalue
//! `cos(2 pi k / n) - 1` and eigenvector `(w^{ik})_i` with `w = e^{2 pi j/n}`,
//! so every trajectory is a superposition of independently decaying modes.

use std::f64::consts::{PI, TAU};

use thiserror::Error;

use crate::geometry::{GeometryError, Point, Polygon};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("need at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("the two slowest modes vanish; the limit shape is not an ellipse")]
    DegenerateLeadingMode,
}

/// Semi-axes below this fraction of the major axis are treated as a segment.
pub const FLAT_ELLIPSE_RATIO: f64 = 1e-9;

/// `e^{2 pi j m / n}`, with the exponent reduced mod `n` before scaling.
fn root_of_unity(m: usize, n: usize) -> Point {
    Point::from_polar(1.0, TAU * (m % n) as f64 / n as f64)
}

/// `lambda_i = cos(2 pi (i - 1)/n) - 1` for `i = 1..n`, in index order.
pub fn eigenvalues(n: usize) -> Result<Vec<f64>, SpectralError> {
    if n < 3 {
        return Err(SpectralError::TooFewVertices(n));
    }
    Ok((0..n)
        .map(|k| (TAU * k as f64 / n as f64).cos() - 1.0)
        .collect())
}

/// Modal coordinates of a polygon under the linear scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub n: usize,
    pub eigenvalues: Vec<f64>,
    /// `c_k = (1/n) sum_i z_i w^{-ik}`; `c_0` is the centroid.
    pub modal_coeffs: Vec<Point>,
}

/// Direct O(n^2) DFT of the vertex list.
pub fn decompose(poly: &Polygon) -> SpectralDecomposition {
    let z = poly.vertices();
    let n = z.len();
    let modal_coeffs = (0..n)
        .map(|k| {
            let sum: Point = z
                .iter()
                .enumerate()
                .map(|(i, &zi)| zi * root_of_unity(i * k, n).conj())
                .sum();
            sum / n as f64
        })
        .collect();
    SpectralDecomposition {
        n,
        eigenvalues: eigenvalues(n).expect("polygons have n >= 3"),
        modal_coeffs,
    }
}

impl SpectralDecomposition {
    pub fn centroid(&self) -> Point {
        self.modal_coeffs[0]
    }

    /// `|c_1| + |c_{n-1}|`, the size of the two slowest (tied) modes.
    pub fn leading_magnitude(&self) -> f64 {
        self.modal_coeffs[1].norm() + self.modal_coeffs[self.n - 1].norm()
    }

    /// Slowest nonzero decay rate, `cos(2 pi / n) - 1`.
    pub fn leading_eigenvalue(&self) -> f64 {
        self.eigenvalues[1]
    }

    /// Inverse DFT.
    pub fn reconstruct(&self) -> Vec<Point> {
        self.closed_form_vertices(0.0)
    }

    /// `z_i(t) = sum_k c_k e^{lambda_k t} w^{ik}`.
    pub fn closed_form_vertices(&self, t: f64) -> Vec<Point> {
        let n = self.n;
        let scaled: Vec<Point> = self
            .modal_coeffs
            .iter()
            .zip(&self.eigenvalues)
            .map(|(&c, &lambda)| c * (lambda * t).exp())
            .collect();
        (0..n)
            .map(|i| {
                scaled
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| c * root_of_unity(i * k, n))
                    .sum()
            })
            .collect()
    }

    /// The exact state of the linear flow at time `t`.
    ///
    /// Fails once the vertices have collapsed onto each other in floating
    /// point, which happens for very large `t`.
    pub fn closed_form_state(&self, t: f64) -> Result<Polygon, GeometryError> {
        Polygon::new(self.closed_form_vertices(t))
    }

    /// The ellipse traced by the two slowest modes, normalised to a unit
    /// semi-major axis and centred at the origin.
    pub fn limit_ellipse(&self) -> Result<EllipseParams, SpectralError> {
        let (c_fwd, c_back) = (self.modal_coeffs[1], self.modal_coeffs[self.n - 1]);
        let scale: f64 = self.modal_coeffs[1..].iter().map(|c| c.norm()).sum();
        let sum = c_fwd.norm() + c_back.norm();
        if sum <= 1e-12 * scale || sum == 0.0 {
            return Err(SpectralError::DegenerateLeadingMode);
        }
        // c_fwd w^i + c_back w^{-i} = e^{j phi} ((A+B) cos s + j (A-B) sin s)
        // with phi = (arg c_fwd + arg c_back) / 2
        let orientation = (0.5 * (c_fwd.arg() + c_back.arg())).rem_euclid(PI);
        Ok(EllipseParams {
            center: Point::new(0.0, 0.0),
            semi_major: 1.0,
            semi_minor: (c_fwd.norm() - c_back.norm()).abs() / sum,
            orientation,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseParams {
    pub center: Point,
    pub semi_major: f64,
    pub semi_minor: f64,
    /// Angle of the major axis, in `[0, pi)`.
    pub orientation: f64,
}

impl EllipseParams {
    pub fn is_flat(&self) -> bool {
        self.semi_minor <= FLAT_ELLIPSE_RATIO * self.semi_major
    }

    /// Point at parameter `s` on the ellipse boundary.
    pub fn point_at(&self, s: f64) -> Point {
        let local = Point::new(self.semi_major * s.cos(), self.semi_minor * s.sin());
        self.center + local * Point::from_polar(1.0, self.orientation)
    }
}

/// Vertices with the centroid removed and the slowest-mode magnitude scaled
/// to one. Under the linear flow this removes the uniform `e^{lambda_2 t}`
/// collapse, leaving a shape with a finite limit.
pub fn normalized_shape(poly: &Polygon) -> Option<Vec<Point>> {
    let decomp = decompose(poly);
    let scale = decomp.leading_magnitude();
    if scale == 0.0 {
        return None;
    }
    let c = decomp.centroid();
    Some(poly.vertices().iter().map(|&z| (z - c) / scale).collect())
}

/// RMS misfit between the polygon's normalised shape and an ellipse.
///
/// For a proper ellipse each vertex contributes the algebraic distance
/// `|(x/a)^2 + (y/b)^2 - 1|` in the ellipse frame. A flat ellipse is a
/// segment, and vertices then contribute their distance from its line.
/// Returns infinity if the polygon has no slowest-mode content to normalise by.
pub fn ellipse_residual(poly: &Polygon, ellipse: &EllipseParams) -> f64 {
    let Some(shape) = normalized_shape(poly) else {
        return f64::INFINITY;
    };
    let unrotate = Point::from_polar(1.0, -ellipse.orientation);
    let flat = ellipse.is_flat();
    let sum_sq: f64 = shape
        .iter()
        .map(|&w| {
            let local = (w - ellipse.center) * unrotate;
            let r = if flat {
                local.im
            } else {
                let (x, y) = (local.re / ellipse.semi_major, local.im / ellipse.semi_minor);
                x * x + y * y - 1.0
            };
            r * r
        })
        .sum();
    (sum_sq / shape.len() as f64).sqrt()
}
