use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::{convex_function, is_simple, star_function, Point, Polygon, DEGENERACY_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StarKind {
    CcwStar,
    CwStar,
    NotStar,
}

/// Star-formation classification about the vertex centroid.
#[derive(Debug, Clone, PartialEq)]
pub struct StarClass {
    pub kind: StarKind,
    /// `alpha_i`, the counterclockwise angle from `c->z_i` to `c->z_{i+1}`,
    /// in `(-pi, pi]`.
    pub angles: Vec<f64>,
    /// `r_i = |z_i - c|`.
    pub radii: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConvexityKind {
    StrictlyConvex,
    Convex,
    NotConvex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityClass {
    pub kind: ConvexityKind,
    /// `beta_i` in `[0, 2pi)`, measured for the counterclockwise traversal.
    pub internal_angles: Vec<f64>,
    /// `H_i` for the counterclockwise traversal, indexed like the input.
    pub h_values: Vec<f64>,
}

fn wrap_half_open(angle: f64) -> f64 {
    if angle <= -PI {
        angle + TAU
    } else {
        angle
    }
}

/// Counterclockwise angle at `v` from side `v->next` to side `v->prev`, in
/// `[0, 2pi)`.
pub fn internal_angle(prev: Point, v: Point, next: Point) -> f64 {
    let (u, w) = (prev - v, next - v);
    let beta = convex_function(prev, v, next).atan2((u * w.conj()).re);
    if beta < 0.0 {
        beta + TAU
    } else {
        beta
    }
}

/// Classifies the vertices as a counterclockwise star, a clockwise star, or
/// neither, about their centroid.
///
/// A star needs every radius positive and every `alpha_i` of one sign with
/// `sum(alpha_i) = +-2pi` (to 1e-9). Radii below `1e-12 * diameter` count as
/// zero.
pub fn classify_star(poly: &Polygon) -> StarClass {
    let z = poly.vertices();
    let n = z.len();
    let c = poly.centroid();
    let radii: Vec<f64> = z.iter().map(|&zi| (zi - c).norm()).collect();
    let angles: Vec<f64> = (0..n)
        .map(|i| {
            let (a, b) = (z[i] - c, z[(i + 1) % n] - c);
            let f = star_function(z[i], c, z[(i + 1) % n]);
            wrap_half_open(f.atan2((a.conj() * b).re))
        })
        .collect();

    let r_tol = DEGENERACY_TOL * poly.diameter();
    let total: f64 = angles.iter().sum();
    let kind = if radii.iter().any(|&r| r <= r_tol) {
        StarKind::NotStar
    } else if angles.iter().all(|&a| a > 0.0) && (total - TAU).abs() <= 1e-9 {
        StarKind::CcwStar
    } else if angles.iter().all(|&a| a < 0.0) && (total + TAU).abs() <= 1e-9 {
        StarKind::CwStar
    } else {
        StarKind::NotStar
    };
    StarClass {
        kind,
        angles,
        radii,
    }
}

/// Strict / non-strict convexity, independent of numbering direction.
///
/// A clockwise polygon is read backwards so the `H_i` are those of the
/// counterclockwise traversal. `|H_i| <= 1e-12 * diameter^2` counts as a
/// flat vertex.
pub fn classify_convexity(poly: &Polygon) -> ConvexityClass {
    let z = poly.vertices();
    let n = z.len();
    let ccw = poly.signed_area() >= 0.0;
    let neighbours = |i: usize| {
        let (prev, next) = (z[(i + n - 1) % n], z[(i + 1) % n]);
        if ccw {
            (prev, next)
        } else {
            (next, prev)
        }
    };
    let mut h_values = Vec::with_capacity(n);
    let mut internal_angles = Vec::with_capacity(n);
    for (i, &v) in z.iter().enumerate() {
        let (prev, next) = neighbours(i);
        h_values.push(convex_function(prev, v, next));
        internal_angles.push(internal_angle(prev, v, next));
    }

    let diameter = poly.diameter();
    let tol = DEGENERACY_TOL * diameter * diameter;
    let kind = if !is_simple(z) {
        ConvexityKind::NotConvex
    } else if h_values.iter().all(|&h| h > tol) {
        ConvexityKind::StrictlyConvex
    } else {
        let flat_ok = (0..n).all(|i| {
            let h = h_values[i];
            if h > tol {
                return true;
            }
            // a flat vertex must be a straight continuation (beta = pi)
            let (prev, next) = neighbours(i);
            h >= -tol && ((prev - z[i]).conj() * (next - z[i])).re < 0.0
        });
        if flat_ok && h_values.iter().any(|&h| h > tol) {
            ConvexityKind::Convex
        } else {
            ConvexityKind::NotConvex
        }
    };
    ConvexityClass {
        kind,
        internal_angles,
        h_values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(xy: &[[f64; 2]]) -> Polygon {
        Polygon::from_xy(xy).unwrap()
    }

    fn regular(n: usize) -> Polygon {
        Polygon::new(
            (0..n)
                .map(|k| Point::from_polar(1.0, TAU * k as f64 / n as f64))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn regular_polygons_are_stars() {
        for n in 3..12 {
            let class = classify_star(&regular(n));
            assert_eq!(class.kind, StarKind::CcwStar);
            for a in &class.angles {
                assert!((a - TAU / n as f64).abs() < 1e-12);
            }
            assert_eq!(classify_star(&regular(n).reversed()).kind, StarKind::CwStar);
        }
    }

    #[test]
    fn vertex_at_centroid_is_not_a_star() {
        let p = poly(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]);
        assert_eq!(p.centroid(), Point::new(0.0, 0.0));
        assert_eq!(classify_star(&p).kind, StarKind::NotStar);
    }

    #[test]
    fn winding_twice_is_not_a_star() {
        // pentagram order: every alpha is 4pi/5 > 0 but they sum to 4pi
        let z: Vec<Point> = (0..5)
            .map(|k| Point::from_polar(1.0, TAU * (2 * k) as f64 / 5.0))
            .collect();
        let class = classify_star(&Polygon::new(z).unwrap());
        assert!(class.angles.iter().all(|&a| a > 0.0));
        assert_eq!(class.kind, StarKind::NotStar);
    }

    #[test]
    fn square_convexity() {
        let sq = poly(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        let class = classify_convexity(&sq);
        assert_eq!(class.kind, ConvexityKind::StrictlyConvex);
        for b in &class.internal_angles {
            assert!((b - PI / 2.0).abs() < 1e-15);
        }
        let rev = classify_convexity(&sq.reversed());
        assert_eq!(rev.kind, ConvexityKind::StrictlyConvex);
        assert!(rev.h_values.iter().all(|&h| h > 0.0));
    }

    #[test]
    fn flat_vertex_is_convex_but_not_strict() {
        let p = poly(&[[0.0, 0.0], [0.5, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        let class = classify_convexity(&p);
        assert_eq!(class.kind, ConvexityKind::Convex);
        assert!((class.internal_angles[1] - PI).abs() < 1e-15);
    }

    #[test]
    fn reflex_and_crossing_are_not_convex() {
        let arrow = poly(&[[0.0, -1.0], [2.0, 1.0], [0.0, 0.2], [-2.0, 1.0]]);
        let class = classify_convexity(&arrow);
        assert_eq!(class.kind, ConvexityKind::NotConvex);
        // the reflex vertex is the only negative H
        let negatives: Vec<usize> = (0..4).filter(|&i| class.h_values[i] < 0.0).collect();
        assert_eq!(negatives, vec![2]);
        assert!(class.internal_angles[2] > PI);

        let bowtie = poly(&[[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(classify_convexity(&bowtie).kind, ConvexityKind::NotConvex);
    }

    #[test]
    fn internal_angles_sum_for_simple_polygons() {
        let arrow = poly(&[
            [0.0, -1.0],
            [2.0, 1.0],
            [0.0, 0.2],
            [-2.0, 1.0],
            [-1.0, -0.5],
        ]);
        assert!(is_simple(arrow.vertices()));
        let total: f64 = classify_convexity(&arrow).internal_angles.iter().sum();
        assert!((total - 3.0 * PI).abs() < 1e-9);
    }
}
