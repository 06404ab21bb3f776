use super::{diameter_of, GeometryError, Point, DEGENERACY_TOL};

/// `Im{conj(u) * v}`, the z-component of the planar cross product.
#[inline]
pub fn cross(u: Point, v: Point) -> f64 {
    (u.conj() * v).im
}

/// Twice the signed area of triangle `abc`; positive when `a, b, c` turn
/// counterclockwise.
#[inline]
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    cross(b - a, c - a)
}

/// `F = Im{conj(a - b) (c - b)} = r1 r2 sin(alpha)`, where `alpha` is the
/// counterclockwise angle at `b` from `b->a` to `b->c`.
///
/// Positive for `alpha` in `(0, pi)`, negative for `(pi, 2pi)`, zero exactly
/// when the points are collinear (or coincide).
#[inline]
pub fn star_function(a: Point, b: Point, c: Point) -> f64 {
    ((a - b).conj() * (c - b)).im
}

/// `H = Im{(prev - v) conj(next - v)} = rho1 rho2 sin(beta)`, with `beta`
/// the counterclockwise angle at `v` from side `v->next` to side `v->prev`.
///
/// For a counterclockwise polygon `beta` is the internal angle, so `H > 0`
/// at convex vertices and `H < 0` at reflex ones. Algebraically this is
/// `-star_function(prev, v, next)`.
#[inline]
pub fn convex_function(prev: Point, v: Point, next: Point) -> f64 {
    ((prev - v) * (next - v).conj()).im
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circumcircle {
    pub center: Point,
    pub radius: f64,
}

/// The unique circle through three non-collinear points.
///
/// Returns [`GeometryError::Collinear`] when `|F| <= tol * scale^2`, which
/// callers treat as zero curvature.
pub fn circumcircle(a: Point, b: Point, c: Point) -> Result<Circumcircle, GeometryError> {
    let scale = diameter_of(&[a, b, c]);
    let f = star_function(a, b, c);
    if scale == 0.0 || f.abs() <= DEGENERACY_TOL * scale * scale {
        return Err(GeometryError::Collinear);
    }
    // Intersect the perpendicular bisectors with b moved to the origin.
    let (u, v) = (a - b, c - b);
    let d = 2.0 * cross(u, v);
    let (uu, vv) = (u.norm_sqr(), v.norm_sqr());
    let offset = Point::new(v.im * uu - u.im * vv, u.re * vv - v.re * uu) / d;
    let center = b + offset;
    let radius = ((center - a).norm() + offset.norm() + (center - c).norm()) / 3.0;
    Ok(Circumcircle { center, radius })
}

fn on_segment(p: Point, q: Point, r: Point, eps: f64) -> bool {
    r.re >= p.re.min(q.re) - eps
        && r.re <= p.re.max(q.re) + eps
        && r.im >= p.im.min(q.im) - eps
        && r.im <= p.im.max(q.im) + eps
}

fn sign(x: f64, tol: f64) -> i8 {
    if x > tol {
        1
    } else if x < -tol {
        -1
    } else {
        0
    }
}

/// Closed-segment intersection test. `scale` sets the tolerance: orientation
/// values within `1e-12 scale^2` count as collinear, so touching counts as
/// intersecting.
pub fn segments_intersect(p1: Point, q1: Point, p2: Point, q2: Point, scale: f64) -> bool {
    let tol = DEGENERACY_TOL * scale * scale;
    let eps = DEGENERACY_TOL * scale;
    let o1 = sign(orient(p1, q1, p2), tol);
    let o2 = sign(orient(p1, q1, q2), tol);
    let o3 = sign(orient(p2, q2, p1), tol);
    let o4 = sign(orient(p2, q2, q1), tol);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && on_segment(p1, q1, p2, eps))
        || (o2 == 0 && on_segment(p1, q1, q2, eps))
        || (o3 == 0 && on_segment(p2, q2, p1, eps))
        || (o4 == 0 && on_segment(p2, q2, q1, eps))
}

/// True iff no two non-adjacent sides meet and adjacent sides share only
/// their common vertex. O(n^2) over side pairs.
pub fn is_simple(vertices: &[Point]) -> bool {
    let n = vertices.len();
    let scale = diameter_of(vertices);
    let tol = DEGENERACY_TOL * scale * scale;
    let side = |i: usize| (vertices[i], vertices[(i + 1) % n]);

    // Adjacent sides overlap only if they fold back onto each other.
    for i in 0..n {
        let (prev, v, next) = (
            vertices[(i + n - 1) % n],
            vertices[i],
            vertices[(i + 1) % n],
        );
        let (u, w) = (prev - v, next - v);
        if cross(u, w).abs() <= tol && (u.conj() * w).re > 0.0 {
            return false;
        }
    }
    for i in 0..n {
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (p1, q1) = side(i);
            let (p2, q2) = side(j);
            if segments_intersect(p1, q1, p2, q2, scale) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn close_rel(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
    }

    #[test]
    fn star_function_examples() {
        assert_eq!(star_function(p(1.0, 0.0), p(0.0, 0.0), p(0.0, 1.0)), 1.0);
        assert_eq!(star_function(p(0.0, 1.0), p(0.0, 0.0), p(1.0, 0.0)), -1.0);
        assert_eq!(star_function(p(0.0, 0.0), p(1.0, 1.0), p(3.0, 3.0)), 0.0);
        assert_eq!(star_function(p(2.0, 0.0), p(2.0, 0.0), p(0.0, 1.0)), 0.0);
    }

    #[test]
    fn convex_function_examples() {
        // CCW unit square at (1,0)
        assert_eq!(convex_function(p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0)), 1.0);
        assert_eq!(convex_function(p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)), 0.0);
        // reflex: Im{(-1)(1+i)} = -1
        assert_eq!(
            convex_function(p(0.0, 0.0), p(1.0, 0.0), p(2.0, -1.0)),
            -1.0
        );
    }

    #[test]
    fn circumcircle_examples() {
        let c = circumcircle(p(1.0, 0.0), p(0.0, 1.0), p(-1.0, 0.0)).unwrap();
        assert!(c.center.norm() < 1e-15);
        assert!((c.radius - 1.0).abs() < 1e-15);

        assert_eq!(
            circumcircle(p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)),
            Err(GeometryError::Collinear)
        );

        let c = circumcircle(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)).unwrap();
        assert!((c.center - p(0.5, 0.5)).norm() < 1e-15);
        assert!((c.radius - 2f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn simple_examples() {
        let square = [p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)];
        assert!(is_simple(&square));
        let bowtie = [p(0.0, 0.0), p(1.0, 1.0), p(1.0, 0.0), p(0.0, 1.0)];
        assert!(!is_simple(&bowtie));
        // flat triangle folds back on itself
        assert!(!is_simple(&[p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)]));
        // a vertex touching a non-adjacent side
        let touch = [
            p(0.0, 0.0),
            p(2.0, 0.0),
            p(2.0, 2.0),
            p(1.0, 0.0),
            p(0.0, 2.0),
        ];
        assert!(!is_simple(&touch));
        // a flat vertex on a straight side is still simple
        let mid = [
            p(0.0, 0.0),
            p(0.5, 0.0),
            p(1.0, 0.0),
            p(1.0, 1.0),
            p(0.0, 1.0),
        ];
        assert!(is_simple(&mid));
    }

    #[test]
    fn boomerang_with_clustered_vertices_is_simple() {
        // dense outer arms, two long inner sides meeting at a reflex vertex
        let mut v: Vec<Point> = (0..10)
            .map(|k| p(0.0, -1.0) + p(2.0, 2.0) * (k as f64 / 10.0))
            .collect();
        v.push(p(2.0, 1.0));
        v.push(p(0.0, 0.2));
        v.extend((0..10).map(|k| p(-2.0, 1.0) + p(2.0, -2.0) * (k as f64 / 10.0)));
        assert!(is_simple(&v));
        // same outline with the reflex vertex dragged across the left arm
        v[11] = p(-3.0, 0.0);
        assert!(!is_simple(&v));
    }

    fn point() -> impl Strategy<Value = Point> {
        (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(x, y)| p(x, y))
    }

    proptest! {
        #[test]
        fn star_function_matches_polar_form(a in point(), b in point(), c in point()) {
            let (u, v) = (a - b, c - b);
            prop_assume!(u.norm() > 1e-3 && v.norm() > 1e-3);
            let alpha = v.arg() - u.arg();
            let polar = u.norm() * v.norm() * alpha.sin();
            let f = star_function(a, b, c);
            // sin loses relative precision near alpha = 0, pi
            prop_assert!((f - polar).abs() <= 1e-12 * u.norm() * v.norm());
        }

        #[test]
        fn convex_function_is_negated_star_function(a in point(), b in point(), c in point()) {
            let h = convex_function(a, b, c);
            let f = star_function(a, b, c);
            prop_assert!(close_rel(h, -f, 1e-15) || (h == 0.0 && f == 0.0));
        }

        #[test]
        fn star_function_is_rigid_and_quadratic(
            a in point(), b in point(), c in point(),
            shift in point(), theta in -3.0..3.0f64, s in 0.1..10.0f64,
        ) {
            let f = star_function(a, b, c);
            let (u, v) = (a - b, c - b);
            // well-conditioned triangles only; rounding in the moved
            // coordinates is otherwise amplified by 1/sin(alpha)
            prop_assume!(u.norm() > 1.0 && v.norm() > 1.0);
            prop_assume!(f.abs() > 0.1 * u.norm() * v.norm());
            let rot = Point::from_polar(1.0, theta);
            let g = |z: Point| rot * z + shift;
            prop_assert!(close_rel(star_function(g(a), g(b), g(c)), f, 1e-12));
            prop_assert!(close_rel(star_function(a * s, b * s, c * s), f * s * s, 1e-12));
        }

        #[test]
        fn circumcircle_passes_through_inputs(a in point(), b in point(), c in point()) {
            if let Ok(circle) = circumcircle(a, b, c) {
                for z in [a, b, c] {
                    prop_assert!(close_rel((z - circle.center).norm(), circle.radius, 1e-9));
                }
            }
        }
    }
}
