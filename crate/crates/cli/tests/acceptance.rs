//! Acceptance gate: one `[PASS]`/`[FAIL]` line per criterion, exit status 1
//! if any criterion fails.
//!
//! Reference values come from oracles written here (dense eigensolver,
//! shoelace area, brute-force simplicity, explicit DFT), not from the
//! library routines under test.

use std::f64::consts::TAU;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use polyflow::analysis::{
    check_area_monotone, ellipse_convergence_series, normalized_time, perimeter_rate,
};
use polyflow::flows::{bisector_velocity, BisectorSpeed, VelocityField};
use polyflow::io::generate::{generate_with, random_cloud, GeneratorSpec};
use polyflow::io::rng::Rng;
use polyflow::reproduce::{scenarios, Figure};
use polyflow::simulate::{detect_first, Event};
use polyflow::spectral::eigenvalues;
use polyflow::{run, FlowSpec, Point, Polygon, SimConfig, Termination, Trajectory};

const SEED: u64 = 1;
const EIGEN_TOL: f64 = 1e-10;
const CLOSED_FORM_TOL: f64 = 1e-6;
const MONOTONE_SLACK: f64 = 1e-12;
const FINAL_PERIMETER_RATIO: f64 = 1e-3;
const ELLIPSE_TOL: f64 = 1e-3;
const OPTIMALITY_SLACK: f64 = 1e-12;
const AREA_VIOLATION_BY: f64 = 0.05;
const CENTROID_TOL: f64 = 1e-9;
const COLLINEAR_TOL: f64 = 1e-9;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

fn rng(ensemble: u64, index: usize) -> Rng {
    Rng::stream(SEED, (1000 + ensemble) << 32 | index as u64)
}

// ---- oracles ----

fn cross(a: Point, b: Point) -> f64 {
    a.re * b.im - a.im * b.re
}

fn centroid(z: &[Point]) -> Point {
    z.iter().sum::<Point>() / z.len() as f64
}

fn perimeter(z: &[Point]) -> f64 {
    (0..z.len())
        .map(|i| (z[(i + 1) % z.len()] - z[i]).norm())
        .sum()
}

fn shoelace(z: &[Point]) -> f64 {
    0.5 * (0..z.len())
        .map(|i| cross(z[i], z[(i + 1) % z.len()]))
        .sum::<f64>()
}

fn diameter(z: &[Point]) -> f64 {
    let mut d: f64 = 0.0;
    for a in z {
        for b in z {
            d = d.max((a - b).norm());
        }
    }
    d
}

/// Every vertex strictly counterclockwise of the previous one about the
/// centroid, winding once.
fn is_ccw_star(z: &[Point]) -> bool {
    let c = centroid(z);
    let n = z.len();
    let mut winding = 0.0;
    for i in 0..n {
        let (a, b) = (z[i] - c, z[(i + 1) % n] - c);
        if cross(a, b) <= 0.0 {
            return false;
        }
        winding += (b / a).arg();
    }
    (winding - TAU).abs() < 1e-6
}

/// Every turn strictly left, total turning one revolution.
fn is_strictly_convex_ccw(z: &[Point]) -> bool {
    let n = z.len();
    let mut turning = 0.0;
    for i in 0..n {
        let e0 = z[i] - z[(i + n - 1) % n];
        let e1 = z[(i + 1) % n] - z[i];
        if cross(e0, e1) <= 0.0 {
            return false;
        }
        turning += (e1 / e0).arg();
    }
    (turning - TAU).abs() < 1e-6
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    cross(b - a, c - a)
}

fn segments_cross(p1: Point, q1: Point, p2: Point, q2: Point) -> bool {
    let on = |a: Point, b: Point, c: Point| {
        orient(a, b, c) == 0.0
            && c.re >= a.re.min(b.re)
            && c.re <= a.re.max(b.re)
            && c.im >= a.im.min(b.im)
            && c.im <= a.im.max(b.im)
    };
    let (d1, d2) = (orient(p2, q2, p1), orient(p2, q2, q1));
    let (d3, d4) = (orient(p1, q1, p2), orient(p1, q1, q2));
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
        || on(p2, q2, p1)
        || on(p2, q2, q1)
        || on(p1, q1, p2)
        || on(p1, q1, q2)
}

/// Brute force over all non-adjacent side pairs.
fn is_simple(z: &[Point]) -> bool {
    let n = z.len();
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if !adjacent && segments_cross(z[i], z[(i + 1) % n], z[j], z[(j + 1) % n]) {
                return false;
            }
        }
    }
    true
}

fn circulant(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| match (j + n - i) % n {
        0 => -1.0,
        d if d == 1 || d == n - 1 => 0.5,
        _ => 0.0,
    })
}

/// Exact linear evolution `z(t) = V e^{Lt} V^T z(0)` from a dense
/// symmetric eigendecomposition.
struct LinearOracle {
    vectors: DMatrix<f64>,
    values: DVector<f64>,
    x0: DVector<f64>,
    y0: DVector<f64>,
}

impl LinearOracle {
    fn new(z: &[Point]) -> Self {
        let eig = circulant(z.len()).symmetric_eigen();
        let vt = eig.eigenvectors.transpose();
        let x = DVector::from_iterator(z.len(), z.iter().map(|p| p.re));
        let y = DVector::from_iterator(z.len(), z.iter().map(|p| p.im));
        Self {
            x0: &vt * x,
            y0: &vt * y,
            vectors: eig.eigenvectors,
            values: eig.eigenvalues,
        }
    }

    fn at(&self, t: f64) -> Vec<Point> {
        let decay = self.values.map(|l| (l * t).exp());
        let x = &self.vectors * self.x0.component_mul(&decay);
        let y = &self.vectors * self.y0.component_mul(&decay);
        x.iter()
            .zip(y.iter())
            .map(|(&a, &b)| Point::new(a, b))
            .collect()
    }
}

/// Non-elliptic part of the shape: largest distance from `z_i - c_0` to
/// `c_1 w^i + c_{n-1} w^{-i}`, relative to `|c_1| + |c_{n-1}|`.
fn modal_residual(z: &[Point]) -> f64 {
    let n = z.len();
    let coeff = |k: usize| {
        z.iter()
            .enumerate()
            .map(|(i, &p)| p * Point::from_polar(1.0, -TAU * (i * k % n) as f64 / n as f64))
            .sum::<Point>()
            / n as f64
    };
    let (c0, c1, cm) = (coeff(0), coeff(1), coeff(n - 1));
    let scale = c1.norm() + cm.norm();
    (0..n)
        .map(|i| {
            let w = Point::from_polar(1.0, TAU * i as f64 / n as f64);
            (z[i] - c0 - c1 * w - cm * w.conj()).norm() / scale
        })
        .fold(0.0, f64::max)
}

/// `dP/dt` summed over sides.
fn side_rate(z: &[Point], v: &[Point]) -> f64 {
    let n = z.len();
    (0..n)
        .map(|i| {
            let j = (i + 1) % n;
            let e = z[j] - z[i];
            (e.conj() * (v[j] - v[i])).re / e.norm()
        })
        .sum()
}

/// `(P(z + h v) - P(z)) / h`, with each side's change computed without
/// cancellation.
fn forward_difference(z: &[Point], v: &[Point], h: f64) -> f64 {
    let n = z.len();
    (0..n)
        .map(|i| {
            let j = (i + 1) % n;
            let (e, de) = (z[j] - z[i], v[j] - v[i]);
            (2.0 * h * (e.conj() * de).re + h * h * de.norm_sqr())
                / ((e + h * de).norm() + e.norm())
        })
        .sum::<f64>()
        / h
}

// ---- shared runs ----

struct Tracker {
    centroid_drift: f64,
    perimeter_violations: usize,
    perimeter_runs: usize,
}

impl Tracker {
    fn observe(&mut self, traj: &Trajectory, collapse_run: bool) {
        let z0 = traj.initial().vertices();
        let (c0, d0) = (centroid(z0), diameter(z0));
        for s in &traj.states {
            self.centroid_drift = self
                .centroid_drift
                .max((centroid(s.vertices()) - c0).norm() / d0);
        }
        let p: Vec<f64> = traj
            .states
            .iter()
            .map(|s| perimeter(s.vertices()))
            .collect();
        // strict decrease, allowing round-off of 1e-12 P upward
        let decreasing = p
            .windows(2)
            .all(|w| w[1] != w[0] && w[1] < w[0] + MONOTONE_SLACK * w[0]);
        let collapsed = !collapse_run
            || (traj.termination == Termination::Collapsed
                && p[p.len() - 1] < FINAL_PERIMETER_RATIO * p[0]);
        self.perimeter_runs += 1;
        if !(decreasing && collapsed) {
            self.perimeter_violations += 1;
        }
    }
}

fn collapse(p: &Polygon) -> Trajectory {
    let cfg = SimConfig {
        t_end: 1e4,
        stop_diameter: 1e-4,
        record_every: 10,
        ..SimConfig::default()
    };
    run(p, &FlowSpec::Linear, &cfg).expect("linear run")
}

fn c1_eigenvalues() -> Verdict {
    let mut worst: f64 = 0.0;
    for n in 3..=64 {
        let mut numeric: Vec<f64> = circulant(n)
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        let mut exact = eigenvalues(n).expect("n >= 3");
        numeric.sort_by(f64::total_cmp);
        exact.sort_by(f64::total_cmp);
        for (a, b) in numeric.iter().zip(&exact) {
            worst = worst.max((a - b).abs());
        }
    }
    verdict(
        worst <= EIGEN_TOL,
        format!("max |lambda - numeric| = {worst:.2e} for n = 3..64"),
    )
}

fn c2_closed_form(tracker: &mut Tracker) -> Verdict {
    let mut worst: f64 = 0.0;
    let cfg = SimConfig {
        t_end: 5.0,
        record_every: 50,
        ..SimConfig::default()
    };
    for i in 0..20 {
        let p = random_cloud(12, &mut rng(2, i)).expect("distinct points");
        let oracle = LinearOracle::new(p.vertices());
        let traj = run(&p, &FlowSpec::Linear, &cfg).expect("linear run");
        for (t, q) in traj.samples() {
            for (a, b) in oracle.at(t).iter().zip(q.vertices()) {
                worst = worst.max((a.re - b.re).abs()).max((a.im - b.im).abs());
            }
        }
        tracker.observe(&traj, false);
    }
    verdict(
        worst <= CLOSED_FORM_TOL,
        format!("20 random 12-gons, max coordinate error {worst:.2e} on [0, 5]"),
    )
}

fn c3_star(tracker: &mut Tracker) -> Verdict {
    let mut violations = 0;
    let mut samples = 0;
    for i in 0..100 {
        let mut r = rng(3, i);
        let n = r.range_inclusive(4, 12);
        let spec = GeneratorSpec::RandomStar {
            n,
            r_min: 0.5,
            r_max: 1.5,
        };
        let p = generate_with(&spec, &mut r).expect("star");
        let traj = collapse(&p);
        samples += traj.len();
        if !traj.states.iter().all(|s| is_ccw_star(s.vertices())) {
            violations += 1;
        }
        tracker.observe(&traj, true);
    }
    verdict(
        violations == 0,
        format!("100 stars to diameter 1e-4, {samples} samples, {violations} violations"),
    )
}

fn c4_convex(tracker: &mut Tracker) -> Verdict {
    let mut violations = 0;
    for i in 0..100 {
        let mut r = rng(4, i);
        let n = r.range_inclusive(4, 12);
        let p = generate_with(&GeneratorSpec::RandomConvex { n }, &mut r).expect("convex");
        let traj = collapse(&p);
        if !traj
            .states
            .iter()
            .all(|s| is_strictly_convex_ccw(s.vertices()))
        {
            violations += 1;
        }
        tracker.observe(&traj, true);
    }
    let mut flat_violations = 0;
    for i in 0..20 {
        let mut r = rng(5, i);
        let n = r.range_inclusive(4, 12);
        let mut z = generate_with(&GeneratorSpec::RandomConvex { n }, &mut r)
            .expect("convex")
            .into_vertices();
        let k = r.range_inclusive(0, n - 1);
        let mid = 0.5 * (z[k] + z[(k + 1) % n]);
        z.insert(k + 1, mid);
        let (e0, e1) = (mid - z[k], z[(k + 2) % (n + 1)] - mid);
        assert!(cross(e0, e1).abs() <= 1e-12 * e0.norm() * e1.norm());
        let traj = collapse(&Polygon::new(z).expect("distinct vertices"));
        if !traj.states[1..]
            .iter()
            .all(|s| is_strictly_convex_ccw(s.vertices()))
        {
            flat_violations += 1;
        }
        tracker.observe(&traj, true);
    }
    verdict(
        violations + flat_violations == 0,
        format!(
            "100 strictly convex starts: {violations} violations; 20 flat-vertex starts: {flat_violations} violations"
        ),
    )
}

fn c6_ellipse(tracker: &mut Tracker) -> Verdict {
    let t_end = 6.0 / normalized_time(8, 1.0);
    let cfg = SimConfig {
        t_end,
        record_every: 100,
        ..SimConfig::default()
    };
    let mut worst_final: f64 = 0.0;
    let mut non_monotone = 0;
    for i in 0..20 {
        let p = random_cloud(8, &mut rng(6, i)).expect("distinct points");
        let traj = run(&p, &FlowSpec::Linear, &cfg).expect("linear run");
        worst_final = worst_final.max(modal_residual(traj.last().vertices()));
        let series = ellipse_convergence_series(&traj).expect("ellipse series");
        worst_final = worst_final.max(series.last().expect("samples").1);
        let tail: Vec<f64> = series
            .iter()
            .filter(|(t, _)| normalized_time(8, *t) >= 1.0)
            .map(|&(_, r)| r)
            .collect();
        if !tail.windows(2).all(|w| w[1] <= w[0]) {
            non_monotone += 1;
        }
        tracker.observe(&traj, false);
    }
    verdict(
        worst_final < ELLIPSE_TOL && non_monotone == 0,
        format!(
            "20 random 8-gons, residual at tau = 6 at most {worst_final:.2e}, {non_monotone} non-monotone"
        ),
    )
}

fn c7_optimality() -> Verdict {
    let mut worst_gap = f64::INFINITY;
    let mut rate_err: f64 = 0.0;
    let mut worst_ratio_dev: f64 = 0.0;
    for i in 0..50 {
        let mut r = rng(7, i);
        let n = r.range_inclusive(3, 12);
        let p = random_cloud(n, &mut r).expect("distinct points");
        let z = p.vertices();
        let mode = if i % 2 == 0 {
            BisectorSpeed::Unit
        } else {
            BisectorSpeed::NormMatched
        };
        let u = bisector_velocity(&p, mode, 1.0).expect("bisector field");
        let best = perimeter_rate(&p, &u).expect("rate");
        rate_err = rate_err.max((best - side_rate(z, u.as_slice())).abs());
        for _ in 0..20 {
            let v: Vec<Point> = u
                .as_slice()
                .iter()
                .map(|ui| Point::from_polar(ui.norm(), r.uniform(0.0, TAU)))
                .collect();
            worst_gap = worst_gap.min(side_rate(z, &v) - best);
        }
        let w: Vec<Point> = (0..n)
            .map(|_| Point::new(r.uniform(-1.0, 1.0), r.uniform(-1.0, 1.0)))
            .collect();
        let rate = perimeter_rate(&p, &VelocityField(w.clone())).expect("rate");
        let e: Vec<f64> = [1e-5, 1e-6, 1e-7]
            .iter()
            .map(|&h| (forward_difference(z, &w, h) - rate).abs())
            .collect();
        for pair in e.windows(2) {
            worst_ratio_dev = worst_ratio_dev.max((pair[0] / pair[1] - 10.0).abs());
        }
    }
    verdict(
        worst_gap >= -OPTIMALITY_SLACK && rate_err < 1e-12 && worst_ratio_dev <= 2.0,
        format!(
            "min(rate(v) - rate(bisector)) = {worst_gap:.3e} over 50x20 fields; \
             difference-quotient error ratio per decade 10 +- {worst_ratio_dev:.2e}"
        ),
    )
}

fn c8_counterexamples() -> Verdict {
    let boomerang = scenarios(Figure::Fig8)[0].run().expect("fig8 run");
    let report = check_area_monotone(&boomerang).expect("area check applies");
    let areas: Vec<f64> = boomerang
        .states
        .iter()
        .map(|s| shoelace(s.vertices()).abs())
        .collect();
    let oracle_first = areas
        .windows(2)
        .position(|w| w[1] > w[0])
        .map(|k| boomerang.times[k + 1]);
    let area_ok = is_simple(boomerang.initial().vertices())
        && !report.passed
        && report
            .first_violation_time
            .is_some_and(|t| t <= AREA_VIOLATION_BY)
        && oracle_first.is_some_and(|t| t <= AREA_VIOLATION_BY);

    let crescent = scenarios(Figure::Fig10)[0].run().expect("fig10 run");
    let lost = detect_first(&crescent, Event::LosesSimplicity);
    let oracle_lost = crescent
        .samples()
        .find(|(_, s)| !is_simple(s.vertices()))
        .map(|(t, _)| t);
    let embed_ok =
        is_simple(crescent.initial().vertices()) && lost.is_some() && lost == oracle_lost;
    verdict(
        area_ok && embed_ok,
        format!(
            "boomerang area first grows at t = {:?}; crescent self-intersects at t = {:?}",
            report.first_violation_time, lost
        ),
    )
}

fn c10_collinear(tracker: &mut Tracker) -> Verdict {
    let cfg = SimConfig {
        t_end: 5.0,
        record_every: 10,
        ..SimConfig::default()
    };
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        let mut r = rng(10, i);
        let n = r.range_inclusive(3, 12);
        let p = generate_with(&GeneratorSpec::Collinear { n }, &mut r).expect("collinear");
        let z = p.vertices();
        let (mut a, mut b) = (z[0], z[1]);
        for &x in z {
            for &y in z {
                if (x - y).norm() > (a - b).norm() {
                    (a, b) = (x, y);
                }
            }
        }
        let d = (b - a).norm();
        let traj = run(&p, &FlowSpec::Linear, &cfg).expect("linear run");
        for s in &traj.states {
            for &w in s.vertices() {
                worst = worst.max(cross(b - a, w - a).abs() / d / d);
            }
        }
        tracker.observe(&traj, false);
    }
    verdict(
        worst <= COLLINEAR_TOL,
        format!("10 collinear starts on [0, 5], max deviation {worst:.2e} x diameter"),
    )
}

fn binary(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_polyflow"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "polyflow {args:?} failed");
    out.stdout
}

fn c11_determinism() -> Verdict {
    let validate_a = binary(&["validate", "--seed", "1"]);
    let validate_b = binary(&["validate", "--seed", "1"]);
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let svgs: Vec<Vec<u8>> = dirs
        .iter()
        .map(|d| {
            binary(&["reproduce", "fig7", "--out-dir", d.path().to_str().unwrap()]);
            std::fs::read(d.path().join("fig7.svg")).unwrap()
        })
        .collect();
    verdict(
        validate_a == validate_b && !validate_a.is_empty() && svgs[0] == svgs[1],
        format!(
            "validate report {} bytes, fig7 svg {} bytes, identical across runs",
            validate_a.len(),
            svgs[0].len()
        ),
    )
}

fn timed(budget: Duration, f: impl FnOnce() -> Verdict) -> Verdict {
    let start = Instant::now();
    let mut v = f();
    let elapsed = start.elapsed();
    if elapsed > budget {
        v.passed = false;
    }
    v.detail = format!(
        "{} ({:.2} s, budget {} s)",
        v.detail,
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    v
}

fn main() -> ExitCode {
    let mut tracker = Tracker {
        centroid_drift: 0.0,
        perimeter_violations: 0,
        perimeter_runs: 0,
    };
    let secs = Duration::from_secs;
    let mut results: Vec<(&str, Verdict)> = vec![
        ("1 eigenvalue exactness", timed(secs(5), c1_eigenvalues)),
        (
            "2 closed-form agreement",
            timed(secs(10), || c2_closed_form(&mut tracker)),
        ),
        (
            "3 star preservation",
            timed(secs(30), || c3_star(&mut tracker)),
        ),
        (
            "4 convexity preservation",
            timed(secs(30), || c4_convex(&mut tracker)),
        ),
    ];
    let c6 = timed(secs(30), || c6_ellipse(&mut tracker));
    let c10 = timed(secs(10), || c10_collinear(&mut tracker));
    results.push((
        "5 perimeter decrease",
        verdict(
            tracker.perimeter_violations == 0,
            format!(
                "{} linear runs, {} violations",
                tracker.perimeter_runs, tracker.perimeter_violations
            ),
        ),
    ));
    results.push(("6 elliptical limit", c6));
    results.push(("7 bisector optimality", timed(secs(10), c7_optimality)));
    results.push(("8 counterexamples", timed(secs(10), c8_counterexamples)));
    results.push((
        "9 centroid conservation",
        verdict(
            tracker.centroid_drift <= CENTROID_TOL,
            format!(
                "max drift {:.2e} x diameter over {} linear runs",
                tracker.centroid_drift, tracker.perimeter_runs
            ),
        ),
    ));
    results.push(("10 collinearity invariance", c10));
    results.push(("11 determinism", timed(secs(120), c11_determinism)));

    let mut all = true;
    for (name, v) in &results {
        println!(
            "[{}] {name}: {}",
            if v.passed { "PASS" } else { "FAIL" },
            v.detail
        );
        all &= v.passed;
    }
    let passed = results.iter().filter(|(_, v)| v.passed).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
