//! The randomized invariant suite behind `polyflow validate`.
//!
//! Ensemble members run in parallel but each draws from its own seeded
//! stream and results are gathered by index, so the report depends only on
//! `(ensemble_size, seed)`.
//!
//! Every check reports a margin: tolerance minus error, or the raw
//! invariant quantity, so larger is safer and a negative margin is a
//! violation.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    check_area_monotone, check_convexity_preservation, check_perimeter_monotone,
    check_star_preservation, ellipse_convergence_series, normalized_time,
    perimeter_difference_quotient, perimeter_rate, CheckReport,
};
use crate::flows::{bisector_velocity, BisectorSpeed, FlowSpec, VelocityField};
use crate::geometry::{Point, Polygon};
use crate::io::generate::{generate_with, random_cloud, GeneratorSpec};
use crate::io::rng::Rng;
use crate::reproduce::{scenarios, Figure};
use crate::simulate::{detect_first, run, Event, SimConfig, Termination, Trajectory};
use crate::spectral::{decompose, eigenvalues};

pub const CLOSED_FORM_TOL: f64 = 1e-6;
pub const CENTROID_TOL: f64 = 1e-9;
pub const COLLINEAR_TOL: f64 = 1e-9;
pub const EIGEN_TOL: f64 = 1e-10;
pub const ELLIPSE_FINAL_TOL: f64 = 1e-3;
pub const OPTIMALITY_SLACK: f64 = 1e-12;
/// Diameter at which the star and convex ensembles stop.
pub const ENSEMBLE_STOP_DIAMETER: f64 = 1e-4;
pub const FIELDS_PER_POLYGON: usize = 20;
/// Sample stride for the long ensemble runs (every 0.01 time units).
const ENSEMBLE_RECORD_EVERY: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationConfig {
    pub ensemble_size: usize,
    pub seed: u64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            ensemble_size: 100,
            seed: 1,
        }
    }
}

/// Aggregate of one named check across ensemble members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub members: usize,
    pub violations: usize,
    /// `ensemble#index` of the first failing member.
    pub first_failure: Option<String>,
    pub worst_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub seed: u64,
    pub ensemble_size: usize,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

impl ValidationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.name == name)
    }
}

/// One check on one ensemble member.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub check: &'static str,
    pub member: String,
    pub passed: bool,
    pub margin: f64,
}

impl Outcome {
    fn new(check: &'static str, member: &str, passed: bool, margin: f64) -> Self {
        Self {
            check,
            member: member.to_string(),
            passed,
            margin,
        }
    }

    fn from_report(check: &'static str, member: &str, report: &CheckReport) -> Self {
        Self::new(check, member, report.passed, report.worst_margin)
    }

    fn error(check: &'static str, member: &str) -> Self {
        Self::new(check, member, false, f64::NEG_INFINITY)
    }
}

fn member_rng(seed: u64, ensemble: u64, index: usize) -> Rng {
    Rng::stream(seed, (ensemble << 32) | index as u64)
}

fn linear_to_collapse(p: &Polygon) -> Option<Trajectory> {
    let cfg = SimConfig {
        t_end: 1e4,
        stop_diameter: ENSEMBLE_STOP_DIAMETER,
        record_every: ENSEMBLE_RECORD_EVERY,
        ..SimConfig::default()
    };
    run(p, &FlowSpec::Linear, &cfg).ok()
}

/// Largest `|centroid(t) - centroid(0)|` relative to the initial diameter.
pub fn centroid_drift(traj: &Trajectory) -> f64 {
    let c0 = traj.initial().centroid();
    let d0 = traj.initial().diameter();
    traj.states
        .iter()
        .map(|p| (p.centroid() - c0).norm())
        .fold(0.0, f64::max)
        / d0
}

fn centroid_outcome(member: &str, traj: &Trajectory) -> Outcome {
    let drift = centroid_drift(traj);
    Outcome::new(
        "centroid_drift",
        member,
        drift <= CENTROID_TOL,
        CENTROID_TOL - drift,
    )
}

/// Perimeter check; runs meant to reach the stop diameter must also have
/// collapsed, which arms the final-perimeter requirement.
fn perimeter_outcome(member: &str, traj: &Trajectory, must_collapse: bool) -> Outcome {
    match check_perimeter_monotone(traj) {
        Ok(r) => {
            let mut o = Outcome::from_report("perimeter_monotone", member, &r);
            if must_collapse && traj.termination != Termination::Collapsed {
                o.passed = false;
            }
            o
        }
        Err(_) => Outcome::error("perimeter_monotone", member),
    }
}

/// Eigenpair residual `|A v_k - lambda_k v_k|` for `n = 3..=64`, with `A`
/// applied as the explicit circulant matrix.
pub fn eigen_outcomes() -> Vec<Outcome> {
    (3..=64usize)
        .map(|n| {
            let lambda = eigenvalues(n).expect("n >= 3");
            let mut worst: f64 = 0.0;
            for (k, &l) in lambda.iter().enumerate() {
                let v: Vec<Point> = (0..n)
                    .map(|i| {
                        Point::from_polar(
                            1.0,
                            std::f64::consts::TAU * (i * k % n) as f64 / n as f64,
                        )
                    })
                    .collect();
                for i in 0..n {
                    let av: Point = v
                        .iter()
                        .enumerate()
                        .map(|(j, &vj)| match (j + n - i) % n {
                            0 => -vj,
                            d if d == 1 || d == n - 1 => 0.5 * vj,
                            _ => Point::new(0.0, 0.0),
                        })
                        .sum();
                    worst = worst.max((av - l * v[i]).norm());
                }
            }
            Outcome::new(
                "eigenvalues",
                &format!("n{n}"),
                worst <= EIGEN_TOL,
                EIGEN_TOL - worst,
            )
        })
        .collect()
}

/// RK4 (dt = 1e-3) against the exact solution on `[0, 5]` for a random
/// unit-diameter 12-gon.
pub fn closed_form_member(seed: u64, index: usize) -> Vec<Outcome> {
    let member = format!("closed_form#{index}");
    let mut rng = member_rng(seed, 1, index);
    let p = random_cloud(12, &mut rng).expect("12 random points are distinct");
    let cfg = SimConfig {
        t_end: 5.0,
        record_every: 50,
        ..SimConfig::default()
    };
    let Ok(traj) = run(&p, &FlowSpec::Linear, &cfg) else {
        return vec![Outcome::error("closed_form_agreement", &member)];
    };
    let decomp = decompose(&p);
    let err = traj
        .samples()
        .flat_map(|(t, q)| {
            decomp
                .closed_form_vertices(t)
                .into_iter()
                .zip(q.vertices().to_vec())
                .map(|(a, b)| (a.re - b.re).abs().max((a.im - b.im).abs()))
        })
        .fold(0.0, f64::max);
    vec![
        Outcome::new(
            "closed_form_agreement",
            &member,
            err <= CLOSED_FORM_TOL,
            CLOSED_FORM_TOL - err,
        ),
        perimeter_outcome(&member, &traj, false),
        centroid_outcome(&member, &traj),
    ]
}

/// Random counterclockwise star, `n` in 4..=12, run to collapse.
pub fn star_member(seed: u64, index: usize) -> Vec<Outcome> {
    let member = format!("star#{index}");
    let mut rng = member_rng(seed, 2, index);
    let n = rng.range_inclusive(4, 12);
    let spec = GeneratorSpec::RandomStar {
        n,
        r_min: 0.5,
        r_max: 1.5,
    };
    let Some(traj) = generate_with(&spec, &mut rng)
        .ok()
        .and_then(|p| linear_to_collapse(&p))
    else {
        return vec![Outcome::error("star_preservation", &member)];
    };
    let star = match check_star_preservation(&traj) {
        Ok(r) => Outcome::from_report("star_preservation", &member, &r),
        Err(_) => Outcome::error("star_preservation", &member),
    };
    vec![
        star,
        perimeter_outcome(&member, &traj, true),
        centroid_outcome(&member, &traj),
    ]
}

/// Strictly convex start, or with `flat` an extra vertex at the midpoint of
/// one side, run to collapse.
pub fn convex_member(seed: u64, index: usize, flat: bool) -> Vec<Outcome> {
    let member = format!("{}#{index}", if flat { "flat_convex" } else { "convex" });
    let mut rng = member_rng(seed, if flat { 4 } else { 3 }, index);
    let n = rng.range_inclusive(4, 12);
    let poly = generate_with(&GeneratorSpec::RandomConvex { n }, &mut rng)
        .ok()
        .and_then(|p| {
            if !flat {
                return Some(p);
            }
            let mut z = p.into_vertices();
            let k = rng.range_inclusive(0, z.len() - 1);
            let mid = 0.5 * (z[k] + z[(k + 1) % z.len()]);
            z.insert(k + 1, mid);
            Polygon::new(z).ok()
        });
    let Some(traj) = poly.and_then(|p| linear_to_collapse(&p)) else {
        return vec![Outcome::error("convexity_preservation", &member)];
    };
    let convex = match check_convexity_preservation(&traj) {
        Ok(r) => Outcome::from_report("convexity_preservation", &member, &r),
        Err(_) => Outcome::error("convexity_preservation", &member),
    };
    vec![
        convex,
        perimeter_outcome(&member, &traj, true),
        centroid_outcome(&member, &traj),
    ]
}

/// Random 8-gon to normalized time 6: final residual below 1e-3 and
/// non-increasing from normalized time 1.
pub fn ellipse_member(seed: u64, index: usize) -> Vec<Outcome> {
    let member = format!("ellipse#{index}");
    let mut rng = member_rng(seed, 5, index);
    let p = random_cloud(8, &mut rng).expect("8 random points are distinct");
    let t_end = 6.0 / normalized_time(8, 1.0);
    let cfg = SimConfig {
        t_end,
        record_every: 100,
        ..SimConfig::default()
    };
    let Some(traj) = run(&p, &FlowSpec::Linear, &cfg).ok() else {
        return vec![Outcome::error("ellipse_convergence", &member)];
    };
    let outcome = match ellipse_convergence_series(&traj) {
        Ok(series) => {
            let tail: Vec<f64> = series
                .iter()
                .filter(|(t, _)| normalized_time(8, *t) >= 1.0)
                .map(|&(_, r)| r)
                .collect();
            let monotone = tail.windows(2).all(|w| w[1] <= w[0]);
            let last = *tail.last().unwrap_or(&f64::INFINITY);
            Outcome::new(
                "ellipse_convergence",
                &member,
                monotone && last < ELLIPSE_FINAL_TOL,
                ELLIPSE_FINAL_TOL - last,
            )
        }
        Err(_) => Outcome::error("ellipse_convergence", &member),
    };
    vec![
        outcome,
        perimeter_outcome(&member, &traj, false),
        centroid_outcome(&member, &traj),
    ]
}

/// Bisector velocities against magnitude-matched random fields, and the
/// difference-quotient check of the perimeter rate.
pub fn optimality_member(seed: u64, index: usize) -> Vec<Outcome> {
    let member = format!("optimality#{index}");
    let mut rng = member_rng(seed, 6, index);
    let n = rng.range_inclusive(3, 12);
    let p = random_cloud(n, &mut rng).expect("random points are distinct");
    let mode = if index.is_multiple_of(2) {
        BisectorSpeed::Unit
    } else {
        BisectorSpeed::NormMatched
    };
    let Ok(u) = bisector_velocity(&p, mode, 1.0) else {
        return vec![Outcome::error("bisector_optimality", &member)];
    };
    let best = perimeter_rate(&p, &u).expect("distinct vertices");
    let mut margin = f64::INFINITY;
    for _ in 0..FIELDS_PER_POLYGON {
        let v = VelocityField(
            u.as_slice()
                .iter()
                .map(|ui| Point::from_polar(ui.norm(), rng.uniform(0.0, std::f64::consts::TAU)))
                .collect(),
        );
        let other = perimeter_rate(&p, &v).expect("distinct vertices");
        margin = margin.min(other - best);
    }
    let optimal = Outcome::new(
        "bisector_optimality",
        &member,
        margin >= -OPTIMALITY_SLACK,
        margin + OPTIMALITY_SLACK,
    );

    // forward differences along a generic field: error ~ C h. The linear
    // field is avoided since on triangles it is a pure contraction and the
    // perimeter is exactly linear in h.
    let w = VelocityField(
        (0..p.len())
            .map(|_| Point::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)))
            .collect(),
    );
    let rate = perimeter_rate(&p, &w).expect("distinct vertices");
    let err = |h: f64| (perimeter_difference_quotient(p.vertices(), w.as_slice(), h) - rate).abs();
    let errors = [err(1e-5), err(1e-6), err(1e-7)];
    let deviation = errors
        .windows(2)
        .map(|w| (w[0] / w[1] - 10.0).abs())
        .fold(0.0, f64::max);
    let first_order = Outcome::new(
        "perimeter_rate_first_order",
        &member,
        deviation <= 2.0,
        2.0 - deviation,
    );
    vec![optimal, first_order]
}

/// Collinear start: every sample stays on the initial line over `[0, 5]`.
pub fn collinear_member(seed: u64, index: usize) -> Vec<Outcome> {
    let member = format!("collinear#{index}");
    let mut rng = member_rng(seed, 7, index);
    let n = rng.range_inclusive(3, 12);
    let Ok(p) = generate_with(&GeneratorSpec::Collinear { n }, &mut rng) else {
        return vec![Outcome::error("collinearity", &member)];
    };
    let cfg = SimConfig {
        t_end: 5.0,
        record_every: 10,
        ..SimConfig::default()
    };
    let Ok(traj) = run(&p, &FlowSpec::Linear, &cfg) else {
        return vec![Outcome::error("collinearity", &member)];
    };
    let deviation = max_line_deviation(&traj);
    vec![
        Outcome::new(
            "collinearity",
            &member,
            deviation <= COLLINEAR_TOL,
            COLLINEAR_TOL - deviation,
        ),
        centroid_outcome(&member, &traj),
    ]
}

/// Largest distance of any sampled vertex from the line through the initial
/// centroid along the initial diameter, relative to that diameter.
pub fn max_line_deviation(traj: &Trajectory) -> f64 {
    let z = traj.initial().vertices();
    let (mut a, mut b, mut best) = (z[0], z[0], -1.0);
    for (i, &p) in z.iter().enumerate() {
        for &q in &z[i + 1..] {
            if (p - q).norm() > best {
                (a, b, best) = (p, q, (p - q).norm());
            }
        }
    }
    let dir = (b - a) / best;
    let c = traj.initial().centroid();
    traj.states
        .iter()
        .flat_map(|s| {
            s.vertices()
                .iter()
                .map(move |&w| ((w - c) * dir.conj()).im.abs())
        })
        .fold(0.0, f64::max)
        / best
}

/// The two shipped counterexamples still behave as counterexamples.
pub fn counterexample_outcomes() -> Vec<Outcome> {
    let area = scenarios(Figure::Fig8)[0].run().ok().map(|traj| {
        let simple = crate::geometry::is_simple(traj.initial().vertices());
        match check_area_monotone(&traj) {
            Ok(r) => {
                let t = r.first_violation_time.unwrap_or(f64::INFINITY);
                Outcome::new(
                    "counterexamples",
                    "boomerang",
                    simple && t <= 0.05,
                    0.05 - t,
                )
            }
            Err(_) => Outcome::error("counterexamples", "boomerang"),
        }
    });
    let embed = scenarios(Figure::Fig10)[0].run().ok().map(|traj| {
        let simple = crate::geometry::is_simple(traj.initial().vertices());
        let t = detect_first(&traj, Event::LosesSimplicity);
        Outcome::new(
            "counterexamples",
            "crescent",
            simple && t.is_some(),
            traj.final_time() - t.unwrap_or(f64::INFINITY),
        )
    });
    vec![
        area.unwrap_or_else(|| Outcome::error("counterexamples", "boomerang")),
        embed.unwrap_or_else(|| Outcome::error("counterexamples", "crescent")),
    ]
}

fn fan_out<F>(count: usize, f: F) -> Vec<Outcome>
where
    F: Fn(usize) -> Vec<Outcome> + Sync + Send,
{
    (0..count)
        .into_par_iter()
        .map(f)
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Groups outcomes by check, keeping first-appearance order.
pub fn aggregate(outcomes: &[Outcome]) -> Vec<SuiteReport> {
    let mut order: Vec<&'static str> = Vec::new();
    let mut groups: BTreeMap<&'static str, Vec<&Outcome>> = BTreeMap::new();
    for o in outcomes {
        if !groups.contains_key(o.check) {
            order.push(o.check);
        }
        groups.entry(o.check).or_default().push(o);
    }
    order
        .into_iter()
        .map(|name| {
            let members = &groups[name];
            let violations = members.iter().filter(|o| !o.passed).count();
            let worst = members
                .iter()
                .map(|o| o.margin)
                .fold(f64::INFINITY, f64::min);
            SuiteReport {
                name: name.to_string(),
                passed: violations == 0,
                members: members.len(),
                violations,
                first_failure: members.iter().find(|o| !o.passed).map(|o| o.member.clone()),
                // JSON has no infinities
                worst_margin: if worst.is_finite() { worst } else { f64::MIN },
            }
        })
        .collect()
}

/// Ensemble sizes derived from `ensemble_size` (N): N stars, N strictly
/// convex starts, N/5 flat-vertex starts, N/5 closed-form and ellipse
/// members, N/2 optimality polygons and N/10 collinear starts (each at
/// least one).
pub fn run_validation(cfg: &ValidationConfig) -> ValidationReport {
    let n = cfg.ensemble_size.max(1);
    let fifth = (n / 5).max(1);
    let seed = cfg.seed;

    let mut outcomes = eigen_outcomes();
    outcomes.extend(fan_out(fifth, |i| closed_form_member(seed, i)));
    outcomes.extend(fan_out(n, |i| star_member(seed, i)));
    outcomes.extend(fan_out(n, |i| convex_member(seed, i, false)));
    outcomes.extend(fan_out(fifth, |i| convex_member(seed, i, true)));
    outcomes.extend(fan_out(fifth, |i| ellipse_member(seed, i)));
    outcomes.extend(fan_out((n / 2).max(1), |i| optimality_member(seed, i)));
    outcomes.extend(fan_out((n / 10).max(1), |i| collinear_member(seed, i)));
    outcomes.extend(counterexample_outcomes());

    let suites = aggregate(&outcomes);
    ValidationReport {
        seed,
        ensemble_size: n,
        passed: suites.iter().all(|s| s.passed),
        suites,
    }
}
