//! Invariant checks on trajectories and the perimeter rate.
//!
//! Each `check_*` replays a recorded [`Trajectory`] and returns a
//! [`CheckReport`]; a precondition that does not hold is an error rather
//! than a failed check.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flows::{bisector_directions, FlowError, VelocityField};
use crate::geometry::{
    classify_convexity, classify_star, is_simple, ConvexityKind, Point, Polygon, StarKind,
};
use crate::simulate::{Termination, Trajectory};
use crate::spectral::{decompose, ellipse_residual, SpectralError};

/// Relative slack allowed on a monotone sequence between samples.
pub const MONOTONE_SLACK: f64 = 1e-12;

/// A collapsed trajectory must end below this fraction of its initial
/// perimeter.
pub const COLLAPSED_PERIMETER_RATIO: f64 = 1e-3;

/// Absolute slack on the ellipse residual, which is dimensionless.
pub const RESIDUAL_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("the initial state is not a star formation")]
    PreconditionNotStar,
    #[error("the initial state is not convex")]
    PreconditionNotConvex,
    #[error("the sample at t = {0} is not simple")]
    NotSimple(f64),
    #[error("side {0} has zero length")]
    CoincidentVertices(usize),
    #[error("velocity field has {got} entries for {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("the trajectory has no samples")]
    EmptyTrajectory,
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

impl From<FlowError> for AnalysisError {
    fn from(e: FlowError) -> Self {
        match e {
            FlowError::CoincidentVertices(i) | FlowError::DegenerateTriple(i) => {
                AnalysisError::CoincidentVertices(i)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub passed: bool,
    pub first_violation_time: Option<f64>,
    pub worst_margin: f64,
    pub samples_checked: usize,
}

impl CheckReport {
    fn new(
        name: &str,
        first_violation_time: Option<f64>,
        worst_margin: f64,
        samples: usize,
    ) -> Self {
        Self {
            check_name: name.to_string(),
            passed: first_violation_time.is_none(),
            first_violation_time,
            worst_margin,
            samples_checked: samples,
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let first = match self.first_violation_time {
            Some(t) => format!("{t:.6e}"),
            None => "none".to_string(),
        };
        write!(
            f,
            "{:<24} {:<6} first_violation={:<13} worst_margin={:.6e} samples={}",
            self.check_name,
            if self.passed { "PASS" } else { "FAIL" },
            first,
            self.worst_margin,
            self.samples_checked
        )
    }
}

/// `dP/dt = -sum_i Re< unit(z_{i-1} - z_i) + unit(z_{i+1} - z_i), u_i >`,
/// the exact perimeter rate under instantaneous velocities `u`.
pub fn perimeter_rate(poly: &Polygon, vel: &VelocityField) -> Result<f64, AnalysisError> {
    if vel.len() != poly.len() {
        return Err(AnalysisError::LengthMismatch {
            expected: poly.len(),
            got: vel.len(),
        });
    }
    let d = bisector_directions(poly.vertices())?;
    Ok(-d
        .iter()
        .zip(vel.as_slice())
        .map(|(d, u)| (d.conj() * u).re)
        .sum::<f64>())
}

/// `(P(z + h v) - P(z)) / h`, with each side's length change computed
/// as `(|e + h dv|^2 - |e|^2) / (|e + h dv| + |e|)` so the difference
/// does not cancel. A forward-difference check on [`perimeter_rate`].
pub fn perimeter_difference_quotient(z: &[Point], v: &[Point], h: f64) -> f64 {
    let n = z.len();
    (0..n)
        .map(|i| {
            let j = (i + 1) % n;
            let e = z[j] - z[i];
            let de = v[j] - v[i];
            let moved = e + h * de;
            let num = 2.0 * h * (e.conj() * de).re + h * h * de.norm_sqr();
            num / (moved.norm() + e.norm()) / h
        })
        .sum()
}

/// Index of the first sample `k >= 1` where `values` fails to strictly
/// decrease, and the smallest relative decrease seen.
fn first_non_decrease(values: &[f64]) -> (Option<usize>, f64) {
    let mut first = None;
    let mut worst = f64::INFINITY;
    for k in 1..values.len() {
        let (prev, cur) = (values[k - 1], values[k]);
        let scale = prev.abs().max(f64::MIN_POSITIVE);
        worst = worst.min((prev - cur) / scale);
        let violated = cur >= prev + MONOTONE_SLACK * scale || cur == prev;
        if violated && first.is_none() {
            first = Some(k);
        }
    }
    (first, if worst.is_finite() { worst } else { 0.0 })
}

fn non_empty(traj: &Trajectory) -> Result<(), AnalysisError> {
    if traj.is_empty() {
        Err(AnalysisError::EmptyTrajectory)
    } else {
        Ok(())
    }
}

/// Strictly decreasing perimeter between samples, and for a collapsed run a
/// final perimeter below `1e-3` of the initial one. The margin is the
/// smallest relative decrease between consecutive samples.
pub fn check_perimeter_monotone(traj: &Trajectory) -> Result<CheckReport, AnalysisError> {
    non_empty(traj)?;
    let perimeters: Vec<f64> = traj.diagnostics.iter().map(|d| d.perimeter).collect();
    let (first, worst) = first_non_decrease(&perimeters);
    let mut violation = first.map(|k| traj.times[k]);
    if violation.is_none()
        && traj.termination == Termination::Collapsed
        && perimeters[perimeters.len() - 1] >= COLLAPSED_PERIMETER_RATIO * perimeters[0]
    {
        violation = Some(traj.final_time());
    }
    Ok(CheckReport::new(
        "perimeter_monotone",
        violation,
        worst,
        traj.len(),
    ))
}

/// Every sample keeps the initial star class. The margin is the smallest
/// `sign * F_i` about the centroid over all samples.
pub fn check_star_preservation(traj: &Trajectory) -> Result<CheckReport, AnalysisError> {
    non_empty(traj)?;
    let initial = classify_star(traj.initial()).kind;
    let sign = match initial {
        StarKind::CcwStar => 1.0,
        StarKind::CwStar => -1.0,
        StarKind::NotStar => return Err(AnalysisError::PreconditionNotStar),
    };
    let mut first = None;
    let mut worst = f64::INFINITY;
    for (k, (t, p)) in traj.samples().enumerate() {
        let margin = if sign > 0.0 {
            traj.diagnostics[k].min_f
        } else {
            // min of -F_i
            let z = p.vertices();
            let c = p.centroid();
            let n = z.len();
            (0..n)
                .map(|i| -crate::geometry::star_function(z[i], c, z[(i + 1) % n]))
                .fold(f64::INFINITY, f64::min)
        };
        worst = worst.min(margin);
        if first.is_none() && classify_star(p).kind != initial {
            first = Some(t);
        }
    }
    Ok(CheckReport::new(
        "star_preservation",
        first,
        worst,
        traj.len(),
    ))
}

/// Every sample after `t = 0` is strictly convex; the start may be merely
/// convex. The margin is the smallest counterclockwise-oriented `H_i` over
/// those samples.
pub fn check_convexity_preservation(traj: &Trajectory) -> Result<CheckReport, AnalysisError> {
    non_empty(traj)?;
    if classify_convexity(traj.initial()).kind == ConvexityKind::NotConvex {
        return Err(AnalysisError::PreconditionNotConvex);
    }
    let mut first = None;
    let mut worst = f64::INFINITY;
    let mut checked = 0;
    for (t, p) in traj.samples().filter(|(t, _)| *t > 0.0) {
        let class = classify_convexity(p);
        checked += 1;
        worst = worst.min(class.h_values.iter().copied().fold(f64::INFINITY, f64::min));
        if first.is_none() && class.kind != ConvexityKind::StrictlyConvex {
            first = Some(t);
        }
    }
    let worst = if worst.is_finite() { worst } else { 0.0 };
    Ok(CheckReport::new(
        "convexity_preservation",
        first,
        worst,
        checked,
    ))
}

/// `|signed area|` strictly decreases between samples. Only meaningful for
/// simple polygons, so any self-intersecting sample is an error.
pub fn check_area_monotone(traj: &Trajectory) -> Result<CheckReport, AnalysisError> {
    non_empty(traj)?;
    if let Some((t, _)) = traj.samples().find(|(_, p)| !is_simple(p.vertices())) {
        return Err(AnalysisError::NotSimple(t));
    }
    let areas: Vec<f64> = traj
        .diagnostics
        .iter()
        .map(|d| d.signed_area.abs())
        .collect();
    let (first, worst) = first_non_decrease(&areas);
    Ok(CheckReport::new(
        "area_monotone",
        first.map(|k| traj.times[k]),
        worst,
        traj.len(),
    ))
}

/// `tau = -lambda_2 t`, time measured in units of the slowest decay.
pub fn normalized_time(n: usize, t: f64) -> f64 {
    (1.0 - (std::f64::consts::TAU / n as f64).cos()) * t
}

/// `(t, residual)` per sample, against the limit ellipse of the initial
/// state.
pub fn ellipse_convergence_series(traj: &Trajectory) -> Result<Vec<(f64, f64)>, AnalysisError> {
    non_empty(traj)?;
    let ellipse = decompose(traj.initial()).limit_ellipse()?;
    Ok(traj
        .samples()
        .map(|(t, p)| (t, ellipse_residual(p, &ellipse)))
        .collect())
}

/// The ellipse residual does not increase once `tau >= tau_min`. The margin
/// is the final residual.
pub fn check_ellipse_convergence(
    traj: &Trajectory,
    tau_min: f64,
) -> Result<CheckReport, AnalysisError> {
    let series = ellipse_convergence_series(traj)?;
    let n = traj.initial().len();
    let tail: Vec<(f64, f64)> = series
        .into_iter()
        .filter(|(t, _)| normalized_time(n, *t) >= tau_min)
        .collect();
    let first = tail
        .windows(2)
        .find(|w| w[1].1.is_nan() || w[1].1 > w[0].1 + RESIDUAL_SLACK)
        .map(|w| w[1].0);
    let last = tail.last().map(|&(_, r)| r).unwrap_or(0.0);
    Ok(CheckReport::new(
        "ellipse_convergence",
        first,
        last,
        tail.len(),
    ))
}
