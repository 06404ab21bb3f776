//! Time integration of a [`FlowSpec`] with event detection.
//!
//! Linear and bisector flows use fixed-step classical RK4. The
//! Menger-Melnikov flow speeds up like `1/R^2` as the polygon collapses, so
//! with `adaptive` set its steps are capped to move no vertex further than
//! 5% of the shortest side.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flows::{BisectorSpeed, FlowError, FlowSpec};
use crate::geometry::{
    classify_convexity, convex_function, is_simple, star_function, ConvexityKind, GeometryError,
    Point, Polygon,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error("integration produced an invalid polygon: {0}")]
    Geometry(#[from] GeometryError),
    #[error("invalid simulation config: {0}")]
    Config(String),
}

/// Largest fraction of the shortest side a vertex may travel in one
/// adaptive step.
pub const ADAPTIVE_STEP_FRACTION: f64 = 0.05;

fn default_dt() -> f64 {
    1e-3
}
fn default_t_end() -> f64 {
    10.0
}
fn default_stop_diameter() -> f64 {
    1e-6
}
fn default_record_every() -> usize {
    1
}
fn default_adaptive() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    /// Halt once the diameter drops below this (absolute) value.
    #[serde(default = "default_stop_diameter")]
    pub stop_diameter: f64,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    #[serde(default = "default_adaptive")]
    pub adaptive: bool,
    /// Capture threshold on the shortest side. `None` means, for the
    /// bisector flow, the larger of `1e-6 * initial diameter` and the
    /// distance a vertex can travel in one step; disabled otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_edge_capture: Option<f64>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: default_dt(),
            t_end: default_t_end(),
            stop_diameter: default_stop_diameter(),
            record_every: default_record_every(),
            adaptive: default_adaptive(),
            min_edge_capture: None,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(SimError::Config(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(SimError::Config(format!(
                "t_end must be positive, got {}",
                self.t_end
            )));
        }
        if self.record_every == 0 {
            return Err(SimError::Config("record_every must be at least 1".into()));
        }
        if self.stop_diameter.is_nan() || self.stop_diameter < 0.0 {
            return Err(SimError::Config("stop_diameter must be nonnegative".into()));
        }
        if matches!(self.min_edge_capture, Some(c) if c.is_nan() || c < 0.0) {
            return Err(SimError::Config(
                "min_edge_capture must be nonnegative".into(),
            ));
        }
        Ok(())
    }

    fn capture_threshold(&self, flow: &FlowSpec, initial_diameter: f64) -> f64 {
        match (self.min_edge_capture, flow) {
            (Some(c), _) => c,
            // bisector speeds do not shrink with the polygon, so once a side
            // is shorter than one step the fixed-step scheme overshoots
            (
                None,
                FlowSpec::Bisector {
                    speed_mode, speed, ..
                },
            ) => {
                let max_speed = match speed_mode {
                    BisectorSpeed::Unit => speed.abs(),
                    // half the sum of two unit vectors
                    BisectorSpeed::NormMatched => 1.0,
                };
                (1e-6 * initial_diameter).max(self.dt * max_speed)
            }
            (None, _) => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Termination {
    TEnd,
    Collapsed,
    Capture,
    Degenerate,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::TEnd => "T_END",
            Termination::Collapsed => "COLLAPSED",
            Termination::Capture => "CAPTURE",
            Termination::Degenerate => "DEGENERATE",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "T_END" => Some(Termination::TEnd),
            "COLLAPSED" => Some(Termination::Collapsed),
            "CAPTURE" => Some(Termination::Capture),
            "DEGENERATE" => Some(Termination::Degenerate),
            _ => None,
        }
    }
}

/// Per-sample scalar summaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub perimeter: f64,
    pub signed_area: f64,
    /// `min_i F_i` with `F_i = Im{conj(z_i - c)(z_{i+1} - c)}` about the centroid.
    pub min_f: f64,
    /// `min_i H_i` in the given numbering.
    pub min_h: f64,
    pub min_edge: f64,
}

impl Diagnostics {
    pub fn of(poly: &Polygon) -> Self {
        let z = poly.vertices();
        let n = z.len();
        let c = poly.centroid();
        let min_f = (0..n)
            .map(|i| star_function(z[i], c, z[(i + 1) % n]))
            .fold(f64::INFINITY, f64::min);
        let min_h = (0..n)
            .map(|i| convex_function(z[(i + n - 1) % n], z[i], z[(i + 1) % n]))
            .fold(f64::INFINITY, f64::min);
        Self {
            perimeter: poly.perimeter(),
            signed_area: poly.signed_area(),
            min_f,
            min_h,
            min_edge: poly.min_edge(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Polygon>,
    pub diagnostics: Vec<Diagnostics>,
    pub termination: Termination,
}

impl Trajectory {
    /// Builds a trajectory from given states, computing diagnostics.
    pub fn from_states(times: Vec<f64>, states: Vec<Polygon>, termination: Termination) -> Self {
        let diagnostics = states.iter().map(Diagnostics::of).collect();
        Self {
            times,
            states,
            diagnostics,
            termination,
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn initial(&self) -> &Polygon {
        &self.states[0]
    }

    pub fn last(&self) -> &Polygon {
        self.states
            .last()
            .expect("trajectory has at least one state")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().unwrap_or(&0.0)
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, &Polygon)> {
        self.times.iter().copied().zip(&self.states)
    }

    /// Index of the recorded sample closest to `t`.
    pub fn nearest_index(&self, t: f64) -> usize {
        self.times
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }
}

fn rk4_vertices(z: &[Point], flow: &FlowSpec, dt: f64) -> Result<Vec<Point>, FlowError> {
    let n = z.len();
    let zero = Point::new(0.0, 0.0);
    let (mut k1, mut k2, mut k3, mut k4) =
        (vec![zero; n], vec![zero; n], vec![zero; n], vec![zero; n]);
    let mut stage = vec![zero; n];

    flow.velocity_into(z, &mut k1)?;
    for i in 0..n {
        stage[i] = z[i] + 0.5 * dt * k1[i];
    }
    flow.velocity_into(&stage, &mut k2)?;
    for i in 0..n {
        stage[i] = z[i] + 0.5 * dt * k2[i];
    }
    flow.velocity_into(&stage, &mut k3)?;
    for i in 0..n {
        stage[i] = z[i] + dt * k3[i];
    }
    flow.velocity_into(&stage, &mut k4)?;
    Ok((0..n)
        .map(|i| z[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

/// One classical Runge-Kutta step.
pub fn step_rk4(poly: &Polygon, flow: &FlowSpec, dt: f64) -> Result<Polygon, SimError> {
    let next = rk4_vertices(poly.vertices(), flow, dt)?;
    Ok(Polygon::new(next)?)
}

fn adaptive_step(z: &[Point], flow: &FlowSpec, dt: f64) -> Result<f64, FlowError> {
    let mut v = vec![Point::new(0.0, 0.0); z.len()];
    flow.velocity_into(z, &mut v)?;
    let vmax = v.iter().map(|w| w.norm()).fold(0.0, f64::max);
    let min_edge = crate::geometry::min_edge_of(z);
    if vmax == 0.0 {
        return Ok(dt);
    }
    Ok(dt.min(ADAPTIVE_STEP_FRACTION * min_edge / vmax))
}

/// Integrates `flow` from `poly` until `t_end`, collapse, capture or a flow
/// degeneracy. Records every `record_every`-th step and always the final
/// state.
pub fn run(poly: &Polygon, flow: &FlowSpec, cfg: &SimConfig) -> Result<Trajectory, SimError> {
    cfg.validate()?;
    let initial_diameter = poly.diameter();
    let capture = cfg.capture_threshold(flow, initial_diameter);
    let adaptive = cfg.adaptive && matches!(flow, FlowSpec::MengerMelnikov);

    let mut times = vec![0.0];
    let mut states = vec![poly.clone()];
    let mut current = poly.clone();
    let mut t = 0.0;
    let mut steps: u64 = 0;
    let mut recorded_last = true;

    let termination = loop {
        if t >= cfg.t_end {
            break Termination::TEnd;
        }
        let mut h = if adaptive {
            match adaptive_step(current.vertices(), flow, cfg.dt) {
                Ok(h) => h,
                Err(_) => break Termination::Degenerate,
            }
        } else {
            cfg.dt
        };
        // land exactly on t_end, and avoid a sliver step just short of it
        let next_t = if adaptive {
            (t + h).min(cfg.t_end)
        } else {
            ((steps + 1) as f64 * cfg.dt).min(cfg.t_end)
        };
        h = next_t - t;
        if h.is_nan() || h <= 0.0 {
            break Termination::Degenerate;
        }
        let next = match rk4_vertices(current.vertices(), flow, h).map(Polygon::new) {
            Ok(Ok(p)) => p,
            _ => break Termination::Degenerate,
        };
        current = next;
        t = if cfg.t_end - next_t <= 1e-12 * cfg.t_end {
            cfg.t_end
        } else {
            next_t
        };
        steps += 1;
        recorded_last = false;

        let stop = if current.diameter() < cfg.stop_diameter {
            Some(Termination::Collapsed)
        } else if capture > 0.0 && current.min_edge() < capture {
            Some(Termination::Capture)
        } else {
            None
        };
        if stop.is_some() || steps.is_multiple_of(cfg.record_every as u64) {
            times.push(t);
            states.push(current.clone());
            recorded_last = true;
        }
        if let Some(reason) = stop {
            break reason;
        }
    };
    if !recorded_last {
        times.push(t);
        states.push(current);
    }
    Ok(Trajectory::from_states(times, states, termination))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Event {
    BecomesStrictlyConvex,
    LosesSimplicity,
    AreaIncreasing,
}

/// First recorded time at which `event` holds, at sample resolution.
///
/// `AreaIncreasing` compares `|area|` of each sample with the next one and
/// reports the earlier time.
pub fn detect_first(traj: &Trajectory, event: Event) -> Option<f64> {
    match event {
        Event::BecomesStrictlyConvex => traj
            .samples()
            .find(|(_, p)| classify_convexity(p).kind == ConvexityKind::StrictlyConvex)
            .map(|(t, _)| t),
        Event::LosesSimplicity => traj
            .samples()
            .find(|(_, p)| !is_simple(p.vertices()))
            .map(|(t, _)| t),
        Event::AreaIncreasing => traj
            .diagnostics
            .windows(2)
            .position(|w| w[1].signed_area.abs() > w[0].signed_area.abs())
            .map(|k| traj.times[k]),
    }
}
