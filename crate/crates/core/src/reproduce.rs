//! The shipped figure scenarios and their artifacts.
//!
//! Each figure is built in memory as a list of named files so the caller
//! decides where they go. Everything is a pure function of the committed
//! scenario, so repeated runs produce identical bytes.

use std::fmt;

use thiserror::Error;

use crate::analysis::{check_area_monotone, AnalysisError};
use crate::flows::FlowSpec;
use crate::io::csv::{area_series_csv, write_trajectory, CsvError};
use crate::io::generate::GeneratorSpec;
use crate::io::scenario::{OutputKind, PolygonSource, Scenario, ScenarioError};
use crate::io::svg::{render_svg, SvgOptions};
use crate::simulate::{detect_first, Event, SimConfig, Trajectory};

#[derive(Debug, Error)]
pub enum ReproduceError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Csv(#[from] CsvError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Random star 10-gon under the linear flow.
    Fig7,
    /// Boomerang whose area first grows.
    Fig8,
    /// Linear flow beside the magnitude-matched bisector flow.
    Fig9,
    /// Crescent that loses simplicity.
    Fig10,
}

impl Figure {
    pub const ALL: [Figure; 4] = [Figure::Fig7, Figure::Fig8, Figure::Fig9, Figure::Fig10];

    pub fn name(&self) -> &'static str {
        match self {
            Figure::Fig7 => "fig7",
            Figure::Fig8 => "fig8",
            Figure::Fig9 => "fig9",
            Figure::Fig10 => "fig10",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub file_name: String,
    pub contents: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reproduction {
    pub figure: Figure,
    pub artifacts: Vec<Artifact>,
    /// Human-readable findings, one per line.
    pub summary: Vec<String>,
}

fn sim(t_end: f64, record_every: usize) -> SimConfig {
    SimConfig {
        t_end,
        record_every,
        ..SimConfig::default()
    }
}

fn star10() -> PolygonSource {
    PolygonSource::Generator(GeneratorSpec::RandomStar {
        n: 10,
        r_min: 0.5,
        r_max: 1.5,
    })
}

/// The scenarios behind each figure, in drawing order.
pub fn scenarios(figure: Figure) -> Vec<Scenario> {
    let outputs = vec![OutputKind::Csv, OutputKind::Svg];
    let scenario = |name: &str, polygon, flow, sim| Scenario {
        name: name.to_string(),
        polygon,
        flow,
        sim,
        seed: 0,
        outputs: outputs.clone(),
    };
    match figure {
        Figure::Fig7 => vec![scenario("fig7", star10(), FlowSpec::Linear, sim(12.0, 20))],
        Figure::Fig8 => vec![scenario(
            "fig8",
            PolygonSource::Generator(GeneratorSpec::Boomerang),
            FlowSpec::Linear,
            sim(10.0, 10),
        )],
        Figure::Fig9 => vec![
            scenario("fig9_linear", star10(), FlowSpec::Linear, sim(4.0, 10)),
            scenario(
                "fig9_bisector",
                star10(),
                FlowSpec::bisector_norm_matched(),
                sim(4.0, 10),
            ),
        ],
        Figure::Fig10 => vec![scenario(
            "fig10",
            PolygonSource::Generator(GeneratorSpec::EmbeddedLoss),
            FlowSpec::Linear,
            sim(1.0, 10),
        )],
    }
}

fn snapshot_times(figure: Figure) -> Vec<f64> {
    match figure {
        Figure::Fig7 => vec![0.0, 0.5, 2.0, 5.0, 12.0],
        Figure::Fig8 => vec![0.0, 1.0, 2.5, 6.0, 10.0],
        Figure::Fig9 => vec![0.0, 1.0, 2.0, 3.0, 4.0],
        Figure::Fig10 => vec![0.0, 0.18, 0.5, 1.0],
    }
}

fn csv_text(traj: &Trajectory) -> Result<String, CsvError> {
    let mut bytes = Vec::new();
    write_trajectory(traj, &mut bytes)?;
    Ok(String::from_utf8(bytes).expect("CSV output is ASCII"))
}

fn fmt_time(t: Option<f64>) -> String {
    t.map_or_else(|| "none".to_string(), |t| format!("{t:.3}"))
}

pub fn reproduce(figure: Figure) -> Result<Reproduction, ReproduceError> {
    let options = SvgOptions {
        show_trajectories: true,
        snapshot_times: snapshot_times(figure),
        mark_centroid: true,
    };
    let mut artifacts = Vec::new();
    let mut summary = Vec::new();
    for scenario in scenarios(figure) {
        let traj = scenario.run()?;
        artifacts.push(Artifact {
            file_name: format!("{}.svg", scenario.name),
            contents: render_svg(&traj, &options),
        });
        artifacts.push(Artifact {
            file_name: format!("{}.csv", scenario.name),
            contents: csv_text(&traj)?,
        });
        summary.push(format!(
            "{}: {} flow, {} samples, termination {} at t = {:.3}",
            scenario.name,
            scenario.flow.name(),
            traj.len(),
            traj.termination.as_str(),
            traj.final_time()
        ));
        match figure {
            Figure::Fig7 | Figure::Fig9 => summary.push(format!(
                "{}: strictly convex from t = {}",
                scenario.name,
                fmt_time(detect_first(&traj, Event::BecomesStrictlyConvex))
            )),
            Figure::Fig8 => {
                artifacts.push(Artifact {
                    file_name: format!("{}_area.csv", scenario.name),
                    contents: area_series_csv(&traj),
                });
                let peak = traj
                    .diagnostics
                    .iter()
                    .zip(&traj.times)
                    .max_by(|a, b| a.0.signed_area.abs().total_cmp(&b.0.signed_area.abs()))
                    .map(|(d, &t)| (t, d.signed_area.abs()))
                    .expect("non-empty trajectory");
                summary.push(format!(
                    "{}: |area| {:.4} at t = 0 peaks at {:.4} at t = {:.3}",
                    scenario.name,
                    traj.diagnostics[0].signed_area.abs(),
                    peak.1,
                    peak.0
                ));
                summary.push(check_area_monotone(&traj)?.to_string());
            }
            Figure::Fig10 => summary.push(format!(
                "{}: first self-intersection at t = {}",
                scenario.name,
                fmt_time(detect_first(&traj, Event::LosesSimplicity))
            )),
        }
    }
    Ok(Reproduction {
        figure,
        artifacts,
        summary,
    })
}
