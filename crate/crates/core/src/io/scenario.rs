//! JSON scenario files:
//!
//! ```json
//! {
//!   "name": "star10",
//!   "polygon": {"kind": "random_star", "n": 10},
//!   "flow": {"kind": "linear"},
//!   "sim": {"dt": 0.001, "t_end": 20.0, "record_every": 10},
//!   "seed": 7,
//!   "outputs": ["csv", "svg"]
//! }
//! ```
//!
//! `polygon` is either a generator spec or an explicit `[[x, y], ...]` list.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::generate::{generate, GenerateError, GeneratorSpec};
use crate::flows::FlowSpec;
use crate::geometry::{GeometryError, Polygon};
use crate::simulate::{run, SimConfig, SimError, Trajectory};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid scenario: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid polygon: {0}")]
    Polygon(#[from] GeometryError),
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolygonSource {
    Explicit(Vec<[f64; 2]>),
    Generator(GeneratorSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    #[serde(alias = "CSV")]
    Csv,
    #[serde(alias = "SVG")]
    Svg,
    #[serde(alias = "REPORT_JSON")]
    ReportJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub polygon: PolygonSource,
    pub flow: FlowSpec,
    #[serde(default)]
    pub sim: SimConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub outputs: Vec<OutputKind>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let mut scenario: Scenario = serde_json::from_str(text)?;
        scenario.outputs.sort();
        scenario.outputs.dedup();
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text = fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn initial_polygon(&self) -> Result<Polygon, ScenarioError> {
        match &self.polygon {
            PolygonSource::Explicit(xy) => Ok(Polygon::from_xy(xy)?),
            PolygonSource::Generator(spec) => Ok(generate(spec, self.seed)?),
        }
    }

    pub fn run(&self) -> Result<Trajectory, ScenarioError> {
        let poly = self.initial_polygon()?;
        Ok(run(&poly, &self.flow, &self.sim)?)
    }

    pub fn wants(&self, kind: OutputKind) -> bool {
        self.outputs.contains(&kind)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flows::BisectorSpeed;

    #[test]
    fn parses_generator_scenario() {
        let s = Scenario::from_json(
            r#"{
                "name": "star",
                "polygon": {"kind": "random_star", "n": 10},
                "flow": {"kind": "linear"},
                "sim": {"t_end": 1.0, "record_every": 10},
                "seed": 42,
                "outputs": ["svg", "CSV", "csv"]
            }"#,
        )
        .unwrap();
        assert_eq!(s.sim.dt, 1e-3);
        assert_eq!(s.outputs, vec![OutputKind::Csv, OutputKind::Svg]);
        assert!(s.wants(OutputKind::Svg) && !s.wants(OutputKind::ReportJson));
        let a = s.run().unwrap();
        let b = s.run().unwrap();
        assert_eq!(a, b);
        assert_eq!(a.final_time(), 1.0);
    }

    #[test]
    fn parses_explicit_vertices() {
        let s = Scenario::from_json(
            r#"{"name": "sq", "polygon": [[0,0],[1,0],[1,1],[0,1]],
                "flow": {"kind": "bisector", "speed_mode": "norm_matched"}}"#,
        )
        .unwrap();
        assert_eq!(s.initial_polygon().unwrap().len(), 4);
        assert_eq!(
            s.flow,
            FlowSpec::Bisector {
                speed_mode: BisectorSpeed::NormMatched,
                speed: 1.0
            }
        );
        let back = Scenario::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            Scenario::from_json(
                r#"{"name": "x", "polygon": [[0,0],[0,0],[1,1]], "flow": {"kind": "linear"}}"#
            )
            .unwrap()
            .initial_polygon(),
            Err(ScenarioError::Polygon(_))
        ));
        assert!(matches!(
            Scenario::from_json(
                r#"{"name": "x", "polygon": {"kind": "regular", "n": 4}, "flow": {"kind": "linear"}, "typo": 1}"#
            ),
            Err(ScenarioError::Json(_))
        ));
        assert!(matches!(
            Scenario::from_json(
                r#"{"name": "x", "polygon": {"kind": "hexagon"}, "flow": {"kind": "linear"}}"#
            ),
            Err(ScenarioError::Json(_))
        ));
    }
}
