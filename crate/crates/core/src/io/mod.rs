//! Scenario files, generators, trajectory CSV and SVG output.

pub mod csv;
pub mod fixtures;
pub mod generate;
pub mod rng;
pub mod scenario;
pub mod svg;

pub use self::csv::{read_trajectory_csv, write_trajectory_csv, CsvError};
pub use generate::{generate, GenerateError, GeneratorSpec};
pub use rng::Rng;
pub use scenario::{OutputKind, PolygonSource, Scenario, ScenarioError};
pub use svg::{render_svg, SvgOptions};
