//! Trajectory CSV.
//!
//! Header `t,x1,y1,...,xn,yn,perimeter,area,minF,minH,min_edge`, one row
//! per sample, values in `{:.16e}` (17 significant digits, enough to read
//! back bit-exact), `\n` line endings, and a final `# termination=<REASON>`
//! line.

use std::fs;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::geometry::{Point, Polygon};
use crate::simulate::{Diagnostics, Termination, Trajectory};

const DIAGNOSTIC_COLUMNS: [&str; 5] = ["perimeter", "area", "minF", "minH", "min_edge"];

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("cannot write an empty trajectory")]
    EmptyTrajectory,
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn parse_err(line: usize, message: impl Into<String>) -> CsvError {
    CsvError::Parse {
        line,
        message: message.into(),
    }
}

pub fn header(n: usize) -> String {
    let mut cols = vec!["t".to_string()];
    for i in 1..=n {
        cols.push(format!("x{i}"));
        cols.push(format!("y{i}"));
    }
    cols.extend(DIAGNOSTIC_COLUMNS.iter().map(|s| s.to_string()));
    cols.join(",")
}

pub fn write_trajectory<W: Write>(traj: &Trajectory, mut out: W) -> Result<(), CsvError> {
    if traj.is_empty() {
        return Err(CsvError::EmptyTrajectory);
    }
    let io_err = |source| CsvError::Io {
        path: PathBuf::from("<stream>"),
        source,
    };
    let mut buf = header(traj.initial().len());
    buf.push('\n');
    for ((t, poly), d) in traj.samples().zip(&traj.diagnostics) {
        let mut row = vec![format!("{t:.16e}")];
        for z in poly.vertices() {
            row.push(format!("{:.16e}", z.re));
            row.push(format!("{:.16e}", z.im));
        }
        for v in [d.perimeter, d.signed_area, d.min_f, d.min_h, d.min_edge] {
            row.push(format!("{v:.16e}"));
        }
        buf.push_str(&row.join(","));
        buf.push('\n');
    }
    buf.push_str(&format!("# termination={}\n", traj.termination.as_str()));
    out.write_all(buf.as_bytes()).map_err(io_err)
}

pub fn write_trajectory_csv(traj: &Trajectory, path: &Path) -> Result<(), CsvError> {
    let mut bytes = Vec::new();
    write_trajectory(traj, &mut bytes)?;
    fs::write(path, bytes).map_err(|source| CsvError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_trajectory<R: BufRead>(input: R) -> Result<Trajectory, CsvError> {
    let mut lines = input.lines().enumerate();
    let io_err = |source| CsvError::Io {
        path: PathBuf::from("<stream>"),
        source,
    };
    let (_, head) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let head = head.map_err(io_err)?;
    let cols = head.split(',').count();
    if cols < 1 + 6 + DIAGNOSTIC_COLUMNS.len()
        || !(cols - 1 - DIAGNOSTIC_COLUMNS.len()).is_multiple_of(2)
    {
        return Err(parse_err(
            1,
            format!("unexpected header with {cols} columns"),
        ));
    }
    let n = (cols - 1 - DIAGNOSTIC_COLUMNS.len()) / 2;
    if head != header(n) {
        return Err(parse_err(1, "header does not match the trajectory layout"));
    }

    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut diagnostics = Vec::new();
    let mut termination = None;
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.map_err(io_err)?;
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("# termination=") {
            termination = Some(
                Termination::parse(rest.trim())
                    .ok_or_else(|| parse_err(lineno, format!("unknown termination {rest:?}")))?,
            );
            continue;
        }
        if termination.is_some() {
            return Err(parse_err(lineno, "data after the termination line"));
        }
        let values = line
            .split(',')
            .map(|s| s.parse::<f64>())
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|e| parse_err(lineno, e.to_string()))?;
        if values.len() != cols {
            return Err(parse_err(
                lineno,
                format!("expected {cols} values, got {}", values.len()),
            ));
        }
        times.push(values[0]);
        let z: Vec<Point> = (0..n)
            .map(|i| Point::new(values[1 + 2 * i], values[2 + 2 * i]))
            .collect();
        states.push(Polygon::new(z).map_err(|e| parse_err(lineno, e.to_string()))?);
        let d = &values[1 + 2 * n..];
        diagnostics.push(Diagnostics {
            perimeter: d[0],
            signed_area: d[1],
            min_f: d[2],
            min_h: d[3],
            min_edge: d[4],
        });
    }
    if states.is_empty() {
        return Err(parse_err(2, "no samples"));
    }
    let termination = termination.ok_or_else(|| parse_err(0, "missing termination line"))?;
    Ok(Trajectory {
        times,
        states,
        diagnostics,
        termination,
    })
}

pub fn read_trajectory_csv(path: &Path) -> Result<Trajectory, CsvError> {
    let file = fs::File::open(path).map_err(|source| CsvError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_trajectory(BufReader::new(file))
}

/// Two-column `t,area` series.
pub fn area_series_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t,area\n");
    for (t, d) in traj.times.iter().zip(&traj.diagnostics) {
        out.push_str(&format!("{t:.16e},{:.16e}\n", d.signed_area));
    }
    out
}
