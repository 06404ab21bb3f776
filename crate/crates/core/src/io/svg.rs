//! SVG 1.1 rendering of trajectories. Output depends only on the input:
//! fixed element ids, fixed number formatting, no timestamps.

use std::fmt::Write;

use crate::geometry::Point;
use crate::simulate::Trajectory;

/// Longest vertex path drawn; longer trajectories are subsampled evenly.
const MAX_PATH_POINTS: usize = 600;
const WIDTH_PX: f64 = 600.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SvgOptions {
    /// Dashed path of every vertex through all samples.
    pub show_trajectories: bool,
    /// Outlines are drawn at the samples nearest these times. Empty means
    /// the first and last sample.
    pub snapshot_times: Vec<f64>,
    /// Asterisk at the initial centroid.
    pub mark_centroid: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self {
            show_trajectories: true,
            snapshot_times: Vec::new(),
            mark_centroid: true,
        }
    }
}

/// Decimal places that keep about five significant digits at the plot's
/// scale, never fewer than six.
fn precision_for(extent: f64) -> usize {
    let digits = (-extent.log10()).ceil() + 5.0;
    digits.clamp(6.0, 15.0) as usize
}

fn fmt_num(x: f64, prec: usize) -> String {
    let s = format!("{x:.prec$}");
    // "-0.000000" and "0.000000" must print the same
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        "0".to_string()
    } else {
        s
    }
}

/// Screen coordinates flip y so the plot reads like the usual axes.
fn xy(z: Point, prec: usize) -> String {
    format!("{},{}", fmt_num(z.re, prec), fmt_num(-z.im, prec))
}

fn snapshot_indices(traj: &Trajectory, times: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = if times.is_empty() {
        vec![0, traj.len() - 1]
    } else {
        times.iter().map(|&t| traj.nearest_index(t)).collect()
    };
    idx.sort_unstable();
    idx.dedup();
    idx
}

/// Renders `traj` as an SVG document. Panics on an empty trajectory.
pub fn render_svg(traj: &Trajectory, options: &SvgOptions) -> String {
    assert!(!traj.is_empty(), "cannot render an empty trajectory");
    let snapshots = snapshot_indices(traj, &options.snapshot_times);
    let stride = traj.len().div_ceil(MAX_PATH_POINTS).max(1);
    let mut path_samples: Vec<usize> = (0..traj.len()).step_by(stride).collect();
    if path_samples.last() != Some(&(traj.len() - 1)) {
        path_samples.push(traj.len() - 1);
    }

    let drawn: Vec<usize> = if options.show_trajectories {
        path_samples.clone()
    } else {
        snapshots.clone()
    };
    let (mut lo, mut hi) = (
        Point::new(f64::INFINITY, f64::INFINITY),
        Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    );
    for &k in drawn.iter().chain(&snapshots) {
        for z in traj.states[k].vertices() {
            lo = Point::new(lo.re.min(z.re), lo.im.min(z.im));
            hi = Point::new(hi.re.max(z.re), hi.im.max(z.im));
        }
    }
    let extent = (hi.re - lo.re).max(hi.im - lo.im).max(f64::MIN_POSITIVE);
    let margin = 0.05 * extent;
    let (x0, y0) = (lo.re - margin, -hi.im - margin);
    let (w, h) = (hi.re - lo.re + 2.0 * margin, hi.im - lo.im + 2.0 * margin);
    let prec = precision_for(extent);
    let num = |x: f64| fmt_num(x, prec);
    let pt = |z: Point| xy(z, prec);
    let stroke = num(0.004 * extent);

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">",
        fmt_num(WIDTH_PX, 6),
        fmt_num(WIDTH_PX * h / w, 6),
        num(x0),
        num(y0),
        num(w),
        num(h)
    );
    let _ = writeln!(
        s,
        "<rect id=\"background\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"white\"/>",
        num(x0),
        num(y0),
        num(w),
        num(h)
    );

    if options.show_trajectories {
        let dash = num(0.015 * extent);
        let _ = writeln!(
            s,
            "<g id=\"trajectories\" fill=\"none\" stroke=\"#7a7a7a\" stroke-width=\"{stroke}\" stroke-dasharray=\"{dash} {dash}\">"
        );
        for i in 0..traj.initial().len() {
            let points: Vec<String> = path_samples
                .iter()
                .map(|&k| pt(traj.states[k].vertices()[i]))
                .collect();
            let _ = writeln!(
                s,
                "<polyline id=\"vertex-{}\" points=\"{}\"/>",
                i + 1,
                points.join(" ")
            );
        }
        s.push_str("</g>\n");
    }

    let _ = writeln!(
        s,
        "<g id=\"snapshots\" fill=\"none\" stroke=\"#1f3b73\" stroke-width=\"{stroke}\" stroke-linejoin=\"round\">"
    );
    for (j, &k) in snapshots.iter().enumerate() {
        let z = traj.states[k].vertices();
        let mut d = format!("M {}", pt(z[0]).replace(',', " "));
        for p in &z[1..] {
            let _ = write!(d, " L {}", pt(*p).replace(',', " "));
        }
        d.push_str(" Z");
        let _ = writeln!(
            s,
            "<path id=\"snapshot-{}\" data-t=\"{}\" d=\"{}\"/>",
            j + 1,
            num(traj.times[k]),
            d
        );
    }
    s.push_str("</g>\n");

    if options.mark_centroid {
        let c = traj.initial().centroid();
        let r = 0.02 * extent;
        let mut d = String::new();
        for a in 0..3 {
            let u = Point::from_polar(
                r,
                std::f64::consts::PI * a as f64 / 3.0 + std::f64::consts::FRAC_PI_2,
            );
            let _ = write!(
                d,
                "{}M {} L {}",
                if a == 0 { "" } else { " " },
                pt(c + u).replace(',', " "),
                pt(c - u).replace(',', " ")
            );
        }
        let _ = writeln!(
            s,
            "<path id=\"centroid\" fill=\"none\" stroke=\"#b22222\" stroke-width=\"{stroke}\" d=\"{d}\"/>"
        );
    }
    s.push_str("</svg>\n");
    s
}
