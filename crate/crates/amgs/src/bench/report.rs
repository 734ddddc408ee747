use std::fs;
use std::path::{Path, PathBuf};

use super::{BenchError, SolveTrace};
use crate::linalg::mm::fmt_real;

/// One row of the per-step report CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub step: usize,
    pub solver: String,
    pub alpha: Option<f64>,
    pub iters: usize,
    pub residual: f64,
    pub wall_ms: f64,
}

const LOG_FLOOR: f64 = 1e-16;

/// Writes the report files for a set of traces and returns their paths:
///
/// - `report.csv` with `step,solver,alpha,iters,residual,wall_ms`;
/// - `summary.csv` with the to-target iteration counts and wall times;
/// - `per_iter_<label>.csv` for every deep residual curve;
/// - `residual_steps.svg` / `residual_iters.svg` line plots with a
///   log-scale residual axis (zeros clamped at 1e-16).
pub fn emit_report(traces: &[SolveTrace], out_dir: &Path) -> Result<Vec<PathBuf>, BenchError> {
    if traces.is_empty() {
        return Err(BenchError::InvalidSpec("no traces to report".into()));
    }
    fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;
    let mut written = Vec::new();

    let report = out_dir.join("report.csv");
    let mut csv = String::from("step,solver,alpha,iters,residual,wall_ms\n");
    for trace in traces {
        for row in &trace.per_step {
            csv.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.step,
                trace.label,
                trace.alpha.map(fmt_real).unwrap_or_default(),
                row.iterations,
                fmt_real(row.residual),
                fmt_real(row.wall_ms),
            ));
        }
    }
    fs::write(&report, csv).map_err(|e| io_err(&report, e))?;
    written.push(report);

    let summary = out_dir.join("summary.csv");
    let mut csv = String::from("solver,alpha,iters_to_target,wall_to_target_ms,total_wall_ms\n");
    for trace in traces {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            trace.label,
            trace.alpha.map(fmt_real).unwrap_or_default(),
            trace
                .iterations_to_target
                .map(|v| v.to_string())
                .unwrap_or_default(),
            trace.wall_to_target_ms.map(fmt_real).unwrap_or_default(),
            fmt_real(trace.total_wall_ms),
        ));
    }
    fs::write(&summary, csv).map_err(|e| io_err(&summary, e))?;
    written.push(summary);

    for trace in traces {
        if trace.per_iter.is_empty() {
            continue;
        }
        let path = out_dir.join(format!("per_iter_{}.csv", trace.label));
        let mut csv = String::from("iter,residual\n");
        for row in &trace.per_iter {
            csv.push_str(&format!("{},{}\n", row.iter, fmt_real(row.residual)));
        }
        fs::write(&path, csv).map_err(|e| io_err(&path, e))?;
        written.push(path);
    }

    let step_series: Vec<(String, Vec<(f64, f64)>)> = traces
        .iter()
        .filter(|t| !t.per_step.is_empty())
        .map(|t| {
            (
                t.label.clone(),
                t.per_step
                    .iter()
                    .map(|r| (r.step as f64, r.residual))
                    .collect(),
            )
        })
        .collect();
    if !step_series.is_empty() {
        let path = out_dir.join("residual_steps.svg");
        fs::write(&path, svg_line_plot(&step_series, "step", "residual"))
            .map_err(|e| io_err(&path, e))?;
        written.push(path);
    }
    let iter_series: Vec<(String, Vec<(f64, f64)>)> = traces
        .iter()
        .filter(|t| !t.per_iter.is_empty())
        .map(|t| {
            (
                t.label.clone(),
                t.per_iter
                    .iter()
                    .map(|r| (r.iter as f64, r.residual))
                    .collect(),
            )
        })
        .collect();
    if !iter_series.is_empty() {
        let path = out_dir.join("residual_iters.svg");
        fs::write(&path, svg_line_plot(&iter_series, "iteration", "residual"))
            .map_err(|e| io_err(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

/// Reads back `report.csv`; numeric fields round-trip exactly because the
/// writer prints 17 significant digits.
pub fn parse_report_csv(path: &Path) -> Result<Vec<ReportRow>, BenchError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut rows = Vec::new();
    for (index, line) in text.lines().enumerate() {
        if index == 0 || line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(BenchError::Parse {
                path: path.display().to_string(),
                message: format!("expected 6 fields on line {}", index + 1),
            });
        }
        let bad = |what: &str| BenchError::Parse {
            path: path.display().to_string(),
            message: format!("bad {what} on line {}", index + 1),
        };
        rows.push(ReportRow {
            step: fields[0].parse().map_err(|_| bad("step"))?,
            solver: fields[1].to_string(),
            alpha: if fields[2].is_empty() {
                None
            } else {
                Some(fields[2].parse().map_err(|_| bad("alpha"))?)
            },
            iters: fields[3].parse().map_err(|_| bad("iters"))?,
            residual: fields[4].parse().map_err(|_| bad("residual"))?,
            wall_ms: fields[5].parse().map_err(|_| bad("wall_ms"))?,
        });
    }
    Ok(rows)
}

fn io_err(path: &Path, source: std::io::Error) -> BenchError {
    BenchError::Io {
        path: path.display().to_string(),
        source,
    }
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#7f7f7f",
];

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 520.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 200.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 50.0;

/// Minimal static line plot with a log10 residual axis.
fn svg_line_plot(series: &[(String, Vec<(f64, f64)>)], x_label: &str, y_label: &str) -> String {
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for (_, points) in series {
        for &(x, y) in points {
            let ly = y.max(LOG_FLOOR).log10();
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(ly);
            y_max = y_max.max(ly);
        }
    }
    if !x_min.is_finite() {
        x_min = 0.0;
        x_max = 1.0;
        y_min = -1.0;
        y_max = 0.0;
    }
    if x_max == x_min {
        x_max = x_min + 1.0;
    }
    y_min = y_min.floor();
    y_max = y_max.ceil();
    if y_max == y_min {
        y_max = y_min + 1.0;
    }
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let map_x = |x: f64| MARGIN_L + (x - x_min) / (x_max - x_min) * plot_w;
    let map_y = |ly: f64| MARGIN_T + (y_max - ly) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<rect x=\"{MARGIN_L}\" y=\"{MARGIN_T}\" width=\"{plot_w}\" height=\"{plot_h}\" \
         fill=\"none\" stroke=\"#333\"/>\n"
    ));

    // y ticks at integer decades
    let decades = (y_max - y_min) as i64;
    let stride = (decades / 8).max(1);
    let mut decade = y_min as i64;
    while decade <= y_max as i64 {
        let y = map_y(decade as f64);
        svg.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"#ddd\"/>\n",
            MARGIN_L,
            MARGIN_L + plot_w
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">1e{decade}</text>\n",
            MARGIN_L - 6.0,
            y + 4.0
        ));
        decade += stride;
    }
    // x ticks
    for k in 0..=5 {
        let x = x_min + (x_max - x_min) * k as f64 / 5.0;
        let px = map_x(x);
        svg.push_str(&format!(
            "<line x1=\"{px:.1}\" y1=\"{:.1}\" x2=\"{px:.1}\" y2=\"{:.1}\" stroke=\"#ddd\"/>\n",
            MARGIN_T,
            MARGIN_T + plot_h
        ));
        svg.push_str(&format!(
            "<text x=\"{px:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{:.0}</text>\n",
            MARGIN_T + plot_h + 18.0,
            x
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{x_label}</text>\n",
        MARGIN_L + plot_w / 2.0,
        HEIGHT - 12.0
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{:.1}\" transform=\"rotate(-90 16 {:.1})\" \
         text-anchor=\"middle\">{y_label}</text>\n",
        MARGIN_T + plot_h / 2.0,
        MARGIN_T + plot_h / 2.0
    ));

    for (idx, (label, points)) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let mut path = String::new();
        for &(x, y) in points {
            let px = map_x(x);
            let py = map_y(y.max(LOG_FLOOR).log10());
            if path.is_empty() {
                path.push_str(&format!("M{px:.2},{py:.2}"));
            } else {
                path.push_str(&format!(" L{px:.2},{py:.2}"));
            }
        }
        if points.len() == 1 {
            let (x, y) = points[0];
            svg.push_str(&format!(
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{color}\"/>\n",
                map_x(x),
                map_y(y.max(LOG_FLOOR).log10())
            ));
        } else {
            svg.push_str(&format!(
                "<path d=\"{path}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n"
            ));
        }
        let ly = MARGIN_T + 16.0 + 18.0 * idx as f64;
        let lx = MARGIN_L + plot_w + 12.0;
        svg.push_str(&format!(
            "<line x1=\"{lx:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" \
             stroke=\"{color}\" stroke-width=\"2\"/>\n",
            ly - 4.0,
            lx + 18.0,
            ly - 4.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{ly:.1}\">{label}</text>\n",
            lx + 24.0
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{IterRecord, StepRecord};

    fn sample_traces() -> Vec<SolveTrace> {
        let mut a = SolveTrace::new("pgs".into(), None);
        a.per_step = vec![
            StepRecord {
                step: 0,
                residual: 0.125,
                rows: 3,
                iterations: 10,
                wall_ms: 0.5,
            },
            StepRecord {
                step: 1,
                residual: 0.0,
                rows: 3,
                iterations: 10,
                wall_ms: 0.25,
            },
        ];
        let mut b = SolveTrace::new("amgs[0.5D]".into(), Some(0.5));
        b.per_step = vec![StepRecord {
            step: 0,
            residual: 1.0 / 3.0,
            rows: 3,
            iterations: 10,
            wall_ms: 0.75,
        }];
        b.per_iter = vec![
            IterRecord {
                iter: 1,
                residual: 0.1,
            },
            IterRecord {
                iter: 2,
                residual: 1e-5,
            },
        ];
        b.iterations_to_target = Some(2);
        vec![a, b]
    }

    #[test]
    fn report_round_trips_and_plots() {
        let dir = std::env::temp_dir().join("amgs_report_test");
        let _ = std::fs::remove_dir_all(&dir);
        let traces = sample_traces();
        let files = emit_report(&traces, &dir).unwrap();
        assert!(files.iter().any(|f| f.ends_with("report.csv")));
        assert!(files.iter().any(|f| f.ends_with("summary.csv")));
        assert!(files.iter().any(|f| f.ends_with("residual_steps.svg")));
        assert!(files.iter().any(|f| f.ends_with("residual_iters.svg")));

        let rows = parse_report_csv(&dir.join("report.csv")).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].solver, "pgs");
        assert_eq!(rows[0].residual, 0.125);
        assert_eq!(rows[2].alpha, Some(0.5));
        assert_eq!(rows[2].residual, 1.0 / 3.0);

        // two polylines in the per-step figure, zero residual clamped
        let svg = std::fs::read_to_string(dir.join("residual_steps.svg")).unwrap();
        assert!(svg.contains("1e-16"));
        assert!(svg.matches("<path").count() >= 1);
        assert!(svg.contains("amgs[0.5D]"));
    }

    #[test]
    fn empty_traces_are_rejected() {
        let dir = std::env::temp_dir().join("amgs_report_empty");
        assert!(matches!(
            emit_report(&[], &dir),
            Err(BenchError::InvalidSpec(_))
        ));
    }
}
