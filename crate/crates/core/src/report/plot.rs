use std::fmt::Write as _;
use std::path::Path;

use super::{check_consistent, ReportError, ResultRow, SweepParameter};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 70.0;
const PALETTE: [&str; 6] = ["#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860"];

#[derive(Clone, Copy, Debug, Default)]
pub struct PlotOptions {
    /// Logarithmic time axis.
    pub log_time: bool,
}

fn distinct<T: PartialEq + Clone>(items: impl Iterator<Item = T>) -> Vec<T> {
    let mut out: Vec<T> = Vec::new();
    for i in items {
        if !out.contains(&i) {
            out.push(i);
        }
    }
    out
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

struct Axis {
    log: bool,
    lo: f64,
    hi: f64,
}

impl Axis {
    fn new(max: f64, min_positive: f64, log: bool) -> Axis {
        if log {
            let lo = min_positive.log10().floor();
            let hi = max.log10().ceil().max(lo + 1.0);
            Axis { log, lo, hi }
        } else {
            Axis {
                log,
                lo: 0.0,
                hi: if max > 0.0 { max * 1.1 } else { 1.0 },
            }
        }
    }

    /// Fraction of the plot height for value `v`.
    fn frac(&self, v: f64) -> f64 {
        let f = if self.log {
            if v <= 0.0 {
                0.0
            } else {
                (v.log10() - self.lo) / (self.hi - self.lo)
            }
        } else {
            (v - self.lo) / (self.hi - self.lo)
        };
        f.clamp(0.0, 1.0)
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            (self.lo as i32..=self.hi as i32).map(|e| 10f64.powi(e)).collect()
        } else {
            (0..=5).map(|i| self.hi * f64::from(i) / 5.0).collect()
        }
    }
}

/// Grouped bar chart of mean time per sweep value and backend. Error bars
/// appear only where the standard deviation exceeds 1% of the mean.
pub fn render_svg(
    rows: &[ResultRow],
    sweep: SweepParameter,
    opts: PlotOptions,
) -> Result<String, ReportError> {
    check_consistent(rows, sweep)?;
    let categories = distinct(rows.iter().map(|r| sweep.value_label(r)));
    let backends = distinct(rows.iter().map(|r| r.backend.clone()));

    let max = rows
        .iter()
        .map(|r| r.mean_time_s + if r.show_stddev_time() { r.stddev_time_s } else { 0.0 })
        .fold(0.0, f64::max);
    let min_positive = rows
        .iter()
        .map(|r| r.mean_time_s)
        .filter(|v| *v > 0.0)
        .fold(f64::INFINITY, f64::min);
    let axis = Axis::new(max, if min_positive.is_finite() { min_positive } else { 1e-6 }, opts.log_time);

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let y_of = |v: f64| TOP + plot_h * (1.0 - axis.frac(v));
    let group_w = plot_w / categories.len() as f64;
    let bar_w = group_w * 0.8 / backends.len() as f64;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="14">{} vs {}</text>"#,
        LEFT + plot_w / 2.0,
        esc(rows[0].workload.as_str()),
        sweep
    );

    for t in axis.ticks() {
        let y = y_of(t);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/>"##,
            LEFT + plot_w
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            y + 4.0,
            format_tick(t)
        );
    }
    let _ = writeln!(
        s,
        r##"<line x1="{LEFT:.2}" y1="{TOP:.2}" x2="{LEFT:.2}" y2="{:.2}" stroke="#000000"/>"##,
        TOP + plot_h
    );
    let _ = writeln!(
        s,
        r##"<line x1="{LEFT:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#000000"/>"##,
        TOP + plot_h,
        LEFT + plot_w,
        TOP + plot_h
    );
    let _ = writeln!(
        s,
        r#"<text transform="translate(18,{:.2}) rotate(-90)" text-anchor="middle">mean time [s]{}</text>"#,
        TOP + plot_h / 2.0,
        if opts.log_time { " (log)" } else { "" }
    );

    for (ci, cat) in categories.iter().enumerate() {
        let gx = LEFT + group_w * ci as f64 + group_w * 0.1;
        for (bi, backend) in backends.iter().enumerate() {
            let Some(r) = rows
                .iter()
                .find(|r| &r.backend == backend && &sweep.value_label(r) == cat)
            else {
                continue;
            };
            let x = gx + bar_w * bi as f64;
            let y = y_of(r.mean_time_s);
            let _ = writeln!(
                s,
                r#"<rect class="bar" x="{x:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                bar_w * 0.9,
                TOP + plot_h - y,
                PALETTE[bi % PALETTE.len()]
            );
            if r.show_stddev_time() {
                let cx = x + bar_w * 0.45;
                let y_hi = y_of(r.mean_time_s + r.stddev_time_s);
                let y_lo = y_of((r.mean_time_s - r.stddev_time_s).max(0.0));
                let _ = writeln!(
                    s,
                    r##"<path class="errorbar" d="M{cx:.2} {y_lo:.2}V{y_hi:.2}M{:.2} {y_hi:.2}H{:.2}M{:.2} {y_lo:.2}H{:.2}" stroke="#000000" fill="none"/>"##,
                    cx - 4.0,
                    cx + 4.0,
                    cx - 4.0,
                    cx + 4.0
                );
            }
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            LEFT + group_w * (ci as f64 + 0.5),
            TOP + plot_h + 18.0,
            esc(cat)
        );
    }

    for (bi, backend) in backends.iter().enumerate() {
        let y = TOP + 10.0 + 20.0 * bi as f64;
        let x = WIDTH - RIGHT + 16.0;
        let _ = writeln!(
            s,
            r#"<rect x="{x:.2}" y="{:.2}" width="12" height="12" fill="{}"/>"#,
            y - 10.0,
            PALETTE[bi % PALETTE.len()]
        );
        let _ = writeln!(s, r#"<text x="{:.2}" y="{y:.2}">{}</text>"#, x + 18.0, esc(backend));
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn format_tick(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1000.0 || v.abs() < 0.01 {
        format!("{v:.1e}")
    } else {
        format!("{v:.3}")
    }
}

pub fn render_plot(
    rows: &[ResultRow],
    sweep: SweepParameter,
    path: &Path,
    opts: PlotOptions,
) -> Result<(), ReportError> {
    let svg = render_svg(rows, sweep, opts)?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, svg)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::tests::row;

    #[test]
    fn three_sizes_three_bars() {
        let rows = vec![
            row("reference", 2_500, 0.001, 0.0),
            row("reference", 10_000, 0.004, 0.0),
            row("reference", 36_100, 0.02, 0.0),
        ];
        let svg = render_svg(&rows, SweepParameter::Size, PlotOptions::default()).unwrap();
        assert_eq!(svg.matches(r#"class="bar""#).count(), 3);
        assert_eq!(svg.matches("errorbar").count(), 0);
    }

    #[test]
    fn error_bars_follow_one_percent_rule() {
        let rows = vec![row("a", 100, 100.0, 0.5), row("a", 400, 100.0, 2.0)];
        let svg = render_svg(&rows, SweepParameter::Size, PlotOptions::default()).unwrap();
        assert_eq!(svg.matches(r#"class="errorbar""#).count(), 1);
    }

    #[test]
    fn mixed_workloads_rejected() {
        let mut b = row("a", 100, 1.0, 0.0);
        b.workload = crate::workload::Phase::Import;
        let err = render_svg(&[row("a", 100, 1.0, 0.0), b], SweepParameter::Size, PlotOptions::default());
        assert!(matches!(err, Err(ReportError::MixedWorkloads(..))));
    }

    #[test]
    fn deterministic_and_log_axis() {
        let rows = vec![row("a", 100, 0.002, 0.0), row("b", 100, 3.0, 0.5)];
        let opts = PlotOptions { log_time: true };
        let one = render_svg(&rows, SweepParameter::Size, opts).unwrap();
        let two = render_svg(&rows, SweepParameter::Size, opts).unwrap();
        assert_eq!(one, two);
        assert!(one.contains("(log)"));
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("p.svg");
        render_plot(&rows, SweepParameter::Size, &p, opts).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), one);
    }
}
