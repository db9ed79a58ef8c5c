//! Artifact emission: `report.json`, per-table CSVs, plot-ready CSVs,
//! fixed-width tables, and optional self-contained SVG stem plots.
//!
//! Everything is written under one output directory with deterministic
//! content: the report is rounded before serialization and all iteration
//! orders are fixed by the report itself.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use xbicorr_core::error::Result;

use crate::cli::OutputFormat;
use crate::report::{PairReport, RunReport};
use crate::tables::{self, fmt_num};

/// Write informational text to stdout, tolerating a closed pipe: artifacts
/// on disk are the real output, so `xbicorr ... | head` must not fail.
pub fn chat(text: &str) {
    let _ = std::io::stdout().write_all(text.as_bytes());
}

/// Price/return rows backing the per-series plot CSVs (pipeline only).
pub struct Fig1Series {
    pub name: String,
    /// (date, price, return); the first row has no return.
    pub rows: Vec<(String, f64, Option<f64>)>,
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

/// Write every artifact the format list asks for; returns the files written.
/// Table output additionally goes to stdout.
pub fn emit(
    report: &RunReport,
    fig1: &[Fig1Series],
    out: &Path,
    formats: &[OutputFormat],
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out)?;
    let mut written = Vec::new();

    if formats.contains(&OutputFormat::Json) {
        let path = out.join("report.json");
        let mut doc = serde_json::to_string_pretty(report)
            .map_err(|e| xbicorr_core::Error::DomainError(format!("serialization: {e}")))?;
        doc.push('\n');
        fs::write(&path, doc)?;
        written.push(path);
    }

    if formats.contains(&OutputFormat::Csv) {
        written.extend(write_csvs(report, fig1, out)?);
    }

    if formats.contains(&OutputFormat::Table) {
        let text = tables::render_all(report);
        if !text.is_empty() {
            chat(&text);
            let path = out.join("tables.txt");
            fs::write(&path, text)?;
            written.push(path);
        }
    }

    if formats.contains(&OutputFormat::Svg) {
        for pair in &report.pairs {
            let path = out.join(format!(
                "fig2_{}_{}.svg",
                sanitize(&pair.x),
                sanitize(&pair.y)
            ));
            fs::write(&path, stem_plot_svg(pair))?;
            written.push(path);
        }
    }

    Ok(written)
}

fn write_csvs(report: &RunReport, fig1: &[Fig1Series], out: &Path) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();

    if report.series.iter().any(|s| s.summary.is_some()) {
        let path = out.join("table1_summary.csv");
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record([
            "series", "n", "mean", "sd", "skewness", "kurtosis", "jb_stat", "jb_p",
        ])?;
        for s in &report.series {
            let Some(d) = &s.summary else { continue };
            w.write_record([
                s.name.as_str(),
                &d.n.to_string(),
                &fmt_num(d.mean),
                &fmt_num(d.sd),
                &fmt_num(d.skewness),
                &fmt_num(d.kurtosis),
                &fmt_num(d.jarque_bera.statistic),
                &fmt_num(d.jarque_bera.p_value),
            ])?;
        }
        w.flush()?;
        written.push(path);
    }

    if report.series.iter().any(|s| s.adf.is_some()) {
        let path = out.join("table2_adf.csv");
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record([
            "series",
            "statistic",
            "lags",
            "det",
            "cv_1pct",
            "cv_5pct",
            "cv_10pct",
            "reject_1pct",
            "reject_5pct",
            "reject_10pct",
        ])?;
        for s in &report.series {
            let Some(d) = &s.adf else { continue };
            w.write_record([
                s.name.as_str(),
                &fmt_num(d.statistic),
                &d.lags.to_string(),
                &d.det,
                &fmt_num(d.cv_1pct),
                &fmt_num(d.cv_5pct),
                &fmt_num(d.cv_10pct),
                &d.reject_1pct.to_string(),
                &d.reject_5pct.to_string(),
                &d.reject_10pct.to_string(),
            ])?;
        }
        w.flush()?;
        written.push(path);
    }

    if report.series.iter().any(|s| s.nonlin.is_some()) {
        let path = out.join("table3_nonlin.csv");
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record([
            "series", "ar_order", "test", "statistic", "dof", "p_value", "reject_5pct",
        ])?;
        for s in &report.series {
            let Some(tests) = &s.nonlin else { continue };
            let order = s
                .ar
                .as_ref()
                .map(|a| a.order.to_string())
                .unwrap_or_default();
            for t in tests {
                w.write_record([
                    s.name.as_str(),
                    &order,
                    &t.name,
                    &fmt_num(t.statistic),
                    &t.dof.to_string(),
                    &fmt_num(t.p_value),
                    &t.reject_5pct.to_string(),
                ])?;
            }
        }
        w.flush()?;
        written.push(path);
    }

    if !report.pairs.is_empty() {
        let path = out.join("table4_xbicorr.csv");
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record([
            "x",
            "y",
            "window_length",
            "window_count",
            "lag_depth",
            "var_order",
            "significant_count",
            "significant_percent",
            "significant_xy",
            "significant_yx",
            "pearson_returns",
            "pearson_residuals",
        ])?;
        for p in &report.pairs {
            w.write_record([
                p.x.as_str(),
                p.y.as_str(),
                &p.plan.window_length.to_string(),
                &p.plan.window_count.to_string(),
                &p.plan.lag_depth.to_string(),
                &p.var.order.to_string(),
                &p.significant_count.to_string(),
                &fmt_num(p.significant_percent),
                &p.significant_xy.map(|c| c.to_string()).unwrap_or_default(),
                &p.significant_yx.map(|c| c.to_string()).unwrap_or_default(),
                &fmt_num(p.pearson_returns),
                &fmt_num(p.pearson_residuals),
            ])?;
        }
        w.flush()?;
        written.push(path);

        for p in &report.pairs {
            written.push(write_fig2(p, out)?);
        }
    }

    for f in fig1 {
        let path = out.join(format!("fig1_{}.csv", sanitize(&f.name)));
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(["date", "price", "return"])?;
        for (date, price, ret) in &f.rows {
            w.write_record([
                date.as_str(),
                &fmt_num(*price),
                &ret.map(fmt_num).unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        written.push(path);
    }

    Ok(written)
}

/// One row per tested window and direction, significant or not, so the
/// stem plot has the full baseline; row count = windows × directions when
/// no window is degenerate.
fn write_fig2(pair: &PairReport, out: &Path) -> Result<PathBuf> {
    let path = out.join(format!(
        "fig2_{}_{}.csv",
        sanitize(&pair.x),
        sanitize(&pair.y)
    ));
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record([
        "window_start",
        "window_end",
        "direction",
        "one_minus_p",
        "significant",
    ])?;
    for win in &pair.windows {
        w.write_record([
            win.start.as_str(),
            win.end.as_str(),
            win.direction,
            &fmt_num(win.one_minus_p()),
            &win.significant.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(path)
}

/// Self-contained stem plot of the per-window (1 − p) values, one stem per
/// tested window and direction. No external resources; plain SVG 1.1.
fn stem_plot_svg(pair: &PairReport) -> String {
    const W: f64 = 960.0;
    const H: f64 = 300.0;
    const LEFT: f64 = 60.0;
    const RIGHT: f64 = 20.0;
    const TOP: f64 = 40.0;
    const BOTTOM: f64 = 50.0;
    let plot_w = W - LEFT - RIGHT;
    let plot_h = H - TOP - BOTTOM;
    let base_y = H - BOTTOM;

    let n_win = pair.plan.window_count.max(1);
    let x_of = |index: usize, dir: &str| -> f64 {
        let center = LEFT + plot_w * (index as f64 + 0.5) / n_win as f64;
        if dir == "yx" {
            center + 2.0
        } else {
            center - 2.0
        }
    };
    let y_of = |v: f64| base_y - plot_h * v.clamp(0.0, 1.0);

    let mut body = String::new();
    for win in &pair.windows {
        let x = x_of(win.index, win.direction);
        let y = y_of(win.one_minus_p());
        let (color, radius) = if win.significant {
            ("#c0392b", 3.0)
        } else {
            ("#7f8c8d", 1.5)
        };
        body.push_str(&format!(
            "  <line x1=\"{x:.1}\" y1=\"{base_y:.1}\" x2=\"{x:.1}\" y2=\"{y:.1}\" stroke=\"{color}\" stroke-width=\"1\"/>\n  <circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"{radius}\" fill=\"{color}\"/>\n"
        ));
    }

    let mut ticks = String::new();
    if !pair.windows.is_empty() {
        let first = &pair.windows[0];
        let last = &pair.windows[pair.windows.len() - 1];
        let mid = &pair.windows[pair.windows.len() / 2];
        for (w, anchor) in [(first, "start"), (mid, "middle"), (last, "end")] {
            let x = LEFT + plot_w * (w.index as f64 + 0.5) / n_win as f64;
            ticks.push_str(&format!(
                "  <text x=\"{x:.1}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"{anchor}\" fill=\"#333\">{}</text>\n",
                base_y + 18.0,
                w.start
            ));
        }
    }

    let threshold_y = y_of(1.0 - pair.alpha);
    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n",
            "  <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n",
            "  <text x=\"{left}\" y=\"22\" font-size=\"14\" fill=\"#111\">1 - p of windowed cross-bicorrelation tests: {x} / {y}</text>\n",
            "  <line x1=\"{left}\" y1=\"{base}\" x2=\"{xend}\" y2=\"{base}\" stroke=\"#333\" stroke-width=\"1\"/>\n",
            "  <line x1=\"{left}\" y1=\"{top}\" x2=\"{left}\" y2=\"{base}\" stroke=\"#333\" stroke-width=\"1\"/>\n",
            "  <line x1=\"{left}\" y1=\"{thr:.1}\" x2=\"{xend}\" y2=\"{thr:.1}\" stroke=\"#2980b9\" stroke-width=\"1\" stroke-dasharray=\"4,3\"/>\n",
            "  <text x=\"{lbl}\" y=\"{thrlbl:.1}\" font-size=\"11\" fill=\"#2980b9\">1-alpha</text>\n",
            "  <text x=\"{lbl}\" y=\"{toplbl}\" font-size=\"11\" fill=\"#333\">1.0</text>\n",
            "  <text x=\"{lbl}\" y=\"{baselbl}\" font-size=\"11\" fill=\"#333\">0.0</text>\n",
            "{ticks}{body}",
            "</svg>\n"
        ),
        w = W,
        h = H,
        left = LEFT,
        top = TOP,
        base = base_y,
        xend = W - RIGHT,
        thr = threshold_y,
        lbl = 8.0,
        thrlbl = threshold_y + 4.0,
        toplbl = TOP + 4.0,
        baselbl = base_y + 4.0,
        x = pair.x,
        y = pair.y,
        ticks = ticks,
        body = body,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::{PlanDto, VarDto, WindowDto};

    fn tiny_pair() -> PairReport {
        PairReport {
            x: "a".into(),
            y: "b".into(),
            var: VarDto {
                order: 1,
                bic: -0.5,
                intercepts: [0.0, 0.0],
                coef_matrices: vec![[[0.1, 0.0], [0.0, 0.1]]],
            },
            pearson_returns: 0.1,
            pearson_residuals: 0.05,
            plan: PlanDto {
                total_n: 100,
                exponent: 0.4,
                window_length: 6,
                window_count: 2,
                lag_depth: 2,
                exclusion: "dof".into(),
            },
            alpha: 0.05,
            significant_count: 1,
            significant_fraction: 0.5,
            significant_percent: 50.0,
            significant_xy: Some(1),
            significant_yx: Some(0),
            degenerate_windows: vec![],
            windows: vec![
                WindowDto {
                    index: 0,
                    start: "2000-01-03".into(),
                    end: "2000-01-10".into(),
                    direction: "xy",
                    h_xy: 1.0,
                    h_xy_dof: 2,
                    h_xy_p: 0.6,
                    h_xxy: 20.0,
                    h_xxy_dof: 6,
                    h_xxy_p: 0.0028,
                    significant: true,
                },
                WindowDto {
                    index: 1,
                    start: "2000-01-11".into(),
                    end: "2000-01-18".into(),
                    direction: "xy",
                    h_xy: 1.0,
                    h_xy_dof: 2,
                    h_xy_p: 0.6,
                    h_xxy: 3.0,
                    h_xxy_dof: 6,
                    h_xxy_p: 0.81,
                    significant: false,
                },
            ],
            epochs: vec![],
        }
    }

    #[test]
    fn fig2_rows_cover_every_window() {
        let dir = tempfile::tempdir().unwrap();
        let pair = tiny_pair();
        let path = write_fig2(&pair, dir.path()).unwrap();
        let text = fs::read_to_string(path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "window_start,window_end,direction,one_minus_p,significant"
        );
        assert_eq!(lines.len(), 3);
        assert!(lines[1].ends_with("xy,0.9972,true"), "{}", lines[1]);
        assert!(lines[2].ends_with("xy,0.19,false"), "{}", lines[2]);
    }

    #[test]
    fn stem_plot_is_self_contained_svg() {
        let svg = stem_plot_svg(&tiny_pair());
        assert!(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(!svg.contains("href"), "no external refs expected");
        assert_eq!(svg.matches("<circle").count(), 2);
    }
}
