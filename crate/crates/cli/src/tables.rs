//! Fixed-width text tables.
//!
//! Tables are rendered exclusively from the machine-readable report, after
//! rounding, so every printed number is also present in `report.json`.

use crate::report::RunReport;

/// Format an already-rounded float for table and CSV cells: plain decimal
/// in the comfortable magnitude range, scientific notation outside it.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let a = x.abs();
    if (1e-4..1e7).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:.5e}")
    }
}

/// Significance stars at the usual 10/5/1 percent levels.
pub fn stars(at_1pct: bool, at_5pct: bool, at_10pct: bool) -> &'static str {
    if at_1pct {
        "***"
    } else if at_5pct {
        "**"
    } else if at_10pct {
        "*"
    } else {
        ""
    }
}

fn render_table(title: &str, headers: &[&str], rows: &[Vec<String>]) -> String {
    let ncols = headers.len();
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    out.push_str(title);
    out.push('\n');

    let mut line = String::new();
    for (i, h) in headers.iter().enumerate() {
        if i > 0 {
            line.push_str("  ");
        }
        if i == 0 {
            line.push_str(&format!("{h:<w$}", w = widths[i]));
        } else {
            line.push_str(&format!("{h:>w$}", w = widths[i]));
        }
    }
    out.push_str(line.trim_end());
    out.push('\n');

    let total: usize = widths.iter().sum::<usize>() + 2 * (ncols - 1);
    out.push_str(&"-".repeat(total));
    out.push('\n');

    for row in rows {
        let mut line = String::new();
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            if i == 0 {
                line.push_str(&format!("{cell:<w$}", w = widths[i]));
            } else {
                line.push_str(&format!("{cell:>w$}", w = widths[i]));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn summary_table(report: &RunReport) -> Option<String> {
    let rows: Vec<Vec<String>> = report
        .series
        .iter()
        .filter_map(|s| s.summary.as_ref().map(|d| (s, d)))
        .map(|(s, d)| {
            vec![
                s.name.clone(),
                d.n.to_string(),
                fmt_num(d.mean),
                fmt_num(d.sd),
                fmt_num(d.skewness),
                fmt_num(d.kurtosis),
                fmt_num(d.jarque_bera.statistic),
                fmt_num(d.jarque_bera.p_value),
                stars(
                    d.jarque_bera.reject_1pct,
                    d.jarque_bera.reject_5pct,
                    d.jarque_bera.reject_10pct,
                )
                .to_string(),
            ]
        })
        .collect();
    if rows.is_empty() {
        return None;
    }
    Some(render_table(
        "Summary statistics of returns",
        &[
            "Series", "N", "Mean", "SD", "Skewness", "Kurtosis", "JB", "p(JB)", "",
        ],
        &rows,
    ))
}

fn adf_table(report: &RunReport) -> Option<String> {
    let rows: Vec<Vec<String>> = report
        .series
        .iter()
        .filter_map(|s| s.adf.as_ref().map(|d| (s, d)))
        .map(|(s, d)| {
            vec![
                s.name.clone(),
                fmt_num(d.statistic),
                d.lags.to_string(),
                d.det.clone(),
                fmt_num(d.cv_1pct),
                fmt_num(d.cv_5pct),
                fmt_num(d.cv_10pct),
                stars(d.reject_1pct, d.reject_5pct, d.reject_10pct).to_string(),
            ]
        })
        .collect();
    if rows.is_empty() {
        return None;
    }
    Some(render_table(
        "Augmented Dickey-Fuller unit-root tests on returns",
        &[
            "Series", "Statistic", "Lags", "Det", "CV 1%", "CV 5%", "CV 10%", "",
        ],
        &rows,
    ))
}

fn nonlin_table(report: &RunReport) -> Option<String> {
    let mut rows: Vec<Vec<String>> = Vec::new();
    for s in &report.series {
        let Some(tests) = &s.nonlin else { continue };
        let order = s.ar.as_ref().map(|a| a.order.to_string()).unwrap_or_default();
        for t in tests {
            rows.push(vec![
                s.name.clone(),
                order.clone(),
                t.name.clone(),
                fmt_num(t.statistic),
                fmt_num(t.p_value),
                stars(t.reject_1pct, t.reject_5pct, t.reject_10pct).to_string(),
            ]);
        }
    }
    if rows.is_empty() {
        return None;
    }
    Some(render_table(
        "Nonlinearity tests on AR-prewhitened returns",
        &["Series", "AR", "Test", "Statistic", "p", ""],
        &rows,
    ))
}

fn scan_table(report: &RunReport) -> Option<String> {
    if report.pairs.is_empty() {
        return None;
    }
    let rows: Vec<Vec<String>> = report
        .pairs
        .iter()
        .map(|p| {
            vec![
                format!("{}/{}", p.x, p.y),
                p.plan.window_length.to_string(),
                p.plan.window_count.to_string(),
                p.plan.lag_depth.to_string(),
                p.var.order.to_string(),
                p.significant_count.to_string(),
                fmt_num(p.significant_percent),
                p.significant_xy.map(|c| c.to_string()).unwrap_or_else(|| "-".into()),
                p.significant_yx.map(|c| c.to_string()).unwrap_or_else(|| "-".into()),
                fmt_num(p.pearson_returns),
                fmt_num(p.pearson_residuals),
            ]
        })
        .collect();
    Some(render_table(
        "Windowed cross-bicorrelation scan",
        &[
            "Pair", "n_w", "Windows", "L", "VAR", "Signif", "%", "xy", "yx",
            "r(returns)", "r(resid)",
        ],
        &rows,
    ))
}

/// Render every table the report has data for, separated by blank lines.
pub fn render_all(report: &RunReport) -> String {
    let mut sections = Vec::new();
    if let Some(t) = summary_table(report) {
        sections.push(t);
    }
    if let Some(t) = adf_table(report) {
        sections.push(t);
    }
    if let Some(t) = nonlin_table(report) {
        sections.push(t);
    }
    if let Some(t) = scan_table(report) {
        sections.push(t);
    }
    sections.join("\n")
}
