//! Subcommand orchestration and the exit-code policy.
//!
//! Failures are classified by phase: configuration problems exit 2 (clap
//! reports its own parse failures with the same status), loading/alignment
//! problems exit 3, and numerical or emission failures exit 4.

use std::fs;

use xbicorr_core::bicorr::{run_xbicorr, XBicorrConfig, XBicorrReport};
use xbicorr_core::ingest::{align, load_price_csv, to_returns, CsvSchema, PriceSeries, ReturnSeries};
use xbicorr_core::nonlin::{bds, engle_lm, mcleod_li, BdsConfig};
use xbicorr_core::prewhiten::{prewhiten_pair, prewhiten_univariate, VarFit};
use xbicorr_core::sim::synthetic_panel;
use xbicorr_core::summary::{describe, pearson_corr};
use xbicorr_core::unitroot::{adf, schwert_max_lags, DetTerms};

use crate::cli::{
    BatteryArgs, Cli, Command, DescribeArgs, DetArg, InputArgs, NonlinArgs, OutputArgs,
    PipelineArgs, ScanArgs, SimulateArgs, UnitrootArgs, XbicorrArgs,
};
use crate::emit::{emit, Fig1Series};
use crate::report::{
    det_name, exclusion_name, round6, AdfDto, ArDto, EpochDto, PairReport, Parameters, RunReport,
    SeriesReport, SummaryDto, TestDto, VarDto, WindowDto, PlanDto,
};

/// A classified failure: what to print and which status to exit with.
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn data(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }

    fn compute(e: xbicorr_core::Error) -> Self {
        Failure { code: 4, message: e.to_string() }
    }

    fn emit(e: xbicorr_core::Error) -> Self {
        Failure { code: 4, message: format!("emit failed: {e}") }
    }
}

pub fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Describe(args) => run_describe(args),
        Command::Unitroot(args) => run_unitroot(args),
        Command::Nonlin(args) => run_nonlin(args),
        Command::Xbicorr(args) => run_scan(args),
        Command::Pipeline(args) => run_pipeline(args),
        Command::Simulate(args) => run_simulate(args),
    }
}

struct Loaded {
    sources: Vec<String>,
    prices: Vec<PriceSeries>,
    returns: Vec<ReturnSeries>,
    dropped: Vec<usize>,
}

fn load_inputs(input: &InputArgs) -> Result<Loaded, Failure> {
    let schema = CsvSchema {
        date_col: input.date_col.clone(),
        price_col: input.price_col.clone(),
        date_format: input.date_format.clone(),
        delimiter: b',',
        lenient: input.lenient,
    };

    let mut raw: Vec<PriceSeries> = Vec::new();
    let mut dropped: Vec<usize> = Vec::new();
    let mut sources: Vec<String> = Vec::new();
    for path in &input.inputs {
        let (series, parse_dropped) = load_price_csv(path, &schema)
            .map_err(|e| Failure::data(format!("failed to load {}: {e}", path.display())))?;
        if raw.iter().any(|s| s.name == series.name) {
            return Err(Failure::config(format!(
                "two inputs produce the series name '{}'; rename one file",
                series.name
            )));
        }
        sources.push(path.display().to_string());
        dropped.push(parse_dropped);
        raw.push(series);
    }

    let prices = if raw.len() >= 2 {
        let panel = align(&raw).map_err(|e| Failure::data(format!("alignment failed: {e}")))?;
        for (name, n) in &panel.dropped {
            if let Some(i) = raw.iter().position(|s| &s.name == name) {
                dropped[i] += n;
            }
        }
        panel.price_series()
    } else {
        raw
    };

    let returns = prices
        .iter()
        .map(to_returns)
        .collect::<xbicorr_core::Result<Vec<_>>>()
        .map_err(|e| Failure::data(format!("returns transform failed: {e}")))?;

    Ok(Loaded { sources, prices, returns, dropped })
}

fn base_params(input: &InputArgs) -> Parameters {
    Parameters {
        inputs: input.inputs.iter().map(|p| p.display().to_string()).collect(),
        date_col: input.date_col.clone(),
        price_col: input.price_col.clone(),
        date_format: input.date_format.clone(),
        lenient: input.lenient,
        ..Parameters::default()
    }
}

fn series_skeleton(loaded: &Loaded) -> Vec<SeriesReport> {
    loaded
        .prices
        .iter()
        .enumerate()
        .map(|(i, p)| SeriesReport {
            name: p.name.clone(),
            source: loaded.sources[i].clone(),
            observations: p.values.len(),
            dropped_rows: loaded.dropped[i],
            returns_n: loaded.returns[i].values.len(),
            summary: None,
            adf: None,
            ar: None,
            nonlin: None,
        })
        .collect()
}

fn det_terms(arg: DetArg) -> DetTerms {
    match arg {
        DetArg::Ct => DetTerms::ConstantTrend,
        DetArg::C => DetTerms::Constant,
    }
}

fn finish(report: &RunReport, fig1: &[Fig1Series], output: &OutputArgs) -> Result<(), Failure> {
    let files = emit(report, fig1, &output.out, &output.format).map_err(Failure::emit)?;
    for f in files {
        crate::emit::chat(&format!("wrote {}\n", f.display()));
    }
    Ok(())
}

fn run_describe(args: DescribeArgs) -> Result<(), Failure> {
    let loaded = load_inputs(&args.input)?;
    let mut report = RunReport::new("describe", base_params(&args.input));
    report.series = series_skeleton(&loaded);
    fill_summaries(&mut report, &loaded)?;
    finish(&report, &[], &args.output)
}

fn fill_summaries(report: &mut RunReport, loaded: &Loaded) -> Result<(), Failure> {
    for (i, r) in loaded.returns.iter().enumerate() {
        let s = describe(r).map_err(Failure::compute)?;
        report.series[i].summary = Some(SummaryDto::from_core(&s));
    }
    Ok(())
}

fn run_unitroot(args: UnitrootArgs) -> Result<(), Failure> {
    let loaded = load_inputs(&args.input)?;
    let det = det_terms(args.det);
    let mut params = base_params(&args.input);
    params.det = Some(det_name(det).to_string());
    params.p_max = args.order.p_max;
    let mut report = RunReport::new("unitroot", params);
    report.series = series_skeleton(&loaded);
    fill_adf(&mut report, &loaded, args.order.p_max, det)?;
    finish(&report, &[], &args.output)
}

fn fill_adf(
    report: &mut RunReport,
    loaded: &Loaded,
    p_max: Option<usize>,
    det: DetTerms,
) -> Result<(), Failure> {
    for (i, r) in loaded.returns.iter().enumerate() {
        let max_lags = p_max.unwrap_or_else(|| schwert_max_lags(r.values.len()));
        let a = adf(&r.values, max_lags, det).map_err(Failure::compute)?;
        report.series[i].adf = Some(AdfDto::from_core(&a));
    }
    Ok(())
}

fn battery_params(params: &mut Parameters, battery: &BatteryArgs, p_max: Option<usize>) {
    params.lags = Some(battery.lags.clone());
    params.bds_grid = Some(
        battery
            .bds_grid
            .iter()
            .map(|s| format!("{}:{}", s.embedding, s.epsilon_multiplier))
            .collect(),
    );
    params.p_max = p_max;
}

fn fill_nonlin(
    report: &mut RunReport,
    loaded: &Loaded,
    battery: &BatteryArgs,
    p_max: Option<usize>,
) -> Result<(), Failure> {
    for (i, r) in loaded.returns.iter().enumerate() {
        let cap = p_max.unwrap_or_else(|| schwert_max_lags(r.values.len()));
        let (fit, residuals) = prewhiten_univariate(r, cap).map_err(Failure::compute)?;
        let mut tests = Vec::new();
        for &q in &battery.lags {
            tests.push(TestDto::from_core(
                &mcleod_li(&residuals.values, q).map_err(Failure::compute)?,
            ));
        }
        for &q in &battery.lags {
            tests.push(TestDto::from_core(
                &engle_lm(&residuals.values, q).map_err(Failure::compute)?,
            ));
        }
        for spec in &battery.bds_grid {
            let cfg = BdsConfig::new(spec.embedding, spec.epsilon_multiplier);
            tests.push(TestDto::from_core(
                &bds(&residuals.values, &cfg).map_err(Failure::compute)?,
            ));
        }
        report.series[i].ar = Some(ArDto::from_core(&fit));
        report.series[i].nonlin = Some(tests);
    }
    Ok(())
}

fn run_nonlin(args: NonlinArgs) -> Result<(), Failure> {
    let loaded = load_inputs(&args.input)?;
    let mut params = base_params(&args.input);
    battery_params(&mut params, &args.battery, args.order.p_max);
    let mut report = RunReport::new("nonlin", params);
    report.series = series_skeleton(&loaded);
    fill_nonlin(&mut report, &loaded, &args.battery, args.order.p_max)?;
    finish(&report, &[], &args.output)
}

fn scan_params(params: &mut Parameters, scan: &ScanArgs) {
    params.exponent = Some(scan.exponent);
    params.alpha = Some(scan.alpha);
    params.exclusion = Some(exclusion_name(scan.exclusion.into()).to_string());
    params.directions = Some(
        match scan.directions {
            crate::cli::DirectionsArg::Xy => "xy",
            crate::cli::DirectionsArg::Yx => "yx",
            crate::cli::DirectionsArg::Both => "both",
        }
        .to_string(),
    );
    params.combination = Some(
        match scan.combination {
            crate::cli::CombinationArg::Either => "either",
            crate::cli::CombinationArg::Both => "both",
        }
        .to_string(),
    );
    params.lag_depth = scan.lag_depth;
}

/// Resolve the pair list: explicit `--pair` names validated against loaded
/// series, or every unordered pair in input order by default.
fn resolve_pairs(loaded: &Loaded, scan: &ScanArgs) -> Result<Vec<(usize, usize)>, Failure> {
    let names: Vec<&str> = loaded.returns.iter().map(|r| r.name.as_str()).collect();
    if scan.pairs.is_empty() {
        let mut v = Vec::new();
        for i in 0..names.len() {
            for j in (i + 1)..names.len() {
                v.push((i, j));
            }
        }
        return Ok(v);
    }
    scan.pairs
        .iter()
        .map(|(a, b)| {
            let find = |want: &str| {
                names.iter().position(|n| *n == want).ok_or_else(|| {
                    Failure::config(format!(
                        "--pair names unknown series '{want}' (loaded: {})",
                        names.join(", ")
                    ))
                })
            };
            Ok((find(a)?, find(b)?))
        })
        .collect()
}

fn scan_pairs(
    loaded: &Loaded,
    scan: &ScanArgs,
    p_max: Option<usize>,
) -> Result<Vec<PairReport>, Failure> {
    let pair_indices = resolve_pairs(loaded, scan)?;
    let config = XBicorrConfig {
        exponent: scan.exponent,
        alpha: scan.alpha,
        exclusion_rule: scan.exclusion.into(),
        directions: scan.directions.into(),
        combination: scan.combination.into(),
        lag_depth: scan.lag_depth,
    };

    let mut pairs = Vec::new();
    for (i, j) in pair_indices {
        let rx = &loaded.returns[i];
        let ry = &loaded.returns[j];
        let cap = p_max.unwrap_or_else(|| schwert_max_lags(rx.values.len()));
        let (var_fit, res_x, res_y) = prewhiten_pair(rx, ry, cap).map_err(Failure::compute)?;
        let pearson_returns =
            pearson_corr(&rx.values, &ry.values).map_err(Failure::compute)?;
        let pearson_residuals =
            pearson_corr(&res_x.values, &res_y.values).map_err(Failure::compute)?;
        let scan_report = run_xbicorr(&res_x, &res_y, &config).map_err(Failure::compute)?;
        pairs.push(pair_report(
            &var_fit,
            pearson_returns,
            pearson_residuals,
            &scan_report,
        ));
    }
    Ok(pairs)
}

fn pair_report(
    var_fit: &VarFit,
    pearson_returns: f64,
    pearson_residuals: f64,
    rep: &XBicorrReport,
) -> PairReport {
    PairReport {
        x: rep.pair.0.clone(),
        y: rep.pair.1.clone(),
        var: VarDto::from_core(var_fit),
        pearson_returns: round6(pearson_returns),
        pearson_residuals: round6(pearson_residuals),
        plan: PlanDto::from_core(&rep.plan),
        alpha: rep.alpha,
        significant_count: rep.significant_count,
        significant_fraction: round6(rep.significant_fraction),
        significant_percent: round6(100.0 * rep.significant_fraction),
        significant_xy: rep.significant_xy,
        significant_yx: rep.significant_yx,
        degenerate_windows: rep.degenerate_windows.clone(),
        windows: rep
            .per_window
            .iter()
            .map(|w| WindowDto::from_core(w, rep.alpha))
            .collect(),
        epochs: rep.epochs.iter().map(EpochDto::from_core).collect(),
    }
}

fn run_scan(args: XbicorrArgs) -> Result<(), Failure> {
    if args.input.inputs.len() < 2 {
        return Err(Failure::config(
            "the cross-bicorrelation scan needs at least two --input series",
        ));
    }
    let loaded = load_inputs(&args.input)?;
    let mut params = base_params(&args.input);
    scan_params(&mut params, &args.scan);
    params.p_max = args.order.p_max;
    let mut report = RunReport::new("xbicorr", params);
    report.series = series_skeleton(&loaded);
    report.pairs = scan_pairs(&loaded, &args.scan, args.order.p_max)?;
    finish(&report, &[], &args.output)
}

fn run_pipeline(args: PipelineArgs) -> Result<(), Failure> {
    if args.input.inputs.len() < 2 {
        return Err(Failure::config(
            "the pipeline needs at least two --input series",
        ));
    }
    let loaded = load_inputs(&args.input)?;
    let det = det_terms(args.det);

    let mut params = base_params(&args.input);
    params.det = Some(det_name(det).to_string());
    battery_params(&mut params, &args.battery, args.order.p_max);
    scan_params(&mut params, &args.scan);

    let mut report = RunReport::new("pipeline", params);
    report.series = series_skeleton(&loaded);
    fill_summaries(&mut report, &loaded)?;
    fill_adf(&mut report, &loaded, args.order.p_max, det)?;
    fill_nonlin(&mut report, &loaded, &args.battery, args.order.p_max)?;
    report.pairs = scan_pairs(&loaded, &args.scan, args.order.p_max)?;

    let fig1: Vec<Fig1Series> = loaded
        .prices
        .iter()
        .zip(&loaded.returns)
        .map(|(p, r)| Fig1Series {
            name: p.name.clone(),
            rows: p
                .dates
                .iter()
                .zip(&p.values)
                .enumerate()
                .map(|(t, (d, &price))| {
                    let ret = if t == 0 { None } else { Some(round6(r.values[t - 1])) };
                    (d.to_string(), round6(price), ret)
                })
                .collect(),
        })
        .collect();

    finish(&report, &fig1, &args.output)
}

fn run_simulate(args: SimulateArgs) -> Result<(), Failure> {
    let panel = synthetic_panel(args.seed, args.length);
    fs::create_dir_all(&args.out)
        .map_err(|e| Failure::emit(xbicorr_core::Error::Io(e)))?;
    for series in &panel {
        let path = args.out.join(format!("{}.csv", series.name));
        let mut w = csv::Writer::from_path(&path)
            .map_err(|e| Failure::emit(xbicorr_core::Error::Csv(e)))?;
        w.write_record(["date", "price"])
            .map_err(|e| Failure::emit(xbicorr_core::Error::Csv(e)))?;
        for (date, price) in series.dates.iter().zip(&series.values) {
            // Shortest round-trip formatting: reading the file back yields
            // bit-identical prices, so downstream runs are reproducible.
            w.write_record([date.to_string(), format!("{price}")])
                .map_err(|e| Failure::emit(xbicorr_core::Error::Csv(e)))?;
        }
        w.flush()
            .map_err(|e| Failure::emit(xbicorr_core::Error::Io(e)))?;
        crate::emit::chat(&format!("wrote {}\n", path.display()));
    }
    Ok(())
}
