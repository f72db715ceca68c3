//! `weakval` command-line front end.
//!
//! Primary results go to standard output (JSON or CSV); warnings and
//! diagnostics go to standard error. Exit status is 0 on success, 1 on
//! errors and 2 when independent routes disagree.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod report;

use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use weakval_core::ensemble::{sqrtn_study_with, PointerSampler, SampleStats, WEAKNESS_WARNING_THRESHOLD};
use weakval_core::expr::{ExprWave, WaveExpr};
use weakval_core::extraction::{extract_with, DualExtractor, Extractor, ExtractorRegistry, FiniteDifferenceExtractor, Method};
use weakval_core::pointer::{default_grid, grid_evaluate, AvSeries, GridSpec, GridTable, Wave};
use weakval_core::quantum::weak_value_direct;
use weakval_core::scenarios::{write_atomic, Scenario, ScenarioSystem};
use weakval_core::{Error, Result};

use args::{parse_betas, parse_count, parse_counts, parse_grid, parse_orders, parse_param, List, MethodArg, ScenarioSource};
use report::{to_json, Cplx, Deltas, EnsembleReport, ExtractReport, ReferenceSource, RunReport};

/// Agreement threshold between extraction and the direct ratio, relative to `max(1, |direct|)`.
pub const AGREEMENT_TOLERANCE: f64 = 1e-8;

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_DISAGREEMENT: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "weakval", version, about = "Weak-value simulation and log-derivative extraction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract the weak value of a scenario and compare it with the direct ratio.
    Run {
        #[command(flatten)]
        source: ScenarioSource,
        #[arg(long, value_enum, default_value = "dual")]
        method: MethodArg,
        /// Also sample the pointer ensemble.
        #[arg(long)]
        ensemble: bool,
        #[arg(long, env = "WEAKVAL_SEED")]
        seed: Option<u64>,
        /// Include wall-clock time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Extract the weak value from a wavefunction expression.
    Extract {
        #[arg(long = "expr")]
        expr: String,
        /// Pointer coordinate variable.
        #[arg(long, default_value = "Q")]
        pointer: String,
        /// Width parameter variable.
        #[arg(long, default_value = "beta")]
        width: String,
        /// NAME=VALUE, value a constant expression such as `pi/6`.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, Complex64)>,
        /// NAME=DEGREES, converted to radians.
        #[arg(long = "param-deg", value_parser = parse_param)]
        params_deg: Vec<(String, Complex64)>,
        /// Cross-check with finite differences.
        #[arg(long)]
        check_fd: bool,
    },
    /// Distance of truncated AV series from the exact pointer, per order (CSV).
    Series {
        #[command(flatten)]
        source: ScenarioSource,
        /// `a..b` or a comma list.
        #[arg(long, default_value = "1..8", value_parser = parse_orders)]
        orders: List<usize>,
        /// Comma list of widths; defaults to the scenario's.
        #[arg(long, value_parser = parse_betas)]
        beta: Option<List<f64>>,
        /// MIN,MAX,POINTS.
        #[arg(long, value_parser = parse_grid)]
        grid: Option<GridSpec>,
    },
    /// Sample pointer readouts and compare the mean with Re C_w.
    Ensemble {
        #[command(flatten)]
        source: ScenarioSource,
        /// Sample count; defaults to the scenario's `ensemble_n`.
        #[arg(long, value_parser = parse_count)]
        n: Option<usize>,
        /// Ascending sample counts for a standard-error scaling study.
        #[arg(long, value_parser = parse_counts)]
        study: Option<List<usize>>,
        /// Write the samples as CSV.
        #[arg(long)]
        samples: Option<PathBuf>,
        #[arg(long, env = "WEAKVAL_SEED")]
        seed: Option<u64>,
        /// Sample partitions on all cores (same output).
        #[arg(long)]
        parallel: bool,
        #[arg(long, value_parser = parse_grid)]
        grid: Option<GridSpec>,
    },
    /// Tabulate the post-selected pointer wavefunction (CSV).
    Profile {
        #[command(flatten)]
        source: ScenarioSource,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_parser = parse_grid)]
        grid: Option<GridSpec>,
    },
}

/// Runs one command. Returns the process exit status.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let result = match &cli.command {
        Command::Run { source, method, ensemble, seed, timing } => {
            cmd_run(source, (*method).into(), *ensemble, *seed, *timing, out)
        }
        Command::Extract { expr, pointer, width, params, params_deg, check_fd } => {
            cmd_extract(expr, pointer, width, params, params_deg, *check_fd, out)
        }
        Command::Series { source, orders, beta, grid } => cmd_series(source, &orders.0, beta.as_ref().map(|b| b.0.as_slice()), *grid, out, err),
        Command::Ensemble { source, n, study, samples, seed, parallel, grid } => cmd_ensemble(
            source,
            EnsembleOptions { n: *n, study: study.as_ref().map(|s| s.0.as_slice()), seed: *seed, parallel: *parallel, grid: *grid },
            samples.as_deref(),
            out,
            err,
        ),
        Command::Profile { source, out: path, grid } => cmd_profile(source, path.as_deref(), *grid, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn cmd_run(
    source: &ScenarioSource,
    method: Method,
    with_ensemble: bool,
    seed: Option<u64>,
    timing: bool,
    out: &mut dyn Write,
) -> Result<u8> {
    let start = Instant::now();
    let scenario = source.load()?;
    let registry = ExtractorRegistry::default();
    let other = match method {
        Method::Dual => Method::FiniteDifference,
        Method::FiniteDifference => Method::Dual,
    };
    let primary = registry.get(&method.to_string())?;
    let cross = registry.get(&other.to_string())?;

    let (direct, result, weakness) = match scenario.system()? {
        ScenarioSystem::Matrix(m) => {
            let wave = scenario.postselected_wave()?;
            let direct = weak_value_direct(&m.pre, &m.post, &m.obs)?.value;
            (Some(direct), extract_with(&wave, primary, Some(cross))?, Some(wave.weakness_parameter()))
        }
        ScenarioSystem::Expression(w) => (None, extract_with(&w, primary, Some(cross))?, None),
    };
    let extracted_vs_direct = direct.map(|d| (result.weak_value - d).norm());
    // Without a direct ratio, agreement means the two extraction methods agree.
    let agreement = match (direct, extracted_vs_direct) {
        (Some(d), Some(delta)) => delta <= AGREEMENT_TOLERANCE * d.norm().max(1.0),
        _ => result.consistent,
    };
    let ensemble = if with_ensemble {
        Some(ensemble_report(&scenario, &EnsembleOptions { seed, ..EnsembleOptions::default() }, None)?.0)
    } else {
        None
    };
    let report = RunReport {
        scenario: scenario.name.clone(),
        direct: direct.map(Cplx::from),
        extracted: result.weak_value.into(),
        method: result.method,
        cross_check: result.cross_check.map(Cplx::from),
        deltas: Deltas { extracted_vs_direct, primary_vs_cross_check: result.cross_check_delta },
        weakness_parameter: weakness,
        agreement,
        ensemble,
        timing_ms: timing.then(|| start.elapsed().as_secs_f64() * 1e3),
    };
    writeln!(out, "{}", to_json(&report)?).map_err(io)?;
    Ok(if agreement { EXIT_OK } else { EXIT_DISAGREEMENT })
}

fn cmd_extract(
    source: &str,
    pointer: &str,
    width: &str,
    params: &[(String, Complex64)],
    params_deg: &[(String, Complex64)],
    check_fd: bool,
    out: &mut dyn Write,
) -> Result<u8> {
    let expr = WaveExpr::parse(source)?;
    let mut bound: HashMap<String, Complex64> = HashMap::new();
    let to_rad = std::f64::consts::PI / 180.0;
    let all = params.iter().cloned().chain(params_deg.iter().map(|(k, v)| (k.clone(), v * to_rad)));
    for (name, value) in all {
        if bound.insert(name.clone(), value).is_some() {
            return Err(Error::InvalidArgument(format!("parameter `{name}` given more than once")));
        }
    }
    let wave = ExprWave::new(expr.clone(), pointer, width, bound)?;
    let fd = FiniteDifferenceExtractor::default();
    let cross: Option<&dyn Extractor> = if check_fd { Some(&fd) } else { None };
    let result = extract_with(&wave, &DualExtractor, cross)?;
    let report = ExtractReport {
        expression: expr.to_string(),
        weak_value: result.weak_value.into(),
        method: result.method,
        cross_check: result.cross_check.map(Cplx::from),
        cross_check_delta: result.cross_check_delta,
        consistent: result.consistent,
    };
    writeln!(out, "{}", to_json(&report)?).map_err(io)?;
    Ok(if result.consistent { EXIT_OK } else { EXIT_DISAGREEMENT })
}

fn cmd_series(
    source: &ScenarioSource,
    orders: &[usize],
    betas: Option<&[f64]>,
    grid: Option<GridSpec>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<u8> {
    let scenario = source.load()?;
    let ScenarioSystem::Matrix(m) = scenario.system()? else {
        return Err(Error::InvalidArgument(format!(
            "scenario `{}` is expression-defined; the series needs a matrix system",
            scenario.name
        )));
    };
    let betas = betas.map(<[f64]>::to_vec).unwrap_or_else(|| vec![scenario.beta]);
    let series: Vec<(usize, AvSeries)> =
        orders.iter().map(|&k| AvSeries::new(&m.pre, &m.post, &m.obs, k).map(|s| (k, s))).collect::<Result<_>>()?;
    let base = scenario.postselected_wave()?;
    let mut csv = String::from("beta,weakness,order,distance\n");
    let mut flags = Vec::new();
    for &beta in &betas {
        if !(beta > 0.0) {
            return Err(Error::InvalidArgument(format!("series needs beta > 0, got {beta}")));
        }
        let exact = base.with_beta(beta)?;
        let spec = grid.or(scenario.grid).map_or_else(|| exact.default_grid(), Ok)?;
        let exact_table = grid_evaluate(|q| Ok(exact.at(q)), spec)?;
        let mut distances = Vec::with_capacity(series.len());
        for (order, s) in &series {
            let table = grid_evaluate(|q| Ok(s.eval(beta, q)), spec)?;
            let d = table.normalized_distance(&exact_table)?;
            csv.push_str(&format!("{beta:.16e},{:.16e},{order},{d:.16e}\n", exact.weakness_parameter()));
            distances.push(d);
        }
        // Differences at the rounding floor do not break the trend.
        let monotone = distances.windows(2).all(|w| w[1] <= w[0] + 1e-12);
        flags.push(format!("beta={beta:e}: monotone={monotone}"));
    }
    out.write_all(csv.as_bytes()).map_err(io)?;
    for f in flags {
        writeln!(err, "{f}").map_err(io)?;
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Default)]
struct EnsembleOptions<'a> {
    n: Option<usize>,
    study: Option<&'a [usize]>,
    seed: Option<u64>,
    parallel: bool,
    grid: Option<GridSpec>,
}

/// The wave tabulated on its grid, plus the Re C_w reference for the mean.
fn tabulate(scenario: &Scenario, grid: Option<GridSpec>) -> Result<(GridTable, f64, ReferenceSource, Option<f64>)> {
    match scenario.system()? {
        ScenarioSystem::Matrix(m) => {
            let wave = scenario.postselected_wave()?;
            let spec = grid.or(scenario.grid).map_or_else(|| wave.default_grid(), Ok)?;
            let table = grid_evaluate(|q| Ok(wave.at(q)), spec)?;
            let wv = weak_value_direct(&m.pre, &m.post, &m.obs)?.value;
            Ok((table, wv.re, ReferenceSource::Direct, Some(wave.weakness_parameter())))
        }
        ScenarioSystem::Expression(w) => {
            let beta = Complex64::new(scenario.beta, 0.0);
            let spec = grid.or(scenario.grid).map_or_else(|| default_grid(scenario.beta, 0.0), Ok)?;
            let table = grid_evaluate(|q| w.eval_complex(Complex64::new(q, 0.0), beta), spec)?;
            let wv = DualExtractor.extract(&w)?;
            Ok((table, wv.re, ReferenceSource::Extracted, None))
        }
    }
}

fn ensemble_report(
    scenario: &Scenario,
    opts: &EnsembleOptions,
    warn: Option<&mut dyn Write>,
) -> Result<(EnsembleReport, Vec<f64>)> {
    if !(scenario.beta > 0.0) {
        return Err(Error::InvalidArgument(format!("sampling needs beta > 0, got {}", scenario.beta)));
    }
    let (table, reference, reference_source, weakness) = tabulate(scenario, opts.grid)?;
    if let Some(sink) = warn {
        if let Some(w) = weakness.filter(|&w| w > WEAKNESS_WARNING_THRESHOLD) {
            writeln!(
                sink,
                "warning: beta*max|c|^2 = {w:.3} exceeds {WEAKNESS_WARNING_THRESHOLD}; the mean need not track Re C_w"
            )
            .map_err(io)?;
        }
        // An amplified weak value far outside the spectrum needs a weaker coupling still.
        let amplified = scenario.beta * reference * reference;
        if amplified > WEAKNESS_WARNING_THRESHOLD {
            writeln!(
                sink,
                "warning: beta*(Re C_w)^2 = {amplified:.3} exceeds {WEAKNESS_WARNING_THRESHOLD}; expect the mean to fall short of Re C_w"
            )
            .map_err(io)?;
        }
    }
    let sampler = PointerSampler::from_table(&table)?;
    let seed = opts.seed.unwrap_or(scenario.seed);
    let n = opts.n.unwrap_or(scenario.ensemble_n);
    if n < 2 {
        return Err(Error::InvalidArgument(format!("ensemble needs at least 2 samples, got {n}")));
    }
    let samples = if opts.parallel { sampler.sample_parallel(n, seed) } else { sampler.sample(n, seed) };
    let stats = SampleStats::from_samples(&samples)?;
    let study = opts.study.map(|sizes| sqrtn_study_with(&sampler, sizes, seed)).transpose()?;
    let report = EnsembleReport {
        scenario: scenario.name.clone(),
        seed,
        n,
        mean: stats.mean,
        std_dev: stats.std_dev,
        std_error: stats.std_error,
        reference,
        reference_source,
        deviation_std_errors: (stats.mean - reference).abs() / stats.std_error,
        weakness_parameter: weakness,
        study,
    };
    Ok((report, samples))
}

fn cmd_ensemble(
    source: &ScenarioSource,
    opts: EnsembleOptions,
    samples_path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<u8> {
    let scenario = source.load()?;
    let (report, samples) = ensemble_report(&scenario, &opts, Some(err))?;
    let json = to_json(&report)?;
    if let Some(path) = samples_path {
        let mut csv = String::with_capacity(samples.len() * 24 + 2);
        csv.push_str("Q\n");
        for q in &samples {
            csv.push_str(&format!("{q:.16e}\n"));
        }
        write_atomic(path, csv.as_bytes())?;
    }
    writeln!(out, "{json}").map_err(io)?;
    Ok(EXIT_OK)
}

fn cmd_profile(
    source: &ScenarioSource,
    path: Option<&Path>,
    grid: Option<GridSpec>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<u8> {
    let scenario = source.load()?;
    let (table, _, _, _) = tabulate(&scenario, grid)?;
    let mut csv = Vec::new();
    table.write_csv(&mut csv)?;
    match path {
        Some(p) => {
            write_atomic(p, &csv)?;
            writeln!(err, "wrote {} rows to {}", table.q.len(), p.display()).map_err(io)?;
        }
        None => out.write_all(&csv).map_err(io)?,
    }
    Ok(EXIT_OK)
}
