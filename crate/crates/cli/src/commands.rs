use std::io::Write;
use std::time::Instant;

use qpt_overlap::analysis::{
    dicke_exponent, format_real, grid_sweep, lin_space, xy_gamma_asymptotics, xy_lambda_asymptotics, xy_scaling, Axis,
    AxisName, DickeBase, Model, PowerLawFit, SweepTable, ValueKind, XyBase, DEFAULT_ASYMPTOTIC_WINDOW,
    DEFAULT_DICKE_WINDOW,
};
use qpt_overlap::dicke::{critical_coupling, DickeParams, SpectrumVariant};
use qpt_overlap::dynamics::loschmidt_echo;
use qpt_overlap::xy::{ground_state_overlap, Direction, XyParams};
use serde::Serialize;

use crate::config::{DirectionArg, Format, Quantity, RunConfig, Settings, VariantArg};
use crate::{open_output, verify, CliError, Command, Recipe};

const GRID_RANGE: (f64, f64) = (-1.5, 1.5);
const GRID_POINTS: usize = 61;
const SCALING_SIZES: [usize; 5] = [1001, 3001, 10_001, 30_001, 100_001];
const PUBLISHED_SITES: f64 = 1e6;
const PUBLISHED_DELTA: f64 = 1e-6;

#[derive(Serialize)]
struct FitReport<'a> {
    fit: &'a str,
    #[serde(flatten)]
    result: PowerLawFit,
    runtime_seconds: f64,
}

#[derive(Serialize)]
struct OverlapReport {
    gamma: f64,
    lambda: f64,
    n_sites: usize,
    delta_gamma: f64,
    delta_lambda: f64,
    log_overlap: f64,
    overlap: f64,
    degenerate: bool,
}

pub fn dispatch(command: &Command, cfg: &RunConfig) -> Result<(), CliError> {
    match command {
        Command::XyGrid(_) => xy_grid(cfg),
        Command::XyScaling(_) => xy_scaling_cmd(cfg),
        Command::XyAsymptotic(_) => xy_asymptotic(cfg),
        Command::XyOverlap(_) => xy_overlap(cfg),
        Command::DickeOverlap(_) => dicke_overlap(cfg),
        Command::DickeExponent(_) => dicke_exponent_cmd(cfg),
        Command::Loschmidt(_) => loschmidt(cfg),
        Command::Verify(_) => verify::run(cfg),
        Command::Reproduce { recipe, .. } => reproduce(*recipe, cfg),
    }
}

fn format_of(cfg: &RunConfig, default: Format) -> Format {
    cfg.settings.format.unwrap_or(default)
}

fn csv_only(cfg: &RunConfig, what: &str) -> Result<(), CliError> {
    match cfg.settings.format {
        Some(Format::Json) => Err(CliError::usage("format", format!("{what} writes csv only"))),
        _ => Ok(()),
    }
}

fn write_table(cfg: &RunConfig, table: &SweepTable) -> Result<(), CliError> {
    let mut out = open_output(cfg)?;
    table.write_csv(&mut out)?;
    out.flush()?;
    Ok(())
}

fn write_reports(cfg: &RunConfig, reports: &[FitReport]) -> Result<(), CliError> {
    let mut out = open_output(cfg)?;
    for r in reports {
        serde_json::to_writer(&mut out, r).map_err(std::io::Error::from)?;
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

/// Writes either the fitted table (csv) or the fit report (json, default).
fn emit_fit(
    cfg: &RunConfig,
    label: &str,
    table: &SweepTable,
    fit: PowerLawFit,
    start: Instant,
) -> Result<(), CliError> {
    match format_of(cfg, Format::Json) {
        Format::Csv => write_table(cfg, table),
        Format::Json => {
            write_reports(cfg, &[FitReport { fit: label, result: fit, runtime_seconds: start.elapsed().as_secs_f64() }])
        }
    }
}

fn variant(s: &Settings) -> SpectrumVariant {
    match s.variant {
        Some(VariantArg::Literature) => SpectrumVariant::Literature,
        _ => SpectrumVariant::Paper,
    }
}

fn dicke_params(s: &Settings) -> Result<DickeParams<f64>, CliError> {
    Ok(DickeParams::new(s.omega0.unwrap_or(1.0), s.omega.unwrap_or(1.0), 0.0, variant(s))?)
}

fn window(s: &Settings, default: (f64, f64)) -> Result<(f64, f64), CliError> {
    let w = (s.window_lo.unwrap_or(default.0), s.window_hi.unwrap_or(default.1));
    if w.0 >= w.1 {
        return Err(CliError::usage("window_lo", format!("window ({}, {}) is empty", w.0, w.1)));
    }
    Ok(w)
}

fn plane_axes(s: &Settings) -> [Axis; 2] {
    let gamma = lin_space(
        s.gamma_min.unwrap_or(GRID_RANGE.0),
        s.gamma_max.unwrap_or(GRID_RANGE.1),
        s.gamma_points.unwrap_or(GRID_POINTS),
    );
    let lambda = lin_space(
        s.lambda_min.unwrap_or(GRID_RANGE.0),
        s.lambda_max.unwrap_or(GRID_RANGE.1),
        s.lambda_points.unwrap_or(GRID_POINTS),
    );
    [Axis::new(AxisName::Gamma, gamma), Axis::new(AxisName::Lambda, lambda)]
}

fn echo_times(s: &Settings, t_max: f64, points: usize) -> Vec<f64> {
    lin_space(0.0, s.t_max.unwrap_or(t_max), s.time_points.unwrap_or(points))
}

fn xy_grid(cfg: &RunConfig) -> Result<(), CliError> {
    csv_only(cfg, "xy-grid")?;
    let s = &cfg.settings;
    let kind = match s.quantity.unwrap_or(Quantity::Overlap) {
        Quantity::Overlap => ValueKind::Overlap,
        Quantity::SLambda => ValueKind::SLambda,
        Quantity::SGamma => ValueKind::SGamma,
        Quantity::EchoMin => ValueKind::EchoMin,
    };
    let base = XyBase::new(0.0, 0.0, s.n_sites.unwrap_or(1001))
        .with_deltas(s.delta_gamma.unwrap_or(PUBLISHED_DELTA), s.delta_lambda.unwrap_or(PUBLISHED_DELTA))
        .with_echo_times(echo_times(s, 50.0, 501));
    let table = grid_sweep(&Model::Xy(base), &plane_axes(s), kind, s.workers)?;
    write_table(cfg, &table)
}

fn direction(s: &Settings) -> Direction {
    match s.direction {
        Some(DirectionArg::Gamma) => Direction::Gamma,
        _ => Direction::Lambda,
    }
}

fn direction_name(d: Direction) -> &'static str {
    match d {
        Direction::Lambda => "s_lambda",
        Direction::Gamma => "s_gamma",
    }
}

fn xy_scaling_cmd(cfg: &RunConfig) -> Result<(), CliError> {
    let s = &cfg.settings;
    let (gamma, lambda) = (s.gamma.unwrap_or(1.0), s.lambda.unwrap_or(1.0));
    let sizes = s.sizes.clone().unwrap_or_else(|| SCALING_SIZES.to_vec());
    let d = direction(s);
    let start = Instant::now();
    let (table, fit) = xy_scaling(gamma, lambda, &sizes, d, s.workers)?;
    let label = format!("{} vs n_sites at gamma = {gamma}, lambda = {lambda}", direction_name(d));
    emit_fit(cfg, &label, &table, fit, start)
}

fn xy_asymptotic(cfg: &RunConfig) -> Result<(), CliError> {
    let s = &cfg.settings;
    let n = s.n_sites.unwrap_or(100_001);
    let w = window(s, DEFAULT_ASYMPTOTIC_WINDOW)?;
    let points = s.points.unwrap_or(11);
    let start = Instant::now();
    let (table, fit, label) = match direction(s) {
        Direction::Lambda => {
            let gamma = s.gamma.unwrap_or(0.5);
            let (t, f) = xy_lambda_asymptotics(gamma, n, w, points, s.workers)?;
            (t, f, format!("s_lambda vs delta at lambda = 1 - delta, gamma = {gamma}, n_sites = {n}"))
        }
        Direction::Gamma => {
            let lambda = s.lambda.unwrap_or(0.5);
            let (t, f) = xy_gamma_asymptotics(lambda, n, w, points, s.workers)?;
            (t, f, format!("s_gamma vs gamma at lambda = {lambda}, n_sites = {n}"))
        }
    };
    emit_fit(cfg, &label, &table, fit, start)
}

fn xy_overlap(cfg: &RunConfig) -> Result<(), CliError> {
    let s = &cfg.settings;
    let p = XyParams::new(s.gamma.unwrap_or(1.0), s.lambda.unwrap_or(0.5), s.n_sites.unwrap_or(1001))?;
    let (dg, dl) = (s.delta_gamma.unwrap_or(0.0), s.delta_lambda.unwrap_or(PUBLISHED_DELTA));
    let o = ground_state_overlap(&p, &p.shifted(dg, dl)?)?;
    let report = OverlapReport {
        gamma: p.gamma(),
        lambda: p.lambda(),
        n_sites: p.n_sites(),
        delta_gamma: dg,
        delta_lambda: dl,
        log_overlap: o.log_overlap,
        overlap: o.overlap,
        degenerate: o.degenerate,
    };
    let mut out = open_output(cfg)?;
    match format_of(cfg, Format::Csv) {
        Format::Json => {
            serde_json::to_writer(&mut out, &report).map_err(std::io::Error::from)?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(out, "gamma,lambda,n_sites,delta_gamma,delta_lambda,log_overlap,overlap,degenerate")?;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                format_real(report.gamma),
                format_real(report.lambda),
                report.n_sites,
                format_real(dg),
                format_real(dl),
                format_real(report.log_overlap),
                format_real(report.overlap),
                report.degenerate
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Overlap between λ and λ + δλ on a grid ending just short of λ_c.
fn dicke_overlap_table(p: &DickeParams<f64>, s: &Settings, delta_lambda: f64) -> Result<SweepTable, CliError> {
    let lc = critical_coupling(p);
    let lo = s.lambda_min.unwrap_or(0.0);
    let hi = s.lambda_max.unwrap_or(lc * (1.0 - 1e-6) - delta_lambda.max(0.0));
    let axis = Axis::new(AxisName::Lambda, lin_space(lo, hi, s.lambda_points.unwrap_or(201)));
    let model = Model::Dicke(DickeBase { params: *p, delta_lambda });
    Ok(grid_sweep(&model, &[axis], ValueKind::DickeOverlap, s.workers)?)
}

fn dicke_overlap(cfg: &RunConfig) -> Result<(), CliError> {
    csv_only(cfg, "dicke-overlap")?;
    let s = &cfg.settings;
    let table = dicke_overlap_table(&dicke_params(s)?, s, s.delta_lambda.unwrap_or(PUBLISHED_DELTA))?;
    write_table(cfg, &table)
}

fn dicke_exponent_cmd(cfg: &RunConfig) -> Result<(), CliError> {
    let s = &cfg.settings;
    let p = dicke_params(s)?;
    let dl = s.delta_lambda.unwrap_or(1e-2);
    if dl <= 0.0 {
        return Err(CliError::usage("delta_lambda", "dicke-exponent needs a positive step"));
    }
    let start = Instant::now();
    let (table, fit) = dicke_exponent(&p, dl, window(s, DEFAULT_DICKE_WINDOW)?, s.points.unwrap_or(9))?;
    let label = format!("overlap vs delta at lambda = lambda_c - delta, delta_lambda = {dl}");
    emit_fit(cfg, &label, &table, fit, start)
}

fn loschmidt(cfg: &RunConfig) -> Result<(), CliError> {
    csv_only(cfg, "loschmidt")?;
    let s = &cfg.settings;
    let p = XyParams::new(s.gamma.unwrap_or(1.0), s.lambda.unwrap_or(1.05), s.n_sites.unwrap_or(1001))?;
    let q = p.shifted(s.delta_gamma.unwrap_or(0.0), s.delta_lambda.unwrap_or(1e-3))?;
    let echo = loschmidt_echo(&p, &q, &echo_times(s, 50.0, 501))?;
    let mut out = open_output(cfg)?;
    writeln!(out, "time,echo")?;
    for (t, l) in echo.times.iter().zip(&echo.values) {
        writeln!(out, "{},{}", format_real(*t), format_real(*l))?;
    }
    out.flush()?;
    Ok(())
}

/// Smallest odd chain length of at least `nominal · scale` sites.
pub fn scaled_sites(nominal: f64, scale: f64) -> usize {
    let n = ((nominal * scale).ceil() as usize).max(3);
    n | 1
}

fn reproduce(recipe: Recipe, cfg: &RunConfig) -> Result<(), CliError> {
    let s = &cfg.settings;
    let scale = s.scale.unwrap_or(1.0);
    let sites = |nominal: f64| scaled_sites(cfg.nominal_sites.or(s.n_sites).map_or(nominal, |n| n as f64), scale);
    let points = |n: Option<usize>| n.unwrap_or(GRID_POINTS);
    match recipe {
        Recipe::Fig1 => {
            csv_only(cfg, "reproduce fig1")?;
            let p = DickeParams::resonant(0.0)?;
            let dl = s.delta_lambda.unwrap_or(PUBLISHED_DELTA);
            let lc = critical_coupling(&p);
            let hi = lc * (1.0 - 1e-6) - dl.max(0.0);
            let axis = Axis::new(AxisName::Lambda, lin_space(0.0, hi, s.lambda_points.unwrap_or(201)));
            let model = Model::Dicke(DickeBase { params: p, delta_lambda: dl });
            write_table(cfg, &grid_sweep(&model, &[axis], ValueKind::DickeOverlap, s.workers)?)
        }
        Recipe::Fig2a | Recipe::Fig2b | Recipe::Fig2c => {
            csv_only(cfg, "reproduce fig2")?;
            let kind = match recipe {
                Recipe::Fig2a => ValueKind::Overlap,
                Recipe::Fig2b => ValueKind::SLambda,
                _ => ValueKind::SGamma,
            };
            let base = XyBase::new(0.0, 0.0, sites(PUBLISHED_SITES))
                .with_deltas(s.delta_gamma.unwrap_or(PUBLISHED_DELTA), s.delta_lambda.unwrap_or(PUBLISHED_DELTA));
            let axes = [
                Axis::new(AxisName::Gamma, lin_space(GRID_RANGE.0, GRID_RANGE.1, points(s.gamma_points))),
                Axis::new(AxisName::Lambda, lin_space(GRID_RANGE.0, GRID_RANGE.1, points(s.lambda_points))),
            ];
            write_table(cfg, &grid_sweep(&Model::Xy(base), &axes, kind, s.workers)?)
        }
        Recipe::Scaling => {
            json_only(cfg, "reproduce scaling")?;
            let sizes: Vec<usize> = SCALING_SIZES.iter().map(|&n| scaled_sites((n - 1) as f64, scale)).collect();
            let cases = [
                (1.0, 1.0, Direction::Lambda),
                (0.5, 1.0, Direction::Lambda),
                (0.25, 1.0, Direction::Lambda),
                (1.0, 0.5, Direction::Lambda),
                (0.5, 1.0, Direction::Gamma),
            ];
            let mut runs = Vec::new();
            for (gamma, lambda, d) in cases {
                let start = Instant::now();
                let (_, fit) = xy_scaling(gamma, lambda, &sizes, d, s.workers)?;
                let label = format!("{} vs n_sites at gamma = {gamma}, lambda = {lambda}", direction_name(d));
                runs.push((label, fit, start.elapsed().as_secs_f64()));
            }
            let reports: Vec<FitReport> = runs
                .iter()
                .map(|(label, fit, t)| FitReport { fit: label, result: *fit, runtime_seconds: *t })
                .collect();
            write_reports(cfg, &reports)
        }
        Recipe::Asymptotic => {
            json_only(cfg, "reproduce asymptotic")?;
            let n = sites(PUBLISHED_SITES);
            let pts = s.points.unwrap_or(11);
            let start = Instant::now();
            let (_, alpha) = xy_lambda_asymptotics(0.5, n, DEFAULT_ASYMPTOTIC_WINDOW, pts, s.workers)?;
            let alpha_time = start.elapsed().as_secs_f64();
            let start = Instant::now();
            let (_, beta) = xy_gamma_asymptotics(0.5, n, DEFAULT_ASYMPTOTIC_WINDOW, pts, s.workers)?;
            let l1 = format!("s_lambda vs delta at lambda = 1 - delta, gamma = 0.5, n_sites = {n}");
            let l2 = format!("s_gamma vs gamma at lambda = 0.5, n_sites = {n}");
            write_reports(
                cfg,
                &[
                    FitReport { fit: &l1, result: alpha, runtime_seconds: alpha_time },
                    FitReport { fit: &l2, result: beta, runtime_seconds: start.elapsed().as_secs_f64() },
                ],
            )
        }
        Recipe::DickeExponent => {
            let p = DickeParams::resonant(0.0)?;
            let dl = s.delta_lambda.unwrap_or(1e-2);
            if dl <= 0.0 {
                return Err(CliError::usage("delta_lambda", "dicke-exponent needs a positive step"));
            }
            let start = Instant::now();
            let (table, fit) = dicke_exponent(&p, dl, DEFAULT_DICKE_WINDOW, s.points.unwrap_or(9))?;
            let label = format!("overlap vs delta at lambda = lambda_c - delta, delta_lambda = {dl}");
            emit_fit(cfg, &label, &table, fit, start)
        }
    }
}

fn json_only(cfg: &RunConfig, what: &str) -> Result<(), CliError> {
    match cfg.settings.format {
        Some(Format::Csv) => Err(CliError::usage("format", format!("{what} writes json fit reports only"))),
        _ => Ok(()),
    }
}
