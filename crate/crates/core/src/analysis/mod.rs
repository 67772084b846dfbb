//! Parameter sweeps and power-law fits.
//!
//! Fit windows are always explicit. The defaults used by the recipes below
//! keep the asymptotic fits away from the finite-size crossover `Δ ~ 1/N`.

mod fit;
mod sweep;

pub use fit::{asymptotic_fit, power_law_fit, scaling_fit, PowerLawFit};
pub use sweep::{
    format_real, grid_sweep, Axis, AxisName, Cell, DickeBase, Model, SweepRow, SweepTable, ValueKind, XyBase,
};

use crate::dicke::DickeParams;
use crate::error::{Error, Result};
use crate::xy::Direction;

/// Default `|1 − λ|` (or `γ`) window for the asymptotic exponents.
pub const DEFAULT_ASYMPTOTIC_WINDOW: (f64, f64) = (1e-3, 1e-1);

/// Default `Δ` window for the Dicke overlap exponent.
pub const DEFAULT_DICKE_WINDOW: (f64, f64) = (1e-8, 1e-4);

/// `n` evenly spaced points from `lo` to `hi` inclusive. The end points are
/// hit exactly.
pub fn lin_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect(),
    }
}

/// `n` log-spaced points from `lo` to `hi` inclusive, end points exact so
/// they survive a window filter on the same bounds.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = lin_space(lo.ln(), hi.ln(), n).into_iter().map(f64::exp).collect();
    if let Some(first) = v.first_mut() {
        *first = lo;
    }
    if n > 1 {
        v[n - 1] = hi;
    }
    v
}

fn kind_of(direction: Direction) -> ValueKind {
    match direction {
        Direction::Lambda => ValueKind::SLambda,
        Direction::Gamma => ValueKind::SGamma,
    }
}

/// `S^q_N(γ, λ)` over chain lengths and its scaling exponent.
pub fn xy_scaling(
    gamma: f64,
    lambda: f64,
    sizes: &[usize],
    direction: Direction,
    workers: Option<usize>,
) -> Result<(SweepTable, PowerLawFit)> {
    let model = Model::Xy(XyBase::new(gamma, lambda, 3));
    let table = grid_sweep(&model, &[Axis::sizes(sizes)], kind_of(direction), workers)?;
    let fit = scaling_fit(&table)?;
    Ok((table, fit))
}

/// `S^λ` at `λ = 1 − Δ` over a log-spaced `Δ` window; the exponent of the fit
/// is `−α`.
pub fn xy_lambda_asymptotics(
    gamma: f64,
    n_sites: usize,
    window: (f64, f64),
    points: usize,
    workers: Option<usize>,
) -> Result<(SweepTable, PowerLawFit)> {
    let model = Model::Xy(XyBase::new(gamma, 1.0, n_sites));
    let axis = Axis::new(AxisName::Delta, log_space(window.0, window.1, points));
    let table = grid_sweep(&model, &[axis], ValueKind::SLambda, workers)?;
    let fit = asymptotic_fit(&table, Some(window))?;
    Ok((table, fit))
}

/// `S^γ` at fixed `λ` over a log-spaced `γ` window; the exponent of the fit
/// is `−β`.
pub fn xy_gamma_asymptotics(
    lambda: f64,
    n_sites: usize,
    window: (f64, f64),
    points: usize,
    workers: Option<usize>,
) -> Result<(SweepTable, PowerLawFit)> {
    let model = Model::Xy(XyBase::new(1.0, lambda, n_sites));
    let axis = Axis::new(AxisName::Gamma, log_space(window.0, window.1, points));
    let table = grid_sweep(&model, &[axis], ValueKind::SGamma, workers)?;
    let fit = asymptotic_fit(&table, Some(window))?;
    Ok((table, fit))
}

/// Overlap between the ground states at `λ_c − Δ` and `λ_c − Δ − δλ` over a
/// log-spaced `Δ` window, fitted to `Δ^ν` (ν → 1/8).
///
/// The comparison point is taken deeper in the normal phase because
/// `λ_c − Δ + δλ` leaves it as soon as `Δ < δλ`.
pub fn dicke_exponent(
    p: &DickeParams<f64>,
    delta_lambda: f64,
    window: (f64, f64),
    points: usize,
) -> Result<(SweepTable, PowerLawFit)> {
    if !(delta_lambda > 0.0) {
        return Err(Error::param(format!("delta_lambda must be positive, got {delta_lambda}")));
    }
    let model = Model::Dicke(DickeBase { params: *p, delta_lambda: -delta_lambda });
    let axis = Axis::new(AxisName::Delta, log_space(window.0, window.1, points));
    let table = grid_sweep(&model, &[axis], ValueKind::DickeOverlap, Some(1))?;
    let fit = asymptotic_fit(&table, Some(window))?;
    Ok((table, fit))
}
