use serde::{Deserialize, Serialize};

use super::sweep::{AxisName, Cell, SweepTable};
use crate::error::{Error, Result};

/// `value ≈ amplitude · abscissa^exponent`, fitted by least squares in log-log
/// coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub amplitude: f64,
    pub exponent: f64,
    /// Smallest and largest abscissa used.
    pub window: (f64, f64),
    pub r_squared: f64,
    pub n_points: usize,
}

/// Unweighted least-squares line through `(ln x, ln y)`.
pub fn power_law_fit(xs: &[f64], ys: &[f64]) -> Result<PowerLawFit> {
    if xs.len() != ys.len() {
        return Err(Error::Fit(format!("{} abscissae but {} values", xs.len(), ys.len())));
    }
    if xs.len() < 3 {
        return Err(Error::Fit(format!("need at least 3 points, got {}", xs.len())));
    }
    if let Some((x, y)) = xs.iter().zip(ys).find(|(x, y)| !(**x > 0.0 && **y > 0.0 && x.is_finite() && y.is_finite())) {
        return Err(Error::Fit(format!("non-positive or non-finite point ({x}, {y})")));
    }
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = lx.iter().zip(&ly).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { (1.0 - ss_res / syy).clamp(0.0, 1.0) };
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(PowerLawFit { amplitude: intercept.exp(), exponent: slope, window: (lo, hi), r_squared, n_points: xs.len() })
}

/// Pulls `(abscissa, value)` pairs out of a one-axis table, restricted to the
/// inclusive window. Any error cell inside the window fails the fit.
fn points(table: &SweepTable, allowed: &[AxisName], window: Option<(f64, f64)>) -> Result<(Vec<f64>, Vec<f64>)> {
    let [axis] = table.axes() else {
        return Err(Error::Fit(format!("expected a single sweep axis, got {}", table.axes().len())));
    };
    if !allowed.contains(&axis.name) {
        return Err(Error::Fit(format!("cannot fit over axis '{}'", axis.name)));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for row in table.rows() {
        let x = row.coords[0];
        if let Some((lo, hi)) = window {
            if x < lo || x > hi {
                continue;
            }
        }
        match &row.cell {
            Cell::Value(v) => {
                xs.push(x);
                ys.push(*v);
            }
            Cell::Error(e) => return Err(Error::Fit(format!("error cell at {} = {x}: {e}", axis.name))),
        }
    }
    Ok((xs, ys))
}

/// Finite-size scaling exponent from a table over `n_sites`.
pub fn scaling_fit(table: &SweepTable) -> Result<PowerLawFit> {
    let (xs, ys) = points(table, &[AxisName::NSites], None)?;
    if xs.len() < 4 {
        return Err(Error::Fit(format!("scaling fit needs at least 4 sizes, got {}", xs.len())));
    }
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if (hi / lo).log10() < 1.5 {
        return Err(Error::Fit(format!("sizes span {:.2} decades, need at least 1.5", (hi / lo).log10())));
    }
    power_law_fit(&xs, &ys)
}

/// Asymptotic exponent from a table over the distance to a critical line
/// (`delta`) or over `gamma`, restricted to `window`.
pub fn asymptotic_fit(table: &SweepTable, window: Option<(f64, f64)>) -> Result<PowerLawFit> {
    let (xs, ys) = points(table, &[AxisName::Delta, AxisName::Gamma], window)?;
    if xs.len() < 6 {
        return Err(Error::Fit(format!("asymptotic fit needs at least 6 points, got {}", xs.len())));
    }
    if xs.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Fit("abscissa must be strictly increasing".into()));
    }
    if xs[0] <= 0.0 {
        return Err(Error::Fit("abscissa must be strictly positive".into()));
    }
    power_law_fit(&xs, &ys)
}
