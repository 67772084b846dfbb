use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dicke::{critical_coupling, gaussian_overlap, ground_state, DickeParams};
use crate::dynamics::loschmidt_echo;
use crate::error::{Error, Result};
use crate::xy::{ground_state_overlap, s_gamma, s_lambda, XyParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisName {
    Lambda,
    Gamma,
    NSites,
    DeltaLambda,
    DeltaGamma,
    /// Distance to the critical coupling: `λ = 1 − Δ` for the XY chain,
    /// `λ = λ_c − Δ` for the Dicke model.
    Delta,
}

impl AxisName {
    pub fn as_str(&self) -> &'static str {
        match self {
            AxisName::Lambda => "lambda",
            AxisName::Gamma => "gamma",
            AxisName::NSites => "n_sites",
            AxisName::DeltaLambda => "delta_lambda",
            AxisName::DeltaGamma => "delta_gamma",
            AxisName::Delta => "delta",
        }
    }
}

impl fmt::Display for AxisName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: AxisName,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(name: AxisName, values: Vec<f64>) -> Self {
        Self { name, values }
    }

    pub fn sizes(values: &[usize]) -> Self {
        Self::new(AxisName::NSites, values.iter().map(|&n| n as f64).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueKind {
    Overlap,
    SLambda,
    SGamma,
    EchoMin,
    DickeOverlap,
}

impl ValueKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ValueKind::Overlap => "overlap",
            ValueKind::SLambda => "s_lambda",
            ValueKind::SGamma => "s_gamma",
            ValueKind::EchoMin => "echo_min",
            ValueKind::DickeOverlap => "dicke_overlap",
        }
    }
}

/// Fixed XY parameters; swept axes override the matching field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XyBase {
    pub gamma: f64,
    pub lambda: f64,
    pub n_sites: usize,
    pub delta_lambda: f64,
    pub delta_gamma: f64,
    /// Time grid for [`ValueKind::EchoMin`].
    pub echo_times: Vec<f64>,
}

impl XyBase {
    pub fn new(gamma: f64, lambda: f64, n_sites: usize) -> Self {
        Self { gamma, lambda, n_sites, delta_lambda: 0.0, delta_gamma: 0.0, echo_times: Vec::new() }
    }

    pub fn with_deltas(mut self, delta_gamma: f64, delta_lambda: f64) -> Self {
        self.delta_gamma = delta_gamma;
        self.delta_lambda = delta_lambda;
        self
    }

    pub fn with_echo_times(mut self, times: Vec<f64>) -> Self {
        self.echo_times = times;
        self
    }
}

/// Dicke base point. The comparison state sits at `λ + delta_lambda`; a
/// negative step compares against a point deeper in the normal phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DickeBase {
    pub params: DickeParams<f64>,
    pub delta_lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Model {
    Xy(XyBase),
    Dicke(DickeBase),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Cell {
    Value(f64),
    /// Per-cell failure (singular mode, outside the normal phase, ...).
    Error(String),
}

impl Cell {
    pub fn value(&self) -> Option<f64> {
        match self {
            Cell::Value(v) => Some(*v),
            Cell::Error(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub coords: Vec<f64>,
    pub cell: Cell,
}

/// Grid of evaluated cells, row-major over the declared axes (last axis
/// fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    axes: Vec<Axis>,
    value_kind: ValueKind,
    rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn value_kind(&self) -> ValueKind {
        self.value_kind
    }

    pub fn rows(&self) -> &[SweepRow] {
        &self.rows
    }

    pub fn values(&self) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.cell.value()).collect()
    }

    /// Row with the smallest value, ignoring error cells.
    pub fn min_row(&self) -> Option<&SweepRow> {
        self.rows
            .iter()
            .filter(|r| r.cell.value().is_some())
            .min_by(|a, b| a.cell.value().unwrap().total_cmp(&b.cell.value().unwrap()))
    }

    /// UTF-8 CSV with LF line endings: one column per axis, then the value
    /// and an error column that is empty for valid cells.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let header: Vec<&str> =
            self.axes.iter().map(|a| a.name.as_str()).chain([self.value_kind.as_str(), "error"]).collect();
        writeln!(out, "{}", header.join(","))?;
        for row in &self.rows {
            let mut fields: Vec<String> = row
                .coords
                .iter()
                .zip(&self.axes)
                .map(|(v, axis)| match axis.name {
                    AxisName::NSites => format!("{}", *v as u64),
                    _ => format_real(*v),
                })
                .collect();
            match &row.cell {
                Cell::Value(v) => {
                    fields.push(format_real(*v));
                    fields.push(String::new());
                }
                Cell::Error(e) => {
                    fields.push(String::new());
                    fields.push(csv_escape(e));
                }
            }
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

/// Full double precision, 17 significant digits.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn check_axes(model: &Model, axes: &[Axis], kind: ValueKind) -> Result<()> {
    let allowed: &[AxisName] = match model {
        Model::Xy(_) => &[
            AxisName::Lambda,
            AxisName::Gamma,
            AxisName::NSites,
            AxisName::DeltaLambda,
            AxisName::DeltaGamma,
            AxisName::Delta,
        ],
        Model::Dicke(_) => &[AxisName::Lambda, AxisName::DeltaLambda, AxisName::Delta],
    };
    match (model, kind) {
        (Model::Dicke(_), ValueKind::DickeOverlap) => {}
        (Model::Xy(_), ValueKind::DickeOverlap) | (Model::Dicke(_), _) => {
            return Err(Error::param(format!("value kind '{}' does not apply to this model", kind.as_str())))
        }
        _ => {}
    }
    for (i, axis) in axes.iter().enumerate() {
        if !allowed.contains(&axis.name) {
            return Err(Error::param(format!("axis '{}' does not apply to this model", axis.name)));
        }
        if axes[..i].iter().any(|a| a.name == axis.name) {
            return Err(Error::param(format!("axis '{}' declared twice", axis.name)));
        }
        if axis.values.is_empty() {
            return Err(Error::param(format!("axis '{}' is empty", axis.name)));
        }
        if axis.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::param(format!("axis '{}' has non-finite values", axis.name)));
        }
        if axis.name == AxisName::NSites && axis.values.iter().any(|v| v.fract() != 0.0 || *v < 0.0) {
            return Err(Error::param("axis 'n_sites' must hold non-negative integers"));
        }
    }
    if kind == ValueKind::EchoMin {
        if let Model::Xy(base) = model {
            if base.echo_times.is_empty() {
                return Err(Error::param("echo sweeps need a non-empty time grid"));
            }
        }
    }
    Ok(())
}

fn coords_of(axes: &[Axis], mut index: usize) -> Vec<f64> {
    let mut coords = vec![0.0; axes.len()];
    for (slot, axis) in coords.iter_mut().zip(axes).rev() {
        let len = axis.values.len();
        *slot = axis.values[index % len];
        index /= len;
    }
    coords
}

fn eval_xy(base: &XyBase, axes: &[Axis], coords: &[f64], kind: ValueKind) -> Result<f64> {
    let mut b = base.clone();
    for (axis, &v) in axes.iter().zip(coords) {
        match axis.name {
            AxisName::Lambda => b.lambda = v,
            AxisName::Gamma => b.gamma = v,
            AxisName::NSites => b.n_sites = v as usize,
            AxisName::DeltaLambda => b.delta_lambda = v,
            AxisName::DeltaGamma => b.delta_gamma = v,
            AxisName::Delta => b.lambda = 1.0 - v,
        }
    }
    let p = XyParams::new(b.gamma, b.lambda, b.n_sites)?;
    match kind {
        ValueKind::Overlap => Ok(ground_state_overlap(&p, &p.shifted(b.delta_gamma, b.delta_lambda)?)?.overlap),
        ValueKind::SLambda => s_lambda(&p),
        ValueKind::SGamma => s_gamma(&p),
        ValueKind::EchoMin => {
            let q = p.shifted(b.delta_gamma, b.delta_lambda)?;
            Ok(loschmidt_echo(&p, &q, &b.echo_times)?.min())
        }
        ValueKind::DickeOverlap => unreachable!("rejected by check_axes"),
    }
}

fn eval_dicke(base: &DickeBase, lambda_c: f64, axes: &[Axis], coords: &[f64]) -> Result<f64> {
    let mut lambda = base.params.lambda();
    let mut delta_lambda = base.delta_lambda;
    for (axis, &v) in axes.iter().zip(coords) {
        match axis.name {
            AxisName::Lambda => lambda = v,
            AxisName::DeltaLambda => delta_lambda = v,
            AxisName::Delta => lambda = lambda_c - v,
            _ => unreachable!("rejected by check_axes"),
        }
    }
    let here = ground_state(&base.params.with_lambda(lambda)?)?;
    let there = ground_state(&base.params.with_lambda(lambda + delta_lambda)?)?;
    gaussian_overlap(&here, &there)
}

/// Evaluates `kind` at every grid point. Cells are computed independently, so
/// the table is identical for any worker count.
pub fn grid_sweep(model: &Model, axes: &[Axis], kind: ValueKind, workers: Option<usize>) -> Result<SweepTable> {
    check_axes(model, axes, kind)?;
    let total: usize = axes.iter().map(|a| a.values.len()).product();
    let lambda_c = match model {
        Model::Dicke(base) => critical_coupling(&base.params),
        Model::Xy(_) => 1.0,
    };
    let eval = |index: usize| {
        let coords = coords_of(axes, index);
        let value = match model {
            Model::Xy(base) => eval_xy(base, axes, &coords, kind),
            Model::Dicke(base) => eval_dicke(base, lambda_c, axes, &coords),
        };
        let cell = match value {
            Ok(v) => Cell::Value(v),
            Err(e) => Cell::Error(e.to_string()),
        };
        SweepRow { coords, cell }
    };
    let rows = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Resource(format!("worker pool: {e}")))?
            .install(|| (0..total).into_par_iter().map(eval).collect()),
        None => (0..total).into_par_iter().map(eval).collect(),
    };
    Ok(SweepTable { axes: axes.to_vec(), value_kind: kind, rows })
}
