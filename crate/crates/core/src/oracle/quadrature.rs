//! Adaptive Gauss–Kronrod (7/15) quadrature, 1D and iterated 2D.

use crate::error::{Error, Result};

// Kronrod abscissae on [0, 1]; odd indices are the Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// One G7/K15 panel: (Kronrod estimate, |Kronrod − Gauss|).
fn panel<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx)? + f(center + dx)?;
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok((kronrod * half, ((kronrod - gauss) * half).abs()))
}

/// Globally adaptive integration of `f` over `[a, b]` to absolute tolerance
/// `tol`, splitting the worst panel until the summed error estimate drops
/// below `tol`.
pub fn integrate<F: FnMut(f64) -> Result<f64>>(mut f: F, a: f64, b: f64, tol: f64, max_panels: usize) -> Result<f64> {
    let mut panels = vec![(a, b, panel(&mut f, a, b)?)];
    let mut evaluations = 15;
    loop {
        let total: f64 = panels.iter().map(|p| p.2 .1).sum();
        if total <= tol {
            return Ok(panels.iter().map(|p| p.2 .0).sum());
        }
        if panels.len() >= max_panels {
            return Err(Error::Quadrature { lo: a, hi: b, estimate: total, evaluations });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .map(|(i, _)| i)
            .expect("non-empty");
        let (lo, hi, _) = panels.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        panels.push((lo, mid, panel(&mut f, lo, mid)?));
        panels.push((mid, hi, panel(&mut f, mid, hi)?));
        evaluations += 30;
    }
}

/// Iterated integral `∫_{x0}^{x1} ∫_{y0}^{y1} f(x, y) dy dx`.
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(f: F, x: (f64, f64), y: (f64, f64), tol: f64) -> Result<f64> {
    let width = x.1 - x.0;
    let inner_tol = 0.1 * tol / width.max(1.0);
    integrate(|xv| integrate(|yv| Ok(f(xv, yv)), y.0, y.1, inner_tol, 4000), x.0, x.1, tol, 4000)
}
