//! Closed forms against their numerical oracles, on seeded random samples.

use std::io::Write;

use qpt_overlap::analysis::lin_space;
use qpt_overlap::dicke::{critical_coupling, gaussian_overlap, DickeParams, GaussianState, SpectrumVariant};
use qpt_overlap::dynamics::{echo_dos_consistency, fidelity, overlap_from_dos};
use qpt_overlap::oracle::{gaussian_quadrature_overlap, mode_return_probability, overlap_oracle};
use qpt_overlap::xy::{dtheta_dgamma, dtheta_dlambda, ground_state_overlap, Direction, XyParams};
use qpt_overlap::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::RunConfig;
use crate::{open_output, CliError};

struct Check {
    name: &'static str,
    samples: usize,
    deviation: f64,
    tolerance: f64,
}

fn random_pair(rng: &mut ChaCha8Rng, max_modes: usize) -> Result<(XyParams<f64>, XyParams<f64>)> {
    let n = 2 * rng.gen_range(1..=max_modes) + 1;
    let gamma = rng.gen_range(0.05..1.5) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let p = XyParams::new(gamma, rng.gen_range(-1.5..1.5), n)?;
    let q = p.shifted(rng.gen_range(-0.02..0.02), rng.gen_range(-0.3..0.3))?;
    Ok((p, q))
}

fn xy_oracle(rng: &mut ChaCha8Rng) -> Result<Check> {
    let mut worst = 0.0f64;
    let mut samples = 0;
    while samples < 50 {
        let (p, q) = random_pair(rng, 50)?;
        if let Some(oracle) = overlap_oracle(&p, &q)? {
            worst = worst.max((ground_state_overlap(&p, &q)?.overlap - oracle).abs());
            samples += 1;
        }
    }
    Ok(Check { name: "xy overlap vs per-mode eigenvectors", samples, deviation: worst, tolerance: 1e-12 })
}

fn gradients(rng: &mut ChaCha8Rng) -> Result<Check> {
    let h = 1e-6;
    let mut worst = 0.0f64;
    let mut samples = 0;
    while samples < 1000 {
        let p: XyParams<f64> =
            XyParams::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5), 2 * rng.gen_range(1..300) + 1)?;
        let k = rng.gen_range(1..=p.n_modes());
        let m = p.mode(k)?;
        let (dl, dg) = (dtheta_dlambda(&m, &p)?, dtheta_dgamma(&m, &p)?);
        if m.energy < 0.1 || dl.abs() < 1e-3 || dg.abs() < 1e-3 {
            continue;
        }
        let fd = |d: Direction| -> Result<f64> {
            let plus = p.shifted_along(d, h)?.mode(k)?.theta;
            let minus = p.shifted_along(d, -h)?.mode(k)?.theta;
            Ok((plus - minus) / (2.0 * h))
        };
        // dθ/dγ is reported with the opposite sign to the angle's own slope
        worst = worst.max((fd(Direction::Lambda)? - dl).abs() / dl.abs());
        worst = worst.max((fd(Direction::Gamma)? + dg).abs() / dg.abs());
        samples += 1;
    }
    Ok(Check { name: "angle derivatives vs finite differences (relative)", samples, deviation: worst, tolerance: 1e-5 })
}

fn mode_dynamics(rng: &mut ChaCha8Rng) -> Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let (p, q) = random_pair(rng, 40)?;
        let k = rng.gen_range(1..=p.n_modes());
        let t = rng.gen_range(0.0..30.0);
        let (a, b) = (p.mode(k)?, q.mode(k)?);
        let factor = 1.0 - (a.theta - b.theta).sin().powi(2) * (a.energy * t).sin().powi(2);
        worst = worst.max((factor - mode_return_probability(&p, &q, k, t)?).abs());
    }
    Ok(Check { name: "echo factor vs unitary mode evolution", samples: 200, deviation: worst, tolerance: 1e-12 })
}

fn echo_spectrum(rng: &mut ChaCha8Rng) -> Result<[Check; 2]> {
    let times = lin_space(0.0, 20.0, 200);
    let (mut fourier, mut weight) = (0.0f64, 0.0f64);
    for _ in 0..10 {
        let p = XyParams::new(rng.gen_range(0.1..1.5), rng.gen_range(-1.5..1.5), 21)?;
        let q = p.shifted(rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1))?;
        fourier = fourier.max(echo_dos_consistency(&p, &q, &times)?);
        weight = weight.max((overlap_from_dos(&p, &q)? - fidelity(&p, &q)?).abs());
    }
    Ok([
        Check { name: "echo vs spectral Fourier sum (N = 21)", samples: 10, deviation: fourier, tolerance: 1e-10 },
        Check { name: "ground weight vs squared overlap (N = 21)", samples: 10, deviation: weight, tolerance: 1e-10 },
    ])
}

fn dicke_quadrature(rng: &mut ChaCha8Rng) -> Result<Check> {
    let mut worst = 0.0f64;
    let mut spd =
        || GaussianState::from_rotation(rng.gen_range(-1.5..1.5), rng.gen_range(0.2..4.0), rng.gen_range(0.2..4.0));
    for _ in 0..100 {
        let (g, h) = (spd(), spd());
        worst = worst.max((gaussian_overlap(&g, &h)? - gaussian_quadrature_overlap(&g, &h)?).abs());
    }
    Ok(Check { name: "gaussian overlap vs plane quadrature", samples: 100, deviation: worst, tolerance: 1e-8 })
}

fn critical_root(rng: &mut ChaCha8Rng) -> Result<Check> {
    let mut worst = 0.0f64;
    for i in 0..20 {
        let variant = if i % 2 == 0 { SpectrumVariant::Paper } else { SpectrumVariant::Literature };
        let p = DickeParams::new(rng.gen_range(0.2..3.0), rng.gen_range(0.2..3.0), 0.0, variant)?;
        worst = worst.max(p.with_lambda(critical_coupling(&p))?.gap());
    }
    Ok(Check { name: "lower Dicke energy at the bisected root", samples: 20, deviation: worst, tolerance: 1e-12 })
}

pub fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.settings.seed.unwrap_or(1));
    let mut checks = vec![xy_oracle(&mut rng)?, gradients(&mut rng)?, mode_dynamics(&mut rng)?];
    checks.extend(echo_spectrum(&mut rng)?);
    checks.push(dicke_quadrature(&mut rng)?);
    checks.push(critical_root(&mut rng)?);

    let mut out = open_output(cfg)?;
    let mut failed = 0;
    for c in &checks {
        let ok = c.deviation <= c.tolerance;
        failed += usize::from(!ok);
        writeln!(
            out,
            "{:4} {}: max deviation {:.3e} over {} samples (tolerance {:.0e})",
            if ok { "ok" } else { "FAIL" },
            c.name,
            c.deviation,
            c.samples,
            c.tolerance
        )?;
    }
    out.flush()?;
    if failed > 0 {
        return Err(CliError::Failed(format!("{failed} of {} checks out of tolerance", checks.len())));
    }
    Ok(())
}
