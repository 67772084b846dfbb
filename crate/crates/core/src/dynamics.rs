//! Loschmidt echo of a ground state evolved under a nearby Hamiltonian, and
//! its relation to the projected density of states.
//!
//! For the XY chain the pair-`k` component of `g(p̃)` splits into the ground
//! and pair-excited states of `H(p)` with probabilities `cos²(δθ_k/2)` and
//! `sin²(δθ_k/2)`, the two separated by `2Λ_k`. The return amplitude of each
//! pair is therefore `cos² + sin² e^{−2iΛ_k t}` and
//!
//! ```text
//! L(t) = Π_k [1 − sin²(θ_k − θ̃_k) sin²(Λ_k t)]
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::projected_dos;
use crate::scalar::Real;
use crate::xy::{ground_state_overlap, XyParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EchoSeries<T> {
    pub times: Vec<T>,
    pub values: Vec<T>,
}

impl<T: Real> EchoSeries<T> {
    pub fn min(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn mean(&self) -> T {
        self.values.iter().copied().sum::<T>() / T::of_usize(self.values.len().max(1))
    }
}

/// `|⟨g(p̃)| e^{−iH(p)t} |g(p̃)⟩|²` on the given time grid.
pub fn loschmidt_echo<T: Real>(p: &XyParams<T>, q: &XyParams<T>, times: &[T]) -> Result<EchoSeries<T>> {
    if p.n_sites() != q.n_sites() {
        return Err(Error::param("echo needs equal chain lengths"));
    }
    // (Λ_k, sin²(θ_k − θ̃_k)) per pair
    let mut modes = Vec::with_capacity(p.n_modes());
    for k in 1..=p.n_modes() {
        let a = p.mode_unchecked(k);
        if a.is_critical() {
            return Err(Error::Singularity { k });
        }
        let b = q.mode_unchecked(k);
        let s = (a.theta - b.theta).sin();
        modes.push((a.energy, s * s));
    }
    let values = times
        .iter()
        .map(|&t| {
            modes.iter().fold(T::one(), |acc, &(energy, mix)| {
                let w = (energy * t).sin();
                acc * (T::one() - mix * w * w)
            })
        })
        .collect();
    Ok(EchoSeries { times: times.to_vec(), values })
}

/// Largest deviation between `|Σ_j w_j e^{−iω_j t}|²` over the enumerated
/// spectrum and the product-form echo.
pub fn echo_dos_consistency(p: &XyParams<f64>, q: &XyParams<f64>, times: &[f64]) -> Result<f64> {
    let spectrum = projected_dos(p, q)?;
    let echo = loschmidt_echo(p, q, times)?;
    let mut worst = 0.0f64;
    for (&t, &l) in times.iter().zip(echo.values.iter()) {
        let amplitude: Complex64 =
            spectrum.lines.iter().map(|line| Complex64::from_polar(line.weight, -line.energy * t)).sum();
        worst = worst.max((amplitude.norm_sqr() - l).abs());
    }
    Ok(worst)
}

/// `1 − ∫_{E₁}^∞ D(ω) dω`, which equals `|⟨g|g̃⟩|²`.
pub fn overlap_from_dos(p: &XyParams<f64>, q: &XyParams<f64>) -> Result<f64> {
    let spectrum = projected_dos(p, q)?;
    Ok((1.0 - spectrum.excited_weight()).clamp(0.0, 1.0))
}

/// Squared overlap from the closed-form product, for comparison with
/// [`overlap_from_dos`].
pub fn fidelity<T: Real>(p: &XyParams<T>, q: &XyParams<T>) -> Result<T> {
    let o = ground_state_overlap(p, q)?;
    Ok(o.overlap * o.overlap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy(gamma: f64, lambda: f64, n: usize) -> XyParams<f64> {
        XyParams::new(gamma, lambda, n).unwrap()
    }

    #[test]
    fn echo_starts_at_one() {
        let e = loschmidt_echo(&xy(1.0, 0.9, 21), &xy(1.0, 0.91, 21), &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(e.values[0], 1.0);
        assert!(e.values.iter().all(|&v| (0.0..=1.0).contains(&v)));
    }

    #[test]
    fn identical_points_never_decay() {
        let p = xy(0.4, -0.2, 31);
        let times: Vec<f64> = (0..50).map(|i| i as f64 * 0.7).collect();
        let e = loschmidt_echo(&p, &p, &times).unwrap();
        assert!(e.values.iter().all(|&v| v == 1.0));
        // numeric eigenvectors leave rounding-level weight off the ground line
        assert!(echo_dos_consistency(&p, &p, &times).unwrap() < 1e-13);
        assert_eq!(overlap_from_dos(&p, &p).unwrap(), 1.0);
    }

    #[test]
    fn critical_mode_is_rejected() {
        let n = 9;
        let lambda = (std::f64::consts::TAU / n as f64).cos();
        let err = loschmidt_echo(&xy(0.0, lambda, n), &xy(0.1, lambda, n), &[1.0]).unwrap_err();
        assert_eq!(err, Error::Singularity { k: 1 });
    }

    #[test]
    fn dos_overlap_matches_product() {
        let (p, q) = (xy(0.5, 0.5, 25), xy(0.5, 0.51, 25));
        let from_dos = overlap_from_dos(&p, &q).unwrap();
        assert!((from_dos - fidelity(&p, &q).unwrap()).abs() <= 1e-10);
        assert!((0.0..=1.0).contains(&from_dos));
    }
}
