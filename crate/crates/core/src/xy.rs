//! Anisotropic XY chain in a transverse field, solved through its free-fermion
//! modes.
//!
//! The periodic chain of `N = 2M + 1` sites decouples into `M` independent
//! fermion pairs `(k, -k)` with momenta `x_k = 2πk/N`, `k = 1..=M`. Each pair
//! carries a quasiparticle energy
//!
//! ```text
//! Λ_k = sqrt(ε_k² + γ² sin² x_k),   ε_k = cos x_k − λ
//! ```
//!
//! and a Bogoliubov angle `θ_k` with `cos θ_k = ε_k / Λ_k`,
//! `sin θ_k = γ sin x_k / Λ_k`. The ground state is the product over pairs of
//! `cos(θ_k/2)|00⟩ − i sin(θ_k/2)|11⟩`, so overlaps and susceptibilities are
//! plain sums over the mode table.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// One point `(γ, λ, N)` of the XY family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XyParams<T> {
    gamma: T,
    lambda: T,
    n_sites: usize,
}

impl<T: Real> XyParams<T> {
    pub fn new(gamma: T, lambda: T, n_sites: usize) -> Result<Self> {
        if n_sites < 3 {
            return Err(Error::param(format!("n_sites must be at least 3, got {n_sites}")));
        }
        if n_sites.is_multiple_of(2) {
            return Err(Error::param(format!("n_sites must be odd, got {n_sites}")));
        }
        if !gamma.is_finite() {
            return Err(Error::param("gamma must be finite"));
        }
        if !lambda.is_finite() {
            return Err(Error::param("lambda must be finite"));
        }
        Ok(Self { gamma, lambda, n_sites })
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// Number of independent mode pairs, `M = (N − 1)/2`.
    pub fn n_modes(&self) -> usize {
        (self.n_sites - 1) / 2
    }

    /// Same chain with the parameters shifted by `(dγ, dλ)`.
    pub fn shifted(&self, d_gamma: T, d_lambda: T) -> Result<Self> {
        Self::new(self.gamma + d_gamma, self.lambda + d_lambda, self.n_sites)
    }

    /// Shift along a single parameter direction.
    pub fn shifted_along(&self, direction: Direction, delta: T) -> Result<Self> {
        match direction {
            Direction::Lambda => self.shifted(T::zero(), delta),
            Direction::Gamma => self.shifted(delta, T::zero()),
        }
    }

    /// Mode record for pair `k` (1-based). No range check.
    pub(crate) fn mode_unchecked(&self, k: usize) -> ModeData<T> {
        let x = T::TAU() * T::of_usize(k) / T::of_usize(self.n_sites);
        let (sin_x, cos_x) = x.sin_cos();
        let eps = cos_x - self.lambda;
        // `+ 0` folds a negative zero so that γ = −0 does not flip θ to −π.
        let pairing = self.gamma * sin_x + T::zero();
        let energy = eps.hypot(pairing);
        let theta = pairing.atan2(eps);
        ModeData { k, x, eps, energy, theta }
    }

    pub fn mode(&self, k: usize) -> Result<ModeData<T>> {
        if k == 0 || k > self.n_modes() {
            return Err(Error::param(format!("mode index k = {k} outside 1..={}", self.n_modes())));
        }
        Ok(self.mode_unchecked(k))
    }
}

/// Per-momentum data of one fermion pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeData<T> {
    /// Pair index, `1..=M`.
    pub k: usize,
    /// Momentum `2πk/N`.
    pub x: T,
    /// `cos x − λ`.
    pub eps: T,
    /// Quasiparticle energy `Λ_k ≥ 0`.
    pub energy: T,
    /// Bogoliubov angle. Lies in `[0, π]` for `γ ≥ 0`; for `γ < 0` it is the
    /// mirror image in `[−π, 0]` so that `sin θ` carries the sign of `γ`.
    pub theta: T,
}

impl<T: Real> ModeData<T> {
    pub fn is_critical(&self) -> bool {
        self.energy == T::zero()
    }
}

/// Parameter direction for susceptibilities and finite differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Lambda,
    Gamma,
}

/// Overlap `⟨g(p)|g(p̃)⟩`, carried in log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverlapResult<T> {
    /// Natural log of the overlap; `−∞` when degenerate.
    pub log_overlap: T,
    pub overlap: T,
    /// Set when some factor `cos((θ_k − θ̃_k)/2)` is not positive.
    pub degenerate: bool,
}

/// Full mode table, ascending in `k`.
pub fn mode_table<T: Real>(p: &XyParams<T>) -> Vec<ModeData<T>> {
    (1..=p.n_modes()).map(|k| p.mode_unchecked(k)).collect()
}

/// Exact ground-state overlap `Π_k cos((θ_k − θ̃_k)/2)`.
pub fn ground_state_overlap<T: Real>(p: &XyParams<T>, q: &XyParams<T>) -> Result<OverlapResult<T>> {
    if p.n_sites != q.n_sites {
        return Err(Error::param(format!("overlap needs equal chain lengths, got {} and {}", p.n_sites, q.n_sites)));
    }
    let half = T::lit(0.5);
    let mut log_overlap = T::zero();
    for k in 1..=p.n_modes() {
        let a = p.mode_unchecked(k).theta;
        let b = q.mode_unchecked(k).theta;
        let factor = ((a - b) * half).cos();
        if factor <= T::zero() {
            return Ok(OverlapResult { log_overlap: T::neg_infinity(), overlap: T::zero(), degenerate: true });
        }
        log_overlap = log_overlap + factor.ln();
    }
    Ok(OverlapResult { log_overlap, overlap: log_overlap.exp(), degenerate: false })
}

/// `∂θ_k/∂λ = γ sin x_k / Λ_k²`.
pub fn dtheta_dlambda<T: Real>(m: &ModeData<T>, p: &XyParams<T>) -> Result<T> {
    if m.is_critical() {
        return Err(Error::Singularity { k: m.k });
    }
    let (sin_x, cos_x) = m.x.sin_cos();
    let eps = cos_x - p.lambda;
    let pairing = p.gamma * sin_x;
    Ok(pairing / (eps * eps + pairing * pairing))
}

/// `∂θ_k/∂γ = −|sin x_k| (cos x_k − λ) / Λ_k²`.
///
/// The overall sign is opposite to the derivative of the `atan2` angle used
/// in [`ModeData::theta`]; every consumer squares it.
pub fn dtheta_dgamma<T: Real>(m: &ModeData<T>, p: &XyParams<T>) -> Result<T> {
    if m.is_critical() {
        return Err(Error::Singularity { k: m.k });
    }
    let (sin_x, cos_x) = m.x.sin_cos();
    let eps = cos_x - p.lambda;
    let pairing = p.gamma * sin_x;
    Ok(-(sin_x.abs() * eps) / (eps * eps + pairing * pairing))
}

fn susceptibility<T: Real>(p: &XyParams<T>, derivative: fn(&ModeData<T>, &XyParams<T>) -> Result<T>) -> Result<T> {
    let mut sum = T::zero();
    for k in 1..=p.n_modes() {
        let d = derivative(&p.mode_unchecked(k), p)?;
        sum = sum + d * d;
    }
    Ok(sum)
}

/// `S^λ = Σ_k (∂θ_k/∂λ)²`.
pub fn s_lambda<T: Real>(p: &XyParams<T>) -> Result<T> {
    susceptibility(p, dtheta_dlambda)
}

/// `S^γ = Σ_k (∂θ_k/∂γ)²`.
pub fn s_gamma<T: Real>(p: &XyParams<T>) -> Result<T> {
    susceptibility(p, dtheta_dgamma)
}

pub fn susceptibility_along<T: Real>(p: &XyParams<T>, direction: Direction) -> Result<T> {
    match direction {
        Direction::Lambda => s_lambda(p),
        Direction::Gamma => s_gamma(p),
    }
}

/// Leading-order approximation `exp(−S δ²/8)` of the overlap between `p` and
/// `p` shifted by `delta` along `direction`.
pub fn overlap_gaussian_approx<T: Real>(p: &XyParams<T>, direction: Direction, delta: T) -> Result<T> {
    let s = susceptibility_along(p, direction)?;
    Ok((-s * delta * delta / T::lit(8.0)).exp())
}
