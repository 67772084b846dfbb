//! Brute-force verifiers, independent of the closed forms in [`crate::xy`],
//! [`crate::dicke`] and [`crate::dynamics`].
//!
//! The XY checks work at the level of the fermion pair `(k, −k)`: each pair
//! lives in the two-dimensional even sector `{|0_k 0_−k⟩, |1_k 1_−k⟩}`, where
//! the Hamiltonian is a 2×2 Hermitian matrix that we diagonalize numerically.

pub mod quadrature;

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

use crate::dicke::GaussianState;
use crate::error::{Error, Result};
use crate::xy::XyParams;

/// Largest pair count accepted by [`projected_dos`].
pub const MAX_ENUMERATED_MODES: usize = 20;

/// Numerically diagonalized sector of one fermion pair.
#[derive(Debug, Clone)]
pub struct ModeSector {
    pub k: usize,
    /// `[[−ε_k, −iγ sin x_k], [iγ sin x_k, ε_k]]` in the basis `{|00⟩, |11⟩}`.
    pub h_matrix: Matrix2<Complex64>,
    /// Ground vector with its first non-negligible component real-positive;
    /// `None` when the sector is degenerate.
    pub ground_vec: Option<Vector2<Complex64>>,
    pub excited_vec: Option<Vector2<Complex64>>,
    /// Ascending eigenvalues.
    pub energies: [f64; 2],
}

impl ModeSector {
    pub fn gap(&self) -> f64 {
        self.energies[1] - self.energies[0]
    }

    pub fn is_degenerate(&self) -> bool {
        self.ground_vec.is_none()
    }
}

fn fix_phase(v: Vector2<Complex64>) -> Vector2<Complex64> {
    let v = v / Complex64::new(v.norm(), 0.0);
    let lead = if v[0].norm() > 1e-12 { v[0] } else { v[1] };
    let phase = lead / lead.norm();
    v * phase.conj()
}

pub fn mode_sector(p: &XyParams<f64>, k: usize) -> Result<ModeSector> {
    if k == 0 || k > p.n_modes() {
        return Err(Error::param(format!("mode index k = {k} outside 1..={}", p.n_modes())));
    }
    let x = std::f64::consts::TAU * k as f64 / p.n_sites() as f64;
    let eps = x.cos() - p.lambda();
    let coupling = p.gamma() * x.sin();
    let i = Complex64::i();
    let h = Matrix2::new(Complex64::new(-eps, 0.0), -i * coupling, i * coupling, Complex64::new(eps, 0.0));
    let eig = h.symmetric_eigen();
    let (lo, hi) = if eig.eigenvalues[0] <= eig.eigenvalues[1] { (0, 1) } else { (1, 0) };
    let energies = [eig.eigenvalues[lo], eig.eigenvalues[hi]];
    let degenerate = energies[1] - energies[0] == 0.0;
    let (ground_vec, excited_vec) = if degenerate {
        (None, None)
    } else {
        (
            Some(fix_phase(eig.eigenvectors.column(lo).into_owned())),
            Some(fix_phase(eig.eigenvectors.column(hi).into_owned())),
        )
    };
    Ok(ModeSector { k, h_matrix: h, ground_vec, excited_vec, energies })
}

/// `Π_k |⟨v_k(p), v_k(p̃)⟩|` from numeric eigenvectors; `None` when any
/// sector of either point is degenerate.
pub fn overlap_oracle(p: &XyParams<f64>, q: &XyParams<f64>) -> Result<Option<f64>> {
    if p.n_sites() != q.n_sites() {
        return Err(Error::param("overlap oracle needs equal chain lengths"));
    }
    let mut product = 1.0;
    for k in 1..=p.n_modes() {
        let (a, b) = (mode_sector(p, k)?, mode_sector(q, k)?);
        match (a.ground_vec, b.ground_vec) {
            (Some(u), Some(v)) => product *= u.dotc(&v).norm(),
            _ => return Ok(None),
        }
    }
    Ok(Some(product))
}

/// One support point of the projected density of states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralLine {
    /// Excitation energy above the ground state of `H(p)`.
    pub energy: f64,
    pub weight: f64,
}

/// `D(ω; p, p̃) = ⟨g(p̃)| δ(ω − H(p)) |g(p̃)⟩`, enumerated over the even-sector
/// eigenbasis of `H(p)`.
#[derive(Debug, Clone)]
pub struct ExcitationSpectrum {
    /// Indexed by the bitmask of excited pairs (bit `k−1` for pair `k`).
    pub lines: Vec<SpectralLine>,
    /// Lowest excitation energy `E₁ = 2 min Λ_k`.
    pub first_excited: f64,
}

impl ExcitationSpectrum {
    pub fn total_weight(&self) -> f64 {
        self.lines.iter().map(|l| l.weight).sum()
    }

    /// Weight on the ground state of `H(p)`.
    pub fn zero_frequency_weight(&self) -> f64 {
        self.lines.iter().filter(|l| l.energy == 0.0).map(|l| l.weight).sum()
    }

    /// `∫_{E₁}^∞ D(ω) dω`.
    pub fn excited_weight(&self) -> f64 {
        self.lines.iter().filter(|l| l.energy >= self.first_excited).map(|l| l.weight).sum()
    }
}

/// Enumerates all `2^M` pair-excitation patterns; the weight of a pattern is
/// the product of the squared per-pair projections of `g(p̃)` onto the
/// numeric eigenvectors of `H(p)`.
pub fn projected_dos(p: &XyParams<f64>, q: &XyParams<f64>) -> Result<ExcitationSpectrum> {
    let m = p.n_modes();
    if m > MAX_ENUMERATED_MODES {
        return Err(Error::Resource(format!(
            "projected density of states enumerates 2^M states; M = {m} exceeds {MAX_ENUMERATED_MODES}"
        )));
    }
    if p.n_sites() != q.n_sites() {
        return Err(Error::param("projected density of states needs equal chain lengths"));
    }
    // (gap, stay probability, jump probability) per pair
    let mut pairs = Vec::with_capacity(m);
    for k in 1..=m {
        let here = mode_sector(p, k)?;
        let there = mode_sector(q, k)?;
        let (Some(g), Some(e), Some(v)) = (here.ground_vec, here.excited_vec, there.ground_vec) else {
            return Err(Error::Singularity { k });
        };
        pairs.push((here.gap(), g.dotc(&v).norm_sqr(), e.dotc(&v).norm_sqr()));
    }
    let first_excited = pairs.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let lines = (0u32..1 << m)
        .map(|mask| {
            let mut energy = 0.0;
            let mut weight = 1.0;
            for (bit, &(gap, stay, jump)) in pairs.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    energy += gap;
                    weight *= jump;
                } else {
                    weight *= stay;
                }
            }
            SpectralLine { energy, weight }
        })
        .collect();
    Ok(ExcitationSpectrum { lines, first_excited })
}

/// Return probability `|⟨v|e^{−iH t}|v⟩|²` of the pair-`k` ground vector of
/// `q` under the pair-`k` Hamiltonian of `p`, with the propagator built from
/// the numeric eigendecomposition.
pub fn mode_return_probability(p: &XyParams<f64>, q: &XyParams<f64>, k: usize, t: f64) -> Result<f64> {
    let h = mode_sector(p, k)?;
    let v = mode_sector(q, k)?.ground_vec.ok_or(Error::Singularity { k })?;
    let eig = h.h_matrix.symmetric_eigen();
    let phases = eig.eigenvalues.map(|e| Complex64::from_polar(1.0, -e * t));
    let propagator = eig.eigenvectors * Matrix2::from_diagonal(&phases) * eig.eigenvectors.adjoint();
    Ok(v.dotc(&(propagator * v)).norm_sqr())
}

/// Plane integral of the two normalized Gaussian wavefunctions.
pub fn gaussian_quadrature_overlap(g: &GaussianState<f64>, h: &GaussianState<f64>) -> Result<f64> {
    let a = g.matrix();
    let b = h.matrix();
    for m in [&a, &b] {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if !(m[0][0] > 0.0 && det > 0.0) || m[0][1] != m[1][0] {
            return Err(Error::NotPositiveDefinite);
        }
    }
    let norm = |m: &[[f64; 2]; 2]| ((m[0][0] * m[1][1] - m[0][1] * m[0][1]) / std::f64::consts::PI.powi(2)).powf(0.25);
    let prefactor = norm(&a) * norm(&b);
    let s = [a[0][0] + b[0][0], a[0][1] + b[0][1], a[1][1] + b[1][1]];
    // the exponent −½RᵀSR stays below −40 outside a box set by the smallest
    // eigenvalue of S
    let half_tr = 0.5 * (s[0] + s[2]);
    let mu_min = half_tr - (0.5 * (s[0] - s[2])).hypot(s[1]);
    let reach = (80.0 / mu_min).sqrt();
    let integrand = |x: f64, y: f64| prefactor * (-0.5 * (s[0] * x * x + 2.0 * s[1] * x * y + s[2] * y * y)).exp();
    quadrature::integrate_2d(integrand, (-reach, reach), (-reach, reach), 1e-10)
}
