//! Dicke model in the normal phase, thermodynamic limit.
//!
//! After the Holstein–Primakoff mapping the normal-phase Hamiltonian is a pair
//! of coupled oscillators. Its ground state is the Gaussian
//! `g(R) = (ε₊ε₋/π²)^{1/4} exp(−½⟨R, A R⟩)` with `A = Uᵀ diag(ε₋, ε₊) U`,
//! `U` the rotation by the squeezing angle. Overlaps between two such states
//! reduce to 2×2 determinants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Form of the discriminant in `ε±² = ½(ω² + ω₀² ± R)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumVariant {
    /// `R² = (ω² − ω₀²)² + 16λ²ω²ω₀²`; the gap closes at `λ = 1/2` for every
    /// `(ω, ω₀)`.
    #[default]
    Paper,
    /// `R² = (ω² − ω₀²)² + 16λ²ωω₀`; the gap closes at `λ = √(ωω₀)/2`.
    Literature,
}

impl std::str::FromStr for SpectrumVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Self::Paper),
            "literature" => Ok(Self::Literature),
            other => Err(Error::param(format!("unknown spectrum variant '{other}' (expected paper or literature)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DickeParams<T> {
    omega0: T,
    omega: T,
    lambda: T,
    variant: SpectrumVariant,
}

impl<T: Real> DickeParams<T> {
    pub fn new(omega0: T, omega: T, lambda: T, variant: SpectrumVariant) -> Result<Self> {
        if !(omega0 > T::zero()) || !omega0.is_finite() {
            return Err(Error::param(format!("omega0 must be positive and finite, got {omega0}")));
        }
        if !(omega > T::zero()) || !omega.is_finite() {
            return Err(Error::param(format!("omega must be positive and finite, got {omega}")));
        }
        if !(lambda >= T::zero()) || !lambda.is_finite() {
            return Err(Error::param(format!("lambda must be non-negative and finite, got {lambda}")));
        }
        Ok(Self { omega0, omega, lambda, variant })
    }

    /// Resonant parameters `ω = ω₀ = 1` with the default spectrum.
    pub fn resonant(lambda: T) -> Result<Self> {
        Self::new(T::one(), T::one(), lambda, SpectrumVariant::Paper)
    }

    pub fn omega0(&self) -> T {
        self.omega0
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn variant(&self) -> SpectrumVariant {
        self.variant
    }

    pub fn with_lambda(&self, lambda: T) -> Result<Self> {
        Self::new(self.omega0, self.omega, lambda, self.variant)
    }

    pub fn with_variant(&self, variant: SpectrumVariant) -> Self {
        Self { variant, ..*self }
    }

    /// `(ε₋², ε₊²)` with no phase check. `ε₋²` is negative past the critical
    /// coupling.
    pub(crate) fn squared_energies(&self) -> (T, T) {
        let w2 = self.omega * self.omega;
        let w02 = self.omega0 * self.omega0;
        let coupling = match self.variant {
            SpectrumVariant::Paper => w2 * w02,
            SpectrumVariant::Literature => self.omega * self.omega0,
        };
        let sum = w2 + w02;
        let split = w2 - w02;
        let sixteen_l2k = T::lit(16.0) * self.lambda * self.lambda * coupling;
        let r = (split * split + sixteen_l2k).sqrt();
        // (ω²+ω₀²)² − R² = 4ω²ω₀² − 16λ²K, free of the large cancellation
        let numerator = T::lit(4.0) * w2 * w02 - sixteen_l2k;
        let minus = numerator / (T::lit(2.0) * (sum + r));
        let plus = T::lit(0.5) * (sum + r);
        (minus, plus)
    }

    fn squeeze_angle(&self) -> T {
        let sum = self.omega * self.omega + self.omega0 * self.omega0;
        T::lit(0.5) * (T::lit(4.0) * self.lambda * (self.omega * self.omega0).sqrt() / sum).atan()
    }

    /// Lower collective energy, clamped to zero past the critical coupling.
    pub fn gap(&self) -> T {
        self.squared_energies().0.max(T::zero()).sqrt()
    }
}

/// Collective excitation energies and squeezing angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalSpectrum<T> {
    pub eps_minus: T,
    pub eps_plus: T,
    /// Rotation angle in `(−π/4, π/4)`.
    pub squeeze_angle: T,
}

/// Real symmetric positive-definite 2×2 matrix `A` of a Gaussian ground state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianState<T> {
    a: [[T; 2]; 2],
}

impl<T: Real> GaussianState<T> {
    /// Validated constructor; the matrix must be symmetric positive-definite.
    pub fn new(a: [[T; 2]; 2]) -> Result<Self> {
        let g = Self { a };
        g.check()?;
        Ok(g)
    }

    /// `Uᵀ diag(d₀, d₁) U` with `U = [[c, −s], [s, c]]`.
    pub fn from_rotation(angle: T, d0: T, d1: T) -> Self {
        let (s, c) = angle.sin_cos();
        let a00 = d0 * c * c + d1 * s * s;
        let a11 = d0 * s * s + d1 * c * c;
        let a01 = (d1 - d0) * s * c;
        Self { a: [[a00, a01], [a01, a11]] }
    }

    pub fn matrix(&self) -> [[T; 2]; 2] {
        self.a
    }

    pub fn det(&self) -> T {
        self.a[0][0] * self.a[1][1] - self.a[0][1] * self.a[1][0]
    }

    pub fn trace(&self) -> T {
        self.a[0][0] + self.a[1][1]
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (T, T) {
        let half_tr = T::lit(0.5) * self.trace();
        let half_diff = T::lit(0.5) * (self.a[0][0] - self.a[1][1]);
        let radius = half_diff.hypot(self.a[0][1]);
        (half_tr - radius, half_tr + radius)
    }

    fn check(&self) -> Result<()> {
        let [[a, b], [c, d]] = self.a;
        let finite = a.is_finite() && b.is_finite() && c.is_finite() && d.is_finite();
        let tol = T::epsilon() * T::lit(16.0) * (b.abs() + c.abs());
        if !finite || (b - c).abs() > tol || !(a > T::zero()) || !(self.det() > T::zero()) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(())
    }

    fn sum(&self, other: &Self) -> Self {
        let mut a = self.a;
        for (row, orow) in a.iter_mut().zip(other.a.iter()) {
            for (v, o) in row.iter_mut().zip(orow.iter()) {
                *v = *v + *o;
            }
        }
        Self { a }
    }
}

fn phase_error<T: Real>(p: &DickeParams<T>) -> Error {
    Error::PhaseDomain { lambda: p.lambda.as_f64(), critical: critical_coupling(p).as_f64() }
}

pub fn normal_spectrum<T: Real>(p: &DickeParams<T>) -> Result<NormalSpectrum<T>> {
    let (minus, plus) = p.squared_energies();
    if !(minus > T::zero()) {
        return Err(phase_error(p));
    }
    Ok(NormalSpectrum { eps_minus: minus.sqrt(), eps_plus: plus.sqrt(), squeeze_angle: p.squeeze_angle() })
}

/// Coupling at which `ε₋` vanishes, found by bisection on the sign of `ε₋²`.
///
/// Bisection runs until the bracket cannot be split further, so the returned
/// point is the smallest representable coupling with `ε₋² ≤ 0`.
pub fn critical_coupling<T: Real>(p: &DickeParams<T>) -> T {
    let closed = |l: T| {
        let q = DickeParams { lambda: l, ..*p };
        q.squared_energies().0 <= T::zero()
    };
    let mut lo = T::zero();
    let mut hi = T::one();
    while !closed(hi) {
        lo = hi;
        hi = hi + hi;
    }
    loop {
        let mid = lo + (hi - lo) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            return hi;
        }
        if closed(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

pub fn ground_state<T: Real>(p: &DickeParams<T>) -> Result<GaussianState<T>> {
    let s = normal_spectrum(p)?;
    Ok(GaussianState::from_rotation(s.squeeze_angle, s.eps_minus, s.eps_plus))
}

/// `⟨g|g̃⟩ = 2 (det A det Ã)^{1/4} / det(A + Ã)^{1/2}`.
pub fn gaussian_overlap<T: Real>(g: &GaussianState<T>, h: &GaussianState<T>) -> Result<T> {
    g.check()?;
    h.check()?;
    let num = (g.det() * h.det()).sqrt().sqrt();
    let den = g.sum(h).det().sqrt();
    Ok(T::lit(2.0) * num / den)
}

/// Overlap between the ground states at `λ` and `λ + δλ` for every `λ` in the
/// grid.
pub fn overlap_vs_lambda<T: Real>(p: &DickeParams<T>, delta_lambda: T, grid: &[T]) -> Result<Vec<(T, T)>> {
    grid.iter()
        .map(|&lambda| {
            let here = ground_state(&p.with_lambda(lambda)?)?;
            let there = ground_state(&p.with_lambda(lambda + delta_lambda)?)?;
            Ok((lambda, gaussian_overlap(&here, &there)?))
        })
        .collect()
}

/// `Tr(Ã_c⁻¹ A_c)` where `A_c` is the ground-state matrix at the critical
/// coupling (`ε₋ = 0`) and `Ã_c` the one at `λ_c − δλ`.
///
/// Closed form with `(c, s)` and `(c̃, s̃)` the squeezing rotations:
///
/// ```text
/// Tr = ε₊ᶜ/(ε̃₊ε̃₋) · [(s c̃ − c s̃)² ε̃₊ + (s s̃ + c c̃)² ε̃₋]
/// ```
pub fn critical_trace_limit<T: Real>(p: &DickeParams<T>, delta_lambda: T) -> Result<T> {
    if !(delta_lambda > T::zero()) {
        return Err(Error::param(format!("delta_lambda must be positive, got {delta_lambda}")));
    }
    let critical = p.with_lambda(critical_coupling(p))?;
    let reference = critical_reference(p, delta_lambda)?;
    let (s, c) = critical.squeeze_angle().sin_cos();
    let eps_plus_c = critical.squared_energies().1.sqrt();
    let other = normal_spectrum(&reference)?;
    let (st, ct) = other.squeeze_angle.sin_cos();
    let cross = s * ct - c * st;
    let along = s * st + c * ct;
    Ok(eps_plus_c / (other.eps_plus * other.eps_minus)
        * (cross * cross * other.eps_plus + along * along * other.eps_minus))
}

/// Ground-state matrix at the critical coupling, with `ε₋ = 0` (positive
/// semi-definite, so it bypasses the SPD check).
pub fn critical_state<T: Real>(p: &DickeParams<T>) -> Result<GaussianState<T>> {
    let critical = p.with_lambda(critical_coupling(p))?;
    let eps_plus = critical.squared_energies().1.sqrt();
    Ok(GaussianState::from_rotation(critical.squeeze_angle(), T::zero(), eps_plus))
}

/// Parameters at `λ_c − δλ`.
pub fn critical_reference<T: Real>(p: &DickeParams<T>, delta_lambda: T) -> Result<DickeParams<T>> {
    let lambda_c = critical_coupling(p);
    if !(delta_lambda < lambda_c) {
        return Err(Error::param(format!(
            "delta_lambda = {delta_lambda} must be below the critical coupling {lambda_c}"
        )));
    }
    p.with_lambda(lambda_c - delta_lambda)
}
