//! Ground-state overlaps as a probe of quantum criticality.
//!
//! Two exactly solvable models are covered:
//!
//! - [`xy`]: the anisotropic XY chain in a transverse field, with the exact
//!   overlap between ground states at nearby `(γ, λ)` and the susceptibility
//!   sums `S^λ`, `S^γ`;
//! - [`dicke`]: the Dicke model in its normal phase, where ground states are
//!   two-mode Gaussians and the overlap is a ratio of determinants.
//!
//! [`dynamics`] relates the overlap to the Loschmidt echo, [`analysis`] runs
//! sweeps and power-law fits, and [`oracle`] holds brute-force checks of the
//! closed forms.
//!
//! The model code is generic over the scalar type through [`Real`]; the
//! aliases below fix it to `f64` or `f32`.

// `!(x > 0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod dicke;
pub mod dynamics;
mod error;
pub mod oracle;
mod scalar;
pub mod xy;

pub use error::{Error, Result};
pub use scalar::Real;

pub type XyParams64 = xy::XyParams<f64>;
pub type XyParams32 = xy::XyParams<f32>;
pub type ModeData64 = xy::ModeData<f64>;
pub type OverlapResult64 = xy::OverlapResult<f64>;
pub type DickeParams64 = dicke::DickeParams<f64>;
pub type DickeParams32 = dicke::DickeParams<f32>;
pub type GaussianState64 = dicke::GaussianState<f64>;
pub type NormalSpectrum64 = dicke::NormalSpectrum<f64>;
pub type EchoSeries64 = dynamics::EchoSeries<f64>;
