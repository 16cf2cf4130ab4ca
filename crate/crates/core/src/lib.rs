//! Vacuum measurement statistics of time-smeared quantum observables.
//!
//! The crate is organised around four engines:
//!
//! - [`func`]: sampling windows, their Fourier and Hilbert transforms, the
//!   quadratic star product driving the window flow, and the quantum
//!   inequality functional.
//! - [`cft2d`]: moments and cumulant generating function of the smeared chiral
//!   stress tensor of a two-dimensional CFT with central charge `c`.
//! - [`dist`]: the shifted Gamma distribution (density, distribution function,
//!   moments, fitting, sampling, characteristic-function inversion).
//! - [`wick4d`]: exact vacuum moments of the smeared Wick square of a massless
//!   scalar in four dimensions, evaluated with exact rational arithmetic.
//!
//! All lengths default to units where the window width `tau` is one.

pub mod cft2d;
pub mod dist;
pub mod error;
pub mod exact;
pub mod func;
pub mod quad;
pub mod wick4d;

pub use error::{Error, Result};
