//! Computational laboratory for SL(2,Z) automorphic distributions in the plane.
//!
//! The crate is split bottom-up:
//!
//! * [`specfun`] complex Gamma, zeta, completed zeta, `B_delta` and K-Bessel of
//!   imaginary order;
//! * [`arith`] modular inverses, Kloosterman sums, divisor sums, coprime
//!   enumeration and the Hecke coefficient generator `phi(k)`;
//! * [`heckewords`] the exact word algebra over `R`, `sigma_r`, `sigma_r^(l)`,
//!   `tau[gamma]` and the Hecke-power tables;
//! * [`planedist`] Gaussian-polynomial test functions, the Theta transform,
//!   Mellin slices, the functionals `I_{n,m}` and the truncated pairings;
//! * [`halfplane`] Eisenstein series, Maass expansions, Hecke operators,
//!   Poincare series and L-functions;
//! * [`lab`] experiment drivers producing [`lab::ScanReport`]s.
//!
//! Numeric code that has a meaningful closed form is generic over [`Real`]
//! (`f32`/`f64`); drivers and truncated series are concrete `f64`. The word
//! algebra is exact.

pub mod arith;
pub mod halfplane;
pub mod heckewords;
pub mod lab;
pub mod planedist;
pub mod quad;
pub mod real;
pub mod specfun;

pub use real::Real;

/// Complex numbers over the default scalar.
pub type C64 = num_complex::Complex<f64>;
/// Complex numbers over `f32`.
pub type C32 = num_complex::Complex<f32>;

/// Gaussian-polynomial test function with `f64` coefficients.
pub type GaussPoly64 = planedist::GaussPoly<f64>;
/// Gaussian-polynomial test function with `f32` coefficients.
pub type GaussPoly32 = planedist::GaussPoly<f32>;
/// Quadrature controls for `f64` evaluation.
pub type QuadratureSpec64 = specfun::QuadratureSpec<f64>;
