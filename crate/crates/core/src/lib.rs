//! Numerical laboratory for Kato's fixed-point construction of mild
//! Navier–Stokes solutions on the periodic torus.
//!
//! The crate is organised bottom-up:
//!
//! * [`spectral`]: Fourier representation of periodic vector fields and the
//!   multiplier operators (heat semigroup, Leray projection, fractional
//!   Laplacian, quadratic nonlinearity).
//! * [`spaces`]: computable Lebesgue, weak Lebesgue, Besov, Hölder and Morrey
//!   norms.
//! * [`time`]: graded time grids and weighted time norms `L^p_α((0,τ), Z)`.
//! * [`kato`]: the Picard iteration for the mild equation, with an
//!   independent integrating-factor RK4 reference integrator.
//! * [`estimates`]: measurements of semigroup decay exponents, Hardy–Littlewood
//!   bounds and admissibility conditions on the torus and on diagonal models.
//! * [`interp`]: real interpolation norms on diagonal models.

pub mod error;
pub mod exponent;
pub mod estimates;
pub mod interp;
pub mod kato;
pub mod probes;
pub mod quad;
pub mod spaces;
pub mod spectral;
pub mod time;

pub use error::{Error, Result};
