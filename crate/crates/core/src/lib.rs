//! Numerical core for the quantized continuum Heisenberg spin chain.
//!
//! The crate is `no_std` (it needs `alloc`) and covers the whole pipeline:
//!
//! - [`params`]: physical constants and the derived exponent / Mathieu parameters.
//! - [`stereo`]: stereographic map between unit spins and the complex field `ω = P + iQ`,
//!   together with the two forms of the sigma-model kinetic density.
//! - [`classical`]: static Hamiltonian density, position-dependent mass and an RK4
//!   integrator for the static Hamilton equations in `z`.
//! - [`heun`]: confluent-Heun reduction of the radial equation (B = 0), functional
//!   Bethe-ansatz quantization, root solver and the coefficient-recurrence oracle.
//! - [`mathieu`]: characteristic values and functions for integer and fractional
//!   order, and the off-plane / in-plane spectra built on them.
//! - [`verify`]: residual reports, finite-difference eigen-oracles and the
//!   sigma-model equivalence harness.
#![no_std]
// `!(x > 0.0)` guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod classical;
mod error;
pub mod heun;
pub(crate) mod linalg;
pub mod mathieu;
pub mod params;
pub mod poly;
pub mod stereo;
pub mod verify;

pub use error::{Error, ErrorKind};
pub use params::{DerivedConstants, PhysicalParams};

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub use num_complex::Complex64;
