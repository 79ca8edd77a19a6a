//! Spin-based combinatorial optimization with higher-order (multilinear)
//! cost functions.
//!
//! The crate provides:
//!
//! * [`model`] — sparse multilinear spin cost functions with exact
//!   evaluation, continuous and discrete gradient kernels, and single-flip
//!   energy deltas;
//! * [`sb`] — ballistic and discrete simulated bifurcation (bSB/dSB)
//!   applied directly to higher-order costs, with inelastic walls and a
//!   symplectic Euler integrator;
//! * [`sa`] — simulated annealing with sequential sweeps and a linear
//!   inverse-temperature ramp;
//! * [`xorsat`] — planted three-regular 3-XORSAT (3R3X) instances, their
//!   polynomial form, and the cubic-to-quadratic gadget reduction;
//! * [`gf2`] — bit-packed Gaussian elimination over GF(2), the exact
//!   oracle for planted instances;
//! * [`bench`] — success-probability estimation, step-to-solution,
//!   grid search, and scaling fits.
//!
//! The crate is `no_std`-compatible (`alloc` required). Without the
//! default `std` feature, enable `libm` to supply float math.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("hosb-core needs either the `std` or the `libm` feature");

mod error;
pub(crate) mod math;

pub mod bench;
pub mod gf2;
pub mod model;
pub mod sa;
pub mod sb;
pub mod xorsat;

pub use error::Error;
pub use model::{PolyProblem, SpinConfig, Term};
pub use sb::{OscillatorState, RunResult, SbParams, SbVariant};
