//! Axisymmetric vortex-ring simulation and audit toolkit.
//!
//! Swirl-free axisymmetric Euler flow with anti-parallel (odd-in-`z`)
//! symmetry, discretized with Lagrangian vortex blobs on the meridional
//! half-plane, plus the diagnostics and inequality audits built on it.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

#[cfg(feature = "cli")]
pub mod cli_io;
pub mod diagnostics;
pub mod dyson;
pub mod elliptic;
pub mod error;
pub mod kernels;
pub mod quadrature;
pub mod theory_checks;
pub mod vortex_method;

pub use error::{Error, Result};
