//! Numerical laboratory for Chalker–Coddington network unitaries restricted to
//! chiral interface strips.
//!
//! The crate builds the one-step network unitary from an arbitrary field of
//! 2×2 scattering matrices, restricts it to the invariant strip between an
//! anti-clockwise (left) and a clockwise (right) phase, and verifies the
//! spectral and topological consequences numerically:
//!
//! * [`lattice`] — scattering-matrix parametrization, scattering fields with
//!   chiral defaults and seeded interior draws, strip geometry, field metric;
//! * [`operator`] — matrix-free application of the network unitary and its
//!   adjoint, parity symmetry, plaquette blocks, dense truncations, boundary
//!   phase verification;
//! * [`flux`] — the flux observable `U*QU − Q` across a horizontal cut, its
//!   closed-form blocks and spectrum, the relative index of projections, the
//!   Kitaev cut sum, eigenvector flux, and the wandering-orbit shift witness;
//! * [`fiber`] — vertical-translation-invariant reduction to matrix-valued
//!   Bloch symbols, determinant windings (exact and phase-unwrapped), the
//!   quantum-walk coin form, the five-diagonal fiber matrix, gauge
//!   normalization, and band-structure/circle-coverage certification;
//! * [`dynamics`] — long-time evolution with transport diagnostics.

pub mod dynamics;
pub mod error;
pub mod fiber;
pub mod flux;
pub mod lattice;
pub mod linalg;
pub mod operator;
pub mod rng;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
