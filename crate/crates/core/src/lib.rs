//! Numerical laboratory for the polynuclear growth (PNG) droplet with a boundary
//! source, Gaussian random matrices with a deterministic source, and the
//! Fredholm-determinant laws that describe both at the edge: the GUE
//! Tracy–Widom law `F2`, the GOE² law `F1²`, and the family interpolating
//! between them and the Gaussian.
//!
//! Module map:
//!
//! * [`special`] – Airy functions, Gauss–Legendre/Hermite rules, normal CDF.
//! * [`kernels`] – limiting Airy-type kernels and the finite-N double-contour kernels.
//! * [`fredholm`] – Nyström determinants and the distribution functions built on them.
//! * [`png`] – discrete PNG simulation, multi-layer extension, height scalings.
//! * [`rmt`] – GUE/GOE/source samplers, Dyson chain, Hermitian eigensolver.
//! * [`stats`] – empirical CDFs and Kolmogorov–Smirnov distances.

pub mod error;
pub mod fredholm;
pub mod kernels;
pub mod linalg;
pub mod png;
pub mod rmt;
pub mod rng;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
