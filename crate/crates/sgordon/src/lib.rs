//! Spectral analysis of one-dimensional Schrödinger operators with
//! distributional potentials q = σ′ + τ.
//!
//! The operator −d²/dt² + q with q = σ′ + τ (σ locally square integrable,
//! τ locally integrable) is handled through the quasi-derivative
//! u¹ = u′ − σu, which stays absolutely continuous across the jumps of σ.
//! On top of the resulting first-order system the crate provides:
//!
//! - [`potential`]: explicit (σ, τ) representations, interval and
//!   sliding-window norms, δ-combs, quasiperiodic potentials;
//! - [`propagator`]: transfer matrices and state propagation with exact
//!   steps on piecewise-constant data;
//! - [`floquet`]: monodromy, discriminant/band scans, and the three-periods
//!   lower bound max{|U(−T)|, |U(T)|, |U(2T)|} ≥ ½|U(0)|;
//! - [`bounds`]: certified growth and Gronwall proximity estimates;
//! - [`sobolev`]: fractional Sobolev norms on grids and the shift, dilation
//!   and two-scale inequalities behind the approximation theory;
//! - [`gordon`]: continued-fraction convergents in exact arithmetic,
//!   periodic approximants of quasiperiodic potentials, and desk-scale
//!   certificates of exponentially weighted approximation errors;
//! - [`spectrum`]: decay profiles, no-eigenvalue-evidence scans, and twin
//!   propagation against the certified proximity bound;
//! - [`cli`]/[`config`]/[`report`]: the command-line front end with
//!   deterministic CSV/JSON reports.
//!
//! The `examples/` directory contains one runnable program per capability;
//! `cargo run --example eigen_scan` is a good starting point.

pub mod bounds;
pub mod cli;
pub mod config;
pub mod error;
pub mod floquet;
pub mod piece;
pub mod potential;
pub mod propagator;
pub mod gordon;
pub mod quadrature;
pub mod report;
pub mod sobolev;
pub mod spectrum;

pub use error::{Error, Result};
pub use piece::PieceFunction;
pub use potential::{NormKind, QuasiperiodicPotential, SigmaTau};
pub use propagator::{StateVector, TransferMatrix};
