//! Monodromy, discriminant and the three-periods lower bound.
//!
//! For a T-periodic potential the monodromy matrix M(λ) is the transfer
//! matrix over one period.  Its trace (the discriminant) classifies band
//! versus gap: |tr M| ≤ 2 inside spectral bands.  Since the generator of the
//! system is trace-free, det M = 1 and Cayley–Hamilton gives
//! M² − (tr M)·M + I = 0, which forces every solution to satisfy
//! max{|U(−T)|, |U(T)|, |U(2T)|} ≥ ½|U(0)| — no nontrivial solution decays
//! in both directions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::SigmaTau;
use crate::propagator::{propagate, transfer_matrix, StateVector, TransferMatrix};

/// Band-edge classification tolerance on |tr M| = 2.
pub const BAND_EDGE_TOL: f64 = 1e-10;

/// Discriminant sample at one spectral parameter.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BandPoint {
    pub lambda: f64,
    pub discriminant: f64,
    pub in_band: bool,
}

/// Monodromy matrix over one period [0, T].
pub fn monodromy(st: &SigmaTau, lambda: f64, tol: f64) -> Result<TransferMatrix> {
    let t = st.require_period()?;
    transfer_matrix(st, lambda, 0.0, t, tol)
}

/// Discriminant sweep over a λ grid; grid order is preserved.
pub fn band_scan(st: &SigmaTau, lambda_grid: &[f64], tol: f64) -> Result<Vec<BandPoint>> {
    let mut out = Vec::with_capacity(lambda_grid.len());
    for &lambda in lambda_grid {
        let m = monodromy(st, lambda, tol)?;
        let d = m.trace();
        out.push(BandPoint {
            lambda,
            discriminant: d,
            in_band: d.abs() <= 2.0 + BAND_EDGE_TOL,
        });
    }
    Ok(out)
}

/// Result of the three-periods lower bound for one solution.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ThreePeriods {
    pub norm_minus_t: f64,
    pub norm_t: f64,
    pub norm_2t: f64,
    /// max of the three norms over |U(0)|.
    pub ratio: f64,
    pub pass: bool,
}

/// Propagates U0 to −T, T and 2T and checks
/// max{|U(−T)|, |U(T)|, |U(2T)|} ≥ ½|U(0)|.
///
/// U(−T) is obtained by backward propagation rather than by inverting the
/// monodromy matrix, which would amplify conditioning error in gap regimes.
pub fn three_periods_check(
    st: &SigmaTau,
    lambda: f64,
    u0: StateVector,
    tol: f64,
) -> Result<ThreePeriods> {
    let t = st.require_period()?;
    let n0 = u0.norm();
    if n0 == 0.0 {
        return Err(Error::ZeroInitialVector);
    }
    let back = propagate(st, lambda, 0.0, -t, u0, tol)?;
    let fwd = propagate(st, lambda, 0.0, t, u0, tol)?;
    let fwd2 = propagate(st, lambda, t, 2.0 * t, fwd, tol)?;
    let (a, b, c) = (back.norm(), fwd.norm(), fwd2.norm());
    let ratio = a.max(b).max(c) / n0;
    Ok(ThreePeriods {
        norm_minus_t: a,
        norm_t: b,
        norm_2t: c,
        ratio,
        pass: ratio >= 0.5 - tol,
    })
}
