//! Interval and sliding-window norms of potentials with power singularities.
//!
//! σ may blow up like |t − c|^(−γ) with γ < 1/2 (square integrable), τ with
//! γ < 1 (integrable).  The quadrature splits cells at singular anchors and
//! regularizes them by a power substitution, so closed-form values like
//! ∫_{−1}^{1}|t|^(−1/2) dt = 4 come out to full tolerance.

use sgordon::piece::PieceFunction;
use sgordon::potential::{norm_on_interval, unif_norm, NormKind};

fn main() -> sgordon::Result<()> {
    // lone singularity: ∫ |t|^(−2·1/4) over [−1, 1] = 4
    let sigma = [PieceFunction::power_singularity(0.0, 0.25, 1.0)];
    let v = norm_on_interval(&sigma, -1.0, 1.0, NormKind::L2Sq, 1e-10)?;
    println!("lone |t|^(-1/4):   ∫|σ|² over [−1,1] = {v:.12}   (exact 4)");

    // periodized copy: every window of length 1 carries the same mass
    let periodized = [PieceFunction::PowerSingularity {
        center: 0.3,
        exponent: 0.25,
        coefficient: 1.0,
        period: Some(1.0),
    }];
    let window = norm_on_interval(&periodized, 0.3, 1.3, NormKind::L2Sq, 1e-10)?;
    let unif = unif_norm(&periodized, NormKind::L2Sq, 1.0 / 256.0)?;
    println!("periodized copy:   one-window mass  = {window:.12}");
    println!("periodized copy:   sliding-window sup = {unif:.12}");

    // τ admits stronger blowups: γ = 0.75 is fine in L1 but not squared
    let tau = [PieceFunction::power_singularity(0.5, 0.75, 1.0)];
    let l1 = norm_on_interval(&tau, 0.0, 1.0, NormKind::L1, 1e-10)?;
    println!("τ = |t−½|^(-3/4):  ∫|τ| over [0,1]   = {l1:.12}   (exact 2·(1/2)^(1/4)/(1/4) = {:.12})",
             2.0 * 0.5f64.powf(0.25) / 0.25);
    match norm_on_interval(&tau, 0.0, 1.0, NormKind::L2Sq, 1e-10) {
        Err(e) => println!("τ squared is rejected as expected: {e}"),
        Ok(v) => println!("unexpected: {v}"),
    }
    Ok(())
}
