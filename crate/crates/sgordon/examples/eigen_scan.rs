//! No-eigenvalue-evidence scan over a band/gap region.
//!
//! An eigenfunction normalized by |U(0)| = 1 would have to decay in both
//! directions; the three-periods bound keeps max{|U(−T)|, |U(T)|, |U(2T)|}
//! ≥ ½ for every initial angle.  The scan minimizes that max over angles on
//! a λ grid and samples decay profiles — neither ever drops toward zero.

use sgordon::potential::SigmaTau;
use sgordon::propagator::StateVector;
use sgordon::spectrum::{decay_profile, eigen_scan};

fn main() -> sgordon::Result<()> {
    let st = SigmaTau::delta_comb(1.0, 1.0)?;
    let grid: Vec<f64> = (0..25).map(|k| 0.2 + 12.0 * k as f64 / 24.0).collect();
    let report = eigen_scan(&st, &grid, 360, 1e-9)?;

    println!("{:>10} {:>16} {:>10}", "lambda", "min-max ratio", "decaying");
    for e in &report.entries {
        println!("{:>10.4} {:>16.9} {:>10}", e.lambda, e.min_max_ratio, e.decaying);
    }
    println!("\nverdict: {}  (threshold {})", report.verdict, report.threshold);

    // a profile in a spectral gap grows at the Floquet rate
    let lambda = 2.0;
    println!("\nsquared state norms at λ = {lambda} (inside a gap):");
    let profile = decay_profile(&st, lambda, StateVector::from_angle(0.7), 3.0, 7)?;
    for (t, v) in profile {
        println!("  |U({t:>5.1})|² = {v:>12.6}");
    }
    Ok(())
}
