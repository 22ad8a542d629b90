//! Twin propagation of a quasiperiodic potential and its periodic
//! approximant, measured against the certified proximity bound.
//!
//! This is the quantitative skeleton of the no-point-spectrum argument:
//! solutions of q and of the T_m-periodic approximant q_m agree from shared
//! data up to the Gronwall bound at t = ±T_m, 2T_m, while the approximant
//! solution cannot be small at those times by the three-periods bound.

use sgordon::gordon::liouville_truncation;
use sgordon::piece::PieceFunction;
use sgordon::potential::QuasiperiodicPotential;
use sgordon::propagator::StateVector;
use sgordon::spectrum::approximant_proximity;

fn main() -> sgordon::Result<()> {
    let alpha = liouville_truncation(10, 3)?;
    let qp = QuasiperiodicPotential::new(
        None,
        Some(PieceFunction::fourier_mode(1, 0.0, 1.0, 1.0)),
        None,
        None,
        alpha,
        0.0,
    )?;

    let (lambda, gamma) = (1.0, -1.0);
    let u0 = StateVector::new(1.0, 0.0);
    for m in [1, 2] {
        let r = approximant_proximity(&qp, m, lambda, gamma, u0, 1e-10)?;
        println!("convergent m = {} (period T_m = {}):", r.m, r.t_m);
        println!("{:>10} {:>16} {:>16} {:>6}", "t", "measured gap", "bound", "pass");
        for p in &r.points {
            println!(
                "{:>10.1} {:>16.6e} {:>16.6e} {:>6}",
                p.t, p.measured_gap, p.bound, p.pass
            );
        }
        println!();
    }
    Ok(())
}
