//! Twin-solution proximity under a certified Gronwall bound.
//!
//! Solutions of two nearby potentials started from the same data stay
//! within C₂·∫|B − B̃|·|Ũ|·exp(∫|B|), with all matrix norms bounded through
//! the closed form |b|/2 + √(b²/4 + a²) and C₂ = C₃e^{C₃} from the bounded
//! group of the comparison system.

use sgordon::bounds::{gronwall_bound, unif_growth_bound, GrowthParams};
use sgordon::potential::SigmaTau;
use sgordon::propagator::{propagate, StateVector};

fn main() -> sgordon::Result<()> {
    let q = SigmaTau::delta_comb(1.0, 1.0)?;
    let q_m = SigmaTau::delta_comb(0.92, 1.0)?; // slightly weaker comb
    let (lambda, gamma) = (1.5, -1.0);
    let u0 = StateVector::new(1.0, 0.0);

    let params = GrowthParams::new(lambda, gamma)?;
    println!(
        "λ = {lambda}, γ = {gamma}:  C₁ = {:.4}, C₃ = {:.4}, C₂ = C₃e^C₃ = {:.4}\n",
        params.c1, params.c3, params.c2
    );

    let (ssq, t1) = q_m.unif_norms()?;
    println!("{:>6} {:>16} {:>16} {:>10}", "t", "measured gap", "gronwall bound", "ratio");
    for t in [-2.0, -1.0, 1.0, 2.0, 3.0] {
        let u = propagate(&q, lambda, 0.0, t, u0, 1e-11)?;
        let um = propagate(&q_m, lambda, 0.0, t, u0, 1e-11)?;
        let gap = u.sub(&um).norm();
        let sup = unif_growth_bound(ssq, t1, lambda, t)? * u0.norm();
        let bound = gronwall_bound(&q, &q_m, lambda, gamma, t, sup, 1e-11)?;
        println!("{t:>6.1} {gap:>16.9e} {bound:>16.9e} {:>10.3e}", gap / bound);
    }
    println!("\nidentical potentials give a vanishing bound:");
    let zero = gronwall_bound(&q, &q.clone(), lambda, gamma, 2.0, 10.0, 1e-11)?;
    println!("bound(q, q) = {zero:.3e}");
    Ok(())
}
