//! Propagation in quasi-derivative coordinates across δ interactions.
//!
//! Both u and the quasi-derivative u¹ = u′ − σu stay continuous across the
//! nodes of a δ-comb; the classical derivative u′ = u¹ + σu picks up the
//! textbook jump g·u(node) from the jump of σ alone.

use sgordon::potential::{eval_sum, SigmaTau};
use sgordon::propagator::{propagate, transfer_matrix, StateVector};

fn main() -> sgordon::Result<()> {
    let g = 1.0;
    let st = SigmaTau::delta_comb(g, 1.0)?;
    let lambda = 2.0;
    let u0 = StateVector::new(1.0, 0.3);

    println!("state through the node at t = 1 (g = {g}, λ = {lambda}):");
    println!("{:>10} {:>14} {:>14} {:>14}", "t", "u", "u¹", "u′ = u¹+σu");
    for t in [0.9, 0.99, 1.0 - 1e-9, 1.0 + 1e-9, 1.01, 1.1] {
        let u = propagate(&st, lambda, 0.5, t, u0, 1e-12)?;
        let sigma = eval_sum(&st.sigma, t)?;
        println!("{t:>10.6} {:>14.9} {:>14.9} {:>14.9}", u.u, u.u1, u.u1 + sigma * u.u);
    }

    let at_node = propagate(&st, lambda, 0.5, 1.0, u0, 1e-12)?;
    let du_left = at_node.u1 + (-g) * at_node.u; // σ(1⁻) = −g
    let du_right = at_node.u1; // σ(1⁺) = 0
    println!("\nreconstructed jump of u′: {:.12}", du_right - du_left);
    println!("g · u(node)             : {:.12}", g * at_node.u);

    // the transfer matrix over any interval has unit determinant
    let m = transfer_matrix(&st, lambda, 0.0, 3.0, 1e-12)?;
    println!("\ndet M over [0, 3] = {:.15}", m.det());
    Ok(())
}
