//! Band structure of the Kronig–Penney δ-comb.
//!
//! The comb q = g·Σₙ δ(t − n) is represented distributionally as
//! q = σ′ + τ with σ = −g·frac(t) and τ ≡ g.  The monodromy trace
//! (discriminant) obeys the textbook dispersion 2cos k + (g/k)sin k at
//! λ = k², and |discriminant| ≤ 2 marks the spectral bands.

use sgordon::floquet::band_scan;
use sgordon::potential::SigmaTau;

fn main() -> sgordon::Result<()> {
    let g = 1.0;
    let comb = SigmaTau::delta_comb(g, 1.0)?;

    let grid: Vec<f64> = (0..60).map(|k| 0.05 + 12.0 * k as f64 / 59.0).collect();
    let points = band_scan(&comb, &grid, 1e-10)?;

    println!("Kronig–Penney comb, strength g = {g}");
    println!("{:>10} {:>14} {:>14} {:>8}", "lambda", "discriminant", "analytic", "band");
    let mut edges = 0;
    let mut prev_in = None;
    for p in &points {
        let k = p.lambda.sqrt();
        let analytic = 2.0 * k.cos() + g * k.sin() / k;
        println!(
            "{:>10.4} {:>14.8} {:>14.8} {:>8}",
            p.lambda,
            p.discriminant,
            analytic,
            if p.in_band { "in" } else { "gap" }
        );
        if prev_in.is_some() && prev_in != Some(p.in_band) {
            edges += 1;
        }
        prev_in = Some(p.in_band);
    }
    println!("\nband edges crossed on this grid: {edges}");
    Ok(())
}
