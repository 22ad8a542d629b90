//! Continued-fraction convergents in exact arithmetic.
//!
//! The truncated Liouville series Σ 10^(−k!) is the desk-scale stand-in for
//! a Liouville number: its convergents include denominators at the 10^{k!}
//! scale with drifts |α − R/T| collapsing far faster than 1/T².

use num_traits::ToPrimitive;
use sgordon::gordon::{continued_fraction, liouville_truncation};
use sgordon::potential::rational_abs_f64;

fn main() -> sgordon::Result<()> {
    let alpha = liouville_truncation(10, 4)?;
    println!("α = Σ_{{k≤4}} 10^(−k!) = {}\n", alpha.to_f64().unwrap());

    let convergents = continued_fraction(&alpha, 14)?;
    println!(
        "{:>3} {:>26} {:>26} {:>12} {:>12}",
        "m", "R", "T", "drift", "drift·T²"
    );
    for c in &convergents {
        let drift = rational_abs_f64(&(&alpha - &c.value));
        let t = c.period_f64();
        println!(
            "{:>3} {:>26} {:>26} {:>12.3e} {:>12.3e}",
            c.index,
            c.numerator.to_string(),
            c.denominator.to_string(),
            drift,
            drift * t * t,
        );
    }
    println!("\nevery drift·T² < 1 (convergent quality); the m = 6 convergent");
    println!("is the 10^{{3!}}-denominator truncation with drift 10^(−24).");

    // a badly approximable contrast: a deep Fibonacci quotient
    let mut fib: Vec<u64> = vec![1, 1];
    for k in 2..48 {
        fib.push(fib[k - 1] + fib[k - 2]);
    }
    let golden = num_rational::BigRational::new(fib[45].into(), fib[46].into());
    let conv = continued_fraction(&golden, 8)?;
    println!("\ngolden-ratio-like α: drift·T² stays of order 1/√5:");
    for c in conv.iter().take(8) {
        let drift = rational_abs_f64(&(&golden - &c.value));
        let t = c.period_f64();
        println!("  m = {}: T = {:>4}, drift·T² = {:.4}", c.index, t, drift * t * t);
    }
    Ok(())
}
