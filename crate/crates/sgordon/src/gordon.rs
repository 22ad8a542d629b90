//! Liouville convergents and periodic approximants of quasiperiodic
//! potentials.
//!
//! A quasiperiodic potential built on the dilation α is approximated by the
//! T_m-periodic potential obtained from the m-th continued-fraction
//! convergent α_m = R_m/T_m.  The certificate weights the approximation
//! error over [−T_m, 2T_m] with exp(C·T_m); a potential qualifies as fast
//! approximable when these weighted errors decay along the convergents.
//! Convergents are computed in exact integer arithmetic; only the final
//! error norms use floating quadrature, with the α − α_m difference carried
//! in two-float form through the dilated argument.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{
    norm_on_interval, rational_abs_f64, rational_two_float, NormKind, QuasiperiodicPotential,
    SigmaTau,
};

/// Largest approximant period the desk-scale error norms will integrate.
pub const PERIOD_BUDGET: f64 = 50_000.0;

/// Smallest resolvable phase drift |α − α_m|·T_m; below it the two scaled
/// copies coincide to double precision and the error norm is pure noise.
pub const RESOLVABLE_DRIFT: f64 = 1e-10;

/// One continued-fraction convergent R/T of α in exact arithmetic.
#[derive(Debug, Clone)]
pub struct Convergent {
    /// 1-based position in the convergent sequence.
    pub index: usize,
    pub numerator: BigInt,
    pub denominator: BigInt,
    /// Exact value R/T.
    pub value: BigRational,
}

impl Convergent {
    pub fn value_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }

    pub fn period_f64(&self) -> f64 {
        self.denominator.to_f64().unwrap_or(f64::INFINITY)
    }
}

/// Continued-fraction convergents of α ∈ (0, 1) by the Euclidean recurrence.
///
/// A rational α terminates with its exact value as the last convergent;
/// fewer than `m_max` entries are then returned.
pub fn continued_fraction(alpha: &BigRational, m_max: usize) -> Result<Vec<Convergent>> {
    if alpha <= &BigRational::zero() || alpha >= &BigRational::from_integer(1.into()) {
        return Err(Error::InvalidParameter("alpha must lie in (0, 1)".into()));
    }
    let mut num = alpha.numer().clone();
    let mut den = alpha.denom().clone();
    // p/q recurrences seeded by the 0/1 zeroth convergent
    let (mut p_prev, mut p) = (BigInt::one(), BigInt::zero());
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    let mut out = Vec::new();
    // alpha < 1: the integer part is 0; iterate on 1/x
    std::mem::swap(&mut num, &mut den);
    while !den.is_zero() && out.len() < m_max {
        let a = &num / &den;
        let rem = &num - &a * &den;
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push(Convergent {
            index: out.len() + 1,
            numerator: p.clone(),
            denominator: q.clone(),
            value: BigRational::new(p.clone(), q.clone()),
        });
        num = std::mem::replace(&mut den, rem);
    }
    Ok(out)
}

/// The truncated Liouville series Σ_{k=1}^{n} base^(−k!) as an exact rational.
pub fn liouville_truncation(base: u32, n: u32) -> Result<BigRational> {
    if base < 2 {
        return Err(Error::InvalidParameter("liouville base must be at least 2".into()));
    }
    if n < 1 || n > 8 {
        return Err(Error::Budget(format!(
            "liouville truncation order {n} outside the supported range 1..=8"
        )));
    }
    let mut acc = BigRational::zero();
    let mut factorial: u64 = 1;
    for k in 1..=n as u64 {
        factorial *= k;
        let denom = BigInt::from(base).pow(factorial as u32);
        acc += BigRational::new(BigInt::one(), denom);
    }
    Ok(acc)
}

/// The T_m-periodic approximant of a quasiperiodic potential: α replaced by
/// the convergent R_m/T_m, all pieces kept symbolic.  The declared period is
/// T_m, the common period of the 1-periodic parts and the dilated parts.
pub fn periodic_approximant(qp: &QuasiperiodicPotential, conv: &Convergent) -> Result<SigmaTau> {
    let t_m = conv.period_f64();
    if !(t_m <= 9e15) {
        return Err(Error::Budget(format!(
            "approximant period {} exceeds the exact-integer float range",
            conv.denominator
        )));
    }
    let (hi, lo) = rational_two_float(&conv.value);
    let mut st = qp.sigma_tau_at_rate(hi, lo)?;
    st.period = Some(t_m);
    Ok(st)
}

/// Approximation error of an approximant with period T_m:
/// (‖σ − σ_m‖_{L₂[−T_m, 2T_m]}, ‖τ − τ_m‖_{L₁[−T_m, 2T_m]}).
///
/// The τ parts of the potential and its approximant are built identically,
/// so the second component vanishes by construction.
pub fn approximation_error(
    qp: &QuasiperiodicPotential,
    approximant: &SigmaTau,
    t_m: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    if !(t_m > 0.0 && t_m <= PERIOD_BUDGET) {
        return Err(Error::Budget(format!(
            "error norms over [−{t_m}, {}] exceed the desk-scale budget {PERIOD_BUDGET}",
            2.0 * t_m
        )));
    }
    let q = qp.to_sigma_tau()?;

    let mut sigma_diff = q.sigma.clone();
    sigma_diff.extend(approximant.sigma.iter().map(|p| p.negate()));
    let err_sigma_sq = norm_on_interval(&sigma_diff, -t_m, 2.0 * t_m, NormKind::L2Sq, tol)?;

    let mut tau_diff = q.tau.clone();
    tau_diff.extend(approximant.tau.iter().map(|p| p.negate()));
    let err_tau = if q.tau == approximant.tau {
        0.0
    } else {
        norm_on_interval(&tau_diff, -t_m, 2.0 * t_m, NormKind::L1, tol)?
    };
    Ok((err_sigma_sq.max(0.0).sqrt(), err_tau))
}

/// Samples of the recurrence exponent (1/T)·log D(T) with
/// D(T) = ‖σ − σ(·+T)‖_{L₂[−T,T]} + ‖τ − τ(·+T)‖_{L₁[−T,T]}.
/// Exact recurrences (D at rounding level) report as −∞.
pub fn gordon_exponent(st: &SigmaTau, t_list: &[f64]) -> Result<Vec<(f64, f64)>> {
    if t_list.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::InvalidParameter("shift scan needs positive T values".into()));
    }
    let mut out = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let shifted = st.shift(t);
        let d = if shifted.sigma == st.sigma && shifted.tau == st.tau {
            0.0
        } else {
            let mut sigma_diff = st.sigma.clone();
            sigma_diff.extend(shifted.sigma.iter().map(|p| p.negate()));
            let mut tau_diff = st.tau.clone();
            tau_diff.extend(shifted.tau.iter().map(|p| p.negate()));
            let s2 = if st.sigma.is_empty() {
                0.0
            } else {
                norm_on_interval(&sigma_diff, -t, t, NormKind::L2Sq, 1e-13)?
            };
            let t1 = if st.tau.is_empty() {
                0.0
            } else {
                norm_on_interval(&tau_diff, -t, t, NormKind::L1, 1e-13)?
            };
            s2.max(0.0).sqrt() + t1
        };
        // rounding-level differences are exact recurrences
        let scale = 1e-12 * (1.0 + t.sqrt());
        let slope = if d <= scale { f64::NEG_INFINITY } else { d.ln() / t };
        out.push((t, slope));
    }
    Ok(out)
}

/// Per-convergent entry of the approximation certificate.
#[derive(Debug, Clone, Serialize)]
pub struct GordonEntry {
    pub m: usize,
    pub t_m: f64,
    pub alpha_m: f64,
    /// exact |α − α_m| rendered to f64
    pub drift: f64,
    pub err_sigma: f64,
    pub err_tau: f64,
    /// log of exp(C·T_m)·(err_σ + err_τ); finite even when the weight
    /// overflows f64
    pub log_weighted: f64,
    pub weighted: f64,
    /// (1/T_m)·log(err_σ + err_τ)
    pub slope: f64,
}

/// Desk-scale approximation certificate along the convergent sequence.
#[derive(Debug, Clone, Serialize)]
pub struct GordonReport {
    pub c_used: f64,
    pub entries: Vec<GordonEntry>,
    /// convergents excluded from the error norms, with the reason
    pub skipped: Vec<(usize, String)>,
    /// strict decrease of log_weighted along the usable convergents
    pub weighted_strictly_decreasing: bool,
}

/// Weighted approximation errors exp(C·T_m)·(err_σ + err_τ) over the usable
/// convergents of α.
///
/// A convergent is usable when its period fits the integration budget and
/// the drift |α − α_m|·T_m is resolvable in double precision; skipped ones
/// are listed with the reason.  Terminal convergents of a rational α have
/// zero drift and reproduce the potential exactly.
pub fn gordon_certificate(
    qp: &QuasiperiodicPotential,
    m_max: usize,
    c: f64,
) -> Result<GordonReport> {
    if !(c > 0.0) {
        return Err(Error::InvalidParameter("weight exponent C must be positive".into()));
    }
    let convergents = continued_fraction(&qp.alpha, m_max)?;
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for conv in &convergents {
        let t_m = conv.period_f64();
        if t_m > PERIOD_BUDGET {
            skipped.push((
                conv.index,
                format!("period {t_m:.3e} exceeds the integration budget {PERIOD_BUDGET:.0}"),
            ));
            continue;
        }
        let drift_exact = &qp.alpha - &conv.value;
        let drift = rational_abs_f64(&drift_exact);
        if drift != 0.0 && drift * t_m < RESOLVABLE_DRIFT {
            skipped.push((
                conv.index,
                format!(
                    "phase drift {:.3e} over one period is below double-precision resolution",
                    drift * t_m
                ),
            ));
            continue;
        }
        let approximant = periodic_approximant(qp, conv)?;
        // quadrature target well below the expected squared error
        let expected_sq = (drift * t_m).powi(2) * t_m;
        let tol = (expected_sq * 1e-7).max(1e-300).min(1e-10);
        let (err_sigma, err_tau) = approximation_error(qp, &approximant, t_m, tol)?;
        let err_sum = err_sigma + err_tau;
        let log_weighted = c * t_m + err_sum.ln();
        entries.push(GordonEntry {
            m: conv.index,
            t_m,
            alpha_m: conv.value_f64(),
            drift,
            err_sigma,
            err_tau,
            log_weighted,
            weighted: log_weighted.exp(),
            slope: err_sum.ln() / t_m,
        });
    }
    let decreasing = entries.len() >= 2
        && entries.windows(2).all(|w| w[1].log_weighted < w[0].log_weighted);
    Ok(GordonReport {
        c_used: c,
        entries,
        skipped,
        weighted_strictly_decreasing: decreasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piece::PieceFunction;
    use num_traits::Signed;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rational_terminates_exactly() {
        let conv = continued_fraction(&rat(1, 3), 10).unwrap();
        assert_eq!(conv.len(), 1);
        assert_eq!(conv[0].value, rat(1, 3));
    }

    #[test]
    fn golden_ratio_fibonacci_convergents() {
        // (√5−1)/2 approximated by a deep Fibonacci quotient: convergents
        // are the Fibonacci quotients 1/1, 1/2, 2/3, 3/5, 5/8, ...
        let mut fib = vec![1u64, 1];
        for k in 2..60 {
            let v = fib[k - 1] + fib[k - 2];
            fib.push(v);
        }
        let alpha = rat(fib[49] as i64, fib[50] as i64);
        let conv = continued_fraction(&alpha, 6).unwrap();
        let expect = [(1, 1), (1, 2), (2, 3), (3, 5), (5, 8), (8, 13)];
        for (c, (p, q)) in conv.iter().zip(expect) {
            assert_eq!(c.value, rat(p, q), "m = {}", c.index);
        }
    }

    #[test]
    fn convergent_quality_invariants() {
        let alpha = liouville_truncation(10, 4).unwrap();
        let conv = continued_fraction(&alpha, 20).unwrap();
        for w in conv.windows(2) {
            let err = (&alpha - &w[0].value).abs();
            // |α − R/T| ≤ 1/(T·T_next), hence < 1/T²
            let bound = BigRational::new(
                BigInt::one(),
                &w[0].denominator * &w[1].denominator,
            );
            assert!(err <= bound, "m = {}", w[0].index);
            let sq = BigRational::new(
                BigInt::one(),
                &w[0].denominator * &w[0].denominator,
            );
            assert!(err < sq, "m = {}", w[0].index);
            assert!(w[0].denominator < w[1].denominator);
        }
        // terminal convergent is exact
        let last = conv.last().unwrap();
        assert_eq!(last.value, alpha);
    }

    #[test]
    fn liouville_truncation_values() {
        assert_eq!(liouville_truncation(10, 2).unwrap(), rat(11, 100));
        assert_eq!(liouville_truncation(10, 3).unwrap(), rat(110_001, 1_000_000));
        // factorial-scale denominators appear among the convergents
        let conv = continued_fraction(&liouville_truncation(10, 4).unwrap(), 20).unwrap();
        let denoms: Vec<f64> = conv.iter().map(|c| c.period_f64()).collect();
        assert!(denoms.contains(&100.0));
        assert!(denoms.contains(&1_000_000.0));
    }

    fn qp_sine(alpha: BigRational) -> QuasiperiodicPotential {
        QuasiperiodicPotential::new(
            None,
            Some(PieceFunction::fourier_mode(1, 0.0, 1.0, 1.0)),
            None,
            None,
            alpha,
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn approximant_periods() {
        let qp = qp_sine(rat(1, 2));
        let conv = continued_fraction(&qp.alpha, 4).unwrap();
        let st = periodic_approximant(&qp, &conv[0]).unwrap();
        assert_eq!(st.period, Some(2.0));
    }

    #[test]
    fn pure_one_periodic_approximant_is_exact() {
        // σ₂ = τ₂ = 0: the approximant repeats the 1-periodic part itself
        let qp = QuasiperiodicPotential::new(
            Some(PieceFunction::sawtooth(1.0, 1.0, 0.0)),
            None,
            None,
            None,
            rat(2, 5),
            0.0,
        )
        .unwrap();
        let conv = continued_fraction(&qp.alpha, 4).unwrap();
        let st = periodic_approximant(&qp, conv.last().unwrap()).unwrap();
        let (es, et) = approximation_error(&qp, &st, st.period.unwrap(), 1e-12).unwrap();
        assert!(es < 1e-12, "err_sigma = {es}");
        assert_eq!(et, 0.0);
    }

    #[test]
    fn tau2_folds_into_sigma() {
        let qp = QuasiperiodicPotential::new(
            None,
            None,
            None,
            Some(PieceFunction::fourier_mode(1, 1.0, 0.0, 1.0)),
            rat(2, 5),
            0.0,
        )
        .unwrap();
        let st = qp.to_sigma_tau().unwrap();
        // σ = sin(2π·0.4 t)/(2π), τ empty (c = 0)
        assert!(st.tau.is_empty());
        let t = 0.3;
        let expect = (std::f64::consts::TAU * 0.4 * t).sin() / std::f64::consts::TAU;
        let got = crate::potential::eval_sum(&st.sigma, t).unwrap();
        assert!((got - expect).abs() < 1e-13, "{got} vs {expect}");
    }

    #[test]
    fn approximation_error_against_dense_oracle() {
        // independent trapezoid oracle on the first convergent of the n = 3
        // truncation
        let alpha = liouville_truncation(10, 3).unwrap();
        let qp = qp_sine(alpha.clone());
        let conv = continued_fraction(&alpha, 3).unwrap();
        let c1 = &conv[0];
        assert_eq!(c1.denominator, BigInt::from(9));
        let st = periodic_approximant(&qp, c1).unwrap();
        let (err_sigma, err_tau) = approximation_error(&qp, &st, 9.0, 1e-12).unwrap();
        assert_eq!(err_tau, 0.0);

        let a = alpha.to_f64().unwrap();
        let am = c1.value_f64();
        let n = 400_000usize;
        let h = 27.0 / n as f64;
        let mut acc = 0.0;
        for k in 0..=n {
            let t = -9.0 + h * k as f64;
            let d = (std::f64::consts::TAU * a * t).sin() - (std::f64::consts::TAU * am * t).sin();
            let w = if k == 0 || k == n { 0.5 } else { 1.0 };
            acc += w * d * d;
        }
        let oracle = (acc * h).sqrt();
        assert!(
            (err_sigma - oracle).abs() <= 1e-6 * oracle,
            "quadrature {err_sigma} vs trapezoid {oracle}"
        );
    }

    #[test]
    fn error_bounded_by_two_scale_inequality() {
        // the two-scale inequality dominates the measured approximation
        // error whenever its hypotheses hold (here the m = 2 convergent:
        // T = 100 ≥ 1/α; the m = 1 one has T = 9 < 1/α and is excluded)
        let alpha = liouville_truncation(10, 3).unwrap();
        let qp = qp_sine(alpha.clone());
        let conv = continued_fraction(&alpha, 3).unwrap();
        let c2 = &conv[1];
        assert_eq!(c2.period_f64(), 100.0);
        let st = periodic_approximant(&qp, c2).unwrap();
        let (err_sigma, _) = approximation_error(&qp, &st, 100.0, 1e-12).unwrap();

        let a = alpha.to_f64().unwrap().min(c2.value_f64());
        let b = alpha.to_f64().unwrap().max(c2.value_f64());
        assert!(a <= b && b <= 2.0 * a && 100.0 >= 1.0 / a);
        let grid = crate::sobolev::GridFunction::from_fn(0.0, 1.0, 257, |t| {
            (std::f64::consts::TAU * t).sin()
        })
        .unwrap();
        let rep = crate::sobolev::check_two_scale_bound(&grid, a, b, 0.0, 100.0, 1.0).unwrap();
        assert!(
            err_sigma * err_sigma <= rep.rhs,
            "err² = {} exceeds the two-scale bound {}",
            err_sigma * err_sigma,
            rep.rhs
        );
    }

    #[test]
    fn exponent_of_free_potential_vanishes() {
        let st = SigmaTau::free(Some(1.0));
        for (_, slope) in gordon_exponent(&st, &[1.0, 2.5, 7.0]).unwrap() {
            assert_eq!(slope, f64::NEG_INFINITY);
        }
    }

    #[test]
    fn exponent_of_periodic_potential_is_marker() {
        let st = SigmaTau::new(
            vec![PieceFunction::sawtooth(1.0, 1.0, 0.0)],
            vec![PieceFunction::StepTrain {
                breakpoints: vec![0.0, 0.5, 1.0],
                values: vec![1.0, -1.0],
                periodic: true,
            }],
            Some(1.0),
        )
        .unwrap();
        for (t, slope) in gordon_exponent(&st, &[1.0, 2.0, 3.0]).unwrap() {
            assert_eq!(slope, f64::NEG_INFINITY, "T = {t}");
        }
        // non-integer shifts see a genuine difference
        let pts = gordon_exponent(&st, &[1.5]).unwrap();
        assert!(pts[0].1.is_finite());
    }

    #[test]
    fn badly_approximable_contrast() {
        // Fibonacci-quotient α: drift per period stays O(1), no fast decay
        let mut fib = vec![1i64, 1];
        for k in 2..40 {
            let v = fib[k - 1] + fib[k - 2];
            fib.push(v);
        }
        let qp = qp_sine(rat(fib[30], fib[31]));
        let st = qp.to_sigma_tau().unwrap();
        let slopes = gordon_exponent(&st, &[2.0, 4.0, 8.0]).unwrap();
        for (t, slope) in slopes {
            assert!(slope > -4.0, "T = {t}: slope {slope} too steep for a badly approximable dilation");
        }
    }

    #[test]
    fn certificate_on_liouville_truncation() {
        let alpha = liouville_truncation(10, 4).unwrap();
        let qp = qp_sine(alpha);
        let report = gordon_certificate(&qp, 8, 1.0).unwrap();
        // the first three usable convergents have periods 9, 100, 9909
        let periods: Vec<f64> = report.entries.iter().map(|e| e.t_m).collect();
        assert!(periods.starts_with(&[9.0, 100.0, 9909.0]), "periods {periods:?}");
        for e in &report.entries {
            assert_eq!(e.err_tau, 0.0, "m = {}", e.m);
            assert!(e.err_sigma > 0.0);
            assert!(e.log_weighted.is_finite());
        }
        // the e^{C·T_m} weight dominates the error decay at double-precision
        // scale: the weighted sequence rises along consecutive convergents
        assert!(
            !report.weighted_strictly_decreasing,
            "weighted errors unexpectedly decreasing: {:?}",
            report.entries.iter().map(|e| e.log_weighted).collect::<Vec<_>>()
        );
        assert!(report.entries[0].log_weighted < report.entries[1].log_weighted);
    }
}
