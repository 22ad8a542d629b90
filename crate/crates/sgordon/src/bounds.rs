//! Certified a priori estimates for solutions.
//!
//! Three layers of explicit bounds, all computable to quadrature accuracy:
//! a weighted growth bound for general trace-free systems [[a, 1], [b, −a]],
//! its λ-resolved specialization to the quasi-derivative system (with the
//! case-split constant C₁), and a Gronwall proximity bound between solutions
//! of two nearby potentials.  Matrix norms of the perturbation
//! B = [[σ, 0], [−σ² + τ − γ, −σ]] use the closed form
//! |b|/2 + √(b²/4 + a²), which equals the spectral norm exactly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{eval_sum_two, norm_on_interval, sum_structure, NormKind, SigmaTau};
use crate::quadrature::{integrate_adaptive, integrate_structured, Structure};

/// Outcome of one verified inequality.
#[derive(Debug, Clone, Serialize)]
pub struct BoundCertificate {
    pub context: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
}

impl BoundCertificate {
    /// Certifies lhs ≤ rhs with slack `tolerance` (pass ⇔ rhs − lhs ≥ −tolerance).
    pub fn check(context: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let margin = rhs - lhs;
        BoundCertificate {
            context: context.into(),
            lhs,
            rhs,
            margin,
            pass: margin >= -tolerance,
        }
    }
}

/// Constants entering the Gronwall proximity estimate at parameters (λ, γ).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GrowthParams {
    pub lambda: f64,
    pub gamma: f64,
    pub c1: f64,
    pub c3: f64,
    pub c2: f64,
}

impl GrowthParams {
    /// Requires λ > γ; C₃ = sup_t of the norm of exp(t·A) for the rotation
    /// generator A with entries (0, 1; γ−λ, 0), equal to max(ω, 1/ω)
    /// with ω = √(λ − γ), and C₂ = C₃·e^{C₃}.
    pub fn new(lambda: f64, gamma: f64) -> Result<Self> {
        if !(lambda > gamma) {
            return Err(Error::InvalidParameter(format!(
                "growth parameters need lambda > gamma (got {lambda} ≤ {gamma})"
            )));
        }
        let omega = (lambda - gamma).sqrt();
        let c3 = omega.max(1.0 / omega);
        Ok(GrowthParams {
            lambda,
            gamma,
            c1: lambda_case_c1(lambda),
            c3,
            c2: c3 * c3.exp(),
        })
    }
}

/// Spectral norm of [[a, 0], [b, −a]]: |b|/2 + √(b²/4 + a²).
pub fn offdiag_norm(a: f64, b: f64) -> f64 {
    b.abs() / 2.0 + (b * b / 4.0 + a * a).sqrt()
}

/// Weighted growth bound for an arbitrary solution of
/// dX/dt = [[a(t), 1], [b(t), −a(t)]]·X:
///
///   |X(t)| ≤ c · exp( ½ ∫ √(4a² + (c + b/c)²) ) · |X(0)|
///
/// for every weight c ≥ 1; the integral runs over [min(0,t), max(0,t)].
pub fn growth_bound_generic(
    a: impl Fn(f64) -> f64,
    b: impl Fn(f64) -> f64,
    c: f64,
    t: f64,
    x0_norm: f64,
    tol: f64,
) -> Result<f64> {
    if !(c >= 1.0) {
        return Err(Error::InvalidParameter("weight c must be at least 1".into()));
    }
    let (lo, hi) = (t.min(0.0), t.max(0.0));
    if lo == hi {
        return Ok(c * x0_norm);
    }
    let integral = integrate_adaptive(
        |s| {
            let av = a(s);
            let bv = c + b(s) / c;
            Ok((4.0 * av * av + bv * bv).sqrt())
        },
        lo,
        hi,
        tol,
    )?;
    Ok(c * (0.5 * integral).exp() * x0_norm)
}

/// The multiplier C₁(λ) of the λ-resolved growth bound.
pub fn lambda_case_c1(lambda: f64) -> f64 {
    if lambda >= 0.0 {
        (lambda + 0.25).sqrt() + 0.5
    } else if lambda > -1.0 {
        1.0
    } else {
        (-lambda).sqrt()
    }
}

/// The constant added to σ² + |τ| in the exponent of the λ-resolved bound.
fn lambda_case_additive(lambda: f64) -> f64 {
    if lambda >= 0.0 {
        2.0 - 1.0 / lambda_case_c1(lambda)
    } else if lambda > -1.0 {
        1.0 - lambda
    } else {
        2.0 * (-lambda).sqrt()
    }
}

/// λ-resolved growth bound for the quasi-derivative system: the certified
/// multiplier for |X(0)|,
///
///   C₁ · exp( ½ ∫ (σ² + |τ| + additive(λ)) ),
///
/// with the case split C₁ = √(λ+¼)+½ (λ ≥ 0), 1 (−1 < λ < 0), √(−λ) (λ ≤ −1).
pub fn growth_bound_lambda(st: &SigmaTau, lambda: f64, t: f64, tol: f64) -> Result<f64> {
    let c1 = lambda_case_c1(lambda);
    let (lo, hi) = (t.min(0.0), t.max(0.0));
    let mut exponent = lambda_case_additive(lambda) * (hi - lo);
    if lo < hi {
        if !st.sigma.is_empty() {
            exponent += norm_on_interval(&st.sigma, lo, hi, NormKind::L2Sq, tol)?;
        }
        if !st.tau.is_empty() {
            exponent += norm_on_interval(&st.tau, lo, hi, NormKind::L1, tol)?;
        }
    }
    Ok(c1 * (0.5 * exponent).exp())
}

/// Uniform-norm growth bound: C₁ · exp((|t|+1)(1 + √((−λ)₊) + ½‖σ‖²_{2,unif}
/// + ½‖τ‖_{1,unif})), the conservative ε = 0 form.
pub fn unif_growth_bound(sigma_unif_sq: f64, tau_unif: f64, lambda: f64, t: f64) -> Result<f64> {
    if sigma_unif_sq < 0.0 || tau_unif < 0.0 {
        return Err(Error::InvalidParameter("uniform norms must be nonnegative".into()));
    }
    let c1 = lambda_case_c1(lambda);
    let neg_part = (-lambda).max(0.0).sqrt();
    let exponent = (t.abs() + 1.0) * (1.0 + neg_part + 0.5 * sigma_unif_sq + 0.5 * tau_unif);
    Ok(c1 * exponent.exp())
}

/// Merge quadrature structures of the σ lists of both potentials (squared
/// scale) and the τ lists (linear scale) for the perturbation integrand.
fn twin_structure(st: &SigmaTau, st_m: &SigmaTau, lo: f64, hi: f64) -> Structure {
    let mut sigma_all: Vec<_> = st.sigma.clone();
    sigma_all.extend(st_m.sigma.iter().cloned());
    let mut tau_all: Vec<_> = st.tau.clone();
    tau_all.extend(st_m.tau.iter().cloned());
    let s2 = sum_structure(&sigma_all, lo, hi, Some(2.0));
    let s1 = sum_structure(&tau_all, lo, hi, Some(1.0));
    let mut nodes = s2.nodes;
    nodes.extend(s1.nodes);
    let mut singular = s2.singular;
    for (c, p) in s1.singular {
        match singular.iter_mut().find(|(x, _)| (*x - c).abs() <= 1e-13 * (hi - lo).abs()) {
            Some((_, q)) => *q = q.max(p),
            None => singular.push((c, p)),
        }
    }
    let max_cell = match (s2.max_cell, s1.max_cell) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    Structure { nodes, singular, max_cell }
}

/// Gronwall proximity bound between the solution U of the potential `st` and
/// the solution Ũ of `st_m` started from the same data:
///
///   |U(t) − Ũ(t)| ≤ C₂ · ∫ |B − B̃| · |Ũ| · exp( ∫ |B| ),
///
/// with the entrywise estimates |B − B̃| ≤ |τ − τ_m| + |σ − σ_m|(|σ| + |σ_m| + 1)
/// and |B| ≤ 1 + |γ| + σ² + |τ|, and C₂ = C₃·e^{C₃}.  `u_tilde_norm_bound`
/// is a bound for sup |Ũ(s)| over the integration range.
pub fn gronwall_bound(
    st: &SigmaTau,
    st_m: &SigmaTau,
    lambda: f64,
    gamma: f64,
    t: f64,
    u_tilde_norm_bound: f64,
    tol: f64,
) -> Result<f64> {
    let params = GrowthParams::new(lambda, gamma)?;
    let (lo, hi) = (t.min(0.0), t.max(0.0));
    if lo == hi {
        return Ok(0.0);
    }

    let structure = twin_structure(st, st_m, lo, hi);
    let perturbation = integrate_structured(
        |s, ds| {
            let sv = eval_sum_two(&st.sigma, s, ds)?;
            let svm = eval_sum_two(&st_m.sigma, s, ds)?;
            let tv = eval_sum_two(&st.tau, s, ds)?;
            let tvm = eval_sum_two(&st_m.tau, s, ds)?;
            Ok((tv - tvm).abs() + (sv - svm).abs() * (sv.abs() + svm.abs() + 1.0))
        },
        lo,
        hi,
        &structure,
        tol,
    )?;

    let mut b_integral = (hi - lo) * (1.0 + gamma.abs());
    if !st.sigma.is_empty() {
        b_integral += norm_on_interval(&st.sigma, lo, hi, NormKind::L2Sq, tol)?;
    }
    if !st.tau.is_empty() {
        b_integral += norm_on_interval(&st.tau, lo, hi, NormKind::L1, tol)?;
    }

    Ok(params.c2 * perturbation * u_tilde_norm_bound * b_integral.exp())
}

/// The approximation-rate threshold C_q = 4 + 2√|γ| + 2|γ| + 4‖σ‖²_{2,unif}
/// + 4‖τ‖_{1,unif}.
pub fn c_q(gamma: f64, sigma_unif_sq: f64, tau_unif: f64) -> f64 {
    4.0 + 2.0 * gamma.abs().sqrt() + 2.0 * gamma.abs() + 4.0 * sigma_unif_sq + 4.0 * tau_unif
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piece::PieceFunction;
    use crate::propagator::{propagate, spectral_norm_2x2, step_exact_constant, StateVector};

    #[test]
    fn offdiag_norm_closed_cases() {
        assert_eq!(offdiag_norm(0.0, 2.0), 2.0);
        assert!((offdiag_norm(3.0, 4.0) - (2.0 + 13.0f64.sqrt())).abs() < 1e-14);
        assert_eq!(offdiag_norm(-5.0, 0.0), 5.0);
    }

    #[test]
    fn offdiag_norm_equals_spectral_norm() {
        let mut state = 0x9E3779B97F4A7C15u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 10.0 - 5.0
        };
        for _ in 0..200 {
            let (a, b) = (next(), next());
            let m = [[a, 0.0], [b, -a]];
            assert!((offdiag_norm(a, b) - spectral_norm_2x2(&m)).abs() < 1e-12);
        }
    }

    #[test]
    fn generic_bound_rotation_is_tight() {
        // a ≡ 0, b ≡ −1, c = 1: the integrand vanishes, bound = |X0|,
        // attained by the norm-preserving rotation
        let bound = growth_bound_generic(|_| 0.0, |_| -1.0, 1.0, 5.0, 1.0, 1e-12).unwrap();
        assert!((bound - 1.0).abs() < 1e-10);
    }

    #[test]
    fn generic_bound_dominates_shear() {
        let bound = growth_bound_generic(|_| 0.0, |_| 0.0, 1.0, 2.0, 1.0, 1e-12).unwrap();
        assert!((bound - std::f64::consts::E).abs() < 1e-10);
        // actual growth of the shear [[1, t], [0, 1]] at t = 2
        let shear = [[1.0, 2.0], [0.0, 1.0]];
        let actual = spectral_norm_2x2(&shear);
        assert!((actual - (1.0 + 2.0f64.sqrt())).abs() < 1e-12);
        assert!(actual <= bound);
    }

    #[test]
    fn generic_bound_dominates_piecewise_flow() {
        // fixed piecewise-constant (a, b) on [0, 3]; X propagated exactly
        let cuts = [0.0, 0.8, 1.7, 3.0];
        let avals = [0.4, -0.6, 0.2];
        let bvals = [1.5, -2.0, 0.7];
        let a = |s: f64| -> f64 {
            let k = cuts.iter().rposition(|c| *c <= s).unwrap().min(2);
            avals[k]
        };
        let b = |s: f64| -> f64 {
            let k = cuts.iter().rposition(|c| *c <= s).unwrap().min(2);
            bvals[k]
        };
        let mut x = StateVector::new(0.6, -0.8);
        for k in 0..3 {
            // generator [[a,1],[b,−a]] maps onto the σ/τ step with λ = 0
            let m = step_exact_constant(avals[k], bvals[k] + avals[k] * avals[k], 0.0, cuts[k + 1] - cuts[k]);
            x = m.apply(&x);
        }
        for c in [1.0, 1.7, 3.0, 5.0] {
            let bound = growth_bound_generic(a, b, c, 3.0, 1.0, 1e-11).unwrap();
            assert!(
                x.norm() <= bound * (1.0 + 1e-9),
                "c = {c}: |X| = {} > bound {bound}",
                x.norm()
            );
        }
    }

    #[test]
    fn lambda_case_constants() {
        assert!((lambda_case_c1(0.0) - 1.0).abs() < 1e-15);
        assert!((lambda_case_c1(-4.0) - 2.0).abs() < 1e-15);
        assert!((lambda_case_c1(-0.5) - 1.0).abs() < 1e-15);
        assert!((lambda_case_c1(2.0) - (2.25f64.sqrt() + 0.5)).abs() < 1e-15);
    }

    #[test]
    fn lambda_bound_dominates_propagation() {
        let st = SigmaTau::new(
            vec![PieceFunction::sawtooth(1.0, 1.0, 0.0)],
            vec![PieceFunction::constant(-0.5)],
            Some(1.0),
        )
        .unwrap();
        for lambda in [-4.0, -0.5, 0.0, 2.5] {
            for t in [-2.0, 1.5] {
                let u = propagate(&st, lambda, 0.0, t, StateVector::new(0.8, 0.6), 1e-11).unwrap();
                let bound = growth_bound_lambda(&st, lambda, t, 1e-11).unwrap();
                assert!(
                    u.norm() <= bound * (1.0 + 1e-9),
                    "λ = {lambda}, t = {t}: |X| = {} > {bound}",
                    u.norm()
                );
            }
        }
    }

    #[test]
    fn lambda_bound_dominates_singular_potential() {
        let st = SigmaTau::new(
            vec![PieceFunction::PowerSingularity {
                center: 0.35,
                exponent: 0.4,
                coefficient: 0.7,
                period: Some(1.0),
            }],
            vec![PieceFunction::constant(0.3)],
            Some(1.0),
        )
        .unwrap();
        for lambda in [-3.0, 0.5, 4.0] {
            for t in [-1.5, 2.0] {
                let u = propagate(&st, lambda, 0.0, t, StateVector::new(0.6, -0.8), 1e-10).unwrap();
                let bound = growth_bound_lambda(&st, lambda, t, 1e-10).unwrap();
                assert!(
                    u.norm() <= bound * (1.0 + 1e-9),
                    "λ = {lambda}, t = {t}: |X| = {} > {bound}",
                    u.norm()
                );
            }
        }
    }

    #[test]
    fn unif_bound_substitutions() {
        // all norms 0, λ = 0, t = 0: C₁·e
        let v = unif_growth_bound(0.0, 0.0, 0.0, 0.0).unwrap();
        assert!((v - std::f64::consts::E).abs() < 1e-12);
        // λ = −4, t = 1: 2·e⁶
        let v = unif_growth_bound(0.0, 0.0, -4.0, 1.0).unwrap();
        assert!((v - 2.0 * 6.0f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn unif_bound_dominates_interval_bound() {
        let st = SigmaTau::delta_comb(1.0, 1.0).unwrap();
        let (ssq, t1) = st.unif_norms().unwrap();
        for lambda in [-2.0, 0.5, 3.0] {
            for t in [-3.0, 2.0] {
                let local = growth_bound_lambda(&st, lambda, t, 1e-10).unwrap();
                let global = unif_growth_bound(ssq, t1, lambda, t).unwrap();
                assert!(local <= global * (1.0 + 1e-9), "λ={lambda}, t={t}: {local} > {global}");
            }
        }
    }

    #[test]
    fn gronwall_identical_potentials() {
        let st = SigmaTau::delta_comb(1.0, 1.0).unwrap();
        let b = gronwall_bound(&st, &st.clone(), 1.0, -1.0, 2.0, 10.0, 1e-10).unwrap();
        assert!(b.abs() < 1e-9, "bound {b} should vanish");
    }

    #[test]
    fn gronwall_constants() {
        // λ − γ = 1: ω = 1, C₃ = 1, C₂ = e
        let p = GrowthParams::new(0.5, -0.5).unwrap();
        assert!((p.c3 - 1.0).abs() < 1e-15);
        assert!((p.c2 - std::f64::consts::E).abs() < 1e-14);
        assert!(GrowthParams::new(1.0, 1.0).is_err());
    }

    #[test]
    fn rotation_group_norm_bound_sampled() {
        // ‖exp(t·[[0,1],[γ−λ,0]])‖ ≤ max(ω, 1/ω) sampled over a period
        for (lambda, gamma) in [(1.0, 0.0), (0.5, -3.0), (2.0, 1.9)] {
            let omega = (lambda - gamma as f64).sqrt();
            let c3 = omega.max(1.0 / omega);
            let period = 2.0 * std::f64::consts::PI / omega;
            for k in 0..64 {
                let t = period * k as f64 / 64.0;
                let (s, c) = (omega * t).sin_cos();
                let m = [[c, s / omega], [-omega * s, c]];
                assert!(spectral_norm_2x2(&m) <= c3 * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn gronwall_dominates_twin_gap() {
        let st = SigmaTau::delta_comb(1.0, 1.0).unwrap();
        let st_m = SigmaTau::delta_comb(0.9, 1.0).unwrap();
        let (lambda, gamma) = (1.0, -0.5);
        let u0 = StateVector::new(1.0, 0.0);
        for t in [-1.5, 1.0, 2.0] {
            let u = propagate(&st, lambda, 0.0, t, u0, 1e-11).unwrap();
            let um = propagate(&st_m, lambda, 0.0, t, u0, 1e-11).unwrap();
            let gap = u.sub(&um).norm();
            let (ssq, t1) = st_m.unif_norms().unwrap();
            let sup = unif_growth_bound(ssq, t1, lambda, t).unwrap();
            let bound = gronwall_bound(&st, &st_m, lambda, gamma, t, sup, 1e-10).unwrap();
            assert!(gap <= bound, "t = {t}: gap {gap} > bound {bound}");
        }
    }

    #[test]
    fn c_q_values_and_monotonicity() {
        assert!((c_q(-1.0, 0.0, 0.0) - 8.0).abs() < 1e-14);
        assert!((c_q(0.0, 0.0, 0.0) - 4.0).abs() < 1e-14);
        assert!((c_q(-4.0, 1.0, 1.0) - 24.0).abs() < 1e-14);
        assert!(c_q(-2.0, 0.5, 0.1) < c_q(-3.0, 0.5, 0.1));
        assert!(c_q(-2.0, 0.5, 0.1) < c_q(-2.0, 0.6, 0.1));
        assert!(c_q(-2.0, 0.5, 0.1) < c_q(-2.0, 0.5, 0.2));
    }
}
