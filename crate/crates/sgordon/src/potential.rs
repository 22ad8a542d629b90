//! Distributional potentials q = σ′ + τ.
//!
//! A potential is stored as the pair of function lists (σ, τ); the
//! distributional derivative is never formed.  σ must be locally square
//! integrable and τ locally integrable, which for power-law pieces means
//! exponents below 1/2 and 1 respectively.  The module provides interval
//! norms, sliding-window uniform norms, the δ-comb construction and the
//! absorption of a periodic τ part into the σ component.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::piece::{PieceFunction, Periodicity};
use crate::quadrature::{integrate_structured, Structure};

/// Which norm an integral computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    /// ∫ |f|
    L1,
    /// ∫ |f|²
    L2Sq,
}

/// Role of a piece inside a potential, fixing the admissible singularity
/// strength: σ ∈ L₂,loc needs γ < 1/2, τ ∈ L₁,loc needs γ < 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PieceRole {
    Sigma,
    Tau,
}

impl PieceRole {
    fn exponent_limit(self) -> f64 {
        match self {
            PieceRole::Sigma => 0.5,
            PieceRole::Tau => 1.0,
        }
    }
}

/// Validate one piece for a role.
pub fn validate_for_role(piece: &PieceFunction, role: PieceRole) -> Result<()> {
    piece.validate()?;
    let g = piece.max_singular_exponent();
    if g >= role.exponent_limit() {
        return Err(Error::NonIntegrable { exponent: g });
    }
    Ok(())
}

/// The explicit bump φ: quadratic splines forming a partition of unity,
/// φ(t) = 2(t+1)² on [−1,−1/2), 1 − 2t² on [−1/2,1/2), 2(t−1)² on [1/2,1],
/// zero elsewhere; Σₙ φ(t − n) ≡ 1.
pub fn bump_phi(t: f64) -> f64 {
    if t < -1.0 || t > 1.0 {
        0.0
    } else if t < -0.5 {
        2.0 * (t + 1.0) * (t + 1.0)
    } else if t < 0.5 {
        1.0 - 2.0 * t * t
    } else {
        2.0 * (t - 1.0) * (t - 1.0)
    }
}

/// Pointwise value of a piece list.
pub fn eval_sum(pieces: &[PieceFunction], t: f64) -> Result<f64> {
    eval_sum_two(pieces, t, 0.0)
}

/// Value of a piece list at the two-float point `t_hi + t_lo`.
pub fn eval_sum_two(pieces: &[PieceFunction], t_hi: f64, t_lo: f64) -> Result<f64> {
    let mut acc = 0.0;
    for p in pieces {
        acc += p.eval_two(t_hi, t_lo)?;
    }
    Ok(acc)
}

/// Signed integral ∫ₓʸ Σ pieces, closed form where available.
pub fn integrate_sum(pieces: &[PieceFunction], x: f64, y: f64, tol: f64) -> Result<f64> {
    let (lo, hi, sign) = if x <= y { (x, y, 1.0) } else { (y, x, -1.0) };
    let mut acc = 0.0;
    for p in pieces {
        match (p.antiderivative(hi), p.antiderivative(lo)) {
            (Ok(vh), Ok(vl)) => acc += vh - vl,
            // closed form unavailable (nested primitives): quadrature on a
            // continuous integrand
            _ => {
                let st = sum_structure(std::slice::from_ref(p), lo, hi, None);
                acc += integrate_structured(|t, dt| p.eval_two(t, dt), lo, hi, &st, tol)?;
            }
        }
    }
    Ok(sign * acc)
}

/// Build the quadrature structure of a piece list on [a, b].  When
/// `exponent_scale` is given, power singularities of strength γ enter as
/// blowups of exponent scale·γ (2 for squared integrands).
pub fn sum_structure(
    pieces: &[PieceFunction],
    a: f64,
    b: f64,
    exponent_scale: Option<f64>,
) -> Structure {
    let mut nodes = Vec::new();
    let mut singular: Vec<(f64, f64)> = Vec::new();
    let mut max_cell: Option<f64> = None;
    let scale = exponent_scale.unwrap_or(1.0);
    for p in pieces {
        p.breakpoints_in(a, b, &mut nodes);
        let mut centers = Vec::new();
        p.singular_points_in(a, b, &mut centers);
        let g = p.max_singular_exponent() * scale;
        for c in centers {
            match singular.iter_mut().find(|(x, _)| (*x - c).abs() <= 1e-13 * (b - a).abs()) {
                Some((_, pexp)) => *pexp = pexp.max(g),
                None => singular.push((c, g)),
            }
        }
        if let Some(h) = p.resolution_hint() {
            max_cell = Some(match max_cell {
                Some(m) => m.min(h),
                None => h,
            });
        }
    }
    Structure { nodes, singular, max_cell }
}

/// ∫ₐᵇ |Σ pieces| or ∫ₐᵇ |Σ pieces|² with singularity-aware quadrature.
pub fn norm_on_interval(
    pieces: &[PieceFunction],
    a: f64,
    b: f64,
    kind: NormKind,
    tol: f64,
) -> Result<f64> {
    if !(a < b) {
        return Err(Error::InvalidParameter("norm interval needs a < b".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("norm tolerance must be positive".into()));
    }
    let scale = match kind {
        NormKind::L1 => 1.0,
        NormKind::L2Sq => 2.0,
    };
    let st = sum_structure(pieces, a, b, Some(scale));
    integrate_structured(
        |t, dt| {
            let v = eval_sum_two(pieces, t, dt)?;
            Ok(match kind {
                NormKind::L1 => v.abs(),
                NormKind::L2Sq => v * v,
            })
        },
        a,
        b,
        &st,
        tol,
    )
}

/// Classification of a piece list for the sliding-window supremum.
enum WindowClass {
    /// All pieces constant.
    Constant,
    /// Common period of the periodic pieces (constants absorbed).
    Periodic(f64),
    /// Periodic background (possibly trivial) plus localized pieces whose
    /// window content decays away from [lo, hi].
    Localized { period: Option<f64>, lo: f64, hi: f64 },
}

fn classify_for_window(pieces: &[PieceFunction]) -> Result<WindowClass> {
    let mut periods: Vec<f64> = Vec::new();
    let mut support: Option<(f64, f64)> = None;
    let mut any_nonconstant = false;
    for p in pieces {
        match p.periodicity() {
            Periodicity::Any => {}
            Periodicity::Period(pp) => {
                any_nonconstant = true;
                periods.push(pp);
            }
            Periodicity::Aperiodic => {
                any_nonconstant = true;
                let (lo, hi) = match p.compact_support() {
                    Some(s) => s,
                    None => match p {
                        // a lone integrable singularity: window content decays
                        // monotonically away from the center
                        PieceFunction::PowerSingularity { center, period: None, .. } => {
                            (center - 8.0, center + 8.0)
                        }
                        _ => return Err(Error::UnboundedSupremum),
                    },
                };
                support = Some(match support {
                    Some((a, b)) => (a.min(lo), b.max(hi)),
                    None => (lo, hi),
                });
            }
        }
    }
    let period = if periods.is_empty() {
        None
    } else {
        Some(common_period_of(&periods).ok_or(Error::UnboundedSupremum)?)
    };
    match (support, period) {
        (None, None) => {
            if any_nonconstant {
                Err(Error::UnboundedSupremum)
            } else {
                Ok(WindowClass::Constant)
            }
        }
        (None, Some(p)) => Ok(WindowClass::Periodic(p)),
        (Some((lo, hi)), p) => Ok(WindowClass::Localized { period: p, lo, hi }),
    }
}

/// Common period of a set of periods, via small-denominator rational ratio
/// detection (relative tolerance 1e−9).
pub fn common_period_of(periods: &[f64]) -> Option<f64> {
    let mut acc = periods[0];
    for &p in &periods[1..] {
        acc = pair_lcm(acc, p)?;
    }
    Some(acc)
}

fn pair_lcm(p: f64, q: f64) -> Option<f64> {
    let ratio = p / q;
    // continued fraction expansion of the ratio, small denominators only
    let (mut num, mut den) = (ratio, 1.0);
    let mut h = (1.0, 0.0);
    let mut k = (0.0, 1.0);
    for _ in 0..30 {
        let a = (num / den).floor();
        let hn = a * h.0 + h.1;
        let kn = a * k.0 + k.1;
        h = (hn, h.0);
        k = (kn, k.0);
        if kn > 65536.0 {
            return None;
        }
        if (ratio - hn / kn).abs() <= 1e-9 * ratio.abs() {
            // p/q ≈ hn/kn  →  lcm = kn·p = hn·q
            return Some(kn * p);
        }
        let rem = num - a * den;
        if rem.abs() < 1e-15 * num.abs() {
            return Some(kn * p);
        }
        num = den;
        den = rem;
    }
    None
}

/// sup over window starts t of ∫ₜ^{t+1} |f| or |f|².
///
/// The supremum is exact for 1-periodic structures (the window integral is
/// then constant) and otherwise sampled at `window_step` over one period or
/// over the localized range, with one refinement pass around the maximum.
pub fn unif_norm(pieces: &[PieceFunction], kind: NormKind, window_step: f64) -> Result<f64> {
    if !(window_step > 0.0) {
        return Err(Error::InvalidParameter("window step must be positive".into()));
    }
    let quad_tol = 1e-11;
    let window = |t: f64| norm_on_interval(pieces, t, t + 1.0, kind, quad_tol);
    match classify_for_window(pieces)? {
        WindowClass::Constant => {
            let c = eval_sum(pieces, 0.1234567891)?;
            Ok(match kind {
                NormKind::L1 => c.abs(),
                NormKind::L2Sq => c * c,
            })
        }
        WindowClass::Periodic(p) => {
            // if the period divides the unit window, every window carries the
            // same mass
            let inv = 1.0 / p;
            if (inv - inv.round()).abs() < 1e-12 && inv.round() >= 1.0 {
                return window(0.0);
            }
            scan_sup(&window, 0.0, p, window_step)
        }
        WindowClass::Localized { period, lo, hi } => {
            let p = period.unwrap_or(1.0);
            let sup_near = scan_sup(&window, lo - 1.0 - p, hi + p, window_step)?;
            // far windows approach the periodic background content
            let sup_far = match period {
                Some(pp) => {
                    let base = hi + 3.0 * pp.max(1.0);
                    scan_sup(&window, base, base + pp, window_step)?
                }
                None => 0.0,
            };
            Ok(sup_near.max(sup_far))
        }
    }
}

fn scan_sup<F: Fn(f64) -> Result<f64>>(window: &F, a: f64, b: f64, step: f64) -> Result<f64> {
    let n = (((b - a) / step).ceil() as usize).clamp(1, 100_000);
    let h = (b - a) / n as f64;
    let mut best = f64::NEG_INFINITY;
    let mut best_t = a;
    for k in 0..=n {
        let t = a + h * k as f64;
        let v = window(t)?;
        if v > best {
            best = v;
            best_t = t;
        }
    }
    // one refinement pass around the sampled maximum
    let fine = h / 16.0;
    for k in -16i32..=16 {
        let t = best_t + fine * k as f64;
        let v = window(t)?;
        if v > best {
            best = v;
        }
    }
    Ok(best)
}

/// Upper bound for the sliding-window norm of a piece sum: triangle
/// inequality over the pieces, each piece's own supremum exact or scanned
/// over its short period.  Useful when the sum's common period is huge.
pub fn unif_norm_upper(pieces: &[PieceFunction], kind: NormKind) -> Result<f64> {
    let mut acc = 0.0;
    for p in pieces {
        let v = unif_norm(std::slice::from_ref(p), kind, 1.0 / 256.0)?;
        match kind {
            NormKind::L2Sq => acc += v.max(0.0).sqrt(),
            NormKind::L1 => acc += v,
        }
    }
    Ok(match kind {
        NormKind::L2Sq => acc * acc,
        NormKind::L1 => acc,
    })
}

/// A potential q = σ′ + τ with optional periodicity metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaTau {
    pub sigma: Vec<PieceFunction>,
    pub tau: Vec<PieceFunction>,
    pub period: Option<f64>,
}

impl SigmaTau {
    /// Validated constructor: role invariants on both lists and, when a
    /// period is declared, a sampled periodicity check.
    pub fn new(
        sigma: Vec<PieceFunction>,
        tau: Vec<PieceFunction>,
        period: Option<f64>,
    ) -> Result<Self> {
        for p in &sigma {
            validate_for_role(p, PieceRole::Sigma)?;
        }
        for p in &tau {
            validate_for_role(p, PieceRole::Tau)?;
        }
        if let Some(t) = period {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::InvalidParameter("period must be positive".into()));
            }
        }
        let st = SigmaTau { sigma, tau, period };
        st.check_declared_period()?;
        Ok(st)
    }

    /// The free potential σ = τ = 0 with a chosen period.
    pub fn free(period: Option<f64>) -> Self {
        SigmaTau { sigma: Vec::new(), tau: Vec::new(), period }
    }

    /// Kronig–Penney δ-comb of strength g and spacing `period`:
    /// σ = −g·frac(t/period), τ ≡ g/period, realizing q = g·Σₙ δ(t − n·period).
    pub fn delta_comb(g: f64, period: f64) -> Result<Self> {
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::InvalidParameter("comb period must be positive".into()));
        }
        if g == 0.0 {
            return SigmaTau::new(Vec::new(), Vec::new(), Some(period));
        }
        SigmaTau::new(
            vec![PieceFunction::sawtooth(-g, period, 0.0)],
            vec![PieceFunction::constant(g / period)],
            Some(period),
        )
    }

    fn check_declared_period(&self) -> Result<()> {
        let t = match self.period {
            Some(t) => t,
            None => return Ok(()),
        };
        for list in [&self.sigma, &self.tau] {
            for p in list.iter() {
                for k in 0..7 {
                    let x = -1.37 + 0.61 * k as f64;
                    let (a, b) = match (p.eval(x), p.eval(x + t)) {
                        (Ok(a), Ok(b)) => (a, b),
                        _ => continue, // singular sample point
                    };
                    if (a - b).abs() > 1e-8 * (1.0 + a.abs().max(b.abs())) {
                        return Err(Error::InvalidParameter(format!(
                            "declared period {t} is violated at t = {x}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Interval norm of the σ list.
    pub fn sigma_norm(&self, a: f64, b: f64, kind: NormKind, tol: f64) -> Result<f64> {
        norm_on_interval(&self.sigma, a, b, kind, tol)
    }

    /// Interval norm of the τ list.
    pub fn tau_norm(&self, a: f64, b: f64, kind: NormKind, tol: f64) -> Result<f64> {
        norm_on_interval(&self.tau, a, b, kind, tol)
    }

    /// (‖σ‖²_{2,unif}, ‖τ‖_{1,unif}) with the default window sampling.
    pub fn unif_norms(&self) -> Result<(f64, f64)> {
        let step = self.period.map(|p| p / 256.0).unwrap_or(1.0 / 256.0);
        let s = if self.sigma.is_empty() { 0.0 } else { unif_norm(&self.sigma, NormKind::L2Sq, step)? };
        let t = if self.tau.is_empty() { 0.0 } else { unif_norm(&self.tau, NormKind::L1, step)? };
        Ok((s, t))
    }

    /// The shifted potential t ↦ q(t + delta).
    pub fn shift(&self, delta: f64) -> SigmaTau {
        SigmaTau {
            sigma: shift_sum(&self.sigma, delta),
            tau: shift_sum(&self.tau, delta),
            period: self.period,
        }
    }

    pub fn require_period(&self) -> Result<f64> {
        self.period.ok_or(Error::MissingPeriod)
    }
}

/// Shift every piece of a list: t ↦ f(t + delta), exact on closed forms.
pub fn shift_sum(pieces: &[PieceFunction], delta: f64) -> Vec<PieceFunction> {
    pieces.iter().map(|p| p.shift(delta)).collect()
}

/// Represent a periodic τ₂ as σ₃′ + c: c is the mean of τ₂ over one period
/// and σ₃ the periodic primitive of τ₂ − c vanishing at 0.
pub fn decompose_tau_periodic(tau2: &PieceFunction) -> Result<(PieceFunction, f64)> {
    validate_for_role(tau2, PieceRole::Tau)?;
    let period = match tau2.periodicity() {
        Periodicity::Any => {
            let c = tau2.eval(0.1234567891)?;
            return Ok((PieceFunction::constant(0.0), c));
        }
        Periodicity::Period(p) => {
            let inv = 1.0 / p;
            if (inv - inv.round()).abs() > 1e-9 || inv.round() < 1.0 {
                return Err(Error::InvalidParameter(
                    "decomposition requires a 1-periodic function".into(),
                ));
            }
            p
        }
        Periodicity::Aperiodic => {
            return Err(Error::InvalidParameter(
                "decomposition requires a 1-periodic function".into(),
            ))
        }
    };
    // a pure nonzero harmonic has exact zero mean
    if let PieceFunction::FourierMode { harmonic, .. } = tau2 {
        if *harmonic != 0 {
            return Ok((
                PieceFunction::PeriodicPrimitive { inner: Box::new(tau2.clone()) },
                0.0,
            ));
        }
    }
    let c = match (tau2.antiderivative(period), tau2.antiderivative(0.0)) {
        (Ok(hi), Ok(lo)) => (hi - lo) / period,
        _ => {
            let st = sum_structure(std::slice::from_ref(tau2), 0.0, period, None);
            integrate_structured(|t, dt| tau2.eval_two(t, dt), 0.0, period, &st, 1e-12)? / period
        }
    };
    let sigma3 = PieceFunction::PeriodicPrimitive { inner: Box::new(tau2.clone()) };
    Ok((sigma3, c))
}

/// A quasiperiodic potential built from four 1-periodic pieces and an
/// incommensurate dilation α:
///
/// q = [σ₁(t) + σ̃₂(αt + θ)]′ + τ₁(t) + c,   σ̃₂ = σ₂ + σ₃,
///
/// where (σ₃, c) absorb τ₂ through its periodic primitive.  α is kept as an
/// exact rational (a desk-scale truncation of the target irrational); its
/// floating rendering is two-float so that nearby convergents stay
/// distinguishable.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiperiodicPotential {
    pub sigma1: Option<PieceFunction>,
    pub sigma2: Option<PieceFunction>,
    pub tau1: Option<PieceFunction>,
    pub tau2: Option<PieceFunction>,
    pub alpha: BigRational,
    pub theta: f64,
}

impl QuasiperiodicPotential {
    pub fn new(
        sigma1: Option<PieceFunction>,
        sigma2: Option<PieceFunction>,
        tau1: Option<PieceFunction>,
        tau2: Option<PieceFunction>,
        alpha: BigRational,
        theta: f64,
    ) -> Result<Self> {
        if alpha <= BigRational::zero() || alpha >= BigRational::from_integer(1.into()) {
            return Err(Error::InvalidParameter("alpha must lie in (0, 1)".into()));
        }
        if !(0.0..1.0).contains(&theta) {
            return Err(Error::InvalidParameter("theta must lie in [0, 1)".into()));
        }
        let one_periodic = |p: &PieceFunction| -> Result<()> {
            match p.periodicity() {
                Periodicity::Any => Ok(()),
                Periodicity::Period(pp) => {
                    let inv = 1.0 / pp;
                    if (inv - inv.round()).abs() <= 1e-9 && inv.round() >= 1.0 {
                        Ok(())
                    } else {
                        Err(Error::InvalidParameter("pieces must be 1-periodic".into()))
                    }
                }
                Periodicity::Aperiodic => {
                    Err(Error::InvalidParameter("pieces must be 1-periodic".into()))
                }
            }
        };
        for p in [&sigma1, &sigma2].into_iter().flatten() {
            validate_for_role(p, PieceRole::Sigma)?;
            one_periodic(p)?;
        }
        for p in [&tau1, &tau2].into_iter().flatten() {
            validate_for_role(p, PieceRole::Tau)?;
            one_periodic(p)?;
        }
        Ok(QuasiperiodicPotential { sigma1, sigma2, tau1, tau2, alpha, theta })
    }

    /// α rounded to f64 together with the exact residual (two-float form).
    pub fn alpha_two_float(&self) -> (f64, f64) {
        rational_two_float(&self.alpha)
    }

    pub fn alpha_f64(&self) -> f64 {
        let (hi, lo) = self.alpha_two_float();
        hi + lo
    }

    /// σ̃₂ = σ₂ + σ₃ and the constant c from absorbing τ₂.
    pub fn absorbed_sigma2(&self) -> Result<(Vec<PieceFunction>, f64)> {
        let mut pieces = Vec::new();
        if let Some(s2) = &self.sigma2 {
            pieces.push(s2.clone());
        }
        let mut c = 0.0;
        if let Some(t2) = &self.tau2 {
            let (sigma3, cc) = decompose_tau_periodic(t2)?;
            c = cc;
            if !matches!(sigma3, PieceFunction::Constant { value } if value == 0.0) {
                pieces.push(sigma3);
            }
        }
        Ok((pieces, c))
    }

    /// The potential as a SigmaTau, dilating σ̃₂ by the exact α.
    pub fn to_sigma_tau(&self) -> Result<SigmaTau> {
        let (hi, lo) = self.alpha_two_float();
        self.sigma_tau_at_rate(hi, lo)
    }

    /// The T_m-periodic approximant obtained by replacing α with the
    /// rational rate R/T (exactly representable pair).
    pub fn sigma_tau_at_rate(&self, rate: f64, rate_low: f64) -> Result<SigmaTau> {
        let (absorbed, c) = self.absorbed_sigma2()?;
        let mut sigma = Vec::new();
        if let Some(s1) = &self.sigma1 {
            sigma.push(s1.clone());
        }
        for p in absorbed {
            sigma.push(PieceFunction::scaled_two_float(p, rate, rate_low, self.theta));
        }
        let mut tau = Vec::new();
        if let Some(t1) = &self.tau1 {
            tau.push(t1.clone());
        }
        if c != 0.0 {
            tau.push(PieceFunction::constant(c));
        }
        Ok(SigmaTau { sigma, tau, period: None })
    }
}

/// Exact two-float rendering of a rational: hi = nearest f64, lo ≈ r − hi.
pub fn rational_two_float(r: &BigRational) -> (f64, f64) {
    let hi = r.to_f64().unwrap_or(f64::NAN);
    if !hi.is_finite() {
        return (hi, 0.0);
    }
    let hi_rat = BigRational::from_float(hi).expect("finite float");
    let lo = (r - hi_rat).to_f64().unwrap_or(0.0);
    (hi, lo)
}

/// |r| as f64 (saturating), used for error reporting of tiny differences.
pub fn rational_abs_f64(r: &BigRational) -> f64 {
    r.abs().to_f64().unwrap_or(f64::INFINITY)
}
