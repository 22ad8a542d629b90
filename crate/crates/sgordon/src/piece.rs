//! Closed-form function pieces.
//!
//! A potential q = σ′ + τ is represented through explicit lists of
//! [`PieceFunction`]s for σ and τ.  Every piece carries exact evaluation,
//! exact argument shifts, and a closed-form antiderivative, so that norms of
//! differences such as σ − σ_m stay limited only by quadrature accuracy and
//! never by resampling.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fractional part in [0, 1).
#[inline]
pub(crate) fn frac(x: f64) -> f64 {
    x - x.floor()
}

/// Periodicity of a piece.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Periodicity {
    /// Constant functions: periodic with every period.
    Any,
    /// Periodic with the given minimal-representation period.
    Period(f64),
    /// Not periodic (but possibly compactly supported).
    Aperiodic,
}

/// One closed-form function piece.
///
/// Periodic kinds (sawtooth, Fourier modes, periodized singularities and
/// trains) wrap their argument; interval-supported kinds vanish outside
/// their support.  `Scaled` and `PeriodicPrimitive` are combinators: they
/// arise from argument dilations f(rate·t + offset) and from the periodic
/// primitive used when a locally integrable part is absorbed into the
/// σ component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PieceFunction {
    Constant {
        value: f64,
    },
    Affine {
        intercept: f64,
        slope: f64,
    },
    /// amplitude · frac((t − phase)/period)
    Sawtooth {
        amplitude: f64,
        period: f64,
        phase: f64,
    },
    /// cos_coeff · cos(2πn t/period) + sin_coeff · sin(2πn t/period)
    FourierMode {
        harmonic: u32,
        cos_coeff: f64,
        sin_coeff: f64,
        period: f64,
    },
    /// coefficient · |t − center|^(−exponent), optionally periodized with the
    /// fundamental domain [center − period/2, center + period/2).
    PowerSingularity {
        center: f64,
        exponent: f64,
        coefficient: f64,
        #[serde(default)]
        period: Option<f64>,
    },
    /// Piecewise-constant values on consecutive intervals of `breakpoints`.
    StepTrain {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
        #[serde(default)]
        periodic: bool,
    },
    /// Uniform samples with linear interpolation; periodic continuation has
    /// period `samples.len() · spacing`.
    GridSampled {
        samples: Vec<f64>,
        spacing: f64,
        origin: f64,
        #[serde(default)]
        periodic: bool,
    },
    /// inner restricted to [lower, upper], zero outside.
    Windowed {
        inner: Box<PieceFunction>,
        lower: f64,
        upper: f64,
    },
    /// t ↦ inner(rate·t + offset).  `rate_low` is a two-float correction to
    /// the rate, used when the rate comes from an exact rational whose value
    /// is not representable in one f64.
    Scaled {
        inner: Box<PieceFunction>,
        rate: f64,
        #[serde(default)]
        rate_low: f64,
        offset: f64,
    },
    /// The P-periodic primitive of (inner − mean(inner)) vanishing at 0,
    /// where P is the period of `inner`.
    PeriodicPrimitive {
        inner: Box<PieceFunction>,
    },
}

impl PieceFunction {
    pub fn constant(value: f64) -> Self {
        PieceFunction::Constant { value }
    }

    pub fn sawtooth(amplitude: f64, period: f64, phase: f64) -> Self {
        PieceFunction::Sawtooth { amplitude, period, phase }
    }

    pub fn fourier_mode(harmonic: u32, cos_coeff: f64, sin_coeff: f64, period: f64) -> Self {
        PieceFunction::FourierMode { harmonic, cos_coeff, sin_coeff, period }
    }

    pub fn power_singularity(center: f64, exponent: f64, coefficient: f64) -> Self {
        PieceFunction::PowerSingularity { center, exponent, coefficient, period: None }
    }

    /// Dilated piece t ↦ inner(rate·t + offset) with a plain f64 rate.
    pub fn scaled(inner: PieceFunction, rate: f64, offset: f64) -> Self {
        PieceFunction::Scaled { inner: Box::new(inner), rate, rate_low: 0.0, offset }
    }

    /// Dilated piece whose rate is given in two-float form `rate + rate_low`.
    pub fn scaled_two_float(inner: PieceFunction, rate: f64, rate_low: f64, offset: f64) -> Self {
        PieceFunction::Scaled { inner: Box::new(inner), rate, rate_low, offset }
    }

    /// Structural validation: finite parameters, positive periods and
    /// spacings, strictly increasing breakpoints.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidParameter(msg.to_string()));
        match self {
            PieceFunction::Constant { value } => {
                if !value.is_finite() {
                    return bad("constant value must be finite");
                }
            }
            PieceFunction::Affine { intercept, slope } => {
                if !intercept.is_finite() || !slope.is_finite() {
                    return bad("affine coefficients must be finite");
                }
            }
            PieceFunction::Sawtooth { amplitude, period, phase } => {
                if !(period.is_finite() && *period > 0.0) {
                    return bad("sawtooth period must be positive");
                }
                if !amplitude.is_finite() || !phase.is_finite() {
                    return bad("sawtooth parameters must be finite");
                }
            }
            PieceFunction::FourierMode { cos_coeff, sin_coeff, period, .. } => {
                if !(period.is_finite() && *period > 0.0) {
                    return bad("fourier mode period must be positive");
                }
                if !cos_coeff.is_finite() || !sin_coeff.is_finite() {
                    return bad("fourier coefficients must be finite");
                }
            }
            PieceFunction::PowerSingularity { center, exponent, coefficient, period } => {
                if !(exponent.is_finite() && *exponent > 0.0) {
                    return bad("singularity exponent must be positive");
                }
                if !center.is_finite() || !coefficient.is_finite() {
                    return bad("singularity parameters must be finite");
                }
                if let Some(p) = period {
                    if !(p.is_finite() && *p > 0.0) {
                        return bad("singularity period must be positive");
                    }
                }
            }
            PieceFunction::StepTrain { breakpoints, values, .. } => {
                if breakpoints.len() != values.len() + 1 || values.is_empty() {
                    return bad("step train needs n+1 breakpoints for n values");
                }
                if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
                    return bad("step train breakpoints must be strictly increasing");
                }
                if breakpoints.iter().chain(values.iter()).any(|v| !v.is_finite()) {
                    return bad("step train entries must be finite");
                }
            }
            PieceFunction::GridSampled { samples, spacing, origin, .. } => {
                if samples.len() < 2 {
                    return bad("grid-sampled piece needs at least two samples");
                }
                if !(spacing.is_finite() && *spacing > 0.0) {
                    return bad("grid spacing must be positive");
                }
                if !origin.is_finite() || samples.iter().any(|v| !v.is_finite()) {
                    return bad("grid samples must be finite");
                }
            }
            PieceFunction::Windowed { inner, lower, upper } => {
                if !(lower < upper) {
                    return bad("window must satisfy lower < upper");
                }
                inner.validate()?;
            }
            PieceFunction::Scaled { inner, rate, offset, .. } => {
                if !(rate.is_finite() && *rate > 0.0) {
                    return bad("scaling rate must be positive");
                }
                if !offset.is_finite() {
                    return bad("scaling offset must be finite");
                }
                inner.validate()?;
            }
            PieceFunction::PeriodicPrimitive { inner } => {
                inner.validate()?;
                match inner.periodicity() {
                    Periodicity::Period(_) | Periodicity::Any => {}
                    Periodicity::Aperiodic => {
                        return bad("periodic primitive requires a periodic inner piece");
                    }
                }
                // The primitive must itself be expressible in closed form.
                inner.antiderivative(0.0)?;
            }
        }
        Ok(())
    }

    /// Pointwise evaluation.  Fails exactly at power-singularity centers.
    pub fn eval(&self, t: f64) -> Result<f64> {
        self.eval_two(t, 0.0)
    }

    /// Evaluation at the two-float argument `t_hi + t_lo`.
    ///
    /// Quadrature near a power singularity hands in the center as `t_hi` and
    /// the exact offset as `t_lo`; a plain f64 sum would quantize offsets
    /// below the ulp of the center and destroy the integrable blowup.
    pub fn eval_two(&self, t_hi: f64, t_lo: f64) -> Result<f64> {
        let t = t_hi + t_lo;
        match self {
            PieceFunction::Constant { value } => Ok(*value),
            PieceFunction::Affine { intercept, slope } => Ok(intercept + slope * t),
            PieceFunction::Sawtooth { amplitude, period, phase } => {
                Ok(amplitude * frac((t - phase) / period))
            }
            PieceFunction::FourierMode { harmonic, cos_coeff, sin_coeff, period } => {
                let w = 2.0 * std::f64::consts::PI * (*harmonic as f64) / period;
                Ok(cos_coeff * (w * t).cos() + sin_coeff * (w * t).sin())
            }
            PieceFunction::PowerSingularity { center, exponent, coefficient, period } => {
                // offsets are measured from the representable anchor of the
                // nearest singular point, so that the blowup profile stays
                // exact down to (and below) the ulp scale of the center
                let anchor = match period {
                    None => *center,
                    Some(p) => {
                        let k = ((t_hi - center) / p).round();
                        singular_anchor(*center, k, *p)
                    }
                };
                let r = (t_hi - anchor) + t_lo;
                if r == 0.0 {
                    return Err(Error::SingularPoint { location: t });
                }
                Ok(coefficient * r.abs().powf(-exponent))
            }
            PieceFunction::StepTrain { breakpoints, values, periodic } => {
                let first = breakpoints[0];
                let last = *breakpoints.last().unwrap();
                let span = last - first;
                let x = if *periodic { first + (t - first).rem_euclid(span) } else { t };
                if x < first || x >= last {
                    return Ok(0.0);
                }
                // index of the interval containing x
                let idx = match breakpoints.binary_search_by(|b| b.partial_cmp(&x).unwrap()) {
                    Ok(i) => i.min(values.len() - 1),
                    Err(i) => i - 1,
                };
                Ok(values[idx])
            }
            PieceFunction::GridSampled { samples, spacing, origin, periodic } => {
                let n = samples.len();
                if *periodic {
                    let span = *spacing * n as f64;
                    let u = (t - origin).rem_euclid(span) / spacing;
                    let k = (u.floor() as usize).min(n - 1);
                    let frac_u = u - k as f64;
                    let next = samples[(k + 1) % n];
                    Ok(samples[k] + (next - samples[k]) * frac_u)
                } else {
                    let u = (t - origin) / spacing;
                    if u < 0.0 || u > (n - 1) as f64 {
                        return Ok(0.0);
                    }
                    let k = (u.floor() as usize).min(n - 2);
                    let frac_u = u - k as f64;
                    Ok(samples[k] + (samples[k + 1] - samples[k]) * frac_u)
                }
            }
            PieceFunction::Windowed { inner, lower, upper } => {
                if t < *lower || t > *upper {
                    Ok(0.0)
                } else {
                    inner.eval_two(t_hi, t_lo)
                }
            }
            PieceFunction::Scaled { inner, rate, rate_low, offset } => {
                let (a_hi, a_lo) =
                    scaled_argument(*rate, *rate_low, *offset, t_hi, t_lo, inner.periodicity());
                inner.eval_two(a_hi, a_lo)
            }
            PieceFunction::PeriodicPrimitive { inner } => {
                let p = match inner.periodicity() {
                    Periodicity::Period(p) => p,
                    // a constant has zero fluctuation: primitive is identically 0
                    Periodicity::Any => return Ok(0.0),
                    Periodicity::Aperiodic => {
                        return Err(Error::InvalidParameter(
                            "periodic primitive of aperiodic piece".into(),
                        ))
                    }
                };
                let mean = (inner.antiderivative(p)? - inner.antiderivative(0.0)?) / p;
                let r = t.rem_euclid(p);
                Ok(inner.antiderivative(r)? - inner.antiderivative(0.0)? - mean * r)
            }
        }
    }

    /// Periodicity of the piece.
    pub fn periodicity(&self) -> Periodicity {
        match self {
            PieceFunction::Constant { .. } => Periodicity::Any,
            PieceFunction::Affine { slope, .. } => {
                if *slope == 0.0 {
                    Periodicity::Any
                } else {
                    Periodicity::Aperiodic
                }
            }
            PieceFunction::Sawtooth { period, .. } => Periodicity::Period(*period),
            PieceFunction::FourierMode { harmonic, period, .. } => {
                if *harmonic == 0 {
                    Periodicity::Any
                } else {
                    Periodicity::Period(*period)
                }
            }
            PieceFunction::PowerSingularity { period, .. } => match period {
                Some(p) => Periodicity::Period(*p),
                None => Periodicity::Aperiodic,
            },
            PieceFunction::StepTrain { breakpoints, periodic, .. } => {
                if *periodic {
                    Periodicity::Period(breakpoints.last().unwrap() - breakpoints[0])
                } else {
                    Periodicity::Aperiodic
                }
            }
            PieceFunction::GridSampled { samples, spacing, periodic, .. } => {
                if *periodic {
                    Periodicity::Period(spacing * samples.len() as f64)
                } else {
                    Periodicity::Aperiodic
                }
            }
            PieceFunction::Windowed { .. } => Periodicity::Aperiodic,
            PieceFunction::Scaled { inner, rate, .. } => match inner.periodicity() {
                Periodicity::Period(p) => Periodicity::Period(p / rate),
                other => other,
            },
            PieceFunction::PeriodicPrimitive { inner } => match inner.periodicity() {
                Periodicity::Any => Periodicity::Any,
                other => other,
            },
        }
    }

    /// True when the piece has bounded support (zero outside an interval).
    pub fn compact_support(&self) -> Option<(f64, f64)> {
        match self {
            PieceFunction::Windowed { lower, upper, .. } => Some((*lower, *upper)),
            PieceFunction::StepTrain { breakpoints, periodic: false, .. } => {
                Some((breakpoints[0], *breakpoints.last().unwrap()))
            }
            PieceFunction::GridSampled { samples, spacing, origin, periodic: false } => {
                Some((*origin, origin + spacing * (samples.len() - 1) as f64))
            }
            PieceFunction::Scaled { inner, rate, rate_low, offset } => {
                let (lo, hi) = inner.compact_support()?;
                let r = rate + rate_low;
                Some(((lo - offset) / r, (hi - offset) / r))
            }
            _ => None,
        }
    }

    /// Mesh nodes in (a, b): jumps, kinks, support edges and singular
    /// centers.  Appended to `out` unsorted.
    pub fn breakpoints_in(&self, a: f64, b: f64, out: &mut Vec<f64>) {
        debug_assert!(a <= b);
        match self {
            PieceFunction::Constant { .. }
            | PieceFunction::Affine { .. }
            | PieceFunction::FourierMode { .. } => {}
            PieceFunction::Sawtooth { period, phase, .. } => {
                push_lattice(*phase, *period, a, b, out);
            }
            PieceFunction::PowerSingularity { center, period, .. } => match period {
                None => {
                    if *center > a && *center < b {
                        out.push(*center);
                    }
                }
                Some(p) => {
                    push_lattice(*center, *p, a, b, out);
                    push_lattice(center - p / 2.0, *p, a, b, out);
                }
            },
            PieceFunction::StepTrain { breakpoints, periodic, .. } => {
                if *periodic {
                    let first = breakpoints[0];
                    let span = breakpoints.last().unwrap() - first;
                    for bp in breakpoints.iter().take(breakpoints.len() - 1) {
                        push_lattice(*bp, span, a, b, out);
                    }
                } else {
                    out.extend(breakpoints.iter().copied().filter(|x| *x > a && *x < b));
                }
            }
            PieceFunction::GridSampled { samples, spacing, origin, periodic } => {
                let n = samples.len();
                if *periodic {
                    // one node per sample, replicated over periods
                    let span = spacing * n as f64;
                    let k_lo = ((a - origin) / spacing).floor() as i64;
                    let k_hi = ((b - origin) / spacing).ceil() as i64;
                    if (k_hi - k_lo) < 4 * n as i64 + 8 {
                        for k in k_lo..=k_hi {
                            let x = origin + *spacing * k as f64;
                            if x > a && x < b {
                                out.push(x);
                            }
                        }
                    } else {
                        // range spans many periods: period boundaries only
                        push_lattice(*origin, span, a, b, out);
                    }
                } else {
                    for k in 0..n {
                        let x = origin + *spacing * k as f64;
                        if x > a && x < b {
                            out.push(x);
                        }
                    }
                }
            }
            PieceFunction::Windowed { inner, lower, upper } => {
                if *lower > a && *lower < b {
                    out.push(*lower);
                }
                if *upper > a && *upper < b {
                    out.push(*upper);
                }
                inner.breakpoints_in(a.max(*lower), b.min(*upper).max(a.max(*lower)), out);
            }
            PieceFunction::Scaled { inner, rate, rate_low, offset } => {
                let r = rate + rate_low;
                let mut mapped = Vec::new();
                inner.breakpoints_in(r * a + offset, r * b + offset, &mut mapped);
                out.extend(mapped.into_iter().map(|x| (x - offset) / r));
            }
            PieceFunction::PeriodicPrimitive { inner } => {
                inner.breakpoints_in(a, b, out);
            }
        }
    }

    /// Centers of power-law singularities in (a, b), where pointwise
    /// evaluation blows up.  Appended to `out`; every emitted point is the
    /// exact anchor used by [`PieceFunction::eval_two`].
    pub fn singular_points_in(&self, a: f64, b: f64, out: &mut Vec<f64>) {
        match self {
            PieceFunction::PowerSingularity { center, period, .. } => match period {
                None => {
                    if *center >= a && *center <= b {
                        out.push(*center);
                    }
                }
                Some(p) => {
                    let k_lo = ((a - center) / p).floor() as i64;
                    let k_hi = ((b - center) / p).ceil() as i64;
                    for k in k_lo..=k_hi {
                        let x = singular_anchor(*center, k as f64, *p);
                        if x >= a && x <= b {
                            out.push(x);
                        }
                    }
                }
            },
            PieceFunction::Windowed { inner, lower, upper } => {
                let lo = a.max(*lower);
                let hi = b.min(*upper);
                if lo <= hi {
                    inner.singular_points_in(lo, hi, out);
                }
            }
            PieceFunction::Scaled { inner, rate, rate_low, offset } => {
                let r = rate + rate_low;
                let mut mapped = Vec::new();
                inner.singular_points_in(r * a + offset, r * b + offset, &mut mapped);
                out.extend(mapped.into_iter().map(|x| (x - offset) / r));
            }
            // the primitive of an integrable singularity is continuous
            PieceFunction::PeriodicPrimitive { .. } => {}
            _ => {}
        }
    }

    /// Largest singular exponent contributing pointwise blowup, after
    /// argument scaling.  Used by quadrature to choose substitution powers.
    pub fn max_singular_exponent(&self) -> f64 {
        match self {
            PieceFunction::PowerSingularity { exponent, .. } => *exponent,
            PieceFunction::Windowed { inner, .. }
            | PieceFunction::Scaled { inner, .. } => inner.max_singular_exponent(),
            _ => 0.0,
        }
    }

    /// The constant value of the piece on (x, y), when it is exactly
    /// constant there.  Assumes the interval contains no breakpoint of the
    /// piece (callers mesh at breakpoints first).
    pub fn constant_on(&self, x: f64, y: f64) -> Option<f64> {
        match self {
            PieceFunction::Constant { value } => Some(*value),
            PieceFunction::Affine { intercept, slope } => {
                if *slope == 0.0 {
                    Some(*intercept)
                } else {
                    None
                }
            }
            PieceFunction::Sawtooth { amplitude, .. } => {
                if *amplitude == 0.0 {
                    Some(0.0)
                } else {
                    None
                }
            }
            PieceFunction::FourierMode { harmonic, cos_coeff, sin_coeff, .. } => {
                if *harmonic == 0 {
                    Some(*cos_coeff)
                } else if *cos_coeff == 0.0 && *sin_coeff == 0.0 {
                    Some(0.0)
                } else {
                    None
                }
            }
            PieceFunction::PowerSingularity { coefficient, .. } => {
                if *coefficient == 0.0 {
                    Some(0.0)
                } else {
                    None
                }
            }
            PieceFunction::StepTrain { .. } => {
                // constant between breakpoints; evaluate at the midpoint
                let mid = 0.5 * (x + y);
                let v = self.eval(mid).ok()?;
                // confirm no breakpoint sneaked inside
                let mut bp = Vec::new();
                self.breakpoints_in(x, y, &mut bp);
                if bp.is_empty() {
                    Some(v)
                } else {
                    None
                }
            }
            PieceFunction::GridSampled { .. } => None,
            PieceFunction::Windowed { inner, lower, upper } => {
                if y <= *lower || x >= *upper {
                    Some(0.0)
                } else if x >= *lower && y <= *upper {
                    inner.constant_on(x, y)
                } else {
                    None
                }
            }
            PieceFunction::Scaled { inner, rate, rate_low, offset } => {
                let r = rate + rate_low;
                inner.constant_on(r * x + offset, r * y + offset)
            }
            PieceFunction::PeriodicPrimitive { inner } => match inner.periodicity() {
                Periodicity::Any => Some(0.0),
                _ => None,
            },
        }
    }

    /// Suggested largest quadrature cell resolving the piece's oscillation.
    pub fn resolution_hint(&self) -> Option<f64> {
        match self {
            PieceFunction::FourierMode { harmonic, period, .. } => {
                if *harmonic == 0 {
                    None
                } else {
                    Some(period / (*harmonic as f64) / 6.0)
                }
            }
            PieceFunction::Sawtooth { period, .. } => Some(period / 4.0),
            PieceFunction::PowerSingularity { period: Some(p), .. } => Some(p / 4.0),
            PieceFunction::GridSampled { spacing, .. } => Some(spacing * 2.0),
            PieceFunction::Windowed { inner, .. } => inner.resolution_hint(),
            PieceFunction::Scaled { inner, rate, .. } => {
                inner.resolution_hint().map(|h| h / rate)
            }
            PieceFunction::PeriodicPrimitive { inner } => inner.resolution_hint(),
            _ => None,
        }
    }

    /// Exact antiderivative ∫₀ˣ f(s) ds.
    pub fn antiderivative(&self, x: f64) -> Result<f64> {
        match self {
            PieceFunction::Constant { value } => Ok(value * x),
            PieceFunction::Affine { intercept, slope } => Ok(intercept * x + slope * x * x / 2.0),
            PieceFunction::Sawtooth { amplitude, period, phase } => {
                // ∫ frac has the closed form n/2 + r²/2 at n + r
                let cum = |v: f64| {
                    let n = v.floor();
                    let r = v - n;
                    n / 2.0 + r * r / 2.0
                };
                let u0 = (0.0 - phase) / period;
                let u1 = (x - phase) / period;
                Ok(amplitude * period * (cum(u1) - cum(u0)))
            }
            PieceFunction::FourierMode { harmonic, cos_coeff, sin_coeff, period } => {
                if *harmonic == 0 {
                    return Ok(cos_coeff * x);
                }
                let w = 2.0 * std::f64::consts::PI * (*harmonic as f64) / period;
                let prim = |t: f64| (cos_coeff / w) * (w * t).sin() - (sin_coeff / w) * (w * t).cos();
                Ok(prim(x) - prim(0.0))
            }
            PieceFunction::PowerSingularity { center, exponent, coefficient, period } => {
                let g = *exponent;
                if g >= 1.0 {
                    return Err(Error::NonIntegrable { exponent: g });
                }
                // signed primitive of |r|^(−γ) through the singularity
                let prim = |r: f64| r.signum() * r.abs().powf(1.0 - g) / (1.0 - g);
                match period {
                    None => Ok(coefficient * (prim(x - center) - prim(-center))),
                    Some(p) => {
                        let full = 2.0 * prim(p / 2.0);
                        let cum = |t: f64| {
                            // measured from the domain edge center − P/2
                            let v = (t - (center - p / 2.0)) / p;
                            let n = v.floor();
                            let r = v - n;
                            n * full + (prim(r * p - p / 2.0) - prim(-p / 2.0))
                        };
                        Ok(coefficient * (cum(x) - cum(0.0)))
                    }
                }
            }
            PieceFunction::StepTrain { breakpoints, values, periodic } => {
                let first = breakpoints[0];
                let last = *breakpoints.last().unwrap();
                let span = last - first;
                let full: f64 = values
                    .iter()
                    .zip(breakpoints.windows(2))
                    .map(|(v, w)| v * (w[1] - w[0]))
                    .sum();
                let cum_in = |t: f64| -> f64 {
                    // ∫ from `first` to t for t in [first, last]
                    let mut acc = 0.0;
                    for (v, w) in values.iter().zip(breakpoints.windows(2)) {
                        if t <= w[0] {
                            break;
                        }
                        acc += v * (t.min(w[1]) - w[0]);
                    }
                    acc
                };
                let cum = |t: f64| -> f64 {
                    if *periodic {
                        let n = ((t - first) / span).floor();
                        let r = first + (t - first) - n * span;
                        n * full + cum_in(r)
                    } else {
                        cum_in(t.clamp(first, last))
                    }
                };
                Ok(cum(x) - cum(0.0))
            }
            PieceFunction::GridSampled { samples, spacing, origin, periodic } => {
                let n = samples.len();
                let h = *spacing;
                let cell = |k: usize, wrap: bool| -> f64 {
                    let f0 = samples[k];
                    let f1 = if wrap { samples[(k + 1) % n] } else { samples[k + 1] };
                    h * (f0 + f1) / 2.0
                };
                let cum = |t: f64| -> f64 {
                    if *periodic {
                        let span = h * n as f64;
                        let full: f64 = (0..n).map(|k| cell(k, true)).sum();
                        let m = ((t - origin) / span).floor();
                        let r = (t - origin) - m * span;
                        let k = ((r / h).floor() as usize).min(n - 1);
                        let mut acc = m * full;
                        for j in 0..k {
                            acc += cell(j, true);
                        }
                        let u = r / h - k as f64;
                        let f0 = samples[k];
                        let f1 = samples[(k + 1) % n];
                        acc + h * (f0 * u + (f1 - f0) * u * u / 2.0)
                    } else {
                        let hi = origin + h * (n - 1) as f64;
                        let t = t.clamp(*origin, hi);
                        let u_all = (t - origin) / h;
                        let k = (u_all.floor() as usize).min(n - 2);
                        let mut acc = 0.0;
                        for j in 0..k {
                            acc += cell(j, false);
                        }
                        let u = u_all - k as f64;
                        let f0 = samples[k];
                        let f1 = samples[k + 1];
                        acc + h * (f0 * u + (f1 - f0) * u * u / 2.0)
                    }
                };
                Ok(cum(x) - cum(0.0))
            }
            PieceFunction::Windowed { inner, lower, upper } => {
                let clamp = |t: f64| t.clamp(*lower, *upper);
                Ok(inner.antiderivative(clamp(x))? - inner.antiderivative(clamp(0.0))?)
            }
            PieceFunction::Scaled { inner, rate, rate_low, offset } => {
                let r = rate + rate_low;
                Ok((inner.antiderivative(r * x + offset)? - inner.antiderivative(*offset)?) / r)
            }
            PieceFunction::PeriodicPrimitive { .. } => Err(Error::InvalidParameter(
                "closed-form antiderivative of a periodic primitive is not supported".into(),
            )),
        }
    }

    /// The pointwise negation −f, exact per kind.
    pub fn negate(&self) -> PieceFunction {
        match self {
            PieceFunction::Constant { value } => PieceFunction::Constant { value: -value },
            PieceFunction::Affine { intercept, slope } => PieceFunction::Affine {
                intercept: -intercept,
                slope: -slope,
            },
            PieceFunction::Sawtooth { amplitude, period, phase } => PieceFunction::Sawtooth {
                amplitude: -amplitude,
                period: *period,
                phase: *phase,
            },
            PieceFunction::FourierMode { harmonic, cos_coeff, sin_coeff, period } => {
                PieceFunction::FourierMode {
                    harmonic: *harmonic,
                    cos_coeff: -cos_coeff,
                    sin_coeff: -sin_coeff,
                    period: *period,
                }
            }
            PieceFunction::PowerSingularity { center, exponent, coefficient, period } => {
                PieceFunction::PowerSingularity {
                    center: *center,
                    exponent: *exponent,
                    coefficient: -coefficient,
                    period: *period,
                }
            }
            PieceFunction::StepTrain { breakpoints, values, periodic } => PieceFunction::StepTrain {
                breakpoints: breakpoints.clone(),
                values: values.iter().map(|v| -v).collect(),
                periodic: *periodic,
            },
            PieceFunction::GridSampled { samples, spacing, origin, periodic } => {
                PieceFunction::GridSampled {
                    samples: samples.iter().map(|v| -v).collect(),
                    spacing: *spacing,
                    origin: *origin,
                    periodic: *periodic,
                }
            }
            PieceFunction::Windowed { inner, lower, upper } => PieceFunction::Windowed {
                inner: Box::new(inner.negate()),
                lower: *lower,
                upper: *upper,
            },
            PieceFunction::Scaled { inner, rate, rate_low, offset } => PieceFunction::Scaled {
                inner: Box::new(inner.negate()),
                rate: *rate,
                rate_low: *rate_low,
                offset: *offset,
            },
            PieceFunction::PeriodicPrimitive { inner } => PieceFunction::PeriodicPrimitive {
                inner: Box::new(inner.negate()),
            },
        }
    }

    /// Argument shift: returns the piece t ↦ f(t + delta), exact per kind.
    pub fn shift(&self, delta: f64) -> PieceFunction {
        match self {
            PieceFunction::Constant { value } => PieceFunction::Constant { value: *value },
            PieceFunction::Affine { intercept, slope } => PieceFunction::Affine {
                intercept: intercept + slope * delta,
                slope: *slope,
            },
            PieceFunction::Sawtooth { amplitude, period, phase } => PieceFunction::Sawtooth {
                amplitude: *amplitude,
                period: *period,
                // keep the phase canonical so integer-period shifts compare equal
                phase: wrap_phase(phase - delta, *period),
            },
            PieceFunction::FourierMode { harmonic, cos_coeff, sin_coeff, period } => {
                // reduce the shift modulo the period so that full-period
                // shifts reproduce the piece exactly
                let delta_red = delta.rem_euclid(period / (*harmonic).max(1) as f64);
                let w = 2.0 * std::f64::consts::PI * (*harmonic as f64) / period;
                let (s, c) = (w * delta_red).sin_cos();
                PieceFunction::FourierMode {
                    harmonic: *harmonic,
                    cos_coeff: cos_coeff * c + sin_coeff * s,
                    sin_coeff: -cos_coeff * s + sin_coeff * c,
                    period: *period,
                }
            }
            PieceFunction::PowerSingularity { center, exponent, coefficient, period } => {
                let new_center = match period {
                    Some(p) => wrap_phase(center - delta, *p),
                    None => center - delta,
                };
                PieceFunction::PowerSingularity {
                    center: new_center,
                    exponent: *exponent,
                    coefficient: *coefficient,
                    period: *period,
                }
            }
            PieceFunction::StepTrain { breakpoints, values, periodic } => {
                if *periodic {
                    let span = breakpoints.last().unwrap() - breakpoints[0];
                    if delta.rem_euclid(span) == 0.0 {
                        return self.clone();
                    }
                }
                PieceFunction::StepTrain {
                    breakpoints: breakpoints.iter().map(|b| b - delta).collect(),
                    values: values.clone(),
                    periodic: *periodic,
                }
            }
            PieceFunction::GridSampled { samples, spacing, origin, periodic } => {
                if *periodic && delta.rem_euclid(spacing * samples.len() as f64) == 0.0 {
                    return self.clone();
                }
                PieceFunction::GridSampled {
                    samples: samples.clone(),
                    spacing: *spacing,
                    origin: origin - delta,
                    periodic: *periodic,
                }
            }
            PieceFunction::Windowed { inner, lower, upper } => PieceFunction::Windowed {
                inner: Box::new(inner.shift(delta)),
                lower: lower - delta,
                upper: upper - delta,
            },
            PieceFunction::Scaled { inner, rate, rate_low, offset } => PieceFunction::Scaled {
                inner: inner.clone(),
                rate: *rate,
                rate_low: *rate_low,
                offset: offset + (rate + rate_low) * delta,
            },
            prim @ PieceFunction::PeriodicPrimitive { .. } => PieceFunction::Scaled {
                inner: Box::new(prim.clone()),
                rate: 1.0,
                rate_low: 0.0,
                offset: delta,
            },
        }
    }
}

/// The representable anchor of the k-th periodic singular point
/// center + k·period: the f64 nearest to the exact (two-float) sum.
pub(crate) fn singular_anchor(center: f64, k: f64, period: f64) -> f64 {
    let kp = k * period;
    let kp_low = k.mul_add(period, -kp); // exact product residual
    let hi = center + kp;
    // TwoSum residual of center + kp
    let kp_round = hi - center;
    let err = (center - (hi - kp_round)) + (kp - kp_round);
    hi + (err + kp_low)
}

/// Wrap a phase-like parameter into [0, period).
fn wrap_phase(phase: f64, period: f64) -> f64 {
    let r = phase.rem_euclid(period);
    if r == period {
        0.0
    } else {
        r
    }
}

/// Push the lattice points `anchor + k·step` lying strictly inside (a, b).
fn push_lattice(anchor: f64, step: f64, a: f64, b: f64, out: &mut Vec<f64>) {
    let k_lo = ((a - anchor) / step).floor() as i64;
    let k_hi = ((b - anchor) / step).ceil() as i64;
    for k in k_lo..=k_hi {
        let x = anchor + step * k as f64;
        if x > a && x < b {
            out.push(x);
        }
    }
}

/// Evaluate rate·(t_hi + t_lo) + offset as a two-float, reduced modulo the
/// inner period when there is one.  The product uses an FMA two-product so
/// that tiny rate differences (such as α − α_m between Liouville
/// convergents) survive large t.
fn scaled_argument(
    rate: f64,
    rate_low: f64,
    offset: f64,
    t_hi: f64,
    t_lo: f64,
    per: Periodicity,
) -> (f64, f64) {
    let p = match per {
        Periodicity::Period(p) => p,
        _ => return ((rate + rate_low) * (t_hi + t_lo) + offset, 0.0),
    };
    let hi = rate * t_hi;
    let lo = rate.mul_add(t_hi, -hi); // exact residual of the product
    let main = hi - (hi / p).floor() * p; // exact for |hi/p| < 2^52
    (main, lo + rate_low * t_hi + (rate + rate_low) * t_lo + offset)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sawtooth_is_fractional_part() {
        let f = PieceFunction::sawtooth(1.0, 1.0, 0.0);
        assert_eq!(f.eval(0.25).unwrap(), 0.25);
        assert_eq!(f.eval(17.25).unwrap(), 0.25);
        assert_eq!(f.eval(-0.75).unwrap(), 0.25);
    }

    #[test]
    fn constant_everywhere() {
        let f = PieceFunction::constant(5.0);
        assert_eq!(f.eval(17.3).unwrap(), 5.0);
    }

    #[test]
    fn power_singularity_direct_value() {
        let f = PieceFunction::power_singularity(0.0, 0.25, 1.0);
        assert!((f.eval(16.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(matches!(f.eval(0.0), Err(Error::SingularPoint { .. })));
    }

    #[test]
    fn periodized_singularity_wraps() {
        let f = PieceFunction::PowerSingularity {
            center: 0.0,
            exponent: 0.25,
            coefficient: 1.0,
            period: Some(1.0),
        };
        let v = f.eval(0.3).unwrap();
        assert!((f.eval(7.3).unwrap() - v).abs() < 1e-12);
        // fundamental domain is [−1/2, 1/2): t = 0.7 maps to −0.3
        assert!((f.eval(0.7).unwrap() - 0.3_f64.powf(-0.25)).abs() < 1e-12);
        assert!(f.eval(1.0).is_err());
    }

    #[test]
    fn sawtooth_antiderivative_closed_form() {
        let f = PieceFunction::sawtooth(2.0, 1.0, 0.0);
        // ∫₀^1.5 2·frac = 2·(1/2 + 1/8)
        assert!((f.antiderivative(1.5).unwrap() - 1.25).abs() < 1e-14);
        // odd range through zero
        assert!((f.antiderivative(-0.5).unwrap() - (-2.0 * 0.375)).abs() < 1e-14);
    }

    #[test]
    fn singular_antiderivative_matches_power_rule() {
        let f = PieceFunction::power_singularity(0.0, 0.5, 1.0);
        // ∫₀¹ t^(−1/2) = 2
        assert!((f.antiderivative(1.0).unwrap() - 2.0).abs() < 1e-14);
        // symmetric through the singularity: ∫_{−1}^{1} = 4
        let v = f.antiderivative(1.0).unwrap() - f.antiderivative(-1.0).unwrap();
        assert!((v - 4.0).abs() < 1e-14);
    }

    #[test]
    fn shift_constant_and_periodic_identity() {
        let c = PieceFunction::constant(3.0);
        assert_eq!(c.shift(12.7), c);
        let s = PieceFunction::sawtooth(1.0, 1.0, 0.0);
        assert_eq!(s.shift(1.0), s);
        assert_eq!(s.shift(-4.0), s);
    }

    #[test]
    fn shift_fourier_quarter_period() {
        // cos(2πt) shifted by 1/4 becomes −sin(2πt)
        let f = PieceFunction::fourier_mode(1, 1.0, 0.0, 1.0);
        let g = f.shift(0.25);
        match g {
            PieceFunction::FourierMode { cos_coeff, sin_coeff, .. } => {
                assert!(cos_coeff.abs() < 1e-15);
                assert!((sin_coeff + 1.0).abs() < 1e-15);
            }
            _ => panic!("shift changed the kind"),
        }
    }

    #[test]
    fn shift_round_trip_pointwise() {
        let pieces = vec![
            PieceFunction::sawtooth(0.7, 1.3, 0.2),
            PieceFunction::fourier_mode(3, 0.5, -0.2, 1.0),
            PieceFunction::Affine { intercept: 1.0, slope: -2.0 },
            PieceFunction::StepTrain {
                breakpoints: vec![0.0, 0.4, 1.0],
                values: vec![1.0, -2.0],
                periodic: true,
            },
        ];
        for f in &pieces {
            let g = f.shift(0.618).shift(-0.618);
            for k in 0..40 {
                let t = -3.0 + 0.15 * k as f64;
                assert!((f.eval(t).unwrap() - g.eval(t).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn scaled_argument_reduction_keeps_tiny_rate_differences() {
        // two rates differing by 1e−14 must produce arguments differing by
        // t·1e−14 even at t = 1e4
        let base = PieceFunction::sawtooth(1.0, 1.0, 0.0);
        let f = PieceFunction::scaled(base.clone(), 0.1100010000000001, 0.0);
        let g = PieceFunction::scaled(base, 0.11000100000000011, 0.0);
        let t = 9999.0;
        let d = (f.eval(t).unwrap() - g.eval(t).unwrap()).abs();
        let expect = t * 1e-17; // |Δrate|·t up to representation granularity
        assert!(d < 1e-10, "difference {d} should be tiny");
        assert!(d > expect / 100.0, "difference {d} should not vanish");
    }

    #[test]
    fn step_train_eval_and_integral() {
        let f = PieceFunction::StepTrain {
            breakpoints: vec![0.0, 0.5, 1.0],
            values: vec![0.0, 2.0],
            periodic: true,
        };
        assert_eq!(f.eval(0.25).unwrap(), 0.0);
        assert_eq!(f.eval(0.75).unwrap(), 2.0);
        assert_eq!(f.eval(1.75).unwrap(), 2.0);
        // one full period integrates to 1
        assert!((f.antiderivative(1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((f.antiderivative(3.25).unwrap() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn periodic_primitive_of_sawtooth() {
        // primitive of frac(t) − 1/2 is (r² − r)/2
        let inner = PieceFunction::sawtooth(1.0, 1.0, 0.0);
        let prim = PieceFunction::PeriodicPrimitive { inner: Box::new(inner) };
        for k in 0..20 {
            let t = -2.0 + 0.21 * k as f64;
            let r = frac(t);
            let expect = (r * r - r) / 2.0;
            assert!((prim.eval(t).unwrap() - expect).abs() < 1e-13);
        }
        assert_eq!(prim.eval(0.0).unwrap(), 0.0);
    }

    #[test]
    fn grid_sampled_linear_interp() {
        let f = PieceFunction::GridSampled {
            samples: vec![0.0, 1.0, 0.0, -1.0],
            spacing: 0.25,
            origin: 0.0,
            periodic: true,
        };
        assert!((f.eval(0.125).unwrap() - 0.5).abs() < 1e-15);
        // wrap: between last sample (−1 at 0.75) and first (0 at 1.0)
        assert!((f.eval(0.875).unwrap() + 0.5).abs() < 1e-15);
        assert!((f.eval(1.125).unwrap() - 0.5).abs() < 1e-15);
    }
}
