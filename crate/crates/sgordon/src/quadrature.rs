//! Adaptive Gauss–Legendre quadrature with mesh control.
//!
//! Integrands coming from potentials have three kinds of structure the
//! integrator must respect: mandatory mesh nodes at piece breakpoints,
//! integrable power blowups |t − c|^(−p) with p < 1 at known centers, and an
//! oscillation scale.  Singular cells are regularized by the power
//! substitution t = c ± w^m with m(1 − p) ≥ 3, after which the transformed
//! integrand vanishes at the singular end and plain adaptive bisection
//! converges.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const GL_N: usize = 15;
const MAX_DEPTH: u32 = 46;

fn gl15() -> &'static ([f64; GL_N], [f64; GL_N]) {
    static NODES: OnceLock<([f64; GL_N], [f64; GL_N])> = OnceLock::new();
    NODES.get_or_init(|| {
        // Newton iteration on P_15; standard cosine initial guesses.
        let n = GL_N;
        let mut xs = [0.0; GL_N];
        let mut ws = [0.0; GL_N];
        for k in 0..n {
            let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(n, x);
            xs[k] = x;
            ws[k] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (xs, ws)
    })
}

/// Legendre polynomial P_n and its derivative at x.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Integrand evaluated at the two-float point `t_hi + t_lo`; `t_lo` carries
/// exact offsets from singular centers.
pub type Integrand<'a> = &'a mut dyn FnMut(f64, f64) -> Result<f64>;

/// The 15-point Gauss–Legendre nodes and weights on [−1, 1].
pub fn gl15_nodes() -> &'static ([f64; 15], [f64; 15]) {
    gl15()
}

fn gl_cell(f: Integrand, a: f64, b: f64) -> Result<f64> {
    let (xs, ws) = gl15();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for k in 0..GL_N {
        acc += ws[k] * f(mid + half * xs[k], 0.0)?;
    }
    Ok(acc * half)
}

fn adaptive(
    f: Integrand,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let mid = 0.5 * (a + b);
    if mid <= a || mid >= b {
        return Ok(whole); // interval at floating-point resolution
    }
    let left = gl_cell(f, a, mid)?;
    let right = gl_cell(f, mid, b)?;
    let sum = left + right;
    let err = (sum - whole).abs();
    if err <= tol.max(1e-15 * sum.abs()) {
        return Ok(sum);
    }
    if depth == 0 {
        // at exhaustion the cell is ~2^−46 of the original span; a bounded
        // integrand contributes at most rounding-level mass here
        if err > 1e6 * tol.max(f64::MIN_POSITIVE) && err > 1e-12 * (1.0 + sum.abs()) {
            return Err(Error::Numerics(format!(
                "quadrature failed to converge on [{a}, {b}] (residual {err:.3e})"
            )));
        }
        return Ok(sum);
    }
    let l = adaptive(f, a, mid, left, tol / 2.0, depth - 1)?;
    let r = adaptive(f, mid, b, right, tol / 2.0, depth - 1)?;
    Ok(l + r)
}

/// Adaptive integration of a smooth-or-mildly-rough integrand on [a, b].
pub fn integrate_adaptive<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if !(a < b) {
        return Err(Error::InvalidParameter("integration needs a < b".into()));
    }
    let mut g = |hi: f64, lo: f64| f(hi + lo);
    let whole = gl_cell(&mut g, a, b)?;
    adaptive(&mut g, a, b, whole, tol, MAX_DEPTH)
}

/// Integration plan for integrands with known structure.
pub struct Structure {
    /// Mandatory mesh nodes (breakpoints, kinks).
    pub nodes: Vec<f64>,
    /// (center, p): pointwise blowup |t − center|^(−p), 0 < p < 1.
    pub singular: Vec<(f64, f64)>,
    /// Largest cell allowed before adaptivity, resolving oscillation.
    pub max_cell: Option<f64>,
}

impl Structure {
    pub fn smooth() -> Self {
        Structure { nodes: Vec::new(), singular: Vec::new(), max_cell: None }
    }
}

/// Integrate `f` over [a, b] given structural information.
///
/// Every singular center with nonintegrable p ≥ 1 is rejected.  The absolute
/// error target `tol` is split across cells by length.
pub fn integrate_structured<F: FnMut(f64, f64) -> Result<f64>>(
    mut f: F,
    a: f64,
    b: f64,
    structure: &Structure,
    tol: f64,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if !(a < b) {
        return Err(Error::InvalidParameter("integration needs a < b".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("quadrature tolerance must be positive".into()));
    }
    for (c, p) in &structure.singular {
        if *p >= 1.0 && *c >= a && *c <= b {
            return Err(Error::NonIntegrable { exponent: *p });
        }
    }

    let span = b - a;
    let fuzz = span * 1e-13;

    // cell boundaries: endpoints, nodes, singular centers
    let mut cuts: Vec<f64> = Vec::with_capacity(structure.nodes.len() + structure.singular.len() + 2);
    cuts.push(a);
    cuts.push(b);
    cuts.extend(structure.nodes.iter().copied().filter(|x| *x > a && *x < b));
    cuts.extend(structure.singular.iter().map(|(c, _)| *c).filter(|x| *x > a && *x < b));
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup_by(|x, y| (*x - *y).abs() <= fuzz);
    // cells must start or end exactly on singular anchors: snap nearby cuts
    for c in cuts.iter_mut() {
        if let Some((anchor, _)) = structure.singular.iter().find(|(s, _)| (s - *c).abs() <= fuzz) {
            *c = *anchor;
        }
    }
    // dedup may drop an endpoint if a node sits within fuzz of it
    if (cuts[0] - a).abs() > 0.0 {
        cuts[0] = a;
    }
    let last = cuts.len() - 1;
    if (cuts[last] - b).abs() > 0.0 {
        cuts[last] = b;
    }

    let sing_at = |x: f64| -> Option<f64> {
        structure
            .singular
            .iter()
            .find(|(c, _)| (c - x).abs() <= fuzz)
            .map(|(_, p)| *p)
    };

    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        if x1 <= x0 {
            continue;
        }
        let cell_tol = tol * ((x1 - x0) / span).max(1.0 / (4.0 * cuts.len() as f64));
        let left_p = sing_at(x0);
        let right_p = sing_at(x1);
        total += match (left_p, right_p) {
            (None, None) => integrate_plain(&mut f, x0, x1, structure.max_cell, cell_tol)?,
            (Some(p), None) => singular_end(&mut f, x0, x1, p, false, structure.max_cell, cell_tol)?,
            (None, Some(p)) => singular_end(&mut f, x0, x1, p, true, structure.max_cell, cell_tol)?,
            (Some(pl), Some(pr)) => {
                let mid = 0.5 * (x0 + x1);
                singular_end(&mut f, x0, mid, pl, false, structure.max_cell, cell_tol / 2.0)?
                    + singular_end(&mut f, mid, x1, pr, true, structure.max_cell, cell_tol / 2.0)?
            }
        };
    }
    Ok(total)
}

/// Adaptive integration on [a, b], pre-split into cells of at most
/// `max_cell` so the error estimator sees the oscillation.
fn integrate_plain(
    f: Integrand,
    a: f64,
    b: f64,
    max_cell: Option<f64>,
    tol: f64,
) -> Result<f64> {
    let parts = match max_cell {
        Some(h) if h > 0.0 => ((b - a) / h).ceil().max(1.0) as usize,
        _ => 1,
    };
    let parts = parts.min(4_000_000);
    let h = (b - a) / parts as f64;
    let mut acc = 0.0;
    let cell_tol = tol / parts as f64;
    for k in 0..parts {
        let x0 = a + h * k as f64;
        let x1 = if k + 1 == parts { b } else { a + h * (k + 1) as f64 };
        let whole = gl_cell(f, x0, x1)?;
        acc += adaptive(f, x0, x1, whole, cell_tol, MAX_DEPTH)?;
    }
    Ok(acc)
}

/// Integrate a cell with a power blowup of exponent p at one end, using the
/// substitution t = c ± w^m.  The transformed integrand tends to 0 at the
/// singular end; evaluations that would land exactly on the center (from
/// w^m underflow) contribute 0 in that limit.
fn singular_end(
    f: Integrand,
    x0: f64,
    x1: f64,
    p: f64,
    singular_right: bool,
    max_cell: Option<f64>,
    tol: f64,
) -> Result<f64> {
    let len = x1 - x0;
    let m = ((3.5 / (1.0 - p)).ceil() as i32).clamp(4, 240);
    let mf = m as f64;
    let w_max = len.powf(1.0 / mf);
    let c = if singular_right { x1 } else { x0 };
    let sign = if singular_right { -1.0 } else { 1.0 };
    // the offset from the singular center is handed to the integrand exactly
    // as the low word; mass below the subnormal floor is dropped (it is
    // O(eps^(1−p)) of the local contribution)
    let mut g = move |w: f64, _lo: f64| -> Result<f64> {
        let d = w.powi(m);
        if d == 0.0 {
            return Ok(0.0);
        }
        Ok(f(c, sign * d)? * mf * w.powi(m - 1))
    };
    // the substitution compresses oscillation near w_max; keep pre-splitting
    // proportional to the pulled-back resolution there
    let sub_cell = max_cell.map(|h| (h / (mf * len / w_max)).min(w_max / 4.0));
    integrate_plain(&mut g, 0.0, w_max, sub_cell, tol)
}
