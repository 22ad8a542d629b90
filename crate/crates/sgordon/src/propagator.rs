//! Propagation of the quasi-derivative first-order system.
//!
//! The eigenvalue equation −(u′ − σu)′ − σu′ + τu = λu is equivalent to
//!
//!   d/dt (u, u¹)ᵀ = [[σ, 1], [−σ² + τ − λ, −σ]] (u, u¹)ᵀ,
//!
//! where u¹ = u′ − σu is the quasi-derivative.  The generator is trace-free,
//! so every transfer matrix has unit determinant.  Steps exponentiate the
//! exact cell integral of the generator (a commutator-free Magnus step that
//! is exact on piecewise-constant data), with step doubling as the error
//! control and mandatory mesh nodes at piece breakpoints and singular
//! centers.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::SigmaTau;

/// Solution state (u, u¹) with u¹ = u′ − σu.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StateVector {
    pub u: f64,
    pub u1: f64,
}

impl StateVector {
    pub fn new(u: f64, u1: f64) -> Self {
        StateVector { u, u1 }
    }

    /// Unit vector (cos θ, sin θ).
    pub fn from_angle(theta: f64) -> Self {
        StateVector { u: theta.cos(), u1: theta.sin() }
    }

    /// Euclidean norm |U| = √(u² + (u¹)²).
    pub fn norm(&self) -> f64 {
        self.u.hypot(self.u1)
    }

    pub fn sub(&self, other: &StateVector) -> StateVector {
        StateVector { u: self.u - other.u, u1: self.u1 - other.u1 }
    }
}

/// A 2×2 transfer matrix U(t1) = M · U(t0) at spectral parameter λ.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TransferMatrix {
    pub m: [[f64; 2]; 2],
    pub t0: f64,
    pub t1: f64,
    pub lambda: f64,
}

impl TransferMatrix {
    pub fn identity(t: f64, lambda: f64) -> Self {
        TransferMatrix { m: [[1.0, 0.0], [0.0, 1.0]], t0: t, t1: t, lambda }
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn apply(&self, v: &StateVector) -> StateVector {
        StateVector {
            u: self.m[0][0] * v.u + self.m[0][1] * v.u1,
            u1: self.m[1][0] * v.u + self.m[1][1] * v.u1,
        }
    }

    /// self ∘ earlier: the matrix taking earlier.t0 to self.t1.
    pub fn compose(&self, earlier: &TransferMatrix) -> TransferMatrix {
        TransferMatrix {
            m: mat_mul(&self.m, &earlier.m),
            t0: earlier.t0,
            t1: self.t1,
            lambda: self.lambda,
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest singular value, from the closed form for 2×2 matrices.
    pub fn spectral_norm(&self) -> f64 {
        spectral_norm_2x2(&self.m)
    }
}

pub(crate) fn mat_mul(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

/// Largest singular value of a 2×2 real matrix, via the rotation
/// decomposition closed form (stable also near equal singular values).
pub fn spectral_norm_2x2(m: &[[f64; 2]; 2]) -> f64 {
    let h1 = (m[0][0] + m[1][1]).hypot(m[0][1] - m[1][0]);
    let h2 = (m[0][0] - m[1][1]).hypot(m[0][1] + m[1][0]);
    0.5 * (h1 + h2)
}

/// The system generator [[σ, 1], [−σ² + τ − λ, −σ]]; trace-free.
pub fn coefficient_matrix(sigma_val: f64, tau_val: f64, lambda: f64) -> [[f64; 2]; 2] {
    [
        [sigma_val, 1.0],
        [-sigma_val * sigma_val + tau_val - lambda, -sigma_val],
    ]
}

/// exp([[p, r], [q, −p]]) through the cosh/cos branches on p² + rq.
pub(crate) fn expm_tracefree(p: f64, r: f64, q: f64) -> [[f64; 2]; 2] {
    let d = p * p + r * q;
    let (c, s) = if d > 1e-8 {
        let w = d.sqrt();
        (w.cosh(), w.sinh() / w)
    } else if d < -1e-8 {
        let w = (-d).sqrt();
        (w.cos(), w.sin() / w)
    } else {
        // even series in d; |d| ≤ 1e−8 keeps the truncation below 1e−26
        (
            1.0 + d / 2.0 + d * d / 24.0,
            1.0 + d / 6.0 + d * d / 120.0,
        )
    };
    [[c + s * p, s * r], [s * q, c - s * p]]
}

/// Exact transfer matrix over a step of length h with constant data:
/// exp(h·G) with G = coefficient_matrix(σ₀, τ₀, λ).  The branch parameter is
/// μ² = τ₀ − λ.
pub fn step_exact_constant(sigma0: f64, tau0: f64, lambda: f64, h: f64) -> TransferMatrix {
    let b = -sigma0 * sigma0 + tau0 - lambda;
    TransferMatrix {
        m: expm_tracefree(sigma0 * h, h, b * h),
        t0: 0.0,
        t1: h,
        lambda,
    }
}

/// Per-cell generator integrals for a potential at fixed λ.
struct CellSystem<'a> {
    st: &'a SigmaTau,
    lambda: f64,
    /// singular centers of the σ/τ pieces with their strongest exponent
    singular: Vec<(f64, f64)>,
    fuzz: f64,
}

/// Gauss–Legendre nodes on a cell, evaluating at two-float points
/// base + offset(v) so singular offsets stay exact.
fn gl_pair_sum(
    f: &mut dyn FnMut(f64, f64) -> Result<(f64, f64)>,
    a: f64,
    b: f64,
) -> Result<(f64, f64)> {
    let (xs, ws) = crate::quadrature::gl15_nodes();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let (mut s1, mut s2) = (0.0, 0.0);
    for k in 0..xs.len() {
        let (v1, v2) = f(mid + half * xs[k], 0.0)?;
        s1 += ws[k] * v1;
        s2 += ws[k] * v2;
    }
    Ok((s1 * half, s2 * half))
}

impl CellSystem<'_> {
    fn new(st: &SigmaTau, lambda: f64, lo: f64, hi: f64) -> CellSystem<'_> {
        let mut singular: Vec<(f64, f64)> = Vec::new();
        for p in st.sigma.iter().chain(st.tau.iter()) {
            let mut centers = Vec::new();
            p.singular_points_in(lo, hi, &mut centers);
            let g = p.max_singular_exponent();
            for c in centers {
                match singular.iter_mut().find(|(x, _)| (*x - c).abs() <= 1e-12) {
                    Some((_, e)) => *e = e.max(g),
                    None => singular.push((c, g)),
                }
            }
        }
        CellSystem { st, lambda, singular, fuzz: 1e-12 * (hi - lo).abs().max(1.0) }
    }

    fn singular_at(&self, x: f64) -> Option<f64> {
        self.singular
            .iter()
            .find(|(c, _)| (c - x).abs() <= self.fuzz)
            .map(|(_, g)| *g)
    }

    /// σ and −σ² + τ − λ at the two-float point.
    fn fields(&self, hi: f64, lo: f64) -> Result<(f64, f64)> {
        let mut s = 0.0;
        for p in &self.st.sigma {
            s += p.eval_two(hi, lo)?;
        }
        let mut t = 0.0;
        for p in &self.st.tau {
            t += p.eval_two(hi, lo)?;
        }
        Ok((s, -s * s + t - self.lambda))
    }

    /// Ω = ∫ₓʸ G(s) ds as (p, r, q) of [[p, r], [q, −p]], by one fixed
    /// Gauss rule; the step-doubling controller validates the quadrature
    /// together with the Magnus truncation.  Regular cells only.
    fn omega(&self, x: f64, y: f64) -> Result<(f64, f64, f64)> {
        let (lo, hi) = (x.min(y), x.max(y));
        let sign = if x <= y { 1.0 } else { -1.0 };
        let mut f = |t: f64, dt: f64| self.fields(t, dt);
        let (a_int, b_int) = gl_pair_sum(&mut f, lo, hi)?;
        Ok((sign * a_int, y - x, sign * b_int))
    }

    /// Exact constant data on the cell, if any.
    fn constant_data(&self, x: f64, y: f64) -> Option<(f64, f64)> {
        let mut s = 0.0;
        for p in &self.st.sigma {
            s += p.constant_on(x.min(y), x.max(y))?;
        }
        let mut t = 0.0;
        for p in &self.st.tau {
            t += p.constant_on(x.min(y), x.max(y))?;
        }
        Some((s, t))
    }

    /// Transfer matrix over a mesh cell [x, y] (either direction); cells
    /// adjacent to a singular center take the reparametrized path.
    fn cell(&self, x: f64, y: f64, tol: f64) -> Result<[[f64; 2]; 2]> {
        if let Some((s0, t0)) = self.constant_data(x, y) {
            return Ok(step_exact_constant(s0, t0, self.lambda, y - x).m);
        }
        if let Some(g) = self.singular_at(x) {
            return self.singular_step(x, y, g, tol);
        }
        if let Some(g) = self.singular_at(y) {
            // integrate outward from the center, then invert (det = 1)
            let m = self.singular_step(y, x, g, tol)?;
            return Ok([[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]);
        }
        let omega = self.omega(x, y)?;
        self.step(x, y, omega, tol, 42)
    }

    fn step(
        &self,
        x: f64,
        y: f64,
        omega: (f64, f64, f64),
        tol: f64,
        depth: u32,
    ) -> Result<[[f64; 2]; 2]> {
        let coarse = expm_tracefree(omega.0, omega.1, omega.2);
        let mid = 0.5 * (x + y);
        if mid == x || mid == y {
            return Ok(coarse);
        }
        let left = self.omega(x, mid)?;
        let right = self.omega(mid, y)?;
        let fine = mat_mul(
            &expm_tracefree(right.0, right.1, right.2),
            &expm_tracefree(left.0, left.1, left.2),
        );
        let err: f64 = coarse
            .iter()
            .flatten()
            .zip(fine.iter().flatten())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let scale = fine.iter().flatten().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
        if err <= tol * scale {
            return Ok(fine);
        }
        if depth == 0 {
            return Err(Error::Numerics(format!(
                "step control failed to converge on [{x}, {y}]"
            )));
        }
        let ml = self.step(x, mid, left, tol, depth - 1)?;
        let mr = self.step(mid, y, right, tol, depth - 1)?;
        Ok(mat_mul(&mr, &ml))
    }

    /// Step across [c, far] where c is a singular center: reparametrize by
    /// t = c + s·v^p.  The transformed generator p·v^(p−1)·G(c + s·v^p) is
    /// bounded (it vanishes at v = 0 when p(1 − γ) > 1), offsets from the
    /// center are handed to the pieces exactly, and ordinary step doubling
    /// converges at full order.
    fn singular_step(&self, c: f64, far: f64, gamma: f64, tol: f64) -> Result<[[f64; 2]; 2]> {
        let span = (far - c).abs();
        let s = (far - c).signum();
        // worst blowup of the generator: σ² or τ, exponent ≤ max(2γ, γ) < 1
        let blow = (2.0 * gamma).min(0.999_f64).max(gamma.min(0.999));
        let p = (2.2 / (1.0 - blow)).ceil().max(3.0);
        let v_max = span.powf(1.0 / p);
        let sub = SubstitutedCell { sys: self, c, s, p };
        let omega = sub.omega(0.0, v_max)?;
        sub.step(0.0, v_max, omega, tol, 48)
    }
}

/// The system in the substituted coordinate v, t = c + s·v^p.
struct SubstitutedCell<'a, 'b> {
    sys: &'a CellSystem<'b>,
    c: f64,
    s: f64,
    p: f64,
}

impl SubstitutedCell<'_, '_> {
    fn omega(&self, v0: f64, v1: f64) -> Result<(f64, f64, f64)> {
        let mut f = |v: f64, _lo: f64| -> Result<(f64, f64)> {
            let offset = self.s * v.powf(self.p);
            let jac = self.s * self.p * v.powf(self.p - 1.0);
            if offset == 0.0 || jac == 0.0 {
                return Ok((0.0, 0.0));
            }
            let (a, b) = self.sys.fields(self.c, offset)?;
            Ok((a * jac, b * jac))
        };
        let (a_int, b_int) = gl_pair_sum(&mut f, v0, v1)?;
        // the r-entry is the exact signed t-length of the v-interval
        let r = self.s * (v1.powf(self.p) - v0.powf(self.p));
        Ok((a_int, r, b_int))
    }

    fn step(
        &self,
        v0: f64,
        v1: f64,
        omega: (f64, f64, f64),
        tol: f64,
        depth: u32,
    ) -> Result<[[f64; 2]; 2]> {
        let coarse = expm_tracefree(omega.0, omega.1, omega.2);
        let mid = 0.5 * (v0 + v1);
        if mid == v0 || mid == v1 {
            return Ok(coarse);
        }
        let left = self.omega(v0, mid)?;
        let right = self.omega(mid, v1)?;
        let fine = mat_mul(
            &expm_tracefree(right.0, right.1, right.2),
            &expm_tracefree(left.0, left.1, left.2),
        );
        let err: f64 = coarse
            .iter()
            .flatten()
            .zip(fine.iter().flatten())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let scale = fine.iter().flatten().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
        if err <= tol * scale {
            return Ok(fine);
        }
        if depth == 0 {
            return Err(Error::Numerics(format!(
                "singular step control failed to converge near t = {}",
                self.c
            )));
        }
        let ml = self.step(v0, mid, left, tol, depth - 1)?;
        let mr = self.step(mid, v1, right, tol, depth - 1)?;
        Ok(mat_mul(&mr, &ml))
    }
}

/// Mesh nodes along the path t0 → t1 (either direction), starting at t0 and
/// ending at t1, including piece breakpoints, singular centers, and an
/// oscillation-resolving pre-split.
fn path_mesh(st: &SigmaTau, lambda: f64, t0: f64, t1: f64) -> Vec<f64> {
    let (lo, hi) = (t0.min(t1), t0.max(t1));
    let mut nodes = vec![lo, hi];
    let mut anchors = Vec::new();
    for p in st.sigma.iter().chain(st.tau.iter()) {
        p.breakpoints_in(lo, hi, &mut nodes);
        p.singular_points_in(lo, hi, &mut anchors);
    }
    nodes.extend_from_slice(&anchors);
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let fuzz = 1e-13 * (hi - lo).max(1.0);
    nodes.dedup_by(|a, b| (*a - *b).abs() <= fuzz);
    // singular cells must begin or end exactly on their anchor
    for n in nodes.iter_mut() {
        if let Some(a) = anchors.iter().find(|a| (**a - *n).abs() <= fuzz) {
            *n = *a;
        }
    }

    // pre-split long cells: rotation scale 2π/√λ and piece oscillation
    let mut max_cell = 2.0 * std::f64::consts::PI / (lambda.abs().max(1.0)).sqrt() / 3.0;
    for p in st.sigma.iter().chain(st.tau.iter()) {
        if let Some(h) = p.resolution_hint() {
            max_cell = max_cell.min(h);
        }
    }
    let mut mesh = Vec::with_capacity(nodes.len());
    for w in nodes.windows(2) {
        mesh.push(w[0]);
        let len = w[1] - w[0];
        if len > max_cell {
            let parts = ((len / max_cell).ceil() as usize).min(2_000_000);
            for k in 1..parts {
                mesh.push(w[0] + len * (k as f64) / (parts as f64));
            }
        }
    }
    mesh.push(hi);
    if t1 < t0 {
        mesh.reverse();
    }
    mesh
}

/// Transfer matrix M with U(t1) = M·U(t0); det M = 1 up to rounding.
/// Backward propagation (t1 < t0) is supported directly.
pub fn transfer_matrix(
    st: &SigmaTau,
    lambda: f64,
    t0: f64,
    t1: f64,
    tol: f64,
) -> Result<TransferMatrix> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("propagation tolerance must be positive".into()));
    }
    if t0 == t1 {
        return Ok(TransferMatrix::identity(t0, lambda));
    }
    let mesh = path_mesh(st, lambda, t0, t1);
    let cells = mesh.len() - 1;
    let sys = CellSystem::new(st, lambda, t0.min(t1), t0.max(t1));
    let cell_tol = tol / cells as f64;
    let mut m = [[1.0, 0.0], [0.0, 1.0]];
    for w in mesh.windows(2) {
        let step = sys.cell(w[0], w[1], cell_tol)?;
        m = mat_mul(&step, &m);
    }
    Ok(TransferMatrix { m, t0, t1, lambda })
}

/// U(t1) for the solution with U(t0) = U0.
pub fn propagate(
    st: &SigmaTau,
    lambda: f64,
    t0: f64,
    t1: f64,
    u0: StateVector,
    tol: f64,
) -> Result<StateVector> {
    if t0 == t1 {
        return Ok(u0);
    }
    let mesh = path_mesh(st, lambda, t0, t1);
    let cells = mesh.len() - 1;
    let sys = CellSystem::new(st, lambda, t0.min(t1), t0.max(t1));
    let cell_tol = tol / cells as f64;
    let mut u = u0;
    for w in mesh.windows(2) {
        let step = sys.cell(w[0], w[1], cell_tol)?;
        u = StateVector {
            u: step[0][0] * u.u + step[0][1] * u.u1,
            u1: step[1][0] * u.u + step[1][1] * u.u1,
        };
    }
    Ok(u)
}

/// Squared state norms |u|² + |u¹|² sampled at the given times, propagating
/// from (t_start, U0) through the sorted sample times.
pub fn propagate_profile(
    st: &SigmaTau,
    lambda: f64,
    t_start: f64,
    u0: StateVector,
    times: &[f64],
    tol: f64,
) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(times.len());
    // split into backward and forward passes from t_start
    let mut back: Vec<f64> = times.iter().copied().filter(|t| *t < t_start).collect();
    back.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut fwd: Vec<f64> = times.iter().copied().filter(|t| *t >= t_start).collect();
    fwd.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut u = u0;
    let mut t_prev = t_start;
    for &t in &back {
        u = propagate(st, lambda, t_prev, t, u, tol)?;
        t_prev = t;
        out.push((t, u.norm().powi(2)));
    }
    u = u0;
    t_prev = t_start;
    for &t in &fwd {
        u = propagate(st, lambda, t_prev, t, u, tol)?;
        t_prev = t;
        out.push((t, u.norm().powi(2)));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piece::PieceFunction;

    fn free() -> SigmaTau {
        SigmaTau::free(Some(1.0))
    }

    #[test]
    fn coefficient_matrix_entries() {
        assert_eq!(coefficient_matrix(0.0, 0.0, 0.0), [[0.0, 1.0], [0.0, 0.0]]);
        assert_eq!(coefficient_matrix(1.0, 2.0, 2.0), [[1.0, 1.0], [-1.0, -1.0]]);
        assert_eq!(coefficient_matrix(2.0, 3.0, 1.0), [[2.0, 1.0], [-2.0, -2.0]]);
    }

    #[test]
    fn exact_step_free_rotation() {
        let k = 1.7f64;
        let h = 0.9;
        let m = step_exact_constant(0.0, 0.0, k * k, h);
        let (s, c) = (k * h).sin_cos();
        assert!((m.m[0][0] - c).abs() < 1e-14);
        assert!((m.m[0][1] - s / k).abs() < 1e-14);
        assert!((m.m[1][0] + k * s).abs() < 1e-14);
        assert!((m.m[1][1] - c).abs() < 1e-14);
        assert!((m.det() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn exact_step_degenerate_branches() {
        // σ₀ = 0, τ₀ = λ: pure shear
        let m = step_exact_constant(0.0, 3.0, 3.0, 0.4);
        assert_eq!(m.m, [[1.0, 0.4], [0.0, 1.0]]);
        // σ₀ = 1, τ₀ = λ: μ = 0 limit I + hG
        let h = 0.25;
        let m = step_exact_constant(1.0, 5.0, 5.0, h);
        assert!((m.m[0][0] - (1.0 + h)).abs() < 1e-12);
        assert!((m.m[0][1] - h).abs() < 1e-12);
        assert!((m.m[1][0] + h).abs() < 1e-12);
        assert!((m.m[1][1] - (1.0 - h)).abs() < 1e-12);
        assert!((m.det() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn free_sine_solution() {
        let u = propagate(
            &free(),
            1.0,
            0.0,
            std::f64::consts::PI,
            StateVector::new(0.0, 1.0),
            1e-12,
        )
        .unwrap();
        assert!(u.u.abs() < 1e-12);
        assert!((u.u1 + 1.0).abs() < 1e-12);
    }

    #[test]
    fn same_endpoint_is_identity() {
        let st = SigmaTau::delta_comb(2.0, 1.0).unwrap();
        let u0 = StateVector::new(0.3, -0.7);
        let u = propagate(&st, 4.0, 1.3, 1.3, u0, 1e-10).unwrap();
        assert_eq!(u, u0);
    }

    #[test]
    fn free_transfer_quarter_turn() {
        let m = transfer_matrix(&free(), 1.0, 0.0, std::f64::consts::FRAC_PI_2, 1e-12).unwrap();
        assert!((m.m[0][0]).abs() < 1e-12);
        assert!((m.m[0][1] - 1.0).abs() < 1e-12);
        assert!((m.m[1][0] + 1.0).abs() < 1e-12);
        assert!((m.m[1][1]).abs() < 1e-12);
    }

    #[test]
    fn piecewise_constant_matches_exact_product() {
        let st = SigmaTau::new(
            vec![PieceFunction::StepTrain {
                breakpoints: vec![0.0, 0.3, 0.7, 1.0],
                values: vec![0.5, -1.0, 2.0],
                periodic: true,
            }],
            vec![PieceFunction::StepTrain {
                breakpoints: vec![0.0, 0.5, 1.0],
                values: vec![1.0, -2.0],
                periodic: true,
            }],
            Some(1.0),
        )
        .unwrap();
        let lambda = 2.3;
        let m = transfer_matrix(&st, lambda, 0.0, 1.0, 1e-10).unwrap();
        // manual product of exact factors over the refinement 0, .3, .5, .7, 1
        let cuts = [0.0, 0.3, 0.5, 0.7, 1.0];
        let data = [(0.5, 1.0), (-1.0, 1.0), (-1.0, -2.0), (2.0, -2.0)];
        let mut expect = [[1.0, 0.0], [0.0, 1.0]];
        for (k, (s, t)) in data.iter().enumerate() {
            let step = step_exact_constant(*s, *t, lambda, cuts[k + 1] - cuts[k]);
            expect = mat_mul(&step.m, &expect);
        }
        for i in 0..2 {
            for j in 0..2 {
                assert!(
                    (m.m[i][j] - expect[i][j]).abs() < 1e-12,
                    "entry ({i},{j}): {} vs {}",
                    m.m[i][j],
                    expect[i][j]
                );
            }
        }
    }

    #[test]
    fn backward_forward_round_trip() {
        let st = SigmaTau::delta_comb(1.5, 1.0).unwrap();
        let fwd = transfer_matrix(&st, 3.0, 0.0, 2.0, 1e-11).unwrap();
        let bwd = transfer_matrix(&st, 3.0, 2.0, 0.0, 1e-11).unwrap();
        let prod = mat_mul(&bwd.m, &fwd.m);
        assert!((prod[0][0] - 1.0).abs() < 1e-9);
        assert!((prod[1][1] - 1.0).abs() < 1e-9);
        assert!(prod[0][1].abs() < 1e-9);
        assert!(prod[1][0].abs() < 1e-9);
    }

    #[test]
    fn cocycle_on_smooth_potential() {
        let st = SigmaTau::new(
            vec![PieceFunction::fourier_mode(1, 0.4, 0.0, 1.0)],
            vec![PieceFunction::fourier_mode(2, 0.0, 0.8, 1.0)],
            Some(1.0),
        )
        .unwrap();
        let (a, b, c) = (-0.4, 0.37, 1.9);
        let lam = 2.0;
        let whole = transfer_matrix(&st, lam, a, c, 1e-11).unwrap();
        let first = transfer_matrix(&st, lam, a, b, 1e-11).unwrap();
        let second = transfer_matrix(&st, lam, b, c, 1e-11).unwrap();
        let prod = second.compose(&first);
        let err: f64 = whole
            .m
            .iter()
            .flatten()
            .zip(prod.m.iter().flatten())
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt();
        assert!(err < 1e-8, "cocycle residual {err}");
        assert!((whole.det() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn delta_comb_jump_condition() {
        // u and u¹ continuous across the node; reconstructed u′ jumps by g·u
        let g = 1.0;
        let st = SigmaTau::delta_comb(g, 1.0).unwrap();
        let lam = 2.0;
        let u0 = StateVector::new(1.0, 0.3);
        let at_node = propagate(&st, lam, 0.5, 1.0, u0, 1e-12).unwrap();
        // σ side limits at the node: frac → 1 from the left, 0 from the right
        let sigma_left = -g * 1.0;
        let sigma_right = 0.0;
        let du_left = at_node.u1 + sigma_left * at_node.u;
        let du_right = at_node.u1 + sigma_right * at_node.u;
        assert!(((du_right - du_left) - g * at_node.u).abs() < 1e-12);

        // and the state itself is continuous: tiny interval crossing the node
        let before = propagate(&st, lam, 0.5, 1.0 - 1e-9, u0, 1e-12).unwrap();
        let after = propagate(&st, lam, 0.5, 1.0 + 1e-9, u0, 1e-12).unwrap();
        assert!((before.u - after.u).abs() < 1e-7);
        assert!((before.u1 - after.u1).abs() < 1e-7);
    }

    #[test]
    fn singular_sigma_keeps_unit_determinant() {
        let st = SigmaTau::new(
            vec![PieceFunction::PowerSingularity {
                center: 0.5,
                exponent: 0.4,
                coefficient: 0.8,
                period: Some(1.0),
            }],
            vec![],
            Some(1.0),
        )
        .unwrap();
        let m = transfer_matrix(&st, 1.5, 0.0, 1.0, 1e-9).unwrap();
        assert!((m.det() - 1.0).abs() < 1e-9, "det = {}", m.det());
    }

    #[test]
    fn spectral_norm_closed_form() {
        let m = [[3.0, 0.0], [4.0, -3.0]];
        // offdiagonal norm |b|/2 + √(b²/4 + a²)
        let expect = 2.0 + 13.0f64.sqrt();
        assert!((spectral_norm_2x2(&m) - expect).abs() < 1e-12);
    }
}
