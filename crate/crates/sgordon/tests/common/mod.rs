//! Shared random-instance generators for the integration suites.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use sgordon::piece::PieceFunction;
use sgordon::potential::SigmaTau;
use sgordon::propagator::StateVector;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn random_step_train(rng: &mut StdRng, period: f64, amplitude: f64) -> PieceFunction {
    let n = rng.gen_range(2..=5usize);
    let mut cuts = vec![0.0];
    for _ in 0..n - 1 {
        cuts.push(rng.gen_range(0.05..0.95) * period);
    }
    cuts.push(period);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-3 * period);
    let values = (0..cuts.len() - 1)
        .map(|_| rng.gen_range(-amplitude..amplitude))
        .collect();
    PieceFunction::StepTrain {
        breakpoints: cuts,
        values,
        periodic: true,
    }
}

/// Random T-periodic potential mixing piecewise-constant, sawtooth, Fourier
/// and (optionally) power-singularity pieces.
pub fn random_periodic_instance(rng: &mut StdRng, allow_singular: bool) -> SigmaTau {
    let period = rng.gen_range(0.6..1.8);
    let mut sigma = Vec::new();
    let mut tau = Vec::new();

    match rng.gen_range(0..if allow_singular { 4 } else { 3 }) {
        0 => sigma.push(random_step_train(rng, period, 1.5)),
        1 => sigma.push(PieceFunction::sawtooth(
            rng.gen_range(-1.5..1.5),
            period,
            rng.gen_range(0.0..period),
        )),
        2 => sigma.push(PieceFunction::fourier_mode(
            rng.gen_range(1..=3),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            period,
        )),
        _ => sigma.push(PieceFunction::PowerSingularity {
            center: rng.gen_range(0.2..0.8) * period,
            exponent: rng.gen_range(0.05..0.45),
            coefficient: rng.gen_range(-1.0..1.0),
            period: Some(period),
        }),
    }

    match rng.gen_range(0..3) {
        0 => tau.push(random_step_train(rng, period, 2.0)),
        1 => tau.push(PieceFunction::constant(rng.gen_range(-2.0..2.0))),
        _ => tau.push(PieceFunction::fourier_mode(
            rng.gen_range(1..=2),
            rng.gen_range(-1.5..1.5),
            rng.gen_range(-1.5..1.5),
            period,
        )),
    }

    SigmaTau::new(sigma, tau, Some(period)).expect("generated instance is valid")
}

pub fn random_unit_state(rng: &mut StdRng) -> StateVector {
    StateVector::from_angle(rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Piecewise-constant coefficient pair (a, b) on [−T, T] for the generic
/// trace-free system [[a, 1], [b, −a]].
pub struct PiecewiseCoeffs {
    pub cuts: Vec<f64>,
    pub a_vals: Vec<f64>,
    pub b_vals: Vec<f64>,
}

impl PiecewiseCoeffs {
    pub fn random(rng: &mut StdRng, t_span: f64) -> Self {
        let n = rng.gen_range(2..=6usize);
        let mut cuts = vec![-t_span];
        for _ in 0..n - 1 {
            cuts.push(rng.gen_range(-t_span..t_span));
        }
        cuts.push(t_span);
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
        let m = cuts.len() - 1;
        PiecewiseCoeffs {
            cuts,
            a_vals: (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            b_vals: (0..m).map(|_| rng.gen_range(-2.0..2.0)).collect(),
        }
    }

    fn segment(&self, t: f64) -> usize {
        self.cuts
            .iter()
            .rposition(|c| *c <= t)
            .unwrap_or(0)
            .min(self.a_vals.len() - 1)
    }

    pub fn a(&self, t: f64) -> f64 {
        self.a_vals[self.segment(t)]
    }

    pub fn b(&self, t: f64) -> f64 {
        self.b_vals[self.segment(t)]
    }

    /// Exact solution X(t) from X(0), via exact constant-step exponentials.
    pub fn propagate_exact(&self, x0: StateVector, t: f64) -> StateVector {
        use sgordon::propagator::step_exact_constant;
        let mut x = x0;
        if t >= 0.0 {
            let mut from = 0.0;
            loop {
                let seg = self.segment(from);
                let seg_end = self.cuts[seg + 1].min(t);
                let (a, b) = (self.a_vals[seg], self.b_vals[seg]);
                // generator [[a,1],[b,−a]] realized as the σ/τ step at λ = 0
                let m = step_exact_constant(a, b + a * a, 0.0, seg_end - from);
                x = m.apply(&x);
                if seg_end >= t {
                    break;
                }
                from = seg_end;
            }
        } else {
            let mut from = 0.0;
            loop {
                // segment on the left side of `from`
                let seg = self.segment(from - 1e-12);
                let seg_start = self.cuts[seg].max(t);
                let (a, b) = (self.a_vals[seg], self.b_vals[seg]);
                let m = step_exact_constant(a, b + a * a, 0.0, seg_start - from);
                x = m.apply(&x);
                if seg_start <= t {
                    break;
                }
                from = seg_start;
            }
        }
        x
    }
}

/// Random band-limited 1-periodic closure: Σ aₙcos(2πnt) + bₙsin(2πnt).
pub fn random_mode_sum(rng: &mut StdRng, max_modes: u32) -> impl Fn(f64) -> f64 {
    let modes: Vec<(f64, f64, f64)> = (1..=rng.gen_range(1..=max_modes))
        .map(|n| {
            (
                n as f64,
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            )
        })
        .collect();
    move |t: f64| {
        modes
            .iter()
            .map(|(n, a, b)| {
                let w = std::f64::consts::TAU * n;
                a * (w * t).cos() + b * (w * t).sin()
            })
            .sum()
    }
}
