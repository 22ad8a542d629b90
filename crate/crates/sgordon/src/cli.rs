//! Command dispatch for the `sgordon` binary.
//!
//! Each command reads a validated [`RunConfig`], fans grid work out over
//! worker threads (`SGORDON_THREADS` overrides the count), and assembles a
//! deterministic [`Table`]; row order follows the input grids regardless of
//! scheduling.  The process contract: exit 0 when every certificate in the
//! report passes, 1 when any fails, 2 on configuration or numeric errors.

use crate::bounds::{
    c_q, growth_bound_lambda, offdiag_norm, unif_growth_bound, BoundCertificate,
};
use crate::config::{Command, RunConfig, SobolevFunctionSpec};
use crate::error::{Error, Result};
use crate::floquet::{band_scan, monodromy, three_periods_check};
use crate::gordon::gordon_certificate;
use crate::potential::{norm_on_interval, unif_norm_upper, NormKind};
use crate::propagator::{propagate, spectral_norm_2x2, StateVector};
use crate::report::{fmt_f64, write_table, Table};
use crate::sobolev::{
    check_dilation_bound, check_shift_bound, check_two_scale_bound, ws_norm, GridFunction,
};
use crate::spectrum::{approximant_proximity, decay_profile, eigen_scan};

/// Result of one run: the report table and whether every certificate passed.
pub struct RunOutcome {
    pub table: Table,
    pub all_pass: bool,
}

/// Worker count: `SGORDON_THREADS` or the machine parallelism.
pub fn thread_count() -> usize {
    std::env::var("SGORDON_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|n| *n >= 1)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Map `f` over `items` on worker threads; results keep input order.
pub fn parallel_map<T: Sync, R: Send>(
    items: &[T],
    f: impl Fn(&T) -> Result<R> + Sync,
) -> Result<Vec<R>> {
    let threads = thread_count().min(items.len().max(1));
    if threads <= 1 {
        return items.iter().map(&f).collect();
    }
    let mut out: Vec<Option<Result<R>>> = Vec::new();
    out.resize_with(items.len(), || None);
    let chunk = items.len().div_ceil(threads);
    std::thread::scope(|scope| {
        for (band_in, band_out) in items.chunks(chunk).zip(out.chunks_mut(chunk)) {
            scope.spawn(|| {
                for (x, slot) in band_in.iter().zip(band_out.iter_mut()) {
                    *slot = Some(f(x));
                }
            });
        }
    });
    out.into_iter().map(|r| r.expect("worker filled slot")).collect()
}

/// Execute the configured command and build its report.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    match cfg.command {
        Command::Bands => run_bands(cfg),
        Command::Monodromy => run_monodromy(cfg),
        Command::ThreePeriods => run_three_periods(cfg),
        Command::Gordon => run_gordon(cfg),
        Command::VerifyBounds => run_verify_bounds(cfg),
        Command::SobolevCheck => run_sobolev_check(cfg),
        Command::EigenScan => run_eigen_scan(cfg),
        Command::Decay => run_decay(cfg),
        Command::Norms => run_norms(cfg),
    }
}

/// Execute and write the report to the configured target.
pub fn run_and_write(cfg: &RunConfig) -> Result<bool> {
    let outcome = run(cfg)?;
    let path = cfg.out_path.as_ref().map(std::path::Path::new);
    write_table(&outcome.table, cfg.format, path)?;
    Ok(outcome.all_pass)
}

fn initial_state(cfg: &RunConfig) -> Result<StateVector> {
    let u0 = match cfg.params.u0 {
        Some([u, u1]) => StateVector::new(u, u1),
        None => StateVector::new(1.0, 0.0),
    };
    if u0.norm() == 0.0 {
        return Err(Error::ZeroInitialVector);
    }
    Ok(u0)
}

fn run_bands(cfg: &RunConfig) -> Result<RunOutcome> {
    let st = cfg.require_sigma_tau()?;
    let grid = cfg.params.lambda_grid()?;
    let tol = cfg.params.tol;
    let points = parallel_map(&grid, |l| {
        Ok(band_scan(&st, std::slice::from_ref(l), tol)?.remove(0))
    })?;
    let mut table = Table::new(&["lambda", "discriminant", "in_band"]);
    for p in points {
        table.push(vec![
            fmt_f64(p.lambda),
            fmt_f64(p.discriminant),
            p.in_band.to_string(),
        ]);
    }
    Ok(RunOutcome { table, all_pass: true })
}

fn run_monodromy(cfg: &RunConfig) -> Result<RunOutcome> {
    let st = cfg.require_sigma_tau()?;
    let grid = cfg.params.lambda_grid()?;
    let tol = cfg.params.tol;
    let ms = parallel_map(&grid, |l| monodromy(&st, *l, tol))?;
    let mut table = Table::new(&["lambda", "m00", "m01", "m10", "m11", "trace", "det"]);
    for m in ms {
        table.push(vec![
            fmt_f64(m.lambda),
            fmt_f64(m.m[0][0]),
            fmt_f64(m.m[0][1]),
            fmt_f64(m.m[1][0]),
            fmt_f64(m.m[1][1]),
            fmt_f64(m.trace()),
            fmt_f64(m.det()),
        ]);
    }
    Ok(RunOutcome { table, all_pass: true })
}

fn run_three_periods(cfg: &RunConfig) -> Result<RunOutcome> {
    let st = cfg.require_sigma_tau()?;
    let grid = cfg.params.lambda_grid()?;
    let u0 = initial_state(cfg)?;
    let tol = cfg.params.tol;
    let checks = parallel_map(&grid, |l| three_periods_check(&st, *l, u0, tol))?;
    let mut table =
        Table::new(&["lambda", "norm_minus_t", "norm_t", "norm_2t", "ratio", "pass"]);
    let mut all = true;
    for (l, c) in grid.iter().zip(checks) {
        all &= c.pass;
        table.push(vec![
            fmt_f64(*l),
            fmt_f64(c.norm_minus_t),
            fmt_f64(c.norm_t),
            fmt_f64(c.norm_2t),
            fmt_f64(c.ratio),
            c.pass.to_string(),
        ]);
    }
    Ok(RunOutcome { table, all_pass: all })
}

fn run_decay(cfg: &RunConfig) -> Result<RunOutcome> {
    let st = cfg.require_sigma_tau()?;
    let lambda = cfg.params.require("lambda")?;
    let t_max = cfg.params.require("t_max")?;
    let u0 = initial_state(cfg)?;
    let profile = decay_profile(&st, lambda, u0, t_max, cfg.params.n_samples)?;
    let mut table = Table::new(&["t", "state_norm_sq"]);
    for (t, v) in profile {
        table.push(vec![fmt_f64(t), fmt_f64(v)]);
    }
    Ok(RunOutcome { table, all_pass: true })
}

fn run_eigen_scan(cfg: &RunConfig) -> Result<RunOutcome> {
    let st = cfg.require_sigma_tau()?;
    let grid = cfg.params.lambda_grid()?;
    let angles = cfg.params.angles;
    let tol = cfg.params.tol;
    // grid points are independent: fan out in chunks, then merge in order
    let chunks: Vec<Vec<f64>> = grid
        .chunks(grid.len().div_ceil(thread_count()).max(1))
        .map(|c| c.to_vec())
        .collect();
    let parts = parallel_map(&chunks, |sub| eigen_scan(&st, sub, angles, tol))?;
    let mut table = Table::new(&["lambda", "min_max_ratio", "decaying", "pass"]);
    let mut all = true;
    let threshold = 0.5 - tol;
    for part in parts {
        for e in part.entries {
            let pass = e.min_max_ratio >= threshold && !e.decaying;
            all &= pass;
            table.push(vec![
                fmt_f64(e.lambda),
                fmt_f64(e.min_max_ratio),
                e.decaying.to_string(),
                pass.to_string(),
            ]);
        }
    }
    Ok(RunOutcome { table, all_pass: all })
}

fn run_norms(cfg: &RunConfig) -> Result<RunOutcome> {
    let st = cfg.require_sigma_tau()?;
    let mut table = Table::new(&["quantity", "value"]);
    let (ssq, t1) = if st.period.is_some() {
        st.unif_norms()?
    } else {
        (
            unif_norm_upper(&st.sigma, NormKind::L2Sq)?,
            unif_norm_upper(&st.tau, NormKind::L1)?,
        )
    };
    table.push(vec!["sigma_l2sq_unif".into(), fmt_f64(ssq)]);
    table.push(vec!["tau_l1_unif".into(), fmt_f64(t1)]);
    if let Some([a, b]) = cfg.params.interval {
        let s = if st.sigma.is_empty() {
            0.0
        } else {
            norm_on_interval(&st.sigma, a, b, NormKind::L2Sq, cfg.params.tol)?
        };
        let t = if st.tau.is_empty() {
            0.0
        } else {
            norm_on_interval(&st.tau, a, b, NormKind::L1, cfg.params.tol)?
        };
        table.push(vec!["sigma_l2sq_interval".into(), fmt_f64(s)]);
        table.push(vec!["tau_l1_interval".into(), fmt_f64(t)]);
    }
    if let Some(gamma) = cfg.params.gamma {
        table.push(vec!["c_q".into(), fmt_f64(c_q(gamma, ssq, t1))]);
    }
    Ok(RunOutcome { table, all_pass: true })
}

fn run_gordon(cfg: &RunConfig) -> Result<RunOutcome> {
    let qp = cfg.require_quasiperiodic()?;
    let c = match cfg.params.c {
        Some(c) => c,
        None => {
            // default weight: the threshold C_q of the potential itself
            let gamma = cfg.params.require("gamma").map_err(|_| {
                Error::Config(
                    "gordon needs params.c or params.gamma (for the default C_q weight)".into(),
                )
            })?;
            let q = qp.to_sigma_tau()?;
            let ssq = unif_norm_upper(&q.sigma, NormKind::L2Sq)?;
            let t1 = unif_norm_upper(&q.tau, NormKind::L1)?;
            c_q(gamma, ssq, t1)
        }
    };
    let report = gordon_certificate(qp, cfg.params.m_max, c)?;
    let mut table = Table::new(&[
        "m",
        "t_m",
        "alpha_m",
        "drift",
        "err_sigma",
        "err_tau",
        "log_weighted",
        "weighted",
        "slope",
    ]);
    for e in &report.entries {
        table.push(vec![
            e.m.to_string(),
            fmt_f64(e.t_m),
            fmt_f64(e.alpha_m),
            fmt_f64(e.drift),
            fmt_f64(e.err_sigma),
            fmt_f64(e.err_tau),
            fmt_f64(e.log_weighted),
            fmt_f64(e.weighted),
            fmt_f64(e.slope),
        ]);
    }
    Ok(RunOutcome { table, all_pass: report.weighted_strictly_decreasing })
}

fn run_verify_bounds(cfg: &RunConfig) -> Result<RunOutcome> {
    let st = cfg.require_sigma_tau()?;
    let grid = cfg.params.lambda_grid()?;
    let tol = cfg.params.tol;
    let u0 = initial_state(cfg)?;
    let t_probe = cfg.params.t_max.unwrap_or(2.0);
    let (ssq, t1) = if st.period.is_some() {
        st.unif_norms()?
    } else {
        (
            unif_norm_upper(&st.sigma, NormKind::L2Sq)?,
            unif_norm_upper(&st.tau, NormKind::L1)?,
        )
    };

    let mut certs: Vec<BoundCertificate> = Vec::new();

    // closed-form matrix norm against the stable 2×2 singular value
    for (a, b) in [(0.0, 2.0), (3.0, 4.0), (-1.3, 0.7), (0.2, -5.0)] {
        let lhs = (offdiag_norm(a, b) - spectral_norm_2x2(&[[a, 0.0], [b, -a]])).abs();
        certs.push(BoundCertificate::check(
            format!("offdiag-norm-vs-svd a={a} b={b}"),
            lhs,
            1e-12,
            0.0,
        ));
    }

    let lam_certs = parallel_map(&grid, |&lambda| {
        let mut local = Vec::new();
        for t in [-t_probe, t_probe] {
            let u = propagate(&st, lambda, 0.0, t, u0, tol.min(1e-10))?;
            let bound = growth_bound_lambda(&st, lambda, t, tol.min(1e-10))? * u0.norm();
            local.push(BoundCertificate::check(
                format!("growth-bound lambda={lambda} t={t}"),
                u.norm(),
                bound,
                1e-9 * bound,
            ));
            let global = unif_growth_bound(ssq, t1, lambda, t)? * u0.norm();
            local.push(BoundCertificate::check(
                format!("uniform-growth-dominates lambda={lambda} t={t}"),
                bound,
                global,
                1e-9 * global,
            ));
        }
        if st.period.is_some() {
            let c = three_periods_check(&st, lambda, u0, tol)?;
            local.push(BoundCertificate::check(
                format!("three-periods lambda={lambda}"),
                0.5,
                c.ratio,
                tol,
            ));
        }
        Ok(local)
    })?;
    certs.extend(lam_certs.into_iter().flatten());

    // twin-solution proximity against the Gronwall bound
    if let Some(qp) = &cfg.quasiperiodic {
        let gamma = cfg.params.require("gamma")?;
        let m = cfg.params.m.unwrap_or(1);
        let lambda = *grid.first().expect("nonempty grid");
        let prox = approximant_proximity(qp, m, lambda, gamma, u0, tol.min(1e-10))?;
        for p in &prox.points {
            certs.push(BoundCertificate::check(
                format!("gronwall-proximity m={} t={}", prox.m, p.t),
                p.measured_gap,
                p.bound,
                1e-9 * p.bound.max(1e-12),
            ));
        }
    }

    let mut table = Table::new(&["context", "lhs", "rhs", "margin", "pass"]);
    let mut all = true;
    for c in &certs {
        all &= c.pass;
        table.push(vec![
            c.context.clone(),
            fmt_f64(c.lhs),
            fmt_f64(c.rhs),
            fmt_f64(c.margin),
            c.pass.to_string(),
        ]);
    }
    Ok(RunOutcome { table, all_pass: all })
}

fn sobolev_test_function(spec: Option<&SobolevFunctionSpec>, a: f64, b: f64) -> Result<GridFunction> {
    let default_modes;
    let (modes, samples) = match spec {
        Some(s) => (&s.modes, s.samples),
        None => {
            default_modes = vec![crate::config::ModeSpec {
                harmonic: 1,
                cos_coeff: 0.0,
                sin_coeff: 1.0,
            }];
            (&default_modes, 257usize)
        }
    };
    let n = ((b - a) * (samples.max(64) as f64 - 1.0)) as usize + 1;
    GridFunction::from_fn(a, b, n.max(64), |t| {
        modes
            .iter()
            .map(|m| {
                let w = std::f64::consts::TAU * m.harmonic as f64;
                m.cos_coeff * (w * t).cos() + m.sin_coeff * (w * t).sin()
            })
            .sum()
    })
}

fn run_sobolev_check(cfg: &RunConfig) -> Result<RunOutcome> {
    let spec = cfg.sobolev_function.as_ref();
    let mut table = Table::new(&["context", "lhs", "rhs", "constant_used", "pass"]);
    let mut all = true;
    let push = |table: &mut Table, name: String, lhs: f64, rhs: f64, c: f64, pass: bool| {
        table.push(vec![name, fmt_f64(lhs), fmt_f64(rhs), fmt_f64(c), pass.to_string()]);
        pass
    };

    // shift bound on three periods of the mode sum
    let eps = cfg.params.eps.unwrap_or(0.1);
    let f3 = sobolev_test_function(spec, 0.0, 3.0)?;
    let r = check_shift_bound(&f3, 2.0, eps)?;
    all &= push(&mut table, format!("shift-bound eps={eps}"), r.lhs, r.rhs, r.constant_used, r.pass);

    // dilation bound on a tapered copy
    let a_dil = cfg.params.dilate_a.unwrap_or(1.05);
    let b_dil = cfg.params.dilate_b.unwrap_or(3.0);
    let spec_modes = sobolev_test_function(spec, 0.0, 4.0)?;
    let tapered = GridFunction::from_fn(0.0, 4.0, spec_modes.samples.len(), |t| {
        spec_modes.eval(t) * crate::potential::bump_phi((t - 2.0) / 2.0)
    })?;
    let r = check_dilation_bound(&tapered, a_dil, b_dil)?;
    all &= push(
        &mut table,
        format!("dilation-bound a={a_dil} b={b_dil}"),
        r.lhs,
        r.rhs,
        r.constant_used,
        r.pass,
    );

    // two-scale bound on the 1-periodic mode sum
    let alpha = cfg.params.alpha.unwrap_or(0.5);
    let beta = cfg.params.beta.unwrap_or(0.55);
    let theta = cfg.params.theta.unwrap_or(0.0);
    let t_range = cfg.params.t_range.unwrap_or(4.0);
    let s = cfg.params.s.unwrap_or(1.0);
    let f1 = sobolev_test_function(spec, 0.0, 1.0)?;
    let r = check_two_scale_bound(&f1, alpha, beta, theta, t_range, s)?;
    all &= push(
        &mut table,
        format!("two-scale-bound alpha={alpha} beta={beta} s={s}"),
        r.lhs,
        r.rhs,
        r.constant_used,
        r.pass,
    );

    // spectral norm interpolation at s = 1/2
    let n0 = ws_norm(&f3, 0.0)?;
    let n1 = ws_norm(&f3, 1.0)?;
    let nh = ws_norm(&f3, 0.5)?;
    let rhs = n0.sqrt() * n1.sqrt() * (1.0 + 1e-6);
    all &= push(&mut table, "ws-norm-interpolation s=0.5".into(), nh, rhs, 1.0, nh <= rhs);

    Ok(RunOutcome { table, all_pass: all })
}
