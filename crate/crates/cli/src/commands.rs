//! The four batch commands. Each returns the process exit code.

use std::path::{Path, PathBuf};

use torsolve_core::{
    analytic_references, derive_fields, direct_moment, plasticity::ThetaSchedule,
    torsional_moment, PlasticState, TorsionError, TorsionModel,
};

use crate::config::RunConfig;
use crate::output::{self, ConvergenceRow, SummaryRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_PARTIAL: i32 = 4;

fn exit_code_for(err: &TorsionError) -> i32 {
    match err {
        TorsionError::InvalidShape(_)
        | TorsionError::DegenerateEdge { .. }
        | TorsionError::InsetTooLarge { .. }
        | TorsionError::CollocationCount { .. }
        | TorsionError::MaterialOutOfRange(_)
        | TorsionError::OutsideGradedStrip { .. }
        | TorsionError::InvalidSchedule
        | TorsionError::UnsupportedReferenceShape => EXIT_CONFIG,
        _ => EXIT_SOLVER,
    }
}

fn fail(err: &dyn std::fmt::Display, code: i32) -> i32 {
    eprintln!("torsolve: {err}");
    code
}

fn build_model(config: &RunConfig) -> Result<TorsionModel, (String, i32)> {
    let shape = config.shape().map_err(|e| (e.to_string(), EXIT_CONFIG))?;
    let material = config
        .material(&shape)
        .map_err(|e| (e.to_string(), EXIT_CONFIG))?;
    let options = config
        .model_options()
        .map_err(|e| (e.to_string(), EXIT_CONFIG))?;
    TorsionModel::new(shape, material, options)
        .map_err(|e| (e.to_string(), exit_code_for(&e)))
}

fn ensure_dir(dir: &Path) -> Result<(), (String, i32)> {
    std::fs::create_dir_all(dir)
        .map_err(|e| (format!("cannot create {}: {e}", dir.display()), EXIT_SOLVER))
}

/// Cross-check the two torsional moment routes; disagreement beyond 1% is a
/// flagged run.
fn check_moment_agreement(model: &TorsionModel, state: &PlasticState, m_t: f64) {
    match direct_moment(model, state) {
        Ok(direct) => {
            let rel = (direct - m_t).abs() / m_t.abs().max(f64::MIN_POSITIVE);
            if rel > 0.01 {
                log::warn!(
                    "moment routes disagree by {:.2}% (fitted {m_t}, quadrature {direct}); \
                     the expansion may be ill-conditioned",
                    rel * 100.0
                );
            }
        }
        Err(e) => log::warn!("moment cross-check unavailable: {e}"),
    }
}

pub fn cmd_solve(
    config: &RunConfig,
    theta_ratio: Option<f64>,
    theta_abs: Option<f64>,
    out_dir: &Path,
) -> i32 {
    let model = match build_model(config) {
        Ok(m) => m,
        Err((msg, code)) => return fail(&msg, code),
    };
    let newton = match config.newton_options() {
        Ok(n) => n,
        Err(e) => return fail(&e, EXIT_CONFIG),
    };
    let first_yield = match model.first_yield_twist() {
        Ok(f) => f,
        Err(e) => return fail(&e, exit_code_for(&e)),
    };
    let theta = match (theta_abs, theta_ratio) {
        (Some(t), _) => t,
        (None, Some(r)) => r * first_yield.theta_el,
        (None, None) => return fail(&"solve needs --theta-ratio or --theta", EXIT_CONFIG),
    };
    if theta <= 0.0 {
        return fail(&"twist must be positive", EXIT_CONFIG);
    }
    let state = match model.solve_at_theta(theta, None, &newton) {
        Ok(s) => s,
        Err(e) => return fail(&e, exit_code_for(&e)),
    };
    let m_el_state = match model.solve_at_theta(first_yield.theta_el, None, &newton) {
        Ok(s) => s,
        Err(e) => return fail(&e, exit_code_for(&e)),
    };
    let (m_t, m_el) = match (
        torsional_moment(&model, &state),
        torsional_moment(&model, &m_el_state),
    ) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return fail(&e, exit_code_for(&e)),
    };
    check_moment_agreement(&model, &state, m_t);
    let table = match derive_fields(&model, &state, config.output.field_grid) {
        Ok(t) => t,
        Err(e) => return fail(&e, exit_code_for(&e)),
    };
    if let Err((msg, code)) = ensure_dir(out_dir) {
        return fail(&msg, code);
    }
    let summary = SummaryRow {
        theta,
        theta_ratio: theta / first_yield.theta_el,
        m_t,
        m_t_ratio: m_t / m_el,
        plastic_fraction: state.plastic_fraction(),
        newton_iters: state.newton_iters,
        residual_norm: state.residual_norm,
    };
    if let Err(e) = output::write_fields(&out_dir.join("fields.csv"), &table)
        .and_then(|_| output::write_summary(&out_dir.join("summary.csv"), &summary))
    {
        return fail(&e, EXIT_SOLVER);
    }
    println!(
        "theta = {theta} (ratio {}), Mt = {m_t} (ratio {}), plastic fraction {}",
        summary.theta_ratio, summary.m_t_ratio, summary.plastic_fraction
    );
    EXIT_OK
}

pub fn cmd_sweep(config: &RunConfig, out_dir: &Path) -> i32 {
    let model = match build_model(config) {
        Ok(m) => m,
        Err((msg, code)) => return fail(&msg, code),
    };
    let newton = match config.newton_options() {
        Ok(n) => n,
        Err(e) => return fail(&e, EXIT_CONFIG),
    };
    let schedule = match config.schedule() {
        Ok(s) => s,
        Err(e) => return fail(&e, EXIT_CONFIG),
    };
    let sweep = match model.sweep(&schedule, &newton) {
        Ok(s) => s,
        Err(e) => return fail(&e, exit_code_for(&e)),
    };
    if let Err((msg, code)) = ensure_dir(out_dir) {
        return fail(&msg, code);
    }
    if let Err(e) = output::write_curve(&out_dir.join("curve.csv"), &sweep) {
        return fail(&e, EXIT_SOLVER);
    }
    let steps_dir = out_dir.join("fields_at_steps");
    if let Err((msg, code)) = ensure_dir(&steps_dir) {
        return fail(&msg, code);
    }
    for (i, step) in sweep.steps.iter().enumerate() {
        check_moment_agreement(&model, &step.state, step.m_t);
        let table = match derive_fields(&model, &step.state, config.output.field_grid) {
            Ok(t) => t,
            Err(e) => return fail(&e, exit_code_for(&e)),
        };
        let name = format!("step_{:03}.csv", i + 1);
        if let Err(e) = output::write_fields(&steps_dir.join(name), &table) {
            return fail(&e, EXIT_SOLVER);
        }
    }
    match &sweep.failure {
        Some((theta, msg)) => {
            eprintln!(
                "torsolve: sweep truncated at theta = {theta}: {msg}; \
                 {} completed steps written",
                sweep.steps.len()
            );
            EXIT_PARTIAL
        }
        None => {
            println!(
                "swept {} steps to theta/theta_el = {}",
                sweep.steps.len(),
                sweep.steps.last().map(|s| s.theta_ratio).unwrap_or(0.0)
            );
            EXIT_OK
        }
    }
}

pub fn cmd_convergence(config: &RunConfig, out_dir: &Path) -> i32 {
    let conv = match &config.convergence {
        Some(c) => c,
        None => return fail(&"convergence requires a [convergence] section", EXIT_CONFIG),
    };
    if conv.grid.len() < 2 {
        return fail(&"[convergence] grid needs at least 2 entries", EXIT_CONFIG);
    }
    let newton = match config.newton_options() {
        Ok(n) => n,
        Err(e) => return fail(&e, EXIT_CONFIG),
    };
    let mut rows = Vec::new();
    let mut any_failed = false;
    for &[n, m] in &conv.grid {
        let result = (|| -> Result<f64, String> {
            let shape = config.shape().map_err(|e| e.to_string())?;
            let material = config.material(&shape).map_err(|e| e.to_string())?;
            let mut options = config.model_options().map_err(|e| e.to_string())?;
            options.n_elements = n;
            options.m_target = m;
            let model =
                TorsionModel::new(shape, material, options).map_err(|e| e.to_string())?;
            // short warm-started path up to the requested ratio
            let mut ratios: Vec<f64> = [0.5, 0.45 * conv.theta_ratio, 0.75 * conv.theta_ratio]
                .into_iter()
                .filter(|r| *r > 0.5 && *r < conv.theta_ratio)
                .collect();
            ratios.insert(0, 0.5);
            ratios.push(conv.theta_ratio);
            ratios.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
            let sweep = model
                .sweep(&ThetaSchedule::Ratios(ratios), &newton)
                .map_err(|e| e.to_string())?;
            if let Some((theta, msg)) = &sweep.failure {
                return Err(format!("failed at theta = {theta}: {msg}"));
            }
            Ok(sweep.steps.last().expect("nonempty sweep").m_t_ratio)
        })();
        match result {
            Ok(ratio) => rows.push(ConvergenceRow {
                n,
                m,
                theta_ratio: conv.theta_ratio,
                m_t_ratio: ratio,
            }),
            Err(msg) => {
                eprintln!("torsolve: cell N={n} M={m} failed: {msg}");
                any_failed = true;
                rows.push(ConvergenceRow {
                    n,
                    m,
                    theta_ratio: conv.theta_ratio,
                    m_t_ratio: f64::NAN,
                });
            }
        }
    }
    if let Err((msg, code)) = ensure_dir(out_dir) {
        return fail(&msg, code);
    }
    if let Err(e) = output::write_convergence(&out_dir.join("convergence.csv"), &rows) {
        return fail(&e, EXIT_SOLVER);
    }
    if any_failed {
        EXIT_PARTIAL
    } else {
        EXIT_OK
    }
}

pub fn cmd_reference(config: &RunConfig) -> i32 {
    let shape = match config.shape() {
        Ok(s) => s,
        Err(e) => return fail(&e, EXIT_CONFIG),
    };
    let sigma_y = match config.material.mode.as_str() {
        "homogeneous" => config.material.sigma_y,
        _ => config.material.sigma_ym,
    };
    let sigma_y = match sigma_y {
        Some(s) => s,
        None => return fail(&"reference needs sigma_y (or sigma_ym)", EXIT_CONFIG),
    };
    match analytic_references(&shape, sigma_y) {
        Ok(r) => {
            println!("quantity,value");
            println!("M_el,{}", r.m_el);
            println!("M_pl,{}", r.m_pl);
            EXIT_OK
        }
        Err(e) => fail(&e, exit_code_for(&e)),
    }
}

pub fn resolve_out_dir(config: &RunConfig, flag: Option<PathBuf>) -> PathBuf {
    flag.unwrap_or_else(|| PathBuf::from(&config.output.dir))
}
