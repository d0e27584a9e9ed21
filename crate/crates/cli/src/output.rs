//! CSV writers. Comma-separated, LF line endings, header row first, numbers
//! at full shortest-round-trip precision so reruns are byte-identical.

use std::io::Write;
use std::path::Path;

use torsolve_core::{FieldTable, SweepResult};

pub const FIELDS_HEADER: &str =
    "x,y,phi,w,gamma_xz,gamma_yz,tau_xz,tau_yz,sigma_eq,eps_eq,E_eff,plastic";

pub fn write_fields(path: &Path, table: &FieldTable) -> std::io::Result<()> {
    let mut out = String::new();
    out.push_str(FIELDS_HEADER);
    out.push('\n');
    for r in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.x,
            r.y,
            r.phi,
            r.w,
            r.gamma_xz,
            r.gamma_yz,
            r.tau_xz,
            r.tau_yz,
            r.sigma_eq,
            r.eps_eq,
            r.e_eff,
            u8::from(r.plastic)
        ));
    }
    write_atomic(path, out.as_bytes())
}

pub struct SummaryRow {
    pub theta: f64,
    pub theta_ratio: f64,
    pub m_t: f64,
    pub m_t_ratio: f64,
    pub plastic_fraction: f64,
    pub newton_iters: usize,
    pub residual_norm: f64,
}

pub fn write_summary(path: &Path, row: &SummaryRow) -> std::io::Result<()> {
    let mut out = String::from("theta,theta_ratio,Mt,Mt_ratio,plastic_fraction,newton_iters,residual_norm\n");
    out.push_str(&format!(
        "{},{},{},{},{},{},{}\n",
        row.theta,
        row.theta_ratio,
        row.m_t,
        row.m_t_ratio,
        row.plastic_fraction,
        row.newton_iters,
        row.residual_norm
    ));
    write_atomic(path, out.as_bytes())
}

pub fn write_curve(path: &Path, sweep: &SweepResult) -> std::io::Result<()> {
    let mut out = String::from("theta,theta_ratio,Mt,Mt_ratio,plastic_fraction\n");
    for s in &sweep.steps {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            s.theta, s.theta_ratio, s.m_t, s.m_t_ratio, s.plastic_fraction
        ));
    }
    write_atomic(path, out.as_bytes())
}

pub struct ConvergenceRow {
    pub n: usize,
    pub m: usize,
    pub theta_ratio: f64,
    pub m_t_ratio: f64,
}

pub fn write_convergence(path: &Path, rows: &[ConvergenceRow]) -> std::io::Result<()> {
    let mut out = String::from("N,M,theta_ratio,Mt_ratio\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.n, r.m, r.theta_ratio, r.m_t_ratio
        ));
    }
    write_atomic(path, out.as_bytes())
}

/// Write through a temp file then rename, so failed runs leave no partials.
fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}
