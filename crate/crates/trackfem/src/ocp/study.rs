//! Multi-level convergence studies and the regularization sweep.

use crate::error::{Error, Result};
use crate::linop::{dot, LinOp};
use crate::ocp::{boundary_l2_error, solve_ocp, OcpConfig, RhoRule, SolverPath};
use crate::quadrature::gauss_rule;
use crate::tensor::h1_operator;
use rayon::prelude::*;

/// One row of a convergence table.
#[derive(Debug, Clone)]
pub struct LevelRow {
    pub level: usize,
    pub dofs: usize,
    pub h: f64,
    pub boundary_error: Option<f64>,
    /// `log2(error_{l-1} / error_l)`; undefined on the first row.
    pub eoc: Option<f64>,
    pub iters_full_pcg: Option<usize>,
    pub iters_scg: Option<usize>,
    pub iters_pscg: Option<usize>,
    /// Human-readable note if some path failed on this level.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct ConvergenceTable {
    pub rows: Vec<LevelRow>,
}

/// Runs the configured problem over a range of levels and all requested
/// solver paths. A solver failure is recorded in its row and the study
/// continues. With `jobs > 1` the levels are solved in parallel; results
/// are assembled in level order either way.
pub fn run_convergence_study(
    base: &OcpConfig,
    levels: &[usize],
    paths: &[SolverPath],
    jobs: usize,
) -> Result<ConvergenceTable> {
    if levels.is_empty() {
        return Err(Error::InvalidConfig("empty level list".into()));
    }
    if levels.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidConfig(
            "levels must be strictly increasing".into(),
        ));
    }
    let solve_level = |&level: &usize| -> LevelRow { run_one_level(base, level, paths) };
    let mut rows: Vec<LevelRow> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
        pool.install(|| levels.par_iter().map(solve_level).collect())
    } else {
        levels.iter().map(solve_level).collect()
    };
    for i in 1..rows.len() {
        if let (Some(prev), Some(cur)) = (rows[i - 1].boundary_error, rows[i].boundary_error) {
            if prev > 0.0 && cur > 0.0 {
                rows[i].eoc = Some((prev / cur).log2());
            }
        }
    }
    Ok(ConvergenceTable { rows })
}

fn run_one_level(base: &OcpConfig, level: usize, paths: &[SolverPath]) -> LevelRow {
    let h = 1.0 / (1usize << (level + 1)) as f64;
    let m = (1usize << (level + 1)) - 1;
    let mut row = LevelRow {
        level,
        dofs: m.pow(base.d as u32),
        h,
        boundary_error: None,
        eoc: None,
        iters_full_pcg: None,
        iters_scg: None,
        iters_pscg: None,
        failure: None,
    };
    for &path in paths {
        let mut cfg = base.clone();
        cfg.level = level;
        cfg.path = path;
        match solve_ocp(&cfg) {
            Ok(sol) => {
                let iters = sol.report.iterations;
                match path {
                    SolverPath::FullPcg => row.iters_full_pcg = Some(iters),
                    SolverPath::SchurCg => row.iters_scg = Some(iters),
                    SolverPath::SchurPcg => row.iters_pscg = Some(iters),
                }
                if row.boundary_error.is_none() {
                    if let (Ok(space), Ok(quad)) = (cfg.space(), gauss_rule(cfg.quad_order)) {
                        row.boundary_error =
                            Some(boundary_l2_error(&space, &sol.coeffs, &cfg.target, &quad));
                    }
                }
            }
            Err(e) => {
                let note = format!("{}: {e}", path.label());
                row.failure = Some(match row.failure.take() {
                    Some(prev) => format!("{prev}; {note}"),
                    None => note,
                });
            }
        }
    }
    row
}

/// One point of a regularization sweep.
#[derive(Debug, Clone)]
pub struct RhoRecord {
    pub rho: f64,
    pub boundary_error: f64,
    pub h1_norm: f64,
}

/// Solves the problem at a fixed level for a descending ladder of
/// regularization weights, recording the boundary error and the discrete
/// H1 norm of each state.
pub fn regularization_sweep(base: &OcpConfig, rhos: &[f64]) -> Result<Vec<RhoRecord>> {
    if rhos.is_empty() {
        return Err(Error::InvalidConfig("empty rho list".into()));
    }
    if rhos.iter().any(|&r| r <= 0.0) {
        return Err(Error::InvalidConfig(
            "regularization weights must be positive".into(),
        ));
    }
    if rhos.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidConfig(
            "regularization weights must be sorted descending".into(),
        ));
    }
    let space = base.space()?;
    let quad = gauss_rule(base.quad_order)?;
    let h1 = h1_operator(&space);
    let mut records = Vec::with_capacity(rhos.len());
    for &rho in rhos {
        let mut cfg = base.clone();
        cfg.rho_rule = RhoRule::Const(rho);
        let sol = solve_ocp(&cfg)?;
        let boundary_error = boundary_l2_error(&space, &sol.coeffs, &cfg.target, &quad);
        let h1_norm = dot(&sol.coeffs, &h1.apply(&sol.coeffs)?).max(0.0).sqrt();
        records.push(RhoRecord {
            rho,
            boundary_error,
            h1_norm,
        });
    }
    Ok(records)
}

/// Least-squares slope of `ln(error)` against `ln(rho)` over the
/// pre-saturation window: points whose error sits well above the small-rho
/// plateau (8x the sweep minimum) and well below the large-rho saturation
/// at the target norm (at most a quarter of it). Returns the slope and the
/// number of points used, or `None` if fewer than three points qualify.
pub fn fit_presaturation_slope(records: &[RhoRecord], target_norm: f64) -> Option<(f64, usize)> {
    let min_err = records
        .iter()
        .map(|r| r.boundary_error)
        .fold(f64::INFINITY, f64::min);
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.boundary_error >= 8.0 * min_err && r.boundary_error <= 0.25 * target_norm)
        .map(|r| (r.rho.ln(), r.boundary_error.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    Some((slope, pts.len()))
}
