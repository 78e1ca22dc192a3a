//! Convergence studies over a range of degrees, with CSV output.

use crate::ballbasis::{dim_pi, BallBasis, DiskBasis};
use crate::error::{Error, Result};
use crate::galerkin::{assemble, error_grid2, error_grid3, max_grid_error, EllipticProblem};
use crate::problems::{resolve_problem, AnyProblem};
use crate::quadrature::{ball_rule, disk_rule};
use crate::scalar::Real;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct StudyConfig {
    /// Built-in problem name or problem-config file path.
    pub problem: String,
    /// Inclusive degree range.
    pub degree_lo: usize,
    pub degree_hi: usize,
    /// Explicit quadrature order, or `None` for the per-dimension default.
    pub quad: Option<usize>,
    pub out: PathBuf,
    pub emit_condition: bool,
}

#[derive(Debug, Clone)]
pub struct StudyRow<T> {
    pub n: usize,
    pub dim_n: usize,
    pub quad_q: usize,
    pub max_error: T,
    pub condition_number: Option<T>,
    pub assemble_seconds: f64,
    pub solve_seconds: f64,
}

/// Default quadrature order for a solve of degree n.
pub fn default_quad(dim: usize, n: usize) -> usize {
    if dim == 2 {
        (n + 2).max(10)
    } else {
        n + 2
    }
}

fn run_degree2<T: Real>(
    problem: &EllipticProblem<T, 2>,
    n: usize,
    q: usize,
    grid: &[[T; 2]],
    want_cond: bool,
) -> Result<StudyRow<T>> {
    let basis = DiskBasis::new(n);
    let rule = disk_rule::<T>(q)?;
    let t0 = Instant::now();
    let mut sys = assemble(problem, &basis, &rule)?;
    let assemble_seconds = t0.elapsed().as_secs_f64();
    let t0 = Instant::now();
    sys.solve()?;
    let solve_seconds = t0.elapsed().as_secs_f64();
    Ok(StudyRow {
        n,
        dim_n: sys.size,
        quad_q: q,
        max_error: max_grid_error(problem, &sys, &basis, grid)?,
        condition_number: want_cond.then(|| sys.condition_number()),
        assemble_seconds,
        solve_seconds,
    })
}

fn run_degree3<T: Real>(
    problem: &EllipticProblem<T, 3>,
    n: usize,
    q: usize,
    grid: &[[T; 3]],
    want_cond: bool,
) -> Result<StudyRow<T>> {
    let basis = BallBasis::new(n);
    let rule = ball_rule::<T>(q)?;
    let t0 = Instant::now();
    let mut sys = assemble(problem, &basis, &rule)?;
    let assemble_seconds = t0.elapsed().as_secs_f64();
    let t0 = Instant::now();
    sys.solve()?;
    let solve_seconds = t0.elapsed().as_secs_f64();
    Ok(StudyRow {
        n,
        dim_n: sys.size,
        quad_q: q,
        max_error: max_grid_error(problem, &sys, &basis, grid)?,
        condition_number: want_cond.then(|| sys.condition_number()),
        assemble_seconds,
        solve_seconds,
    })
}

/// Run every degree of the study in order and return the rows. Does not
/// touch the filesystem (except to resolve a config-file problem).
pub fn run_study_rows<T: Real>(config: &StudyConfig) -> Result<Vec<StudyRow<T>>> {
    if config.degree_lo > config.degree_hi {
        return Err(Error::InvalidConfig(format!(
            "empty degree range {}..{}",
            config.degree_lo, config.degree_hi
        )));
    }
    if config.quad == Some(0) {
        return Err(Error::InvalidConfig("quadrature order must be >= 1".into()));
    }
    let problem = resolve_problem::<T>(&config.problem)?;
    let mut rows = Vec::with_capacity(config.degree_hi - config.degree_lo + 1);
    let tag_degree =
        |e: Error, n: usize| Error::InvalidConfig(format!("study failed at degree {n}: {e}"));
    match &problem {
        AnyProblem::D2(p) => {
            let grid = error_grid2::<T>();
            for n in config.degree_lo..=config.degree_hi {
                let q = config.quad.unwrap_or_else(|| default_quad(2, n));
                rows.push(
                    run_degree2(p, n, q, &grid, config.emit_condition)
                        .map_err(|e| tag_degree(e, n))?,
                );
            }
        }
        AnyProblem::D3(p) => {
            let grid = error_grid3::<T>();
            for n in config.degree_lo..=config.degree_hi {
                let q = config.quad.unwrap_or_else(|| default_quad(3, n));
                rows.push(
                    run_degree3(p, n, q, &grid, config.emit_condition)
                        .map_err(|e| tag_degree(e, n))?,
                );
            }
        }
    }
    for row in &rows {
        debug_assert_eq!(row.dim_n, dim_pi(row.n, problem.dim()));
    }
    Ok(rows)
}

/// Main CSV: three-significant-digit scientific errors, reproducible
/// byte-for-byte across reruns. Timing columns live only in the
/// full-precision companion (they are inherently non-deterministic).
pub fn format_csv<T: Real>(rows: &[StudyRow<T>]) -> String {
    let mut out = String::from("n,N_n,max_error,condition_number\n");
    for r in rows {
        let cond = match r.condition_number {
            Some(c) => format!("{:.4E}", c.to_f64().unwrap_or(f64::NAN)),
            None => String::new(),
        };
        let _ = writeln!(
            out,
            "{},{},{:.2E},{}",
            r.n,
            r.dim_n,
            r.max_error.to_f64().unwrap_or(f64::NAN),
            cond
        );
    }
    out
}

/// Companion CSV with full-precision values and wall-clock timings.
pub fn format_raw_csv<T: Real>(rows: &[StudyRow<T>]) -> String {
    let mut out =
        String::from("n,N_n,quad_q,max_error,condition_number,assemble_seconds,solve_seconds\n");
    for r in rows {
        let cond = match r.condition_number {
            Some(c) => format!("{:e}", c.to_f64().unwrap_or(f64::NAN)),
            None => String::new(),
        };
        let _ = writeln!(
            out,
            "{},{},{},{:e},{},{:.6},{:.6}",
            r.n,
            r.dim_n,
            r.quad_q,
            r.max_error.to_f64().unwrap_or(f64::NAN),
            cond,
            r.assemble_seconds,
            r.solve_seconds
        );
    }
    out
}

/// Sibling path with "-raw" inserted before the extension.
pub fn raw_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("study");
    let mut name = format!("{stem}-raw");
    if let Some(ext) = out.extension().and_then(|s| s.to_str()) {
        name.push('.');
        name.push_str(ext);
    }
    out.with_file_name(name)
}

/// Run the study and write both CSV files.
pub fn run_study<T: Real>(config: &StudyConfig) -> Result<Vec<StudyRow<T>>> {
    let rows = run_study_rows::<T>(config)?;
    std::fs::write(&config.out, format_csv(&rows))?;
    std::fs::write(raw_path(&config.out), format_raw_csv(&rows))?;
    Ok(rows)
}
