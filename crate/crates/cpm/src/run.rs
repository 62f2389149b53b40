//! Batch drivers: convergence studies, multigrid studies, matrix audits.
//!
//! Each driver returns typed rows; the CSV renderers are separate so tests
//! can assert byte determinism.  Floats are written in scientific notation
//! with six significant digits.

use crate::band::build_band;
use crate::error::{Error, Result};
use crate::linalg::direct_solve;
use crate::multigrid::{build_hierarchy, MgParams};
use crate::operators::{
    assemble_system, build_extension, build_laplacian, system_m_part, verify_m_matrix,
    SystemParams,
};
use crate::problems::{make_problem, surface_error, Problem};
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Direct,
    VCycle,
}

/// A fully deterministic run description (no seeds anywhere).
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub problem: String,
    /// Grid spacings, finest last; convergence runs require exact halvings.
    pub dx_list: Vec<f64>,
    pub solver: SolverKind,
    pub system: SystemParams,
    pub mg: MgParams,
    pub coarsest_n: usize,
    /// Override for the bean control polygon.
    pub bean_points: Option<Vec<[f64; 2]>>,
    /// Directory for band CSV dumps (audit runs).
    pub band_dump: Option<PathBuf>,
    /// Directory for MatrixMarket exports (audit runs).
    pub matrix_out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(problem: &str, dx_list: Vec<f64>) -> Self {
        Self {
            problem: problem.to_string(),
            dx_list,
            solver: SolverKind::Direct,
            system: SystemParams::default(),
            mg: MgParams::default(),
            coarsest_n: 5,
            bean_points: None,
            band_dump: None,
            matrix_out: None,
        }
    }

    fn problem(&self) -> Result<Problem> {
        make_problem(&self.problem, self.system.c, self.bean_points.clone())
    }

    fn check_halvings(&self) -> Result<()> {
        for pair in self.dx_list.windows(2) {
            if (pair[0] - 2.0 * pair[1]).abs() > 1e-9 * pair[0] {
                return Err(Error::InvalidConfig(format!(
                    "dx ladder must halve exactly: {} then {}",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(())
    }
}

fn fmt_float(v: f64) -> String {
    format!("{v:.5e}")
}

/// Solve one grid at `dx` and return (dofs, relative surface error).
fn solve_once(config: &RunConfig, problem: &Problem, dx: f64) -> Result<(usize, f64)> {
    let single_level = (dx * config.coarsest_n as f64 - 1.0).abs() <= 1e-9;
    if config.solver == SolverKind::Direct || single_level {
        // A one-level "ladder" degenerates to the coarsest direct solve.
        let grid = build_band(&problem.surface, dx, config.system.max_degree(), None)?;
        let diffusivity = problem.diffusivity_vector(&grid);
        let a = assemble_system(&grid, &config.system, diffusivity.as_deref())?;
        let f = problem.rhs_vector(&grid);
        let u = direct_solve(&a, &f)?;
        let err = surface_error(&grid, &u, problem, problem.default_error_samples())?;
        Ok((grid.n(), err))
    } else {
        let diffusivity_fn =
            |r: &crate::geometry::CpResult| problem.diffusivity(r.cp, r.param).expect("a(cp)");
        let h = build_hierarchy(
            &problem.surface,
            dx,
            config.coarsest_n,
            config.system,
            config.mg,
            problem.has_diffusivity().then_some(&diffusivity_fn),
        )?;
        let grid = &h.finest().grid;
        let f = problem.rhs_vector(grid);
        let out = h.solve(&f, &vec![0.0; grid.n()], None);
        let u_ext = h.finest().extension.apply(&out.u);
        let err = surface_error(grid, &u_ext, problem, problem.default_error_samples())?;
        Ok((grid.n(), err))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ConvergenceRow {
    pub dx: f64,
    pub n: usize,
    pub rel_err: f64,
    /// `log₂(err(2h)/err(h))`; absent on the first row.
    pub order: Option<f64>,
}

/// Solve the problem on a halving ladder and report errors and orders.
pub fn run_convergence(config: &RunConfig) -> Result<Vec<ConvergenceRow>> {
    config.check_halvings()?;
    let problem = config.problem()?;
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(config.dx_list.len());
    for &dx in &config.dx_list {
        let (n, rel_err) = solve_once(config, &problem, dx)?;
        let order = rows.last().map(|prev| (prev.rel_err / rel_err).log2());
        rows.push(ConvergenceRow { dx, n, rel_err, order });
    }
    Ok(rows)
}

pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("dx,n,rel_err,order\n");
    for r in rows {
        let order = r.order.map(fmt_float).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{}", fmt_float(r.dx), r.n, fmt_float(r.rel_err), order);
    }
    out
}

#[derive(Debug, Clone, Copy)]
pub struct MgStudyRow {
    pub finest_n: usize,
    pub cycle: usize,
    pub rel_change: f64,
    pub rel_residual: f64,
    pub surface_error: f64,
}

/// One multigrid solve per dx, with per-cycle diagnostics.
pub fn run_multigrid_study(config: &RunConfig) -> Result<Vec<MgStudyRow>> {
    let problem = config.problem()?;
    let mut rows = Vec::new();
    for &dx in &config.dx_list {
        let diffusivity_fn =
            |r: &crate::geometry::CpResult| problem.diffusivity(r.cp, r.param).expect("a(cp)");
        let h = build_hierarchy(
            &problem.surface,
            dx,
            config.coarsest_n,
            config.system,
            config.mg,
            problem.has_diffusivity().then_some(&diffusivity_fn),
        )?;
        let grid = &h.finest().grid;
        let f = problem.rhs_vector(grid);
        let probe = |u: &[f64]| {
            surface_error(grid, u, &problem, problem.default_error_samples())
                .expect("surface samples stay inside the band")
        };
        let out = h.solve(&f, &vec![0.0; grid.n()], Some(&probe));
        let finest_n = (1.0 / dx).round() as usize;
        for s in &out.stats {
            rows.push(MgStudyRow {
                finest_n,
                cycle: s.cycle,
                rel_change: s.rel_change,
                rel_residual: s.rel_residual,
                surface_error: s.surface_error.expect("probe installed"),
            });
        }
    }
    Ok(rows)
}

pub fn multigrid_csv(rows: &[MgStudyRow]) -> String {
    let mut out = String::from("finest_N,cycle,rel_change,rel_residual,surface_error\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.finest_n,
            r.cycle,
            fmt_float(r.rel_change),
            fmt_float(r.rel_residual),
            fmt_float(r.surface_error)
        );
    }
    out
}

#[derive(Debug, Clone, Copy)]
pub struct AuditRow {
    pub dx: f64,
    pub n: usize,
    pub nnz_l: usize,
    pub nnz_e3: usize,
    pub nnz_m: usize,
    pub m_matrix: bool,
}

/// Assemble each system and audit degrees of freedom, sparsity and the
/// M-matrix structure; optionally dump bands and matrices.
pub fn run_matrix_audit(config: &RunConfig) -> Result<Vec<AuditRow>> {
    let problem = config.problem()?;
    let mut rows = Vec::with_capacity(config.dx_list.len());
    for &dx in &config.dx_list {
        let grid = build_band(&problem.surface, dx, config.system.max_degree(), None)?;
        let diffusivity = problem.diffusivity_vector(&grid);
        let l = build_laplacian(&grid);
        let e3 = build_extension(&grid, 3)?;
        let a = assemble_system(&grid, &config.system, diffusivity.as_deref())?;
        let m = system_m_part(&a, config.system.c);
        let report = verify_m_matrix(&a, config.system.c);
        if let Some(dir) = &config.band_dump {
            std::fs::create_dir_all(dir)?;
            grid.write_band_csv(&dir.join(format!("band_{}_{dx}.csv", config.problem)))?;
        }
        if let Some(dir) = &config.matrix_out {
            std::fs::create_dir_all(dir)?;
            let stem = format!("{}_{dx}", config.problem);
            a.write_matrix_market(&dir.join(format!("A_{stem}.mtx")))?;
            l.write_matrix_market(&dir.join(format!("L_{stem}.mtx")))?;
            e3.write_matrix_market(&dir.join(format!("E3_{stem}.mtx")))?;
            m.write_matrix_market(&dir.join(format!("M_{stem}.mtx")))?;
        }
        rows.push(AuditRow {
            dx,
            n: grid.n(),
            nnz_l: l.nnz(),
            nnz_e3: e3.nnz(),
            nnz_m: m.nnz(),
            m_matrix: report.is_m_matrix,
        });
    }
    Ok(rows)
}

pub fn audit_csv(rows: &[AuditRow]) -> String {
    let mut out = String::from("dx,n,nnz_L,nnz_E3,nnz_M,m_matrix\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_float(r.dx),
            r.n,
            r.nnz_l,
            r.nnz_e3,
            r.nnz_m,
            r.m_matrix
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convergence_rows_and_determinism() {
        let config = RunConfig::new("circle", vec![0.1, 0.05]);
        let rows = run_convergence(&config).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].order.is_none());
        let order = rows[1].order.unwrap();
        assert!((1.4..=2.6).contains(&order), "order {order}");
        let a = convergence_csv(&run_convergence(&config).unwrap());
        let b = convergence_csv(&run_convergence(&config).unwrap());
        assert_eq!(a, b);
        assert!(a.starts_with("dx,n,rel_err,order\n"));
        assert!(a.contains("1.00000e-1"));
    }

    #[test]
    fn ladder_validation() {
        let config = RunConfig::new("circle", vec![0.1, 0.06]);
        assert!(matches!(run_convergence(&config), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn multigrid_study_shape() {
        let config = RunConfig {
            solver: SolverKind::VCycle,
            ..RunConfig::new("circle", vec![0.1])
        };
        let rows = run_multigrid_study(&config).unwrap();
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| r.finest_n == 10));
        assert_eq!(rows.last().unwrap().cycle, rows.len());
        // Residual decreases from the first cycle.
        assert!(rows.last().unwrap().rel_residual < rows[0].rel_residual);
        let csv = multigrid_csv(&rows);
        assert!(csv.starts_with("finest_N,cycle,rel_change,rel_residual,surface_error\n"));
    }

    #[test]
    fn audit_counts_circle() {
        let config = RunConfig::new("circle", vec![0.1]);
        let rows = run_matrix_audit(&config).unwrap();
        assert_eq!(rows.len(), 1);
        let r = &rows[0];
        assert!(r.m_matrix);
        // 2-D: 5-point Laplacian rows, 16-point extension rows.
        assert!((r.nnz_l as f64 / r.n as f64) <= 5.0);
        assert!((r.nnz_e3 as f64 / r.n as f64) <= 16.0);
        assert!(r.nnz_m >= r.nnz_e3);
    }

    #[test]
    fn audit_dump_files() {
        let dir = std::env::temp_dir().join("cpm_audit_dump");
        let _ = std::fs::remove_dir_all(&dir);
        let config = RunConfig {
            band_dump: Some(dir.join("bands")),
            matrix_out: Some(dir.join("matrices")),
            ..RunConfig::new("circle", vec![0.2])
        };
        run_matrix_audit(&config).unwrap();
        assert!(dir.join("bands").join("band_circle_0.2.csv").exists());
        for name in ["A_circle_0.2.mtx", "L_circle_0.2.mtx", "E3_circle_0.2.mtx", "M_circle_0.2.mtx"]
        {
            assert!(dir.join("matrices").join(name).exists());
        }
    }

    #[test]
    fn vcycle_solver_in_convergence_study() {
        let config = RunConfig {
            solver: SolverKind::VCycle,
            ..RunConfig::new("circle", vec![0.2, 0.1])
        };
        // dx = 0.2 degenerates to the coarsest direct solve; dx = 0.1 runs
        // a two-level cycle.
        let rows = run_convergence(&config).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[1].rel_err < rows[0].rel_err);
    }
}
