//! Sparse operator assembly on a banded grid.
//!
//! The discrete embedding system is
//!
//! ```text
//! A = c I − M,    M = E_p L − γ (I − E_q),
//! ```
//!
//! assembled here as `A = (c+γ) I − E_p·L − γ E_q` with an exact sparse-sparse
//! product.  `E_p`/`E_q` hold tensor-product interpolation weights at each
//! band point's closest point, so their columns at `Edge` points vanish and
//! the Laplacian rows at those points never reach `A`.  For scalar variable
//! diffusivity the centered Laplacian is replaced by the flux form
//! `Σ_axis D_b diag(avg_f a) D_f` and a single extension degree is used for
//! both terms.

use crate::band::{BandedGrid, Role};
use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

/// Parameters of the embedding system.
#[derive(Debug, Clone, Copy)]
pub struct SystemParams {
    /// Zeroth-order shift; positive for well-posedness.
    pub c: f64,
    /// Side-condition penalty; `None` selects `2·dim/Δx²`.
    pub gamma: Option<f64>,
    /// Interpolation degree for the Laplacian extension.
    pub p: usize,
    /// Interpolation degree for the side-condition extension.
    pub q: usize,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self { c: 1.0, gamma: None, p: 1, q: 3 }
    }
}

impl SystemParams {
    pub fn gamma_for(&self, dim: usize, dx: f64) -> f64 {
        self.gamma.unwrap_or(2.0 * dim as f64 / (dx * dx))
    }

    /// Largest interpolation degree any operator needs (the smoother's
    /// extension is cubic).
    pub fn max_degree(&self) -> usize {
        self.p.max(self.q).max(3)
    }

    pub fn validate(&self, dim: usize, dx: f64) -> Result<()> {
        let gamma = self.gamma_for(dim, dx);
        if (gamma + self.c).abs() < 1e-12 {
            return Err(Error::InvalidConfig("gamma must differ from -c".into()));
        }
        if self.p < 1 || self.q < 1 {
            return Err(Error::InvalidConfig("interpolation degrees must be at least 1".into()));
        }
        Ok(())
    }
}

/// Closest-point interpolation (extension) matrix of the given degree: row
/// `i` interpolates at `cp(x_i)` from its in-band stencil.
pub fn build_extension(grid: &BandedGrid, degree: usize) -> Result<SparseMatrix> {
    if degree > grid.max_degree {
        return Err(Error::InvalidConfig(format!(
            "extension degree {degree} exceeds band max_degree {}",
            grid.max_degree
        )));
    }
    let mut rows = Vec::with_capacity(grid.n());
    for i in 0..grid.n() {
        let row = grid.interp_row(grid.cp(i).cp, degree)?;
        debug_assert!(row.iter().all(|(j, _)| grid.role(*j) == Role::Interp));
        rows.push(row);
    }
    Ok(SparseMatrix::from_rows(grid.n(), rows))
}

/// Zero-sum second-difference contribution along one axis.  Centered where
/// both neighbors exist; band-rim points (whose rows the assembled system
/// never references) fall back to an inward-shifted stretched difference.
fn laplacian_axis_row(
    grid: &BandedGrid,
    i: usize,
    axis: usize,
    scale: f64,
    row: &mut Vec<(usize, f64)>,
) {
    let mi = grid.multi_index(i);
    let at = |step: i64| -> Option<usize> {
        let mut nb = mi;
        nb[axis] += step;
        grid.index_of(&nb)
    };
    let (minus, plus) = (at(-1), at(1));
    match (minus, plus) {
        (Some(m), Some(p)) => {
            row.push((m, scale));
            row.push((i, -2.0 * scale));
            row.push((p, scale));
        }
        _ => {
            debug_assert!(grid.role(i) == Role::Edge, "interp stencil not closed");
            let (near, far) = match (minus, plus) {
                (Some(m), None) => (Some(m), at(-2)),
                (None, Some(p)) => (Some(p), at(2)),
                _ => (None, None),
            };
            match (near, far) {
                (Some(n), Some(f)) => {
                    row.push((i, -2.0 * scale));
                    row.push((n, scale));
                    row.push((f, scale));
                }
                (Some(n), None) => {
                    row.push((i, -2.0 * scale));
                    row.push((n, 2.0 * scale));
                }
                _ => {}
            }
        }
    }
}

/// Second-order centered Laplacian on the band (5-point in 2-D, 7-point in
/// 3-D), units `1/Δx²`.  Every row sums to zero.
pub fn build_laplacian(grid: &BandedGrid) -> SparseMatrix {
    let scale = 1.0 / (grid.dx * grid.dx);
    let mut rows = Vec::with_capacity(grid.n());
    for i in 0..grid.n() {
        let mut row = Vec::with_capacity(2 * grid.dim + 1);
        for axis in 0..grid.dim {
            laplacian_axis_row(grid, i, axis, scale, &mut row);
        }
        rows.push(row);
    }
    SparseMatrix::from_rows(grid.n(), rows)
}

/// Flux-form variable-coefficient Laplacian
/// `Σ_axis D_b diag(avg_f a) D_f` with `a` sampled at closest points.
pub fn build_variable_laplacian(grid: &BandedGrid, a_at_cp: &[f64]) -> Result<SparseMatrix> {
    if a_at_cp.len() != grid.n() {
        return Err(Error::DimMismatch(format!(
            "diffusivity vector length {} vs band size {}",
            a_at_cp.len(),
            grid.n()
        )));
    }
    if let Some(idx) = a_at_cp.iter().position(|a| !(*a > 0.0)) {
        return Err(Error::NonpositiveDiffusivity { index: idx, value: a_at_cp[idx] });
    }
    let scale = 1.0 / (grid.dx * grid.dx);
    let mut rows = Vec::with_capacity(grid.n());
    for i in 0..grid.n() {
        let mi = grid.multi_index(i);
        let mut row: Vec<(usize, f64)> = Vec::with_capacity(2 * grid.dim + 1);
        for axis in 0..grid.dim {
            let at = |step: i64| -> Option<usize> {
                let mut nb = mi;
                nb[axis] += step;
                grid.index_of(&nb)
            };
            match (at(-1), at(1)) {
                (Some(m), Some(p)) => {
                    // Backward difference of (forward-averaged a) · (forward
                    // difference): a_{+1/2}(u_+ − u) − a_{−1/2}(u − u_-).
                    let a_plus = 0.5 * (a_at_cp[i] + a_at_cp[p]);
                    let a_minus = 0.5 * (a_at_cp[m] + a_at_cp[i]);
                    row.push((m, a_minus * scale));
                    row.push((i, -(a_plus + a_minus) * scale));
                    row.push((p, a_plus * scale));
                }
                _ => {
                    // Band-rim filler, scaled so that a ≡ const reduces to
                    // the constant-coefficient rows exactly.
                    laplacian_axis_row(grid, i, axis, a_at_cp[i] * scale, &mut row);
                }
            }
        }
        rows.push(row);
    }
    Ok(SparseMatrix::from_rows(grid.n(), rows))
}

/// Assemble `A = (c+γ) I − E_p·L − γ E_q`, or with a diffusivity vector the
/// single-extension variable-coefficient form `(c+γ) I − E_q·L̃ − γ E_q`.
pub fn assemble_system(
    grid: &BandedGrid,
    params: &SystemParams,
    diffusivity: Option<&[f64]>,
) -> Result<SparseMatrix> {
    params.validate(grid.dim, grid.dx)?;
    let gamma = params.gamma_for(grid.dim, grid.dx);
    let (ep_l, e_q) = match diffusivity {
        None => {
            let e_p = build_extension(grid, params.p)?;
            let l = build_laplacian(grid);
            let ep_l = e_p.matmul(&l)?;
            let e_q = if params.q == params.p { e_p } else { build_extension(grid, params.q)? };
            (ep_l, e_q)
        }
        Some(a) => {
            let e_q = build_extension(grid, params.q)?;
            let lt = build_variable_laplacian(grid, a)?;
            (e_q.matmul(&lt)?, e_q)
        }
    };
    Ok(ep_l.add_scaled(-1.0, &e_q, -gamma)?.add_diag(params.c + gamma))
}

/// Recover `M = c·I − A` from an assembled system, for sparsity audits.
pub fn system_m_part(a: &SparseMatrix, c: f64) -> SparseMatrix {
    SparseMatrix::identity(a.nrows())
        .add_scaled(c, a, -1.0)
        .expect("same shape")
}

/// Structure report for the M-matrix property of `A`.
#[derive(Debug, Clone, Copy)]
pub struct MMatrixReport {
    pub is_m_matrix: bool,
    /// Largest off-diagonal entry (≤ 0 for an M-matrix, up to roundoff).
    pub worst_offdiag: f64,
    /// Largest deviation of a row sum from `c`.
    pub worst_rowsum: f64,
    pub min_diag: f64,
    pub offending_rows: usize,
}

/// Exhaustive scan of diagonal signs, off-diagonal signs and row sums.
pub fn verify_m_matrix(a: &SparseMatrix, c: f64) -> MMatrixReport {
    let n = a.nrows();
    let mut max_abs: f64 = 0.0;
    for i in 0..n {
        for v in a.row(i).1 {
            max_abs = max_abs.max(v.abs());
        }
    }
    let tol = 1e-13 * max_abs;
    let mut worst_offdiag = f64::NEG_INFINITY;
    let mut worst_rowsum: f64 = 0.0;
    let mut min_diag = f64::INFINITY;
    let mut offending = 0;
    for i in 0..n {
        let (cols, vals) = a.row(i);
        let mut sum = 0.0;
        let mut diag = 0.0;
        let mut bad = false;
        for (j, v) in cols.iter().zip(vals) {
            sum += v;
            if *j == i {
                diag = *v;
            } else {
                worst_offdiag = worst_offdiag.max(*v);
                if *v > tol {
                    bad = true;
                }
            }
        }
        min_diag = min_diag.min(diag);
        worst_rowsum = worst_rowsum.max((sum - c).abs());
        if diag <= 0.0 {
            bad = true;
        }
        if bad {
            offending += 1;
        }
    }
    MMatrixReport {
        is_m_matrix: offending == 0,
        worst_offdiag,
        worst_rowsum,
        min_diag,
        offending_rows: offending,
    }
}

/// Closest-point grid transfers between a fine band and the next coarser
/// one: both restriction and prolongation assign each target point the
/// degree-1 interpolated value at its closest point on the source grid.
pub fn build_transfer(
    fine: &BandedGrid,
    coarse: &BandedGrid,
) -> Result<(SparseMatrix, SparseMatrix)> {
    if (coarse.dx - 2.0 * fine.dx).abs() > 1e-9 * fine.dx {
        return Err(Error::InvalidConfig(format!(
            "coarse dx {} is not twice fine dx {}",
            coarse.dx, fine.dx
        )));
    }
    for k in 0..fine.dim {
        if (fine.origin[k] - coarse.origin[k]).abs() > 1e-12 {
            return Err(Error::InvalidConfig("fine and coarse grids must share an origin".into()));
        }
    }
    let mut rows = Vec::with_capacity(coarse.n());
    for i in 0..coarse.n() {
        rows.push(fine.interp_row(coarse.cp(i).cp, 1)?);
    }
    let restriction = SparseMatrix::from_rows(fine.n(), rows);
    let mut rows = Vec::with_capacity(fine.n());
    for j in 0..fine.n() {
        rows.push(coarse.interp_row(fine.cp(j).cp, 1)?);
    }
    let prolongation = SparseMatrix::from_rows(coarse.n(), rows);
    Ok((restriction, prolongation))
}
