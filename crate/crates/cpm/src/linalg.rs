//! Core kernels: sparse matvec, Jacobi sweeps, norms, direct solvers.
//!
//! Two direct solvers back [`DirectSolver`]: dense LU with partial pivoting
//! for small systems (coarsest multigrid levels, dense test matrices), and an
//! envelope (skyline) LU without pivoting for the larger band systems, whose
//! rows are strongly diagonally dominated by the `c + γ` shift.  Envelope
//! fill never leaves the symmetrized profile, so storage and factorization
//! cost scale with the band's local index spread rather than `n²`.

use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;

/// Vector of band values, indexed by band row id.
pub type Vector = Vec<f64>;

/// Below the threshold at which the relative-norm guard switches a relative
/// norm to absolute mode.
pub const REL_NORM_FLOOR: f64 = 1e-300;

pub fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `‖a − b‖_∞ / ‖b‖_∞`, absolute when `‖b‖` underflows.
pub fn rel_diff_inf(a: &[f64], b: &[f64]) -> f64 {
    let mut num: f64 = 0.0;
    for (x, y) in a.iter().zip(b) {
        num = num.max((x - y).abs());
    }
    let den = inf_norm(b);
    if den < REL_NORM_FLOOR {
        num
    } else {
        num / den
    }
}

/// Exact sparse product `A u`.
pub fn spmv(a: &SparseMatrix, u: &[f64]) -> Result<Vector> {
    if a.ncols() != u.len() {
        return Err(Error::DimMismatch(format!("spmv {}x{} by {}", a.nrows(), a.ncols(), u.len())));
    }
    Ok(a.apply(u))
}

/// One Jacobi update `u + diag(A)⁻¹ (f − A u)`.
pub fn jacobi_sweep(a: &SparseMatrix, u: &[f64], f: &[f64]) -> Result<Vector> {
    if a.ncols() != u.len() || a.nrows() != f.len() {
        return Err(Error::DimMismatch("jacobi_sweep".into()));
    }
    let diag = a.diag();
    if let Some(row) = diag.iter().position(|d| *d == 0.0) {
        return Err(Error::ZeroDiagonal { row });
    }
    let au = a.apply(u);
    Ok((0..u.len()).map(|i| u[i] + (f[i] - au[i]) / diag[i]).collect())
}

/// Systems at or below this size use dense LU.
const DENSE_LIMIT: usize = 1300;

enum Factors {
    Dense(DenseLu),
    Envelope(EnvelopeLu),
}

/// A factorized square system, reusable across right-hand sides.
pub struct DirectSolver {
    factors: Factors,
}

impl DirectSolver {
    pub fn new(a: &SparseMatrix) -> Result<Self> {
        if a.nrows() != a.ncols() {
            return Err(Error::DimMismatch(format!("direct solve {}x{}", a.nrows(), a.ncols())));
        }
        let factors = if a.nrows() <= DENSE_LIMIT {
            Factors::Dense(DenseLu::new(a)?)
        } else {
            Factors::Envelope(EnvelopeLu::new(a)?)
        };
        Ok(Self { factors })
    }

    pub fn solve(&self, f: &[f64]) -> Result<Vector> {
        match &self.factors {
            Factors::Dense(lu) => lu.solve(f),
            Factors::Envelope(lu) => lu.solve(f),
        }
    }
}

/// Factor once, solve once.
pub fn direct_solve(a: &SparseMatrix, f: &[f64]) -> Result<Vector> {
    DirectSolver::new(a)?.solve(f)
}

/// Dense LU with partial pivoting (row-major storage).
struct DenseLu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl DenseLu {
    fn new(a: &SparseMatrix) -> Result<Self> {
        let n = a.nrows();
        let mut lu = vec![0.0; n * n];
        for i in 0..n {
            let (cols, vals) = a.row(i);
            for (c, v) in cols.iter().zip(vals) {
                lu[i * n + c] = *v;
            }
        }
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut piv = k;
            let mut best = lu[k * n + k].abs();
            for i in k + 1..n {
                let v = lu[i * n + k].abs();
                if v > best {
                    best = v;
                    piv = i;
                }
            }
            if best == 0.0 {
                return Err(Error::Singular { step: k, pivot: 0.0 });
            }
            if piv != k {
                for j in 0..n {
                    lu.swap(k * n + j, piv * n + j);
                }
                perm.swap(k, piv);
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let m = lu[i * n + k] / pivot;
                lu[i * n + k] = m;
                if m != 0.0 {
                    for j in k + 1..n {
                        lu[i * n + j] -= m * lu[k * n + j];
                    }
                }
            }
        }
        Ok(Self { n, lu, perm })
    }

    fn solve(&self, f: &[f64]) -> Result<Vector> {
        let n = self.n;
        if f.len() != n {
            return Err(Error::DimMismatch("solve rhs length".into()));
        }
        let mut y: Vec<f64> = self.perm.iter().map(|&p| f[p]).collect();
        for i in 0..n {
            let mut s = y[i];
            for j in 0..i {
                s -= self.lu[i * n + j] * y[j];
            }
            y[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..n {
                s -= self.lu[i * n + j] * y[j];
            }
            y[i] = s / self.lu[i * n + i];
        }
        Ok(y)
    }
}

/// Envelope (skyline) LU without pivoting.  `L` rows and `U` columns share
/// the symmetrized profile `env[j] = min over row j and column j of the first
/// nonzero index`; fill stays inside that profile.
struct EnvelopeLu {
    n: usize,
    env: Vec<usize>,
    seg: Vec<usize>,
    lrows: Vec<f64>,
    ucols: Vec<f64>,
    udiag: Vec<f64>,
}

impl EnvelopeLu {
    fn new(a: &SparseMatrix) -> Result<Self> {
        let n = a.nrows();
        let mut env: Vec<usize> = (0..n).collect();
        let mut max_abs: f64 = 0.0;
        for i in 0..n {
            let (cols, vals) = a.row(i);
            if let Some(&first) = cols.first() {
                if first < env[i] {
                    env[i] = first;
                }
            }
            for (c, v) in cols.iter().zip(vals) {
                if *c > i && i < env[*c] {
                    env[*c] = i;
                }
                max_abs = max_abs.max(v.abs());
            }
        }
        let mut seg = vec![0usize; n + 1];
        for j in 0..n {
            seg[j + 1] = seg[j] + (j - env[j]);
        }
        let mut lrows = vec![0.0; seg[n]];
        let mut ucols = vec![0.0; seg[n]];
        let mut udiag = vec![0.0; n];
        for i in 0..n {
            let (cols, vals) = a.row(i);
            for (c, v) in cols.iter().zip(vals) {
                let j = *c;
                if j < i {
                    lrows[seg[i] + (j - env[i])] = *v;
                } else if j > i {
                    ucols[seg[j] + (i - env[j])] = *v;
                } else {
                    udiag[i] = *v;
                }
            }
        }
        let pivot_floor = max_abs * 1e-14;
        for j in 0..n {
            // U column j and L row j grow together, left to right.
            for i in env[j]..j {
                let lo = env[i].max(env[j]);
                let len = i - lo;
                let mut uij = ucols[seg[j] + (i - env[j])];
                let mut lji = lrows[seg[j] + (i - env[j])];
                if len > 0 {
                    let lrow_i = &lrows[seg[i] + (lo - env[i])..seg[i] + (i - env[i])];
                    let ucol_j = &ucols[seg[j] + (lo - env[j])..seg[j] + (i - env[j])];
                    let lrow_j = &lrows[seg[j] + (lo - env[j])..seg[j] + (i - env[j])];
                    let ucol_i = &ucols[seg[i] + (lo - env[i])..seg[i] + (i - env[i])];
                    let mut su = 0.0;
                    let mut sl = 0.0;
                    for k in 0..len {
                        su += lrow_i[k] * ucol_j[k];
                        sl += lrow_j[k] * ucol_i[k];
                    }
                    uij -= su;
                    lji -= sl;
                }
                let di = udiag[i];
                if di.abs() <= pivot_floor {
                    return Err(Error::Singular { step: i, pivot: di });
                }
                ucols[seg[j] + (i - env[j])] = uij;
                lrows[seg[j] + (i - env[j])] = lji / di;
            }
            let mut s = 0.0;
            for k in 0..(j - env[j]) {
                s += lrows[seg[j] + k] * ucols[seg[j] + k];
            }
            udiag[j] -= s;
            if udiag[j].abs() <= pivot_floor {
                return Err(Error::Singular { step: j, pivot: udiag[j] });
            }
        }
        Ok(Self { n, env, seg, lrows, ucols, udiag })
    }

    fn solve(&self, f: &[f64]) -> Result<Vector> {
        let n = self.n;
        if f.len() != n {
            return Err(Error::DimMismatch("solve rhs length".into()));
        }
        let mut y = f.to_vec();
        for j in 0..n {
            let e = self.env[j];
            let mut s = 0.0;
            for k in 0..(j - e) {
                s += self.lrows[self.seg[j] + k] * y[e + k];
            }
            y[j] -= s;
        }
        for j in (0..n).rev() {
            let xj = y[j] / self.udiag[j];
            y[j] = xj;
            let e = self.env[j];
            for k in 0..(j - e) {
                y[e + k] -= self.ucols[self.seg[j] + k] * xj;
            }
        }
        Ok(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    /// Independent oracle: Gauss-Jordan elimination on the augmented matrix.
    fn gauss_jordan(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut m: Vec<Vec<f64>> = a.iter().cloned().collect();
        let mut rhs = b.to_vec();
        for k in 0..n {
            let piv = (k..n).max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs())).unwrap();
            m.swap(k, piv);
            rhs.swap(k, piv);
            let d = m[k][k];
            for j in 0..n {
                m[k][j] /= d;
            }
            rhs[k] /= d;
            for i in 0..n {
                if i != k && m[i][k] != 0.0 {
                    let factor = m[i][k];
                    for j in 0..n {
                        m[i][j] -= factor * m[k][j];
                    }
                    rhs[i] -= factor * rhs[k];
                }
            }
        }
        rhs
    }

    fn from_dense(d: &[Vec<f64>]) -> SparseMatrix {
        SparseMatrix::from_rows(
            d[0].len(),
            d.iter()
                .map(|r| {
                    r.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(j, v)| (j, *v)).collect()
                })
                .collect(),
        )
    }

    fn random_dd_band(n: usize, bw: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut d = vec![vec![0.0f64; n]; n];
        for i in 0..n {
            let mut off = 0.0;
            for j in i.saturating_sub(bw)..(i + bw + 1).min(n) {
                if j != i && rng.gen_bool(0.7) {
                    d[i][j] = rng.gen_range(-1.0..1.0);
                    off += d[i][j].abs();
                }
            }
            d[i][i] = off + rng.gen_range(0.5..2.0);
        }
        d
    }

    #[test]
    fn spmv_identity_and_dims() {
        let a = SparseMatrix::identity(3);
        let u = vec![1.0, 2.0, 3.0];
        assert_eq!(spmv(&a, &u).unwrap(), u);
        assert!(spmv(&a, &[1.0]).is_err());
    }

    #[test]
    fn jacobi_identity_one_step() {
        let a = SparseMatrix::identity(3);
        let f = vec![3.0, -1.0, 2.0];
        assert_eq!(jacobi_sweep(&a, &[0.0; 3], &f).unwrap(), f);
    }

    #[test]
    fn jacobi_diagonal_exact() {
        let a = SparseMatrix::from_rows(2, vec![vec![(0, 2.0)], vec![(1, -4.0)]]);
        let u = jacobi_sweep(&a, &[7.0, -3.0], &[2.0, 8.0]).unwrap();
        assert!((u[0] - 1.0).abs() < 1e-15);
        assert!((u[1] + 2.0).abs() < 1e-15);
    }

    #[test]
    fn jacobi_two_by_two_hand_value() {
        // u + diag(A)^{-1}(f − A u) from u = 0 gives (f1/2, f2/2) = (1.5, 1.5).
        let a = SparseMatrix::from_rows(2, vec![vec![(0, 2.0), (1, 1.0)], vec![(0, 1.0), (1, 2.0)]]);
        let u = jacobi_sweep(&a, &[0.0, 0.0], &[3.0, 3.0]).unwrap();
        assert_eq!(u, vec![1.5, 1.5]);
    }

    #[test]
    fn jacobi_zero_diag_detected() {
        let a = SparseMatrix::from_rows(2, vec![vec![(1, 1.0)], vec![(0, 1.0)]]);
        assert!(matches!(
            jacobi_sweep(&a, &[0.0, 0.0], &[1.0, 1.0]),
            Err(Error::ZeroDiagonal { row: 0 })
        ));
    }

    #[test]
    fn dense_solve_identity() {
        let a = SparseMatrix::identity(4);
        let f = vec![4.0, 3.0, 2.0, 1.0];
        assert_eq!(direct_solve(&a, &f).unwrap(), f);
    }

    #[test]
    fn dense_solve_against_gauss_jordan_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = 10;
            let mut d = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in 0..n {
                    d[i][j] = rng.gen_range(-1.0..1.0);
                }
                d[i][i] += 4.0;
            }
            let f: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let x = direct_solve(&from_dense(&d), &f).unwrap();
            let oracle = gauss_jordan(&d, &f);
            for (a, b) in x.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-10, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn envelope_matches_dense_on_banded_systems() {
        for seed in 0..5 {
            let n = 60;
            let d = random_dd_band(n, 7, seed);
            let a = from_dense(&d);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed + 100);
            let f: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let lu = EnvelopeLu::new(&a).unwrap();
            let x = lu.solve(&f).unwrap();
            let oracle = gauss_jordan(&d, &f);
            for (a, b) in x.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-9, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn singular_detected() {
        let a = SparseMatrix::from_rows(2, vec![vec![(0, 1.0), (1, 1.0)], vec![(0, 1.0), (1, 1.0)]]);
        assert!(matches!(direct_solve(&a, &[1.0, 1.0]), Err(Error::Singular { .. })));
    }

    #[test]
    fn solve_inverts_spmv() {
        let n = 50;
        let d = random_dd_band(n, 5, 3);
        let a = from_dense(&d);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f = spmv(&a, &u).unwrap();
        let back = direct_solve(&a, &f).unwrap();
        assert!(rel_diff_inf(&back, &u) <= 1e-9);
    }

    #[test]
    fn rel_diff_guards_zero_denominator() {
        assert_eq!(rel_diff_inf(&[1.0, 0.0], &[0.0, 0.0]), 1.0);
    }
}
