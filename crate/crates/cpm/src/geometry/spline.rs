//! Closed C² cubic splines through 2-D control points.
//!
//! Chord-length parametrization; the periodic second-derivative (moment)
//! system is solved once at construction.  Evaluation returns position and
//! the first two parameter derivatives, which is what both the closest-point
//! Newton iteration and the manufactured right-hand sides need.

use crate::error::{Error, Result};
use crate::linalg::direct_solve;
use crate::sparse::SparseMatrix;
use std::path::Path;

#[derive(Debug, Clone)]
pub struct SplineCurve {
    /// Interpolated points, closed (first point not repeated).
    points: Vec<[f64; 2]>,
    /// Knot parameters `t_0 = 0 < t_1 < … < t_m = T` (cumulative chords).
    knots: Vec<f64>,
    /// Second derivatives at the knots, periodic (`moments[m] = moments[0]`).
    moments: Vec<[f64; 2]>,
}

impl SplineCurve {
    pub fn new(points: Vec<[f64; 2]>) -> Result<Self> {
        let m = points.len();
        if m < 4 {
            return Err(Error::InvalidConfig(format!(
                "closed spline needs at least 4 control points, got {m}"
            )));
        }
        let mut knots = Vec::with_capacity(m + 1);
        knots.push(0.0);
        for i in 0..m {
            let a = points[i];
            let b = points[(i + 1) % m];
            let chord = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
            if chord == 0.0 {
                return Err(Error::InvalidConfig(format!("duplicate control point at index {i}")));
            }
            knots.push(knots[i] + chord);
        }
        let h = |i: usize| knots[i + 1] - knots[i];
        // Periodic moment system: for each knot i (mod m),
        //   h_{i-1}/6 M_{i-1} + (h_{i-1}+h_i)/3 M_i + h_i/6 M_{i+1}
        //     = dP_i/h_i − dP_{i-1}/h_{i-1}.
        let mut rows = Vec::with_capacity(m);
        for i in 0..m {
            let prev = (i + m - 1) % m;
            let next = (i + 1) % m;
            rows.push(vec![
                (prev, h(prev) / 6.0),
                (i, (h(prev) + h(i)) / 3.0),
                (next, h(i) / 6.0),
            ]);
        }
        let a = SparseMatrix::from_rows(m, rows);
        let mut moments = vec![[0.0; 2]; m + 1];
        for c in 0..2 {
            let rhs: Vec<f64> = (0..m)
                .map(|i| {
                    let prev = (i + m - 1) % m;
                    let next = (i + 1) % m;
                    (points[next][c] - points[i][c]) / h(i)
                        - (points[i][c] - points[prev][c]) / h(prev)
                })
                .collect();
            let sol = direct_solve(&a, &rhs)?;
            for i in 0..m {
                moments[i][c] = sol[i];
            }
        }
        moments[m] = moments[0];
        Ok(Self { points, knots, moments })
    }

    /// Parse control points from a plain-text file of `x y` rows.
    /// Blank lines and lines starting with `#` are skipped.
    pub fn from_points_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut pts = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<f64> {
                tok.and_then(|s| s.parse().ok()).ok_or_else(|| {
                    Error::InvalidConfig(format!("bad control point on line {}", lineno + 1))
                })
            };
            pts.push([parse(it.next())?, parse(it.next())?]);
        }
        Self::new(pts)
    }

    /// Total parameter length `T`.
    pub fn period(&self) -> f64 {
        *self.knots.last().unwrap()
    }

    pub fn control_points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn wrap(&self, t: f64) -> f64 {
        let period = self.period();
        let mut t = t % period;
        if t < 0.0 {
            t += period;
        }
        if t >= period {
            t = 0.0;
        }
        t.max(0.0) // folds -0.0 into the first segment
    }

    /// Position, first and second parameter derivatives at `t`.
    pub fn eval(&self, t: f64) -> ([f64; 2], [f64; 2], [f64; 2]) {
        let t = self.wrap(t);
        let seg = match self.knots.binary_search_by(|k| k.total_cmp(&t)) {
            Ok(i) => i.min(self.points.len() - 1),
            Err(i) => i - 1,
        };
        let (t0, t1) = (self.knots[seg], self.knots[seg + 1]);
        let h = t1 - t0;
        let (a, b) = (t1 - t, t - t0);
        let p0 = self.points[seg];
        let p1 = self.points[(seg + 1) % self.points.len()];
        let m0 = self.moments[seg];
        let m1 = self.moments[seg + 1];
        let mut pos = [0.0; 2];
        let mut d1 = [0.0; 2];
        let mut d2 = [0.0; 2];
        for c in 0..2 {
            pos[c] = m0[c] * a * a * a / (6.0 * h)
                + m1[c] * b * b * b / (6.0 * h)
                + (p0[c] / h - m0[c] * h / 6.0) * a
                + (p1[c] / h - m1[c] * h / 6.0) * b;
            d1[c] = -m0[c] * a * a / (2.0 * h) + m1[c] * b * b / (2.0 * h)
                - (p0[c] / h - m0[c] * h / 6.0)
                + (p1[c] / h - m1[c] * h / 6.0);
            d2[c] = (m0[c] * a + m1[c] * b) / h;
        }
        (pos, d1, d2)
    }

    pub fn position(&self, t: f64) -> [f64; 2] {
        self.eval(t).0
    }

    /// Metric speed `g = |s'(t)|` and its derivative `g'`.
    pub fn speed(&self, t: f64) -> (f64, f64) {
        let (_, d1, d2) = self.eval(t);
        let g = (d1[0] * d1[0] + d1[1] * d1[1]).sqrt();
        let gp = (d1[0] * d2[0] + d1[1] * d2[1]) / g;
        (g, gp)
    }
}
