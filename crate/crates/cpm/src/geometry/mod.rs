//! Closest-point representations of the test curves and surfaces.
//!
//! Each surface answers Euclidean closest-point queries for points in its
//! tubular neighborhood, produces deterministic quasi-uniform samples, and
//! (except for spline curves) exposes analytic unit normals.  Circle, sphere
//! and torus queries are closed-form projections; spline curves minimize the
//! squared distance over the curve parameter with Newton's method, and the
//! "dziuk" level-set surface runs Newton on the KKT system of
//! `min ‖x − y‖²  s.t.  φ(y) = 0`.
//!
//! Surfaces are immutable after construction and safe to query concurrently.

mod spline;

pub use spline::SplineCurve;

use crate::error::{Error, Result};
use crate::point::{self, Aabb, Point};

/// Absolute tolerance on a returned closest point satisfying the surface's
/// defining equation.
pub const CP_TOL: f64 = 1e-10;

/// Newton convergence threshold on the distance-gradient, in squared-distance
/// units.
const NEWTON_GRAD_TOL: f64 = 1e-12;

const NEWTON_MAX_ITERS: usize = 100;

/// Dense parameter samples used to seed curve Newton iterations.
const CURVE_SEED_SAMPLES: usize = 1024;

/// Dense surface samples used to seed level-set Newton iterations.
const LEVEL_SET_SEED_SAMPLES: usize = 4096;

/// Control polygon of the canonical bean-shaped test curve: a kidney with a
/// shallow dent on top, traced counter-clockwise.  The closed C² spline
/// through these points is the repository's fixed bean geometry.
pub const BEAN_CONTROL_POINTS: [[f64; 2]; 12] = [
    [1.20, 0.05],
    [0.95, 0.45],
    [0.50, 0.62],
    [0.05, 0.50],
    [-0.45, 0.60],
    [-0.90, 0.40],
    [-1.10, 0.00],
    [-0.90, -0.42],
    [-0.45, -0.62],
    [0.10, -0.68],
    [0.65, -0.60],
    [1.05, -0.35],
];

/// The canonical bean-shaped closed spline curve.
pub fn bean_curve() -> Surface {
    Surface::spline(SplineCurve::new(BEAN_CONTROL_POINTS.to_vec()).expect("bean control points"))
}

/// A closest-point query result.
#[derive(Debug, Clone, Copy)]
pub struct CpResult {
    /// The surface point nearest to the query point.
    pub cp: Point,
    /// Euclidean distance from the query point to `cp`.
    pub dist: f64,
    /// Parameter coordinates of `cp` when the surface has a parametrization:
    /// `[t, 0]` for curves, `[θ, φ]` for sphere and torus.
    pub param: Option<[f64; 2]>,
}

#[derive(Debug, Clone)]
pub enum Surface {
    Circle { center: [f64; 2], radius: f64 },
    Sphere { center: Point, radius: f64 },
    Torus { center: Point, major: f64, minor: f64 },
    /// Closed planar C² cubic spline (with its seed index built once).
    SplineCurve { spline: SplineCurve, seeds: SeedIndex },
    /// The level-set surface `(x₁−x₃²)² + x₂² + x₃² = 1`.
    Dziuk { seeds: SeedIndex },
}

impl Surface {
    pub fn circle(center: [f64; 2], radius: f64) -> Self {
        Surface::Circle { center, radius }
    }

    pub fn unit_circle() -> Self {
        Surface::circle([0.0, 0.0], 1.0)
    }

    pub fn sphere(center: Point, radius: f64) -> Self {
        Surface::Sphere { center, radius }
    }

    pub fn unit_sphere() -> Self {
        Surface::sphere([0.0; 3], 1.0)
    }

    pub fn torus(center: Point, major: f64, minor: f64) -> Self {
        Surface::Torus { center, major, minor }
    }

    pub fn spline(spline: SplineCurve) -> Self {
        let samples: Vec<Point> = (0..CURVE_SEED_SAMPLES)
            .map(|i| {
                let t = spline.period() * i as f64 / CURVE_SEED_SAMPLES as f64;
                let p = spline.position(t);
                [p[0], p[1], 0.0]
            })
            .collect();
        let seeds = SeedIndex::new(samples);
        Surface::SplineCurve { spline, seeds }
    }

    pub fn dziuk() -> Self {
        let samples: Vec<Point> = fibonacci_sphere(LEVEL_SET_SEED_SAMPLES)
            .into_iter()
            .map(|(p, _)| dziuk_map(p))
            .collect();
        Surface::Dziuk { seeds: SeedIndex::new(samples) }
    }

    /// Dimension of the embedding space.
    pub fn dim(&self) -> usize {
        match self {
            Surface::Circle { .. } | Surface::SplineCurve { .. } => 2,
            _ => 3,
        }
    }

    pub fn bounding_box(&self) -> Aabb {
        match self {
            Surface::Circle { center, radius } => Aabb::new(
                [center[0] - radius, center[1] - radius, 0.0],
                [center[0] + radius, center[1] + radius, 0.0],
            ),
            Surface::Sphere { center, radius } => Aabb::new(
                [center[0] - radius, center[1] - radius, center[2] - radius],
                [center[0] + radius, center[1] + radius, center[2] + radius],
            ),
            Surface::Torus { center, major, minor } => {
                let reach = major + minor;
                Aabb::new(
                    [center[0] - reach, center[1] - reach, center[2] - minor],
                    [center[0] + reach, center[1] + reach, center[2] + minor],
                )
            }
            Surface::SplineCurve { seeds, .. } => {
                // Sample hull plus a margin for inter-sample overshoot.
                Aabb::of_points(&seeds.samples).pad(2.0 * seeds.max_gap(), 2)
            }
            Surface::Dziuk { .. } => Aabb::new([-1.0, -1.0, -1.0], [2.0, 1.0, 1.0]),
        }
    }

    /// The Euclidean-nearest surface point to `x`.
    pub fn closest_point(&self, x: Point) -> Result<CpResult> {
        match self {
            Surface::Circle { center, radius } => {
                let d = [x[0] - center[0], x[1] - center[1], 0.0];
                let rho = point::norm(d);
                if rho < 1e-13 * radius.max(1.0) {
                    return Err(Error::MedialAxis { x, reason: "circle center" });
                }
                let cp = [center[0] + radius * d[0] / rho, center[1] + radius * d[1] / rho, 0.0];
                Ok(CpResult {
                    cp,
                    dist: point::dist(x, cp),
                    param: Some([d[1].atan2(d[0]), 0.0]),
                })
            }
            Surface::Sphere { center, radius } => {
                let d = point::sub(x, *center);
                let rho = point::norm(d);
                if rho < 1e-13 * radius.max(1.0) {
                    return Err(Error::MedialAxis { x, reason: "sphere center" });
                }
                let cp = point::add(*center, point::scale(d, radius / rho));
                let theta = d[1].atan2(d[0]);
                let phi = (d[2] / rho).clamp(-1.0, 1.0).acos();
                Ok(CpResult { cp, dist: point::dist(x, cp), param: Some([theta, phi]) })
            }
            Surface::Torus { center, major, minor } => {
                let d = point::sub(x, *center);
                let rho = (d[0] * d[0] + d[1] * d[1]).sqrt();
                if rho < 1e-13 * major.max(1.0) {
                    return Err(Error::MedialAxis { x, reason: "torus axis" });
                }
                let ring = [major * d[0] / rho, major * d[1] / rho, 0.0];
                let tube = point::sub(d, ring);
                let tube_len = point::norm(tube);
                if tube_len < 1e-13 * minor.max(1.0) {
                    return Err(Error::MedialAxis { x, reason: "torus center ring" });
                }
                let cp = point::add(*center, point::add(ring, point::scale(tube, minor / tube_len)));
                let theta = d[1].atan2(d[0]);
                let phi = d[2].atan2(rho - major);
                Ok(CpResult { cp, dist: point::dist(x, cp), param: Some([theta, phi]) })
            }
            Surface::SplineCurve { spline, seeds } => curve_closest_point(spline, seeds, x),
            Surface::Dziuk { seeds } => dziuk_closest_point(seeds, x),
        }
    }

    /// `n` deterministic, quasi-uniform samples `(point, param)`.
    pub fn samples(&self, n: usize) -> Vec<(Point, [f64; 2])> {
        assert!(n >= 1);
        match self {
            Surface::Circle { center, radius } => (0..n)
                .map(|i| {
                    let theta = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                    (
                        [
                            center[0] + radius * theta.cos(),
                            center[1] + radius * theta.sin(),
                            0.0,
                        ],
                        [theta, 0.0],
                    )
                })
                .collect(),
            Surface::Sphere { center, radius } => fibonacci_sphere(n)
                .into_iter()
                .map(|(p, par)| (point::add(*center, point::scale(p, *radius)), par))
                .collect(),
            Surface::Torus { center, major, minor } => {
                let golden = 0.618_033_988_749_894_9_f64;
                (0..n)
                    .map(|i| {
                        let theta = 2.0 * std::f64::consts::PI * ((i as f64 * golden) % 1.0);
                        let phi = 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / n as f64;
                        let ring = major + minor * phi.cos();
                        (
                            point::add(
                                *center,
                                [ring * theta.cos(), ring * theta.sin(), minor * phi.sin()],
                            ),
                            [theta, phi],
                        )
                    })
                    .collect()
            }
            Surface::SplineCurve { spline, .. } => (0..n)
                .map(|i| {
                    let t = spline.period() * i as f64 / n as f64;
                    let p = spline.position(t);
                    ([p[0], p[1], 0.0], [t, 0.0])
                })
                .collect(),
            Surface::Dziuk { .. } => {
                fibonacci_sphere(n).into_iter().map(|(p, par)| (dziuk_map(p), par)).collect()
            }
        }
    }

    /// Outward unit normal at a surface point.
    pub fn normal(&self, y: Point) -> Result<Point> {
        match self {
            Surface::Circle { center, radius } => {
                let d = [y[0] - center[0], y[1] - center[1], 0.0];
                Ok(point::scale(d, 1.0 / radius))
            }
            Surface::Sphere { center, radius } => {
                Ok(point::scale(point::sub(y, *center), 1.0 / radius))
            }
            Surface::Torus { center, major, minor } => {
                let d = point::sub(y, *center);
                let rho = (d[0] * d[0] + d[1] * d[1]).sqrt();
                let ring = [major * d[0] / rho, major * d[1] / rho, 0.0];
                Ok(point::scale(point::sub(d, ring), 1.0 / minor))
            }
            Surface::SplineCurve { .. } => Err(Error::Unsupported("spline curve normals")),
            Surface::Dziuk { .. } => Ok(dziuk_normal(y)),
        }
    }

    /// True when `x` is certainly farther than `cutoff` from the surface, by
    /// a cheap seed-sample bound.  Used to avoid Newton iterations during
    /// band sweeps; analytic surfaces never skip (their queries are cheap).
    pub fn certainly_beyond(&self, x: Point, cutoff: f64) -> bool {
        match self {
            Surface::SplineCurve { seeds, .. } | Surface::Dziuk { seeds } => {
                // dist(x, S) ≥ dist(x, samples) − coverage radius, and the
                // coverage radius of a quasi-uniform sample set is bounded by
                // twice its worst nearest-neighbor spacing.
                seeds.coarse_distance(x) > cutoff + 2.0 * seeds.nn_gap()
            }
            _ => false,
        }
    }

    /// Defining-equation residual for test assertions: zero on the surface.
    pub fn defining_residual(&self, y: Point) -> f64 {
        match self {
            Surface::Circle { center, radius } => {
                (((y[0] - center[0]).powi(2) + (y[1] - center[1]).powi(2)).sqrt() - radius).abs()
            }
            Surface::Sphere { center, radius } => (point::dist(y, *center) - radius).abs(),
            Surface::Torus { center, major, minor } => {
                let d = point::sub(y, *center);
                let rho = (d[0] * d[0] + d[1] * d[1]).sqrt();
                (((rho - major).powi(2) + d[2] * d[2]).sqrt() - minor).abs()
            }
            Surface::SplineCurve { .. } => {
                // Distance to the curve itself.
                self.closest_point(y).map(|r| r.dist).unwrap_or(f64::INFINITY)
            }
            Surface::Dziuk { .. } => dziuk_phi(y).abs(),
        }
    }
}

/// `(x₁−x₃²)² + x₂² + x₃² − 1`.
pub fn dziuk_phi(y: Point) -> f64 {
    let w = y[0] - y[2] * y[2];
    w * w + y[1] * y[1] + y[2] * y[2] - 1.0
}

fn dziuk_grad(y: Point) -> Point {
    let w = y[0] - y[2] * y[2];
    [2.0 * w, 2.0 * y[1], 2.0 * y[2] * (1.0 - 2.0 * w)]
}

/// Unit normal `(w, x₂, x₃(1−2w)) / √(1 + 4x₃²(1−x₁−x₂²))` with `w = x₁−x₃²`.
fn dziuk_normal(y: Point) -> Point {
    let w = y[0] - y[2] * y[2];
    let v = [w, y[1], y[2] * (1.0 - 2.0 * w)];
    point::scale(v, 1.0 / point::norm(v))
}

/// Map a unit-sphere point `(w, b, c)` onto the surface: `x = (w + c², b, c)`.
fn dziuk_map(p: Point) -> Point {
    [p[0] + p[2] * p[2], p[1], p[2]]
}

/// Deterministic Fibonacci lattice on the unit sphere, with `[θ, φ]` params.
fn fibonacci_sphere(n: usize) -> Vec<(Point, [f64; 2])> {
    let golden = 0.618_033_988_749_894_9_f64;
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let theta = 2.0 * std::f64::consts::PI * ((i as f64 * golden) % 1.0);
            let p = [rho * theta.cos(), rho * theta.sin(), z];
            (p, [theta, z.clamp(-1.0, 1.0).acos()])
        })
        .collect()
}

/// Uniform-cell spatial index over a fixed set of seed samples.
#[derive(Debug, Clone)]
pub struct SeedIndex {
    samples: Vec<Point>,
    cell: f64,
    min: Point,
    dims: [i64; 3],
    buckets: Vec<Vec<u32>>,
    /// Largest nearest-neighbor spacing among the samples; bounds how far a
    /// surface point can be from its nearest sample.
    nn_gap: f64,
}

impl SeedIndex {
    fn new(samples: Vec<Point>) -> Self {
        assert!(!samples.is_empty());
        let bb = Aabb::of_points(&samples);
        let extent = (0..3).map(|k| bb.max[k] - bb.min[k]).fold(0.0f64, f64::max);
        // Aim for a handful of samples per cell.
        let cell = (2.0 * extent / (samples.len() as f64).cbrt().max(8.0)).max(1e-12);
        let dims = [
            ((bb.max[0] - bb.min[0]) / cell).floor() as i64 + 1,
            ((bb.max[1] - bb.min[1]) / cell).floor() as i64 + 1,
            ((bb.max[2] - bb.min[2]) / cell).floor() as i64 + 1,
        ];
        let mut buckets = vec![Vec::new(); (dims[0] * dims[1] * dims[2]) as usize];
        let cell_of = |p: &Point| -> usize {
            let ix = (((p[0] - bb.min[0]) / cell).floor() as i64).clamp(0, dims[0] - 1);
            let iy = (((p[1] - bb.min[1]) / cell).floor() as i64).clamp(0, dims[1] - 1);
            let iz = (((p[2] - bb.min[2]) / cell).floor() as i64).clamp(0, dims[2] - 1);
            ((ix * dims[1] + iy) * dims[2] + iz) as usize
        };
        for (i, p) in samples.iter().enumerate() {
            buckets[cell_of(p)].push(i as u32);
        }
        let mut index = Self { samples, cell, min: bb.min, dims, buckets, nn_gap: 0.0 };
        let mut gap: f64 = 0.0;
        for i in 0..index.samples.len() {
            let near = index.nearest(index.samples[i], 2);
            let other = if near[0] == i { near[1] } else { near[0] };
            gap = gap.max(point::dist(index.samples[i], index.samples[other]));
        }
        index.nn_gap = gap;
        index
    }

    /// Largest nearest-neighbor spacing among the seed samples.
    pub fn nn_gap(&self) -> f64 {
        self.nn_gap
    }

    fn max_gap(&self) -> f64 {
        self.cell * 3.0f64.sqrt()
    }

    /// Indices of the `k` nearest samples.  Exact: cell rings expand until no
    /// farther ring can hold a closer sample.
    fn nearest(&self, x: Point, k: usize) -> Vec<usize> {
        let coord = |v: f64, axis: usize| -> i64 {
            (((v - self.min[axis]) / self.cell).floor() as i64).clamp(0, self.dims[axis] - 1)
        };
        let (cx, cy, cz) = (coord(x[0], 0), coord(x[1], 1), coord(x[2], 2));
        let mut found: Vec<(f64, usize)> = Vec::new();
        let max_ring = self.dims[0] + self.dims[1] + self.dims[2];
        for ring in 0..=max_ring {
            if found.len() >= k {
                found.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                // Any sample in ring r is at least (r-1)·cell away.
                if found[k - 1].0 < (ring - 1).max(0) as f64 * self.cell {
                    break;
                }
            }
            for ix in (cx - ring).max(0)..=(cx + ring).min(self.dims[0] - 1) {
                for iy in (cy - ring).max(0)..=(cy + ring).min(self.dims[1] - 1) {
                    for iz in (cz - ring).max(0)..=(cz + ring).min(self.dims[2] - 1) {
                        let on_shell = (ix - cx).abs() == ring
                            || (iy - cy).abs() == ring
                            || (iz - cz).abs() == ring;
                        if !on_shell {
                            continue;
                        }
                        let b = ((ix * self.dims[1] + iy) * self.dims[2] + iz) as usize;
                        for &s in &self.buckets[b] {
                            found.push((point::dist(x, self.samples[s as usize]), s as usize));
                        }
                    }
                }
            }
        }
        found.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        found.truncate(k);
        found.into_iter().map(|(_, i)| i).collect()
    }

    /// Exact distance from `x` to the nearest seed sample.
    pub fn coarse_distance(&self, x: Point) -> f64 {
        let near = self.nearest(x, 1);
        point::dist(x, self.samples[near[0]])
    }
}

/// Newton minimization of the squared distance over a closed curve parameter.
fn curve_closest_point(spline: &SplineCurve, seeds: &SeedIndex, x: Point) -> Result<CpResult> {
    let period = spline.period();
    let seed_ids = seeds.nearest(x, 3);
    let mut minima: Vec<(f64, f64)> = Vec::new(); // (t, dist)
    let mut any_converged = false;
    for id in seed_ids {
        let mut t = period * id as f64 / seeds.samples.len() as f64;
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITERS {
            let (pos, d1, d2) = spline.eval(t);
            let r = [x[0] - pos[0], x[1] - pos[1]];
            let grad = -2.0 * (r[0] * d1[0] + r[1] * d1[1]);
            if grad.abs() <= NEWTON_GRAD_TOL {
                converged = true;
                break;
            }
            let hess = 2.0 * (d1[0] * d1[0] + d1[1] * d1[1]) - 2.0 * (r[0] * d2[0] + r[1] * d2[1]);
            let step = if hess.abs() > 1e-14 && hess > 0.0 {
                -grad / hess
            } else {
                -grad.signum() * period / 256.0
            };
            t = spline.wrap(t + step.clamp(-period / 8.0, period / 8.0));
        }
        if converged {
            any_converged = true;
            let pos = spline.position(t);
            let d = ((x[0] - pos[0]).powi(2) + (x[1] - pos[1]).powi(2)).sqrt();
            if !minima.iter().any(|(t0, _)| {
                let sep = (t - t0).abs().min(period - (t - t0).abs());
                sep < 1e-9 * period
            }) {
                minima.push((t, d));
            }
        }
    }
    if !any_converged {
        return Err(Error::NoConvergence { x });
    }
    minima.sort_by(|a, b| a.1.total_cmp(&b.1));
    if minima.len() > 1 {
        let (t0, d0) = minima[0];
        let (t1, d1) = minima[1];
        let sep = (t1 - t0).abs().min(period - (t1 - t0).abs());
        if sep > period / 32.0 && (d1 - d0).abs() <= 1e-9 * (1.0 + d0) {
            return Err(Error::MedialAxis { x, reason: "equidistant curve arcs" });
        }
    }
    let (t, dist) = minima[0];
    let pos = spline.position(t);
    Ok(CpResult { cp: [pos[0], pos[1], 0.0], dist, param: Some([t, 0.0]) })
}

/// Constrained Newton on the KKT system of `min ‖x−y‖²  s.t.  φ(y)=0`.
fn dziuk_closest_point(seeds: &SeedIndex, x: Point) -> Result<CpResult> {
    let mut minima: Vec<(Point, f64)> = Vec::new();
    for id in seeds.nearest(x, 3) {
        if let Some(y) = dziuk_newton(seeds.samples[id], x) {
            let d = point::dist(x, y);
            if !minima.iter().any(|(p, _)| point::dist(*p, y) < 1e-8) {
                minima.push((y, d));
            }
        }
    }
    if minima.is_empty() {
        return Err(Error::NoConvergence { x });
    }
    minima.sort_by(|a, b| a.1.total_cmp(&b.1));
    if minima.len() > 1 && (minima[1].1 - minima[0].1).abs() <= 1e-10 * (1.0 + minima[0].1) {
        return Err(Error::MedialAxis { x, reason: "equidistant level-set sheets" });
    }
    let (cp, dist) = minima[0];
    Ok(CpResult { cp, dist, param: None })
}

fn dziuk_newton(seed: Point, x: Point) -> Option<Point> {
    let mut y = seed;
    let mut mu = 0.0;
    let residual = |y: Point, mu: f64| -> [f64; 4] {
        let g = dziuk_grad(y);
        [
            2.0 * (y[0] - x[0]) + mu * g[0],
            2.0 * (y[1] - x[1]) + mu * g[1],
            2.0 * (y[2] - x[2]) + mu * g[2],
            dziuk_phi(y),
        ]
    };
    let norm4 = |f: &[f64; 4]| f.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut f = residual(y, mu);
    for _ in 0..NEWTON_MAX_ITERS {
        if norm4(&f) <= NEWTON_GRAD_TOL {
            return Some(y);
        }
        let g = dziuk_grad(y);
        let w = y[0] - y[2] * y[2];
        // Hessian of φ.
        let h13 = -4.0 * y[2];
        let h33 = 8.0 * y[2] * y[2] - 4.0 * w + 2.0;
        #[rustfmt::skip]
        let jac = [
            [2.0 + 2.0 * mu, 0.0,             mu * h13,        g[0]],
            [0.0,            2.0 + 2.0 * mu,  0.0,             g[1]],
            [mu * h13,       0.0,             2.0 + mu * h33,  g[2]],
            [g[0],           g[1],            g[2],            0.0],
        ];
        let rhs = [-f[0], -f[1], -f[2], -f[3]];
        let delta = solve4(jac, rhs)?;
        // Backtracking keeps the iteration from overshooting the sheet.
        let mut lambda = 1.0;
        loop {
            let y_try =
                [y[0] + lambda * delta[0], y[1] + lambda * delta[1], y[2] + lambda * delta[2]];
            let mu_try = mu + lambda * delta[3];
            let f_try = residual(y_try, mu_try);
            if norm4(&f_try) < norm4(&f) || lambda < 1e-6 {
                y = y_try;
                mu = mu_try;
                f = f_try;
                break;
            }
            lambda *= 0.5;
        }
    }
    if norm4(&f) <= NEWTON_GRAD_TOL {
        Some(y)
    } else {
        None
    }
}

/// Direct 4×4 solve with partial pivoting.
fn solve4(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> Option<[f64; 4]> {
    for k in 0..4 {
        let piv = (k..4).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
        if a[piv][k].abs() < 1e-300 {
            return None;
        }
        a.swap(k, piv);
        b.swap(k, piv);
        for i in k + 1..4 {
            let m = a[i][k] / a[k][k];
            for j in k..4 {
                a[i][j] -= m * a[k][j];
            }
            b[i] -= m * b[k];
        }
    }
    let mut x = [0.0; 4];
    for i in (0..4).rev() {
        let mut s = b[i];
        for j in i + 1..4 {
            s -= a[i][j] * x[j];
        }
        x[i] = s / a[i][i];
    }
    Some(x)
}

#[cfg(test)]
mod tests;
