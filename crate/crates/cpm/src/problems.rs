//! Manufactured test problems: exact solution and matching right-hand side
//! on each surface, plus the surface error metric.
//!
//! Every problem solves `−Δ_S u + c·u = f` (or its scalar-diffusivity
//! variant `−∇_S·(a ∇_S u) + c·u = f`) with a known `u`, so convergence
//! orders can be measured.  Right-hand sides are analytic except for the
//! level-set surface, where tangential divergence is differenced numerically
//! from analytic fields (contributing error far below discretization level).

use crate::band::BandedGrid;
use crate::error::{Error, Result};
use crate::geometry::{CpResult, Surface};
use crate::linalg::Vector;
use crate::point::Point;

pub const TORUS_MAJOR: f64 = 1.2;
pub const TORUS_MINOR: f64 = 0.6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    /// `u(θ) = sin θ + sin 12θ` on the unit circle.
    Circle,
    /// `u(t) = sin(2πt/T) + sin(20πt/T)` on the bean-shaped spline.
    Bean,
    /// Degree-5 spherical harmonic on the unit sphere.
    SphereHarmonic,
    /// `u(θ,φ) = sin 3θ + cos 2φ` on the torus (R = 1.2, r = 0.6).
    Torus,
    /// `u(x) = x₁x₂` on the level-set surface.
    Dziuk,
    /// Variable diffusivity `a(φ) = cos φ + 1.5` on the unit sphere.
    SphereVarCoef,
}

#[derive(Debug, Clone)]
pub struct Problem {
    pub kind: ProblemKind,
    pub surface: Surface,
    pub c: f64,
}

/// Build a named problem.  `bean_points` overrides the canonical bean
/// control polygon (only meaningful for `bean`).
pub fn make_problem(name: &str, c: f64, bean_points: Option<Vec<[f64; 2]>>) -> Result<Problem> {
    let (kind, surface) = match name {
        "circle" => (ProblemKind::Circle, Surface::unit_circle()),
        "bean" => {
            let surface = match bean_points {
                Some(pts) => Surface::spline(crate::geometry::SplineCurve::new(pts)?),
                None => crate::geometry::bean_curve(),
            };
            (ProblemKind::Bean, surface)
        }
        "sphere_harmonic" => (ProblemKind::SphereHarmonic, Surface::unit_sphere()),
        "torus" => (ProblemKind::Torus, Surface::torus([0.0; 3], TORUS_MAJOR, TORUS_MINOR)),
        "dziuk" => (ProblemKind::Dziuk, Surface::dziuk()),
        "sphere_varcoef" => (ProblemKind::SphereVarCoef, Surface::unit_sphere()),
        other => return Err(Error::UnknownProblem(other.to_string())),
    };
    Ok(Problem { kind, surface, c })
}

pub const PROBLEM_NAMES: [&str; 6] =
    ["circle", "bean", "sphere_harmonic", "torus", "dziuk", "sphere_varcoef"];

impl Problem {
    /// Exact solution at a surface point (`param` from the sampler or the
    /// closest-point query when the evaluation needs it).
    pub fn u_exact(&self, pos: Point, param: Option<[f64; 2]>) -> f64 {
        match self.kind {
            ProblemKind::Circle => {
                let theta = param.map(|p| p[0]).unwrap_or_else(|| pos[1].atan2(pos[0]));
                theta.sin() + (12.0 * theta).sin()
            }
            ProblemKind::Bean => {
                let t = param.expect("bean evaluation needs the curve parameter")[0];
                let spline = self.bean_spline();
                let omega = 2.0 * std::f64::consts::PI / spline.period();
                (omega * t).sin() + (10.0 * omega * t).sin()
            }
            ProblemKind::SphereHarmonic => {
                let (theta, phi) = sphere_angles(pos, param);
                (3.0 * theta).cos()
                    * phi.sin().powi(3)
                    * (9.0 * phi.cos() * phi.cos() - 1.0)
            }
            ProblemKind::Torus => {
                let (theta, phi) = torus_angles(pos, param);
                (3.0 * theta).sin() + (2.0 * phi).cos()
            }
            ProblemKind::Dziuk => pos[0] * pos[1],
            ProblemKind::SphereVarCoef => {
                let (_, phi) = sphere_angles(pos, param);
                phi.cos()
            }
        }
    }

    /// Right-hand side `f = −Δ_S u + c·u` (resp. the diffusivity form) at a
    /// surface point.
    pub fn rhs(&self, pos: Point, param: Option<[f64; 2]>) -> f64 {
        let c = self.c;
        match self.kind {
            ProblemKind::Circle => {
                let theta = param.map(|p| p[0]).unwrap_or_else(|| pos[1].atan2(pos[0]));
                // −u'' on the unit circle.
                let neg_lap = theta.sin() + 144.0 * (12.0 * theta).sin();
                neg_lap + c * self.u_exact(pos, param)
            }
            ProblemKind::Bean => {
                let t = param.expect("bean evaluation needs the curve parameter")[0];
                let spline = self.bean_spline();
                let omega = 2.0 * std::f64::consts::PI / spline.period();
                let (o1, o2) = (omega, 10.0 * omega);
                let du = o1 * (o1 * t).cos() + o2 * (o2 * t).cos();
                let ddu = -o1 * o1 * (o1 * t).sin() - o2 * o2 * (o2 * t).sin();
                // Δ_S u = ü/g² − u̇ g'/g³ in the arclength metric g = |s'|.
                let (g, gp) = spline.speed(t);
                let lap = ddu / (g * g) - du * gp / (g * g * g);
                -lap + c * self.u_exact(pos, param)
            }
            ProblemKind::SphereHarmonic => {
                // Δ_S u = −30 u for this degree-5 harmonic.
                (30.0 + c) * self.u_exact(pos, param)
            }
            ProblemKind::Torus => {
                let (theta, phi) = torus_angles(pos, param);
                let (big_r, r) = (TORUS_MAJOR, TORUS_MINOR);
                let ring = big_r + r * phi.cos();
                9.0 * (3.0 * theta).sin() / (ring * ring)
                    - 2.0 * phi.sin() * (2.0 * phi).sin() / (r * ring)
                    + 4.0 * (2.0 * phi).cos() / (r * r)
                    + c * self.u_exact(pos, param)
            }
            ProblemKind::Dziuk => dziuk_neg_surface_divergence(pos) + c * pos[0] * pos[1],
            ProblemKind::SphereVarCoef => {
                let (_, phi) = sphere_angles(pos, param);
                2.0 * phi.cos() * (phi.cos() + 1.5) - phi.sin() * phi.sin()
                    + c * self.u_exact(pos, param)
            }
        }
    }

    /// Scalar diffusivity at a surface point, when the problem has one.
    pub fn diffusivity(&self, pos: Point, param: Option<[f64; 2]>) -> Option<f64> {
        match self.kind {
            ProblemKind::SphereVarCoef => {
                let (_, phi) = sphere_angles(pos, param);
                Some(phi.cos() + 1.5)
            }
            _ => None,
        }
    }

    pub fn has_diffusivity(&self) -> bool {
        self.kind == ProblemKind::SphereVarCoef
    }

    /// Discrete right-hand side: `f_i = f(cp(x_i))`.
    pub fn rhs_vector(&self, grid: &BandedGrid) -> Vector {
        (0..grid.n())
            .map(|i| {
                let r: &CpResult = grid.cp(i);
                self.rhs(r.cp, r.param)
            })
            .collect()
    }

    /// Diffusivity at every band closest point, when the problem has one.
    pub fn diffusivity_vector(&self, grid: &BandedGrid) -> Option<Vector> {
        if !self.has_diffusivity() {
            return None;
        }
        Some(
            (0..grid.n())
                .map(|i| {
                    let r = grid.cp(i);
                    self.diffusivity(r.cp, r.param).expect("diffusivity")
                })
                .collect(),
        )
    }

    /// Sample count used for error measurement.
    pub fn default_error_samples(&self) -> usize {
        match self.kind {
            ProblemKind::Circle | ProblemKind::Bean => 1000,
            _ => 10_000,
        }
    }

    /// Deterministic surface samples for error measurement: parameter grids
    /// for sphere and torus, quasi-uniform samplers otherwise.
    pub fn error_sample_points(&self, n: usize) -> Vec<(Point, [f64; 2])> {
        match self.kind {
            ProblemKind::SphereHarmonic | ProblemKind::SphereVarCoef => {
                let k = (n as f64).sqrt().round().max(2.0) as usize;
                let mut out = Vec::with_capacity(k * k);
                for i in 0..k {
                    let theta = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
                    for j in 0..k {
                        let phi = std::f64::consts::PI * (j as f64 + 0.5) / k as f64;
                        out.push((
                            [phi.sin() * theta.cos(), phi.sin() * theta.sin(), phi.cos()],
                            [theta, phi],
                        ));
                    }
                }
                out
            }
            ProblemKind::Torus => {
                let k = (n as f64).sqrt().round().max(2.0) as usize;
                let mut out = Vec::with_capacity(k * k);
                for i in 0..k {
                    let theta = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
                    for j in 0..k {
                        let phi = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / k as f64;
                        let ring = TORUS_MAJOR + TORUS_MINOR * phi.cos();
                        out.push((
                            [ring * theta.cos(), ring * theta.sin(), TORUS_MINOR * phi.sin()],
                            [theta, phi],
                        ));
                    }
                }
                out
            }
            _ => self.surface.samples(n),
        }
    }

    fn bean_spline(&self) -> &crate::geometry::SplineCurve {
        match &self.surface {
            Surface::SplineCurve { spline, .. } => spline,
            _ => unreachable!("bean problem carries a spline surface"),
        }
    }
}

fn sphere_angles(pos: Point, param: Option<[f64; 2]>) -> (f64, f64) {
    match param {
        Some([theta, phi]) => (theta, phi),
        None => {
            let rho = (pos[0] * pos[0] + pos[1] * pos[1] + pos[2] * pos[2]).sqrt();
            (pos[1].atan2(pos[0]), (pos[2] / rho).clamp(-1.0, 1.0).acos())
        }
    }
}

fn torus_angles(pos: Point, param: Option<[f64; 2]>) -> (f64, f64) {
    match param {
        Some([theta, phi]) => (theta, phi),
        None => {
            let rho = (pos[0] * pos[0] + pos[1] * pos[1]).sqrt();
            (pos[1].atan2(pos[0]), pos[2].atan2(rho - TORUS_MAJOR))
        }
    }
}

/// `−∇_S·v` for `v = ∇_S(x₁x₂)` on the level-set surface, by central
/// differences (step 1e−5) of the analytic tangential gradient field.
fn dziuk_neg_surface_divergence(pos: Point) -> f64 {
    let v = |x: Point| -> Point {
        let grad_u = [x[1], x[0], 0.0];
        let w = x[0] - x[2] * x[2];
        let raw = [w, x[1], x[2] * (1.0 - 2.0 * w)];
        let len = (raw[0] * raw[0] + raw[1] * raw[1] + raw[2] * raw[2]).sqrt();
        let n = [raw[0] / len, raw[1] / len, raw[2] / len];
        let gn = grad_u[0] * n[0] + grad_u[1] * n[1] + grad_u[2] * n[2];
        [grad_u[0] - gn * n[0], grad_u[1] - gn * n[1], grad_u[2] - gn * n[2]]
    };
    let h = 1e-5;
    let mut jac = [[0.0; 3]; 3]; // jac[j][k] = ∂v_j/∂x_k
    for k in 0..3 {
        let mut xp = pos;
        xp[k] += h;
        let mut xm = pos;
        xm[k] -= h;
        let (vp, vm) = (v(xp), v(xm));
        for j in 0..3 {
            jac[j][k] = (vp[j] - vm[j]) / (2.0 * h);
        }
    }
    let w = pos[0] - pos[2] * pos[2];
    let raw = [w, pos[1], pos[2] * (1.0 - 2.0 * w)];
    let len = (raw[0] * raw[0] + raw[1] * raw[1] + raw[2] * raw[2]).sqrt();
    let n = [raw[0] / len, raw[1] / len, raw[2] / len];
    let trace = jac[0][0] + jac[1][1] + jac[2][2];
    let mut ntjn = 0.0;
    for j in 0..3 {
        let row_dot_n = jac[j][0] * n[0] + jac[j][1] * n[1] + jac[j][2] * n[2];
        ntjn += row_dot_n * n[j];
    }
    -(trace - ntjn)
}

/// Relative ∞-norm surface error: cubic interpolation of `u_h` at sample
/// points against the exact solution.
pub fn surface_error(
    grid: &BandedGrid,
    u_h: &[f64],
    problem: &Problem,
    n_samples: usize,
) -> Result<f64> {
    if u_h.len() != grid.n() {
        return Err(Error::DimMismatch("solution length vs band size".into()));
    }
    let samples = problem.error_sample_points(n_samples);
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for (pos, param) in samples {
        let row = grid.interp_row(pos, 3)?;
        let interp: f64 = row.iter().map(|(j, w)| w * u_h[*j]).sum();
        let exact = problem.u_exact(pos, Some(param));
        worst = worst.max((interp - exact).abs());
        scale = scale.max(exact.abs());
    }
    Ok(worst / scale)
}
