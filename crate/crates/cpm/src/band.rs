//! Banded uniform Cartesian grids around a surface.
//!
//! The band collects every grid point within `λ·Δx` of the surface, where
//!
//! ```text
//! λ = sqrt((dim−1)·((deg+1)/2)² + (1 + (deg+1)/2)²)
//! ```
//!
//! for the largest interpolation degree `deg` any operator will use.  That
//! radius covers the degree-`deg` interpolation stencil of any surface point
//! *and* the difference-stencil neighbors of every stencil point, so no
//! boundary condition is ever needed: operators only reference band columns.
//!
//! Points that appear in the interpolation stencil of some closest point are
//! flagged `Interp`; every extension matrix column lives there.  The
//! remaining points (`Edge`) pad the band so difference stencils close; their
//! Laplacian rows never influence the assembled system.

use crate::error::{Error, Result};
use crate::geometry::{CpResult, Surface};
use crate::interp::{anchor_offset, barycentric_weights_1d};
use crate::point::{MultiIndex, Point};
use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// Member of at least one closest-point interpolation stencil.
    Interp,
    /// Band padding outside every interpolation stencil.
    Edge,
}

/// `λ` such that the band radius is `λ·Δx`.
pub fn bandwidth_factor(dim: usize, max_degree: usize) -> f64 {
    let half = ((max_degree + 1) / 2) as f64;
    (((dim - 1) as f64) * half * half + (1.0 + half) * (1.0 + half)).sqrt()
}

#[derive(Debug, Clone)]
pub struct BandedGrid {
    pub dx: f64,
    pub origin: Point,
    pub dim: usize,
    pub max_degree: usize,
    /// Band radius `λ·Δx`.
    pub bandwidth: f64,
    points: Vec<MultiIndex>,
    cp: Vec<CpResult>,
    role: Vec<Role>,
}

/// Default origin: surface bounding box corner minus `2·bandwidth`, snapped
/// down to a multiple of `snap_dx` so that coarser/finer grids nest.
pub fn default_origin(surface: &Surface, dx: f64, max_degree: usize, snap_dx: f64) -> Point {
    let bw = bandwidth_factor(surface.dim(), max_degree) * dx;
    let bb = surface.bounding_box();
    let mut origin = [0.0; 3];
    for k in 0..surface.dim() {
        origin[k] = ((bb.min[k] - 2.0 * bw) / snap_dx).floor() * snap_dx;
    }
    origin
}

/// Build the band around `surface` with spacing `dx`.  `max_degree` is the
/// largest interpolation degree any operator will need.  Pass `None` for the
/// default snapped origin.
pub fn build_band(
    surface: &Surface,
    dx: f64,
    max_degree: usize,
    origin: Option<Point>,
) -> Result<BandedGrid> {
    if !(dx > 0.0) {
        return Err(Error::InvalidConfig(format!("dx must be positive, got {dx}")));
    }
    if max_degree < 1 {
        return Err(Error::InvalidConfig("max_degree must be at least 1".into()));
    }
    let dim = surface.dim();
    let bw = bandwidth_factor(dim, max_degree) * dx;
    let eps = 1e-9 * dx;
    let origin = origin.unwrap_or_else(|| default_origin(surface, dx, max_degree, dx));
    let bb = surface.bounding_box();

    // Sweep the padded bounding box for points within the band radius.
    let mut hi = [0i64; 3];
    for k in 0..dim {
        if origin[k] > bb.min[k] - bw {
            return Err(Error::InvalidConfig(format!(
                "origin {origin:?} does not cover the surface bounding box"
            )));
        }
        hi[k] = ((bb.max[k] + 2.0 * bw - origin[k]) / dx).ceil() as i64;
    }
    let query = |mi: MultiIndex| -> Result<CpResult> {
        let x = grid_point(origin, dx, mi);
        match surface.closest_point(x) {
            Err(Error::MedialAxis { .. }) => {
                // Ambiguous closest points can sit inside coarse bands (e.g.
                // the torus axis once λ·Δx exceeds the reach).  Resolve the
                // tie deterministically with a tiny fixed perturbation; such
                // points never join an interpolation stencil.
                let nudge = 1e-7 * dx;
                surface.closest_point([x[0] + nudge, x[1] + 2.0 * nudge, x[2] + 3.0 * nudge])
            }
            other => other,
        }
    };

    let mut members: HashMap<MultiIndex, CpResult> = HashMap::new();
    for ix in 0..=hi[0] {
        for iy in 0..=hi[1] {
            for iz in 0..=if dim == 3 { hi[2] } else { 0 } {
                let mi = [ix, iy, iz];
                if surface.certainly_beyond(grid_point(origin, dx, mi), bw + eps) {
                    continue;
                }
                let r = query(mi)?;
                if r.dist <= bw + eps {
                    members.insert(mi, r);
                }
            }
        }
    }
    if members.is_empty() {
        return Err(Error::BandTooNarrow("no grid points within the band radius".into()));
    }

    // Mark interpolation stencils of every member's closest point; pull in
    // any stencil point or difference neighbor the sweep missed.  Newly added
    // points are processed in later rounds until nothing changes.
    let mut marked: HashMap<MultiIndex, ()> = HashMap::new();
    let mut pending: Vec<MultiIndex> = members.keys().copied().collect();
    pending.sort_unstable();
    let mut rounds = 0;
    while !pending.is_empty() {
        rounds += 1;
        if rounds > 16 {
            return Err(Error::BandTooNarrow(
                "stencil closure did not stabilize; surface features are below the grid scale"
                    .into(),
            ));
        }
        let batch = std::mem::take(&mut pending);
        let mut newly_marked = Vec::new();
        for mi in batch {
            let cp = members[&mi].cp;
            let base = stencil_base(origin, dx, cp, max_degree, dim);
            for off in stencil_offsets(max_degree, dim) {
                let s = [base[0] + off[0], base[1] + off[1], base[2] + off[2]];
                if marked.insert(s, ()).is_none() {
                    newly_marked.push(s);
                    if !members.contains_key(&s) {
                        let r = query(s)?;
                        if r.dist > bw + dx {
                            return Err(Error::BandTooNarrow(format!(
                                "stencil point {s:?} lies {} beyond the band radius",
                                r.dist - bw
                            )));
                        }
                        members.insert(s, r);
                        pending.push(s);
                    }
                }
            }
        }
        // Difference-stencil closure for points that just became Interp.
        for m in newly_marked {
            for k in 0..dim {
                for step in [-1i64, 1] {
                    let mut nb = m;
                    nb[k] += step;
                    if !members.contains_key(&nb) {
                        let r = query(nb)?;
                        members.insert(nb, r);
                        pending.push(nb);
                    }
                }
            }
        }
    }

    let mut points: Vec<MultiIndex> = members.keys().copied().collect();
    points.sort_unstable();
    let cp: Vec<CpResult> = points.iter().map(|mi| members[mi]).collect();
    let role: Vec<Role> = points
        .iter()
        .map(|mi| if marked.contains_key(mi) { Role::Interp } else { Role::Edge })
        .collect();
    Ok(BandedGrid { dx, origin, dim, max_degree, bandwidth: bw, points, cp, role })
}

fn grid_point(origin: Point, dx: f64, mi: MultiIndex) -> Point {
    [
        origin[0] + mi[0] as f64 * dx,
        origin[1] + mi[1] as f64 * dx,
        origin[2] + mi[2] as f64 * dx,
    ]
}

/// Lower-corner multi-index of the `(degree+1)^dim` stencil hypercube around
/// `q`; for odd degree the query lies in the middle cell.
pub fn stencil_base(origin: Point, dx: f64, q: Point, degree: usize, dim: usize) -> MultiIndex {
    let mut base = [0i64; 3];
    for k in 0..dim {
        let cell = ((q[k] - origin[k]) / dx).floor() as i64;
        base[k] = cell - anchor_offset(degree);
    }
    base
}

/// Multi-index offsets of a stencil hypercube, last dimension fastest.
pub fn stencil_offsets(degree: usize, dim: usize) -> Vec<MultiIndex> {
    let w = degree as i64 + 1;
    let mut out = Vec::with_capacity((w as usize).pow(dim as u32));
    let ymax = if dim >= 2 { w } else { 1 };
    let zmax = if dim == 3 { w } else { 1 };
    for i in 0..w {
        for j in 0..ymax {
            for l in 0..zmax {
                out.push([i, j, l]);
            }
        }
    }
    out
}

impl BandedGrid {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn n_interp(&self) -> usize {
        self.role.iter().filter(|r| **r == Role::Interp).count()
    }

    pub fn multi_index(&self, i: usize) -> MultiIndex {
        self.points[i]
    }

    pub fn point(&self, i: usize) -> Point {
        grid_point(self.origin, self.dx, self.points[i])
    }

    pub fn cp(&self, i: usize) -> &CpResult {
        &self.cp[i]
    }

    pub fn role(&self, i: usize) -> Role {
        self.role[i]
    }

    /// Row id of a multi-index, if it is in the band.
    pub fn index_of(&self, mi: &MultiIndex) -> Option<usize> {
        self.points.binary_search(mi).ok()
    }

    /// Stencil base and band row ids for interpolating at `q`; errors if any
    /// stencil point escapes the band.
    pub fn locate_stencil(&self, q: Point, degree: usize) -> Result<(MultiIndex, Vec<usize>)> {
        let base = stencil_base(self.origin, self.dx, q, degree, self.dim);
        let offsets = stencil_offsets(degree, self.dim);
        let mut ids = Vec::with_capacity(offsets.len());
        for off in offsets {
            let mi = [base[0] + off[0], base[1] + off[1], base[2] + off[2]];
            match self.index_of(&mi) {
                Some(id) => ids.push(id),
                None => return Err(Error::StencilEscapesBand { x: q }),
            }
        }
        Ok((base, ids))
    }

    /// Band row ids and tensor-product interpolation weights at `q`.
    pub fn interp_row(&self, q: Point, degree: usize) -> Result<Vec<(usize, f64)>> {
        let (base, ids) = self.locate_stencil(q, degree)?;
        let anchor = anchor_offset(degree);
        let mut weights_per_dim = Vec::with_capacity(self.dim);
        for k in 0..self.dim {
            let node = self.origin[k] + (base[k] + anchor) as f64 * self.dx;
            let a = (q[k] - node).clamp(0.0, self.dx);
            weights_per_dim.push(barycentric_weights_1d(degree, a, self.dx));
        }
        let offsets = stencil_offsets(degree, self.dim);
        let mut row = Vec::with_capacity(ids.len());
        for (id, off) in ids.iter().zip(offsets) {
            let mut w = 1.0;
            for (k, wk) in weights_per_dim.iter().enumerate() {
                w *= wk[off[k] as usize];
            }
            if w != 0.0 {
                row.push((*id, w));
            }
        }
        Ok(row)
    }

    /// Debug/test dump: `ix iy [iz] x y [z] cpx cpy [cpz] dist role` as CSV.
    pub fn write_band_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        if self.dim == 3 {
            writeln!(f, "ix,iy,iz,x,y,z,cpx,cpy,cpz,dist,role")?;
        } else {
            writeln!(f, "ix,iy,x,y,cpx,cpy,dist,role")?;
        }
        for i in 0..self.n() {
            let mi = self.points[i];
            let p = self.point(i);
            let r = &self.cp[i];
            let role = match self.role[i] {
                Role::Interp => "interp",
                Role::Edge => "edge",
            };
            if self.dim == 3 {
                writeln!(
                    f,
                    "{},{},{},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{}",
                    mi[0], mi[1], mi[2], p[0], p[1], p[2], r.cp[0], r.cp[1], r.cp[2], r.dist, role
                )?;
            } else {
                writeln!(
                    f,
                    "{},{},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{}",
                    mi[0], mi[1], p[0], p[1], r.cp[0], r.cp[1], r.dist, role
                )?;
            }
        }
        Ok(())
    }

    /// Test-support constructor for synthetic grids.
    #[doc(hidden)]
    pub fn from_raw(
        dx: f64,
        origin: Point,
        dim: usize,
        mut entries: Vec<(MultiIndex, CpResult, Role)>,
    ) -> Self {
        entries.sort_unstable_by_key(|e| e.0);
        let points: Vec<MultiIndex> = entries.iter().map(|e| e.0).collect();
        let cp: Vec<CpResult> = entries.iter().map(|e| e.1).collect();
        let role: Vec<Role> = entries.iter().map(|e| e.2).collect();
        let bandwidth = bandwidth_factor(dim.max(2), 3) * dx;
        BandedGrid { dx, origin, dim, max_degree: 3, bandwidth, points, cp, role }
    }
}
