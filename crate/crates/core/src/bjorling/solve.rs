use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{quad_error, BjorlingData, BjorlingError, Interval, WeierstrassData, X_NAMES};
use crate::quad::{self, QuadSettings};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Axis-aligned rectangle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rect {
    pub center: [f64; 2],
    pub half_u: f64,
    pub half_v: f64,
}

impl Rect {
    pub fn new(center: Complex64, half_u: f64, half_v: f64) -> Self {
        Self {
            center: [center.re, center.im],
            half_u,
            half_v,
        }
    }

    /// Square of half-width `1.2 |I| / 2` centred on the midpoint of `I`.
    pub fn default_for(interval: Interval) -> Self {
        let r = 0.6 * interval.len();
        Self::new(Complex64::new(interval.mid(), 0.0), r, r)
    }

    /// Default square with the half-width capped at `max_half`.
    pub fn default_clipped(interval: Interval, max_half: f64) -> Self {
        let mut r = Self::default_for(interval);
        r.half_v = r.half_v.min(max_half);
        r
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(self.center[0], self.center[1])
    }

    pub fn contains(&self, z: Complex64) -> bool {
        let c = self.center();
        let slack = 1e-12;
        (z.re - c.re).abs() <= self.half_u + slack && (z.im - c.im).abs() <= self.half_v + slack
    }

    /// Whether the closed interval lies on the real axis strictly inside.
    pub fn contains_interval(&self, iv: Interval) -> bool {
        let c = self.center();
        c.im.abs() < self.half_v && iv.a > c.re - self.half_u && iv.b < c.re + self.half_u
    }

    /// Grid point `(i, j)` of an `nu x nv` lattice spanning the rectangle.
    pub fn grid_point(&self, i: usize, j: usize, nu: usize, nv: usize) -> Complex64 {
        let c = self.center();
        let s = |k: usize, n: usize| -1.0 + 2.0 * k as f64 / (n - 1) as f64;
        Complex64::new(c.re + self.half_u * s(i, nu), c.im + self.half_v * s(j, nv))
    }
}

fn integrand(
    data: &BjorlingData,
) -> impl Fn(Complex64) -> Result<[Complex64; 3], BjorlingError> + '_ {
    move |w| {
        let g = data.gamma_prime_at(w)?;
        let l = data.l_at(w)?;
        Ok([g[0] - I * l[0], g[1] - I * l[1], g[2] - I * l[2]])
    }
}

/// `X(z) = Re ∫ (γ' - iL) dw` along the segment from the base point to `z`,
/// so `X(u0) = 0`.
pub fn solve(data: &BjorlingData, z: Complex64) -> Result<[f64; 3], BjorlingError> {
    solve_along(data, &[z])
}

/// As [`solve`], along the polyline base point `-> points[0] -> ... -> z`.
pub fn solve_along(data: &BjorlingData, points: &[Complex64]) -> Result<[f64; 3], BjorlingError> {
    let mut path = Vec::with_capacity(points.len() + 1);
    path.push(Complex64::new(data.base(), 0.0));
    path.extend_from_slice(points);
    let f = integrand(data);
    let s = quad::integrate_polyline(&f, &path, &QuadSettings::default())
        .map_err(|e| quad_error(e, &X_NAMES))?;
    Ok(s.map(|c| c.re))
}

/// `Re ∫ Φ` from the base point to `z` with `Φ` built from `(g, f)`.
///
/// Equals `(2X1, 2X2, -2X3)` for `X = solve(data, z)`.
pub fn reconstruct_from_weierstrass(
    data: &BjorlingData,
    z: Complex64,
) -> Result<[f64; 3], BjorlingError> {
    let w = WeierstrassData::new(data);
    let f = |p: Complex64| w.phi(p);
    let s = quad::integrate_segment(
        &f,
        Complex64::new(data.base(), 0.0),
        z,
        &QuadSettings::default(),
    )
    .map_err(|e| quad_error(e, &["Phi_1", "Phi_2", "Phi_3"]))?;
    Ok(s.map(|c| c.re))
}

const UNIMODULAR_TOL: f64 = 1e-6;
const UNIMODULAR_GRID: usize = 11;

/// True when `||g(z)| - 1|` exceeds `1e-6` somewhere on an off-axis grid.
pub fn check_g_nonunimodular(data: &BjorlingData, domain: &Rect) -> bool {
    let w = WeierstrassData::new(data);
    let n = UNIMODULAR_GRID;
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter_map(|(i, j)| {
            let z = domain.grid_point(i, j, n, n);
            (z.im.abs() > 1e-3 * domain.half_v).then_some(z)
        })
        .filter_map(|z| w.g(z).ok())
        .any(|(g, _)| (g.norm() - 1.0).abs() > UNIMODULAR_TOL)
}

/// Maxface sampled on a rectangular grid.
#[derive(Debug, Clone)]
pub struct MaxfaceSolution {
    pub data: BjorlingData,
    pub domain: Rect,
    pub nu: usize,
    pub nv: usize,
    /// `X` at grid point `(i, j)`, stored at `i * nv + j`.
    pub values: Vec<[f64; 3]>,
    /// `γ(u0)`, the translation removed by the solver.
    pub base_value: [f64; 3],
}

impl MaxfaceSolution {
    /// Solves on the grid in parallel.
    pub fn compute(
        data: &BjorlingData,
        domain: Rect,
        nu: usize,
        nv: usize,
    ) -> Result<Self, BjorlingError> {
        if nu < 2 || nv < 2 {
            return Err(BjorlingError::Grid { nu, nv });
        }
        let values = (0..nu * nv)
            .into_par_iter()
            .map(|k| solve(data, domain.grid_point(k / nv, k % nv, nu, nv)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            data: data.clone(),
            domain,
            nu,
            nv,
            values,
            base_value: data.gamma_at(data.base())?,
        })
    }

    pub fn z(&self, i: usize, j: usize) -> Complex64 {
        self.domain.grid_point(i, j, self.nu, self.nv)
    }

    pub fn value(&self, i: usize, j: usize) -> [f64; 3] {
        self.values[i * self.nv + j]
    }

    /// Grid value translated back by `γ(u0)`.
    pub fn placed(&self, i: usize, j: usize) -> [f64; 3] {
        let x = self.value(i, j);
        [0, 1, 2].map(|c| x[c] + self.base_value[c])
    }
}

/// Worst boundary-condition residuals along the interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryCheck {
    /// `max |X(u,0) - (γ(u) - γ(u0))|`, divided by `max(1, max |γ|)`.
    pub position: f64,
    /// `max |∂X/∂v(u,0) - L(u)|` by central differences.
    pub normal: f64,
}

pub const BOUNDARY_STEP: f64 = 1e-5;

/// Checks `X(u,0) = γ(u) - γ(u0)` and `X_v(u,0) = L(u)` at `points` points.
pub fn check_boundary(data: &BjorlingData, points: usize) -> Result<BoundaryCheck, BjorlingError> {
    let g0 = data.gamma_at(data.base())?;
    let us = data.interval().linspace(points);
    let rows = us
        .par_iter()
        .map(|&u| {
            let x = solve(data, Complex64::new(u, 0.0))?;
            let g = data.gamma_at(u)?;
            let up = solve(data, Complex64::new(u, BOUNDARY_STEP))?;
            let dn = solve(data, Complex64::new(u, -BOUNDARY_STEP))?;
            let l = data.l_real(u)?;
            let mut pos = 0.0f64;
            let mut nrm = 0.0f64;
            let mut scale = 0.0f64;
            for c in 0..3 {
                pos = pos.max((x[c] - (g[c] - g0[c])).abs());
                nrm = nrm.max(((up[c] - dn[c]) / (2.0 * BOUNDARY_STEP) - l[c]).abs());
                scale = scale.max(g[c].abs());
            }
            Ok((pos, nrm, scale))
        })
        .collect::<Result<Vec<_>, BjorlingError>>()?;
    let scale = rows.iter().map(|r| r.2).fold(1.0, f64::max);
    Ok(BoundaryCheck {
        position: rows.iter().map(|r| r.0).fold(0.0, f64::max) / scale,
        normal: rows.iter().map(|r| r.1).fold(0.0, f64::max),
    })
}
