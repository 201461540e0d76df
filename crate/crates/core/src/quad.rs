//! Adaptive Gauss–Legendre quadrature of holomorphic integrands along
//! straight segments of the complex plane.
//!
//! Each panel is integrated with a 15-point rule; a panel is accepted when
//! the sum over its two halves agrees with the whole-panel estimate to the
//! panel's share of the tolerance, otherwise it is bisected.

use std::sync::OnceLock;

use num_complex::Complex64;
use thiserror::Error;

use crate::expr::EvalError;

pub const PANEL_POINTS: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSettings {
    /// Absolute tolerance per component.
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadSettings {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            max_depth: 40,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError<E = EvalError> {
    #[error("integrand failed at {at}: {source}")]
    Integrand { at: Complex64, source: E },
    #[error("no convergence in component {component} (error estimate {estimate:e}) near {at}")]
    NoConvergence {
        component: usize,
        estimate: f64,
        at: Complex64,
    },
}

/// Nodes and weights of the Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

// (P_n(x), P_n'(x)) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn rule15() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(PANEL_POINTS))
}

type Vec3c = [Complex64; 3];

fn panel<F, E>(f: &F, a: Complex64, b: Complex64) -> Result<Vec3c, QuadError<E>>
where
    F: Fn(Complex64) -> Result<Vec3c, E>,
{
    let (nodes, weights) = rule15();
    let mid = (a + b) * 0.5;
    let half = (b - a) * 0.5;
    let mut acc = [Complex64::new(0.0, 0.0); 3];
    for (x, w) in nodes.iter().zip(weights) {
        let z = mid + half * *x;
        let v = f(z).map_err(|source| QuadError::Integrand { at: z, source })?;
        for c in 0..3 {
            acc[c] += v[c] * *w;
        }
    }
    Ok(acc.map(|s| s * half))
}

fn refine<F, E>(
    f: &F,
    a: Complex64,
    b: Complex64,
    whole: Vec3c,
    tol: f64,
    depth: u32,
    settings: &QuadSettings,
) -> Result<Vec3c, QuadError<E>>
where
    F: Fn(Complex64) -> Result<Vec3c, E>,
{
    let m = (a + b) * 0.5;
    let left = panel(f, a, m)?;
    let right = panel(f, m, b)?;
    let mut sum = [Complex64::new(0.0, 0.0); 3];
    let mut worst = (0usize, 0.0f64);
    let mut converged = true;
    for c in 0..3 {
        sum[c] = left[c] + right[c];
        let err = (sum[c] - whole[c]).norm();
        let floor = 64.0 * f64::EPSILON * sum[c].norm();
        if err > tol.max(floor) {
            converged = false;
        }
        if err > worst.1 {
            worst = (c, err);
        }
    }
    if converged {
        return Ok(sum);
    }
    if depth >= settings.max_depth {
        return Err(QuadError::NoConvergence {
            component: worst.0,
            estimate: worst.1,
            at: m,
        });
    }
    let l = refine(f, a, m, left, tol * 0.5, depth + 1, settings)?;
    let r = refine(f, m, b, right, tol * 0.5, depth + 1, settings)?;
    Ok([l[0] + r[0], l[1] + r[1], l[2] + r[2]])
}

/// Integrates a 3-component holomorphic function along the segment `a -> b`.
pub fn integrate_segment<F, E>(
    f: &F,
    a: Complex64,
    b: Complex64,
    settings: &QuadSettings,
) -> Result<Vec3c, QuadError<E>>
where
    F: Fn(Complex64) -> Result<Vec3c, E>,
{
    let zero = [Complex64::new(0.0, 0.0); 3];
    if a == b {
        return Ok(zero);
    }
    let whole = panel(f, a, b)?;
    refine(f, a, b, whole, settings.abs_tol, 0, settings)
}

/// Integrates along the polyline through `points`.
pub fn integrate_polyline<F, E>(
    f: &F,
    points: &[Complex64],
    settings: &QuadSettings,
) -> Result<Vec3c, QuadError<E>>
where
    F: Fn(Complex64) -> Result<Vec3c, E>,
{
    let mut total = [Complex64::new(0.0, 0.0); 3];
    for pair in points.windows(2) {
        let part = integrate_segment(f, pair[0], pair[1], settings)?;
        for c in 0..3 {
            total[c] += part[c];
        }
    }
    Ok(total)
}
