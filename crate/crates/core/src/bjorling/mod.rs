//! Singular Björling data `{γ, L}` and the maxface it determines.
//!
//! `γ` is a null real-analytic curve, `L` a null real-analytic vector field
//! along it, the two pointwise proportional and never simultaneously zero.
//! The solution is `X(z) = Re ∫_{u0}^{z} (γ'(w) - i L(w)) dw`, normalised so
//! that `X(u0) = 0`.

mod solve;
mod weierstrass;

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::expr::{AnalyticExpr, EvalError};
use crate::jet::{jet_at, Jet};
use crate::quad::{self, QuadError, QuadSettings};

pub use solve::{
    check_boundary, check_g_nonunimodular, reconstruct_from_weierstrass, solve, solve_along,
    BoundaryCheck, MaxfaceSolution, Rect, BOUNDARY_STEP,
};
pub use weierstrass::{gauss_map_jet, weierstrass_f, GaussBranch, WeierstrassData};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BjorlingError {
    #[error("invalid interval [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("base point {base} outside the interval [{a}, {b}]")]
    BaseOutsideInterval { base: f64, a: f64, b: f64 },
    #[error("{component} failed at {at}: {source}")]
    Eval {
        component: &'static str,
        at: Complex64,
        source: EvalError,
    },
    #[error("quadrature did not converge in {component} near {at} (error estimate {estimate:e})")]
    Quadrature {
        component: &'static str,
        at: Complex64,
        estimate: f64,
    },
    #[error("Gauss map undefined at u = {u}: both branches vanish to working order")]
    MalformedGaussMap { u: f64 },
    #[error("grid needs at least 2x2 points, got {nu}x{nv}")]
    Grid { nu: usize, nv: usize },
}

pub(crate) const GAMMA_PRIME: [&str; 3] = ["gamma'_1", "gamma'_2", "gamma'_3"];
pub(crate) const L_NAMES: [&str; 3] = ["L_1", "L_2", "L_3"];
pub(crate) const X_NAMES: [&str; 3] = ["X_1", "X_2", "X_3"];

/// A real interval `[a, b]`, `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self, BjorlingError> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(BjorlingError::InvalidInterval { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn contains(&self, u: f64) -> bool {
        let slack = 1e-12 * self.len().max(1.0);
        u >= self.a - slack && u <= self.b + slack
    }

    /// `n >= 2` equispaced points including both ends.
    pub fn linspace(&self, n: usize) -> Vec<f64> {
        let n = n.max(2);
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    self.b
                } else {
                    self.a + self.len() * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

/// The curve `γ`, given by position or by derivative plus a base value.
#[derive(Debug, Clone, PartialEq)]
pub enum Curve {
    /// `γ ≡ const`; the base value is irrelevant after translation.
    Zero,
    Position {
        position: [AnalyticExpr; 3],
        derivative: [AnalyticExpr; 3],
    },
    /// `γ'` given directly, with `γ(u0) = base_value`.
    Derivative {
        derivative: [AnalyticExpr; 3],
        base_value: [f64; 3],
    },
}

impl Curve {
    pub fn from_position(position: [AnalyticExpr; 3]) -> Self {
        let derivative = [0, 1, 2].map(|i| position[i].derivative());
        Curve::Position {
            position,
            derivative,
        }
    }

    pub fn from_derivative(derivative: [AnalyticExpr; 3], base_value: [f64; 3]) -> Self {
        Curve::Derivative {
            derivative,
            base_value,
        }
    }

    pub fn derivative_exprs(&self) -> [AnalyticExpr; 3] {
        match self {
            Curve::Zero => [
                AnalyticExpr::zero(),
                AnalyticExpr::zero(),
                AnalyticExpr::zero(),
            ],
            Curve::Position { derivative, .. } | Curve::Derivative { derivative, .. } => {
                derivative.clone()
            }
        }
    }
}

/// Which of `γ'`, `L` vanish identically on the interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DataFlags {
    pub gamma_prime_zero: bool,
    pub l_zero: bool,
}

#[derive(Debug, Clone)]
pub struct BjorlingData {
    gamma: Curve,
    gamma_prime: [AnalyticExpr; 3],
    l: [AnalyticExpr; 3],
    interval: Interval,
    base: f64,
    flags: OnceLock<DataFlags>,
}

fn eval3(
    exprs: &[AnalyticExpr; 3],
    names: &[&'static str; 3],
    z: Complex64,
) -> Result<[Complex64; 3], BjorlingError> {
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for i in 0..3 {
        out[i] = exprs[i]
            .eval_complex(z)
            .map_err(|source| BjorlingError::Eval {
                component: names[i],
                at: z,
                source,
            })?;
    }
    Ok(out)
}

fn jets3(
    exprs: &[AnalyticExpr; 3],
    names: &[&'static str; 3],
    u: f64,
    k: usize,
) -> Result<[Jet; 3], BjorlingError> {
    let mk = |i: usize| {
        jet_at(&exprs[i], u, k).map_err(|source| BjorlingError::Eval {
            component: names[i],
            at: Complex64::new(u, 0.0),
            source,
        })
    };
    Ok([mk(0)?, mk(1)?, mk(2)?])
}

impl BjorlingData {
    pub fn new(
        gamma: Curve,
        l: [AnalyticExpr; 3],
        interval: Interval,
        base: f64,
    ) -> Result<Self, BjorlingError> {
        if !interval.contains(base) {
            return Err(BjorlingError::BaseOutsideInterval {
                base,
                a: interval.a,
                b: interval.b,
            });
        }
        let gamma_prime = gamma.derivative_exprs();
        Ok(Self {
            gamma,
            gamma_prime,
            l,
            interval,
            base,
            flags: OnceLock::new(),
        })
    }

    pub fn gamma(&self) -> &Curve {
        &self.gamma
    }

    pub fn gamma_prime_exprs(&self) -> &[AnalyticExpr; 3] {
        &self.gamma_prime
    }

    pub fn l_exprs(&self) -> &[AnalyticExpr; 3] {
        &self.l
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    /// Same data with another base point `u0` (changes the translation only).
    pub fn with_base(&self, base: f64) -> Result<Self, BjorlingError> {
        let gamma = match &self.gamma {
            Curve::Derivative { derivative, .. } => {
                Curve::from_derivative(derivative.clone(), self.gamma_at(base)?)
            }
            other => other.clone(),
        };
        Self::new(gamma, self.l.clone(), self.interval, base)
    }

    /// Same data on another interval, which must contain the base point.
    pub fn with_interval(&self, interval: Interval) -> Result<Self, BjorlingError> {
        Self::new(self.gamma.clone(), self.l.clone(), interval, self.base)
    }

    pub fn gamma_prime_at(&self, z: Complex64) -> Result<[Complex64; 3], BjorlingError> {
        eval3(&self.gamma_prime, &GAMMA_PRIME, z)
    }

    pub fn l_at(&self, z: Complex64) -> Result<[Complex64; 3], BjorlingError> {
        eval3(&self.l, &L_NAMES, z)
    }

    pub fn gamma_prime_real(&self, u: f64) -> Result<[f64; 3], BjorlingError> {
        Ok(self.gamma_prime_at(Complex64::new(u, 0.0))?.map(|c| c.re))
    }

    pub fn l_real(&self, u: f64) -> Result<[f64; 3], BjorlingError> {
        Ok(self.l_at(Complex64::new(u, 0.0))?.map(|c| c.re))
    }

    /// Jets of `γ'` at `u`.
    pub fn gamma_prime_jets(&self, u: f64, k: usize) -> Result<[Jet; 3], BjorlingError> {
        jets3(&self.gamma_prime, &GAMMA_PRIME, u, k)
    }

    /// Jets of `L` at `u`.
    pub fn l_jets(&self, u: f64, k: usize) -> Result<[Jet; 3], BjorlingError> {
        jets3(&self.l, &L_NAMES, u, k)
    }

    /// Position `γ(u)` in the data's own coordinates.
    pub fn gamma_at(&self, u: f64) -> Result<[f64; 3], BjorlingError> {
        match &self.gamma {
            Curve::Zero => Ok([0.0; 3]),
            Curve::Position { position, .. } => {
                let names = ["gamma_1", "gamma_2", "gamma_3"];
                Ok(eval3(position, &names, Complex64::new(u, 0.0))?.map(|c| c.re))
            }
            Curve::Derivative {
                derivative,
                base_value,
            } => {
                let f = |w: Complex64| eval3(derivative, &GAMMA_PRIME, w);
                let s = quad::integrate_segment(
                    &f,
                    Complex64::new(self.base, 0.0),
                    Complex64::new(u, 0.0),
                    &QuadSettings::default(),
                )
                .map_err(|e| quad_error(e, &GAMMA_PRIME))?;
                Ok([0, 1, 2].map(|i| base_value[i] + s[i].re))
            }
        }
    }

    pub fn flags(&self) -> DataFlags {
        *self.flags.get_or_init(|| DataFlags {
            gamma_prime_zero: self.vanishes_identically(&self.gamma_prime),
            l_zero: self.vanishes_identically(&self.l),
        })
    }

    fn vanishes_identically(&self, exprs: &[AnalyticExpr; 3]) -> bool {
        if exprs.iter().all(|e| e.is_literal_zero()) {
            return true;
        }
        self.interval.linspace(33).into_iter().all(|u| {
            exprs.iter().all(|e| match e.eval_real(u) {
                Ok(v) => v.abs() <= crate::jet::ZERO_ABS,
                Err(_) => false,
            })
        })
    }
}

pub(crate) fn quad_error(e: QuadError<BjorlingError>, names: &[&'static str; 3]) -> BjorlingError {
    match e {
        QuadError::Integrand { source, .. } => source,
        QuadError::NoConvergence {
            component,
            estimate,
            at,
        } => BjorlingError::Quadrature {
            component: names[component],
            at,
            estimate,
        },
    }
}

/// Lorentzian inner product `a1 b1 + a2 b2 - a3 b3`.
pub fn lorentz_dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] - a[2] * b[2]
}

pub fn euclid_norm(a: &[f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

/// Largest 2x2 minor of the pair `(a, b)`.
pub fn max_minor(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let m01 = a[0] * b[1] - a[1] * b[0];
    let m02 = a[0] * b[2] - a[2] * b[0];
    let m12 = a[1] * b[2] - a[2] * b[1];
    m01.abs().max(m02.abs()).max(m12.abs())
}

/// Minimiser of `f` on `[a, b]` by golden-section search.
pub(crate) fn golden_section_min(f: &impl Fn(f64) -> f64, a: f64, b: f64, iters: usize) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (a, b);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if b - a <= 1e-15 * (a.abs() + b.abs()).max(1e-300) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        c
    } else {
        d
    }
}

/// Residual threshold for the data invariants.
pub const VALIDATION_TOL: f64 = 1e-9;

/// Max residual of one invariant over the sample grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub name: &'static str,
    pub max: f64,
    /// Location of the maximum.
    pub at: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub samples: usize,
    pub jet_points: usize,
    pub tolerance: f64,
    pub residuals: Vec<Residual>,
    pub flags: DataFlags,
    pub issues: Vec<String>,
    pub valid: bool,
}

impl ValidationReport {
    pub fn residual(&self, name: &str) -> Option<&Residual> {
        self.residuals.iter().find(|r| r.name == name)
    }
}

struct Tracker {
    name: &'static str,
    max: f64,
    at: f64,
}

impl Tracker {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            max: 0.0,
            at: f64::NAN,
        }
    }

    fn push(&mut self, value: f64, u: f64) {
        if value > self.max || value.is_nan() || self.at.is_nan() {
            self.max = if value.is_nan() {
                f64::INFINITY
            } else {
                value.max(self.max)
            };
            self.at = u;
        }
    }

    fn finish(self, ok: impl Fn(f64) -> bool) -> Residual {
        Residual {
            name: self.name,
            max: self.max,
            at: self.at,
            ok: ok(self.max),
        }
    }
}

const JET_CHECK_ORDER: usize = 8;
const JET_CHECK_POINTS: usize = 9;

/// Checks nullity of `γ'` and `L`, their proportionality and that they never
/// vanish together, on a sample grid and on order-8 jets at 9 points.
///
/// Residuals are normalised by `max(1, |v|^2)` (resp. `max(1, |v||w|)`).
pub fn validate(data: &BjorlingData, samples: usize) -> ValidationReport {
    let iv = data.interval;
    let mut issues = Vec::new();
    if samples < 16 {
        issues.push(format!(
            "requested {samples} samples, using the minimum of 16"
        ));
    }
    let n = samples
        .max(16)
        .max((64.0 * iv.len()).ceil() as usize)
        .max(32);

    let mut null_g = Tracker::new("nullity_gamma");
    let mut null_l = Tracker::new("nullity_L");
    let mut prop = Tracker::new("proportionality");
    let mut common = Tracker::new("common_zero");
    let grid = iv.linspace(n);
    let mut both = vec![f64::INFINITY; grid.len()];

    for (k, &u) in grid.iter().enumerate() {
        let (g, l) = match (data.gamma_prime_real(u), data.l_real(u)) {
            (Ok(g), Ok(l)) => (g, l),
            (Err(e), _) | (_, Err(e)) => {
                issues.push(format!("evaluation failed at u = {u}: {e}"));
                null_g.push(f64::NAN, u);
                continue;
            }
        };
        let ng = euclid_norm(&g);
        let nl = euclid_norm(&l);
        null_g.push(lorentz_dot(&g, &g).abs() / (ng * ng).max(1.0), u);
        null_l.push(lorentz_dot(&l, &l).abs() / (nl * nl).max(1.0), u);
        prop.push(max_minor(&g, &l) / (ng * nl).max(1.0), u);
        both[k] = ng.max(nl);
    }
    // Smallest value of max(|γ'|, |L|): grid minimum, then each local grid
    // minimum polished by golden section so zeros between samples are found.
    let size = |u: f64| match (data.gamma_prime_real(u), data.l_real(u)) {
        (Ok(g), Ok(l)) => euclid_norm(&g).max(euclid_norm(&l)),
        _ => f64::INFINITY,
    };
    let (mut min_common, mut min_common_at) = (f64::INFINITY, f64::NAN);
    for k in 0..grid.len() {
        let left = if k > 0 { both[k - 1] } else { f64::INFINITY };
        let right = both.get(k + 1).copied().unwrap_or(f64::INFINITY);
        let mut cand = (both[k], grid[k]);
        if both[k] <= left && both[k] <= right {
            let a = grid[k.saturating_sub(1)];
            let b = grid[(k + 1).min(grid.len() - 1)];
            let u = golden_section_min(&size, a, b, 80);
            let v = size(u);
            if v < cand.0 {
                cand = (v, u);
            }
        }
        if cand.0 < min_common {
            (min_common, min_common_at) = cand;
        }
    }
    common.max = min_common;
    common.at = min_common_at;

    let mut jnull_g = Tracker::new("jet_nullity_gamma");
    let mut jnull_l = Tracker::new("jet_nullity_L");
    let mut jprop = Tracker::new("jet_proportionality");
    for u in iv.linspace(JET_CHECK_POINTS) {
        let (g, l) = match (
            data.gamma_prime_jets(u, JET_CHECK_ORDER),
            data.l_jets(u, JET_CHECK_ORDER),
        ) {
            (Ok(g), Ok(l)) => (g, l),
            (Err(e), _) | (_, Err(e)) => {
                issues.push(format!("jet expansion failed at u = {u}: {e}"));
                jnull_g.push(f64::NAN, u);
                continue;
            }
        };
        let sg = g.iter().map(Jet::scale).fold(0.0, f64::max);
        let sl = l.iter().map(Jet::scale).fold(0.0, f64::max);
        let quad_form = |v: &[Jet; 3]| v[0].mul(&v[0]).add(&v[1].mul(&v[1])).sub(&v[2].mul(&v[2]));
        jnull_g.push(quad_form(&g).scale() / (sg * sg).max(1.0), u);
        jnull_l.push(quad_form(&l).scale() / (sl * sl).max(1.0), u);
        let minors = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(i, j)| g[i].mul(&l[j]).sub(&g[j].mul(&l[i])).scale())
            .fold(0.0, f64::max);
        jprop.push(minors / (sg * sl).max(1.0), u);
    }

    let small = |v: f64| v < VALIDATION_TOL;
    let residuals = vec![
        null_g.finish(small),
        null_l.finish(small),
        prop.finish(small),
        common.finish(|v| v > VALIDATION_TOL),
        jnull_g.finish(small),
        jnull_l.finish(small),
        jprop.finish(small),
    ];
    let valid = issues.iter().all(|i| i.starts_with("requested")) && residuals.iter().all(|r| r.ok);
    ValidationReport {
        samples: n,
        jet_points: JET_CHECK_POINTS,
        tolerance: VALIDATION_TOL,
        residuals,
        flags: data.flags(),
        issues,
        valid,
    }
}
