//! Classification of the singular points of a maxface along `I`.
//!
//! Two independent routes: conditions on the data `{γ, L}` and their
//! derivatives, and conditions on the invariants `α, β, η` built from the
//! Weierstrass data. A point is typed only when the routes agree.

mod scan;

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::bjorling::{euclid_norm, BjorlingData, BjorlingError, WeierstrassData};
use crate::expr::EvalError;
use crate::jet::Jet;

pub use scan::{classify_point, scan_interval, ReportSource, SingularityReport};

/// Jet order used for the data witnesses and for `α, β, η`.
pub const WITNESS_ORDER: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SingularityType {
    CuspidalEdge,
    Swallowtail,
    CuspidalButterfly,
    CuspidalCrosscaps,
    CuspidalS1Minus,
    /// `γ' ≡ 0` on `I`.
    Shrinking,
    /// `L ≡ 0` on `I`.
    Folded,
    /// No row of the criteria applies; the string says which test failed.
    Unclassified(String),
}

impl SingularityType {
    pub fn name(&self) -> &'static str {
        match self {
            Self::CuspidalEdge => "CuspidalEdge",
            Self::Swallowtail => "Swallowtail",
            Self::CuspidalButterfly => "CuspidalButterfly",
            Self::CuspidalCrosscaps => "CuspidalCrosscaps",
            Self::CuspidalS1Minus => "CuspidalS1Minus",
            Self::Shrinking => "Shrinking",
            Self::Folded => "Folded",
            Self::Unclassified(_) => "Unclassified",
        }
    }

    /// One of the five point-level cusp types.
    pub fn is_cusp(&self) -> bool {
        !matches!(self, Self::Shrinking | Self::Folded | Self::Unclassified(_))
    }

    /// Shrinking or folded: a property of the whole interval.
    pub fn is_interval_level(&self) -> bool {
        matches!(self, Self::Shrinking | Self::Folded)
    }

    pub fn reason(&self) -> Option<&str> {
        match self {
            Self::Unclassified(r) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Zero test: `|x| < max(abs, rel * scale)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ToleranceSpec {
    pub rel: f64,
    pub abs: f64,
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        Self {
            rel: 1e-7,
            abs: 1e-10,
        }
    }
}

impl ToleranceSpec {
    pub fn threshold(&self, scale: f64) -> f64 {
        self.abs.max(self.rel * scale)
    }

    pub fn is_zero(&self, x: f64, scale: f64) -> bool {
        x.abs() < self.threshold(scale)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SingularityError {
    #[error("u = {u} lies outside the interval [{a}, {b}]")]
    OutsideInterval { u: f64, a: f64, b: f64 },
    #[error(transparent)]
    Data(#[from] BjorlingError),
    #[error("Gauss map is constant to working order at u = {u}")]
    DegenerateGaussMap { u: f64 },
    #[error("{quantity} failed at u = {u}: {source}")]
    Jet {
        quantity: &'static str,
        u: f64,
        source: EvalError,
    },
}

/// Which proportionality factor was recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FactorKind {
    /// `L = c γ'`
    C,
    /// `γ' = d L`
    D,
}

/// Quantities the classification routes test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witnesses {
    pub gamma_p: f64,
    pub gamma_pp: f64,
    pub gamma_ppp: f64,
    pub l: f64,
    pub l_p: f64,
    pub l_pp: f64,
    pub d_gamma: f64,
    pub d_l: f64,
    pub alpha: Option<Complex64>,
    pub beta: Option<Complex64>,
    pub eta: Option<Complex64>,
    /// `c` where `γ' ≠ 0`, else `d` where `L ≠ 0`.
    pub c_or_d: Option<f64>,
    pub factor: Option<FactorKind>,
    /// `|d'| |L|` and `|d''| |L|` (only where `d` is recorded).
    pub d_p_l: Option<f64>,
    pub d_pp_l: Option<f64>,
}

impl Witnesses {
    /// Largest magnitude among the data witnesses: the scale of zero tests.
    pub fn scale(&self) -> f64 {
        [
            self.gamma_p,
            self.gamma_pp,
            self.gamma_ppp,
            self.l,
            self.l_p,
            self.l_pp,
            self.d_gamma.abs(),
            self.d_l.abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// `a1 b2 - a2 b1`.
#[allow(non_snake_case)]
pub fn pairing_D(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

fn vec_at(j: &[Jet; 3], k: usize) -> [f64; 3] {
    [0, 1, 2].map(|i| j[i].derivative_value(k).re)
}

fn argmax_abs(v: &[f64; 3]) -> usize {
    (0..3)
        .max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs()))
        .unwrap_or(0)
}

fn check_in_interval(data: &BjorlingData, u: f64) -> Result<(), SingularityError> {
    let iv = data.interval();
    if !iv.contains(u) {
        return Err(SingularityError::OutsideInterval {
            u,
            a: iv.a,
            b: iv.b,
        });
    }
    Ok(())
}

/// Data witnesses at `u` (without `α, β, η`).
pub fn data_witnesses(
    data: &BjorlingData,
    u: f64,
    tol: &ToleranceSpec,
) -> Result<Witnesses, SingularityError> {
    check_in_interval(data, u)?;
    let gj = data.gamma_prime_jets(u, WITNESS_ORDER)?;
    let lj = data.l_jets(u, WITNESS_ORDER)?;
    let (g1, g2, g3) = (vec_at(&gj, 0), vec_at(&gj, 1), vec_at(&gj, 2));
    let (l0, l1, l2) = (vec_at(&lj, 0), vec_at(&lj, 1), vec_at(&lj, 2));
    let mut w = Witnesses {
        gamma_p: euclid_norm(&g1),
        gamma_pp: euclid_norm(&g2),
        gamma_ppp: euclid_norm(&g3),
        l: euclid_norm(&l0),
        l_p: euclid_norm(&l1),
        l_pp: euclid_norm(&l2),
        d_gamma: pairing_D((g1[0], g1[1]), (g2[0], g2[1])),
        d_l: pairing_D((l0[0], l0[1]), (l1[0], l1[1])),
        alpha: None,
        beta: None,
        eta: None,
        c_or_d: None,
        factor: None,
        d_p_l: None,
        d_pp_l: None,
    };
    let scale = w.scale();
    if !tol.is_zero(w.gamma_p, scale) {
        let k = argmax_abs(&g1);
        w.c_or_d = Some(l0[k] / g1[k]);
        w.factor = Some(FactorKind::C);
    } else if !tol.is_zero(w.l, scale) {
        let k = argmax_abs(&l0);
        let d = gj[k].div(&lj[k]).map_err(|source| SingularityError::Jet {
            quantity: "d = gamma'/L",
            u,
            source,
        })?;
        w.c_or_d = Some(d.value().re);
        w.factor = Some(FactorKind::D);
        w.d_p_l = Some(d.derivative_value(1).norm() * w.l);
        w.d_pp_l = Some(d.derivative_value(2).norm() * w.l);
    }
    Ok(w)
}

/// Decision cascade on the data at `u`, given its witnesses.
pub fn classify_witnesses(w: &Witnesses, tol: &ToleranceSpec) -> SingularityType {
    let s = w.scale();
    let z = |x: f64| tol.is_zero(x, s);
    let un = |r: &str| SingularityType::Unclassified(r.to_string());
    let (gp, lz) = (z(w.gamma_p), z(w.l));
    match (gp, lz) {
        (false, false) => {
            if !z(w.d_gamma) || !z(w.d_l) {
                SingularityType::CuspidalEdge
            } else {
                un("gamma' and L nonzero but D_gamma = D_L = 0")
            }
        }
        (true, false) => {
            if z(w.d_l) {
                return un("gamma' = 0 and D_L = 0");
            }
            let dp = w.d_p_l.map(z);
            let dpp = w.d_pp_l.map(z);
            if !z(w.gamma_pp) {
                if dp == Some(true) {
                    return un("gamma'' != 0 but d' = 0");
                }
                SingularityType::Swallowtail
            } else if dp == Some(false) {
                un("gamma'' = 0 but d' != 0")
            } else if !z(w.gamma_ppp) {
                if dpp == Some(true) {
                    return un("gamma''' != 0 but d'' = 0");
                }
                SingularityType::CuspidalButterfly
            } else {
                un("gamma' = gamma'' = gamma''' = 0")
            }
        }
        (false, true) => {
            if z(w.d_gamma) {
                return un("L = 0 and D_gamma = 0");
            }
            if !z(w.l_p) {
                SingularityType::CuspidalCrosscaps
            } else if !z(w.l_pp) {
                SingularityType::CuspidalS1Minus
            } else {
                un("L = L' = L'' = 0")
            }
        }
        (true, true) => un("gamma' and L both vanish"),
    }
}

/// Classifies `u` by the conditions on `{γ, L}`. Intervals on which `γ'`
/// or `L` vanish identically are labelled `Shrinking` or `Folded`.
pub fn classify_by_data(
    data: &BjorlingData,
    u: f64,
    tol: &ToleranceSpec,
) -> Result<SingularityType, SingularityError> {
    check_in_interval(data, u)?;
    let flags = data.flags();
    if flags.gamma_prime_zero {
        return Ok(SingularityType::Shrinking);
    }
    if flags.l_zero {
        return Ok(SingularityType::Folded);
    }
    let w = data_witnesses(data, u, tol)?;
    Ok(classify_witnesses(&w, tol))
}

/// `(α, β, η)` at the base of the jets `g`, `f`:
/// `α = g'/(g² f)`, `β = (g/g') α'`, `η = (g/g') β'`.
pub fn abe_from_jets(
    g: &Jet,
    f: &Jet,
) -> Result<(Complex64, Complex64, Complex64), SingularityError> {
    let u = g.base();
    let jet_err = |quantity: &'static str| {
        move |source| SingularityError::Jet {
            quantity,
            u,
            source,
        }
    };
    let g1 = g.derivative().map_err(jet_err("g'"))?;
    if g1.is_zero() {
        return Err(SingularityError::DegenerateGaussMap { u });
    }
    let alpha = g1.div(&g.mul(g).mul(f)).map_err(jet_err("alpha"))?;
    let beta = g
        .mul(&alpha.derivative().map_err(jet_err("alpha'"))?)
        .div(&g1)
        .map_err(jet_err("beta"))?;
    let eta = g
        .mul(&beta.derivative().map_err(jet_err("beta'"))?)
        .div(&g1)
        .map_err(jet_err("eta"))?;
    Ok((alpha.value(), beta.value(), eta.value()))
}

/// `(α, β, η)` at `u` by jet arithmetic on the Weierstrass data.
pub fn alpha_beta_eta(
    data: &BjorlingData,
    u: f64,
) -> Result<(Complex64, Complex64, Complex64), SingularityError> {
    check_in_interval(data, u)?;
    let w = WeierstrassData::new(data);
    let (g, _) = w.g_jet(u, WITNESS_ORDER)?;
    let f = w.f_jet(u, WITNESS_ORDER)?;
    abe_from_jets(&g, &f)
}

/// Classifies by the signs pattern of `α, β, η`.
pub fn classify_by_abe(
    abe: (Complex64, Complex64, Complex64),
    tol: &ToleranceSpec,
) -> SingularityType {
    let (a, b, e) = abe;
    let s = a.norm().max(b.norm()).max(e.norm());
    let z = |x: f64| tol.is_zero(x, s);
    match (z(a.re), z(a.im)) {
        (false, false) => SingularityType::CuspidalEdge,
        (false, true) => {
            if !z(b.re) {
                SingularityType::Swallowtail
            } else if !z(e.im) {
                SingularityType::CuspidalButterfly
            } else {
                SingularityType::Unclassified("Re beta = Im eta = 0".into())
            }
        }
        (true, false) => {
            if !z(b.im) {
                SingularityType::CuspidalCrosscaps
            } else if !z(e.re) {
                SingularityType::CuspidalS1Minus
            } else {
                SingularityType::Unclassified("Im beta = Re eta = 0".into())
            }
        }
        (true, true) => SingularityType::Unclassified("alpha = 0".into()),
    }
}

/// `α` where `γ'(u) ≠ 0`, in terms of `γ3'`, `L3` and `D_γ`.
pub fn alpha_closed_gamma(gamma3_p: f64, l3: f64, d_gamma: f64) -> Complex64 {
    let q = gamma3_p * gamma3_p + l3 * l3;
    Complex64::new(
        -l3 * d_gamma / (q * gamma3_p * gamma3_p),
        d_gamma / (q * gamma3_p),
    )
}

/// `α` where `L(u) ≠ 0`, in terms of `γ3'`, `L3` and `D_L`.
pub fn alpha_closed_l(gamma3_p: f64, l3: f64, d_l: f64) -> Complex64 {
    let q = gamma3_p * gamma3_p + l3 * l3;
    Complex64::new(-d_l / (q * l3), gamma3_p * d_l / (q * l3 * l3))
}
