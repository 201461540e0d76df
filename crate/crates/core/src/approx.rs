//! Sequences of singular Björling data whose maxfaces have a cuspidal edge
//! at a chosen point `t0` and converge to a given maxface.
//!
//! * `GammaBased`: `δn' = γ' + (1/n, 1/n, hn)`, `μn = (c + 1/n) δn'` with
//!   `L = c γ'` and `hn = -γ3' + sqrt(γ3'^2 + 2(1/n^2 + (γ1' + γ2')/n))`.
//! * `LBased`: the same construction with the roles of `γ'` and `L`
//!   exchanged (`γ' = d L`).
//! * `ShrinkingExample`: the explicit family
//!   `Ln = (1 - 1/n)(1 - t^2, 2t, 1 + t^2)`, `γn' = Ln / n`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bjorling::{BjorlingData, BjorlingError, Curve, Interval, MaxfaceSolution, Rect};
use crate::expr::{AnalyticExpr, Func};
use crate::singularity::{
    classify_point, data_witnesses, ReportSource, SingularityError, SingularityReport,
    SingularityType, ToleranceSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FamilyKind {
    GammaBased,
    LBased,
    ShrinkingExample,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ApproxError {
    #[error("hypothesis fails at t0 = {t0}: {reason}")]
    Hypothesis { t0: f64, reason: String },
    #[error("n = {n} is not above the family threshold N = {threshold}")]
    BelowThreshold { n: usize, threshold: usize },
    #[error("the shrinking family needs n > 1, got {n}")]
    InvalidN { n: usize },
    #[error("no working subinterval around t0 = {t0}: {reason}")]
    WorkingInterval { t0: f64, reason: String },
    #[error("solutions live on different grids or domains")]
    DomainMismatch,
    #[error("solutions use different base points ({a} vs {b})")]
    BaseMismatch { a: f64, b: f64 },
    #[error(transparent)]
    Data(#[from] BjorlingError),
    #[error(transparent)]
    Classification(#[from] SingularityError),
}

/// Required lower bound of the radicand on the working interval.
pub const RADICAND_MARGIN: f64 = 1e-6;
const SAMPLES: usize = 65;
const MAX_HALVINGS: usize = 60;
const MAX_THRESHOLD: usize = 1 << 24;

fn k(x: f64) -> AnalyticExpr {
    AnalyticExpr::constant(x)
}

fn flip3(v: &[AnalyticExpr; 3]) -> [AnalyticExpr; 3] {
    [v[0].clone(), v[1].clone(), v[2].clone().neg()]
}

/// The field that gets perturbed and the factor that rescales it into the
/// other one.
struct Split {
    /// `γ'` for `GammaBased`, `L` for `LBased` (third axis normalised).
    base: [AnalyticExpr; 3],
    /// `c = L3/γ3'` resp. `d = γ3'/L3`.
    factor: AnalyticExpr,
}

#[derive(Debug, Clone)]
pub struct ApproxFamily {
    pub kind: FamilyKind,
    pub parent: BjorlingData,
    pub t0: f64,
    /// Subinterval around `t0` on which every member is defined.
    pub working: Interval,
    /// Members exist for `n > threshold`.
    pub threshold: usize,
    /// The third axis was negated before construction and restored after.
    pub axis_flipped: bool,
    pub members: BTreeMap<usize, BjorlingData>,
}

impl ApproxFamily {
    /// Checks the hypotheses at `t0` and fixes the working interval and
    /// threshold. Members are added with [`ApproxFamily::build`].
    pub fn new(kind: FamilyKind, parent: &BjorlingData, t0: f64) -> Result<Self, ApproxError> {
        let iv = parent.interval();
        if !iv.contains(t0) {
            return Err(ApproxError::Hypothesis {
                t0,
                reason: format!("t0 outside [{}, {}]", iv.a, iv.b),
            });
        }
        if kind == FamilyKind::ShrinkingExample {
            return Ok(Self {
                kind,
                parent: parent.clone(),
                t0,
                working: iv,
                threshold: 1,
                axis_flipped: false,
                members: BTreeMap::new(),
            });
        }
        let tol = ToleranceSpec::default();
        let w = data_witnesses(parent, t0, &tol)?;
        let s = w.scale();
        let (needs, nonzero, d_val, d_name) = match kind {
            FamilyKind::GammaBased => ("gamma'", w.gamma_p, w.d_gamma, "D_gamma"),
            _ => ("L", w.l, w.d_l, "D_L"),
        };
        if tol.is_zero(nonzero, s) {
            return Err(ApproxError::Hypothesis {
                t0,
                reason: format!("{needs}(t0) = 0"),
            });
        }
        if tol.is_zero(d_val, s) {
            return Err(ApproxError::Hypothesis {
                t0,
                reason: format!("{d_name}(t0) = 0"),
            });
        }
        let v3 = match kind {
            FamilyKind::GammaBased => parent.gamma_prime_real(t0)?[2],
            _ => parent.l_real(t0)?[2],
        };
        let mut fam = Self {
            kind,
            parent: parent.clone(),
            t0,
            working: iv,
            threshold: 0,
            axis_flipped: v3 < 0.0,
            members: BTreeMap::new(),
        };
        fam.working = fam.find_working_interval()?;
        fam.threshold = fam.find_threshold()?;
        Ok(fam)
    }

    fn split(&self) -> Split {
        let (gp, l) = (self.parent.gamma_prime_exprs(), self.parent.l_exprs());
        let (gp, l) = if self.axis_flipped {
            (flip3(gp), flip3(l))
        } else {
            (gp.clone(), l.clone())
        };
        match self.kind {
            FamilyKind::LBased => Split {
                factor: gp[2].clone().div(l[2].clone()),
                base: l,
            },
            _ => Split {
                factor: l[2].clone().div(gp[2].clone()),
                base: gp,
            },
        }
    }

    // The perturbed field in normalised coordinates at real t.
    fn base_real(&self, t: f64) -> Result<[f64; 3], BjorlingError> {
        let mut v = match self.kind {
            FamilyKind::LBased => self.parent.l_real(t)?,
            _ => self.parent.gamma_prime_real(t)?,
        };
        if self.axis_flipped {
            v[2] = -v[2];
        }
        Ok(v)
    }

    fn find_working_interval(&self) -> Result<Interval, ApproxError> {
        let iv = self.parent.interval();
        let t0 = self.t0;
        let mut r = (t0 - iv.a).max(iv.b - t0);
        let floor = RADICAND_MARGIN.sqrt();
        for _ in 0..MAX_HALVINGS {
            let a = (t0 - r).max(iv.a);
            let b = (t0 + r).min(iv.b);
            if let Ok(cand) = Interval::new(a, b) {
                let ok = cand.linspace(SAMPLES).into_iter().all(|t| {
                    matches!(self.base_real(t), Ok(v) if v[2] > floor)
                        && self.split().factor.eval_real(t).is_ok()
                });
                if ok {
                    return Ok(cand);
                }
            }
            r *= 0.5;
        }
        Err(ApproxError::WorkingInterval {
            t0,
            reason: "third component does not stay positive".into(),
        })
    }

    // Smallest radicand over t in the working interval and 0 < s <= smax.
    fn radicand_min(&self, smax: f64) -> Result<f64, BjorlingError> {
        let mut m = f64::INFINITY;
        for t in self.working.linspace(SAMPLES) {
            let v = self.base_real(t)?;
            let w = v[0] + v[1];
            // v3^2 + 2 s^2 + 2 s w is convex in s
            let s = (-0.5 * w).clamp(0.0, smax);
            m = m.min(v[2] * v[2] + 2.0 * s * s + 2.0 * s * w);
        }
        Ok(m)
    }

    fn find_threshold(&self) -> Result<usize, ApproxError> {
        let ok = |n: usize| -> Result<bool, ApproxError> {
            Ok(self.radicand_min(1.0 / (n as f64 + 1.0))? > RADICAND_MARGIN)
        };
        let mut hi = 0usize;
        if !ok(0)? {
            hi = 1;
            while !ok(hi)? {
                hi *= 2;
                if hi > MAX_THRESHOLD {
                    return Err(ApproxError::WorkingInterval {
                        t0: self.t0,
                        reason: "radicand stays below the margin".into(),
                    });
                }
            }
            let mut lo = hi / 2;
            while hi - lo > 1 {
                let mid = (lo + hi) / 2;
                if ok(mid)? {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
        }
        // the factor plus 1/n must keep one sign at t0
        let f0 = self
            .split()
            .factor
            .eval_real(self.t0)
            .map_err(|source| BjorlingError::Eval {
                component: "proportionality factor",
                at: Complex64::new(self.t0, 0.0),
                source,
            })?;
        let by_factor = if f0 < 0.0 {
            (-1.0 / f0).floor() as usize
        } else {
            0
        };
        Ok(hi.max(by_factor))
    }

    /// Member `n`; see the module docs for the construction.
    pub fn member(&self, n: usize) -> Result<BjorlingData, ApproxError> {
        if self.kind == FamilyKind::ShrinkingExample {
            return build_shrinking_example(n);
        }
        if n <= self.threshold {
            return Err(ApproxError::BelowThreshold {
                n,
                threshold: self.threshold,
            });
        }
        let s = 1.0 / n as f64;
        let Split { base, factor } = self.split();
        // V3 + hn = sqrt(V3^2 + 2(s^2 + s(V1 + V2)))
        let radicand = base[2]
            .clone()
            .powi(2)
            .add(k(2.0).mul(k(s * s).add(k(s).mul(base[0].clone().add(base[1].clone())))));
        let perturbed = [
            base[0].clone().add(k(s)),
            base[1].clone().add(k(s)),
            radicand.call(Func::Sqrt),
        ];
        let scale = factor.add(k(s));
        let scaled = perturbed.clone().map(|e| scale.clone().mul(e));
        let (mut gp, mut l) = match self.kind {
            FamilyKind::LBased => (scaled, perturbed),
            _ => (perturbed, scaled),
        };
        if self.axis_flipped {
            gp = flip3(&gp);
            l = flip3(&l);
        }
        let base_value = self.parent.gamma_at(self.t0)?;
        let member = BjorlingData::new(
            Curve::from_derivative(gp, base_value),
            l,
            self.working,
            self.t0,
        )?;
        let min = self.radicand_min(s)?;
        if min <= RADICAND_MARGIN {
            return Err(ApproxError::WorkingInterval {
                t0: self.t0,
                reason: format!("radicand {min:e} for n = {n}"),
            });
        }
        Ok(member)
    }

    /// Builds and stores the members for `ns` in parallel.
    pub fn build(&mut self, ns: &[usize]) -> Result<(), ApproxError> {
        let built = ns
            .par_iter()
            .map(|&n| self.member(n).map(|m| (n, m)))
            .collect::<Result<Vec<_>, _>>()?;
        self.members.extend(built);
        Ok(())
    }

    /// The comparison domain: `[-1, 1]^2` for the shrinking family, else a
    /// square around `t0` inside the working interval, halved until every
    /// member's radicand has positive real part on it.
    pub fn default_domain(&self, ns: &[usize]) -> Result<Rect, ApproxError> {
        if self.kind == FamilyKind::ShrinkingExample {
            return Ok(Rect::new(Complex64::new(self.t0, 0.0), 1.0, 1.0));
        }
        let w = self.working;
        let mut r = (self.t0 - w.a).min(w.b - self.t0);
        if r <= 0.0 {
            r = 0.5 * w.len();
        }
        let Split { base, factor } = self.split();
        let parent = self.parent.with_base(self.t0)?;
        for _ in 0..MAX_HALVINGS {
            let rect = Rect::new(Complex64::new(self.t0, 0.0), r, r);
            let ok = (0..DOMAIN_CHECK * DOMAIN_CHECK).all(|idx| {
                let z = rect.grid_point(
                    idx / DOMAIN_CHECK,
                    idx % DOMAIN_CHECK,
                    DOMAIN_CHECK,
                    DOMAIN_CHECK,
                );
                let eval = |e: &AnalyticExpr| e.eval_complex(z);
                let (Ok(v0), Ok(v1), Ok(v2), Ok(_)) = (
                    eval(&base[0]),
                    eval(&base[1]),
                    eval(&base[2]),
                    eval(&factor),
                ) else {
                    return false;
                };
                parent.gamma_prime_at(z).is_ok()
                    && parent.l_at(z).is_ok()
                    && ns.iter().all(|&n| {
                        let s = 1.0 / n as f64;
                        (v2 * v2 + 2.0 * (s * s + s * (v0 + v1))).re > DOMAIN_MARGIN
                    })
            });
            if ok {
                return Ok(rect);
            }
            r *= 0.5;
        }
        Err(ApproxError::WorkingInterval {
            t0: self.t0,
            reason: "no complex neighbourhood keeps the radicand off the branch cut".into(),
        })
    }
}

const DOMAIN_CHECK: usize = 41;
const DOMAIN_MARGIN: f64 = 1e-3;

/// Member `n` of the family perturbing `γ'`.
pub fn build_gamma_based(
    parent: &BjorlingData,
    t0: f64,
    n: usize,
) -> Result<BjorlingData, ApproxError> {
    ApproxFamily::new(FamilyKind::GammaBased, parent, t0)?.member(n)
}

/// Member `n` of the family perturbing `L`.
pub fn build_l_based(
    parent: &BjorlingData,
    t0: f64,
    n: usize,
) -> Result<BjorlingData, ApproxError> {
    ApproxFamily::new(FamilyKind::LBased, parent, t0)?.member(n)
}

/// `Ln = (1 - 1/n)(1 - t^2, 2t, 1 + t^2)`, `γn' = Ln / n` on `[-1, 1]`.
pub fn build_shrinking_example(n: usize) -> Result<BjorlingData, ApproxError> {
    if n <= 1 {
        return Err(ApproxError::InvalidN { n });
    }
    let nf = n as f64;
    let p: [AnalyticExpr; 3] = ["1-t^2", "2*t", "1+t^2"].map(|s| s.parse().expect("literal"));
    let l = p.clone().map(|e| k(1.0 - 1.0 / nf).mul(e));
    let gp = p.map(|e| k((1.0 - 1.0 / nf) / nf).mul(e));
    Ok(BjorlingData::new(
        Curve::from_derivative(gp, [0.0; 3]),
        l,
        Interval::new(-1.0, 1.0)?,
        0.0,
    )?)
}

/// `max |A(z) - B(z)|_∞` over the common grid of two solutions.
pub fn sup_norm_distance(a: &MaxfaceSolution, b: &MaxfaceSolution) -> Result<f64, ApproxError> {
    if a.domain != b.domain || a.nu != b.nu || a.nv != b.nv {
        return Err(ApproxError::DomainMismatch);
    }
    if a.data.base() != b.data.base() {
        return Err(ApproxError::BaseMismatch {
            a: a.data.base(),
            b: b.data.base(),
        });
    }
    Ok(a.values
        .iter()
        .zip(&b.values)
        .flat_map(|(x, y)| (0..3).map(move |c| (x[c] - y[c]).abs()))
        .fold(0.0, f64::max))
}

/// Solves both data sets on `omega` and measures their distance.
pub fn distance_on(
    a: &BjorlingData,
    b: &BjorlingData,
    omega: Rect,
    nu: usize,
    nv: usize,
) -> Result<f64, ApproxError> {
    let sa = MaxfaceSolution::compute(a, omega, nu, nv)?;
    let sb = MaxfaceSolution::compute(b, omega, nu, nv)?;
    sup_norm_distance(&sa, &sb)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupNormTable {
    /// `(n, distance)` in increasing `n`.
    pub rows: Vec<(usize, f64)>,
    pub domain: Rect,
    pub grid: (usize, usize),
}

impl SupNormTable {
    pub fn strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].1 < w[0].1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemberCheck {
    pub n: usize,
    pub report: SingularityReport,
    /// The data route reports a cuspidal edge at `t0`.
    pub cuspidal_edge: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub kind: FamilyKind,
    pub t0: f64,
    pub threshold: usize,
    pub axis_flipped: bool,
    pub table: SupNormTable,
    pub members: Vec<MemberCheck>,
    /// Least-squares slope of `log distance` against `log n`.
    pub slope: Option<f64>,
}

fn loglog_slope(rows: &[(usize, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.1 > 0.0)
        .map(|&(n, d)| ((n as f64).ln(), d.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / m, sy / m);
    let (num, den) = pts.iter().fold((0.0, 0.0), |a, p| {
        (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx) * (p.0 - mx))
    });
    (den > 0.0).then(|| num / den)
}

/// Builds members for `ns`, measures their distance to the parent on
/// `omega` (default domain when `None`) and classifies each at `t0`.
pub fn convergence_report(
    family: &mut ApproxFamily,
    omega: Option<Rect>,
    ns: &[usize],
    grid: (usize, usize),
    tol: &ToleranceSpec,
) -> Result<ConvergenceReport, ApproxError> {
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    ns.dedup();
    family.build(&ns)?;
    let domain = match omega {
        Some(r) => r,
        None => family.default_domain(&ns)?,
    };
    let parent = family.parent.with_base(family.t0)?;
    let reference = MaxfaceSolution::compute(&parent, domain, grid.0, grid.1)?;
    let mut rows = Vec::with_capacity(ns.len());
    let mut members = Vec::with_capacity(ns.len());
    for &n in &ns {
        let m = &family.members[&n];
        let sol = MaxfaceSolution::compute(m, domain, grid.0, grid.1)?;
        rows.push((n, sup_norm_distance(&sol, &reference)?));
        let report = classify_point(m, family.t0, tol, ReportSource::Grid);
        members.push(MemberCheck {
            n,
            cuspidal_edge: report.by_data == SingularityType::CuspidalEdge,
            report,
        });
    }
    let slope = loglog_slope(&rows);
    Ok(ConvergenceReport {
        kind: family.kind,
        t0: family.t0,
        threshold: family.threshold,
        axis_flipped: family.axis_flipped,
        table: SupNormTable { rows, domain, grid },
        members,
        slope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bjorling::{euclid_norm, lorentz_dot, max_minor, validate};
    use crate::presets::preset;
    use crate::singularity::classify_by_data;

    fn nullity(v: &[f64; 3]) -> f64 {
        lorentz_dot(v, v).abs()
    }

    #[test]
    fn gamma_based_members_are_null() {
        let p = preset("example-3-1").unwrap();
        for n in [3, 7, 40] {
            let m = build_gamma_based(&p, 0.5, n).unwrap();
            for t in m.interval().linspace(100) {
                let g = m.gamma_prime_real(t).unwrap();
                let l = m.l_real(t).unwrap();
                assert!(nullity(&g) < 1e-10, "n={n} t={t}");
                assert!(nullity(&l) < 1e-10);
                assert!(max_minor(&g, &l) < 1e-12);
            }
            assert!(validate(&m, 64).valid);
        }
    }

    #[test]
    fn gamma_based_limit() {
        let p = preset("example-3-1").unwrap();
        let m = build_gamma_based(&p, 0.5, 1_000_000).unwrap();
        let a = m.gamma_prime_real(0.5).unwrap();
        let b = p.gamma_prime_real(0.5).unwrap();
        let diff = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
        assert!(euclid_norm(&diff) < 3e-6);
    }

    #[test]
    fn members_have_cuspidal_edges() {
        let tol = ToleranceSpec::default();
        let p = preset("example-3-1").unwrap();
        for n in [3, 5, 15, 50] {
            let m = build_gamma_based(&p, 0.5, n).unwrap();
            assert_eq!(
                classify_by_data(&m, 0.5, &tol).unwrap(),
                SingularityType::CuspidalEdge
            );
        }
        let s = preset("shrinking").unwrap();
        let m = build_l_based(&s, 0.0, 5).unwrap();
        assert_eq!(
            classify_by_data(&m, 0.0, &tol).unwrap(),
            SingularityType::CuspidalEdge
        );
        for t in m.interval().linspace(100) {
            assert!(nullity(&m.l_real(t).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn threshold_from_negative_factor() {
        // L = -γ'/3, so c + 1/n = 0 at n = 3
        let p = BjorlingData::new(
            Curve::from_position(["sin(u)", "-cos(u)", "u"].map(|s| s.parse().unwrap())),
            ["-cos(u)/3", "-sin(u)/3", "-1/3"].map(|s| s.parse().unwrap()),
            Interval::new(0.0, 1.0).unwrap(),
            0.5,
        )
        .unwrap();
        let fam = ApproxFamily::new(FamilyKind::GammaBased, &p, 0.5).unwrap();
        assert_eq!(fam.threshold, 3);
        assert!(matches!(
            fam.member(3),
            Err(ApproxError::BelowThreshold { n: 3, threshold: 3 })
        ));
        assert!(fam.member(4).is_ok());
    }

    #[test]
    fn hypotheses_are_checked() {
        let p = preset("example-3-4").unwrap();
        // γ'(0) = 0
        assert!(matches!(
            build_gamma_based(&p, 0.0, 5),
            Err(ApproxError::Hypothesis { .. })
        ));
        let f = preset("folded-helix").unwrap();
        assert!(matches!(
            build_l_based(&f, 0.0, 5),
            Err(ApproxError::Hypothesis { .. })
        ));
        assert!(matches!(
            build_shrinking_example(1),
            Err(ApproxError::InvalidN { n: 1 })
        ));
    }

    #[test]
    fn negative_third_component_is_normalised() {
        // helix traversed with γ3' = -1
        let p = BjorlingData::new(
            Curve::from_position(["sin(u)", "-cos(u)", "-u"].map(|s| s.parse().unwrap())),
            ["u*cos(u)", "u*sin(u)", "-u"].map(|s| s.parse().unwrap()),
            Interval::new(0.0, 1.0).unwrap(),
            0.5,
        )
        .unwrap();
        let fam = ApproxFamily::new(FamilyKind::GammaBased, &p, 0.5).unwrap();
        assert!(fam.axis_flipped);
        let m = fam.member(10).unwrap();
        let g = m.gamma_prime_real(0.5).unwrap();
        assert!(g[2] < 0.0);
        assert!(nullity(&g) < 1e-12);
        assert!(validate(&m, 64).valid);
    }

    #[test]
    fn shrinking_members() {
        let m = build_shrinking_example(3).unwrap();
        let l = m.l_real(0.5).unwrap();
        let g = m.gamma_prime_real(0.5).unwrap();
        let p = [0.75, 1.0, 1.25];
        for c in 0..3 {
            assert!((l[c] - 2.0 / 3.0 * p[c]).abs() < 1e-15);
            assert!((g[c] - l[c] / 3.0).abs() < 1e-15);
        }
        let tol = ToleranceSpec::default();
        for t in m.interval().linspace(101) {
            assert_eq!(
                classify_by_data(&m, t, &tol).unwrap(),
                SingularityType::CuspidalEdge
            );
        }
        // deviation from the limit at n = 1000 is 2/1000 at t = ±1
        let big = build_shrinking_example(1000).unwrap();
        let parent = preset("shrinking").unwrap();
        for t in big.interval().linspace(101) {
            let g = big.gamma_prime_real(t).unwrap();
            let l = big.l_real(t).unwrap();
            let l0 = parent.l_real(t).unwrap();
            let dl = (0..3).map(|c| (l[c] - l0[c]).abs()).fold(0.0, f64::max);
            let dg = g.iter().map(|x| x.abs()).fold(0.0, f64::max);
            assert!(dl <= 2e-3 + 1e-15 && dg <= 2e-3 + 1e-15);
        }
    }

    #[test]
    fn distance_of_identical_solutions_is_zero() {
        let p = preset("example-3-1").unwrap();
        let r = Rect::default_for(p.interval());
        let s = MaxfaceSolution::compute(&p, r, 6, 6).unwrap();
        assert_eq!(sup_norm_distance(&s, &s).unwrap(), 0.0);
        let other = MaxfaceSolution::compute(&p, r, 7, 6).unwrap();
        assert_eq!(
            sup_norm_distance(&s, &other),
            Err(ApproxError::DomainMismatch)
        );
    }

    #[test]
    fn shrinking_distance_against_closed_form() {
        // oracle: closed-form antiderivatives of both integrands
        let n = 3.0f64;
        let a = (1.0 - 1.0 / n) / n;
        let b = 1.0 - 1.0 / n;
        let r = Rect::new(Complex64::new(0.0, 0.0), 1.0, 1.0);
        let oracle = |z: Complex64, ca: f64, cb: f64| -> [f64; 3] {
            // ∫ (ca - i cb) (1 - w^2, 2w, 1 + w^2) dw
            let q = Complex64::new(ca, -cb);
            let z3 = z * z * z;
            [
                (q * (z - z3 / 3.0)).re,
                (q * z * z).re,
                (q * (z + z3 / 3.0)).re,
            ]
        };
        let mut expect = 0.0f64;
        for i in 0..41 {
            for j in 0..41 {
                let z = r.grid_point(i, j, 41, 41);
                let x = oracle(z, a, b);
                let y = oracle(z, 0.0, 1.0);
                for c in 0..3 {
                    expect = expect.max((x[c] - y[c]).abs());
                }
            }
        }
        let m = build_shrinking_example(3).unwrap();
        let d = distance_on(&m, &preset("shrinking").unwrap(), r, 41, 41).unwrap();
        assert!((d - expect).abs() < 1e-9, "{d} vs {expect}");
    }
}
