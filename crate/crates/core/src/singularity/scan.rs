use rayon::prelude::*;
use serde::Serialize;

use super::{
    alpha_beta_eta, classify_by_abe, classify_witnesses, data_witnesses, SingularityType,
    ToleranceSpec, Witnesses,
};
use crate::bjorling::{euclid_norm, golden_section_min, BjorlingData, BjorlingError};
use crate::jet::Jet;

/// Why a point was reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReportSource {
    Grid,
    /// A located zero of `γ'` or `L`.
    Root,
    /// A grid point that is also a located zero.
    GridRoot,
}

impl ReportSource {
    pub fn is_root(self) -> bool {
        !matches!(self, ReportSource::Grid)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularityReport {
    pub u: f64,
    pub source: ReportSource,
    /// Final type: the common verdict of both routes, an interval label, or
    /// `Unclassified` when the routes disagree.
    pub kind: SingularityType,
    pub by_data: SingularityType,
    pub by_abe: SingularityType,
    pub witnesses: Option<Witnesses>,
    pub agreement: bool,
}

/// Classifies a single point by both routes.
pub fn classify_point(
    data: &BjorlingData,
    u: f64,
    tol: &ToleranceSpec,
    source: ReportSource,
) -> SingularityReport {
    let flags = data.flags();
    let wit = data_witnesses(data, u, tol);
    let by_data = if flags.gamma_prime_zero {
        SingularityType::Shrinking
    } else if flags.l_zero {
        SingularityType::Folded
    } else {
        match &wit {
            Ok(w) => classify_witnesses(w, tol),
            Err(e) => SingularityType::Unclassified(e.to_string()),
        }
    };
    let abe = alpha_beta_eta(data, u);
    let by_abe = match &abe {
        Ok(v) => classify_by_abe(*v, tol),
        Err(e) => SingularityType::Unclassified(e.to_string()),
    };
    let witnesses = wit.ok().map(|mut w| {
        if let Ok((a, b, e)) = abe {
            w.alpha = Some(a);
            w.beta = Some(b);
            w.eta = Some(e);
        }
        w
    });
    let (kind, agreement) = if by_data.is_interval_level() {
        // the invariants do not see interval-level labels
        (by_data.clone(), true)
    } else if by_data.name() == by_abe.name() {
        (by_data.clone(), true)
    } else {
        (
            SingularityType::Unclassified(format!(
                "routes disagree: data {by_data}, invariants {by_abe}"
            )),
            false,
        )
    };
    SingularityReport {
        u,
        source,
        kind,
        by_data,
        by_abe,
        witnesses,
        agreement,
    }
}

type VecFn<'a> = dyn Fn(f64) -> Result<[f64; 3], BjorlingError> + Sync + 'a;
type JetFn<'a> = dyn Fn(f64, usize) -> Result<[Jet; 3], BjorlingError> + Sync + 'a;

const POLISH_ORDER: usize = 8;
const POLISH_STEPS: usize = 12;

fn sq_norm(v: &VecFn, u: f64) -> f64 {
    v(u).map(|x| {
        let n = euclid_norm(&x);
        n * n
    })
    .unwrap_or(f64::INFINITY)
}

// Newton-type refinement of a zero of |V|^2 of unknown multiplicity M:
// near a zero at offset r the jet is c_M (h - r)^M + ..., so
// r = -c_{M-1} / (M c_M).
fn polish(jets: &JetFn, u: f64, lo: f64, hi: f64) -> f64 {
    let mut u = u;
    for _ in 0..POLISH_STEPS {
        let Ok(v) = jets(u, POLISH_ORDER) else { break };
        let n = v[0].mul(&v[0]).add(&v[1].mul(&v[1])).add(&v[2].mul(&v[2]));
        let c: Vec<f64> = n.coeffs().iter().map(|z| z.re).collect();
        let top = c[1..].iter().map(|x| x.abs()).fold(0.0, f64::max);
        if top == 0.0 {
            break;
        }
        let Some(m) = (1..c.len()).find(|&j| c[j].abs() >= 1e-3 * top) else {
            break;
        };
        let step = -c[m - 1] / (m as f64 * c[m]);
        let next = (u + step).clamp(lo, hi);
        if !next.is_finite() {
            break;
        }
        let done = (next - u).abs() <= 4.0 * f64::EPSILON * u.abs().max(1.0);
        u = next;
        if done {
            break;
        }
    }
    u
}

fn is_root(jets: &JetFn, u: f64, tol: &ToleranceSpec) -> bool {
    let Ok(v) = jets(u, 3) else { return false };
    let at = |k: usize| euclid_norm(&[0, 1, 2].map(|i| v[i].derivative_value(k).re));
    let scale = (0..=3).map(at).fold(0.0, f64::max);
    tol.is_zero(at(0), scale)
}

/// Zeros of `V` on the grid's local minima of `|V|^2`.
fn locate_roots(grid: &[f64], value: &VecFn, jets: &JetFn, tol: &ToleranceSpec) -> Vec<f64> {
    let n2: Vec<f64> = grid.par_iter().map(|&u| sq_norm(value, u)).collect();
    let max = n2
        .iter()
        .copied()
        .filter(|x| x.is_finite())
        .fold(0.0, f64::max);
    let last = grid.len() - 1;
    (0..grid.len())
        .into_par_iter()
        .filter_map(|k| {
            let left = if k > 0 { n2[k - 1] } else { f64::INFINITY };
            let right = if k < last { n2[k + 1] } else { f64::INFINITY };
            let local_min = n2[k] <= left && n2[k] <= right && (n2[k] < left || n2[k] < right);
            if !local_min || n2[k].is_nan() || n2[k] >= 0.5 * max {
                return None;
            }
            let (lo, hi) = (grid[k.saturating_sub(1)], grid[(k + 1).min(last)]);
            let g = golden_section_min(&|u| sq_norm(value, u), lo, hi, 100);
            let start = if sq_norm(value, g) <= n2[k] {
                g
            } else {
                grid[k]
            };
            let r = polish(jets, start, lo, hi);
            is_root(jets, r, tol).then_some(r)
        })
        .collect()
}

/// Classifies every grid point of `I` plus every located zero of `γ'` and
/// of `L`, sorted by `u`.
pub fn scan_interval(
    data: &BjorlingData,
    grid: usize,
    tol: &ToleranceSpec,
) -> Vec<SingularityReport> {
    let iv = data.interval();
    let points = iv.linspace(grid);
    let flags = data.flags();

    let mut roots = Vec::new();
    if !flags.gamma_prime_zero {
        roots.extend(locate_roots(
            &points,
            &|u| data.gamma_prime_real(u),
            &|u, k| data.gamma_prime_jets(u, k),
            tol,
        ));
    }
    if !flags.l_zero {
        roots.extend(locate_roots(
            &points,
            &|u| data.l_real(u),
            &|u, k| data.l_jets(u, k),
            tol,
        ));
    }
    roots.sort_by(f64::total_cmp);
    let snap = 1e-12 * iv.len().max(1.0);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e3 * snap);

    let mut sites: Vec<(f64, ReportSource)> =
        points.iter().map(|&u| (u, ReportSource::Grid)).collect();
    for r in roots {
        match sites.iter_mut().find(|(u, _)| (u - r).abs() <= snap) {
            Some(site) => site.1 = ReportSource::GridRoot,
            None => sites.push((r, ReportSource::Root)),
        }
    }
    sites.sort_by(|a, b| a.0.total_cmp(&b.0));
    sites
        .par_iter()
        .map(|&(u, src)| classify_point(data, u, tol, src))
        .collect()
}
