use num_complex::Complex64;
use serde::Serialize;

use super::{BjorlingData, BjorlingError};
use crate::jet::{Jet, MAX_ORDER};

/// Which quotient defined the Gauss map at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GaussBranch {
    /// `(γ1' + iγ2') / γ3'`
    Gamma,
    /// `(L1 + iL2) / L3`
    L,
}

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

// Orders lost to cancelling a zero of the denominator are made up from here.
const SPARE_ORDER: usize = 4;

fn branch_jet(
    num_re: &Jet,
    num_im: &Jet,
    den: &Jet,
    k: usize,
) -> Option<Result<Jet, crate::expr::EvalError>> {
    if den.is_zero() {
        return None;
    }
    let num = num_re.add(&num_im.scale_by(I));
    Some(
        num.div(den)
            .map(|q| if q.order() > k { q.truncate(k) } else { q }),
    )
}

/// The Weierstrass data `(g, f)` of a singular Björling datum.
#[derive(Debug, Clone)]
pub struct WeierstrassData<'a> {
    data: &'a BjorlingData,
}

impl<'a> WeierstrassData<'a> {
    pub fn new(data: &'a BjorlingData) -> Self {
        Self { data }
    }

    pub fn data(&self) -> &BjorlingData {
        self.data
    }

    /// Jet of `g` at `u` and the branch it came from.
    ///
    /// The `γ'` quotient is used unless `γ'` vanishes identically or `γ3'`
    /// vanishes to working order at `u`; a pole in one quotient also falls
    /// back to the other.
    pub fn g_jet(&self, u: f64, k: usize) -> Result<(Jet, GaussBranch), BjorlingError> {
        let work = (k + SPARE_ORDER).min(MAX_ORDER.max(k));
        let flags = self.data.flags();
        let mut first_err = None;
        let order: &[GaussBranch] = if flags.gamma_prime_zero {
            &[GaussBranch::L]
        } else if flags.l_zero {
            &[GaussBranch::Gamma]
        } else {
            &[GaussBranch::Gamma, GaussBranch::L]
        };
        for &branch in order {
            let (v, name) = match branch {
                GaussBranch::Gamma => (self.data.gamma_prime_jets(u, work)?, "gamma'_3"),
                GaussBranch::L => (self.data.l_jets(u, work)?, "L_3"),
            };
            match branch_jet(&v[0], &v[1], &v[2], k) {
                Some(Ok(j)) => return Ok((j, branch)),
                Some(Err(source)) => {
                    first_err.get_or_insert(BjorlingError::Eval {
                        component: name,
                        at: Complex64::new(u, 0.0),
                        source,
                    });
                }
                None => {}
            }
        }
        Err(first_err.unwrap_or(BjorlingError::MalformedGaussMap { u }))
    }

    /// Jet of `f = γ1' - iL1 - iγ2' - L2` at `u`.
    pub fn f_jet(&self, u: f64, k: usize) -> Result<Jet, BjorlingError> {
        let g = self.data.gamma_prime_jets(u, k)?;
        let l = self.data.l_jets(u, k)?;
        Ok(g[0]
            .sub(&l[0].scale_by(I))
            .sub(&g[1].scale_by(I))
            .sub(&l[1]))
    }

    /// `g(z)` by the quotient with the larger denominator (or the only
    /// usable one when `γ'` or `L` vanishes identically).
    pub fn g(&self, z: Complex64) -> Result<(Complex64, GaussBranch), BjorlingError> {
        let flags = self.data.flags();
        let gp = if flags.gamma_prime_zero {
            None
        } else {
            Some(self.data.gamma_prime_at(z)?)
        };
        let l = if flags.l_zero {
            None
        } else {
            Some(self.data.l_at(z)?)
        };
        let pick = match (gp, l) {
            (Some(a), Some(b)) => {
                if a[2].norm() >= b[2].norm() {
                    (a, GaussBranch::Gamma)
                } else {
                    (b, GaussBranch::L)
                }
            }
            (Some(a), None) => (a, GaussBranch::Gamma),
            (None, Some(b)) => (b, GaussBranch::L),
            (None, None) => return Err(BjorlingError::MalformedGaussMap { u: z.re }),
        };
        let (v, branch) = pick;
        if v[2].norm() < 1e-300 {
            return Err(BjorlingError::MalformedGaussMap { u: z.re });
        }
        Ok(((v[0] + I * v[1]) / v[2], branch))
    }

    pub fn f(&self, z: Complex64) -> Result<Complex64, BjorlingError> {
        let g = self.data.gamma_prime_at(z)?;
        let l = self.data.l_at(z)?;
        Ok(g[0] - I * l[0] - I * g[1] - l[1])
    }

    /// `Φ/dz = (1 + g^2, i(1 - g^2), -2g) f` at `z`.
    pub fn phi(&self, z: Complex64) -> Result<[Complex64; 3], BjorlingError> {
        let (g, _) = self.g(z)?;
        let f = self.f(z)?;
        let g2 = g * g;
        Ok([(1.0 + g2) * f, I * (1.0 - g2) * f, -2.0 * g * f])
    }
}

/// Jet of the Gauss map at `u`; see [`WeierstrassData::g_jet`].
pub fn gauss_map_jet(data: &BjorlingData, u: f64, k: usize) -> Result<Jet, BjorlingError> {
    WeierstrassData::new(data).g_jet(u, k).map(|(j, _)| j)
}

/// Jet of `f` at `u`.
pub fn weierstrass_f(data: &BjorlingData, u: f64, k: usize) -> Result<Jet, BjorlingError> {
    WeierstrassData::new(data).f_jet(u, k)
}
