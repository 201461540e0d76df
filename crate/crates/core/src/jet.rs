//! Truncated Taylor expansions ("jets") with complex coefficients.
//!
//! A jet of order `k` at a real base point `u0` stores `c_0 .. c_k` with
//! `c_j = f^(j)(u0) / j!`. Arithmetic is exact up to truncation. Division
//! cancels common leading zeros first, so removable singularities such as
//! `u^2 / u` at `u0 = 0` are handled, at the price of a lower order.

use num_complex::Complex64;

use crate::expr::{AnalyticExpr, EvalError};

/// Largest order accepted by [`jet_at`].
pub const MAX_ORDER: usize = 16;
/// Default working order.
pub const DEFAULT_ORDER: usize = 16;

/// Relative zero threshold for jet coefficients, scaled by the largest
/// coefficient magnitude of the jet.
pub const ZERO_REL: f64 = 1e-9;
/// Absolute floor of the coefficient zero test.
pub const ZERO_ABS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    base: f64,
    coeffs: Vec<Complex64>,
}

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

impl Jet {
    /// Builds a jet from explicit coefficients. Panics on an empty slice.
    pub fn new(base: f64, coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least one coefficient");
        Self { base, coeffs }
    }

    pub fn from_real(base: f64, coeffs: &[f64]) -> Self {
        Self::new(
            base,
            coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        )
    }

    pub fn constant(base: f64, value: Complex64, order: usize) -> Self {
        let mut coeffs = vec![czero(); order + 1];
        coeffs[0] = value;
        Self { base, coeffs }
    }

    /// The identity function `u` expanded at `base`.
    pub fn variable(base: f64, order: usize) -> Self {
        let mut j = Self::constant(base, Complex64::new(base, 0.0), order);
        if order >= 1 {
            j.coeffs[1] = Complex64::new(1.0, 0.0);
        }
        j
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient `c_j`; zero beyond the stored order.
    pub fn coeff(&self, j: usize) -> Complex64 {
        self.coeffs.get(j).copied().unwrap_or_else(czero)
    }

    /// The value `f(u0)`.
    pub fn value(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// The derivative `f^(j)(u0) = j! c_j`.
    pub fn derivative_value(&self, j: usize) -> Complex64 {
        let fact: f64 = (1..=j).map(|i| i as f64).product();
        self.coeff(j) * fact
    }

    pub fn truncate(mut self, order: usize) -> Self {
        self.coeffs.truncate(order + 1);
        self
    }

    /// Largest coefficient magnitude.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Zero threshold for this jet's coefficients.
    pub fn zero_threshold(&self) -> f64 {
        (ZERO_REL * self.scale()).max(ZERO_ABS)
    }

    /// Number of leading coefficients that test as zero (`order + 1` when
    /// the jet vanishes to working order).
    pub fn leading_zeros(&self) -> usize {
        let thr = self.zero_threshold();
        self.coeffs
            .iter()
            .position(|c| c.norm() > thr)
            .unwrap_or(self.coeffs.len())
    }

    pub fn is_zero(&self) -> bool {
        self.leading_zeros() == self.coeffs.len()
    }

    /// Jet of `f'`, one order lower.
    pub fn derivative(&self) -> Result<Jet, EvalError> {
        if self.order() == 0 {
            return Err(EvalError::OrderExhausted);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(j, c)| c * (j + 1) as f64)
            .collect();
        Ok(Jet::new(self.base, coeffs))
    }

    /// Evaluates the truncated series at `u0 + h`.
    pub fn eval_offset(&self, h: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(czero(), |acc, c| acc * h + c)
    }

    fn check_base(&self, other: &Jet) {
        assert!(
            self.base == other.base,
            "jets at different base points ({} vs {})",
            self.base,
            other.base
        );
    }

    fn zip_with(&self, other: &Jet, f: impl Fn(Complex64, Complex64) -> Complex64) -> Jet {
        self.check_base(other);
        let k = self.order().min(other.order());
        let coeffs = (0..=k)
            .map(|j| f(self.coeffs[j], other.coeffs[j]))
            .collect();
        Jet::new(self.base, coeffs)
    }

    pub fn add(&self, other: &Jet) -> Jet {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Jet {
        Jet::new(self.base, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale_by(&self, s: Complex64) -> Jet {
        Jet::new(self.base, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add_const(&self, s: Complex64) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += s;
        out
    }

    /// Cauchy product.
    pub fn mul(&self, other: &Jet) -> Jet {
        self.check_base(other);
        let k = self.order().min(other.order());
        let coeffs = (0..=k)
            .map(|n| (0..=n).map(|i| self.coeffs[i] * other.coeffs[n - i]).sum())
            .collect();
        Jet::new(self.base, coeffs)
    }

    /// Quotient with removable-singularity reduction.
    ///
    /// Strips the `m` leading zeros of the divisor together with the same
    /// number from the dividend; the result has order `k - m`.
    pub fn div(&self, other: &Jet) -> Result<Jet, EvalError> {
        self.check_base(other);
        let k = self.order().min(other.order());
        let a = Jet::new(self.base, self.coeffs[..=k].to_vec());
        let b = Jet::new(other.base, other.coeffs[..=k].to_vec());
        let m = b.leading_zeros();
        if m > k {
            return Err(EvalError::IdenticallyZero { order: k });
        }
        if a.leading_zeros() < m {
            return Err(EvalError::Pole { base: self.base });
        }
        let a = &a.coeffs[m..];
        let b = &b.coeffs[m..];
        let b0 = b[0];
        let mut q: Vec<Complex64> = Vec::with_capacity(a.len());
        for j in 0..a.len() {
            let s: Complex64 = (1..=j).map(|i| b[i] * q[j - i]).sum();
            q.push((a[j] - s) / b0);
        }
        Ok(Jet::new(self.base, q))
    }

    pub fn recip(&self) -> Result<Jet, EvalError> {
        Jet::constant(self.base, Complex64::new(1.0, 0.0), self.order()).div(self)
    }

    pub fn powi(&self, exp: i32) -> Result<Jet, EvalError> {
        let mut result = Jet::constant(self.base, Complex64::new(1.0, 0.0), self.order());
        let mut b = self.clone();
        let mut e = exp.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        if exp < 0 {
            result.recip()
        } else {
            Ok(result)
        }
    }

    pub fn exp(&self) -> Jet {
        let a = &self.coeffs;
        let mut e = vec![a[0].exp()];
        for k in 1..a.len() {
            let s: Complex64 = (1..=k).map(|j| a[j] * e[k - j] * j as f64).sum();
            e.push(s / k as f64);
        }
        Jet::new(self.base, e)
    }

    fn sin_cos(&self) -> (Jet, Jet) {
        let a = &self.coeffs;
        let mut s = vec![a[0].sin()];
        let mut c = vec![a[0].cos()];
        for k in 1..a.len() {
            let mut sk = czero();
            let mut ck = czero();
            for j in 1..=k {
                let w = a[j] * j as f64;
                sk += w * c[k - j];
                ck -= w * s[k - j];
            }
            s.push(sk / k as f64);
            c.push(ck / k as f64);
        }
        (Jet::new(self.base, s), Jet::new(self.base, c))
    }

    pub fn sin(&self) -> Jet {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Jet {
        self.sin_cos().1
    }

    /// Principal square root. The leading coefficient must be nonzero and
    /// off the negative real axis.
    pub fn sqrt(&self) -> Result<Jet, EvalError> {
        let a = &self.coeffs;
        let at = Complex64::new(self.base, 0.0);
        if a[0].norm() <= self.zero_threshold() {
            return Err(EvalError::BranchPoint { at });
        }
        if a[0].im == 0.0 && a[0].re < 0.0 {
            return Err(EvalError::BranchCut { at, arg: a[0] });
        }
        let r0 = a[0].sqrt();
        let mut r = vec![r0];
        for k in 1..a.len() {
            let s: Complex64 = (1..k).map(|j| r[j] * r[k - j]).sum();
            r.push((a[k] - s) / (r0 * 2.0));
        }
        Ok(Jet::new(self.base, r))
    }
}

/// Taylor jet of `e` at the real point `u0` to order `k`.
///
/// Removable singularities inside the expression cost order; the working
/// order is raised to compensate so the result reaches order `k` whenever
/// the losses are bounded.
pub fn jet_at(e: &AnalyticExpr, u0: f64, k: usize) -> Result<Jet, EvalError> {
    if k > MAX_ORDER {
        return Err(EvalError::OrderOverflow {
            requested: k,
            max: MAX_ORDER,
        });
    }
    let mut work = k;
    loop {
        let j = e.eval_jet(&Jet::variable(u0, work))?;
        if j.order() >= k {
            return Ok(j.truncate(k));
        }
        let deficit = k - j.order();
        if work + deficit > k + MAX_ORDER {
            return Ok(j);
        }
        work += deficit;
    }
}

/// Quotient of two jets at the same base point; see [`Jet::div`].
pub fn jet_div(a: &Jet, b: &Jet) -> Result<Jet, EvalError> {
    a.div(b)
}
