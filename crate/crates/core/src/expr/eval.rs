use num_complex::Complex64;

use super::{EvalError, Func, Node};
use crate::jet::Jet;

/// Scalar types an expression can be evaluated over.
pub(crate) trait Scalar:
    Copy
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn to_complex(self) -> Complex64;
    fn magnitude(self) -> f64;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn exp(self) -> Self;
    /// Principal square root; `None` on the closed negative real axis.
    fn sqrt_principal(self) -> Option<Self>;
    fn is_finite(self) -> bool;
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn sqrt_principal(self) -> Option<Self> {
        (self >= 0.0).then(|| self.sqrt())
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl Scalar for Complex64 {
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn to_complex(self) -> Complex64 {
        self
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn sin(self) -> Self {
        Complex64::sin(self)
    }
    fn cos(self) -> Self {
        Complex64::cos(self)
    }
    fn exp(self) -> Self {
        Complex64::exp(self)
    }
    fn sqrt_principal(self) -> Option<Self> {
        if self.im == 0.0 && self.re < 0.0 {
            None
        } else {
            Some(self.sqrt())
        }
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

// Divisors below this magnitude count as zero.
const TINY: f64 = 1e-300;

pub(crate) fn eval_scalar<S: Scalar>(node: &Node, x: S) -> Result<S, EvalError> {
    let v = eval_node(node, x)?;
    if !v.is_finite() {
        return Err(EvalError::NonFinite { at: x.to_complex() });
    }
    Ok(v)
}

fn checked_div<S: Scalar>(a: S, b: S, x: S) -> Result<S, EvalError> {
    if b.magnitude() < TINY {
        return Err(EvalError::DivisionByZero { at: x.to_complex() });
    }
    Ok(a / b)
}

fn powi<S: Scalar>(base: S, exp: i32, x: S) -> Result<S, EvalError> {
    let mut result = S::from_f64(1.0);
    let mut b = base;
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            result = result * b;
        }
        b = b * b;
        e >>= 1;
    }
    if exp < 0 {
        checked_div(S::from_f64(1.0), result, x)
    } else {
        Ok(result)
    }
}

fn eval_node<S: Scalar>(node: &Node, x: S) -> Result<S, EvalError> {
    Ok(match node {
        Node::Var => x,
        Node::Const(c) => S::from_f64(*c),
        Node::Neg(a) => -eval_node(a, x)?,
        Node::Add(a, b) => eval_node(a, x)? + eval_node(b, x)?,
        Node::Sub(a, b) => eval_node(a, x)? - eval_node(b, x)?,
        Node::Mul(a, b) => eval_node(a, x)? * eval_node(b, x)?,
        Node::Div(a, b) => checked_div(eval_node(a, x)?, eval_node(b, x)?, x)?,
        Node::Pow(a, e) => powi(eval_node(a, x)?, *e, x)?,
        Node::Call(func, a) => {
            let arg = eval_node(a, x)?;
            match func {
                Func::Sin => arg.sin(),
                Func::Cos => arg.cos(),
                Func::Exp => arg.exp(),
                Func::Sqrt => arg.sqrt_principal().ok_or(EvalError::BranchCut {
                    at: x.to_complex(),
                    arg: arg.to_complex(),
                })?,
            }
        }
    })
}

pub(crate) fn eval_jet(node: &Node, var: &Jet) -> Result<Jet, EvalError> {
    Ok(match node {
        Node::Var => var.clone(),
        Node::Const(c) => Jet::constant(var.base(), Complex64::new(*c, 0.0), var.order()),
        Node::Neg(a) => eval_jet(a, var)?.neg(),
        Node::Add(a, b) => eval_jet(a, var)?.add(&eval_jet(b, var)?),
        Node::Sub(a, b) => eval_jet(a, var)?.sub(&eval_jet(b, var)?),
        Node::Mul(a, b) => eval_jet(a, var)?.mul(&eval_jet(b, var)?),
        Node::Div(a, b) => eval_jet(a, var)?.div(&eval_jet(b, var)?)?,
        Node::Pow(a, e) => eval_jet(a, var)?.powi(*e)?,
        Node::Call(func, a) => {
            let arg = eval_jet(a, var)?;
            match func {
                Func::Sin => arg.sin(),
                Func::Cos => arg.cos(),
                Func::Exp => arg.exp(),
                Func::Sqrt => arg.sqrt()?,
            }
        }
    })
}
