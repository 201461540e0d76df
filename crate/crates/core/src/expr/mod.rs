//! Real-analytic expressions in one variable.
//!
//! The grammar covers what the Björling data of interest need: the variable
//! (`u` or `t`), decimal constants, `+ - * /`, integer powers and the
//! elementary functions `sin`, `cos`, `exp`, `sqrt`. Every expression can be
//! evaluated at real or complex arguments (its analytic extension) and
//! expanded into a Taylor [`Jet`](crate::jet::Jet) at a real base point.

mod diff;
mod eval;
mod parse;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

pub use parse::parse_expr;

/// Elementary functions admitted by the grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
        }
    }

    pub(crate) fn from_name(name: &str) -> Option<Self> {
        match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "exp" => Some(Func::Exp),
            "sqrt" => Some(Func::Sqrt),
            _ => None,
        }
    }
}

/// Expression tree node.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Var,
    Const(f64),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, i32),
    Call(Func, Box<Node>),
}

/// Errors raised while evaluating an expression or operating on jets.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero at {at}")]
    DivisionByZero { at: Complex64 },
    #[error("sqrt argument {arg} lies on the branch cut (negative real axis) at {at}")]
    BranchCut { at: Complex64, arg: Complex64 },
    #[error("sqrt argument vanishes at {at}: branch point")]
    BranchPoint { at: Complex64 },
    #[error("pole at base point {base}")]
    Pole { base: f64 },
    #[error("divisor jet is identically zero to order {order}")]
    IdenticallyZero { order: usize },
    #[error("requested jet order {requested} exceeds the maximum {max}")]
    OrderOverflow { requested: usize, max: usize },
    #[error("jet order exhausted")]
    OrderExhausted,
    #[error("non-finite value at {at}")]
    NonFinite { at: Complex64 },
}

/// A parsed real-analytic expression of one variable.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticExpr {
    root: Node,
}

impl AnalyticExpr {
    pub fn from_node(root: Node) -> Self {
        Self { root }
    }

    pub fn node(&self) -> &Node {
        &self.root
    }

    pub fn into_node(self) -> Node {
        self.root
    }

    pub fn constant(value: f64) -> Self {
        Self::from_node(Node::Const(value))
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn var() -> Self {
        Self::from_node(Node::Var)
    }

    /// True when the expression is literally the constant zero.
    pub fn is_literal_zero(&self) -> bool {
        matches!(self.root, Node::Const(c) if c == 0.0)
    }

    /// Symbolic first derivative with light constant folding.
    pub fn derivative(&self) -> AnalyticExpr {
        AnalyticExpr::from_node(diff::derivative(&self.root))
    }

    pub fn eval_real(&self, u: f64) -> Result<f64, EvalError> {
        eval::eval_scalar(&self.root, u)
    }

    pub fn eval_complex(&self, z: Complex64) -> Result<Complex64, EvalError> {
        eval::eval_scalar(&self.root, z)
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        fn count(n: &Node) -> usize {
            match n {
                Node::Var | Node::Const(_) => 1,
                Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => 1 + count(a),
                Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                    1 + count(a) + count(b)
                }
            }
        }
        count(&self.root)
    }

    pub(crate) fn eval_jet(&self, var: &crate::jet::Jet) -> Result<crate::jet::Jet, EvalError> {
        eval::eval_jet(&self.root, var)
    }

    // Builders used when composing derived data (approximating families).
    // They consume and return trees, so the operator traits are not used.

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, rhs: AnalyticExpr) -> AnalyticExpr {
        Self::from_node(Node::Add(Box::new(self.root), Box::new(rhs.root)))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, rhs: AnalyticExpr) -> AnalyticExpr {
        Self::from_node(Node::Sub(Box::new(self.root), Box::new(rhs.root)))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, rhs: AnalyticExpr) -> AnalyticExpr {
        Self::from_node(Node::Mul(Box::new(self.root), Box::new(rhs.root)))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(self, rhs: AnalyticExpr) -> AnalyticExpr {
        Self::from_node(Node::Div(Box::new(self.root), Box::new(rhs.root)))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> AnalyticExpr {
        Self::from_node(Node::Neg(Box::new(self.root)))
    }

    pub fn powi(self, exp: i32) -> AnalyticExpr {
        Self::from_node(Node::Pow(Box::new(self.root), exp))
    }

    pub fn call(self, func: Func) -> AnalyticExpr {
        Self::from_node(Node::Call(func, Box::new(self.root)))
    }
}

impl FromStr for AnalyticExpr {
    type Err = parse::ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expr(s)
    }
}

pub use parse::ParseError;

// Binding strength used by the printer; mirrors the parser.
const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_UNARY: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

fn precedence(n: &Node) -> u8 {
    match n {
        Node::Add(..) | Node::Sub(..) => PREC_ADD,
        Node::Mul(..) | Node::Div(..) => PREC_MUL,
        Node::Neg(_) => PREC_UNARY,
        Node::Pow(..) => PREC_POW,
        Node::Var | Node::Const(_) | Node::Call(..) => PREC_ATOM,
    }
}

fn write_node(f: &mut fmt::Formatter<'_>, n: &Node) -> fmt::Result {
    fn child(f: &mut fmt::Formatter<'_>, n: &Node, wrap: bool) -> fmt::Result {
        if wrap {
            write!(f, "(")?;
            write_node(f, n)?;
            write!(f, ")")
        } else {
            write_node(f, n)
        }
    }
    match n {
        Node::Var => write!(f, "u"),
        Node::Const(c) => {
            if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) {
                write!(f, "({})", c)
            } else {
                write!(f, "{}", c)
            }
        }
        Node::Neg(a) => {
            write!(f, "-")?;
            child(f, a, precedence(a) < PREC_UNARY)
        }
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
            let (p, op) = match n {
                Node::Add(..) => (PREC_ADD, " + "),
                Node::Sub(..) => (PREC_ADD, " - "),
                Node::Mul(..) => (PREC_MUL, "*"),
                _ => (PREC_MUL, "/"),
            };
            // Left-associative: the right operand needs parentheses at equal precedence.
            child(f, a, precedence(a) < p)?;
            write!(f, "{}", op)?;
            child(f, b, precedence(b) <= p)
        }
        Node::Pow(a, e) => {
            child(f, a, precedence(a) < PREC_ATOM)?;
            write!(f, "^{}", e)
        }
        Node::Call(func, a) => {
            write!(f, "{}(", func.name())?;
            write_node(f, a)?;
            write!(f, ")")
        }
    }
}

impl fmt::Display for AnalyticExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(f, &self.root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_examples() {
        let sq: AnalyticExpr = "u^2".parse().unwrap();
        let v = sq.eval_complex(c(0.0, 1.0)).unwrap();
        assert!((v - c(-1.0, 0.0)).norm() < 1e-15);

        let s: AnalyticExpr = "sin(u)".parse().unwrap();
        assert_eq!(s.eval_complex(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));

        let p: AnalyticExpr = "1+u^2".parse().unwrap();
        let v = p.eval_complex(c(1.0, 1.0)).unwrap();
        assert!((v - c(1.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn division_by_zero_is_reported() {
        let e: AnalyticExpr = "1/u".parse().unwrap();
        assert!(matches!(
            e.eval_complex(c(0.0, 0.0)),
            Err(EvalError::DivisionByZero { .. })
        ));
        assert!(e.eval_real(0.0).is_err());
    }

    #[test]
    fn branch_cut_is_reported() {
        let e: AnalyticExpr = "sqrt(u)".parse().unwrap();
        assert!(matches!(
            e.eval_complex(c(-2.0, 0.0)),
            Err(EvalError::BranchCut { .. })
        ));
        assert!(e.eval_real(-1.0).is_err());
        let v = e.eval_complex(c(-2.0, 1e-3)).unwrap();
        assert!(v.re > 0.0);
    }

    #[test]
    fn derivative_matches_known_forms() {
        let e: AnalyticExpr = "u - u^3/3".parse().unwrap();
        let d = e.derivative();
        for &u in &[-1.0, 0.0, 0.3, 2.0] {
            assert!((d.eval_real(u).unwrap() - (1.0 - u * u)).abs() < 1e-14);
        }
        let e: AnalyticExpr = "sqrt(1+u)*exp(u)/cos(u)".parse().unwrap();
        let d = e.derivative();
        let u: f64 = 0.4;
        let expect = ((1.0 + u).sqrt() * u.exp() / u.cos()) * (0.5 / (1.0 + u) + 1.0 + u.tan());
        assert!((d.eval_real(u).unwrap() - expect).abs() < 1e-13);
    }

    #[test]
    fn cauchy_riemann_holds_numerically() {
        let e: AnalyticExpr = "sin(u)*exp(u)/(2 + u^2) + sqrt(3+u)".parse().unwrap();
        let h = 1e-6;
        for &(x, y) in &[(0.3, 0.2), (-0.7, 0.5), (1.1, -0.4)] {
            let z = c(x, y);
            let fx = (e.eval_complex(z + h).unwrap() - e.eval_complex(z - h).unwrap()) / (2.0 * h);
            let fy = (e.eval_complex(z + c(0.0, h)).unwrap()
                - e.eval_complex(z - c(0.0, h)).unwrap())
                / (2.0 * h);
            // u_x = v_y, u_y = -v_x
            assert!((fx.re - fy.im).abs() < 1e-7);
            assert!((fy.re + fx.im).abs() < 1e-7);
        }
    }

    fn arb_node() -> impl Strategy<Value = Node> {
        let leaf = prop_oneof![
            Just(Node::Var),
            (0u32..1000).prop_map(|k| Node::Const(k as f64 / 8.0)),
        ];
        leaf.prop_recursive(4, 32, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|a| Node::Neg(Box::new(a))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Node::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Node::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Node::Mul(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Node::Div(Box::new(a), Box::new(b))),
                (inner.clone(), -3i32..4).prop_map(|(a, e)| Node::Pow(Box::new(a), e)),
                (inner, 0usize..4).prop_map(|(a, f)| {
                    let func = [Func::Sin, Func::Cos, Func::Exp, Func::Sqrt][f];
                    Node::Call(func, Box::new(a))
                }),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_round_trips(node in arb_node()) {
            let e = AnalyticExpr::from_node(node);
            let text = e.to_string();
            let back = parse_expr(&text).unwrap();
            prop_assert_eq!(back, e, "text was {}", text);
        }

        #[test]
        fn schwarz_reflection(x in -1.5f64..1.5, y in -1.0f64..1.0) {
            let e: AnalyticExpr = "cos(u)^2 - exp(u)*u/3 + sqrt(4 + u)".parse().unwrap();
            let z = c(x, y);
            let a = e.eval_complex(z.conj()).unwrap();
            let b = e.eval_complex(z).unwrap().conj();
            prop_assert!((a - b).norm() <= 1e-14 * (1.0 + a.norm()));
        }

        #[test]
        fn complex_eval_on_real_axis_matches_real_eval(x in -2.0f64..2.0) {
            let e: AnalyticExpr = "u - u^3/3 + sin(u)*cos(2*u) - exp(-u)/(1+u^2) + sqrt(5+u)".parse().unwrap();
            let r = e.eval_real(x).unwrap();
            let z = e.eval_complex(c(x, 0.0)).unwrap();
            prop_assert!((z.re - r).abs() <= 4.0 * f64::EPSILON * (1.0 + r.abs()));
            prop_assert!(z.im.abs() <= 4.0 * f64::EPSILON * (1.0 + r.abs()));
        }
    }
}
