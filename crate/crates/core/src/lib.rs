//! Singular Björling problem for maxfaces in Lorentz–Minkowski space.
//!
//! * [`expr`]: analytic expressions in one variable (parser, evaluator).
//! * [`jet`]: truncated Taylor arithmetic used for every derivative.
//! * [`quad`]: adaptive Gauss–Legendre quadrature on complex segments.
//! * [`bjorling`]: singular Björling data, validation and the solver.
//! * [`singularity`]: point classification by two independent routes.
//! * [`approx`]: cuspidal-edge approximating families and sup-norm distances.
//! * [`presets`]: named data sets.

pub mod approx;
pub mod bjorling;
pub mod expr;
pub mod jet;
pub mod presets;
pub mod quad;
pub mod singularity;

pub use expr::{parse_expr, AnalyticExpr, EvalError, ParseError};
pub use jet::{jet_at, jet_div, Jet};
