//! Named data sets.

use crate::bjorling::{BjorlingData, Curve, Interval};
use crate::expr::AnalyticExpr;

const NAMES: [&str; 6] = [
    "example-3-1",
    "example-3-2",
    "example-3-4",
    "example-3-5",
    "shrinking",
    "folded-helix",
];

pub fn preset_names() -> &'static [&'static str] {
    &NAMES
}

fn exprs(s: [&str; 3]) -> [AnalyticExpr; 3] {
    s.map(|e| e.parse().expect("preset expression"))
}

fn helix() -> Curve {
    Curve::from_position(exprs(["sin(u)", "-cos(u)", "u"]))
}

/// Builds a preset by name.
pub fn preset(name: &str) -> Option<BjorlingData> {
    let (gamma, l, a, b, base) = match name {
        // L = u γ'
        "example-3-1" => (helix(), exprs(["u*cos(u)", "u*sin(u)", "u"]), 0.0, 1.0, 0.5),
        // L = u^2 γ'
        "example-3-2" => (
            Curve::from_position(exprs(["u-u^3/3", "u^2", "u+u^3/3"])),
            exprs(["u^2*(1-u^2)", "u^2*2*u", "u^2*(1+u^2)"]),
            0.0,
            1.0,
            0.5,
        ),
        // γ' = (u - n)(u - p)^2 δ', L = δ' with δ the helix, m, n, p = -1, 0, 1
        "example-3-4" => (
            Curve::from_derivative(
                exprs(["u*(u-1)^2*cos(u)", "u*(u-1)^2*sin(u)", "u*(u-1)^2"]),
                [0.0, -1.0, 0.0],
            ),
            exprs(["cos(u)", "sin(u)", "1"]),
            -1.5,
            1.5,
            0.0,
        ),
        "example-3-5" => (
            helix(),
            exprs(["u*(u-1)^2*cos(u)", "u*(u-1)^2*sin(u)", "u*(u-1)^2"]),
            -1.5,
            1.5,
            0.0,
        ),
        "shrinking" => (
            Curve::Zero,
            exprs(["1-t^2", "2*t", "1+t^2"]),
            -1.0,
            1.0,
            0.0,
        ),
        "folded-helix" => (helix(), exprs(["0", "0", "0"]), -1.0, 1.0, 0.0),
        _ => return None,
    };
    let interval = Interval::new(a, b).expect("preset interval");
    Some(BjorlingData::new(gamma, l, interval, base).expect("preset base"))
}

/// All presets with their names.
pub fn all_presets() -> Vec<(&'static str, BjorlingData)> {
    NAMES
        .iter()
        .map(|&n| (n, preset(n).expect("listed preset")))
        .collect()
}
