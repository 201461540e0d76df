//! Acceptance suite: one test per criterion, each printing a single
//! `criterion N [PASS|FAIL]` line (visible with `--nocapture`).

// `!(x < tol)` is deliberate throughout: a NaN must count as a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use maxface::approx::{convergence_report, distance_on, ApproxFamily, FamilyKind};
use maxface::bjorling::{
    check_boundary, reconstruct_from_weierstrass, solve, solve_along, validate, BjorlingData, Rect,
    WeierstrassData,
};
use maxface::jet::jet_at;
use maxface::presets::{all_presets, preset};
use maxface::singularity::{
    abe_from_jets, alpha_beta_eta, alpha_closed_gamma, alpha_closed_l, classify_by_abe,
    classify_by_data, data_witnesses, scan_interval, SingularityType, ToleranceSpec, WITNESS_ORDER,
};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

// Tolerances, pinned.
const GOLDEN_POINTS: usize = 25;
const ALPHA_REL: f64 = 1e-8;
const ALPHA_CROSS_REL: f64 = 1e-9;
const ALPHA_POINTS: usize = 20;
const BOUNDARY_POINTS: usize = 50;
const BOUNDARY_POS: f64 = 1e-9;
const BOUNDARY_NORMAL: f64 = 1e-6;
const CLOSED_FORM_TOL: f64 = 1e-9;
const WEIERSTRASS_TOL: f64 = 1e-8;
const WEIERSTRASS_POINTS: usize = 50;
const FAMILY_RESIDUAL: f64 = 1e-10;
const FAMILY_NS: [usize; 4] = [3, 5, 15, 50];
const FAMILY_GRID: (usize, usize) = (41, 41);
const FD_TOL: f64 = 1e-6;
const FD_STEP: f64 = 1e-5;
const PATH_TOL: f64 = 1e-8;
const GRID_STABILITY: f64 = 0.05;
const SCAN_GRID: usize = 101;
const SEED: u64 = 0x6d61_7866;

fn report(n: u32, name: &str, failures: &[String]) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {n} [{status}] {name}");
    for f in failures.iter().take(10) {
        println!("    {f}");
    }
    assert!(failures.is_empty(), "criterion {n} failed: {failures:#?}");
}

fn tol() -> ToleranceSpec {
    ToleranceSpec::default()
}

#[test]
fn criterion_1_golden_classifications() {
    let mut fails = Vec::new();
    for name in ["example-3-1", "example-3-2"] {
        let d = preset(name).unwrap();
        for k in 1..=GOLDEN_POINTS {
            let u = k as f64 / (GOLDEN_POINTS + 1) as f64;
            let t = classify_by_data(&d, u, &tol()).unwrap();
            if t != SingularityType::CuspidalEdge {
                fails.push(format!("{name} u={u}: {t:?}"));
            }
        }
    }
    let cases = [
        (
            "example-3-5",
            [
                SingularityType::CuspidalEdge,
                SingularityType::CuspidalCrosscaps,
                SingularityType::CuspidalS1Minus,
            ],
        ),
        (
            "example-3-4",
            [
                SingularityType::CuspidalEdge,
                SingularityType::Swallowtail,
                SingularityType::CuspidalButterfly,
            ],
        ),
    ];
    for (name, expect) in cases {
        let d = preset(name).unwrap();
        for (u, t) in [-1.0, 0.0, 1.0].into_iter().zip(expect) {
            let got = classify_by_data(&d, u, &tol()).unwrap();
            if got != t {
                fails.push(format!("{name} u={u}: {got:?}, expected {t:?}"));
            }
        }
    }
    report(1, "golden classifications", &fails);
}

#[test]
fn criterion_2_route_agreement() {
    let mut fails = Vec::new();
    let mut checked = 0usize;
    for (name, d) in all_presets() {
        for r in scan_interval(&d, SCAN_GRID, &tol()) {
            if r.by_data.is_interval_level() {
                // the invariants must not claim a point type on such intervals
                if r.by_abe.is_cusp() {
                    fails.push(format!("{name} u={}: {} vs {}", r.u, r.by_data, r.by_abe));
                }
                continue;
            }
            if r.by_data.is_cusp() || r.by_abe.is_cusp() {
                checked += 1;
                if r.by_data != r.by_abe {
                    fails.push(format!("{name} u={}: {} vs {}", r.u, r.by_data, r.by_abe));
                }
            }
        }
    }
    if checked == 0 {
        fails.push("no classified points".into());
    }
    report(2, &format!("route agreement ({checked} points)"), &fails);
}

#[test]
fn criterion_3_closed_form_alpha() {
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut fails = Vec::new();
    for (name, d) in all_presets() {
        let iv = d.interval();
        for _ in 0..ALPHA_POINTS {
            let u = rng.gen_range(iv.a..iv.b);
            let w = data_witnesses(&d, u, &tol()).unwrap();
            let (alpha, _, _) = alpha_beta_eta(&d, u).unwrap();
            let gp = d.gamma_prime_real(u).unwrap();
            let l = d.l_real(u).unwrap();
            let s = w.scale();
            let eq3 =
                (!tol().is_zero(w.gamma_p, s)).then(|| alpha_closed_gamma(gp[2], l[2], w.d_gamma));
            let eq4 = (!tol().is_zero(w.l, s)).then(|| alpha_closed_l(gp[2], l[2], w.d_l));
            for (label, cf) in [("gamma form", eq3), ("L form", eq4)] {
                if let Some(cf) = cf {
                    let rel = (alpha - cf).norm() / cf.norm();
                    if !(rel < ALPHA_REL) {
                        fails.push(format!("{name} u={u}: {label} rel {rel:e}"));
                    }
                }
            }
            if let (Some(a), Some(b)) = (eq3, eq4) {
                let rel = (a - b).norm() / a.norm();
                if !(rel < ALPHA_CROSS_REL) {
                    fails.push(format!("{name} u={u}: forms differ, rel {rel:e}"));
                }
            }
        }
    }
    report(3, "closed-form alpha", &fails);
}

#[test]
fn criterion_4_boundary_conditions() {
    let mut fails = Vec::new();
    for (name, d) in all_presets() {
        let b = check_boundary(&d, BOUNDARY_POINTS).unwrap();
        if !(b.position < BOUNDARY_POS && b.normal < BOUNDARY_NORMAL) {
            fails.push(format!("{name}: {b:?}"));
        }
    }
    report(4, "boundary conditions", &fails);
}

#[test]
fn criterion_5_shrinking_closed_form() {
    let d = preset("shrinking").unwrap();
    let mut fails = Vec::new();
    let mut worst = 0.0f64;
    for i in 0..10 {
        for j in 0..10 {
            let z = Complex64::new(-1.0 + 2.0 * i as f64 / 9.0, -1.0 + 2.0 * j as f64 / 9.0);
            let x = solve(&d, z).unwrap();
            let z3 = z * z * z;
            let exact = [(z - z3 / 3.0).im, 2.0 * z.re * z.im, (z + z3 / 3.0).im];
            for c in 0..3 {
                worst = worst.max((x[c] - exact[c]).abs());
            }
        }
    }
    if !(worst < CLOSED_FORM_TOL) {
        fails.push(format!("max error {worst:e}"));
    }
    report(
        5,
        &format!("shrinking closed form (max error {worst:.1e})"),
        &fails,
    );
}

#[test]
fn criterion_6_weierstrass_consistency() {
    let mut rng = StdRng::seed_from_u64(SEED + 6);
    let mut fails = Vec::new();
    for (name, d) in all_presets() {
        let r = Rect::default_for(d.interval());
        let c = r.center();
        for _ in 0..WEIERSTRASS_POINTS {
            let z = Complex64::new(
                c.re + rng.gen_range(-r.half_u..r.half_u),
                c.im + rng.gen_range(-r.half_v..r.half_v),
            );
            let x = solve(&d, z).unwrap();
            let p = reconstruct_from_weierstrass(&d, z).unwrap();
            let expect = [2.0 * x[0], 2.0 * x[1], -2.0 * x[2]];
            let err = (0..3).map(|k| (p[k] - expect[k]).abs()).fold(0.0, f64::max);
            if !(err < WEIERSTRASS_TOL) {
                fails.push(format!("{name} z={z}: {err:e}"));
            }
        }
    }
    report(6, "Weierstrass consistency", &fails);
}

fn family_cases() -> Vec<(&'static str, FamilyKind, f64)> {
    vec![
        ("shrinking", FamilyKind::ShrinkingExample, 0.0),
        ("folded-helix", FamilyKind::GammaBased, 0.0),
        ("example-3-5", FamilyKind::GammaBased, 0.0),
        ("example-3-5", FamilyKind::GammaBased, 1.0),
        ("example-3-4", FamilyKind::LBased, 0.0),
        ("example-3-4", FamilyKind::LBased, 1.0),
    ]
}

fn residual_max(m: &BjorlingData) -> f64 {
    let r = validate(m, 100);
    [
        "nullity_gamma",
        "nullity_L",
        "proportionality",
        "jet_nullity_gamma",
        "jet_nullity_L",
        "jet_proportionality",
    ]
    .iter()
    .map(|n| r.residual(n).unwrap().max)
    .fold(0.0, f64::max)
}

#[test]
fn criterion_7_approximating_families() {
    let mut fails = Vec::new();
    for (name, kind, t0) in family_cases() {
        let parent = preset(name).unwrap();
        let mut fam = ApproxFamily::new(kind, &parent, t0).unwrap();
        let rep = convergence_report(&mut fam, None, &FAMILY_NS, FAMILY_GRID, &tol()).unwrap();
        let label = format!("{name}@{t0} {kind:?}");
        for (&n, m) in &fam.members {
            let res = residual_max(m);
            if !(res < FAMILY_RESIDUAL) {
                fails.push(format!("{label} n={n}: residual {res:e}"));
            }
            let t = classify_by_data(m, t0, &tol()).unwrap();
            if t != SingularityType::CuspidalEdge {
                fails.push(format!("{label} n={n}: {t:?} at t0"));
            }
        }
        if !rep.table.strictly_decreasing() {
            fails.push(format!("{label}: distances {:?}", rep.table.rows));
        }
        println!(
            "    {label}: distances {:?}",
            rep.table
                .rows
                .iter()
                .map(|r| format!("{}:{:.3e}", r.0, r.1))
                .collect::<Vec<_>>()
        );
    }
    report(7, "approximating families", &fails);
}

#[test]
fn criterion_8_property_suites() {
    let mut fails = Vec::new();
    let mut rng = StdRng::seed_from_u64(SEED + 8);

    // jet derivative against central differences
    for (name, d) in all_presets() {
        let iv = d.interval();
        let exprs = d.gamma_prime_exprs().iter().chain(d.l_exprs().iter());
        for (i, e) in exprs.enumerate() {
            for _ in 0..5 {
                let u = rng.gen_range(iv.a..iv.b);
                let jet = jet_at(e, u, 4).unwrap().derivative_value(1).re;
                let fd = (e.eval_real(u + FD_STEP).unwrap() - e.eval_real(u - FD_STEP).unwrap())
                    / (2.0 * FD_STEP);
                if !((jet - fd).abs() < FD_TOL) {
                    fails.push(format!("{name} expr {i} u={u}: jet {jet} fd {fd}"));
                }
            }
        }
    }

    // path independence
    for (name, d) in all_presets() {
        let r = Rect::default_for(d.interval());
        let c = r.center();
        for _ in 0..5 {
            let z = Complex64::new(
                c.re + rng.gen_range(-r.half_u..r.half_u),
                c.im + rng.gen_range(-r.half_v..r.half_v),
            );
            let direct = solve(&d, z).unwrap();
            let corner = Complex64::new(d.base(), z.im);
            let bent = solve_along(&d, &[corner, z]).unwrap();
            let err = (0..3)
                .map(|k| (direct[k] - bent[k]).abs())
                .fold(0.0, f64::max);
            if !(err < PATH_TOL) {
                fails.push(format!("{name} z={z}: path difference {err:e}"));
            }
        }
    }

    // f -> 2f leaves every decision unchanged
    for (name, d) in all_presets() {
        let w = WeierstrassData::new(&d);
        for u in d.interval().linspace(31) {
            let (Ok((g, _)), Ok(f)) = (w.g_jet(u, WITNESS_ORDER), w.f_jet(u, WITNESS_ORDER)) else {
                continue;
            };
            let (Ok(one), Ok(two)) = (
                abe_from_jets(&g, &f),
                abe_from_jets(&g, &f.scale_by(Complex64::new(2.0, 0.0))),
            ) else {
                continue;
            };
            if classify_by_abe(one, &tol()) != classify_by_abe(two, &tol()) {
                fails.push(format!("{name} u={u}: decision changes under f -> 2f"));
            }
        }
    }

    // grid stability of the sup-norm distance
    let m = maxface::approx::build_shrinking_example(3).unwrap();
    let parent = preset("shrinking").unwrap();
    let omega = Rect::new(Complex64::new(0.0, 0.0), 1.0, 1.0);
    let coarse = distance_on(&m, &parent, omega, 41, 41).unwrap();
    let fine = distance_on(&m, &parent, omega, 81, 81).unwrap();
    let rel = (fine - coarse).abs() / coarse;
    if !(coarse > 0.0 && rel < GRID_STABILITY) {
        fails.push(format!("grid stability: {coarse} vs {fine}"));
    }
    report(8, "property suites", &fails);
}
