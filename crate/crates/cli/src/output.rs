//! File formats: OBJ meshes and CSV tables.

use std::fmt::Write as _;
use std::path::Path;

use maxface::bjorling::MaxfaceSolution;

/// `printf("%.9g")`: nine significant digits, trailing zeros dropped,
/// exponent form outside `1e-4 <= |x| < 1e9`.
pub fn fmt_g(x: f64) -> String {
    const P: i32 = 9;
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    // the exponent after rounding to P digits decides the style
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if !(-4..P).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (P - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Index of the grid row on the real axis, if the grid has one.
pub fn axis_row(sol: &MaxfaceSolution) -> Option<usize> {
    let tol = 1e-12 * sol.domain.half_v.max(1.0);
    (0..sol.nv).find(|&j| sol.z(0, j).im.abs() <= tol)
}

/// Columns of the axis row whose `u` lies in the singular interval.
pub fn singular_columns(sol: &MaxfaceSolution) -> Vec<usize> {
    let iv = sol.data.interval();
    let slack = 1e-12 * iv.len();
    (0..sol.nu)
        .filter(|&i| {
            let u = sol.z(i, 0).re;
            u >= iv.a - slack && u <= iv.b + slack
        })
        .collect()
}

/// 1-based OBJ index of grid vertex `(i, j)`.
pub fn vertex_index(sol: &MaxfaceSolution, i: usize, j: usize) -> usize {
    i * sol.nv + j + 1
}

/// OBJ text of the grid: `nu * nv` vertices, two triangles per cell, and
/// the image of the singular interval as one `l` record when the grid
/// has a row on the real axis.
pub fn obj_text(sol: &MaxfaceSolution, title: &str) -> String {
    let mut s = String::new();
    let r = &sol.domain;
    let c = r.center();
    let _ = writeln!(s, "# {title}");
    let _ = writeln!(
        s,
        "# grid {} x {} over u in [{}, {}], v in [{}, {}]",
        sol.nu,
        sol.nv,
        fmt_g(c.re - r.half_u),
        fmt_g(c.re + r.half_u),
        fmt_g(c.im - r.half_v),
        fmt_g(c.im + r.half_v)
    );
    for i in 0..sol.nu {
        for j in 0..sol.nv {
            let p = sol.placed(i, j);
            let _ = writeln!(s, "v {} {} {}", fmt_g(p[0]), fmt_g(p[1]), fmt_g(p[2]));
        }
    }
    for i in 0..sol.nu - 1 {
        for j in 0..sol.nv - 1 {
            let a = vertex_index(sol, i, j);
            let b = vertex_index(sol, i + 1, j);
            let c = vertex_index(sol, i + 1, j + 1);
            let d = vertex_index(sol, i, j + 1);
            let _ = writeln!(s, "f {a} {b} {c}");
            let _ = writeln!(s, "f {a} {c} {d}");
        }
    }
    if let Some(j) = axis_row(sol) {
        let cols = singular_columns(sol);
        if cols.len() >= 2 {
            let _ = write!(s, "l");
            for i in cols {
                let _ = write!(s, " {}", vertex_index(sol, i, j));
            }
            s.push('\n');
        }
    }
    s
}

/// Creates missing parent directories, then writes.
pub fn write_file(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(path, contents)
}

/// Serialises rows (header first) to CSV bytes.
pub fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

/// Shortest text that reads back to the same `f64`.
pub fn exact(x: f64) -> String {
    format!("{x:?}")
}

pub fn opt_exact(x: Option<f64>) -> String {
    x.map(exact).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use maxface::bjorling::Rect;
    use maxface::presets::preset;
    use num_complex::Complex64;

    #[test]
    fn g_format_matches_printf() {
        let cases = [
            (1.0, "1"),
            (0.5, "0.5"),
            (-2.25, "-2.25"),
            (1.0 / 3.0, "0.333333333"),
            (2.0 / 3.0, "0.666666667"),
            (123456789.0, "123456789"),
            (1234567890.0, "1.23456789e+09"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (1e100, "1e+100"),
            (-1.5e-300, "-1.5e-300"),
            (999999999.5, "1e+09"),
            (0.099999999999, "0.1"),
            (std::f64::consts::PI, "3.14159265"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_g(x), want, "{x}");
        }
        assert_eq!(fmt_g(0.0), "0");
        assert_eq!(fmt_g(f64::NAN), "nan");
    }

    #[test]
    fn obj_counts_and_polyline() {
        let d = preset("example-3-1").unwrap();
        let dom = Rect::new(Complex64::new(0.5, 0.0), 0.6, 0.3);
        let sol = MaxfaceSolution::compute(&d, dom, 13, 5).unwrap();
        let text = obj_text(&sol, "test");
        let v = text.lines().filter(|l| l.starts_with("v ")).count();
        let f = text.lines().filter(|l| l.starts_with("f ")).count();
        assert_eq!(v, 13 * 5);
        assert_eq!(f, 2 * 12 * 4);
        let l: Vec<_> = text.lines().filter(|l| l.starts_with("l ")).collect();
        assert_eq!(l.len(), 1);
        // u = -0.1 + 0.1 k; the columns in [0, 1] are k = 1..=11
        assert_eq!(axis_row(&sol), Some(2));
        assert_eq!(singular_columns(&sol), (1..=11).collect::<Vec<_>>());
        let idx: Vec<usize> = l[0][2..].split(' ').map(|t| t.parse().unwrap()).collect();
        assert_eq!(idx.len(), 11);
        assert_eq!(idx[0], vertex_index(&sol, 1, 2));
    }

    #[test]
    fn no_polyline_off_axis() {
        let d = preset("example-3-1").unwrap();
        let dom = Rect::new(Complex64::new(0.5, 0.0), 0.6, 0.3);
        let sol = MaxfaceSolution::compute(&d, dom, 5, 4).unwrap();
        assert_eq!(axis_row(&sol), None);
        assert!(!obj_text(&sol, "t").contains("\nl "));
    }

    #[test]
    fn csv_quotes_fields() {
        let b = csv_bytes(&["a", "b"], &[vec!["x,y".into(), "1".into()]]).unwrap();
        assert_eq!(String::from_utf8(b).unwrap(), "a,b\n\"x,y\",1\n");
    }

    #[test]
    fn exact_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-17, 1e300] {
            assert_eq!(exact(x).parse::<f64>().unwrap(), x);
        }
    }
}
