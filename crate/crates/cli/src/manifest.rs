//! The JSON manifest and its resolution into a runnable plan.
//!
//! Parsing is field-exact: unknown keys are rejected. Everything that can be
//! checked without numerics (version, preset names, expressions, grid
//! sizes, output paths) is checked here so that a bad manifest fails before
//! any task writes a file.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use maxface::approx::FamilyKind;
use maxface::bjorling::{BjorlingData, BjorlingError, Curve, Interval, Rect};
use maxface::presets::{preset, preset_names};
use maxface::singularity::ToleranceSpec;
use maxface::{parse_expr, AnalyticExpr};
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub version: u32,
    #[serde(default)]
    pub preset: Option<String>,
    #[serde(default)]
    pub data: Option<DataSpec>,
    #[serde(default)]
    pub domain: Option<DomainSpec>,
    #[serde(default)]
    pub tolerances: Option<TolerancesSpec>,
    pub tasks: Vec<TaskSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSpec {
    /// `null` stands for the zero curve; the key itself is required.
    #[serde(deserialize_with = "Option::deserialize")]
    pub gamma: Option<GammaSpec>,
    #[serde(rename = "L")]
    pub l: [String; 3],
    pub interval: [f64; 2],
    pub base: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum GammaSpec {
    Position([String; 3]),
    Derivative(DerivativeSpec),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivativeSpec {
    pub derivative: [String; 3],
    pub base_value: [f64; 3],
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub center: [f64; 2],
    pub half_width_u: f64,
    pub half_width_v: f64,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesSpec {
    #[serde(default)]
    pub rel: Option<f64>,
    #[serde(default)]
    pub abs: Option<f64>,
}

#[derive(Debug, Clone)]
pub enum TaskSpec {
    Validate(ValidateSpec),
    Solve(SolveSpec),
    Classify(ClassifySpec),
    Approximate(ApproximateSpec),
}

impl TaskSpec {
    pub fn name(&self) -> &'static str {
        match self {
            TaskSpec::Validate(_) => "validate",
            TaskSpec::Solve(_) => "solve",
            TaskSpec::Classify(_) => "classify",
            TaskSpec::Approximate(_) => "approximate",
        }
    }
}

// Dispatches on `task` by hand: the derived internally tagged form buffers
// the body and loses the path to the offending field.
impl<'de> Deserialize<'de> for TaskSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let mut map = serde_json::Map::deserialize(d)?;
        let kind = match map.remove("task") {
            Some(serde_json::Value::String(s)) => s,
            Some(_) => return Err(D::Error::custom("task: expected a string")),
            None => return Err(D::Error::missing_field("task")),
        };
        fn body<T: serde::de::DeserializeOwned, E: Error>(
            map: serde_json::Map<String, serde_json::Value>,
        ) -> Result<T, E> {
            serde_path_to_error::deserialize(serde_json::Value::Object(map)).map_err(|e| {
                let path = e.path().to_string();
                let inner = e.into_inner();
                if path == "." {
                    E::custom(inner)
                } else {
                    E::custom(format!("{path}: {inner}"))
                }
            })
        }
        match kind.as_str() {
            "validate" => body(map).map(TaskSpec::Validate),
            "solve" => body(map).map(TaskSpec::Solve),
            "classify" => body(map).map(TaskSpec::Classify),
            "approximate" => body(map).map(TaskSpec::Approximate),
            other => Err(D::Error::unknown_variant(
                other,
                &["validate", "solve", "classify", "approximate"],
            )),
        }
    }
}

fn default_samples() -> usize {
    200
}

fn default_mesh_grid() -> [usize; 2] {
    [41, 41]
}

fn default_scan_grid() -> usize {
    101
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateSpec {
    #[serde(default = "default_samples")]
    pub samples: usize,
    pub output: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveSpec {
    #[serde(default = "default_mesh_grid")]
    pub grid: [usize; 2],
    pub obj: String,
    /// Sidecar with the type of each polyline vertex; defaults to the OBJ
    /// path with `.singular.csv` in place of the extension.
    #[serde(default)]
    pub types_csv: Option<String>,
    /// Optional table of raw grid values.
    #[serde(default)]
    pub csv: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifySpec {
    #[serde(default = "default_scan_grid")]
    pub grid: usize,
    pub output: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyName {
    #[default]
    Auto,
    Gamma,
    L,
    Shrinking,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproximateSpec {
    #[serde(default)]
    pub family: FamilyName,
    pub t0: f64,
    pub ns: Vec<usize>,
    /// Grid on which sup-norm distances are measured.
    #[serde(default = "default_mesh_grid")]
    pub grid: [usize; 2],
    /// Grid of the member meshes; defaults to `grid`.
    #[serde(default)]
    pub mesh_grid: Option<[usize; 2]>,
    pub table: String,
    /// OBJ path per member; must contain `{n}`.
    pub obj_pattern: String,
}

/// A task with its output paths resolved against the manifest directory.
#[derive(Debug, Clone)]
pub enum Task {
    Validate {
        samples: usize,
        output: PathBuf,
    },
    Solve {
        grid: [usize; 2],
        obj: PathBuf,
        types_csv: PathBuf,
        csv: Option<PathBuf>,
    },
    Classify {
        grid: usize,
        output: PathBuf,
    },
    Approximate {
        family: FamilyKind,
        t0: f64,
        ns: Vec<usize>,
        grid: [usize; 2],
        mesh_grid: [usize; 2],
        table: PathBuf,
        objs: Vec<(usize, PathBuf)>,
    },
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Validate { .. } => "validate",
            Task::Solve { .. } => "solve",
            Task::Classify { .. } => "classify",
            Task::Approximate { .. } => "approximate",
        }
    }
}

/// Everything a run needs, checked.
#[derive(Debug, Clone)]
pub struct Plan {
    pub data: BjorlingData,
    pub preset: Option<String>,
    pub domain: Option<Rect>,
    pub tolerance: ToleranceSpec,
    pub tasks: Vec<Task>,
}

/// Command-line overrides of manifest tolerances.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub tol_rel: Option<f64>,
    pub tol_abs: Option<f64>,
}

pub fn task_context(index: usize, name: &str) -> String {
    format!("task {} ({name})", index + 1)
}

fn schema(context: &str, field: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Schema {
        context: context.to_string(),
        field: field.into(),
        message: message.into(),
    }
}

/// Parses manifest text; unknown keys, wrong types and missing fields are
/// reported with their JSON path.
pub fn parse_manifest(text: &str) -> Result<Manifest, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        schema("manifest", path, e.into_inner().to_string())
    })
}

/// Reads and resolves the manifest at `path`.
pub fn load(path: &Path, overrides: Overrides) -> Result<Plan, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        schema(
            "manifest",
            path.display().to_string(),
            format!("cannot read: {e}"),
        )
    })?;
    let manifest = parse_manifest(&text)?;
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    resolve(&manifest, dir, overrides)
}

fn parse3(exprs: &[String; 3], field: &str) -> Result<[AnalyticExpr; 3], CliError> {
    let parse = |k: usize| {
        parse_expr(&exprs[k])
            .map_err(|e| schema("manifest", format!("{field}[{k}]"), e.to_string()))
    };
    Ok([parse(0)?, parse(1)?, parse(2)?])
}

fn finite(x: f64, field: &str) -> Result<f64, CliError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(schema("manifest", field, "must be a finite number"))
    }
}

fn build_data(spec: &DataSpec) -> Result<BjorlingData, CliError> {
    let gamma = match &spec.gamma {
        None => Curve::Zero,
        Some(GammaSpec::Position(p)) => Curve::from_position(parse3(p, "data.gamma")?),
        Some(GammaSpec::Derivative(d)) => {
            for (k, &x) in d.base_value.iter().enumerate() {
                finite(x, &format!("data.gamma.base_value[{k}]"))?;
            }
            Curve::from_derivative(
                parse3(&d.derivative, "data.gamma.derivative")?,
                d.base_value,
            )
        }
    };
    let l = parse3(&spec.l, "data.L")?;
    let [a, b] = spec.interval;
    finite(a, "data.interval[0]")?;
    finite(b, "data.interval[1]")?;
    finite(spec.base, "data.base")?;
    let invalid = |field: &str, e: BjorlingError| CliError::Invalid {
        context: "manifest".into(),
        field: field.into(),
        message: e.to_string(),
    };
    let interval = Interval::new(a, b).map_err(|e| invalid("data.interval", e))?;
    BjorlingData::new(gamma, l, interval, spec.base).map_err(|e| invalid("data.base", e))
}

fn tolerance(spec: Option<TolerancesSpec>, o: Overrides) -> Result<ToleranceSpec, CliError> {
    let mut tol = ToleranceSpec::default();
    let spec = spec.unwrap_or_default();
    let pick = [
        ("tolerances.rel", spec.rel, "--tol-rel", o.tol_rel),
        ("tolerances.abs", spec.abs, "--tol-abs", o.tol_abs),
    ];
    for (k, (field, from_file, flag, from_flag)) in pick.into_iter().enumerate() {
        let (name, value) = match (from_flag, from_file) {
            (Some(v), _) => (flag, v),
            (None, Some(v)) => (field, v),
            (None, None) => continue,
        };
        if !(value.is_finite() && value > 0.0) {
            return Err(schema("manifest", name, "tolerance must be positive"));
        }
        if k == 0 {
            tol.rel = value;
        } else {
            tol.abs = value;
        }
    }
    Ok(tol)
}

fn domain(spec: Option<DomainSpec>) -> Result<Option<Rect>, CliError> {
    let Some(d) = spec else { return Ok(None) };
    finite(d.center[0], "domain.center[0]")?;
    finite(d.center[1], "domain.center[1]")?;
    for (field, h) in [
        ("domain.half_width_u", d.half_width_u),
        ("domain.half_width_v", d.half_width_v),
    ] {
        if !(h.is_finite() && h > 0.0) {
            return Err(schema("manifest", field, "half width must be positive"));
        }
    }
    Ok(Some(Rect::new(
        Complex64::new(d.center[0], d.center[1]),
        d.half_width_u,
        d.half_width_v,
    )))
}

/// Replaces the extension of `obj` by `.singular.csv`.
pub fn default_types_path(obj: &str) -> String {
    let p = Path::new(obj);
    let stem = p.with_extension("");
    format!("{}.singular.csv", stem.display())
}

fn check_grid(ctx: &str, field: &str, g: [usize; 2]) -> Result<(), CliError> {
    if g[0] < 2 || g[1] < 2 {
        return Err(schema(ctx, field, "grid needs at least 2 points per side"));
    }
    Ok(())
}

fn resolve_task(
    index: usize,
    spec: &TaskSpec,
    dir: &Path,
    data: &BjorlingData,
    preset: Option<&str>,
) -> Result<Task, CliError> {
    let ctx = task_context(index, spec.name());
    let path = |s: &str, field: &str| -> Result<PathBuf, CliError> {
        if s.is_empty() {
            return Err(schema(&ctx, field, "empty path"));
        }
        Ok(dir.join(s))
    };
    Ok(match spec {
        TaskSpec::Validate(v) => {
            if v.samples < 2 {
                return Err(schema(&ctx, "samples", "need at least 2 samples"));
            }
            Task::Validate {
                samples: v.samples,
                output: path(&v.output, "output")?,
            }
        }
        TaskSpec::Solve(s) => {
            check_grid(&ctx, "grid", s.grid)?;
            let types = s
                .types_csv
                .clone()
                .unwrap_or_else(|| default_types_path(&s.obj));
            Task::Solve {
                grid: s.grid,
                obj: path(&s.obj, "obj")?,
                types_csv: path(&types, "types_csv")?,
                csv: s.csv.as_deref().map(|c| path(c, "csv")).transpose()?,
            }
        }
        TaskSpec::Classify(c) => {
            if c.grid < 2 {
                return Err(schema(&ctx, "grid", "need at least 2 grid points"));
            }
            Task::Classify {
                grid: c.grid,
                output: path(&c.output, "output")?,
            }
        }
        TaskSpec::Approximate(a) => {
            check_grid(&ctx, "grid", a.grid)?;
            let mesh_grid = a.mesh_grid.unwrap_or(a.grid);
            check_grid(&ctx, "mesh_grid", mesh_grid)?;
            finite(a.t0, "t0").map_err(|_| schema(&ctx, "t0", "must be a finite number"))?;
            if a.ns.is_empty() {
                return Err(schema(&ctx, "ns", "empty list"));
            }
            if a.ns.contains(&0) {
                return Err(schema(&ctx, "ns", "members are indexed from 1"));
            }
            if !a.obj_pattern.contains("{n}") {
                return Err(schema(&ctx, "obj_pattern", "must contain {n}"));
            }
            let mut ns = a.ns.clone();
            ns.sort_unstable();
            ns.dedup();
            let objs = ns
                .iter()
                .map(|&n| {
                    path(&a.obj_pattern.replace("{n}", &n.to_string()), "obj_pattern")
                        .map(|p| (n, p))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Task::Approximate {
                family: family_kind(a.family, data, preset, a.t0, &ctx)?,
                t0: a.t0,
                ns,
                grid: a.grid,
                mesh_grid,
                table: path(&a.table, "table")?,
                objs,
            }
        }
    })
}

/// Picks the approximating family. `auto` uses the closed-form family for
/// the shrinking preset, the only available one when `γ'` or `L` vanishes
/// identically, and otherwise the side whose third component is larger
/// at `t0`.
fn family_kind(
    name: FamilyName,
    data: &BjorlingData,
    preset: Option<&str>,
    t0: f64,
    ctx: &str,
) -> Result<FamilyKind, CliError> {
    let flags = data.flags();
    match name {
        FamilyName::Gamma => Ok(FamilyKind::GammaBased),
        FamilyName::L => Ok(FamilyKind::LBased),
        FamilyName::Shrinking => {
            if is_shrinking_example(data) {
                Ok(FamilyKind::ShrinkingExample)
            } else {
                Err(CliError::Invalid {
                    context: ctx.to_string(),
                    field: "family".into(),
                    message: "the shrinking family needs the shrinking data set".into(),
                })
            }
        }
        FamilyName::Auto => {
            if preset == Some("shrinking") {
                return Ok(FamilyKind::ShrinkingExample);
            }
            if flags.gamma_prime_zero {
                return Ok(FamilyKind::LBased);
            }
            if flags.l_zero {
                return Ok(FamilyKind::GammaBased);
            }
            let g = data.gamma_prime_real(t0).map(|v| v[2].abs());
            let l = data.l_real(t0).map(|v| v[2].abs());
            Ok(match (g, l) {
                (Ok(g), Ok(l)) if l > g => FamilyKind::LBased,
                _ => FamilyKind::GammaBased,
            })
        }
    }
}

fn is_shrinking_example(data: &BjorlingData) -> bool {
    let reference = preset("shrinking").expect("shrinking preset");
    if !data.flags().gamma_prime_zero {
        return false;
    }
    data.interval()
        .linspace(9)
        .into_iter()
        .all(|u| match (data.l_real(u), reference.l_real(u)) {
            (Ok(a), Ok(b)) => (0..3).all(|k| (a[k] - b[k]).abs() <= 1e-12),
            _ => false,
        })
}

fn output_paths(task: &Task) -> Vec<(&'static str, &Path)> {
    match task {
        Task::Validate { output, .. } | Task::Classify { output, .. } => vec![("output", output)],
        Task::Solve {
            obj,
            types_csv,
            csv,
            ..
        } => {
            let mut v = vec![("obj", obj.as_path()), ("types_csv", types_csv.as_path())];
            if let Some(c) = csv {
                v.push(("csv", c));
            }
            v
        }
        Task::Approximate { table, objs, .. } => {
            let mut v = vec![("table", table.as_path())];
            v.extend(objs.iter().map(|(_, p)| ("obj_pattern", p.as_path())));
            v
        }
    }
}

/// Checks the manifest invariants and builds the plan.
pub fn resolve(m: &Manifest, dir: &Path, overrides: Overrides) -> Result<Plan, CliError> {
    if m.version != SCHEMA_VERSION {
        return Err(schema(
            "manifest",
            "version",
            format!(
                "unsupported version {} (expected {SCHEMA_VERSION})",
                m.version
            ),
        ));
    }
    let (data, preset_name) = match (&m.preset, &m.data) {
        (Some(_), Some(_)) => {
            return Err(schema(
                "manifest",
                "preset",
                "`preset` and `data` are mutually exclusive",
            ))
        }
        (None, None) => {
            return Err(schema(
                "manifest",
                "data",
                "one of `preset` or `data` is required",
            ))
        }
        (Some(name), None) => match preset(name) {
            Some(d) => (d, Some(name.clone())),
            None => {
                return Err(schema(
                    "manifest",
                    "preset",
                    format!(
                        "unknown preset `{name}` (known: {})",
                        preset_names().join(", ")
                    ),
                ))
            }
        },
        (None, Some(spec)) => (build_data(spec)?, None),
    };
    if m.tasks.is_empty() {
        return Err(schema("manifest", "tasks", "no tasks"));
    }
    let tolerance = tolerance(m.tolerances, overrides)?;
    let domain = domain(m.domain)?;
    let tasks = m
        .tasks
        .iter()
        .enumerate()
        .map(|(i, t)| resolve_task(i, t, dir, &data, preset_name.as_deref()))
        .collect::<Result<Vec<_>, _>>()?;

    let mut seen: HashMap<PathBuf, String> = HashMap::new();
    for (i, task) in tasks.iter().enumerate() {
        let ctx = task_context(i, task.name());
        for (field, p) in output_paths(task) {
            let key = normalize(p);
            if let Some(first) = seen.get(&key) {
                return Err(schema(
                    &ctx,
                    field,
                    format!("output path {} is already used by {first}", p.display()),
                ));
            }
            seen.insert(key, format!("{ctx} {field}"));
        }
    }

    Ok(Plan {
        data,
        preset: preset_name,
        domain,
        tolerance,
        tasks,
    })
}

/// Lexical normalisation so that `a/./b` and `a/b` collide.
fn normalize(p: &Path) -> PathBuf {
    use std::path::Component;
    let mut out = PathBuf::new();
    for c in p.components() {
        match c {
            Component::CurDir => {}
            Component::ParentDir => {
                if !out.pop() {
                    out.push("..");
                }
            }
            other => out.push(other.as_os_str()),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(json: &str) -> Result<Plan, CliError> {
        resolve(
            &parse_manifest(json)?,
            Path::new("/tmp/m"),
            Overrides::default(),
        )
    }

    const CLASSIFY: &str = r#"{"task": "classify", "output": "c.csv"}"#;

    #[test]
    fn preset_manifest_resolves() {
        let p = plan(&format!(
            r#"{{"version": 1, "preset": "example-3-5", "tasks": [{CLASSIFY}]}}"#
        ))
        .unwrap();
        assert_eq!(p.preset.as_deref(), Some("example-3-5"));
        match &p.tasks[0] {
            Task::Classify { grid, output } => {
                assert_eq!(*grid, 101);
                assert_eq!(output, Path::new("/tmp/m/c.csv"));
            }
            t => panic!("{t:?}"),
        }
        assert_eq!(p.tolerance, ToleranceSpec::default());
    }

    #[test]
    fn preset_and_data_conflict() {
        let e = plan(&format!(
            r#"{{"version": 1, "preset": "shrinking",
                "data": {{"gamma": null, "L": ["1-u^2", "2*u", "1+u^2"], "interval": [-1, 1], "base": 0}},
                "tasks": [{CLASSIFY}]}}"#
        ))
        .unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("preset"));
    }

    #[test]
    fn neither_preset_nor_data() {
        let e = plan(&format!(r#"{{"version": 1, "tasks": [{CLASSIFY}]}}"#)).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn gamma_key_is_required_but_may_be_null() {
        let ok = plan(&format!(
            r#"{{"version": 1,
                "data": {{"gamma": null, "L": ["1-u^2", "2*u", "1+u^2"], "interval": [-1, 1], "base": 0}},
                "tasks": [{CLASSIFY}]}}"#
        ))
        .unwrap();
        assert!(ok.data.flags().gamma_prime_zero);
        let e = plan(&format!(
            r#"{{"version": 1,
                "data": {{"L": ["1-u^2", "2*u", "1+u^2"], "interval": [-1, 1], "base": 0}},
                "tasks": [{CLASSIFY}]}}"#
        ))
        .unwrap_err();
        assert!(e.to_string().contains("gamma"), "{e}");
    }

    #[test]
    fn derivative_form_gamma() {
        let p = plan(&format!(
            r#"{{"version": 1,
                "data": {{"gamma": {{"derivative": ["cos(u)", "sin(u)", "1"], "base_value": [0, -1, 0]}},
                          "L": ["u*cos(u)", "u*sin(u)", "u"], "interval": [0, 1], "base": 0}},
                "tasks": [{CLASSIFY}]}}"#
        ))
        .unwrap();
        let g = p.data.gamma_at(0.0).unwrap();
        assert_eq!(g, [0.0, -1.0, 0.0]);
    }

    #[test]
    fn bad_expression_names_field() {
        let e = plan(&format!(
            r#"{{"version": 1,
                "data": {{"gamma": ["sin(u)", "-cos(u", "u"], "L": ["0", "0", "0"], "interval": [0, 1], "base": 0}},
                "tasks": [{CLASSIFY}]}}"#
        ))
        .unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("data.gamma[1]"), "{e}");
    }

    #[test]
    fn invalid_interval_is_data_error() {
        let e = plan(&format!(
            r#"{{"version": 1,
                "data": {{"gamma": ["sin(u)", "-cos(u)", "u"], "L": ["0", "0", "0"], "interval": [1, 0], "base": 0}},
                "tasks": [{CLASSIFY}]}}"#
        ))
        .unwrap_err();
        assert_eq!(e.exit_code(), 3);
        assert!(e.to_string().contains("data.interval"));
    }

    #[test]
    fn unknown_fields_are_rejected_with_path() {
        let e = plan(
            r#"{"version": 1, "preset": "shrinking",
                "tasks": [{"task": "classify", "output": "c.csv", "gird": 5}]}"#,
        )
        .unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("tasks[0]"), "{e}");
        let e =
            plan(r#"{"version": 1, "preset": "shrinking", "tasks": [], "extra": 1}"#).unwrap_err();
        assert!(e.to_string().contains("extra"), "{e}");
    }

    #[test]
    fn version_is_checked() {
        let e = plan(&format!(
            r#"{{"version": 2, "preset": "shrinking", "tasks": [{CLASSIFY}]}}"#
        ))
        .unwrap_err();
        assert!(e.to_string().contains("version"));
    }

    #[test]
    fn duplicate_outputs_are_rejected() {
        let e = plan(
            r#"{"version": 1, "preset": "shrinking", "tasks": [
                {"task": "classify", "output": "x.csv"},
                {"task": "solve", "obj": "m.obj", "csv": "./x.csv"}]}"#,
        )
        .unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let msg = e.to_string();
        assert!(
            msg.contains("task 2 (solve)") && msg.contains("csv"),
            "{msg}"
        );
        // a derived sidecar collides too
        let e = plan(
            r#"{"version": 1, "preset": "shrinking", "tasks": [
                {"task": "classify", "output": "m.singular.csv"},
                {"task": "solve", "obj": "m.obj"}]}"#,
        )
        .unwrap_err();
        assert!(e.to_string().contains("types_csv"), "{e}");
    }

    #[test]
    fn approximate_task_resolution() {
        let p = plan(
            r#"{"version": 1, "preset": "shrinking", "tasks": [
                {"task": "approximate", "t0": 0, "ns": [15, 3, 5, 50, 5],
                 "table": "t.csv", "obj_pattern": "out/m{n}.obj"}]}"#,
        )
        .unwrap();
        match &p.tasks[0] {
            Task::Approximate {
                family, ns, objs, ..
            } => {
                assert_eq!(*family, FamilyKind::ShrinkingExample);
                assert_eq!(ns, &[3, 5, 15, 50]);
                assert_eq!(objs[0].1, Path::new("/tmp/m/out/m3.obj"));
            }
            t => panic!("{t:?}"),
        }
        let e = plan(
            r#"{"version": 1, "preset": "shrinking", "tasks": [
                {"task": "approximate", "t0": 0, "ns": [3], "table": "t.csv", "obj_pattern": "m.obj"}]}"#,
        )
        .unwrap_err();
        assert!(e.to_string().contains("obj_pattern"));
    }

    #[test]
    fn auto_family_choice() {
        let pick = |name: &str, t0: f64| {
            let d = preset(name).unwrap();
            family_kind(FamilyName::Auto, &d, None, t0, "t").unwrap()
        };
        assert_eq!(pick("shrinking", 0.0), FamilyKind::LBased);
        assert_eq!(pick("folded-helix", 0.0), FamilyKind::GammaBased);
        // L vanishes at 0 on this data, γ' does not
        assert_eq!(pick("example-3-5", 0.0), FamilyKind::GammaBased);
        // γ' vanishes at 0 on this data
        assert_eq!(pick("example-3-4", 0.0), FamilyKind::LBased);
        let d = preset("example-3-1").unwrap();
        assert!(family_kind(FamilyName::Shrinking, &d, None, 0.5, "t").is_err());
        let s = preset("shrinking").unwrap();
        assert_eq!(
            family_kind(FamilyName::Shrinking, &s, None, 0.0, "t").unwrap(),
            FamilyKind::ShrinkingExample
        );
    }

    #[test]
    fn overrides_beat_manifest() {
        let m = parse_manifest(&format!(
            r#"{{"version": 1, "preset": "shrinking", "tolerances": {{"rel": 1e-6}}, "tasks": [{CLASSIFY}]}}"#
        ))
        .unwrap();
        let p = resolve(&m, Path::new("."), Overrides::default()).unwrap();
        assert_eq!(p.tolerance.rel, 1e-6);
        let o = Overrides {
            tol_rel: Some(1e-5),
            tol_abs: Some(1e-11),
        };
        let p = resolve(&m, Path::new("."), o).unwrap();
        assert_eq!((p.tolerance.rel, p.tolerance.abs), (1e-5, 1e-11));
        let bad = Overrides {
            tol_rel: Some(-1.0),
            tol_abs: None,
        };
        let e = resolve(&m, Path::new("."), bad).unwrap_err();
        assert!(e.to_string().contains("--tol-rel"));
    }

    #[test]
    fn sidecar_default_path() {
        assert_eq!(default_types_path("out/mesh.obj"), "out/mesh.singular.csv");
        assert_eq!(default_types_path("mesh"), "mesh.singular.csv");
    }
}
