//! Executes a resolved plan, one task after another.

use std::path::{Path, PathBuf};

use maxface::approx::{convergence_report, ApproxError, ApproxFamily, FamilyKind};
use maxface::bjorling::{
    check_g_nonunimodular, validate, BjorlingData, BjorlingError, MaxfaceSolution, Rect,
};
use maxface::singularity::{
    classify_point, scan_interval, ReportSource, SingularityReport, ToleranceSpec,
};

use crate::error::CliError;
use crate::manifest::{task_context, Plan, Task};
use crate::output::{csv_bytes, exact, obj_text, opt_exact, singular_columns, write_file};

/// Samples used by the validity gate in front of solve, classify and
/// approximate.
const GATE_SAMPLES: usize = 64;

/// What a finished task wrote.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskOutcome {
    pub context: String,
    pub written: Vec<PathBuf>,
}

/// Runs every task. A failing task does not stop later ones; the result
/// holds one entry per task.
pub fn run_plan(plan: &Plan) -> Vec<Result<TaskOutcome, CliError>> {
    plan.tasks
        .iter()
        .enumerate()
        .map(|(i, task)| {
            let mut ctx = TaskCtx {
                context: task_context(i, task.name()),
                written: Vec::new(),
            };
            let result = ctx.run(plan, task);
            let outcome = TaskOutcome {
                context: ctx.context,
                written: ctx.written,
            };
            result.map(|()| outcome)
        })
        .collect()
}

/// Exit code of a run: the first failure's code, else 0.
pub fn exit_code(results: &[Result<TaskOutcome, CliError>]) -> u8 {
    results
        .iter()
        .find_map(|r| r.as_ref().err().map(CliError::exit_code))
        .unwrap_or(0)
}

struct TaskCtx {
    context: String,
    written: Vec<PathBuf>,
}

impl TaskCtx {
    fn invalid(&self, field: &str, message: impl Into<String>) -> CliError {
        CliError::Invalid {
            context: self.context.clone(),
            field: field.into(),
            message: message.into(),
        }
    }

    fn numeric(&self, field: &str, message: impl Into<String>) -> CliError {
        CliError::Numeric {
            context: self.context.clone(),
            field: field.into(),
            message: message.into(),
        }
    }

    fn data_err(&self, e: BjorlingError) -> CliError {
        match e {
            BjorlingError::MalformedGaussMap { .. } => self.invalid("data", e.to_string()),
            _ => self.numeric("data", e.to_string()),
        }
    }

    fn write(&mut self, path: &Path, bytes: &[u8]) -> Result<(), CliError> {
        write_file(path, bytes).map_err(|source| CliError::Write {
            context: self.context.clone(),
            path: path.to_path_buf(),
            source,
        })?;
        self.written.push(path.to_path_buf());
        Ok(())
    }

    fn write_csv(
        &mut self,
        path: &Path,
        header: &[&str],
        rows: &[Vec<String>],
    ) -> Result<(), CliError> {
        let bytes = csv_bytes(header, rows).map_err(|e| CliError::Write {
            context: self.context.clone(),
            path: path.to_path_buf(),
            source: std::io::Error::other(e),
        })?;
        self.write(path, &bytes)
    }

    fn gate(&self, data: &BjorlingData) -> Result<(), CliError> {
        let report = validate(data, GATE_SAMPLES);
        if report.valid {
            Ok(())
        } else {
            Err(self.invalid("data", failed_residuals(&report)))
        }
    }

    fn run(&mut self, plan: &Plan, task: &Task) -> Result<(), CliError> {
        match task {
            Task::Validate { samples, output } => self.validate(plan, *samples, output),
            Task::Solve {
                grid,
                obj,
                types_csv,
                csv,
            } => self.solve(plan, *grid, obj, types_csv, csv.as_deref()),
            Task::Classify { grid, output } => self.classify(plan, *grid, output),
            Task::Approximate {
                family,
                t0,
                ns,
                grid,
                mesh_grid,
                table,
                objs,
            } => self.approximate(plan, *family, *t0, ns, *grid, *mesh_grid, table, objs),
        }
    }

    fn validate(&mut self, plan: &Plan, samples: usize, output: &Path) -> Result<(), CliError> {
        let report = validate(&plan.data, samples);
        let json = serde_json::to_vec_pretty(&report).expect("report serialises");
        self.write(output, &json)?;
        if report.valid {
            Ok(())
        } else {
            Err(self.invalid("data", failed_residuals(&report)))
        }
    }

    fn solve(
        &mut self,
        plan: &Plan,
        grid: [usize; 2],
        obj: &Path,
        types_csv: &Path,
        csv: Option<&Path>,
    ) -> Result<(), CliError> {
        let data = &plan.data;
        self.gate(data)?;
        let domain = plan
            .domain
            .unwrap_or_else(|| Rect::default_for(data.interval()));
        if !check_g_nonunimodular(data, &domain) {
            return Err(self.invalid(
                "domain",
                "the Gauss map has unit modulus somewhere off the real axis",
            ));
        }
        let sol = MaxfaceSolution::compute(data, domain, grid[0], grid[1])
            .map_err(|e| self.data_err(e))?;
        self.write(obj, obj_text(&sol, "maxface").as_bytes())?;

        let mut rows = Vec::new();
        if let Some(j) = crate::output::axis_row(&sol) {
            for i in singular_columns(&sol) {
                let u = sol.z(i, j).re.clamp(data.interval().a, data.interval().b);
                let rep = classify_point(data, u, &plan.tolerance, ReportSource::Grid);
                let p = sol.placed(i, j);
                rows.push(vec![
                    crate::output::vertex_index(&sol, i, j).to_string(),
                    exact(u),
                    exact(p[0]),
                    exact(p[1]),
                    exact(p[2]),
                    rep.kind.name().to_string(),
                    rep.agreement.to_string(),
                ]);
            }
        }
        self.write_csv(
            types_csv,
            &["vertex", "u", "x", "y", "z", "type", "agreement"],
            &rows,
        )?;

        if let Some(path) = csv {
            let mut rows = Vec::with_capacity(sol.values.len());
            for i in 0..sol.nu {
                for j in 0..sol.nv {
                    let z = sol.z(i, j);
                    let x = sol.value(i, j);
                    rows.push(vec![
                        i.to_string(),
                        j.to_string(),
                        exact(z.re),
                        exact(z.im),
                        exact(x[0]),
                        exact(x[1]),
                        exact(x[2]),
                    ]);
                }
            }
            self.write_csv(path, &["i", "j", "u", "v", "x1", "x2", "x3"], &rows)?;
        }
        Ok(())
    }

    fn classify(&mut self, plan: &Plan, grid: usize, output: &Path) -> Result<(), CliError> {
        self.gate(&plan.data)?;
        let reports = scan_interval(&plan.data, grid, &plan.tolerance);
        let rows: Vec<_> = reports.iter().map(classify_row).collect();
        self.write_csv(output, &CLASSIFY_HEADER, &rows)?;
        let disagree: Vec<String> = reports
            .iter()
            .filter(|r| !r.agreement)
            .map(|r| exact(r.u))
            .collect();
        if disagree.is_empty() {
            Ok(())
        } else {
            Err(self.invalid(
                "data",
                format!(
                    "classification routes disagree at u = {}",
                    disagree.join(", ")
                ),
            ))
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn approximate(
        &mut self,
        plan: &Plan,
        family: FamilyKind,
        t0: f64,
        ns: &[usize],
        grid: [usize; 2],
        mesh_grid: [usize; 2],
        table: &Path,
        objs: &[(usize, PathBuf)],
    ) -> Result<(), CliError> {
        self.gate(&plan.data)?;
        let approx_err = |ctx: &Self, e: ApproxError| match e {
            ApproxError::Hypothesis { .. } | ApproxError::WorkingInterval { .. } => {
                ctx.invalid("t0", e.to_string())
            }
            ApproxError::BelowThreshold { .. } | ApproxError::InvalidN { .. } => {
                ctx.invalid("ns", e.to_string())
            }
            ApproxError::DomainMismatch | ApproxError::BaseMismatch { .. } => {
                ctx.numeric("domain", e.to_string())
            }
            ApproxError::Data(e) => ctx.data_err(e),
            ApproxError::Classification(e) => ctx.numeric("t0", e.to_string()),
        };
        let mut fam = ApproxFamily::new(family, &plan.data, t0).map_err(|e| approx_err(self, e))?;
        let report = convergence_report(
            &mut fam,
            plan.domain,
            ns,
            (grid[0], grid[1]),
            &plan.tolerance,
        )
        .map_err(|e| approx_err(self, e))?;

        let dom = report.table.domain;
        let c = dom.center();
        let rows: Vec<Vec<String>> = report
            .table
            .rows
            .iter()
            .zip(&report.members)
            .map(|(&(n, dist), m)| {
                vec![
                    n.to_string(),
                    exact(dist),
                    m.report.kind.name().to_string(),
                    m.cuspidal_edge.to_string(),
                    grid[0].to_string(),
                    grid[1].to_string(),
                    exact(c.re),
                    exact(c.im),
                    exact(dom.half_u),
                    exact(dom.half_v),
                ]
            })
            .collect();
        self.write_csv(
            table,
            &[
                "n",
                "distance",
                "type_at_t0",
                "cuspidal_edge",
                "grid_nu",
                "grid_nv",
                "center_u",
                "center_v",
                "half_width_u",
                "half_width_v",
            ],
            &rows,
        )?;

        for (n, path) in objs {
            let member = &fam.members[n];
            let sol = MaxfaceSolution::compute(member, dom, mesh_grid[0], mesh_grid[1])
                .map_err(|e| self.data_err(e))?;
            let title = format!("approximating member n = {n}, t0 = {}", exact(t0));
            self.write(path, obj_text(&sol, &title).as_bytes())?;
        }

        if !report.table.strictly_decreasing() {
            return Err(self.invalid("ns", "sup-norm distances are not strictly decreasing in n"));
        }
        let bad: Vec<String> = report
            .members
            .iter()
            .filter(|m| !m.cuspidal_edge)
            .map(|m| m.n.to_string())
            .collect();
        if !bad.is_empty() {
            return Err(self.invalid(
                "ns",
                format!(
                    "members without a cuspidal edge at t0: n = {}",
                    bad.join(", ")
                ),
            ));
        }
        Ok(())
    }
}

pub const CLASSIFY_HEADER: [&str; 23] = [
    "u",
    "type",
    "source",
    "by_data",
    "by_abe",
    "agreement",
    "gamma_p",
    "gamma_pp",
    "gamma_ppp",
    "l",
    "l_p",
    "l_pp",
    "d_gamma",
    "d_l",
    "c_or_d",
    "factor",
    "alpha_re",
    "alpha_im",
    "beta_re",
    "beta_im",
    "eta_re",
    "eta_im",
    "reason",
];

fn classify_row(r: &SingularityReport) -> Vec<String> {
    let mut row = vec![
        exact(r.u),
        r.kind.name().to_string(),
        format!("{:?}", r.source),
        r.by_data.name().to_string(),
        r.by_abe.name().to_string(),
        r.agreement.to_string(),
    ];
    match &r.witnesses {
        Some(w) => {
            row.extend(
                [
                    w.gamma_p,
                    w.gamma_pp,
                    w.gamma_ppp,
                    w.l,
                    w.l_p,
                    w.l_pp,
                    w.d_gamma,
                    w.d_l,
                ]
                .map(exact),
            );
            row.push(opt_exact(w.c_or_d));
            row.push(w.factor.map(|f| format!("{f:?}")).unwrap_or_default());
            for z in [w.alpha, w.beta, w.eta] {
                row.push(opt_exact(z.map(|z| z.re)));
                row.push(opt_exact(z.map(|z| z.im)));
            }
        }
        None => row.extend(std::iter::repeat_n(String::new(), 16)),
    }
    row.push(r.kind.reason().unwrap_or_default().to_string());
    row
}

fn failed_residuals(report: &maxface::bjorling::ValidationReport) -> String {
    let mut parts: Vec<String> = report
        .residuals
        .iter()
        .filter(|r| !r.ok)
        .map(|r| format!("{} = {:e} at u = {}", r.name, r.max, r.at))
        .collect();
    parts.extend(report.issues.iter().cloned());
    if parts.is_empty() {
        "data failed validation".into()
    } else {
        parts.join("; ")
    }
}

/// Tolerance used by a plan, for logging.
pub fn describe_tolerance(t: &ToleranceSpec) -> String {
    format!("rel {:e}, abs {:e}", t.rel, t.abs)
}
