//! Command-line front end. `run` parses arguments, dispatches, and returns the exit code.

use crate::bounds::{bound_report, explicit_n2_upper};
use crate::error::Error;
use crate::flow::{clustered_grid, flow_to_stationary, robin_target, FlowOptions};
use crate::model::ModelParams;
use crate::pruefer::{find_ck_with, left_branch_on, right_branch_on, BracketOptions, RobinProblem};
use crate::series::pilaurent::{q, PiLaurent};
use crate::series::published;
use crate::series::recurrence::SeriesResult;
use crate::series::{branch_pair, Branch, NPoly};
use crate::spectral::{eigen_fd, eigen_shoot_with, Method, ShootOptions};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::f64::consts::PI;
use std::io::Write;

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;
pub const EXIT_BRACKET: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "fundgap", version, about = "Spectral gap of the one-dimensional curvature model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// λ̄₁, λ̄₂ and the gap over a parameter sweep.
    Eigen(EigenArgs),
    /// Exact perturbation coefficients in powers of K.
    Series(SeriesArgs),
    /// c_k, the Robin solution and the supersolution.
    Pruefer(PrueferArgs),
    /// Evolve the supersolution toward the Robin solution.
    Flow(FlowArgs),
    /// Comparison and Rayleigh bounds next to the computed eigenvalues.
    Bounds(BoundsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Sweep {
    /// Dimensions, comma separated.
    #[arg(long = "n", value_delimiter = ',', default_value = "2")]
    pub n: Vec<u32>,
    /// Curvatures: a comma list, or start:stop:count.
    #[arg(long = "K", default_value = "0", allow_hyphen_values = true)]
    pub k: String,
    /// Diameters: a comma list, or start:stop:count.
    #[arg(long = "D", default_value = "1", allow_hyphen_values = true)]
    pub d: String,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<std::path::PathBuf>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EigenMethod {
    Shooting,
    Fd,
}

#[derive(Debug, Args)]
pub struct EigenArgs {
    #[command(flatten)]
    pub sweep: Sweep,
    #[arg(long, value_enum, default_value = "shooting")]
    pub method: EigenMethod,
    /// Shooting tolerance.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Finite-difference grid size (the finer grid is twice this).
    #[arg(long, default_value_t = 2048)]
    pub grid: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesBranch {
    First,
    Second,
    Gap,
    All,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    #[arg(long, default_value_t = 5)]
    pub order: usize,
    #[arg(long, value_enum, default_value = "all")]
    pub branch: SeriesBranch,
    /// Compare orders 1..=5 against the published closed forms.
    #[arg(long)]
    pub check_paper: bool,
    #[arg(long)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
pub struct Single {
    #[arg(long = "n", default_value_t = 2)]
    pub n: u32,
    #[arg(long = "K", default_value_t = 0.0, allow_hyphen_values = true)]
    pub k_curv: f64,
    #[arg(long = "D", default_value_t = 1.0, allow_hyphen_values = true)]
    pub d: f64,
}

#[derive(Debug, Args)]
pub struct PrueferArgs {
    #[command(flatten)]
    pub params: Single,
    /// Robin slope k > 0.
    #[arg(long = "k")]
    pub k: f64,
    /// Supersolution shift s ≥ 0; omitted means no supersolution column.
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long, default_value_t = 64)]
    pub intervals: usize,
    /// Initial lower end of the c bracket, as a multiple of π²/D².
    #[arg(long, default_value_t = -4.0, allow_hyphen_values = true)]
    pub lower_factor: f64,
    #[arg(long, default_value_t = 60)]
    pub max_doublings: u32,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FlowStart {
    Supersolution,
    Stationary,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[command(flatten)]
    pub params: Single,
    #[arg(long = "k")]
    pub k: f64,
    /// Supersolution shift; defaults to twice the comparison threshold.
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 512)]
    pub cells: usize,
    #[arg(long, value_enum, default_value = "supersolution")]
    pub start: FlowStart,
    /// Plain three-point discretization instead of the balanced one.
    #[arg(long)]
    pub unbalanced: bool,
    /// Write (z, ψ) snapshots at log-spaced times to this JSON file.
    #[arg(long)]
    pub emit_plot: Option<std::path::PathBuf>,
    #[arg(long, default_value_t = 12)]
    pub snapshots: usize,
    #[arg(long)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub sweep: Sweep,
}

/// Shortest text that reproduces the float: 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// A comma list of reals, or `start:stop:count` for `count` equally spaced values.
pub fn parse_values(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}"));
    match parts.len() {
        1 => s.split(',').map(num).collect(),
        3 => {
            let (a, b) = (num(parts[0])?, num(parts[1])?);
            let n: usize = parts[2].trim().parse().map_err(|e| format!("'{}': {e}", parts[2]))?;
            match n {
                0 => Err("range count must be positive".into()),
                1 => Ok(vec![a]),
                _ => Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()),
            }
        }
        _ => Err(format!("cannot read '{s}' as a list or start:stop:count")),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Pole(_) | Error::Domain(_) | Error::Hypothesis(_) => EXIT_VALIDATION,
        Error::Bracket(_) | Error::Coverage(_) | Error::Blowup { .. } => EXIT_BRACKET,
        Error::NonConvergence(_)
        | Error::NoConvergence { .. }
        | Error::Solvability { .. }
        | Error::Stability(_)
        | Error::OrderingViolation { .. } => EXIT_NONCONVERGENCE,
    }
}

/// Exit code and message of a failed command.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: exit_code(&e), message: e.to_string() }
    }
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

pub type Out = Result<String, Failure>;

/// Parses `args` (program name first), runs the command and writes its output.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let (result, output) = match &cli.command {
        Command::Eigen(a) => (cmd_eigen(a), a.sweep.output.clone()),
        Command::Series(a) => (cmd_series(a), a.output.clone()),
        Command::Pruefer(a) => (cmd_pruefer(a), a.output.clone()),
        Command::Flow(a) => (cmd_flow(a), a.output.clone()),
        Command::Bounds(a) => (cmd_bounds(a), a.sweep.output.clone()),
    };
    match result {
        Ok(text) => {
            let written = match output {
                Some(path) => std::fs::write(&path, text.as_bytes()).map_err(|e| format!("{}: {e}", path.display())),
                None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => EXIT_OK,
                Err(m) => {
                    let _ = writeln!(err, "error: {m}");
                    EXIT_VALIDATION
                }
            }
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Every (n, K, D) triple in input order, all validated before anything is solved.
fn triples(s: &Sweep) -> Result<Vec<ModelParams>, Failure> {
    let ks = parse_values(&s.k).map_err(|m| fail(EXIT_VALIDATION, format!("--K: {m}")))?;
    let ds = parse_values(&s.d).map_err(|m| fail(EXIT_VALIDATION, format!("--D: {m}")))?;
    let mut ok = Vec::new();
    let mut bad = Vec::new();
    for &n in &s.n {
        for &k in &ks {
            for &d in &ds {
                match ModelParams::new(n, k, d) {
                    Ok(p) => ok.push(p),
                    Err(e) => bad.push(format!("(n={n}, K={k}, D={d}): {e}")),
                }
            }
        }
    }
    if !bad.is_empty() {
        return Err(fail(EXIT_VALIDATION, format!("invalid parameters\n  {}", bad.join("\n  "))));
    }
    Ok(ok)
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| fail(EXIT_VALIDATION, format!("thread pool: {e}")))
}

/// Runs `f` over `items` on `jobs` threads; results keep the input order.
fn sweep<T: Sync, R: Send>(
    items: &[T],
    jobs: usize,
    f: impl Fn(&T) -> crate::Result<R> + Sync + Send,
) -> Result<Vec<R>, Failure> {
    let results: Vec<crate::Result<R>> = pool(jobs)?.install(|| items.par_iter().map(&f).collect());
    results.into_iter().map(|r| r.map_err(Failure::from)).collect()
}

fn json_doc(command: &str, body: Value) -> String {
    let mut doc = json!({ "schema_version": SCHEMA_VERSION, "command": command });
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b);
    }
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EigenRow {
    pub n: u32,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "D")]
    pub d: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub gap: f64,
    /// gap - 3π²/D².
    pub excess: f64,
    /// "above", "below", or "equal" when |excess| is within 10× the error estimate.
    pub relation: String,
    pub method: Method,
    pub error_estimate: f64,
}

fn relation(excess: f64, err: f64, scale: f64) -> String {
    let floor = (10.0 * err).max(1e-12 * scale);
    if excess > floor {
        "above".into()
    } else if excess < -floor {
        "below".into()
    } else {
        "equal".into()
    }
}

fn eigen_row(p: &ModelParams, a: &EigenArgs) -> crate::Result<EigenRow> {
    let (l1, l2) = match a.method {
        EigenMethod::Shooting => {
            let o = ShootOptions { tol: a.tol, eigenfunction_intervals: None };
            (eigen_shoot_with(p, 1, o)?, eigen_shoot_with(p, 2, o)?)
        }
        EigenMethod::Fd => (eigen_fd(p, 1, a.grid)?, eigen_fd(p, 2, a.grid)?),
    };
    let gap = l2.eigenvalue - l1.eigenvalue;
    let excess = gap - 3.0 * p.base();
    let err = l1.error_estimate + l2.error_estimate;
    Ok(EigenRow {
        n: p.n,
        k: p.k,
        d: p.d,
        lambda1: l1.eigenvalue,
        lambda2: l2.eigenvalue,
        gap,
        excess,
        relation: relation(excess, err, 3.0 * p.base()),
        method: l1.method,
        error_estimate: err,
    })
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Shooting => "shooting",
        Method::FiniteDifference => "finite-difference",
    }
}

pub fn cmd_eigen(a: &EigenArgs) -> Out {
    let ps = triples(&a.sweep)?;
    let rows = sweep(&ps, a.sweep.jobs, |p| eigen_row(p, a))?;
    Ok(match a.sweep.format {
        Format::Json => json_doc("eigen", json!({ "rows": rows })),
        Format::Csv => {
            let mut s = String::from("n,K,D,lambda1,lambda2,gap,gap_minus_3pi2_over_D2,relation,method,error_estimate\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    r.n,
                    fmt_f64(r.k),
                    fmt_f64(r.d),
                    fmt_f64(r.lambda1),
                    fmt_f64(r.lambda2),
                    fmt_f64(r.gap),
                    fmt_f64(r.excess),
                    r.relation,
                    method_name(r.method),
                    fmt_f64(r.error_estimate)
                ));
            }
            s
        }
    })
}

fn render_poly(p: &NPoly) -> Value {
    let u = p.in_u_basis();
    json!({
        "in_n": p.to_string(),
        "in_u": u.as_ref().map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        "in_u_decimal": u.as_ref().map(|c| c.iter().map(|x| x.to_f64()).collect::<Vec<_>>()),
    })
}

/// Coefficient of K^m at D = π with, from order 4 on, the (u/24)² and u/(2π) factors.
fn render_order(p: &NPoly, kappa: &NPoly, m: usize) -> Value {
    let mut v = json!({
        "order": m,
        "coefficient_at_D_pi": render_poly(p),
        "kappa_coefficient": render_poly(kappa),
    });
    if m >= 4 {
        if let Some(u) = p.in_u_basis() {
            let get = |i: usize| u.get(i).map_or(0.0, PiLaurent::to_f64);
            v["factors"] = json!({
                "u_over_24_squared": get(2) * 576.0,
                "u_over_2pi": get(1) * 2.0 * PI,
            });
        }
    }
    v
}

fn branch_orders(s: &SeriesResult) -> Value {
    Value::Array((0..=s.max_order()).map(|m| render_order(&s.unscaled(m), &s.kappa_coeff(m), m)).collect())
}

fn gap_orders(a: &SeriesResult, b: &SeriesResult) -> Value {
    Value::Array(
        (0..=a.max_order())
            .map(|m| render_order(&(&b.unscaled(m) - &a.unscaled(m)), &(&b.kappa_coeff(m) - &a.kappa_coeff(m)), m))
            .collect(),
    )
}

/// Exact comparison with the published forms, orders 1..=min(order, 5).
pub fn published_check(a: &SeriesResult, b: &SeriesResult) -> Value {
    let top = a.max_order().min(5);
    let mut rows = Vec::new();
    let u2 = &NPoly::u_factor() * &NPoly::u_factor();
    for m in 1..=top {
        let gap_kappa = &b.kappa_coeff(m) - &a.kappa_coeff(m);
        let gap_unscaled = &b.unscaled(m) - &a.unscaled(m);
        let (first, second, gap) = match m {
            1..=3 => {
                let (p1, p2, pg) = (published::kappa_low(Branch::First), published::kappa_low(Branch::Second), published::gap_kappa_low());
                (a.kappa_coeff(m) == p1[m], b.kappa_coeff(m) == p2[m], gap_kappa == pg[m])
            }
            4 => {
                let (g2, g1) = published::order4_gap_constants();
                let pg = &NPoly::u_factor().scale(&q(1, 24)).scale_pi(&g1)
                    + &u2.scale(&q(1, 576)).scale_pi(&g2);
                (
                    a.unscaled(4) == published::order4(Branch::First),
                    b.unscaled(4) == published::order4(Branch::Second),
                    gap_unscaled == pg,
                )
            }
            _ => {
                let (p1, p2) = (published::order5(Branch::First), published::order5(Branch::Second));
                let pg = &p2 - &p1;
                (a.unscaled(5) == p1, b.unscaled(5) == p2, gap_unscaled == pg)
            }
        };
        rows.push(json!({ "order": m, "first": first, "second": second, "gap": gap }));
    }
    let mut doc = json!({ "orders": rows });
    if a.max_order() >= 3 {
        doc["order5_inner_products"] = inner_product_check(a, b);
    }
    doc
}

fn inner_product_check(a: &SeriesResult, b: &SeriesResult) -> Value {
    let printed = published::order5_inner_products();
    let ip = |x: &crate::series::TrigPoly, y: &crate::series::TrigPoly| (x * y).integrate();
    let got = [
        (ip(&a.orders[2].y, &a.orders[3].y), 24),
        (ip(&a.orders[2].y.derivative(), &a.orders[3].y.derivative()), 24),
        (ip(&b.orders[2].y, &b.orders[3].y), 48),
        (ip(&b.orders[2].y.derivative(), &b.orders[3].y.derivative()), 48),
    ];
    let names = ["y12_y13", "dy12_dy13", "y22_y23", "dy22_dy23"];
    let mut out = serde_json::Map::new();
    for ((name, (g, denom)), want) in names.iter().zip(got).zip(printed.iter()) {
        let per = g.in_u_basis().and_then(|c| {
            (c.len() == 3 && c[0].is_zero() && c[1].is_zero())
                .then(|| c[2].scale(&q(denom * denom, 1)))
        });
        out.insert(
            (*name).into(),
            json!({
                "match": per.as_ref() == Some(want),
                "engine": per.as_ref().map(|p| p.to_string()),
                "engine_decimal": per.as_ref().map(|p| p.to_f64()),
            }),
        );
    }
    Value::Object(out)
}

pub fn cmd_series(a: &SeriesArgs) -> Out {
    let (first, second) = branch_pair(a.order)?;
    let mut body = json!({ "order": a.order, "normalization": "coefficients of K^m at D = pi; kappa = K D^2" });
    if matches!(a.branch, SeriesBranch::First | SeriesBranch::All) {
        body["first"] = branch_orders(&first);
    }
    if matches!(a.branch, SeriesBranch::Second | SeriesBranch::All) {
        body["second"] = branch_orders(&second);
    }
    if matches!(a.branch, SeriesBranch::Gap | SeriesBranch::All) {
        body["gap"] = gap_orders(&first, &second);
    }
    if a.check_paper {
        body["check_paper"] = published_check(&first, &second);
    }
    Ok(json_doc("series", body))
}

fn bracket_hint(p: &ModelParams) -> String {
    format!(
        "hint: c_k lies in (-pi^2/D^2, 0) = ({:e}, 0); start the bracket at or below -1 x pi^2/D^2 \
         (--lower-factor) or allow more --max-doublings",
        -p.base()
    )
}

pub fn cmd_pruefer(a: &PrueferArgs) -> Out {
    let p = ModelParams::new(a.params.n, a.params.k_curv, a.params.d)?;
    let bo = BracketOptions { lower_factor: a.lower_factor, max_doublings: a.max_doublings };
    let ck = find_ck_with(a.k, &p, bo).map_err(|e| {
        let mut f = Failure::from(e.clone());
        if matches!(e, Error::Bracket(_)) {
            f.message = format!("{}\n{}", f.message, bracket_hint(&p));
        }
        f
    })?;
    let rp = RobinProblem { k: a.k, c_k: ck.c_k, params: p };
    let x = crate::grid::uniform(0.0, p.half(), a.intervals.max(2));
    let robin = rp.eigenfunction_on(&x)?;
    let left = left_branch_on(ck.c_k, &p, &x)?;
    let right = right_branch_on(a.k, ck.c_k, &p, &x)?;
    let sup = match a.s {
        Some(s) => Some(rp.supersolution_on(s, &x)?),
        None => None,
    };
    let window = (0.05 * p.half(), 0.95 * p.half());
    let agreement = left
        .psi
        .x
        .iter()
        .zip(&left.psi.y)
        .filter(|(z, _)| **z >= window.0 && **z <= window.1 && **z >= right.existence.0)
        .fold(0.0f64, |m, (z, y)| m.max((y - right.psi.interpolate(*z)).abs()));
    match a.format {
        Format::Json => Ok(json_doc(
            "pruefer",
            json!({
                "params": p,
                "k": a.k,
                "c_k": ck.c_k,
                "residual": ck.residual,
                "bracket": [ck.bracket.0, ck.bracket.1],
                "doublings": ck.doublings,
                "comparison_threshold": rp.lower_bound_threshold(),
                "branch_agreement": agreement,
                "boundary_defect": robin.boundary_defect(),
                "s": a.s,
                "z": x,
                "psi": robin.psi.y,
                "phi": robin.phi.y,
                "dphi": robin.dphi.y,
                "supersolution": sup.map(|g| g.y),
            }),
        )),
        Format::Csv => {
            let mut s = format!(
                "# k={} c_k={} residual={} threshold={}\nz,phi,dphi,psi{}\n",
                fmt_f64(a.k),
                fmt_f64(ck.c_k),
                fmt_f64(ck.residual),
                fmt_f64(rp.lower_bound_threshold()),
                if sup.is_some() { ",supersolution" } else { "" }
            );
            for i in 0..x.len() {
                s.push_str(&format!(
                    "{},{},{},{}",
                    fmt_f64(x[i]),
                    fmt_f64(robin.phi.y[i]),
                    fmt_f64(robin.dphi.y[i]),
                    fmt_f64(robin.psi.y[i])
                ));
                if let Some(g) = &sup {
                    s.push_str(&format!(",{}", fmt_f64(g.y[i])));
                }
                s.push('\n');
            }
            Ok(s)
        }
    }
}

pub fn cmd_flow(a: &FlowArgs) -> Out {
    let p = ModelParams::new(a.params.n, a.params.k_curv, a.params.d)?;
    if a.cells < 4 {
        return Err(fail(EXIT_VALIDATION, "--cells must be at least 4"));
    }
    let opts = FlowOptions {
        cells: a.cells,
        balanced: !a.unbalanced,
        snapshots: if a.emit_plot.is_some() { a.snapshots } else { 0 },
        ..Default::default()
    };
    let rp = RobinProblem::new(a.k, &p)?;
    let x = clustered_grid(p.half(), opts.cells, opts.ratio, opts.layer_fraction);
    let initial = match a.start {
        FlowStart::Stationary => robin_target(&rp, &x)?,
        FlowStart::Supersolution => {
            let s = a.s.unwrap_or(2.0 * rp.lower_bound_threshold());
            rp.supersolution_on(s, &x)?
        }
    };
    let (_, diag) = flow_to_stationary(&initial, a.k, &p, a.tol, &opts)?;
    if let Some(path) = &a.emit_plot {
        let doc = json_doc("flow-snapshots", json!({ "params": p, "k": a.k, "snapshots": diag.snapshots }));
        std::fs::write(path, doc).map_err(|e| fail(EXIT_VALIDATION, format!("{}: {e}", path.display())))?;
    }
    Ok(diag.to_csv())
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BoundRow {
    pub n: u32,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "D")]
    pub d: f64,
    pub index: u8,
    pub lower: Option<f64>,
    pub eigenvalue: f64,
    pub upper_rayleigh: f64,
    /// Closed-form quartic bound, n = 2 only.
    pub upper_explicit: Option<f64>,
    pub holds: bool,
}

fn bound_rows(p: &ModelParams) -> crate::Result<Vec<BoundRow>> {
    if p.k <= 0.0 {
        return Err(Error::Hypothesis(format!("bounds need K > 0, got K = {}", p.k)));
    }
    let mut rows = Vec::new();
    for index in 1..=2u8 {
        let b = bound_report(p, index)?;
        let e = eigen_shoot_with(p, index, ShootOptions::default())?;
        let explicit = if p.n == 2 { Some(explicit_n2_upper(p, index)?) } else { None };
        let slack = 10.0 * e.error_estimate;
        let holds = b.contains(e.eigenvalue, slack) && explicit.is_none_or(|u| e.eigenvalue <= u + slack);
        rows.push(BoundRow {
            n: p.n,
            k: p.k,
            d: p.d,
            index,
            lower: b.lower,
            eigenvalue: e.eigenvalue,
            upper_rayleigh: b.upper,
            upper_explicit: explicit,
            holds,
        });
    }
    Ok(rows)
}

pub fn cmd_bounds(a: &BoundsArgs) -> Out {
    let ps = triples(&a.sweep)?;
    if let Some(p) = ps.iter().find(|p| p.k <= 0.0) {
        return Err(fail(EXIT_VALIDATION, format!("bounds need K > 0, got K = {}", p.k)));
    }
    let rows: Vec<BoundRow> = sweep(&ps, a.sweep.jobs, bound_rows)?.into_iter().flatten().collect();
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    Ok(match a.sweep.format {
        Format::Json => json_doc("bounds", json!({ "rows": rows })),
        Format::Csv => {
            let mut s = String::from("n,K,D,index,lower,eigenvalue,upper_rayleigh,upper_explicit,holds\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    r.n,
                    fmt_f64(r.k),
                    fmt_f64(r.d),
                    r.index,
                    opt(r.lower),
                    fmt_f64(r.eigenvalue),
                    fmt_f64(r.upper_rayleigh),
                    opt(r.upper_explicit),
                    r.holds
                ));
            }
            s
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_lists() {
        assert_eq!(parse_values("0.5").unwrap(), vec![0.5]);
        assert_eq!(parse_values("1,2,3").unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(parse_values("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(parse_values("0:1").is_err());
        assert!(parse_values("a").is_err());
    }

    #[test]
    fn codes() {
        assert_eq!(exit_code(&Error::Pole("x".into())), 2);
        assert_eq!(exit_code(&Error::NonConvergence("x".into())), 3);
        assert_eq!(exit_code(&Error::Bracket("x".into())), 4);
    }

    #[test]
    fn float_rendering_round_trips() {
        for v in [PI, -1e-300, 12345.678] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }
}
