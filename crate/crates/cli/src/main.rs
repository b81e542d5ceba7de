use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use subriem_core::bounds::{discrepancy, AltConvention, BoundReport, CSV_COLUMNS};
use subriem_core::specfile::parse_binding;
use subriem_core::spectral::{CertLine, TailBound};
use subriem_core::{
    builtin, certify, check_axioms, lambda1, optimize, Analysis, Instance, SpecError, SpecFile, SweepOptions, BUILTINS,
};

const AFTER_HELP: &str = "\
Exit codes:
  0  success
  1  numerical failure
  2  unreadable or unparseable input, unknown or unbound parameter, or certify without an oracle
  3  invariant violation (antisymmetry, Jacobi, bracket generation, oracle frame map)
  4  certification failure, including a cutoff too small to certify

CSV schemas (`--format csv`):
  bound    example,theorem,bound,x,rho1,rho2,omega,chi,psi,m
           alternative conventions appear as theorem ids such as main@unordered_pairs
  certify  example,label,theorem,bound,lambda1,x,rho1,rho2,pass
  report   example,param,value,theorem,bound,x,rho1,rho2,omega,chi,psi,m,frontier_lhs,frontier_rhs,admissible
           frontier_lhs = (1-x)(1+3x)/(1+x)^2 at the best x and frontier_rhs = b^2/(4(1+b^2));
           both are `none` unless sweeping b of so4_twisted
  analyze  key,value
  classify flag,value

Numbers are printed with 12 decimals; identical arguments give byte-identical output.";

#[derive(Parser)]
#[command(
    name = "subriem",
    version,
    about = "Curvature invariants and first-eigenvalue bounds for step-2 sub-Riemannian homogeneous spaces",
    after_help = AFTER_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check antisymmetry, Jacobi, bracket generation and the oracle frame map.
    Validate(Input),
    /// Print the geometry classification flags.
    Classify(Input),
    /// Print connection, torsion and curvature invariants.
    Analyze(Input),
    /// Optimize every applicable bound.
    Bound(Input),
    /// Compare every bound with the exact first eigenvalue.
    Certify(Input),
    /// Sweep one parameter and emit a CSV of the best bound against it.
    Report {
        #[command(flatten)]
        input: Input,
        /// Parameter to sweep; defaults to the only parameter of the spec.
        #[arg(long)]
        sweep: Option<String>,
        #[arg(long, default_value_t = 0.0)]
        from: f64,
        #[arg(long, default_value_t = 0.5)]
        to: f64,
        /// Number of sweep points, endpoints included.
        #[arg(long, default_value_t = 11)]
        steps: usize,
    },
}

#[derive(Args)]
struct Input {
    /// Spec file path and `name=value` parameter bindings.
    #[arg(value_name = "SPEC | NAME=VALUE")]
    args: Vec<String>,
    /// Builtin example instead of a spec file.
    #[arg(long, value_parser = builtin_names())]
    builtin: Option<String>,
    /// Parameter binding `name=value`; repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
    /// Points of the uniform x grid on [0, 1).
    #[arg(long, value_name = "N", default_value_t = SweepOptions::default().x_points)]
    x_grid: usize,
    /// Log-spaced rho2 grid points per decade.
    #[arg(long, value_name = "N", default_value_t = SweepOptions::default().rho2_per_decade)]
    rho2_grid: usize,
    /// Casimir cutoff of the spectral oracle; defaults to the spec's.
    #[arg(long, value_name = "R")]
    cutoff: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

fn builtin_names() -> clap::builder::PossibleValuesParser {
    clap::builder::PossibleValuesParser::new(BUILTINS.iter().map(|b| b.name))
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

type Run<T> = Result<T, Failure>;

fn input_error(e: impl std::fmt::Display) -> Failure {
    Failure::new(2, e.to_string())
}

fn numeric_error(e: impl std::fmt::Display) -> Failure {
    Failure::new(1, e.to_string())
}

fn num(v: f64) -> String {
    format!("{v:.12}")
}

/// Spec, bindings and the alternative conventions of a resolved input.
struct Resolved {
    spec: SpecFile,
    bindings: Vec<(String, f64)>,
    alt: &'static [AltConvention],
}

impl Input {
    fn resolve(&self) -> Run<Resolved> {
        let mut path: Option<&str> = None;
        let mut bindings = Vec::new();
        for a in self.args.iter().chain(&self.params) {
            if a.contains('=') {
                let b = parse_binding(a).ok_or_else(|| input_error(format!("bad parameter binding '{a}'")))?;
                bindings.retain(|(k, _): &(String, f64)| *k != b.0);
                bindings.push(b);
            } else if self.params.contains(a) {
                return Err(input_error(format!("bad parameter binding '{a}'")));
            } else if path.replace(a).is_some() {
                return Err(input_error("more than one spec path given"));
            }
        }
        let (spec, alt) = match (&self.builtin, path) {
            (Some(_), Some(p)) => return Err(input_error(format!("both --builtin and spec path '{p}' given"))),
            (None, None) => return Err(input_error("no input: give a spec path or --builtin NAME")),
            (Some(name), None) => {
                let b = builtin(name).ok_or_else(|| input_error(format!("unknown builtin '{name}'")))?;
                (b.spec(), b.alt_conventions)
            }
            (None, Some(p)) => {
                let src = std::fs::read_to_string(PathBuf::from(p)).map_err(|e| input_error(format!("{p}: {e}")))?;
                let spec = SpecFile::parse(&src).map_err(|e| input_error(format!("{p}: {e}")))?;
                (spec, &[][..])
            }
        };
        Ok(Resolved { spec, bindings, alt })
    }

    fn opts(&self) -> Run<SweepOptions> {
        if self.x_grid < 2 || self.rho2_grid < 1 {
            return Err(input_error("--x-grid must be at least 2 and --rho2-grid at least 1"));
        }
        Ok(SweepOptions {
            x_points: self.x_grid,
            rho2_per_decade: self.rho2_grid,
            ..SweepOptions::default()
        })
    }
}

impl Resolved {
    fn instance(&self, bindings: &[(String, f64)]) -> Run<Instance> {
        self.spec.instantiate(bindings).map_err(input_error)
    }
}

/// Diagnostics of the algebra and its oracle; empty when valid.
fn violations(inst: &Instance) -> Vec<String> {
    let mut out: Vec<String> = inst.algebra.validate().iter().map(|d| d.to_string()).collect();
    if out.is_empty() {
        if let Some(o) = &inst.oracle {
            if let Err(e) = o.check_isomorphism(&inst.algebra) {
                out.push(format!("frame map: {e}"));
            }
        }
    }
    out
}

fn require_valid(inst: &Instance) -> Run<()> {
    let v = violations(inst);
    if v.is_empty() {
        return Ok(());
    }
    Err(Failure::new(3, v.join("\n")))
}

fn analysis(inst: &Instance) -> Run<Analysis> {
    require_valid(inst)?;
    Analysis::new(inst.algebra.clone()).map_err(numeric_error)
}

fn key_values(rows: &[(String, String)], format: Format, header: [&str; 2]) -> Run<String> {
    match format {
        Format::Text => Ok(rows.iter().fold(String::new(), |mut s, (k, v)| {
            let _ = writeln!(s, "{k} = {v}");
            s
        })),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(header).map_err(numeric_error)?;
            for (k, v) in rows {
                w.write_record([k, v]).map_err(numeric_error)?;
            }
            finish(w)
        }
    }
}

fn finish(w: csv::Writer<Vec<u8>>) -> Run<String> {
    let bytes = w.into_inner().map_err(numeric_error)?;
    String::from_utf8(bytes).map_err(numeric_error)
}

fn validate(input: &Input) -> Run<String> {
    let r = input.resolve()?;
    let inst = r.instance(&r.bindings)?;
    require_valid(&inst)?;
    let a = &inst.algebra;
    Ok(format!("valid: {} (dim_h = {}, dim_v = {})\n", a.name(), a.dim_h(), a.dim_v()))
}

fn classify(input: &Input) -> Run<String> {
    let r = input.resolve()?;
    let inst = r.instance(&r.bindings)?;
    let an = analysis(&inst)?;
    let rows: Vec<(String, String)> = an
        .curvature
        .flags
        .entries()
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    key_values(&rows, input.format, ["flag", "value"])
}

fn matrix(m: &nalgebra::DMatrix<f64>) -> String {
    let rows: Vec<String> = m
        .row_iter()
        .map(|r| r.iter().map(|v| num(*v)).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}]", rows.join("; "))
}

fn analyze(input: &Input) -> Run<String> {
    let r = input.resolve()?;
    let inst = r.instance(&r.bindings)?;
    let an = analysis(&inst)?;
    let a = &an.algebra;
    let axioms = check_axioms(a, &an.connection).map_err(numeric_error)?;
    let c = &an.constants;
    let d = a.dim_h();
    let params = a
        .params()
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(",");
    let mut rows: Vec<(String, String)> = vec![
        ("example".into(), a.name().to_string()),
        ("params".into(), if params.is_empty() { "none".into() } else { params }),
        ("dim_h".into(), d.to_string()),
        ("dim_v".into(), a.dim_v().to_string()),
        ("connection_axioms".into(), if axioms.is_empty() { "ok".into() } else { format!("{} violations", axioms.len()) }),
    ];
    for (k, v) in an.curvature.flags.entries() {
        rows.push((format!("flag.{k}"), v.to_string()));
    }
    rows.extend([
        ("kappa".into(), num(c.kappa)),
        ("t2_max".into(), num(c.t2_max)),
        ("sigma".into(), num(c.sigma)),
        ("t1_zero".into(), c.t1_zero.to_string()),
        ("horizontal_nabla_trace_zero".into(), an.horizontal_nabla_trace_vanishes().to_string()),
        (
            "rigidity".into(),
            an.curvature.rigidity.iter().map(|v| num(*v)).collect::<Vec<_>>().join(" "),
        ),
        ("sub_ricci_h".into(), matrix(&an.curvature.sub_ricci.view((0, 0), (d, d)).into_owned())),
        ("tau_hv".into(), matrix(&an.curvature.grams.tau_hv)),
        ("tau_vh".into(), matrix(&an.curvature.grams.tau_vh)),
        ("tau_h".into(), matrix(&an.curvature.grams.tau_h)),
        ("t1".into(), matrix(&an.distortion.t1)),
        ("t2".into(), matrix(&an.distortion.t2)),
    ]);
    key_values(&rows, input.format, ["key", "value"])
}

fn bound_report(r: &Resolved, inst: &Instance, opts: &SweepOptions) -> Run<BoundReport> {
    let an = analysis(inst)?;
    let mut report = optimize(&an, opts);
    for &alt in r.alt {
        if let Some(d) = discrepancy(&an, opts, alt).map_err(numeric_error)? {
            report.discrepancies.push(d);
        }
    }
    Ok(report)
}

fn bound(input: &Input) -> Run<String> {
    let r = input.resolve()?;
    let inst = r.instance(&r.bindings)?;
    let report = bound_report(&r, &inst, &input.opts()?)?;
    match input.format {
        Format::Text => Ok(report.to_text()),
        Format::Csv => report.to_csv(true).map_err(numeric_error),
    }
}

fn certify_cmd(input: &Input) -> Run<String> {
    let r = input.resolve()?;
    let inst = r.instance(&r.bindings)?;
    let oracle = inst
        .oracle
        .as_ref()
        .ok_or_else(|| input_error("certify needs an oracle section and a frame_map in the spec"))?;
    let oracle = match input.cutoff {
        Some(c) => oracle.with_cutoff(c).map_err(input_error)?,
        None => oracle.clone(),
    };
    let report = bound_report(&r, &inst, &input.opts()?)?;
    let spectrum = lambda1(&oracle).map_err(|e| Failure::new(4, format!("cannot certify: {e}")))?;
    let cert = certify(&report, &spectrum).map_err(|e| Failure::new(4, e.to_string()))?;
    let out = match input.format {
        Format::Text => {
            let mut s = String::new();
            for l in &cert.lines {
                let _ = writeln!(s, "{l}");
            }
            let _ = writeln!(s, "lambda1 = {}", num(spectrum.lambda1));
            let w: Vec<String> = spectrum.witnesses.iter().map(|l| l.to_string()).collect();
            let _ = writeln!(s, "witnesses = {}", w.join(" "));
            let _ = writeln!(s, "cutoff = {}", num(spectrum.cutoff));
            let tail = match spectrum.tail {
                TailBound::Rigorous(v) => format!("rigorous {}", num(v)),
                TailBound::Heuristic => "heuristic".into(),
            };
            let _ = writeln!(s, "tail = {tail}");
            let _ = writeln!(s, "result = {}", if cert.passed() { "PASS" } else { "FAIL" });
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["example", "label", "theorem", "bound", "lambda1", "x", "rho1", "rho2", "pass"])
                .map_err(numeric_error)?;
            for l in &cert.lines {
                w.write_record(cert_row(&report.example, l)).map_err(numeric_error)?;
            }
            finish(w)?
        }
    };
    if cert.passed() {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::new(4, "certification failed: a bound exceeds the first eigenvalue"))
    }
}

fn cert_row(example: &str, l: &CertLine) -> [String; 9] {
    [
        example.to_string(),
        l.label.clone(),
        l.theorem.id().to_string(),
        num(l.bound),
        num(l.lambda1),
        num(l.x),
        num(l.rho1),
        num(l.rho2),
        l.pass.to_string(),
    ]
}

fn report(input: &Input, sweep: Option<&str>, from: f64, to: f64, steps: usize) -> Run<String> {
    let r = input.resolve()?;
    let param = match sweep {
        Some(p) => p.to_string(),
        None => match r.spec.params.as_slice() {
            [p] => p.name.clone(),
            _ => return Err(input_error("the spec has several or no parameters; choose one with --sweep")),
        },
    };
    if !r.spec.params.iter().any(|p| p.name == param) {
        return Err(input_error(SpecError::UnknownParam(param)));
    }
    if steps < 1 || !from.is_finite() || !to.is_finite() {
        return Err(input_error("--steps must be positive and --from/--to finite"));
    }
    let opts = input.opts()?;
    let frontier = input.builtin.as_deref() == Some("so4_twisted") && param == "b";
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = vec!["example", "param", "value"];
    header.extend(&CSV_COLUMNS[1..]);
    header.extend(["frontier_lhs", "frontier_rhs", "admissible"]);
    w.write_record(&header).map_err(numeric_error)?;
    for k in 0..steps {
        let v = if steps == 1 { from } else { from + (to - from) * k as f64 / (steps - 1) as f64 };
        let mut bindings: Vec<(String, f64)> = r.bindings.iter().filter(|(n, _)| *n != param).cloned().collect();
        bindings.push((param.clone(), v));
        let inst = r.instance(&bindings)?;
        let rep = bound_report(&r, &inst, &opts)?;
        let mut row = vec![rep.example.clone(), param.clone(), num(v)];
        match rep.best() {
            Some(e) => {
                row.extend([
                    e.theorem.id().to_string(),
                    num(e.bound),
                    num(e.x),
                    num(e.rho1),
                    num(e.rho2),
                    num(e.omega),
                    num(e.chi),
                    num(e.psi),
                    num(e.m),
                ]);
                if frontier {
                    let x = e.x;
                    let lhs = (1.0 - x) * (1.0 + 3.0 * x) / ((1.0 + x) * (1.0 + x));
                    let rhs = 0.25 * v * v / (1.0 + v * v);
                    row.extend([num(lhs), num(rhs), (lhs > rhs).to_string()]);
                } else {
                    row.extend(["none".into(), "none".into(), "none".into()]);
                }
            }
            None => row.extend(std::iter::repeat_n("none".to_string(), 12)),
        }
        w.write_record(&row).map_err(numeric_error)?;
    }
    finish(w)
}

fn run(cli: &Cli) -> Run<String> {
    match &cli.command {
        Command::Validate(i) => validate(i),
        Command::Classify(i) => classify(i),
        Command::Analyze(i) => analyze(i),
        Command::Bound(i) => bound(i),
        Command::Certify(i) => certify_cmd(i),
        Command::Report {
            input,
            sweep,
            from,
            to,
            steps,
        } => report(input, sweep.as_deref(), *from, *to, *steps),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
