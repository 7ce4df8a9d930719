use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use orlicz_core::conjugation::{ominus_bruteforce, ominus_monotone};
use orlicz_core::ext::fmt as fmt_ext;
use orlicz_core::factorization::{equivalence_check_with, Stability, CHECK_POINTS, CHECK_RANGE};
use orlicz_core::funcdsl::{parse_fixtures, parse_young};
use orlicz_core::measure::read_table;
use orlicz_core::suites::{self, SuiteConfig, SUITES};
use orlicz_core::{
    charfn_norm, classical_conjugate, decompose, format, luxemburg_norm, modular, ominus, ominus_truncated, presets,
    resolve, sample, Error, GridSpec, MeasureKind, MeasureSpace, Mode, OminusResult, SimpleFunction, Young,
    YoungFunction,
};

#[derive(Parser)]
#[command(name = "orlicz", version, about = "Generalized conjugates, pointwise multipliers and factorization of Orlicz spaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tabulate (phi (-) phi1)(u) and its maximizer s*(u).
    Ominus(OminusArgs),
    /// Classify M(L^phi1, L^phi) and report its generator and constants.
    Resolve(ResolveArgs),
    /// Test phi1^-1 * phi2^-1 ~ phi^-1 and optionally split a tabulated z.
    Factorize(FactorizeArgs),
    /// Run the property suites.
    Verify(VerifyArgs),
    /// Luxemburg norm and modular of a tabulated simple function.
    Norm(NormArgs),
    /// Parse function expressions and print their canonical form.
    Parse(ParseArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    All,
    Large,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Pointwise,
    Brute,
    Monotone,
}

#[derive(Args, Clone)]
struct Output {
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args, Clone)]
struct Pair {
    /// Target function phi (funcdsl text).
    #[arg(long)]
    phi: Option<String>,
    /// Domain function phi1 (funcdsl text).
    #[arg(long)]
    phi1: Option<String>,
    /// Named (phi, phi1) pair; explicit --phi/--phi1 take precedence.
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Args, Clone)]
struct Grid {
    #[arg(long, default_value_t = 1e-6)]
    umin: f64,
    #[arg(long, default_value_t = 1e6)]
    umax: f64,
    #[arg(long, default_value_t = 4097)]
    n: usize,
}

#[derive(Args)]
struct OminusArgs {
    #[command(flatten)]
    pair: Pair,
    #[command(flatten)]
    grid: Grid,
    #[command(flatten)]
    out: Output,
    /// Restrict the supremum to 0 <= s <= A.
    #[arg(long, value_name = "A")]
    truncate: Option<f64>,
    /// Classical conjugate of --phi1 (phi = id).
    #[arg(long)]
    classical: bool,
    /// Pointwise on closed forms, or brute force / monotone on sampled inputs.
    #[arg(long, value_enum, default_value = "pointwise")]
    method: MethodArg,
}

#[derive(Args)]
struct ResolveArgs {
    #[command(flatten)]
    pair: Pair,
    #[command(flatten)]
    grid: Grid,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct FactorizeArgs {
    #[command(flatten)]
    pair: Pair,
    /// Candidate phi2; defaults to the computed phi (-) phi1.
    #[arg(long)]
    phi2: Option<String>,
    #[command(flatten)]
    grid: Grid,
    #[command(flatten)]
    out: Output,
    /// finite:N or infinite:N; selects the default mode.
    #[arg(long, default_value = "finite:64")]
    space: String,
    /// Overrides the mode implied by --space.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Relative change of the ratio extremes accepted as a stable tail.
    #[arg(long)]
    tol: Option<f64>,
    /// Tabulated z to split as x*y.
    #[arg(long, value_name = "FILE")]
    z: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run (repeatable); all suites by default.
    #[arg(long)]
    suite: Vec<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Test hook: perturb every suite so that it must fail.
    #[arg(long)]
    inject_fault: bool,
    #[command(flatten)]
    grid: Grid,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct NormArgs {
    #[arg(long)]
    phi: String,
    /// Tabulated simple function (`cell_id measure value`).
    #[arg(long, value_name = "FILE", conflicts_with = "measure")]
    table: Option<std::path::PathBuf>,
    /// Norm of an indicator of a set of this measure.
    #[arg(long)]
    measure: Option<f64>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct ParseArgs {
    /// Expression to parse.
    expr: Option<String>,
    /// Fixture file, one expression per line.
    #[arg(long, value_name = "FILE", conflicts_with = "expr")]
    file: Option<std::path::PathBuf>,
    #[command(flatten)]
    out: Output,
}

enum Failure {
    Input(String),
    Tolerance(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(p) => Failure::Input(p.render()),
            e => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

#[derive(Clone, Debug)]
enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => num(*x),
            Cell::Int(n) => json!(n),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }

    fn text(&self) -> String {
        match self {
            Cell::Num(x) => fmt_ext(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.into())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n)
    }
}

/// JSON number, with `∞` as the string "inf" and NaN as null.
fn num(x: f64) -> Value {
    if x.is_infinite() {
        Value::String(fmt_ext(x))
    } else {
        serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
    }
}

/// Summary fields plus an optional data table, rendered in one of three formats.
#[derive(Default)]
struct Report {
    fields: Vec<(String, Cell)>,
    lists: Vec<(String, Vec<String>)>,
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
    /// Print rows in table format too.
    rows_in_table: bool,
}

impl Report {
    fn field(&mut self, k: &str, v: impl Into<Cell>) {
        self.fields.push((k.into(), v.into()));
    }

    fn list(&mut self, k: &str, v: Vec<String>) {
        self.lists.push((k.into(), v));
    }

    fn render(&self, f: Format) -> String {
        match f {
            Format::Json => {
                let mut m = Map::new();
                for (k, v) in &self.fields {
                    m.insert(k.clone(), v.json());
                }
                for (k, v) in &self.lists {
                    m.insert(k.clone(), json!(v));
                }
                if !self.columns.is_empty() {
                    let rows: Vec<Value> = self
                        .rows
                        .iter()
                        .map(|r| {
                            let mut o = Map::new();
                            for (c, v) in self.columns.iter().zip(r) {
                                o.insert(c.clone(), v.json());
                            }
                            Value::Object(o)
                        })
                        .collect();
                    m.insert("rows".into(), Value::Array(rows));
                }
                let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = String::new();
                if self.columns.is_empty() {
                    s.push_str("key,value\n");
                    for (k, v) in &self.fields {
                        let _ = writeln!(s, "{k},{}", csv_escape(&v.text()));
                    }
                    for (k, v) in &self.lists {
                        for item in v {
                            let _ = writeln!(s, "{k},{}", csv_escape(item));
                        }
                    }
                } else {
                    let _ = writeln!(s, "{}", self.columns.join(","));
                    for r in &self.rows {
                        let cells: Vec<String> = r.iter().map(|c| csv_escape(&c.text())).collect();
                        let _ = writeln!(s, "{}", cells.join(","));
                    }
                }
                s
            }
            Format::Table => {
                let mut s = String::new();
                let w = self.fields.iter().map(|f| f.0.len()).chain(self.lists.iter().map(|l| l.0.len())).max().unwrap_or(0);
                for (k, v) in &self.fields {
                    let _ = writeln!(s, "{k:<w$}  {}", v.text());
                }
                for (k, v) in &self.lists {
                    for item in v {
                        let _ = writeln!(s, "{k:<w$}  {item}");
                    }
                }
                if self.rows_in_table && !self.columns.is_empty() {
                    let texts: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::text).collect()).collect();
                    let widths: Vec<usize> = (0..self.columns.len())
                        .map(|j| texts.iter().map(|r| r[j].len()).chain([self.columns[j].len()]).max().unwrap_or(0))
                        .collect();
                    if !s.is_empty() {
                        s.push('\n');
                    }
                    let head: Vec<String> = self.columns.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
                    let _ = writeln!(s, "{}", head.join("  "));
                    for r in texts {
                        let line: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
                        let _ = writeln!(s, "{}", line.join("  "));
                    }
                }
                s
            }
        }
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn parse_fn(flag: &str, text: &str) -> Result<YoungFunction, Failure> {
    parse_young(text).map_err(|e| match e {
        Error::Parse(p) => Failure::Input(format!("--{flag}:\n{}", p.render())),
        e => Failure::Input(format!("--{flag}: {e}")),
    })
}

fn resolve_pair(p: &Pair, classical: bool) -> Result<(YoungFunction, YoungFunction, String, String), Failure> {
    let named = match &p.preset {
        Some(n) => Some(presets::named(n).ok_or_else(|| {
            let known: Vec<&str> = presets::NAMED.iter().map(|n| n.0).collect();
            Failure::Input(format!("unknown preset '{n}'; known: {}", known.join(", ")))
        })?),
        None => None,
    };
    let phi_text = match (&p.phi, named, classical) {
        (Some(t), _, _) => t.clone(),
        (None, _, true) => "id".into(),
        (None, Some(n), _) => n.0.into(),
        (None, None, false) => return Err(Failure::Input("--phi is required (or --preset)".into())),
    };
    let phi1_text = match (&p.phi1, named) {
        (Some(t), _) => t.clone(),
        (None, Some(n)) => n.1.into(),
        (None, None) => return Err(Failure::Input("--phi1 is required (or --preset)".into())),
    };
    let phi = parse_fn("phi", &phi_text)?;
    let phi1 = parse_fn("phi1", &phi1_text)?;
    Ok((phi, phi1, phi_text, phi1_text))
}

fn grid_spec(g: &Grid) -> Result<GridSpec, Failure> {
    Ok(GridSpec::new(g.umin, g.umax, g.n)?.with_anchors([1.0]))
}

fn parse_space(s: &str) -> Result<MeasureSpace, Failure> {
    let bad = || Failure::Input(format!("--space expects finite:N or infinite:N, got '{s}'"));
    let (kind, n) = s.split_once(':').ok_or_else(bad)?;
    let n: usize = n.parse().map_err(|_| bad())?;
    let sp = match kind {
        "finite" => MeasureSpace::unit_interval(n)?,
        "infinite" => MeasureSpace::sigma_finite(n, 1.0)?,
        _ => return Err(bad()),
    };
    Ok(sp)
}

fn read_file(path: &std::path::Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn ominus_cmd(a: &OminusArgs) -> Outcome {
    let (phi, phi1, pt, p1t) = resolve_pair(&a.pair, a.classical)?;
    let grid = grid_spec(&a.grid)?;
    let r: OminusResult = match (a.method, a.truncate) {
        (MethodArg::Pointwise, Some(t)) => ominus_truncated(&phi, &phi1, t, &grid)?,
        (MethodArg::Pointwise, None) if a.classical => classical_conjugate(&phi1, &grid)?,
        (MethodArg::Pointwise, None) => ominus(&phi, &phi1, &grid)?,
        (_, Some(_)) => return Err(Failure::Input("--truncate needs --method pointwise".into())),
        (m, None) => {
            let (s, s1) = (sample(&phi, &grid)?, sample(&phi1, &grid)?);
            if m == MethodArg::Brute { ominus_bruteforce(&s, &s1)? } else { ominus_monotone(&s, &s1)? }
        }
    };
    let mut rep = Report { rows_in_table: true, ..Default::default() };
    rep.field("phi", pt);
    rep.field("phi1", p1t);
    rep.field("method", format!("{:?}", r.method));
    rep.field("domain", format!("{:?}", r.domain_convention));
    rep.field("truncation", r.truncation);
    rep.field("b", r.b());
    rep.field("max_finite_argmax", r.max_finite_argmax());
    rep.columns = vec!["u".into(), "value".into(), "argmax".into()];
    for ((&u, &v), &(_, s)) in r.function.grid().iter().zip(r.function.values()).zip(&r.argmax_profile) {
        rep.rows.push(vec![u.into(), v.into(), s.into()]);
    }
    Ok(rep.render(a.out.format))
}

/// Least-squares exponent of the finite positive part on `[1e-2, 1e2]`,
/// kept only when every local slope is within 0.05 of it.
fn power_law(r: &OminusResult) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = r
        .function
        .grid()
        .iter()
        .zip(r.function.values())
        .filter(|(&u, &v)| (1e-2..=1e2).contains(&u) && v.is_finite() && v > 0.0)
        .map(|(&u, &v)| (u.ln(), v.ln()))
        .collect();
    if pts.len() < 8 {
        return None;
    }
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let k = sxy / sxx;
    let ok = pts.windows(2).all(|w| ((w[1].1 - w[0].1) / (w[1].0 - w[0].0) - k).abs() <= 0.05);
    ok.then(|| (k, (my - k * mx).exp()))
}

fn resolve_cmd(a: &ResolveArgs) -> Outcome {
    let (phi, phi1, pt, p1t) = resolve_pair(&a.pair, false)?;
    let grid = grid_spec(&a.grid)?;
    let m = resolve(&phi1, &phi, &grid)?;
    let mut rep = Report::default();
    rep.field("phi", pt);
    rep.field("phi1", p1t);
    rep.field("classification", format!("{:?}", m.classification));
    rep.field("triviality", format!("{:?}", m.triviality));
    rep.field("generator_b", m.generator.b());
    rep.field("domain", format!("{:?}", m.generator.domain_convention));
    rep.field("embed_const", m.embed_const);
    rep.field("reverse_const", m.reverse.describe());
    match power_law(&m.generator) {
        Some((k, c)) => {
            rep.field("generator", format!("~ {} u^{k:.2}", format_sig(c)));
            rep.field("exponent", k);
            rep.field("coefficient", c);
        }
        None => rep.field("generator", if m.generator.is_trivial() { "inf for u > 0" } else { "no power law on [1e-2, 1e2]" }),
    }
    rep.columns = vec!["u".into(), "value".into(), "argmax".into()];
    for ((&u, &v), &(_, s)) in m.generator.function.grid().iter().zip(m.generator.function.values()).zip(&m.generator.argmax_profile) {
        rep.rows.push(vec![u.into(), v.into(), s.into()]);
    }
    Ok(rep.render(a.out.format))
}

fn format_sig(x: f64) -> String {
    format!("{:.6}", x).trim_end_matches('0').trim_end_matches('.').to_string()
}

fn factorize_cmd(a: &FactorizeArgs) -> Outcome {
    let (phi, phi1, pt, p1t) = resolve_pair(&a.pair, false)?;
    let grid = grid_spec(&a.grid)?;
    let sp = parse_space(&a.space)?;
    let kind = if sp.kind() == orlicz_core::SpaceKind::Finite { MeasureKind::Finite } else { MeasureKind::Infinite };
    let mode = match a.mode {
        Some(ModeArg::All) => Mode::AllArguments,
        Some(ModeArg::Large) => Mode::LargeArguments,
        None => kind.mode(),
    };
    let mut st = Stability::default();
    if let Some(t) = a.tol {
        if t.is_nan() || t <= 0.0 {
            return Err(Failure::Input(format!("--tol must be positive, got {t}")));
        }
        st.extreme_tol = t;
    }
    let gen = resolve(&phi1, &phi, &grid)?.generator;
    let (phi2_text, r) = match &a.phi2 {
        Some(t) => {
            let phi2 = parse_fn("phi2", t)?;
            (t.clone(), equivalence_check_with(&phi, &phi1, &phi2, mode, CHECK_RANGE, CHECK_POINTS, st)?)
        }
        None if gen.is_trivial() => {
            let mut r = orlicz_core::factorization_check(&phi, &phi1, kind, &grid)?;
            r.mode = mode;
            ("phi (-) phi1".into(), r)
        }
        None => ("phi (-) phi1".into(), equivalence_check_with(&phi, &phi1, &gen.function, mode, CHECK_RANGE, CHECK_POINTS, st)?),
    };
    let mut rep = Report::default();
    rep.field("phi", pt);
    rep.field("phi1", p1t);
    rep.field("phi2", phi2_text);
    rep.field("mode", format!("{:?}", r.mode));
    rep.field("verdict", r.verdict);
    rep.field("c", r.c);
    rep.field("C", r.big_c);
    rep.field("C_over_c", r.spread());
    rep.field("u0", r.u0);
    rep.list("diagnostics", r.diagnostics.clone());
    rep.columns = vec!["u".into(), "ratio".into()];
    for &(u, q) in &r.ratio_trace {
        rep.rows.push(vec![u.into(), q.into()]);
    }
    if let Some(path) = &a.z {
        let (zsp, z) = read_table(&read_file(path)?)?;
        let d = decompose(&z, &phi, &phi1, &gen.function, &zsp)?;
        rep.field("z_norm", d.z_norm);
        rep.field("x_norm", d.x_norm);
        rep.field("y_norm", d.y_norm);
        rep.field("phi1_modular_x", d.phi1_modular_x);
        rep.field("phi_modular_z", d.phi_modular_z);
        rep.field("product_exact", d.product_exact());
        rep.columns = vec!["cell".into(), "measure".into(), "z".into(), "x".into(), "y".into()];
        rep.rows = (0..zsp.len())
            .map(|i| vec![i.into(), zsp.cells()[i].into(), z.values()[i].into(), d.x.values()[i].into(), d.y.values()[i].into()])
            .collect();
        rep.rows_in_table = true;
    }
    Ok(rep.render(a.out.format))
}

fn verify_cmd(a: &VerifyArgs) -> Outcome {
    let names: Vec<String> = if a.suite.is_empty() || a.suite.iter().any(|s| s == "all") {
        SUITES.iter().map(|s| s.to_string()).collect()
    } else {
        a.suite.clone()
    };
    for n in &names {
        if !SUITES.contains(&n.as_str()) {
            return Err(Failure::Input(format!("unknown suite '{n}'; known: {}", SUITES.join(", "))));
        }
    }
    let cfg = SuiteConfig { trials: a.trials, seed: a.seed, grid: grid_spec(&a.grid)?, inject_fault: a.inject_fault, ..Default::default() };
    let mut rep = Report { rows_in_table: true, ..Default::default() };
    rep.columns = ["suite", "status", "checks", "violations", "worst", "property"].map(String::from).to_vec();
    let mut failed = Vec::new();
    let mut details = Vec::new();
    for n in &names {
        let o = suites::run(n, &cfg)?;
        let status = if o.passed() { "PASS" } else { "FAIL" };
        if !o.passed() {
            failed.push(format!("{}: {}", o.suite, o.property));
            details.extend(o.failures.iter().map(|f| format!("{}: {f}", o.suite)));
        }
        details.extend(o.notes.iter().map(|f| format!("{}: {f}", o.suite)));
        rep.rows.push(vec![o.suite.clone().into(), status.into(), o.checks.into(), o.violations.into(), o.worst.into(), o.property.clone().into()]);
    }
    let mut text = rep.render(a.out.format);
    if a.out.format == Format::Table {
        for d in &details {
            let _ = writeln!(text, "  {d}");
        }
    }
    if failed.is_empty() {
        Ok(text)
    } else {
        emit(&text);
        Err(Failure::Tolerance(format!("failing properties:\n  {}", failed.join("\n  "))))
    }
}

fn norm_cmd(a: &NormArgs) -> Outcome {
    let phi = parse_fn("phi", &a.phi)?;
    let mut rep = Report::default();
    rep.field("phi", a.phi.clone());
    match (&a.table, a.measure) {
        (Some(path), _) => {
            let (sp, x) = read_table(&read_file(path)?)?;
            let n = luxemburg_norm(&phi, &x, &sp);
            rep.field("cells", sp.len());
            rep.field("norm", n);
            rep.field("modular", modular(&phi, &x, &sp));
            rep.field("support_measure", sp.measure_of(&x.support()));
            if x.levels().iter().all(|&(_, v)| v == 1.0) {
                rep.field("fundamental", charfn_norm(&phi, sp.measure_of(&x.support())));
            }
        }
        (None, Some(t)) => {
            if !(t.is_finite() && t > 0.0) {
                return Err(Failure::Input(format!("--measure must be positive and finite, got {t}")));
            }
            let sp = MeasureSpace::finite(vec![t])?;
            let x = SimpleFunction::indicator(&sp, &[0])?;
            rep.field("measure", t);
            rep.field("norm", luxemburg_norm(&phi, &x, &sp));
            rep.field("fundamental", charfn_norm(&phi, t));
        }
        (None, None) => return Err(Failure::Input("give --table FILE or --measure T".into())),
    }
    Ok(rep.render(a.out.format))
}

fn parse_cmd(a: &ParseArgs) -> Outcome {
    let exprs = match (&a.expr, &a.file) {
        (Some(e), _) => vec![orlicz_core::parse(e).map_err(|p| Failure::Input(p.render()))?],
        (None, Some(path)) => parse_fixtures(&read_file(path)?)?,
        (None, None) => return Err(Failure::Input("give an expression or --file FILE".into())),
    };
    let mut rep = Report { rows_in_table: true, ..Default::default() };
    rep.columns = ["expr", "a", "b", "finite_at_b", "label"].map(String::from).to_vec();
    for e in exprs {
        let f = e.lower()?;
        let p = f.params();
        rep.rows.push(vec![format(&e).into(), p.a.into(), p.b.into(), p.finite_at_b.into(), f.label().into()]);
    }
    Ok(rep.render(a.out.format))
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match &cli.cmd {
        Cmd::Ominus(a) => ominus_cmd(a),
        Cmd::Resolve(a) => resolve_cmd(a),
        Cmd::Factorize(a) => factorize_cmd(a),
        Cmd::Verify(a) => verify_cmd(a),
        Cmd::Norm(a) => norm_cmd(a),
        Cmd::Parse(a) => parse_cmd(a),
    };
    match out {
        Ok(text) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Tolerance(m)) => {
            eprintln!("tolerance failure: {m}");
            ExitCode::from(3)
        }
    }
}
