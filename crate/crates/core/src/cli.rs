//! Command-line front end: `eval`, `verify`, `table` and `chars`.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 evaluation error.

use crate::characters::{characters_mod, CharacterRow, DirichletCharacter};
use crate::classical;
use crate::error::Error;
use crate::numkernel::{complex_gamma, qbracket, qpow, Evaluation, QParams, SumConfig, C64};
use crate::qfamily::{self, ExponentConvention, WeightVector};
use crate::verify::{cx_value, run_suite, Suite, VerifyConfig};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Homogeneous,
    Printed,
}

impl From<ConventionArg> for ExponentConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Homogeneous => ExponentConvention::Homogeneous,
            ConventionArg::Printed => ExponentConvention::Printed,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "qzeta", version, about = "q-Bernoulli numbers, q-zeta and q-L functions, and their identity checks")]
pub struct Cli {
    /// Output format (default: json for verify, plain otherwise).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Exponent convention for q-series (verify: restricts convention-dependent checks).
    #[arg(long, global = true, value_enum)]
    convention: Option<ConventionArg>,
    /// Absolute and relative summation tolerance.
    #[arg(long, global = true, env = "QZETA_TOL")]
    tol: Option<f64>,
    /// Per-index term budget for q-series.
    #[arg(long, global = true)]
    max_terms: Option<usize>,
    /// Seed for randomized verification points.
    #[arg(long, global = true)]
    rng_seed: Option<u64>,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one function.
    Eval {
        /// Function name; `list` prints the registry.
        #[arg(long = "fn")]
        name: String,
        #[command(flatten)]
        params: FnParams,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Tabulate a function over one swept parameter.
    Table {
        #[arg(long = "fn")]
        name: String,
        /// Parameter to sweep: s, q, x, w, w1 or n.
        #[arg(long)]
        sweep: String,
        #[arg(long, allow_hyphen_values = true)]
        start: f64,
        #[arg(long, allow_hyphen_values = true)]
        stop: f64,
        #[arg(long)]
        count: usize,
        #[command(flatten)]
        params: FnParams,
    },
    /// List the Dirichlet characters of a modulus.
    Chars {
        #[arg(long)]
        f: u64,
        /// Also print chi(0..f-1).
        #[arg(long)]
        values: bool,
    },
}

/// Named inputs. Complex entries are written `a+bi`.
#[derive(Args, Debug, Clone, Default)]
pub struct FnParams {
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    w: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    w1: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Character modulus.
    #[arg(long)]
    f: Option<u64>,
    /// Character index within the modulus (0 is principal).
    #[arg(long)]
    chi: Option<usize>,
    /// Weights w_1..w_r, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    weights: Option<Vec<String>>,
    /// Barnes parameters a_1..a_r, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    a: Option<Vec<String>>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Eval(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(m) => CliError::Usage(m),
            e => CliError::Eval(e),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `1.5`, `-2i`, `1.5+2i`, `1e-3-4.5e2i`.
pub fn parse_complex(text: &str) -> std::result::Result<C64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse '{text}' as a number (expected a or a+bi)");
    let finite = |z: C64| if z.re.is_finite() && z.im.is_finite() { Ok(z) } else { Err(bad()) };
    if let Some(body) = t.strip_suffix('i') {
        // split at the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
                split = Some(i);
                break;
            }
        }
        let im_of = |s: &str| -> std::result::Result<f64, String> {
            match s {
                "" | "+" => Ok(1.0),
                "-" => Ok(-1.0),
                _ => s.parse::<f64>().map_err(|_| bad()),
            }
        };
        return match split {
            Some(i) => finite(C64::new(body[..i].parse::<f64>().map_err(|_| bad())?, im_of(&body[i..])?)),
            None => finite(C64::new(0.0, im_of(body)?)),
        };
    }
    finite(C64::new(t.parse::<f64>().map_err(|_| bad())?, 0.0))
}

/// `a+bi` with shortest round-trip floats; purely real values print as `a`.
pub fn format_complex(z: C64) -> String {
    if z.im == 0.0 {
        format!("{:?}", z.re)
    } else if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        format!("{:?}-{:?}i", z.re, -z.im)
    } else {
        format!("{:?}+{:?}i", z.re, z.im)
    }
}

fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Clone, Debug)]
enum Val {
    Complex(C64),
    Rational(BigRational),
    Real(f64),
}

impl Val {
    fn text(&self) -> String {
        match self {
            Val::Complex(z) => format_complex(*z),
            Val::Rational(r) => format_rational(r),
            Val::Real(x) => format!("{x:?}"),
        }
    }

    fn json(&self) -> Value {
        match self {
            Val::Complex(z) => cx_value(*z),
            Val::Rational(r) => json!(format_rational(r)),
            Val::Real(x) => json!(x),
        }
    }
}

struct Output {
    value: Val,
    terms_used: usize,
    tail_bound: f64,
}

impl Output {
    fn exact(v: Val) -> Self {
        Output { value: v, terms_used: 0, tail_bound: 0.0 }
    }

    fn eval(e: Evaluation) -> Self {
        Output { value: Val::Complex(e.value), terms_used: e.terms_used, tail_bound: e.tail_bound }
    }

    fn c(z: C64) -> Self {
        Output::exact(Val::Complex(z))
    }
}

struct Ctx {
    sum: SumConfig,
    conv: ExponentConvention,
}

pub const FUNCTIONS: &[&str] = &[
    "qbracket",
    "qpow",
    "gamma",
    "binomial",
    "bernoulli_number",
    "bernoulli_poly",
    "gen_bernoulli_number",
    "gen_bernoulli_poly",
    "barnes_bernoulli",
    "hurwitz_zeta",
    "riemann_zeta",
    "dirichlet_l",
    "two_variable_l",
    "barnes_zeta_rank_one",
    "barnes_zeta_series",
    "carlitz_beta_number",
    "carlitz_beta_poly",
    "unit_beta_number",
    "unit_beta_poly",
    "unit_gen_beta_number",
    "unit_gen_beta_poly",
    "changhee_beta_number",
    "changhee_beta_poly",
    "changhee_beta_explicit",
    "changhee_beta_series",
    "gen_changhee_beta_poly",
    "gen_changhee_beta_distribution",
    "multiple_changhee_beta",
    "zeta_q",
    "zeta_q_correction",
    "zeta_q_multiple",
    "l_q",
    "l_q_multiple",
    "eq15_as_printed",
    "eq15_second_line",
];

impl FnParams {
    fn need<T: Clone>(v: &Option<T>, name: &str) -> CliResult<T> {
        v.clone().ok_or_else(|| CliError::Usage(format!("missing --{name}")))
    }

    fn cx(&self, v: &Option<String>, name: &str) -> CliResult<C64> {
        parse_complex(&Self::need(v, name)?).map_err(CliError::Usage)
    }

    fn s(&self) -> CliResult<C64> {
        self.cx(&self.s, "s")
    }
    fn x(&self) -> CliResult<C64> {
        self.cx(&self.x, "x")
    }
    fn w(&self) -> CliResult<C64> {
        self.cx(&self.w, "w")
    }
    fn w1(&self) -> CliResult<C64> {
        self.cx(&self.w1, "w1")
    }
    fn n(&self) -> CliResult<usize> {
        Self::need(&self.n, "n")
    }

    fn real(&self, v: &Option<String>, name: &str) -> CliResult<f64> {
        let z = self.cx(v, name)?;
        if z.im != 0.0 {
            return Err(CliError::Usage(format!("--{name} must be real")));
        }
        Ok(z.re)
    }

    fn qp(&self) -> CliResult<QParams> {
        Ok(QParams::new(self.cx(&self.q, "q")?)?)
    }

    fn chi(&self) -> CliResult<DirichletCharacter> {
        let f = Self::need(&self.f, "f")?;
        let idx = self.chi.unwrap_or(0);
        let all = characters_mod(f)?;
        let n = all.len();
        all.into_iter()
            .nth(idx)
            .ok_or_else(|| CliError::Usage(format!("--chi {idx} out of range: modulus {f} has {n} characters")))
    }

    fn list(&self, v: &Option<Vec<String>>, name: &str) -> CliResult<Vec<C64>> {
        Self::need(v, name)?.iter().map(|t| parse_complex(t).map_err(CliError::Usage)).collect()
    }

    fn weights(&self) -> CliResult<WeightVector> {
        Ok(WeightVector::new(self.list(&self.weights, "weights")?)?)
    }

    fn set(&mut self, param: &str, v: f64) -> CliResult<()> {
        let t = Some(format!("{v:?}"));
        match param {
            "s" => self.s = t,
            "q" => self.q = t,
            "x" => self.x = t,
            "w" => self.w = t,
            "w1" => self.w1 = t,
            "n" => {
                if v < 0.0 || v.fract() != 0.0 {
                    return Err(CliError::Usage(format!("n must be a non-negative integer, got {v}")));
                }
                self.n = Some(v as usize)
            }
            _ => return Err(CliError::Usage(format!("cannot sweep '{param}' (s, q, x, w, w1, n)"))),
        }
        Ok(())
    }
}

fn real_vec(v: &[C64], name: &str) -> CliResult<Vec<f64>> {
    v.iter()
        .map(|z| if z.im == 0.0 { Ok(z.re) } else { Err(CliError::Usage(format!("--{name} entries must be real"))) })
        .collect()
}

fn evaluate(name: &str, p: &FnParams, ctx: &Ctx) -> CliResult<Output> {
    let sc = &ctx.sum;
    let conv = ctx.conv;
    Ok(match name {
        "qbracket" => Output::c(qbracket(p.x()?, &p.qp()?)),
        "qpow" => Output::c(qpow(p.x()?, &p.qp()?)),
        "gamma" => Output::c(complex_gamma(p.s()?)?),
        "binomial" => Output::exact(Val::Real(classical::binomial(p.n()?, FnParams::need(&p.k, "k")?))),
        "bernoulli_number" => Output::exact(Val::Rational(classical::bernoulli_number(p.n()?))),
        "bernoulli_poly" => Output::c(classical::bernoulli_poly(p.n()?, p.x()?)),
        "gen_bernoulli_number" => Output::c(classical::gen_bernoulli_number(&p.chi()?, p.n()?)?),
        "gen_bernoulli_poly" => Output::c(classical::gen_bernoulli_poly(&p.chi()?, p.n()?, p.x()?)?),
        "barnes_bernoulli" => Output::c(classical::barnes_bernoulli(p.n()?, p.x()?, &p.list(&p.a, "a")?)?),
        "hurwitz_zeta" => Output::eval(classical::hurwitz_zeta_eval(p.s()?, p.x()?)?),
        "riemann_zeta" => Output::c(classical::riemann_zeta(p.s()?)?),
        "dirichlet_l" => Output::c(classical::dirichlet_l(p.s()?, &p.chi()?)?),
        "two_variable_l" => Output::c(classical::two_variable_l(p.s()?, p.x()?, &p.chi()?)?),
        "barnes_zeta_rank_one" => {
            let a = p.list(&p.a, "a")?;
            if a.len() != 1 {
                return Err(CliError::Usage("--a takes exactly one value here".into()));
            }
            Output::c(classical::barnes_zeta_rank_one(p.s()?, p.w()?, a[0])?)
        }
        "barnes_zeta_series" => {
            let a = real_vec(&p.list(&p.a, "a")?, "a")?;
            Output::c(classical::barnes_zeta_series(p.s()?, p.real(&p.w, "w")?, &a, classical::BARNES_TOL)?)
        }
        "carlitz_beta_number" => Output::c(qfamily::carlitz_beta_number(p.n()?, &p.qp()?)?),
        "carlitz_beta_poly" => Output::c(qfamily::carlitz_beta_poly(p.n()?, p.x()?, &p.qp()?)?),
        "unit_beta_number" => Output::eval(qfamily::unit_beta_number(p.n()?, &p.qp()?, sc)?),
        "unit_beta_poly" => Output::eval(qfamily::unit_beta_poly(p.n()?, p.x()?, &p.qp()?, sc)?),
        "unit_gen_beta_number" => Output::eval(qfamily::unit_gen_beta_number(p.n()?, &p.chi()?, &p.qp()?, sc)?),
        "unit_gen_beta_poly" => Output::eval(qfamily::unit_gen_beta_poly(p.n()?, p.x()?, &p.chi()?, &p.qp()?, sc)?),
        "changhee_beta_number" => Output::eval(qfamily::changhee_beta_number(p.n()?, &p.qp()?, p.w1()?, sc)?),
        "changhee_beta_poly" => Output::eval(qfamily::changhee_beta_poly(p.n()?, p.w()?, &p.qp()?, p.w1()?, sc)?),
        "changhee_beta_explicit" => Output::c(qfamily::changhee_beta_explicit(p.n()?, p.w()?, &p.qp()?, p.w1()?)?),
        "changhee_beta_series" => Output::eval(qfamily::changhee_beta_series(p.n()?, p.w()?, &p.qp()?, p.w1()?, sc)?),
        "gen_changhee_beta_poly" => {
            Output::eval(qfamily::gen_changhee_beta_poly(p.n()?, p.x()?, &p.chi()?, &p.qp()?, p.w1()?, conv, sc)?)
        }
        "gen_changhee_beta_distribution" => {
            Output::eval(qfamily::gen_changhee_beta_distribution(p.n()?, p.x()?, &p.chi()?, &p.qp()?, p.w1()?, sc)?)
        }
        "multiple_changhee_beta" => {
            let chi = if p.f.is_some() { Some(p.chi()?) } else { None };
            Output::eval(qfamily::multiple_changhee_beta(p.n()?, p.x()?, &p.qp()?, &p.weights()?, chi.as_ref(), conv, sc)?)
        }
        "zeta_q" => Output::eval(qfamily::zeta_q(p.s()?, p.w()?, &p.qp()?, p.w1()?, sc)?),
        "zeta_q_correction" => Output::c(qfamily::zeta_q_correction(p.s()?, &p.qp()?)?),
        "zeta_q_multiple" => Output::eval(qfamily::zeta_q_multiple(p.s()?, p.w()?, &p.qp()?, &p.weights()?, sc)?),
        "l_q" | "L_q" => Output::eval(qfamily::l_q(p.s()?, p.x()?, &p.chi()?, &p.qp()?, p.w1()?, conv, sc)?),
        "l_q_multiple" | "L_q_multiple" => {
            Output::eval(qfamily::l_q_multiple(p.s()?, p.x()?, &p.chi()?, &p.qp()?, &p.weights()?, conv, sc)?)
        }
        "eq15_as_printed" => Output::c(qfamily::eq15_as_printed(p.n()?, p.w()?, &p.qp()?, &p.list(&p.a, "a")?)?),
        "eq15_second_line" => Output::c(qfamily::eq15_second_line(p.n()?, p.w()?, &p.qp()?, &p.list(&p.a, "a")?)?),
        _ => {
            return Err(CliError::Usage(format!(
                "unknown function '{name}'; available: {}",
                FUNCTIONS.join(", ")
            )))
        }
    })
}

fn csv_string(header: &[&str], rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Usage(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Usage(e.to_string()))
}

fn cmd_eval(name: &str, p: &FnParams, ctx: &Ctx, fmt: Format) -> CliResult<String> {
    if name == "list" {
        return Ok(FUNCTIONS.join("\n") + "\n");
    }
    let o = evaluate(name, p, ctx)?;
    Ok(match fmt {
        Format::Plain => format!("value = {}\nterms_used = {}\ntail_bound = {:e}\n", o.value.text(), o.terms_used, o.tail_bound),
        Format::Json => {
            serde_json::to_string_pretty(&json!({
                "fn": name,
                "value": o.value.json(),
                "terms_used": o.terms_used,
                "tail_bound": o.tail_bound,
            }))
            .unwrap_or_default()
                + "\n"
        }
        Format::Csv => csv_string(
            &["fn", "value", "terms_used", "tail_bound"],
            &[vec![name.into(), o.value.text(), o.terms_used.to_string(), format!("{:e}", o.tail_bound)]],
        )?,
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_table(name: &str, sweep: &str, start: f64, stop: f64, count: usize, p: &FnParams, ctx: &Ctx, fmt: Format) -> CliResult<String> {
    if count == 0 {
        return Err(CliError::Usage("--count must be positive".into()));
    }
    let mut rows = Vec::with_capacity(count);
    for i in 0..count {
        let v = if count == 1 { start } else { start + (stop - start) * i as f64 / (count - 1) as f64 };
        let mut q = p.clone();
        q.set(sweep, v)?;
        let o = evaluate(name, &q, ctx)?;
        rows.push((v, o));
    }
    Ok(match fmt {
        Format::Plain => {
            let mut s = format!("{sweep:>12}  value  terms_used\n");
            for (v, o) in &rows {
                s.push_str(&format!("{v:>12}  {}  {}\n", o.value.text(), o.terms_used));
            }
            s
        }
        Format::Csv => {
            let body: Vec<Vec<String>> = rows.iter().map(|(v, o)| vec![format!("{v:?}"), o.value.text(), o.terms_used.to_string()]).collect();
            csv_string(&[sweep, "value", "terms_used"], &body)?
        }
        Format::Json => {
            let arr: Vec<Value> = rows
                .iter()
                .map(|(v, o)| json!({ sweep: v, "value": o.value.json(), "terms_used": o.terms_used }))
                .collect();
            serde_json::to_string_pretty(&json!({ "fn": name, "sweep": sweep, "rows": arr })).unwrap_or_default() + "\n"
        }
    })
}

fn cmd_chars(f: u64, values: bool, fmt: Format) -> CliResult<String> {
    let cs = characters_mod(f)?;
    let rows: Vec<CharacterRow> = cs.iter().map(CharacterRow::from).collect();
    let vals = |c: &DirichletCharacter| (0..f).map(|n| format_complex(c.eval(n as i64))).collect::<Vec<_>>();
    Ok(match fmt {
        Format::Json => {
            let arr: Vec<Value> = rows
                .iter()
                .zip(&cs)
                .map(|(r, c)| {
                    let mut v = serde_json::to_value(r).unwrap_or(Value::Null);
                    if values {
                        v["values"] = json!((0..f).map(|n| cx_value(c.eval(n as i64))).collect::<Vec<_>>());
                    }
                    v
                })
                .collect();
            serde_json::to_string_pretty(&json!({ "modulus": f, "characters": arr })).unwrap_or_default() + "\n"
        }
        Format::Csv => {
            let mut header = vec!["index", "exponents", "order", "conductor", "primitive", "principal"];
            if values {
                header.push("values");
            }
            let body: Vec<Vec<String>> = rows
                .iter()
                .zip(&cs)
                .map(|(r, c)| {
                    let mut v = vec![
                        r.index.to_string(),
                        r.exponents.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" "),
                        r.order.to_string(),
                        r.conductor.to_string(),
                        r.primitive.to_string(),
                        r.principal.to_string(),
                    ];
                    if values {
                        v.push(vals(c).join(" "));
                    }
                    v
                })
                .collect();
            csv_string(&header, &body)?
        }
        Format::Plain => {
            let mut s = format!("modulus {f}: {} characters\n", rows.len());
            for (r, c) in rows.iter().zip(&cs) {
                s.push_str(&format!(
                    "#{:<3} exps={:?} order={} conductor={}{}{}",
                    r.index,
                    r.exponents,
                    r.order,
                    r.conductor,
                    if r.primitive { " primitive" } else { "" },
                    if r.principal { " principal" } else { "" },
                ));
                if values {
                    s.push_str(&format!("  [{}]", vals(c).join(", ")));
                }
                s.push('\n');
            }
            s
        }
    })
}

fn sum_config(cli: &Cli) -> CliResult<SumConfig> {
    let mut sc = SumConfig::default();
    if let Some(t) = cli.tol {
        sc.abs_tol = t;
        sc.rel_tol = t;
    }
    if let Some(m) = cli.max_terms {
        sc.max_terms = m;
    }
    sc.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(sc)
}

fn emit(cli: &Cli, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Usage(e.to_string())),
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> CliResult<i32> {
    let sum = sum_config(cli)?;
    let ctx = Ctx {
        sum,
        conv: cli.convention.map(Into::into).unwrap_or_default(),
    };
    let plain = cli.format.unwrap_or(Format::Plain);
    match &cli.command {
        Command::Eval { name, params } => {
            let text = cmd_eval(name, params, &ctx, plain)?;
            emit(cli, &text, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Table { name, sweep, start, stop, count, params } => {
            let text = cmd_table(name, sweep, *start, *stop, *count, params, &ctx, plain)?;
            emit(cli, &text, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Chars { f, values } => {
            let text = cmd_chars(*f, *values, plain)?;
            emit(cli, &text, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Verify { suite } => {
            let suite: Suite = suite.parse()?;
            let mut vc = VerifyConfig {
                sum,
                convention: cli.convention.map(Into::into),
                ..VerifyConfig::default()
            };
            if let Some(seed) = cli.rng_seed {
                vc.rng_seed = seed;
            }
            let report = run_suite(suite, &vc)?;
            let text = match cli.format.unwrap_or(Format::Json) {
                Format::Json => report.to_json()? + "\n",
                Format::Csv => report.to_csv()?,
                Format::Plain => report.to_plain(),
            };
            emit(cli, &text, stdout)?;
            let s = &report.summary;
            log::info!("{}: {} passed, {} failed, {} expected-fail", report.suite, s.passed, s.failed, s.expected_fail);
            Ok(if report.ok() { EXIT_OK } else { EXIT_VERIFY })
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = if code == 0 { e.render().to_string() } else { e.render().ansi().to_string() };
            if code == 0 {
                let _ = stdout.write_all(text.as_bytes());
            } else {
                let _ = stderr.write_all(text.as_bytes());
            }
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    match dispatch(&cli, stdout) {
        Ok(code) => code,
        Err(CliError::Usage(m)) => {
            let _ = writeln!(stderr, "error: {m}");
            EXIT_USAGE
        }
        Err(CliError::Eval(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_DOMAIN
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["qzeta"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn value_of(plain: &str) -> C64 {
        let line = plain.lines().find(|l| l.starts_with("value = ")).unwrap();
        parse_complex(&line["value = ".len()..]).unwrap()
    }

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("1.5").unwrap(), C64::new(1.5, 0.0));
        assert_eq!(parse_complex("1.5+2i").unwrap(), C64::new(1.5, 2.0));
        assert_eq!(parse_complex("-1e-3-4.5e2i").unwrap(), C64::new(-1e-3, -450.0));
        assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("2.5i").unwrap(), C64::new(0.0, 2.5));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("inf").is_err());
    }

    #[test]
    fn complex_format_round_trips() {
        for z in [C64::new(0.1, -0.3), C64::new(-2.0, 1e-300), C64::new(1.0 / 3.0, 0.0), C64::new(5e20, 7.0)] {
            assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
    }

    #[test]
    fn eval_examples() {
        let (code, out, _) = call(&["eval", "--fn", "qbracket", "--x", "2", "--q", "0.5"]);
        assert_eq!(code, 0);
        assert_eq!(value_of(&out), C64::new(1.5, 0.0));
        let (_, out, _) = call(&["eval", "--fn", "bernoulli_number", "--n", "2"]);
        assert!(out.contains("value = 1/6"));
        let (_, z, _) = call(&["eval", "--fn", "zeta_q", "--s", "0", "--w", "1", "--q", "0.5", "--w1", "1"]);
        let (_, b, _) = call(&["eval", "--fn", "changhee_beta_poly", "--n", "1", "--w", "1", "--q", "0.5", "--w1", "1"]);
        assert!((value_of(&z) + value_of(&b)).norm() < 1e-12);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["eval", "--fn", "nope"]).0, EXIT_USAGE);
        assert_eq!(call(&["eval", "--fn", "zeta_q", "--s", "2"]).0, EXIT_USAGE);
        assert_eq!(call(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(call(&["eval", "--fn", "zeta_q", "--s", "1", "--w", "1", "--q", "0.5", "--w1", "1"]).0, EXIT_DOMAIN);
        let (code, _, err) = call(&["eval", "--fn", "zeta_q", "--s", "2", "--w", "1", "--q", "1.5", "--w1", "1"]);
        assert_eq!(code, EXIT_DOMAIN);
        assert!(err.contains("q"));
        assert_eq!(call(&["--tol", "-1", "eval", "--fn", "qpow", "--x", "1", "--q", "0.5"]).0, EXIT_USAGE);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn table_of_bernoulli_numbers() {
        let (code, out, _) = call(&["--format", "csv", "table", "--fn", "bernoulli_number", "--sweep", "n", "--start", "0", "--stop", "12", "--count", "13"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 14);
        assert_eq!(lines[3], "2.0,1/6,0");
        assert_eq!(lines[13], "12.0,-691/2730,0");
    }

    #[test]
    fn chars_listing() {
        let (code, out, _) = call(&["chars", "--f", "8"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("modulus 8: 4 characters"));
        let (_, js, _) = call(&["--format", "json", "chars", "--f", "5", "--values"]);
        let v: Value = serde_json::from_str(&js).unwrap();
        assert_eq!(v["characters"].as_array().unwrap().len(), 4);
    }
}
