//! Command-line front end. [`run`] takes the argument vector and returns the
//! exit code with everything that would be written to stdout and stderr, so
//! the binary is a thin wrapper and tests need no subprocess.
//!
//! Exit codes: 0 success, 1 usage error, 2 a verification failed, 3 the
//! oracle ran out of terms.

use std::ops::RangeInclusive;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::closedform::{closed_form, SumId};
use crate::numerics::{bound_string, eval_sym, eval_sym_ball, BigReal, PrecisionContext};
use crate::oracle::{oracle_eval, OracleConfig, OracleError};
use crate::relations::{
    all_generators, oracle_sigmas, solve_weight, sum_theorem_symbolic, Provider, RelationError, SolveOptions,
};
use crate::symexpr::SymExpr;

pub const SCHEMA: &str = "eulersum/1";
pub const BITS_ENV: &str = "EULERSUM_DEFAULT_BITS";
const DEFAULT_BITS: u32 = 192;

/// What [`run`] produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Parser)]
#[command(name = "eulersum", version, about = "Closed forms and certified numerics for Euler-type sums")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed form of one sum and its certified value.
    Eval {
        #[command(flatten)]
        sum: SumArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Direct summation with a certified tail.
    Oracle {
        #[command(flatten)]
        sum: SumArgs,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long = "max-terms", default_value_t = 10_000_000)]
        max_terms: u64,
    },
    /// Check closed forms, the sigma-sum theorem and the relations against the oracle.
    Verify {
        /// Restrict to one family.
        #[arg(long)]
        family: Option<String>,
        /// Weight or inclusive range `lo..hi`.
        #[arg(long, default_value = "3..10")]
        weight: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long = "max-terms", default_value_t = 10_000_000)]
        max_terms: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Solve the linear system among the sigma sums of one weight.
    Solve {
        #[arg(long)]
        weight: u32,
        /// Also use the split and lambda relation families.
        #[arg(long)]
        all_families: bool,
        /// Inject the sigma(w-3, 3) closed form as a known value.
        #[arg(long)]
        with_sigma_even_3: bool,
        /// Oracle tolerance for the residual checks.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long = "max-terms", default_value_t = 10_000_000)]
        max_terms: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate one family over a parameter range.
    Table {
        #[command(flatten)]
        sum: SumArgs,
        /// Inclusive range `lo..hi` of the parameter left unset.
        #[arg(long)]
        range: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
struct SumArgs {
    #[arg(long)]
    family: Option<String>,
    /// Full id such as `sigma(3,2)`, instead of --family and parameters.
    #[arg(long)]
    id: Option<String>,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long)]
    t: Option<u32>,
    #[arg(long)]
    a: Option<u32>,
    #[arg(long)]
    b: Option<u32>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    p: Option<u32>,
}

#[derive(Debug, Args)]
struct Common {
    /// Working precision; defaults to $EULERSUM_DEFAULT_BITS or 192.
    #[arg(long)]
    bits: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Same as `--format pretty`.
    #[arg(long)]
    pretty: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Pretty,
}

impl Common {
    fn format(&self) -> Format {
        if self.pretty {
            Format::Pretty
        } else {
            self.format
        }
    }

    fn context(&self, env_bits: Option<&str>) -> Result<PrecisionContext, Failure> {
        let bits = match (self.bits, env_bits) {
            (Some(b), _) => b,
            (None, Some(v)) => v
                .trim()
                .parse()
                .map_err(|_| Failure::usage(format!("{BITS_ENV}={v} is not a bit count")))?,
            (None, None) => DEFAULT_BITS,
        };
        PrecisionContext::with_bits(bits).map_err(|_| Failure::usage(format!("--bits must be at least 64, got {bits}")))
    }
}

/// A non-success result carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
    stdout: Option<Value>,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: 1, message: message.into(), stdout: None }
    }
}

impl From<RelationError> for Failure {
    fn from(e: RelationError) -> Failure {
        match e {
            RelationError::Oracle(o) => o.into(),
            other => Failure::usage(other.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Failure {
        match e {
            OracleError::BudgetExhausted { terms, bound } => Failure {
                code: 3,
                message: e.to_string(),
                stdout: Some(json!({
                    "schema": SCHEMA,
                    "error": "budget_exhausted",
                    "terms": terms,
                    "bound": format!("{bound:.3e}"),
                })),
            },
            other => Failure::usage(other.to_string()),
        }
    }
}

fn parse_range(s: &str) -> Result<RangeInclusive<u32>, Failure> {
    let bad = || Failure::usage(format!("expected `n` or `lo..hi`, got `{s}`"));
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo.trim().parse().map_err(|_| bad())?, hi.trim_start_matches('=').trim().parse().map_err(|_| bad())?),
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

/// Canonical family name, case-insensitively.
fn family_name(name: &str) -> Result<&'static str, Failure> {
    const NAMES: [&str; 11] =
        ["J", "Jbar", "sigma", "h", "Z", "HoddOverOdd", "EulerStar", "AltEulerStar", "ZetaStar", "AltTildeH", "E"];
    NAMES
        .iter()
        .copied()
        .find(|n| n.eq_ignore_ascii_case(name))
        .ok_or_else(|| Failure::usage(format!("unknown family `{name}`; expected one of {}", NAMES.join(", "))))
}

/// Parameter names of a family in CLI order.
fn family_params(family: &str) -> &'static [&'static str] {
    match family {
        "J" | "Jbar" | "EulerStar" => &["b"],
        "sigma" => &["s", "t"],
        "h" => &["q"],
        "ZetaStar" => &["q", "p"],
        "E" => &["p", "q"],
        _ => &["a"],
    }
}

fn build_id(family: &str, values: &[u32]) -> SumId {
    match (family, values) {
        ("J", [b]) => SumId::J(*b),
        ("Jbar", [b]) => SumId::Jbar(*b),
        ("EulerStar", [b]) => SumId::EulerStar(*b),
        ("sigma", [s, t]) => SumId::Sigma(*s, *t),
        ("h", [q]) => SumId::HOverOdd(*q),
        ("ZetaStar", [q, p]) => SumId::ZetaStar(*q, *p),
        ("E", [p, q]) => SumId::E(*p, *q),
        ("Z", [a]) => SumId::Z(*a),
        ("HoddOverOdd", [a]) => SumId::HoddOverOdd(*a),
        ("AltEulerStar", [a]) => SumId::AltEulerStar(*a),
        ("AltTildeH", [a]) => SumId::AltTildeH(*a),
        _ => unreachable!("parameter count checked by caller"),
    }
}

impl SumArgs {
    fn given(&self, name: &str) -> Option<u32> {
        match name {
            "s" => self.s,
            "t" => self.t,
            "a" => self.a,
            "b" => self.b,
            "q" => self.q,
            "p" => self.p,
            _ => None,
        }
    }

    fn family(&self) -> Result<&'static str, Failure> {
        family_name(self.family.as_deref().ok_or_else(|| Failure::usage("--family or --id is required"))?)
    }

    fn sum_id(&self) -> Result<SumId, Failure> {
        let id = match &self.id {
            Some(text) => text.parse::<SumId>().map_err(Failure::usage)?,
            None => {
                let family = self.family()?;
                let values = family_params(family)
                    .iter()
                    .map(|n| self.given(n).ok_or_else(|| Failure::usage(format!("family {family} needs --{n}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                build_id(family, &values)
            }
        };
        id.validate().map_err(|e| Failure::usage(e.to_string()))?;
        Ok(id)
    }

    /// Ids obtained by sweeping the single unset parameter over `range`.
    fn sweep(&self, range: RangeInclusive<u32>) -> Result<Vec<SumId>, Failure> {
        let family = self.family()?;
        let names = family_params(family);
        let free: Vec<&str> = names.iter().copied().filter(|n| self.given(n).is_none()).collect();
        let [free] = free[..] else {
            return Err(Failure::usage(format!(
                "table over {family} needs exactly one of --{} unset",
                names.join(", --")
            )));
        };
        range
            .map(|v| {
                let values: Vec<u32> = names.iter().map(|n| if *n == free { v } else { self.given(n).unwrap() }).collect();
                let id = build_id(family, &values);
                id.validate().map_err(|e| Failure::usage(e.to_string()))?;
                Ok(id)
            })
            .collect()
    }
}

fn params_json(id: SumId) -> Value {
    Value::Object(id.params().into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect())
}

fn oracle_config(tol: f64, max_terms: u64, ctx: &PrecisionContext) -> Result<OracleConfig, Failure> {
    let cfg = OracleConfig { target_tolerance: tol, max_terms, ..OracleConfig::default() };
    cfg.validate(ctx).map_err(|e| Failure::usage(e.to_string()))?;
    Ok(cfg)
}

fn closed_form_of(id: SumId) -> Result<Option<SymExpr>, Failure> {
    closed_form(id).map_err(|e| Failure::usage(e.to_string()))
}

fn value_of(e: &SymExpr, ctx: &PrecisionContext) -> Result<BigReal, Failure> {
    eval_sym(e, ctx).map_err(|err| Failure { code: 1, message: err.to_string(), stdout: None })
}

fn cmd_eval(sum: &SumArgs, ctx: &PrecisionContext) -> Result<Value, Failure> {
    let id = sum.sum_id()?;
    let expr = closed_form_of(id)?.ok_or_else(|| Failure::usage(format!("no closed form is known for {id}")))?;
    let v = value_of(&expr, ctx)?;
    Ok(json!({
        "schema": SCHEMA,
        "command": "eval",
        "id": id.to_string(),
        "family": id.family(),
        "params": params_json(id),
        "weight": id.weight(),
        "bits": ctx.working_bits(),
        "symbolic": expr,
        "symbolic_text": expr.canonical_string(),
        "value": v.certified_string(),
        "bound": bound_string(&v.bound(), 3),
    }))
}

fn cmd_oracle(sum: &SumArgs, ctx: &PrecisionContext, cfg: &OracleConfig) -> Result<Value, Failure> {
    let id = sum.sum_id()?;
    let r = oracle_eval(id, cfg, ctx)?;
    Ok(json!({
        "schema": SCHEMA,
        "command": "oracle",
        "id": id.to_string(),
        "family": id.family(),
        "params": params_json(id),
        "bits": ctx.working_bits(),
        "tolerance": format!("{:e}", cfg.target_tolerance),
        "value": r.value.certified_string(),
        "bound": bound_string(&r.achieved_bound, 3),
        "terms": r.terms_used,
    }))
}

/// One line of a verification report.
fn check(kind: &str, subject: String, residual: f64, tol: f64, extra: Value) -> Value {
    let mut v = json!({
        "kind": kind,
        "subject": subject,
        "residual": format!("{residual:.3e}"),
        "pass": residual <= tol,
    });
    if let (Value::Object(m), Value::Object(x)) = (&mut v, extra) {
        m.extend(x);
    }
    v
}

fn cmd_verify(
    family: Option<&str>,
    weights: RangeInclusive<u32>,
    ctx: &PrecisionContext,
    tol: f64,
    max_terms: u64,
) -> Result<Value, Failure> {
    let family = family.map(family_name).transpose()?;
    // the oracle works well below the tolerance it is judged against
    let cfg = oracle_config((tol * 1e-3).max(2f64.powi(-(ctx.target_bits() as i32) + 1)), max_terms, ctx)?;
    let ids: Vec<SumId> = SumId::enumerate(*weights.end())
        .into_iter()
        .filter(|id| weights.contains(&id.weight()) && family.is_none_or(|f| id.family() == f))
        .collect();
    let forms: Vec<(SumId, SymExpr)> = ids
        .iter()
        .filter_map(|id| closed_form(*id).ok().flatten().map(|e| (*id, e)))
        .collect();

    let mut checks: Vec<Value> = forms
        .par_iter()
        .map(|(id, expr)| -> Result<Value, OracleError> {
            let r = oracle_eval(*id, &cfg, ctx)?;
            let diff = eval_sym_ball(expr, ctx).sub(&r.value);
            Ok(check("closed_form", id.to_string(), diff.to_f64().abs(), tol, json!({ "weight": id.weight() })))
        })
        .collect::<Result<_, _>>()?;

    if family.is_none() || family == Some("sigma") {
        let sigma_weights: Vec<u32> = weights.clone().filter(|w| *w >= 3).collect();
        let per_weight: Vec<Vec<Value>> = sigma_weights
            .par_iter()
            .map(|&w| -> Result<Vec<Value>, Failure> {
                let values = oracle_sigmas(w, ctx, &cfg)?;
                let total = values.values().fold(BigReal::zero(ctx.working_bits()), |acc, v| acc.add(v));
                let target = crate::closedform::sigma_sum_rhs(w as i64).expect("w >= 3");
                let diff = total.sub(&eval_sym_ball(&target, ctx));
                let (symbolic_ok, path) = sum_theorem_symbolic(w)?;
                let mut out = vec![check(
                    "sum_theorem",
                    format!("weight {w}"),
                    diff.to_f64().abs(),
                    tol,
                    json!({ "weight": w, "symbolic_ok": symbolic_ok, "path": path.as_str() }),
                )];
                for g in all_generators(w as i64) {
                    let rel = g.relation()?;
                    let r = rel.residual_num(&values, ctx).expect("all sigma values present");
                    out.push(check("relation", g.to_string(), r.to_f64().abs(), tol, json!({ "weight": w })));
                }
                Ok(out)
            })
            .collect::<Result<_, _>>()?;
        checks.extend(per_weight.into_iter().flatten());
    }

    let failed = checks.iter().filter(|c| c["pass"] == json!(false)).count();
    let report = json!({
        "schema": SCHEMA,
        "command": "verify",
        "bits": ctx.working_bits(),
        "tolerance": format!("{tol:e}"),
        "weights": [weights.start(), weights.end()],
        "family": family,
        "checks": checks,
        "passed": checks.len() - failed,
        "failed": failed,
        "ok": failed == 0,
    });
    if failed > 0 {
        return Err(Failure { code: 2, message: format!("{failed} check(s) outside tolerance {tol:e}"), stdout: Some(report) });
    }
    Ok(report)
}

fn cmd_solve(
    w: u32,
    all_families: bool,
    with_sigma_even_3: bool,
    ctx: &PrecisionContext,
    cfg: OracleConfig,
) -> Result<Value, Failure> {
    let mut providers = Provider::DEFAULT.to_vec();
    if with_sigma_even_3 {
        providers.push(Provider::SigmaEven3);
    }
    let opts = SolveOptions { providers, all_families, residuals: Some((*ctx, cfg)) };
    let report = solve_weight(w, &opts)?;
    let mut v = report.to_json();
    if let Value::Object(m) = &mut v {
        m.insert("schema".into(), json!(SCHEMA));
        m.insert("command".into(), json!("solve"));
        m.insert("bits".into(), json!(ctx.working_bits()));
        let zero = report.resubstitution().iter().all(|(_, r)| r.is_zero());
        m.insert("resubstitution_zero".into(), json!(zero));
    }
    if !report.inconsistent.is_empty() || report.cross_checks.iter().any(|c| !c.agrees) {
        return Err(Failure { code: 2, message: format!("weight {w} system is inconsistent"), stdout: Some(v) });
    }
    Ok(v)
}

fn cmd_table(sum: &SumArgs, range: &str, ctx: &PrecisionContext) -> Result<Value, Failure> {
    let ids = sum.sweep(parse_range(range)?)?;
    let cfg = oracle_config(1e-20_f64.max(2f64.powi(-(ctx.target_bits() as i32) + 1)), 10_000_000, ctx)?;
    let rows = ids
        .par_iter()
        .map(|id| -> Result<Value, Failure> {
            let form = closed_form_of(*id)?;
            let (symbolic, value, source) = match &form {
                Some(e) => (json!(e.canonical_string()), value_of(e, ctx)?, "closed_form"),
                None => (Value::Null, oracle_eval(*id, &cfg, ctx)?.value, "oracle"),
            };
            Ok(json!({
                "id": id.to_string(),
                "params": params_json(*id),
                "symbolic": symbolic,
                "numeric": value.certified_string(),
                "bound": bound_string(&value.bound(), 3),
                "source": source,
            }))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(json!({
        "schema": SCHEMA,
        "command": "table",
        "family": sum.family()?,
        "bits": ctx.working_bits(),
        "rows": rows,
    }))
}

fn params_text(params: &Value) -> String {
    params
        .as_object()
        .map(|m| m.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(","))
        .unwrap_or_default()
}

fn text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn render_tsv(v: &Value) -> String {
    match v["command"].as_str() {
        Some("table") => {
            let mut out = String::from("params\tsymbolic\tnumeric\tbound\n");
            for row in v["rows"].as_array().into_iter().flatten() {
                out += &format!(
                    "{}\t{}\t{}\t{}\n",
                    params_text(&row["params"]),
                    text(&row["symbolic"]),
                    text(&row["numeric"]),
                    text(&row["bound"])
                );
            }
            out
        }
        Some("verify") => {
            let mut out = String::from("kind\tsubject\tresidual\tpass\n");
            for c in v["checks"].as_array().into_iter().flatten() {
                out += &format!("{}\t{}\t{}\t{}\n", text(&c["kind"]), text(&c["subject"]), text(&c["residual"]), c["pass"]);
            }
            out
        }
        Some("eval") => format!(
            "params\tsymbolic\tnumeric\tbound\n{}\t{}\t{}\t{}\n",
            params_text(&v["params"]),
            text(&v["symbolic_text"]),
            text(&v["value"]),
            text(&v["bound"])
        ),
        Some("oracle") => format!(
            "params\tnumeric\tbound\tterms\n{}\t{}\t{}\t{}\n",
            params_text(&v["params"]),
            text(&v["value"]),
            text(&v["bound"]),
            v["terms"]
        ),
        _ => {
            let mut out = String::from("id\tsymbolic\n");
            for (id, e) in v["solved"].as_object().into_iter().flatten() {
                let expr: SymExpr = serde_json::from_value(e.clone()).unwrap_or_else(|_| SymExpr::zero());
                out += &format!("{id}\t{}\n", expr.canonical_string());
            }
            out
        }
    }
}

fn render_pretty(v: &Value) -> String {
    match v["command"].as_str() {
        Some("eval") => format!(
            "{} = {}\n  = {} (+/- {})\n",
            text(&v["id"]),
            text(&v["symbolic_text"]),
            text(&v["value"]),
            text(&v["bound"])
        ),
        Some("oracle") => format!(
            "{} = {} (+/- {}, {} terms)\n",
            text(&v["id"]),
            text(&v["value"]),
            text(&v["bound"]),
            v["terms"]
        ),
        Some("verify") => {
            let mut out = String::new();
            for c in v["checks"].as_array().into_iter().flatten() {
                let mark = if c["pass"] == json!(true) { "ok  " } else { "FAIL" };
                out += &format!("{mark} {:<12} {:<20} {}\n", text(&c["kind"]), text(&c["subject"]), text(&c["residual"]));
            }
            out += &format!("{} passed, {} failed\n", v["passed"], v["failed"]);
            out
        }
        Some("table") => {
            let mut out = String::new();
            for row in v["rows"].as_array().into_iter().flatten() {
                out += &format!("{:<16} {}\n{:<16} = {}\n", text(&row["id"]), text(&row["symbolic"]), "", text(&row["numeric"]));
            }
            out
        }
        _ => {
            let mut out = format!("weight {}: rank {}\n", v["weight"], v["rank"]);
            for (id, e) in v["solved"].as_object().into_iter().flatten() {
                let expr: SymExpr = serde_json::from_value(e.clone()).unwrap_or_else(|_| SymExpr::zero());
                out += &format!("  {id} = {}\n", expr.canonical_string());
            }
            for id in v["unresolved"].as_array().into_iter().flatten() {
                out += &format!("  {} unresolved\n", text(id));
            }
            out
        }
    }
}

fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(v).expect("json renders")),
        Format::Tsv => render_tsv(v),
        Format::Pretty => render_pretty(v),
    }
}

fn dispatch(cli: Cli, env_bits: Option<&str>) -> (Format, Result<Value, Failure>) {
    match cli.command {
        Command::Eval { sum, common } => {
            let f = common.format();
            (f, common.context(env_bits).and_then(|ctx| cmd_eval(&sum, &ctx)))
        }
        Command::Oracle { sum, common, tol, max_terms } => {
            let f = common.format();
            let result = common.context(env_bits).and_then(|ctx| {
                let cfg = oracle_config(tol, max_terms, &ctx)?;
                cmd_oracle(&sum, &ctx, &cfg)
            });
            (f, result)
        }
        Command::Verify { family, weight, tol, max_terms, common } => {
            let f = common.format();
            let result = common.context(env_bits).and_then(|ctx| {
                if !(tol.is_finite() && tol > 0.0) {
                    return Err(Failure::usage(format!("--tol must be positive, got {tol}")));
                }
                cmd_verify(family.as_deref(), parse_range(&weight)?, &ctx, tol, max_terms)
            });
            (f, result)
        }
        Command::Solve { weight, all_families, with_sigma_even_3, tol, max_terms, common } => {
            let f = common.format();
            let result = common.context(env_bits).and_then(|ctx| {
                let cfg = oracle_config(tol, max_terms, &ctx)?;
                cmd_solve(weight, all_families, with_sigma_even_3, &ctx, cfg)
            });
            (f, result)
        }
        Command::Table { sum, range, common } => {
            let f = common.format();
            (f, common.context(env_bits).and_then(|ctx| cmd_table(&sum, &range, &ctx)))
        }
    }
}

/// Run the command line `argv` (program name first) with `env_bits` standing
/// in for `$EULERSUM_DEFAULT_BITS`.
pub fn run_with_env<I, T>(argv: I, env_bits: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: rendered, stderr: String::new() }
                }
                _ => Outcome { code: 1, stdout: String::new(), stderr: rendered },
            };
        }
    };
    let (format, result) = dispatch(cli, env_bits);
    match result {
        Ok(v) => Outcome { code: 0, stdout: render(&v, format), stderr: String::new() },
        Err(f) => Outcome {
            code: f.code,
            stdout: f.stdout.map(|v| render(&v, format)).unwrap_or_default(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

/// [`run_with_env`] reading the process environment.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let env = std::env::var(BITS_ENV).ok();
    run_with_env(argv, env.as_deref())
}
