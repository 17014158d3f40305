use std::io::Write;
use std::process::ExitCode;

use additive_basis::analytics::{
    alpha_threshold, block_family, primorial_family, sweep_c, verify_prime_sum_bounds,
};
use additive_basis::dessentialize::{
    audit_dessentialization, audit_elementary_order_bounds, audit_essential_count_bound,
    audit_order_sandwich, construct_prescribed, delta_bound, dessentialize_elementary,
    dessentialize_general, elementary_set, primitive_set,
};
use additive_basis::essentials::essential_elements;
use additive_basis::expr::parse_set_expr_with_cap;
use additive_basis::order::{basicity, order, order_at_most, Basicity};
use additive_basis::progression::{audit_reservoir_bound, essential_subsets, raison_profile};
use additive_basis::report::BoundReport;
use additive_basis::suite::{run_oracle_check, run_property_suite, DEFAULT_SEED};
use additive_basis::{Eps, Error};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

const USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "basis", version, about = "Invariants of additive bases given as eventually periodic sets")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Opts {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Fail when the order exceeds this value.
    #[arg(long, global = true)]
    hmax: Option<u32>,
    /// Largest modulus any constructed set may have.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    modulus_cap: u64,
    /// Float precision for the analytic checks; only binary64 (53) is available.
    #[arg(long, global = true, default_value_t = 53)]
    precision_bits: u32,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Count sums of at most h elements instead of exactly h.
    #[arg(long, global = true)]
    at_most: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis of a set expression, e.g. "6N U {2,3}".
    Analyze { expr: String },
    /// Build a named family and analyze it.
    Family {
        #[arg(value_enum)]
        kind: FamilyKind,
        /// Index n, or comma-separated counts for `prescribed`.
        params: String,
    },
    /// Compare C_{h_n} with the constant for 2 <= n <= N.
    Sweep {
        n_max: usize,
        /// Also print every row as a tab-separated table.
        #[arg(long)]
        table: bool,
    },
    /// Check the prime-sum lower bounds on [LO, HI].
    VerifyPrimeSums { lo: usize, hi: usize },
    /// Cross-check the exact engine against the brute-force oracle.
    OracleCheck {
        #[arg(long, default_value_t = 100)]
        iters: usize,
    },
    /// Run the randomized property suite.
    Suite {
        #[arg(long, default_value_t = 500)]
        count: usize,
    },
    /// Order past which s <= α·sqrt(h / log h).
    Alpha { alpha: f64 },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyKind {
    #[value(alias = "an")]
    Primorial,
    #[value(alias = "xn")]
    Block,
    Prescribed,
}

/// A finished command: its report and whether every verdict passed.
struct Outcome {
    report: Value,
    pass: bool,
}

enum Failure {
    Usage(String),
    Analysis(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Analysis(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = &cli.opts;
    if opts.precision_bits == 0 || opts.precision_bits > 53 {
        eprintln!("error: --precision-bits must be in 1..=53 (binary64)");
        return ExitCode::from(USAGE);
    }
    match run(&cli.command, opts) {
        Ok(out) => {
            emit(&out.report, opts.format);
            ExitCode::from(if out.pass { 0 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
        Err(Failure::Analysis(e)) => {
            emit(&json!({ "error": e.to_string() }), opts.format);
            ExitCode::from(1)
        }
    }
}

fn run(command: &Command, opts: &Opts) -> Result<Outcome, Failure> {
    match command {
        Command::Analyze { expr } => {
            let s = parse_set_expr_with_cap(expr, opts.modulus_cap).map_err(|e| match e {
                Error::Syntax { .. } | Error::ZeroModulus { .. } => Failure::Usage(e.to_string()),
                e => Failure::Analysis(e),
            })?;
            analyze(&s, opts)
        }
        Command::Family { kind, params } => {
            let s = match kind {
                FamilyKind::Primorial => primorial_family(index(params)?, opts.modulus_cap)?,
                FamilyKind::Block => block_family(index(params)?, opts.modulus_cap)?,
                FamilyKind::Prescribed => construct_prescribed(&counts(params)?, opts.modulus_cap)?,
            };
            analyze(&s, opts)
        }
        Command::Sweep { n_max, table } => {
            let r = sweep_c(*n_max)?;
            if *table && opts.format == Format::Text {
                let mut table = String::from("n\th_n\tC_h\tverdict\n");
                for row in &r.rows {
                    let verdict = if r.ties.contains(&row.n) {
                        "tie"
                    } else if row.margin < 0.0 {
                        "exceeds"
                    } else {
                        "below"
                    };
                    table.push_str(&format!("{}\t{}\t{:.12}\t{verdict}\n", row.n, row.h, row.c));
                }
                write_out(&table);
            }
            let mut report = serde_json::to_value(&r).expect("serializable");
            if *table && opts.format == Format::Json {
                report["rows"] = serde_json::to_value(&r.rows).expect("serializable");
            }
            Ok(Outcome { pass: r.holds(), report })
        }
        Command::VerifyPrimeSums { lo, hi } => {
            let r = verify_prime_sum_bounds(*lo, *hi)?;
            let mut report = serde_json::to_value(&r).expect("serializable");
            // the raw lists can run to 10^5 entries; ranges say the same
            report["first_violations"] = json!(ranges(&r.first_violations));
            report["second_violations"] = json!(ranges(&r.second_violations));
            Ok(Outcome { pass: r.holds(), report })
        }
        Command::OracleCheck { iters } => {
            let r = run_oracle_check(opts.seed, *iters);
            Ok(Outcome { pass: r.holds(), report: serde_json::to_value(&r).expect("serializable") })
        }
        Command::Suite { count } => {
            let r = run_property_suite(opts.seed, *count);
            Ok(Outcome { pass: r.holds(), report: serde_json::to_value(&r).expect("serializable") })
        }
        Command::Alpha { alpha } => {
            let t = alpha_threshold(*alpha)?;
            Ok(Outcome { pass: true, report: json!({ "alpha": alpha, "threshold": t }) })
        }
    }
}

fn index(params: &str) -> Result<usize, Failure> {
    params
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("expected a family index, got {params:?}")))
}

fn counts(params: &str) -> Result<Vec<usize>, Failure> {
    params
        .split(',')
        .map(|c| c.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("expected comma-separated counts, got {params:?}")))
}

fn ranges(xs: &[u64]) -> Vec<[u64; 2]> {
    let mut out: Vec<[u64; 2]> = Vec::new();
    for &x in xs {
        match out.last_mut() {
            Some(r) if r[1] + 1 == x => r[1] = x,
            _ => out.push([x, x]),
        }
    }
    out
}

fn set_value(s: &Eps) -> Value {
    serde_json::to_value(s).expect("serializable")
}

fn analyze(s: &Eps, opts: &Opts) -> Result<Outcome, Failure> {
    let mut report = Map::new();
    report.insert("set".into(), set_value(s));
    report.insert("gcd_of_differences".into(), json!(s.gcd_of_differences()));

    let cert = match basicity(s) {
        Basicity::Basis(cert) => cert,
        Basicity::NotBasis(proof) => {
            report.insert("basis".into(), json!(false));
            report.insert("warning".into(), json!("not an additive basis"));
            report.insert("proof".into(), serde_json::to_value(proof).expect("serializable"));
            if let Ok(p) = raison_profile(s) {
                report.insert("progression".into(), serde_json::to_value(p).expect("serializable"));
            }
            return Ok(Outcome { report: Value::Object(report), pass: false });
        }
    };
    report.insert("basis".into(), json!(true));
    let cert = if opts.at_most { order_at_most(s)? } else { cert };
    report.insert("summands".into(), json!(if opts.at_most { "at most h" } else { "exactly h" }));
    report.insert("order".into(), json!(cert.order));
    report.insert("certificate".into(), serde_json::to_value(&cert).expect("serializable"));
    if let Some(hmax) = opts.hmax {
        if cert.order > hmax {
            return Err(Error::OrderCap(hmax).into());
        }
    }

    let ess = essential_elements(s)?;
    report.insert("essential_elements".into(), serde_json::to_value(&ess).expect("serializable"));
    let p = primitive_set(s)?;
    let d = elementary_set(s)?;
    report.insert(
        "primitive_set".into(),
        json!({ "set": set_value(&p), "order": order(&p)?.order }),
    );
    report.insert(
        "elementary_set".into(),
        json!({ "set": set_value(&d), "order": order(&d)?.order }),
    );
    report.insert("progression".into(), serde_json::to_value(raison_profile(s)?).expect("serializable"));
    report.insert("essential_subsets".into(), json!(essential_subsets(s)?));
    report.insert(
        "elementary_trace".into(),
        serde_json::to_value(dessentialize_elementary(s)?).expect("serializable"),
    );
    report.insert(
        "general_trace".into(),
        serde_json::to_value(dessentialize_general(s)?).expect("serializable"),
    );
    report.insert("delta_bound".into(), serde_json::to_value(delta_bound(s)?).expect("serializable"));

    let audits: Vec<BoundReport> = vec![
        audit_order_sandwich(s)?,
        audit_elementary_order_bounds(s)?,
        audit_essential_count_bound(s)?,
        audit_reservoir_bound(s)?,
        audit_dessentialization(s)?,
    ];
    let pass = audits.iter().all(BoundReport::holds);
    report.insert("audits".into(), serde_json::to_value(&audits).expect("serializable"));
    report.insert("verdict".into(), json!(if pass { "pass" } else { "fail" }));
    Ok(Outcome { report: Value::Object(report), pass })
}

fn emit(report: &Value, format: Format) {
    match format {
        Format::Json => write_out(&(serde_json::to_string_pretty(report).expect("serializable") + "\n")),
        Format::Text => {
            let mut out = String::new();
            text(report, 0, &mut out);
            write_out(&out);
        }
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn write_out(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

/// Scalars and arrays nesting only scalars print on one line.
fn is_scalar(v: &Value) -> bool {
    match v {
        Value::Array(xs) => xs.iter().all(|x| !x.is_object() && is_scalar(x)),
        Value::Object(_) => false,
        _ => true,
    }
}

/// Objects with scalar fields only print as one `k = v, ...` line.
fn is_record(v: &Value) -> bool {
    v.as_object().is_some_and(|m| m.values().all(is_scalar))
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(xs) => format!("[{}]", xs.iter().map(inline).collect::<Vec<_>>().join(", ")),
        Value::Object(m) => m.iter().map(|(k, x)| format!("{k} = {}", inline(x))).collect::<Vec<_>>().join(", "),
        other => other.to_string(),
    }
}

/// Indented `key: value` rendering of a report tree.
fn text(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if x.as_object().is_some_and(|m| m.contains_key("canonical")) {
                    // a set: its canonical text says everything
                    out.push_str(&format!("{pad}{k}: {}\n", inline(&x["canonical"])));
                } else if is_scalar(x) {
                    out.push_str(&format!("{pad}{k}: {}\n", inline(x)));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    text(x, depth + 1, out);
                }
            }
        }
        Value::Array(xs) => {
            for x in xs {
                if is_record(x) || is_scalar(x) {
                    out.push_str(&format!("{pad}- {}\n", inline(x)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    text(x, depth + 1, out);
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", inline(other))),
    }
}
