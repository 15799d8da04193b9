//! Command-line front end for the `fermat-pell` library.
//!
//! [`run`] parses an argument vector and returns the exit code and output
//! instead of touching the process, so the binary is a thin wrapper and the
//! tests drive the same code path.
//!
//! Exit codes: 0 on success, 1 for usage and domain errors, 2 when the
//! computation finished but a predicted property did not hold.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use fermat_pell::contfrac::{expand_sqrt, identity_report};
use fermat_pell::families::{FamilyId, FamilyPlan, Verdict};
use fermat_pell::pell::{negative_fundamental, nth_solution};
use fermat_pell::quadfield::{fundamental_unit, unit_from_family, FundamentalUnit, DEFAULT_SEED};
use fermat_pell::scan::{density_scan, density_scan_csv, ScanReport, ScanSpec, TFilter, DEFAULT_SIEVE_BOUND};
use fermat_pell::{BigInt, Error, IntPoly};
use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    pub exit_code: i32,
    /// Text or JSON for standard output.
    pub payload: String,
    /// Messages for standard error.
    pub diagnostic: String,
}

#[derive(Parser, Debug)]
#[command(name = "fermat-pell", version, about = "Continued fractions of square roots, Pell equations and quadratic units")]
struct Cli {
    /// Print a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Print nothing on success; rely on the exit code.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Periodic continued fraction of sqrt(F).
    Expand { f: BigInt },
    /// Solutions of X^2 - F Y^2 = 1 (or -1).
    Pell {
        f: BigInt,
        /// Return the K-th solution instead of the fundamental one.
        #[arg(long, default_value_t = 1)]
        rank: u64,
        /// Solve X^2 - F Y^2 = -1 instead.
        #[arg(long, conflicts_with = "rank")]
        negative: bool,
    },
    /// Polynomial solution families.
    #[command(subcommand)]
    Family(FamilyCommand),
    /// Fundamental unit of Q(sqrt(D)).
    Unit(UnitArgs),
    /// Count t with squarefree polynomial value.
    Scan(ScanArgs),
    /// Check the structural identities of the expansion of sqrt(F).
    Lemmas { f: BigInt },
}

#[derive(Subcommand, Debug)]
enum FamilyCommand {
    /// Show the family polynomials and the predicted expansion.
    Show { family: FamilyId, f: BigInt },
    /// Check the family at t = 0..=t_max.
    Verify {
        family: FamilyId,
        f: BigInt,
        #[arg(long)]
        t_max: u64,
    },
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true, subcommand_negates_reqs = true)]
struct UnitArgs {
    #[arg(required = true)]
    d: Option<BigInt>,
    #[command(subcommand)]
    from: Option<UnitCommand>,
}

#[derive(Subcommand, Debug)]
enum UnitCommand {
    /// Unit of Q(sqrt(f(t))) predicted by a family, cross-checked.
    FromFamily { family: FamilyId, f: BigInt, t: BigInt },
}

#[derive(Args, Debug)]
struct ScanArgs {
    /// Coefficients, constant term first: c0,c1,c2
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
    /// Inclusive range LO:HI.
    #[arg(long)]
    range: String,
    #[arg(long, default_value_t = TFilter::All)]
    filter: TFilter,
    /// Write one row per t to this file.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SIEVE_BOUND)]
    sieve_bound: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

/// Output of one command before rendering.
struct Report {
    text: Vec<String>,
    json: Value,
    exit_code: i32,
}

impl Report {
    fn ok(text: Vec<String>, json: Value) -> Self {
        Report { text, json, exit_code: 0 }
    }
}

/// Decimal string, the JSON encoding of every integer.
fn s(v: &impl ToString) -> Value {
    Value::String(v.to_string())
}

fn strings<T: ToString>(vs: &[T]) -> Value {
    Value::Array(vs.iter().map(s).collect())
}

fn poly_json(p: &IntPoly) -> Value {
    strings(p.coeffs())
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::PerfectSquare(_) => "perfect_square",
        Error::Domain(_) => "domain",
        Error::Index { .. } => "index",
        Error::Unclassified { .. } => "unclassified",
        Error::NonIntegral { .. } => "non_integral",
        Error::NotCovered { .. } => "not_covered",
        Error::NotSquarefree { .. } => "not_squarefree",
        Error::Congruence(_) => "congruence",
        Error::NormMinusOne { .. } => "norm_minus_one",
        Error::Mismatch(_) => "mismatch",
    }
}

/// Parses `argv` (including the program name) and executes the command.
pub fn run<I, T>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                CommandOutcome { exit_code: 1, payload: String::new(), diagnostic: rendered }
            } else {
                CommandOutcome { exit_code: 0, payload: rendered, diagnostic: String::new() }
            };
        }
    };
    let (json, quiet) = (cli.json, cli.quiet);
    match execute(cli.command) {
        Ok(report) => {
            let payload = if quiet {
                String::new()
            } else if json {
                format!("{}\n", serde_json::to_string_pretty(&report.json).expect("serializable"))
            } else {
                report.text.iter().map(|l| format!("{l}\n")).collect()
            };
            CommandOutcome { exit_code: report.exit_code, payload, diagnostic: String::new() }
        }
        Err(e) => {
            let exit_code = if matches!(e, Error::Mismatch(_)) { 2 } else { 1 };
            let payload = if json && !quiet {
                let doc = json!({ "command": "error", "kind": error_kind(&e), "message": e.to_string() });
                format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable"))
            } else {
                String::new()
            };
            CommandOutcome { exit_code, payload, diagnostic: format!("error: {e}\n") }
        }
    }
}

fn execute(command: Command) -> Result<Report, Error> {
    match command {
        Command::Expand { f } => expand(&f),
        Command::Pell { f, rank, negative } => pell(&f, rank, negative),
        Command::Family(FamilyCommand::Show { family, f }) => family_show(family, &f),
        Command::Family(FamilyCommand::Verify { family, f, t_max }) => family_verify(family, &f, t_max),
        Command::Unit(UnitArgs { from: Some(UnitCommand::FromFamily { family, f, t }), .. }) => {
            let unit = unit_from_family(family, &f, &t)?;
            let mut report = unit_report(&unit);
            report.text.insert(0, format!("D={}", unit.d));
            report.json["family"] = s(&family);
            report.json["f"] = s(&f);
            report.json["t"] = s(&t);
            Ok(report)
        }
        Command::Unit(UnitArgs { d, .. }) => {
            let d = d.expect("clap requires D without a subcommand");
            Ok(unit_report(&fundamental_unit(&d)?))
        }
        Command::Scan(args) => scan(args),
        Command::Lemmas { f } => lemmas(&f),
    }
}

fn expand(f: &BigInt) -> Result<Report, Error> {
    let exp = expand_sqrt(f)?;
    let json = json!({
        "command": "expand",
        "f": s(f),
        "a0": s(exp.a0()),
        "period": strings(exp.period()),
        "period_length": exp.period_length(),
        "r": strings(exp.r_seq()),
        "s": strings(exp.s_seq()),
    });
    Ok(Report::ok(vec![exp.to_string()], json))
}

fn pell(f: &BigInt, rank: u64, negative: bool) -> Result<Report, Error> {
    let sol = if negative { negative_fundamental(f)? } else { Some(nth_solution(f, rank)?) };
    let sign = if negative { -1 } else { 1 };
    let text = match &sol {
        None => format!("no solution of X^2 - {f}Y^2 = -1 (even period)"),
        Some(p) if negative => format!("x={} y={} (norm -1)", p.x, p.y),
        Some(p) if rank == 1 => format!("c={} h={}", p.x, p.y),
        Some(p) => format!("x={} y={} (rank {rank})", p.x, p.y),
    };
    let json = json!({
        "command": "pell",
        "f": s(f),
        "sign": sign,
        "rank": if negative { 1 } else { rank },
        "solution": sol.as_ref().map(|p| json!({ "x": s(&p.x), "y": s(&p.y) })),
    });
    Ok(Report::ok(vec![text], json))
}

fn family_show(family: FamilyId, f: &BigInt) -> Result<Report, Error> {
    let plan = FamilyPlan::new(family, f)?;
    let inst = &plan.instance;
    let app = &plan.applicability;
    let mut text = vec![
        format!("{family} for f={f}: c={} h={}", inst.c, inst.h),
        format!("f(t) = {}", inst.f_poly),
        format!("X(t) = {}", inst.x_poly),
        format!("Y(t) = {}", inst.y_poly),
        format!("covered: {} ({})", if app.covered { "yes" } else { "no" }, app.case_label),
    ];
    if let Some(p) = &plan.pattern {
        let block: Vec<String> = p.periodic.iter().map(ToString::to_string).collect();
        text.push(format!("pattern: [{}; {}]", p.lead, block.join(", ")));
    }
    let json = json!({
        "command": "family-show",
        "family": s(&family),
        "f": s(f),
        "c": s(&inst.c),
        "h": s(&inst.h),
        "f_poly": poly_json(&inst.f_poly),
        "x_poly": poly_json(&inst.x_poly),
        "y_poly": poly_json(&inst.y_poly),
        "covered": app.covered,
        "case": app.case_label,
        "pattern": plan.pattern.as_ref().map(|p| json!({
            "lead": poly_json(&p.lead),
            "periodic": Value::Array(p.periodic.iter().map(poly_json).collect()),
        })),
    });
    Ok(Report::ok(text, json))
}

fn verdict_json(v: Verdict) -> Value {
    Value::String(v.as_str().to_string())
}

fn family_verify(family: FamilyId, f: &BigInt, t_max: u64) -> Result<Report, Error> {
    let plan = FamilyPlan::new(family, f)?;
    let mut text = Vec::new();
    let mut rows = Vec::new();
    let mut failures = 0u64;
    for t in 0..=t_max {
        let v = plan.verify(&BigInt::from(t))?;
        let failed = v.any_failed();
        failures += failed as u64;
        text.push(format!(
            "{} t={t} D={} pattern={} fundamental={} identity={}",
            if failed { "FAIL" } else { "PASS" },
            v.value,
            v.pattern_verdict.as_str(),
            v.fundamental_verdict.as_str(),
            v.identity_verdict.as_str(),
        ));
        rows.push(json!({
            "t": s(&t),
            "value": s(&v.value),
            "x": s(&v.x),
            "y": s(&v.y),
            "pattern": verdict_json(v.pattern_verdict),
            "fundamental": verdict_json(v.fundamental_verdict),
            "identity": verdict_json(v.identity_verdict),
            "passed": !failed,
        }));
    }
    text.push(format!("{} of {} values passed", t_max + 1 - failures, t_max + 1));
    let json = json!({
        "command": "family-verify",
        "family": s(&family),
        "f": s(f),
        "covered": plan.applicability.covered,
        "case": plan.applicability.case_label,
        "results": rows,
        "failures": failures,
    });
    Ok(Report { text, json, exit_code: if failures > 0 { 2 } else { 0 } })
}

fn unit_report(u: &FundamentalUnit) -> Report {
    let json = json!({
        "command": "unit",
        "d": s(&u.d),
        "a": s(&u.a),
        "b": s(&u.b),
        "denom": u.denom,
        "norm": u.norm,
    });
    Report::ok(vec![u.to_string()], json)
}

fn parse_poly(text: &str) -> Result<IntPoly, Error> {
    let coeffs = text
        .split(',')
        .map(|c| c.trim().parse::<BigInt>().map_err(|_| Error::Domain(format!("bad coefficient {c:?} in --poly"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IntPoly::new(coeffs))
}

fn parse_range(text: &str) -> Result<(u64, u64), Error> {
    let bad = || Error::Domain(format!("--range expects LO:HI with natural numbers, got {text:?}"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
}

fn scan(args: ScanArgs) -> Result<Report, Error> {
    let poly = parse_poly(&args.poly)?;
    let (lo, hi) = parse_range(&args.range)?;
    let spec = ScanSpec::new(poly, lo, hi)
        .with_filter(args.filter)
        .with_sieve_bound(args.sieve_bound)
        .with_seed(args.seed);
    let report: ScanReport = match &args.csv {
        Some(path) => {
            let file = File::create(path).map_err(|e| Error::Domain(format!("cannot create {}: {e}", path.display())))?;
            density_scan_csv(&spec, BufWriter::new(file))?
        }
        None => density_scan(&spec)?,
    };
    let largest = report.largest_squarefree_t.map(|t| t.to_string()).unwrap_or_else(|| "none".into());
    let mut text = vec![
        format!("poly: {}", spec.poly),
        format!("range: {lo}:{hi} ({})", spec.filter),
        format!("total={} squarefree={} density={:.6}", report.total, report.squarefree_count, report.density()),
        format!("largest squarefree t: {largest}"),
    ];
    text.extend(report.first_failures.iter().map(|(t, p)| format!("t={t} divisible by {p}^2")));
    let json = json!({
        "command": "scan",
        "poly": poly_json(&spec.poly),
        "t_lo": s(&lo),
        "t_hi": s(&hi),
        "filter": spec.filter.to_string(),
        "sieve_bound": s(&spec.sieve_bound),
        "total": s(&report.total),
        "squarefree_count": s(&report.squarefree_count),
        "largest_squarefree_t": report.largest_squarefree_t.map(|t| s(&t)),
        "first_failures": report.first_failures.iter()
            .map(|(t, p)| json!({ "t": s(t), "witness": s(p) }))
            .collect::<Vec<_>>(),
    });
    Ok(Report::ok(text, json))
}

fn lemmas(f: &BigInt) -> Result<Report, Error> {
    let report = identity_report(f)?;
    let mut text = vec![format!("f={f} period length {}", report.period_length)];
    text.extend(report.lines.iter().map(|l| {
        format!("{} {}: {}", if l.holds { "PASS" } else { "FAIL" }, l.name, l.detail)
    }));
    let failures = report.failures().count();
    let json = json!({
        "command": "lemmas",
        "f": s(f),
        "period_length": report.period_length,
        "lines": report.lines.iter()
            .map(|l| json!({ "name": l.name, "holds": l.holds, "detail": l.detail }))
            .collect::<Vec<_>>(),
        "failures": failures,
    });
    Ok(Report { text, json, exit_code: if failures > 0 { 2 } else { 0 } })
}
