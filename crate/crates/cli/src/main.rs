//! `germcalc`: invariants, constructions, simplicity gates and atlas tools
//! for corank-1 polynomial multigerms.
//!
//! Exit codes: 0 success, 1 parse or validation error, 2 a computation did
//! not stabilize below the degree cap, 3 internal error.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use germcalc::atlas::{self, ParamValue, SimpleFunction};
use germcalc::gates::{simplicity_report, Assertions, AugConcData};
use germcalc::ops::{self, Unfolding};
use germcalc::ring::tjurina;
use germcalc::tangent::{a_codim, ae_codim, wilson_predicted_ae};
use germcalc::{
    format_multigerm, parse_multigerm_with, parse_poly, Error, ParseOptions, QMultiGerm,
    StabilizationPolicy,
};

const MAX_DEGREE_ENV: &str = "GERMCALC_MAX_DEGREE";

#[derive(Parser, Debug)]
#[command(name = "germcalc", version, about = "Exact invariants and simplicity tests for corank-1 multigerms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Largest truncation degree (default 16, or $GERMCALC_MAX_DEGREE).
    #[arg(long, global = true)]
    max_degree: Option<u32>,
    /// Number of consecutive equal values required to accept a result.
    #[arg(long, global = true, default_value_t = 2)]
    window: u32,
    /// Emit JSON on standard output.
    #[arg(long, global = true)]
    json: bool,
    /// Source dimension, when some variable never appears.
    #[arg(long, global = true)]
    source_dim: Option<usize>,
    /// Target dimension (checked against the component count).
    #[arg(long, global = true)]
    target_dim: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute m0, corank, type, Ae- and A-codimension and Wilson's check.
    Eval {
        #[arg(long)]
        germ: String,
        #[command(flatten)]
        common: Common,
    },
    /// Build a multigerm from a stable unfolding.
    Build {
        #[arg(value_enum)]
        kind: BuildKind,
        /// The unfolding: parameters are its last source variables and last
        /// target components.
        #[arg(long)]
        germ: String,
        /// Second unfolding (binary concatenation).
        #[arg(long)]
        germ2: Option<String>,
        /// Stable germ adjoined by the generalised concatenation.
        #[arg(long)]
        gbar: Option<String>,
        /// Augmenting function.
        #[arg(long)]
        phi: Option<String>,
        /// Number of unfolding parameters.
        #[arg(long, default_value_t = 1)]
        params: usize,
        /// Skip the stability check of the unfolding.
        #[arg(long)]
        unchecked: bool,
        /// Also compute the Ae-codimension of the result.
        #[arg(long)]
        eval: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run every simplicity gate and the atlas lookup.
    Gate {
        #[arg(long)]
        germ: String,
        /// Comma-separated hypotheses taken as true (primitive, augmentation,
        /// dz-condition, augmentation-simple, transversality, best-possible).
        #[arg(long = "assert", value_name = "HYP,...")]
        assertions: Option<String>,
        /// Augmenting function, when the germ is an augmentation and
        /// concatenation.
        #[arg(long, requires = "base_codim")]
        phi: Option<String>,
        /// Ae-codimension of the base germ of the augmentation.
        #[arg(long, requires = "phi")]
        base_codim: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Catalog of simple germs (C^3,0) -> (C^3,0).
    Atlas {
        #[command(subcommand)]
        action: AtlasAction,
    },
}

#[derive(Subcommand, Debug)]
enum AtlasAction {
    /// Recompute every catalog codimension.
    Verify {
        /// Largest parameter value (k, mu, or Milnor number of P, h).
        #[arg(long, default_value_t = 3)]
        param_cap: u32,
        /// Restrict to one entry.
        #[arg(long)]
        entry: Option<String>,
        /// Parameter value for --entry (an integer or a simple function
        /// such as D4).
        #[arg(long, requires = "entry")]
        param: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Find catalog rows matching a germ.
    Lookup {
        #[arg(long)]
        germ: String,
        #[command(flatten)]
        common: Common,
    },
    /// Print the catalog as a JSON document.
    Export {
        /// Write to a file instead of standard output.
        #[arg(long)]
        output: Option<std::path::PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum BuildKind {
    Augment,
    Monic,
    Binary,
    Genconc,
    Augconc,
}

/// A failure, with the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotStabilized { .. } => 2,
            Error::Internal(_) => 3,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn policy(common: &Common) -> CliResult<StabilizationPolicy> {
    let d_max = match common.max_degree {
        Some(d) => d,
        None => match std::env::var(MAX_DEGREE_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| usage(format!("{MAX_DEGREE_ENV} must be a natural number, got {v:?}")))?,
            Err(_) => StabilizationPolicy::default().d_max,
        },
    };
    let p = StabilizationPolicy {
        d0: None,
        window: common.window,
        d_max,
    };
    p.validate()?;
    Ok(p)
}

fn parse_germ(text: &str, common: &Common) -> CliResult<QMultiGerm> {
    let opts = ParseOptions {
        source_dim: common.source_dim,
        target_dim: common.target_dim,
    };
    Ok(parse_multigerm_with(text, opts)?)
}

/// The document printed by `eval`, `build` and `gate`.
#[derive(Serialize)]
struct Report {
    germ: String,
    invariants: Value,
    verdict: Value,
    trace: Value,
    degrees_used: Value,
}

fn emit(common_json: bool, report: &Report, text: &str) -> CliResult<()> {
    if common_json {
        print_json(report)
    } else {
        out(text);
        Ok(())
    }
}

fn print_json<T: Serialize>(value: &T) -> CliResult<()> {
    let s = serde_json::to_string_pretty(value).map_err(|e| Failure {
        code: 3,
        message: format!("serialization failed: {e}"),
    })?;
    out(&(s + "\n"));
    Ok(())
}

/// Writes to standard output, treating a closed pipe as a normal end.
fn out(text: &str) {
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush());
}

fn cmd_eval(germ: &str, common: &Common) -> CliResult<()> {
    let pol = policy(common)?;
    let f = parse_germ(germ, common)?;
    let m0 = f.multiplicity(&pol)?;
    let coranks = f.coranks();
    let atype = match f.recognize_type(&pol) {
        Ok(t) => Some(t),
        Err(Error::NotCorankOne { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let ae = ae_codim(&f, &pol)?;
    let a = a_codim(&f, &pol)?;
    let predicted = wilson_predicted_ae(a.value, f.r(), f.n(), f.p());
    let wilson = if ae.value == 0 {
        "not_applicable"
    } else if predicted == ae.value as i64 {
        "consistent"
    } else {
        "inconsistent"
    };
    let text_germ = format_multigerm(&f);
    let report = Report {
        germ: text_germ.clone(),
        invariants: json!({
            "n": f.n(),
            "p": f.p(),
            "r": f.r(),
            "m0": m0,
            "corank": coranks.iter().copied().max().unwrap_or(0),
            "coranks": coranks,
            "atype": atype.as_ref().map(|t| t.to_string()),
            "aecod": ae.value,
            "acod": a.value,
            "wilson": { "status": wilson, "predicted_aecod": predicted },
        }),
        verdict: Value::Null,
        trace: json!([]),
        degrees_used: json!({ "aecod": ae.degree_used, "acod": a.degree_used }),
    };
    let text = format!(
        "germ:   {text_germ}\n(n,p,r): ({}, {}, {})\nm0:     {m0}\ncorank: {}\natype:  {}\naecod:  {} (degree {})\nacod:   {} (degree {})\nwilson: {wilson}\n",
        f.n(),
        f.p(),
        f.r(),
        coranks.iter().copied().max().unwrap_or(0),
        atype.map(|t| t.to_string()).unwrap_or_else(|| "-".into()),
        ae.value,
        ae.degree_used,
        a.value,
        a.degree_used,
    );
    emit(common.json, &report, &text)
}

struct BuildArgs<'a> {
    kind: BuildKind,
    germ: &'a str,
    germ2: Option<&'a str>,
    gbar: Option<&'a str>,
    phi: Option<&'a str>,
    params: usize,
    unchecked: bool,
    eval: bool,
}

fn unfolding(text: &str, s: usize, unchecked: bool, common: &Common, pol: &StabilizationPolicy) -> CliResult<Unfolding<germcalc::Q>> {
    let total = parse_germ(text, common)?;
    let u = if unchecked {
        eprintln!("warning: stability of the unfolding {text:?} was not checked");
        Unfolding::unchecked(total, s)?
    } else {
        Unfolding::new(total, s, pol)?
    };
    Ok(u)
}

fn cmd_build(args: BuildArgs<'_>, common: &Common) -> CliResult<()> {
    let pol = policy(common)?;
    let u = unfolding(args.germ, args.params, args.unchecked, common, &pol)?;
    let phi = match args.phi {
        Some(t) => Some(parse_poly(t)?.0),
        None => None,
    };
    let require_phi = || phi.clone().ok_or_else(|| usage("--phi is required for this construction"));
    let mut invariants = serde_json::Map::new();
    let built = match args.kind {
        BuildKind::Augment => ops::augment(&u, &require_phi()?)?,
        BuildKind::Monic => ops::monic_concat(&u)?,
        BuildKind::Binary => {
            let t2 = args.germ2.ok_or_else(|| usage("--germ2 is required for binary concatenation"))?;
            let v = unfolding(t2, 1, args.unchecked, common, &pol)?;
            ops::binary_concat(&u, &v)?
        }
        BuildKind::Genconc => {
            let g = args.gbar.ok_or_else(|| usage("--gbar is required for generalised concatenation"))?;
            let gbar = parse_multigerm_with(g, ParseOptions::default())?;
            ops::generalised_concat(&u, &gbar)?
        }
        BuildKind::Augconc => {
            let phi = require_phi()?;
            let base_cod = ae_codim(u.base(), &pol)?.value;
            let tau = tjurina(&phi, &pol)?;
            invariants.insert("base_aecod".into(), json!(base_cod));
            invariants.insert("tau_phi".into(), json!(tau));
            invariants.insert(
                "predicted_aecod".into(),
                json!(ops::predicted_codim_augconc(base_cod, tau)),
            );
            ops::sim_aug_concat(&u, &phi)?
        }
    };
    invariants.insert("n".into(), json!(built.n()));
    invariants.insert("p".into(), json!(built.p()));
    invariants.insert("r".into(), json!(built.r()));
    invariants.insert("unfolding_verified".into(), json!(u.is_verified()));
    let mut degrees = serde_json::Map::new();
    if args.eval {
        let ae = ae_codim(&built, &pol)?;
        invariants.insert("aecod".into(), json!(ae.value));
        degrees.insert("aecod".into(), json!(ae.degree_used));
    }
    let text_germ = format_multigerm(&built);
    let mut text = format!("{text_germ}\n");
    for key in ["base_aecod", "tau_phi", "predicted_aecod", "aecod"] {
        if let Some(v) = invariants.get(key) {
            text.push_str(&format!("{key}: {v}\n"));
        }
    }
    let report = Report {
        germ: text_germ,
        invariants: Value::Object(invariants),
        verdict: Value::Null,
        trace: json!([]),
        degrees_used: Value::Object(degrees),
    };
    emit(common.json, &report, &text)
}

fn cmd_gate(
    germ: &str,
    assertions: Option<&str>,
    phi: Option<&str>,
    base_codim: Option<usize>,
    common: &Common,
) -> CliResult<()> {
    let pol = policy(common)?;
    let f = parse_germ(germ, common)?;
    let asserted = match assertions {
        Some(t) => Assertions::parse_list(t)?,
        None => Assertions::none(),
    };
    let augconc = match (phi, base_codim) {
        (Some(t), Some(c)) => Some(AugConcData {
            base_codim: c,
            phi: parse_poly(t)?.0,
        }),
        _ => None,
    };
    let report = simplicity_report(&f, &pol, &asserted, augconc.as_ref())?;
    let text_germ = format_multigerm(&f);
    let v = &report.verdict;
    let mut text = format!("{}: {}\n", v.kind, v.rule);
    if let Some(ineq) = &v.inequality {
        text.push_str(&format!("  {ineq}\n"));
    }
    if !v.unverified_hypotheses.is_empty() {
        text.push_str(&format!("  unverified: {}\n", v.unverified_hypotheses.join("; ")));
    }
    for t in &report.trace {
        text.push_str(&format!("  [{}] {}: {}\n", t.gate, t.verdict.kind, t.verdict.rule));
    }
    let doc = Report {
        germ: text_germ,
        invariants: json!({ "atlas_matches": report.atlas_matches }),
        verdict: to_value(&report.verdict)?,
        trace: to_value(&report.trace)?,
        degrees_used: json!({}),
    };
    emit(common.json, &doc, &text)
}

fn to_value<T: Serialize>(v: &T) -> CliResult<Value> {
    serde_json::to_value(v).map_err(|e| Failure {
        code: 3,
        message: format!("serialization failed: {e}"),
    })
}

fn parse_param(entry: &atlas::AtlasEntry, text: Option<&str>) -> CliResult<ParamValue> {
    use atlas::ParamSpec;
    match (entry.param, text) {
        (ParamSpec::None, None) => Ok(ParamValue::None),
        (ParamSpec::None, Some(_)) => Err(usage(format!("{} takes no parameter", entry.name))),
        (_, None) => Err(usage(format!("{} needs --param", entry.name))),
        (ParamSpec::Int { .. }, Some(t)) => t
            .trim()
            .parse()
            .map(ParamValue::Int)
            .map_err(|_| usage(format!("expected an integer parameter, got {t:?}"))),
        (ParamSpec::Function { .. }, Some(t)) => Ok(ParamValue::Function(t.parse::<SimpleFunction>()?)),
    }
}

fn cmd_atlas(action: &AtlasAction) -> CliResult<()> {
    match action {
        AtlasAction::Verify {
            param_cap,
            entry,
            param,
            common,
        } => {
            let pol = policy(common)?;
            let report = match entry {
                Some(name) => {
                    let e = atlas::entry(name)?;
                    let values = match param {
                        Some(_) => vec![parse_param(e, param.as_deref())?],
                        None => e.params_up_to(*param_cap),
                    };
                    let mut rows = Vec::new();
                    for v in values {
                        rows.push(atlas::verify(name, &v, &pol)?);
                    }
                    atlas::VerifyReport { rows }
                }
                None => atlas::verify_all(*param_cap, &pol)?,
            };
            if common.json {
                let matched = report.rows.iter().filter(|r| r.matched).count();
                return print_json(&json!({
                    "rows": report.rows,
                    "matched": matched,
                    "total": report.rows.len(),
                    "all_match": report.all_match(),
                }));
            }
            let mut text = String::new();
            for r in &report.rows {
                let computed = r.computed.map(|c| c.to_string()).unwrap_or_else(|| "-".into());
                text.push_str(&format!(
                    "{:<10} {:<4} computed {:>2} expected {:>2}  {}\n",
                    r.entry,
                    r.params.to_string(),
                    computed,
                    r.expected,
                    if r.matched { "ok" } else { "MISMATCH" }
                ));
            }
            let matched = report.rows.iter().filter(|r| r.matched).count();
            text.push_str(&format!("{matched}/{} instances match\n", report.rows.len()));
            out(&text);
            Ok(())
        }
        AtlasAction::Lookup { germ, common } => {
            let pol = policy(common)?;
            let f = parse_germ(germ, common)?;
            let (inv, matches) = atlas::lookup(&f, &pol)?;
            if common.json {
                return print_json(&json!({
                    "germ": format_multigerm(&f),
                    "invariants": inv,
                    "matches": matches,
                }));
            }
            let mut text = format!("type {} m0 {} aecod {}\n", inv.atype, inv.m0, inv.ae_codim);
            if matches.is_empty() {
                text.push_str("no match\n");
            }
            for m in &matches {
                text.push_str(&format!(
                    "{} ({}) expected {}{}\n",
                    m.entry,
                    m.params,
                    m.expected_codim,
                    if m.exact { ", normal form" } else { "" }
                ));
            }
            out(&text);
            Ok(())
        }
        AtlasAction::Export { output } => {
            let doc = serde_json::to_string_pretty(&atlas::export()).map_err(|e| Failure {
                code: 3,
                message: e.to_string(),
            })?;
            match output {
                Some(path) => std::fs::write(path, doc + "\n").map_err(|e| usage(format!("{}: {e}", path.display()))),
                None => {
                    out(&(doc + "\n"));
                    Ok(())
                }
            }
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match &cli.command {
        Command::Eval { germ, common } => cmd_eval(germ, common),
        Command::Build {
            kind,
            germ,
            germ2,
            gbar,
            phi,
            params,
            unchecked,
            eval,
            common,
        } => cmd_build(
            BuildArgs {
                kind: *kind,
                germ,
                germ2: germ2.as_deref(),
                gbar: gbar.as_deref(),
                phi: phi.as_deref(),
                params: *params,
                unchecked: *unchecked,
                eval: *eval,
            },
            common,
        ),
        Command::Gate {
            germ,
            assertions,
            phi,
            base_codim,
            common,
        } => cmd_gate(germ, assertions.as_deref(), phi.as_deref(), *base_codim, common),
        Command::Atlas { action } => cmd_atlas(action),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            e.print().ok();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
