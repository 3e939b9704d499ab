//! `nullcone` command-line front end. Every verb prints JSON on stdout.
//!
//! Exit status: 0 on success or a positive verdict, 2 on a well-formed
//! negative answer (not certified, infeasible, Jacobi failure), 1 on errors.

mod tables;

use std::fmt;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use nullcone::algebra::{derived_series, jacobi_check, lower_central_series, StructureTensor};
use nullcone::catalog::{self, CatalogVerdict, Filter, Table};
use nullcone::classifier::{find_class, membership_report, FeasibilityProblem, SearchOptions, Verdict};
use nullcone::constructor::{pairing_plan, realize, semisimple_merge};
use nullcone::curvature::{invariant_suite_graded, killing_operator, levi_civita, ricci, riemann};
use nullcone::frame::{certify_class, weight_support};
use nullcone::json::{parse_algebra, parse_class, parse_layout, parse_signature, render, Bundle};
use nullcone::linalg::nilpotent_operator_check;
use nullcone::rootsystems::{chevalley_split_form, CartanMatrix, GradedAlgebra};
use nullcone::{ClassVector, FrameLayout};

#[derive(Parser)]
#[command(
    name = "nullcone",
    version,
    about = "Exact null-cone certification for Lie algebras with neutral and indefinite metrics"
)]
struct Cli {
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, env = "NULLCONE_THREADS")]
    threads: Option<usize>,
    /// Spaces per indentation level; 0 prints compact JSON.
    #[arg(long, global = true, default_value_t = 2)]
    json_indent: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Jacobi identity, derived and lower central series.
    Check(CheckArgs),
    /// Certify a class on a fixed layout.
    Certify(FrameArgs),
    /// Exact class for a fixed layout, if one exists.
    FindClass(FrameArgs),
    /// Search frames of a signature for a certifying class.
    Search(SearchArgs),
    /// Construct a split semisimple algebra, optionally padded into the null cone.
    Build(BuildArgs),
    /// Curvature invariants, Ricci tensor and Killing operator.
    Curvature(FrameArgs),
    /// Regenerate a table of results.
    Tables(TablesArgs),
    /// List, show or verify the low-dimensional catalog.
    Catalog(CatalogArgs),
}

#[derive(Args)]
struct AlgebraArg {
    /// Algebra or bundle JSON file; `-` reads stdin.
    #[arg(long, value_name = "FILE")]
    algebra: PathBuf,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    input: AlgebraArg,
    #[command(flatten)]
    frame: LayoutArgs,
}

#[derive(Args)]
struct LayoutArgs {
    /// Layout JSON file (bare layout or bundle).
    #[arg(long, value_name = "FILE", conflicts_with = "signature")]
    layout: Option<PathBuf>,
    /// Canonical layout with `p` null pairs and `k` transverse directions.
    #[arg(long, value_name = "p,k")]
    signature: Option<String>,
}

#[derive(Args)]
struct FrameArgs {
    #[command(flatten)]
    input: AlgebraArg,
    #[command(flatten)]
    frame: LayoutArgs,
    /// Class vector such as `2,1`; defaults to the bundle's class.
    #[arg(long, value_name = "CSV")]
    class: Option<String>,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    input: AlgebraArg,
    #[arg(long, value_name = "p,k")]
    signature: String,
    /// Visit every permutation and sign pattern without pruning.
    #[arg(long)]
    exhaustive: bool,
    /// Report larger algebras as inconclusive without searching.
    #[arg(long, default_value_t = SearchOptions::default().max_dim)]
    max_dim: usize,
}

#[derive(Args)]
struct BuildArgs {
    /// Cartan type with rank, such as `E8`; `+` joins simple factors (`A2+G2`).
    #[arg(long, value_name = "TYPE")]
    split: String,
    /// Add `R^m` and emit the certified bundle instead of the graded algebra.
    #[arg(long)]
    pad: bool,
}

#[derive(Args)]
struct TablesArgs {
    /// One of splitlcs, splitclasses, appendixA1, appendixA2, appendixA3, dim3, dim4, dim5, dim6.
    #[arg(long, value_name = "ID")]
    which: String,
    /// Aligned text instead of JSON.
    #[arg(long)]
    text: bool,
}

#[derive(Args)]
struct CatalogArgs {
    /// Restrict to one table (dim3 … dim6).
    #[arg(long, value_name = "ID")]
    which: Option<String>,
    /// Show a single entry by name.
    #[arg(long)]
    name: Option<String>,
    /// With `--name`, emit the algebra of this sample.
    #[arg(long, requires = "name")]
    sample: Option<usize>,
    /// Run the verification sweep instead of listing.
    #[arg(long, conflicts_with = "sample")]
    verify: bool,
}

#[derive(Debug)]
enum Failure {
    Lib(nullcone::Error),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Io(path, e) => write!(f, "{}: {e}", path.display()),
            Failure::Usage(msg) => f.write_str(msg),
        }
    }
}

impl From<nullcone::Error> for Failure {
    fn from(e: nullcone::Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<(Value, bool), Failure>;

fn to_value<T: Serialize>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(|e| Failure::Lib(e.into()))
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map_err(|e| Failure::Io(path.into(), e))?;
        return Ok(text);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::Io(path.into(), e))
}

/// Algebra text plus the parsed tensor.
fn load_algebra(arg: &AlgebraArg) -> Result<(String, StructureTensor), Failure> {
    let text = read_input(&arg.algebra)?;
    let t = parse_algebra(&text).map_err(|e| Failure::Usage(format!("{}: {e}", arg.algebra.display())))?;
    Ok((text, t))
}

fn bundle_key(text: &str, key: &str) -> Option<Value> {
    match serde_json::from_str::<Value>(text) {
        Ok(Value::Object(mut map)) if map.contains_key("algebra") => map.remove(key),
        _ => None,
    }
}

/// `--layout`, then `--signature`, then the bundle's own layout.
fn resolve_layout(args: &LayoutArgs, algebra_text: &str, t: &StructureTensor) -> Result<Option<FrameLayout>, Failure> {
    let layout = if let Some(path) = &args.layout {
        let text = read_input(path)?;
        Some(parse_layout(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?)
    } else if let Some(sig) = &args.signature {
        let (p, k) = parse_signature(sig)?;
        Some(FrameLayout::canonical(p, k))
    } else {
        match bundle_key(algebra_text, "layout") {
            Some(v) => Some(serde_json::from_value(v).map_err(|e| Failure::Usage(format!("bundle layout: {e}")))?),
            None => None,
        }
    };
    if let Some(l) = &layout {
        if l.dim() != t.dim() {
            return Err(Failure::Lib(nullcone::Error::DimensionMismatch { expected: t.dim(), got: l.dim() }));
        }
    }
    Ok(layout)
}

fn require_layout(args: &LayoutArgs, algebra_text: &str, t: &StructureTensor) -> Result<FrameLayout, Failure> {
    resolve_layout(args, algebra_text, t)?
        .ok_or_else(|| Failure::Usage("a layout is required: pass --layout, --signature, or a bundle".into()))
}

fn resolve_class(class: &Option<String>, algebra_text: &str) -> Result<Option<ClassVector>, Failure> {
    if let Some(text) = class {
        return Ok(Some(parse_class(text)?));
    }
    match bundle_key(algebra_text, "class") {
        Some(v) => Ok(Some(serde_json::from_value(v).map_err(|e| Failure::Usage(format!("bundle class: {e}")))?)),
        None => Ok(None),
    }
}

fn check(args: &CheckArgs) -> Outcome {
    let (text, t) = load_algebra(&args.input)?;
    let violations = jacobi_check(&t);
    let ok = violations.is_empty();
    let mut out = json!({
        "dim": t.dim(),
        "nonzero_constants": t.nnz(),
        "jacobi": { "ok": ok, "violations": to_value(&violations)? },
    });
    if ok {
        let lcs = lower_central_series(&t, false);
        let derived = derived_series(&t);
        out["lower_central_series"] = to_value(&lcs.dims)?;
        out["nilpotent"] = json!(lcs.is_nilpotent);
        out["derived_series"] = to_value(&derived.dims)?;
        out["solvable"] = json!(derived.is_solvable);
        if let Some(l) = resolve_layout(&args.frame, &text, &t)? {
            out["killing_operator"] = to_value(&nilpotent_operator_check(&killing_operator(&l, &t)?)?)?;
        }
    }
    Ok((out, ok))
}

fn certify(args: &FrameArgs) -> Outcome {
    let (text, t) = load_algebra(&args.input)?;
    let l = require_layout(&args.frame, &text, &t)?;
    let x = resolve_class(&args.class, &text)?
        .ok_or_else(|| Failure::Usage("a class is required: pass --class or a bundle".into()))?;
    let cert = certify_class(&l, &t, &x)?;
    let mut out = to_value(&cert)?;
    out["class"] = to_value(&x)?;
    Ok((out, cert.certified))
}

fn find(args: &FrameArgs) -> Outcome {
    let (text, t) = load_algebra(&args.input)?;
    let l = require_layout(&args.frame, &text, &t)?;
    let problem = FeasibilityProblem::new(l.p(), weight_support(&l, &t)?)?;
    let distinct = problem.weights().len();
    Ok(match find_class(&problem) {
        Some(found) => {
            let cert = certify_class(&l, &t, &found.raw)?;
            let out = json!({
                "feasible": true,
                "distinct_weights": distinct,
                "class": to_value(&found.raw)?,
                "normalized": to_value(&found.normalized)?,
                "slot_permutation": found.slot_permutation,
                "worst_margin": cert.worst_margin.map_or_else(|| "-inf".to_string(), |m| m.to_string()),
            });
            (out, cert.certified)
        }
        None => (json!({ "feasible": false, "distinct_weights": distinct }), false),
    })
}

fn search(args: &SearchArgs) -> Outcome {
    let (_, t) = load_algebra(&args.input)?;
    let sig = parse_signature(&args.signature)?;
    let opts = SearchOptions { prune: !args.exhaustive, explicit_signs: args.exhaustive, max_dim: args.max_dim };
    let report = membership_report(&t, &[sig], &opts)?.remove(0);
    let negative = report.verdict == Verdict::InfeasibleForAllSearchedFrames;
    Ok((to_value(&report)?, !negative))
}

fn split_form(spec: &str) -> Result<GradedAlgebra, Failure> {
    let parts = spec
        .split('+')
        .map(|s| Ok(chevalley_split_form(&CartanMatrix::parse(s.trim())?)))
        .collect::<Result<Vec<_>, Failure>>()?;
    Ok(semisimple_merge(&parts))
}

fn build(args: &BuildArgs) -> Outcome {
    let g = split_form(&args.split)?;
    if !args.pad {
        let mut out = to_value(&g)?;
        out["lower_central_series"] = to_value(&g.lcs_dims())?;
        return Ok((out, true));
    }
    let plan = pairing_plan(&g)?;
    let r = realize(&g, &plan)?;
    Ok((to_value(&Bundle::from_realization(&r)?)?, true))
}

fn curvature(args: &FrameArgs) -> Outcome {
    let (text, t) = load_algebra(&args.input)?;
    let l = require_layout(&args.frame, &text, &t)?;
    let grading = resolve_class(&args.class, &text)?;
    let suite = invariant_suite_graded(&l, &t, grading.as_ref())?;
    let gamma = levi_civita(&l, &t)?;
    let ric = ricci(&riemann(&l, &t, &gamma)?, &l)?;
    let mut components = Vec::new();
    for a in 0..t.dim() {
        for b in a..t.dim() {
            let v = ric.form.get(a, b);
            if !num_is_zero(v) {
                components.push(json!({ "a": a + 1, "b": b + 1, "value": v.to_string() }));
            }
        }
    }
    let out = json!({
        "invariants": to_value(&suite)?,
        "all_invariants_zero": suite.is_all_zero(),
        "ricci": components,
        "killing_operator": to_value(&nilpotent_operator_check(&killing_operator(&l, &t)?)?)?,
    });
    Ok((out, true))
}

fn num_is_zero(v: &nullcone::Rational) -> bool {
    *v == nullcone::Rational::from(0)
}

fn catalog_cmd(args: &CatalogArgs) -> Outcome {
    let table = args.which.as_deref().map(Table::parse).transpose()?;
    if let Some(name) = &args.name {
        let e = catalog::load(name)?;
        if let Some(i) = args.sample {
            let s =
                e.samples.get(i).ok_or_else(|| Failure::Usage(format!("{name} has {} samples", e.samples.len())))?;
            return Ok((to_value(&s.algebra)?, true));
        }
        if args.verify {
            let report = catalog::verify_entry(e, &SearchOptions::default())?;
            let passed = report.passed;
            return Ok((to_value(&report)?, passed));
        }
        return Ok((to_value(e)?, true));
    }
    let filter = Filter { table, ..Filter::default() };
    if args.verify {
        let report = catalog::verify(&filter)?;
        let passed = report.passed;
        return Ok((to_value(&report)?, passed));
    }
    let listing: Vec<Value> = catalog::enumerate(&filter)
        .into_iter()
        .map(|e| {
            json!({
                "name": e.name,
                "table": e.table,
                "signatures": e.signatures,
                "verdict": e.verdict,
                "classes": if e.verdict == CatalogVerdict::InNullCone { to_value(&e.classes).ok() } else { None },
                "samples": e.samples.len(),
            })
        })
        .collect();
    Ok((Value::Array(listing), true))
}

fn run(cli: &Cli) -> Result<(String, bool), Failure> {
    let (value, positive) = match &cli.command {
        Command::Check(a) => check(a)?,
        Command::Certify(a) => certify(a)?,
        Command::FindClass(a) => find(a)?,
        Command::Search(a) => search(a)?,
        Command::Build(a) => build(a)?,
        Command::Curvature(a) => curvature(a)?,
        Command::Catalog(a) => catalog_cmd(a)?,
        Command::Tables(a) => {
            let table = tables::reproduce(&a.which)?;
            if a.text {
                return Ok((table.to_text(), true));
            }
            (to_value(&table)?, true)
        }
    };
    let indent = (cli.json_indent > 0).then_some(cli.json_indent);
    Ok((render(&value, indent)?, positive))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok((text, positive)) => {
            println!("{text}");
            if positive {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
