//! The `mgl` command line front end.
//!
//! Exit codes: 0 success, 1 a check or verification failed, 2 usage or parse
//! error, 3 internal invariant violation.

use std::io::{Read, Write};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cut_elim::{eliminate_cuts, CutError, TraceStep};
use crate::deriv::{CheckError, Deriv, Node, Rule};
use crate::eq_theory::{equiv_oracle, EqError};
use crate::infer::{elaborate_nd, InferError};
use crate::nd::NdDeriv;
use crate::parser::{parse_file, Item, ProofFile, Tree};
use crate::sc::ScDeriv;
use crate::semiring::SemiringId;
use crate::translate::{nd_to_sc, sc_to_nd};

pub const SEMIRING_ENV: &str = "MGL_SEMIRING";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Nd,
    Sc,
}

#[derive(Debug, Parser)]
#[command(name = "mgl", about = "Proof checker for mixed graded/linear logic", version)]
pub struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every derivation and elaborate every goal
    Check {
        /// Input file, or `-` for stdin
        file: String,
        /// Semiring to use instead of the file header
        #[arg(long)]
        semiring: Option<String>,
    },
    /// Eliminate cuts from every sequent derivation
    Normalize {
        file: String,
        #[arg(short = 'o', long = "output")]
        output: Option<String>,
        /// Include the reduction trace
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        semiring: Option<String>,
    },
    /// Translate derivations between sequent calculus and natural deduction
    Translate {
        #[arg(long = "to", value_enum)]
        to: Target,
        file: String,
        #[arg(short = 'o', long = "output")]
        output: Option<String>,
        #[arg(long)]
        semiring: Option<String>,
    },
    /// Elaborate goals into natural-deduction derivations
    Infer {
        file: String,
        #[arg(long)]
        semiring: Option<String>,
    },
    /// Compare two derivations of the same judgment
    Eq {
        file: String,
        first: String,
        second: String,
        #[arg(long)]
        semiring: Option<String>,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct ItemReport {
    pub name: String,
    pub judgment: Option<String>,
    pub cut_free: bool,
    pub errors: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceStep>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub status: &'static str,
    pub items: Vec<ItemReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<&'static str>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
}

/// A failure that ends the run early.
enum Fatal {
    Usage(String),
    Parse(String),
    Internal(String),
}

impl Fatal {
    fn code(&self) -> i32 {
        match self {
            Fatal::Usage(_) | Fatal::Parse(_) => 2,
            Fatal::Internal(_) => 3,
        }
    }

    fn status(&self) -> &'static str {
        match self {
            Fatal::Usage(_) => "usage-error",
            Fatal::Parse(_) => "parse-error",
            Fatal::Internal(_) => "internal-error",
        }
    }

    fn message(&self) -> &str {
        match self {
            Fatal::Usage(m) | Fatal::Parse(m) | Fatal::Internal(m) => m,
        }
    }
}

fn cut_fatal(e: CutError) -> Fatal {
    match e {
        CutError::Check(c) => Fatal::Internal(format!("cut elimination produced an invalid tree: {c}")),
        other => Fatal::Internal(other.to_string()),
    }
}

/// Runs the tool on `args` (including the program name). `env_semiring`
/// is the value of `MGL_SEMIRING`, if set.
pub fn run(
    args: &[String],
    env_semiring: Option<&str>,
    stdin: &mut dyn Read,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let format = cli.format;
    match dispatch(cli, env_semiring, stdin, out, err) {
        Ok(code) => code,
        Err(f) => {
            match format {
                Format::Json => {
                    let r = Report { status: f.status(), items: vec![], verdict: None, errors: vec![f.message().to_string()] };
                    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&r).expect("report serializes"));
                }
                Format::Text => {
                    let _ = writeln!(err, "mgl: {}: {}", f.status(), f.message());
                }
            }
            f.code()
        }
    }
}

fn read_input(file: &str, stdin: &mut dyn Read) -> Result<String, Fatal> {
    if file == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s).map_err(|e| Fatal::Usage(format!("cannot read stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(file).map_err(|e| Fatal::Usage(format!("cannot read `{file}`: {e}")))
    }
}

fn pick_semiring(flag: Option<&str>, env: Option<&str>) -> Result<Option<SemiringId>, Fatal> {
    match flag.or(env) {
        None => Ok(None),
        Some(s) => SemiringId::from_name(s).map(Some).map_err(|e| Fatal::Usage(e.to_string())),
    }
}

fn load(file: &str, flag: Option<&str>, env: Option<&str>, stdin: &mut dyn Read) -> Result<ProofFile, Fatal> {
    let sr = pick_semiring(flag, env)?;
    let text = read_input(file, stdin)?;
    let name = if file == "-" { "<stdin>" } else { file };
    parse_file(&text, sr).map_err(|e| Fatal::Parse(format!("{name}:{e}")))
}

fn write_output(path: &str, text: &str, out: &mut dyn Write) -> Result<(), Fatal> {
    if path == "-" {
        write!(out, "{text}").map_err(|e| Fatal::Usage(e.to_string()))
    } else {
        std::fs::write(path, text).map_err(|e| Fatal::Usage(format!("cannot write `{path}`: {e}")))
    }
}

fn dispatch(cli: Cli, env: Option<&str>, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Fatal> {
    let format = cli.format;
    match cli.command {
        Command::Check { file, semiring } => {
            let pf = load(&file, semiring.as_deref(), env, stdin)?;
            let items: Vec<ItemReport> = pf.items.iter().map(|i| check_item(pf.semiring, i)).collect();
            finish(format, items, None, out)
        }
        Command::Normalize { file, output, trace, semiring } => {
            let pf = load(&file, semiring.as_deref(), env, stdin)?;
            let (items, normalized) = normalize_file(&pf, trace)?;
            let text = normalized.to_string();
            match (&output, format) {
                (Some(path), _) => write_output(path, &text, out)?,
                (None, Format::Text) => {
                    write!(out, "{text}").map_err(|e| Fatal::Usage(e.to_string()))?;
                    if trace {
                        for it in &items {
                            for s in it.trace.iter().flatten() {
                                writeln!(
                                    out,
                                    "-- trace {}: {} {} {} -> {}",
                                    it.name,
                                    s.position,
                                    s.case_family.as_str(),
                                    s.cut_rank_before,
                                    s.cut_rank_after
                                )
                                .map_err(|e| Fatal::Usage(e.to_string()))?;
                            }
                        }
                    }
                    return Ok(report_failures(&items, err));
                }
                (None, Format::Json) => {}
            }
            finish(format, items, None, out)
        }
        Command::Translate { to, file, output, semiring } => {
            let pf = load(&file, semiring.as_deref(), env, stdin)?;
            let (items, translated) = translate_file(&pf, to)?;
            let text = translated.to_string();
            match (&output, format) {
                (Some(path), _) => write_output(path, &text, out)?,
                (None, Format::Text) => {
                    write!(out, "{text}").map_err(|e| Fatal::Usage(e.to_string()))?;
                    return Ok(report_failures(&items, err));
                }
                (None, Format::Json) => {}
            }
            finish(format, items, None, out)
        }
        Command::Infer { file, semiring } => {
            let pf = load(&file, semiring.as_deref(), env, stdin)?;
            let mut items = Vec::new();
            let mut trees = Vec::new();
            for item in &pf.items {
                if let Item::Goal { name, judgment } = item {
                    match elaborate_nd(pf.semiring, judgment) {
                        Ok(d) => {
                            trees.push((name.clone(), with_root_conclusion(&d)));
                            items.push(ok_item(name, &d.concl.to_string()));
                        }
                        Err(e @ InferError::Rule(_)) => return Err(Fatal::Internal(e.to_string())),
                        Err(e) => items.push(failed_item(name, e.to_string())),
                    }
                } else {
                    items.push(check_item(pf.semiring, item));
                }
            }
            if format == Format::Text {
                let elaborated = ProofFile {
                    semiring: pf.semiring,
                    atoms: pf.atoms.clone(),
                    items: trees.into_iter().map(|(name, t)| Item::Deriv { name, tree: Tree::Nd(t) }).collect(),
                };
                write!(out, "{elaborated}\n").map_err(|e| Fatal::Usage(e.to_string()))?;
            }
            finish(format, items, None, out)
        }
        Command::Eq { file, first, second, semiring } => {
            let pf = load(&file, semiring.as_deref(), env, stdin)?;
            let a = sc_item(&pf, &first)?;
            let b = sc_item(&pf, &second)?;
            let items = vec![ok_item(&first, &a.concl.to_string()), ok_item(&second, &b.concl.to_string())];
            let items: Vec<ItemReport> = items
                .into_iter()
                .zip([&a, &b])
                .map(|(mut i, d)| {
                    i.cut_free = !d.has_cut();
                    i
                })
                .collect();
            match equiv_oracle(pf.semiring, &a, &b) {
                Ok(v) => {
                    if format == Format::Text {
                        writeln!(out, "{}", v.as_str()).map_err(|e| Fatal::Usage(e.to_string()))?;
                        return Ok(if v == crate::eq_theory::Verdict::Equal { 0 } else { 1 });
                    }
                    let code = if v == crate::eq_theory::Verdict::Equal { 0 } else { 1 };
                    let r = Report { status: if code == 0 { "ok" } else { "failed" }, items, verdict: Some(v.as_str()), errors: vec![] };
                    writeln!(out, "{}", serde_json::to_string_pretty(&r).expect("report serializes"))
                        .map_err(|e| Fatal::Usage(e.to_string()))?;
                    Ok(code)
                }
                Err(EqError::ConclusionMismatch(x, y)) => {
                    let msg = format!("the derivations conclude different judgments: {x} and {y}");
                    if format == Format::Text {
                        writeln!(out, "unknown: {msg}").map_err(|e| Fatal::Usage(e.to_string()))?;
                        return Ok(1);
                    }
                    let r = Report { status: "failed", items, verdict: None, errors: vec![msg] };
                    writeln!(out, "{}", serde_json::to_string_pretty(&r).expect("report serializes"))
                        .map_err(|e| Fatal::Usage(e.to_string()))?;
                    Ok(1)
                }
                Err(EqError::Cut(e)) => Err(cut_fatal(e)),
                Err(e) => Err(Fatal::Internal(e.to_string())),
            }
        }
    }
}

/// Text mode for commands whose stdout is a proof file: failures go to stderr.
fn report_failures(items: &[ItemReport], err: &mut dyn Write) -> i32 {
    for i in items {
        for e in &i.errors {
            let _ = writeln!(err, "mgl: {}: {e}", i.name);
        }
    }
    exit_for(items)
}

fn exit_for(items: &[ItemReport]) -> i32 {
    if items.iter().all(|i| i.errors.is_empty()) {
        0
    } else {
        1
    }
}

fn finish(format: Format, items: Vec<ItemReport>, verdict: Option<&'static str>, out: &mut dyn Write) -> Result<i32, Fatal> {
    let code = exit_for(&items);
    let w = |e: std::io::Error| Fatal::Usage(e.to_string());
    match format {
        Format::Json => {
            let r = Report { status: if code == 0 { "ok" } else { "failed" }, items, verdict, errors: vec![] };
            writeln!(out, "{}", serde_json::to_string_pretty(&r).expect("report serializes")).map_err(w)?;
        }
        Format::Text => {
            for i in &items {
                match (&i.judgment, i.errors.first()) {
                    (Some(j), None) => {
                        let tag = if i.cut_free { "" } else { " (has cuts)" };
                        writeln!(out, "ok {}{tag}: {j}", i.name).map_err(w)?;
                    }
                    (_, Some(_)) => {
                        for e in &i.errors {
                            writeln!(out, "FAIL {}: {e}", i.name).map_err(w)?;
                        }
                    }
                    (None, None) => writeln!(out, "ok {}", i.name).map_err(w)?,
                }
            }
            let failed = items.iter().filter(|i| !i.errors.is_empty()).count();
            writeln!(out, "{} item(s), {} failed", items.len(), failed).map_err(w)?;
        }
    }
    Ok(code)
}

fn ok_item(name: &str, judgment: &str) -> ItemReport {
    ItemReport { name: name.to_string(), judgment: Some(judgment.to_string()), cut_free: true, errors: vec![], trace: None }
}

fn failed_item(name: &str, error: String) -> ItemReport {
    ItemReport { name: name.to_string(), judgment: None, cut_free: false, errors: vec![error], trace: None }
}

fn check_error(e: &CheckError) -> String {
    e.to_string()
}

/// Checks a derivation or elaborates a goal.
pub fn check_item(sr: SemiringId, item: &Item) -> ItemReport {
    match item {
        Item::Deriv { name, tree: Tree::Sc(n) } => match n.check(sr) {
            Ok(d) => {
                let mut r = ok_item(name, &d.concl.to_string());
                r.cut_free = !d.has_cut();
                r
            }
            Err(e) => failed_item(name, check_error(&e)),
        },
        Item::Deriv { name, tree: Tree::Nd(n) } => match n.check(sr) {
            Ok(d) => ok_item(name, &d.concl.to_string()),
            Err(e) => failed_item(name, check_error(&e)),
        },
        Item::Goal { name, judgment } => match elaborate_nd(sr, judgment) {
            Ok(_) => ok_item(name, &judgment.to_string()),
            Err(e) => failed_item(name, e.to_string()),
        },
    }
}

fn with_root_conclusion<R: Rule>(d: &Deriv<R>) -> Node<R> {
    let mut n = d.to_bare_node();
    n.conclude = Some(d.concl.clone());
    n
}

fn normalize_file(pf: &ProofFile, trace: bool) -> Result<(Vec<ItemReport>, ProofFile), Fatal> {
    let mut items = Vec::new();
    let mut out = ProofFile { semiring: pf.semiring, atoms: pf.atoms.clone(), items: vec![] };
    for item in &pf.items {
        match item {
            Item::Deriv { name, tree: Tree::Sc(n) } => match n.check(pf.semiring) {
                Ok(d) => {
                    let norm = eliminate_cuts(pf.semiring, &d).map_err(cut_fatal)?;
                    let mut r = ok_item(name, &norm.deriv.concl.to_string());
                    r.cut_free = !norm.deriv.has_cut();
                    if trace {
                        r.trace = Some(norm.trace);
                    }
                    items.push(r);
                    out.items.push(Item::Deriv { name: name.clone(), tree: Tree::Sc(with_root_conclusion(&norm.deriv)) });
                }
                Err(e) => {
                    items.push(failed_item(name, check_error(&e)));
                    out.items.push(item.clone());
                }
            },
            other => {
                items.push(check_item(pf.semiring, other));
                out.items.push(other.clone());
            }
        }
    }
    Ok((items, out))
}

fn translate_file(pf: &ProofFile, to: Target) -> Result<(Vec<ItemReport>, ProofFile), Fatal> {
    let sr = pf.semiring;
    let mut items = Vec::new();
    let mut out = ProofFile { semiring: sr, atoms: pf.atoms.clone(), items: vec![] };
    for item in &pf.items {
        let (report, tree) = match (item, to) {
            (Item::Deriv { name, tree: Tree::Sc(n) }, Target::Nd) => match n.check(sr) {
                Ok(d) => {
                    let nd: NdDeriv = sc_to_nd(sr, &d).map_err(|e| Fatal::Internal(e.to_string()))?;
                    same_or_fatal(&d.concl, &nd.concl)?;
                    (ok_item(name, &nd.concl.to_string()), Some(Tree::Nd(with_root_conclusion(&nd))))
                }
                Err(e) => (failed_item(name, check_error(&e)), None),
            },
            (Item::Deriv { name, tree: Tree::Nd(n) }, Target::Sc) => match n.check(sr) {
                Ok(d) => {
                    let sc: ScDeriv = nd_to_sc(sr, &d).map_err(|e| Fatal::Internal(e.to_string()))?;
                    same_or_fatal(&d.concl, &sc.concl)?;
                    let mut r = ok_item(name, &sc.concl.to_string());
                    r.cut_free = !sc.has_cut();
                    (r, Some(Tree::Sc(with_root_conclusion(&sc))))
                }
                Err(e) => (failed_item(name, check_error(&e)), None),
            },
            (other, _) => (check_item(sr, other), None),
        };
        items.push(report);
        match (tree, item) {
            (Some(t), Item::Deriv { name, .. }) => out.items.push(Item::Deriv { name: name.clone(), tree: t }),
            _ => out.items.push(item.clone()),
        }
    }
    Ok((items, out))
}

fn same_or_fatal(a: &crate::syntax::Judgment, b: &crate::syntax::Judgment) -> Result<(), Fatal> {
    if a.alpha_eq(b) {
        Ok(())
    } else {
        Err(Fatal::Internal(format!("translation changed {a} into {b}")))
    }
}

/// A named item as a checked sequent derivation; natural-deduction items are
/// translated first.
fn sc_item(pf: &ProofFile, name: &str) -> Result<ScDeriv, Fatal> {
    let sr = pf.semiring;
    let item = pf.item(name).ok_or_else(|| Fatal::Usage(format!("no item named `{name}`")))?;
    let bad = |e: CheckError| Fatal::Usage(format!("`{name}` does not check: {e}"));
    match item {
        Item::Deriv { tree: Tree::Sc(n), .. } => n.check(sr).map_err(bad),
        Item::Deriv { tree: Tree::Nd(n), .. } => {
            let d = n.check(sr).map_err(bad)?;
            nd_to_sc(sr, &d).map_err(|e| Fatal::Internal(e.to_string()))
        }
        Item::Goal { .. } => Err(Fatal::Usage(format!("`{name}` is a goal, not a derivation"))),
    }
}
