//! Scripted CLI invocations with frozen stdout and exit codes.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub stdin: Option<&'static str>,
    pub env_semiring: Option<&'static str>,
    pub exit: i32,
}

pub const CASES: &[Case] = &[
    Case { name: "check_promotion", args: &["--format", "json", "check", "examples/promotion.mgl"], stdin: None, env_semiring: None, exit: 0 },
    Case { name: "check_promotion_exact", args: &["--format", "json", "check", "examples/promotion.mgl", "--semiring", "nat-exact"], stdin: None, env_semiring: None, exit: 1 },
    Case { name: "check_env_semiring", args: &["--format", "json", "check", "examples/promotion.mgl"], stdin: None, env_semiring: Some("nat-exact"), exit: 1 },
    Case { name: "check_empty", args: &["--format", "json", "check", "examples/empty.mgl"], stdin: None, env_semiring: None, exit: 0 },
    Case { name: "check_bad_grade", args: &["--format", "json", "check", "examples/bad_grade.mgl"], stdin: None, env_semiring: None, exit: 1 },
    Case { name: "check_syntax_error", args: &["--format", "json", "check", "examples/syntax_error.mgl"], stdin: None, env_semiring: None, exit: 2 },
    Case { name: "check_unknown_flag", args: &["check", "--bogus", "examples/promotion.mgl"], stdin: None, env_semiring: None, exit: 2 },
    Case { name: "normalize_cuts", args: &["--format", "json", "normalize", "examples/cuts.mgl"], stdin: None, env_semiring: None, exit: 0 },
    Case { name: "normalize_trace", args: &["--format", "json", "normalize", "--trace", "examples/cuts.mgl"], stdin: None, env_semiring: None, exit: 0 },
    Case { name: "translate_to_nd", args: &["--format", "json", "translate", "--to", "nd", "examples/promotion.mgl"], stdin: None, env_semiring: None, exit: 0 },
    Case { name: "translate_stdin_to_sc", args: &["translate", "--to", "sc", "-"], stdin: Some(STDIN_ND), env_semiring: None, exit: 0 },
    Case { name: "infer_promotion", args: &["--format", "json", "infer", "examples/promotion.mgl"], stdin: None, env_semiring: None, exit: 0 },
    Case { name: "eq_promotion", args: &["--format", "json", "eq", "examples/promotion.mgl", "promotion", "promotion_nd"], stdin: None, env_semiring: None, exit: 0 },
    Case { name: "eq_missing_item", args: &["--format", "json", "eq", "examples/promotion.mgl", "promotion", "nope"], stdin: None, env_semiring: None, exit: 2 },
];

const STDIN_ND: &str = "semiring nat-leq;\natom X;\n\nderiv unpack GT\n  (rule ><E x y\n    (rule Id p X >< X)\n    (rule ><I\n      (rule Id x X)\n      (rule Id y X)));\n";

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture(case: &Case) -> PathBuf {
    crate_dir().join("tests/golden").join(format!("{}.out", case.name))
}

/// Runs the binary; returns (exit code, stdout).
pub fn invoke(bin: &Path, case: &Case) -> (i32, String) {
    let mut cmd = Command::new(bin);
    cmd.args(case.args).current_dir(crate_dir()).env_remove("MGL_SEMIRING");
    if let Some(s) = case.env_semiring {
        cmd.env("MGL_SEMIRING", s);
    }
    cmd.stdin(if case.stdin.is_some() { Stdio::piped() } else { Stdio::null() });
    cmd.stdout(Stdio::piped()).stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("spawn mgl");
    if let Some(text) = case.stdin {
        use std::io::Write;
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    let out = child.wait_with_output().expect("wait for mgl");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8 stdout"))
}

/// Compares one case against its fixture. With `MGL_BLESS` set, rewrites the
/// fixture instead.
pub fn verify(bin: &Path, case: &Case) -> Result<(), String> {
    let (code, stdout) = invoke(bin, case);
    let path = fixture(case);
    if std::env::var_os("MGL_BLESS").is_some() {
        std::fs::write(&path, &stdout).unwrap();
    }
    if code != case.exit {
        return Err(format!("{}: exit {code}, expected {}", case.name, case.exit));
    }
    let want = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", case.name))?;
    if want != stdout {
        return Err(format!("{}: stdout differs from {}\n--- got\n{stdout}", case.name, path.display()));
    }
    Ok(())
}

use mgl_core::nd::NdDeriv;
use mgl_core::parser::{parse_file, Item, Tree};
use mgl_core::sc::ScDeriv;
use mgl_core::SemiringId;

pub const ALL_SEMIRINGS: [SemiringId; 5] =
    [SemiringId::NatExact, SemiringId::NatLeq, SemiringId::N01w, SemiringId::Sec, SemiringId::Rat];

/// A checked derivation from the example files.
pub enum Checked {
    Sc(ScDeriv),
    Nd(NdDeriv),
}

pub struct CorpusItem {
    pub file: String,
    pub name: String,
    pub sr: SemiringId,
    pub deriv: Checked,
}

/// Every derivation in `examples/*.mgl` that checks under its own header.
pub fn corpus() -> Vec<CorpusItem> {
    let mut files: Vec<_> = std::fs::read_dir(crate_dir().join("examples"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "mgl"))
        .collect();
    files.sort();
    let mut out = Vec::new();
    for path in files {
        let text = std::fs::read_to_string(&path).unwrap();
        let Ok(pf) = parse_file(&text, None) else { continue };
        let file = path.file_name().unwrap().to_string_lossy().into_owned();
        for item in &pf.items {
            let Item::Deriv { name, tree } = item else { continue };
            let deriv = match tree {
                Tree::Sc(n) => n.check(pf.semiring).ok().map(Checked::Sc),
                Tree::Nd(n) => n.check(pf.semiring).ok().map(Checked::Nd),
            };
            if let Some(deriv) = deriv {
                out.push(CorpusItem { file: file.clone(), name: name.clone(), sr: pf.semiring, deriv });
            }
        }
    }
    out
}
