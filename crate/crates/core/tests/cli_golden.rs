mod common;

use std::path::Path;

#[test]
fn golden_invocations() {
    let bin = Path::new(env!("CARGO_BIN_EXE_mgl"));
    let failures: Vec<String> = common::CASES.iter().filter_map(|c| common::verify(bin, c).err()).collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn text_check_reports_grade() {
    let c = common::Case { name: "adhoc", args: &["check", "examples/promotion.mgl"], stdin: None, env_semiring: None, exit: 0 };
    let (code, out) = common::invoke(Path::new(env!("CARGO_BIN_EXE_mgl")), &c);
    assert_eq!(code, 0);
    assert!(out.contains("ok promotion: MS: x @ 6 : X ;"), "{out}");
}

#[test]
fn normalize_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.mgl");
    let bin = env!("CARGO_BIN_EXE_mgl");
    let st = std::process::Command::new(bin)
        .args(["normalize", "examples/cuts.mgl", "-o"])
        .arg(&target)
        .current_dir(common::crate_dir())
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0));
    let text = std::fs::read_to_string(&target).unwrap();
    let pf = mgl_core::parser::parse_file(&text, None).unwrap();
    for item in &pf.items {
        let r = mgl_core::cli::check_item(pf.semiring, item);
        assert!(r.errors.is_empty() && r.cut_free, "{}: {:?}", r.name, r.errors);
    }
    assert_eq!(pf.items.len(), 6);
}
