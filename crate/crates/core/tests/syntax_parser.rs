mod common;

use mgl_core::deriv::Frag;
use mgl_core::gen::{gen_nd_derivation, gen_sc_derivation};
use mgl_core::parser::*;
use mgl_core::*;
use proptest::prelude::*;

const SR: SemiringId = SemiringId::NatLeq;

fn gt(src: &str, graded: &[&str]) -> Term {
    let names: Vec<Name> = graded.iter().map(|s| s.to_string()).collect();
    parse_term(src, SR, Frag::Graded, &names).unwrap()
}

fn mt(src: &str, graded: &[&str]) -> Term {
    let names: Vec<Name> = graded.iter().map(|s| s.to_string()).collect();
    parse_term(src, SR, Frag::Mixed, &names).unwrap()
}

fn names(xs: &[&str]) -> std::collections::BTreeSet<Name> {
    xs.iter().map(|s| s.to_string()).collect()
}

#[test]
fn alpha_equivalence_examples() {
    assert!(alpha_eq(&mt("\\x : A . x", &[]), &mt("\\y : A . y", &[])));
    assert!(!alpha_eq(&gt("(x, x)", &["x", "y"]), &gt("(x, y)", &["x", "y"])));
    assert!(alpha_eq(&gt("let (a, b) = z in (a, b)", &["z"]), &gt("let (p, q) = z in (p, q)", &["z"])));
    assert!(!alpha_eq(&gt("let (a, b) = z in (a, b)", &["z"]), &gt("let (p, q) = z in (q, p)", &["z"])));
}

#[test]
fn substitution_examples() {
    let pair = gt("(x, y)", &["x", "y"]);
    assert_eq!(subst(&pair, "y", &gt("x", &["x"])), gt("(x, x)", &["x"]));
    assert_eq!(subst(&pair, "z", &gt("unitJ", &[])), pair);
    let u = gt("u", &["u"]);
    assert_eq!(multi_subst(&gt("(x1, x2)", &["x1", "x2"]), &["x1".into(), "x2".into()], &u), gt("(u, u)", &["u"]));
}

#[test]
fn substitution_avoids_capture() {
    // Substituting `a` under a binder named `a` must rename the binder.
    let body = gt("let (a, b) = z in (a, x)", &["z", "x"]);
    let out = subst(&body, "x", &gt("a", &["a"]));
    assert_eq!(free_vars(&out), names(&["z", "a"]));
    assert!(!alpha_eq(&out, &gt("let (a, b) = z in (a, a)", &["z"])));
    assert!(alpha_eq(&out, &gt("let (p, q) = z in (p, a)", &["z", "a"])));
}

#[test]
fn free_variable_examples() {
    assert_eq!(free_vars(&mt("\\x : A . x y", &[])), names(&["y"]));
    assert_eq!(free_vars(&mt("Grd[3] (x, x)", &["x"])), names(&["x"]));
    assert!(free_vars(&gt("unitJ", &[])).is_empty());
}

#[test]
fn file_examples() {
    let f = parse_file("semiring nat-leq; atom X; goal g GS: x @ 3 : X |- (x,x) : X >< X;", None).unwrap();
    assert_eq!(f.semiring, SemiringId::NatLeq);
    assert_eq!(f.items.len(), 1);
    assert!(matches!(&f.items[0], Item::Goal { judgment, .. } if judgment.is_gs()));

    let empty = parse_file("semiring rat;\n", None).unwrap();
    assert!(empty.items.is_empty());

    let f = parse_file("semiring nat-exact; goal g MS: ; y : I |- y : I;", None).unwrap();
    let Item::Goal { judgment, .. } = &f.items[0] else { panic!() };
    assert!(judgment.gctx().is_empty());
    assert_eq!(judgment.lctx().len(), 1);
}

#[test]
fn printing_examples() {
    let ty = LType::grd(Grade::nat(2), GType::tensor(GType::atom("X"), GType::atom("X")));
    assert_eq!(ty.to_string(), "Grd[2](X >< X)");
    let j = parse_judgment("MS: x @ 6 : X ; |- Grd[2] (x,x) : Grd[2](X >< X)", SR).unwrap();
    assert_eq!(j.to_string(), "MS: x @ 6 : X ; |- Grd[2] (x,x) : Grd[2](X >< X)");
}

#[test]
fn type_operators_associate_as_documented() {
    let t = parse_gtype("X >< Y >< Z", SR).unwrap();
    assert_eq!(t, GType::tensor(GType::tensor(GType::atom("X"), GType::atom("Y")), GType::atom("Z")));
    let l = parse_ltype("A -o B -o C", SR).unwrap();
    assert_eq!(l, LType::lolli(LType::atom("A"), LType::lolli(LType::atom("B"), LType::atom("C"))));
    let l = parse_ltype("A * B * C", SR).unwrap();
    assert_eq!(l, LType::tensor(LType::tensor(LType::atom("A"), LType::atom("B")), LType::atom("C")));
}

#[test]
fn errors_carry_positions() {
    let cases = [
        ("semiring nat-leq;\natom X;\ngoal g GS: x @ 3 : X |- x : ;", 3),
        ("semiring nat-exact;\ngoal g GS: x @ w : X |- x : X;", 2),
        ("semiring bogus;", 1),
        ("semiring nat-leq;\n\nderiv d GS (rule no_such_rule);", 3),
        ("semiring nat-leq;\n-- comment\n  %", 3),
    ];
    for (text, line) in cases {
        let e = parse_file(text, None).unwrap_err();
        assert_eq!(e.line, line, "{text:?}: {e}");
        assert!(e.col >= 1, "{e}");
    }
}

#[test]
fn comments_are_ignored() {
    let a = parse_file("semiring nat-leq; -- header\natom X; -- atoms\n", None).unwrap();
    let b = parse_file("semiring nat-leq; atom X;", None).unwrap();
    assert_eq!(a, b);
}

#[test]
fn corpus_round_trips() {
    let dir = common::crate_dir().join("examples");
    let mut seen = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let Ok(f) = parse_file(&std::fs::read_to_string(&path).unwrap(), None) else { continue };
        let again = parse_file(&f.to_string(), None).unwrap();
        assert_eq!(f, again, "{}", path.display());
        seen += 1;
    }
    assert!(seen >= 4);
}

fn file_of(sr: SemiringId, seed: u64) -> ProofFile {
    let frag = if seed % 2 == 0 { Frag::Graded } else { Frag::Mixed };
    let sc = gen_sc_derivation(sr, seed, 6, frag, true);
    let nd = gen_nd_derivation(sr, seed, 6, frag);
    let mut atoms: Vec<String> = ["A", "B", "X", "Y"].iter().map(|s| s.to_string()).collect();
    atoms.sort();
    ProofFile {
        semiring: sr,
        atoms,
        items: vec![
            Item::Goal { name: "goal".into(), judgment: sc.concl.clone() },
            Item::Deriv { name: "sc".into(), tree: Tree::Sc(sc.to_node()) },
            Item::Deriv { name: "nd".into(), tree: Tree::Nd(nd.to_bare_node()) },
        ],
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generated_files_round_trip(seed in 0u64..100_000, k in 0usize..5) {
        let sr = SemiringId::ALL[k];
        let f = file_of(sr, seed);
        let text = f.to_string();
        let again = parse_file(&text, None).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&f, &again);
    }

    #[test]
    fn alpha_eq_is_an_equivalence(seed in 0u64..100_000, other in 0u64..100_000) {
        let a = gen_sc_derivation(SR, seed, 5, Frag::Mixed, false).concl.term();
        let b = rebind(&a);
        let c = rebind(&b);
        let d = gen_sc_derivation(SR, other, 5, Frag::Mixed, false).concl.term();
        prop_assert!(alpha_eq(&a, &a));
        prop_assert!(alpha_eq(&a, &b) && alpha_eq(&b, &a));
        prop_assert!(alpha_eq(&b, &c) && alpha_eq(&a, &c));
        prop_assert_eq!(alpha_eq(&a, &d), alpha_eq(&d, &a));
        prop_assert_eq!(alpha_eq(&a, &d), alpha_eq(&c, &d));
    }

    #[test]
    fn singleton_multi_subst_is_subst(seed in 0u64..100_000) {
        let d = gen_sc_derivation(SR, seed, 5, Frag::Graded, false);
        let t = d.concl.term();
        let Some(x) = free_vars(&t).into_iter().next() else { return Ok(()) };
        let arg = gt("(u, unitJ)", &["u"]);
        prop_assert_eq!(multi_subst(&t, &[x.clone()], &arg), subst(&t, &x, &arg));
        let out = subst(&t, &x, &arg);
        let mut expect = free_vars(&t);
        expect.remove(&x);
        expect.insert("u".into());
        prop_assert_eq!(free_vars(&out), expect);
    }

    #[test]
    fn subst_respects_alpha(seed in 0u64..100_000) {
        let d = gen_sc_derivation(SR, seed, 5, Frag::Graded, false);
        let a = d.concl.term();
        let Some(x) = free_vars(&a).into_iter().next() else { return Ok(()) };
        let b = rebind(&a);
        prop_assert!(alpha_eq(&a, &b));
        let arg = gt("(x, unitJ)", &["x"]);
        prop_assert!(alpha_eq(&subst(&a, &x, &arg), &subst(&b, &x, &arg)));
    }
}

/// Renames every bound variable, leaving free ones alone.
fn rebind(t: &Term) -> Term {
    let free = free_vars(t);
    map_names(t, &|x| if free.contains(x) { x.to_string() } else { format!("{x}_b") })
}
