mod common;

use mgl_core::deriv::{Frag, RuleError};
use mgl_core::derived::*;
use mgl_core::gen::{gen_nd_derivation, gen_sc_derivation, GenConfig, Gen};
use mgl_core::infer::{elaborate_nd, infer_usage_gt, infer_usage_mt, Infer, InferError};
use mgl_core::nd::{check_nd, NdRule};
use mgl_core::parser::{parse_judgment, parse_nd, parse_sc, parse_term};
use mgl_core::sc::{check_sc, ScDeriv, ScRule};
use mgl_core::*;
use proptest::prelude::*;

fn sc(sr: SemiringId, frag: Frag, src: &str) -> Result<Judgment, mgl_core::deriv::CheckError> {
    check_sc(sr, &parse_sc(src, sr, frag).unwrap())
}

fn nd(sr: SemiringId, frag: Frag, src: &str) -> Result<Judgment, mgl_core::deriv::CheckError> {
    check_nd(sr, &parse_nd(src, sr, frag).unwrap())
}

fn j(sr: SemiringId, src: &str) -> Judgment {
    parse_judgment(src, sr).unwrap()
}

const PROMOTION_SC: &str = "(rule Grd_R 2 (rule sub_GS [3] (rule cont_GS x y x (rule ><R (rule id_GS x X) (rule id_GS y X)))))";
const PROMOTION_ND: &str = "(rule Grd_I 2 (rule sub [3] (rule cont x y x (rule ><I (rule Id x X) (rule Id y X)))))";
const PROMOTION: &str = "MS: x @ 6 : X ; |- Grd[2] (x,x) : Grd[2](X >< X)";

#[test]
fn promotion_checks_in_both_calculi() {
    let sr = SemiringId::NatLeq;
    assert_eq!(sc(sr, Frag::Mixed, PROMOTION_SC).unwrap(), j(sr, PROMOTION));
    assert_eq!(nd(sr, Frag::Mixed, PROMOTION_ND).unwrap(), j(sr, PROMOTION));
    let e = sc(SemiringId::NatExact, Frag::Mixed, PROMOTION_SC).unwrap_err();
    assert_eq!((e.path.as_slice(), e.rule.as_str()), (&[0][..], "sub_GS"));
    assert!(matches!(e.error, RuleError::Grade(_)));
}

#[test]
fn axioms() {
    let sr = SemiringId::NatExact;
    assert_eq!(sc(sr, Frag::Graded, "(rule id_GS x X)").unwrap(), j(sr, "GS: x @ 1 : X |- x : X"));
    assert_eq!(nd(sr, Frag::Graded, "(rule Id x X)").unwrap(), j(sr, "GS: x @ 1 : X |- x : X"));
    assert_eq!(sc(sr, Frag::Mixed, "(rule id_MS y A)").unwrap(), j(sr, "MS: ; y : A |- y : A"));
}

#[test]
fn cut_scales_the_left_context() {
    let sr = SemiringId::NatLeq;
    let got = sc(sr, Frag::Graded, "(rule cut_GS x (rule id_GS a X) (rule sub_GS [2] (rule id_GS x X)))").unwrap();
    assert_eq!(got, j(sr, "GS: a @ 2 : X |- a : X"));
}

#[test]
fn multicut_uses_the_row_product() {
    let sr = SemiringId::NatExact;
    let two = sc(sr, Frag::Graded, "(rule mcut 0 2 (rule id_GS a X) (rule ><R (rule id_GS x X) (rule id_GS y X)))").unwrap();
    assert_eq!(two, j(sr, "GS: a @ 2 : X |- (a,a) : X >< X"));
    let zero = sc(sr, Frag::Graded, "(rule mcut 0 0 (rule id_GS a X) (rule id_GS y Y))").unwrap();
    assert_eq!(zero, j(sr, "GS: a @ 0 : X, y @ 1 : Y |- y : Y"));
}

#[test]
fn checker_errors_name_the_failing_node() {
    let sr = SemiringId::NatLeq;
    // Lin_R needs an empty linear context.
    let e = sc(sr, Frag::Graded, "(rule Lin_R (rule id_MS a A))").unwrap_err();
    assert!(matches!(e.error, RuleError::LinearNonEmpty), "{e}");
    assert_eq!(e.rule, "Lin_R");
    // Two premises sharing a graded name.
    let e = sc(sr, Frag::Graded, "(rule ><R (rule id_GS x X) (rule id_GS x X))").unwrap_err();
    assert!(matches!(e.error, RuleError::NameClash(_)), "{e}");
    // Contraction of hypotheses with different types.
    assert!(sc(sr, Frag::Graded, "(rule cont_GS x y z (rule ><R (rule id_GS x X) (rule id_GS y Y)))").is_err());
    // Annotated conclusion that disagrees with the computed one.
    let e = sc(sr, Frag::Graded, "(rule id_GS x X :conclude GS: x @ 2 : X |- x : X)").unwrap_err();
    assert!(matches!(e.error, RuleError::Conclude { .. }));
}

#[test]
fn natural_deduction_application() {
    let sr = SemiringId::NatExact;
    let got = nd(sr, Frag::Mixed, "(rule -oE (rule -oI a (rule Id a A)) (rule Id b A))").unwrap();
    assert_eq!(got, j(sr, "MS: ; b : A |- (\\a : A . a) b : A"));
}

#[test]
fn double_exchange_and_cont_weak_conclusions() {
    let sr = SemiringId::NatLeq;
    let base = sc(sr, Frag::Graded, "(rule ><R (rule id_GS x X) (rule id_GS y Y))").unwrap();
    let twice = sc(sr, Frag::Graded, "(rule ex_GS 0 (rule ex_GS 0 (rule ><R (rule id_GS x X) (rule id_GS y Y))))").unwrap();
    assert_eq!(base, twice);
    let unit = sc(sr, Frag::Graded, "(rule cont_GS w x x (rule weak_GS w X 0 (rule id_GS x X)))").unwrap();
    assert_eq!(unit, sc(sr, Frag::Graded, "(rule id_GS x X)").unwrap());
}

#[test]
fn constructors_reject_ill_shaped_premises() {
    let sr = SemiringId::NatLeq;
    let id = ScDeriv::leaf(sr, ScRule::IdGS { x: "x".into(), ty: GType::atom("X") }).unwrap();
    assert!(ScDeriv::unary(sr, ScRule::LinR, id.clone()).is_err());
    assert!(ScDeriv::binary(sr, ScRule::TenR, id.clone(), id.clone()).is_err());
    assert!(ScDeriv::unary(sr, ScRule::ExGS { k: 0 }, id.clone()).is_err());
    assert!(ScDeriv::unary(sr, ScRule::SubGS { to: vec![] }, id).is_err());
}

#[test]
fn box_rules() {
    let sr = SemiringId::NatExact;
    let a = LType::atom("A");
    let prem = ScDeriv::unary(
        sr,
        ScRule::LinL { x: "a".into(), z: "z".into(), at: 0 },
        ScDeriv::leaf(sr, ScRule::IdMS { x: "a".into(), ty: a.clone() }).unwrap(),
    )
    .unwrap();
    let intro = derive_box_intro(sr, Grade::nat(1), prem.clone()).unwrap();
    assert_eq!(intro.concl, j(sr, "MS: z @ 1 : Lin(A) ; |- Grd[1] Lin Unlin z : Grd[1](Lin(A))"));
    // The premise must not have linear hypotheses.
    let open = ScDeriv::leaf(sr, ScRule::IdMS { x: "a".into(), ty: a.clone() }).unwrap();
    assert!(derive_box_intro(sr, Grade::nat(1), open).is_err());

    let r = Grade::nat(3);
    let body = derive_box_intro(sr, r.clone(), prem.clone()).unwrap();
    let elim = derive_box_elim(sr, derive_box_intro(sr, r.clone(), prem.clone()).unwrap(), "z", body.clone()).unwrap();
    elim.to_node().check(sr).unwrap();
    assert_eq!(elim.concl.ltype(), Some(&box_type(r.clone(), a.clone())));
    // Wrong grade for the bound hypothesis.
    assert!(derive_box_elim(sr, derive_box_intro(sr, Grade::nat(2), prem).unwrap(), "z", body).is_err());
}

#[test]
fn graded_implication_rules() {
    let sr = SemiringId::NatExact;
    let body = ScDeriv::unary(
        sr,
        ScRule::SubMS { to: vec![Grade::nat(1)] },
        ScDeriv::unary(
            sr,
            ScRule::LinL { x: "a".into(), z: "x".into(), at: 0 },
            ScDeriv::leaf(sr, ScRule::IdMS { x: "a".into(), ty: LType::atom("A") }).unwrap(),
        )
        .unwrap(),
    )
    .unwrap();
    let right = derive_gimpl_right(sr, "x", body).unwrap();
    let want = LType::lolli(LType::grd(Grade::nat(1), GType::lin(LType::atom("A"))), LType::atom("A"));
    assert_eq!(right.concl.ltype(), Some(&want));
    assert!(right.concl.gctx().is_empty());

    let d1 = ScDeriv::leaf(sr, ScRule::IdGS { x: "y".into(), ty: GType::atom("X") }).unwrap();
    let d2 = ScDeriv::leaf(sr, ScRule::IdMS { x: "x".into(), ty: LType::atom("B") }).unwrap();
    assert!(derive_gimpl_left(sr, Grade::nat(2), d1.clone(), "nope", d2.clone()).is_err());
    let left = derive_gimpl_left(sr, Grade::nat(2), d1, "x", d2).unwrap();
    left.to_node().check(sr).unwrap();
    assert_eq!(left.concl.grades(), vec![Grade::nat(2)]);
}

#[test]
fn grd_distribution_examples() {
    let cases = [
        (SemiringId::NatExact, Grade::nat(1), GType::J, GType::J),
        (SemiringId::NatExact, Grade::nat(2), GType::atom("X"), GType::atom("Y")),
        (SemiringId::N01w, SemiringId::N01w.parse_grade("w").unwrap(), GType::atom("X"), GType::atom("Y")),
    ];
    for (sr, r, x, y) in cases {
        let d = derive_grd_tensor_dist(sr, r, x, y).unwrap();
        d.to_node().check(sr).unwrap();
        assert!(d.concl.gctx().is_empty() && d.concl.lctx().is_empty());
    }
}

#[test]
fn generator_examples() {
    for sr in SemiringId::ALL {
        let d = gen_sc_derivation(sr, 0, 1, Frag::Graded, false);
        assert_eq!(d.depth(), 0);
        assert!(d.children.is_empty());
    }
    let with_cut = (0..1000u64).filter(|s| gen_sc_derivation(SemiringId::NatLeq, *s, 6, Frag::Mixed, true).has_cut()).count();
    assert!(with_cut >= 300, "{with_cut} of 1000 have a cut");
}

#[test]
fn usage_inference_examples() {
    let x: Vec<(Name, GType)> = vec![("x".into(), GType::atom("X"))];
    let sr = SemiringId::NatExact;
    let pair = parse_term("(x, x)", sr, Frag::Graded, &["x".into()]).unwrap();
    let Term::G(pair) = pair else { panic!() };
    assert_eq!(infer_usage_gt(sr, &pair, &x).unwrap(), (vec![Grade::nat(2)], GType::tensor(GType::atom("X"), GType::atom("X"))));

    for (sr, want) in [(SemiringId::NatExact, 4), (SemiringId::NatLeq, 4)] {
        let Term::L(p) = parse_term("Grd[2] (x, x)", sr, Frag::Mixed, &["x".into()]).unwrap() else { panic!() };
        let (u, ty) = infer_usage_mt(sr, &p, &x, &[]).unwrap();
        assert_eq!(u, vec![Grade::nat(want)]);
        assert_eq!(ty.to_string(), "Grd[2](X >< X)");
    }
    // nat-leq accepts the declared 6, nat-exact does not.
    assert!(elaborate_nd(SemiringId::NatLeq, &j(SemiringId::NatLeq, PROMOTION)).is_ok());
    assert!(matches!(elaborate_nd(SemiringId::NatExact, &j(SemiringId::NatExact, PROMOTION)), Err(InferError::Grade(_))));

    let Term::L(id) = parse_term("\\y : A . y", sr, Frag::Mixed, &[]).unwrap() else { panic!() };
    let (u, ty) = infer_usage_mt(sr, &id, &[], &[]).unwrap();
    assert!(u.is_empty());
    assert_eq!(ty, LType::lolli(LType::atom("A"), LType::atom("A")));
}

#[test]
fn inference_errors() {
    let sr = SemiringId::NatLeq;
    let x: Vec<(Name, GType)> = vec![("x".into(), GType::atom("X"))];
    let Term::G(t) = parse_term("(x, z)", sr, Frag::Graded, &["x".into(), "z".into()]).unwrap() else { panic!() };
    assert!(matches!(infer_usage_gt(sr, &t, &x), Err(InferError::Unbound(_))));
    let a: Vec<(Name, LType)> = vec![("a".into(), LType::atom("A"))];
    let Term::L(t) = parse_term("(a, a)", sr, Frag::Mixed, &[]).unwrap() else { panic!() };
    assert!(matches!(infer_usage_mt(sr, &t, &[], &a), Err(InferError::LinearTwice(_))));
    let Term::L(t) = parse_term("unitI", sr, Frag::Mixed, &[]).unwrap() else { panic!() };
    assert!(matches!(infer_usage_mt(sr, &t, &[], &a), Err(InferError::LinearUnused(_))));
    let Term::L(t) = parse_term("(\\b : B . b) a", sr, Frag::Mixed, &[]).unwrap() else { panic!() };
    assert!(matches!(infer_usage_mt(sr, &t, &[], &a), Err(InferError::Mismatch(_))));
}

fn rules_of(d: &mgl_core::nd::NdDeriv) -> Vec<String> {
    let mut out = Vec::new();
    d.visit(&mut |_, n| out.push(format!("{:?}", n.rule)));
    out
}

#[test]
fn elaboration_examples() {
    let sr = SemiringId::NatLeq;
    let d = elaborate_nd(sr, &j(sr, "GS: x @ 3 : X |- (x,x) : X >< X")).unwrap();
    let rules = rules_of(&d);
    let sub = rules.iter().position(|r| r.starts_with("Sub")).expect("a sub node");
    let cont = rules.iter().position(|r| r.starts_with("ContG")).expect("a cont node");
    assert!(sub < cont, "sub sits below cont: {rules:?}");
    assert!(matches!(&d.rule, NdRule::SubG { to } if to == &vec![Grade::nat(3)]));

    let exact = elaborate_nd(sr, &j(sr, "GS: x @ 2 : X |- (x,x) : X >< X")).unwrap();
    assert!(!rules_of(&exact).iter().any(|r| r.starts_with("Sub")));

    let weak = elaborate_nd(sr, &j(sr, "GS: x @ 1 : X, w @ 0 : Y |- x : X")).unwrap();
    assert_eq!(rules_of(&weak).iter().filter(|r| r.starts_with("Weak")).count(), 1);
    assert!(elaborate_nd(sr, &j(sr, "GS: x @ 1 : X |- (x,x) : X >< X")).is_err());
    assert!(elaborate_nd(sr, &j(sr, "GS: x @ 1 : X |- x : Y")).is_err());
}

#[test]
fn strict_mode_requires_exact_unboxing() {
    let sr = SemiringId::NatLeq;
    let goal = j(sr, "MS: ; g : Grd[3](X) |- let Grd[3] v = g in Grd[1] v : Grd[1](X)");
    assert!(Infer::new(sr).elaborate(&goal).is_ok());
    assert!(Infer::new(sr).strict(true).elaborate(&goal).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn generated_trees_check_deterministically(seed in 0u64..1_000_000, k in 0usize..5, mixed in any::<bool>()) {
        let sr = SemiringId::ALL[k];
        let frag = if mixed { Frag::Mixed } else { Frag::Graded };
        let d = gen_sc_derivation(sr, seed, 6, frag, true);
        let a = check_sc(sr, &d.to_node()).unwrap();
        let b = check_sc(sr, &d.to_bare_node()).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(&a, &d.concl);
        let n = gen_nd_derivation(sr, seed, 6, frag);
        prop_assert_eq!(check_nd(sr, &n.to_bare_node()).unwrap(), n.concl.clone());
    }

    #[test]
    fn inference_elaborates_what_it_infers(seed in 0u64..1_000_000, k in 0usize..5, mixed in any::<bool>()) {
        let sr = SemiringId::ALL[k];
        let frag = if mixed { Frag::Mixed } else { Frag::Graded };
        let mut cfg = GenConfig::new(6);
        cfg.unit_grade_one = true;
        let n = Gen::new(sr, seed, cfg).nd(frag, 6);
        // Declared grades are at least the inferred usage, so the goal elaborates,
        // unless a pair eliminator's components were used at different grades:
        // inference refuses those instead of looking for a common bound.
        let e = match elaborate_nd(sr, &n.concl) {
            Ok(e) => e,
            Err(InferError::Grade(m)) if m.contains("pair components") => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(format!("{}: {e}", n.concl))),
        };
        prop_assert_eq!(check_nd(sr, &e.to_bare_node()).unwrap(), n.concl.clone());
        let again = elaborate_nd(sr, &n.concl).unwrap();
        prop_assert_eq!(again.concl, e.concl);
    }
}
