mod common;

use mgl_core::cut_elim::*;
use mgl_core::deriv::Frag;
use mgl_core::eq_theory::{apply_eq_rule, equiv_oracle, EqError, Verdict};
use mgl_core::gen::{gen_nd_derivation, gen_sc_derivation};
use mgl_core::nd::{check_nd, NdDeriv, NdRule};
use mgl_core::parser::{parse_gtype, parse_ltype, parse_nd, parse_sc};
use mgl_core::sc::{check_sc, ScDeriv, ScRule};
use mgl_core::translate::{nd_to_sc, sc_to_nd};
use mgl_core::*;
use proptest::prelude::*;

fn sc(sr: SemiringId, frag: Frag, src: &str) -> ScDeriv {
    parse_sc(src, sr, frag).unwrap().check(sr).unwrap()
}

fn nd(sr: SemiringId, frag: Frag, src: &str) -> NdDeriv {
    parse_nd(src, sr, frag).unwrap().check(sr).unwrap()
}

fn rules(d: &ScDeriv) -> Vec<ScRule> {
    let mut out = Vec::new();
    d.visit(&mut |_, n| out.push(n.rule.clone()));
    out
}

const PROMOTION_SC: &str = "(rule Grd_R 2 (rule sub_GS [3] (rule cont_GS x y x (rule ><R (rule id_GS x X) (rule id_GS y X)))))";
// Same proof with the second component routed through an identity cut.
const PROMOTION_CUT: &str = "(rule Grd_R 2 (rule sub_GS [3] (rule cont_GS x y x \
    (rule cut_GS w (rule id_GS y X) (rule ><R (rule id_GS x X) (rule id_GS w X))))))";

#[test]
fn rank_examples() {
    let sr = SemiringId::NatLeq;
    assert_eq!(rank_g(&parse_gtype("J", sr).unwrap()), 0);
    assert_eq!(rank_l(&parse_ltype("Grd[3](Lin(P))", sr).unwrap()), 2);
    assert_eq!(rank_l(&parse_ltype("A -o A", sr).unwrap()), 1);
    assert_eq!(cut_rank(&sc(sr, Frag::Mixed, PROMOTION_SC)), 0);
    // A cut on the atom X.
    assert_eq!(cut_rank(&sc(sr, Frag::Mixed, PROMOTION_CUT)), 1);
}

#[test]
fn cut_free_input_is_returned_unchanged() {
    for sr in SemiringId::ALL {
        for seed in 0..50 {
            let d = gen_sc_derivation(sr, seed, 6, Frag::Mixed, false);
            let n = eliminate_cuts(sr, &d).unwrap();
            assert_eq!(n.deriv, d);
            assert!(n.trace.is_empty());
        }
    }
}

#[test]
fn identity_cut_in_promotion_is_removed() {
    let sr = SemiringId::NatLeq;
    let d = sc(sr, Frag::Mixed, PROMOTION_CUT);
    let plain = sc(sr, Frag::Mixed, PROMOTION_SC);
    assert!(d.concl.alpha_eq(&plain.concl), "{}", d.concl);
    let n = eliminate_cuts(sr, &d).unwrap();
    assert!(!n.deriv.has_cut());
    assert_eq!(n.deriv.concl, d.concl);
    assert!(check_subformula(&n.deriv));
    assert_eq!(n.trace.len(), 1);
    assert_eq!(n.trace[0].case_family, CaseFamily::Axiom);
    assert_eq!((n.trace[0].cut_rank_before, n.trace[0].cut_rank_after), (1, 0));
}

#[test]
fn axiom_on_the_left_returns_the_right_premise() {
    for sr in [SemiringId::NatExact, SemiringId::Rat, SemiringId::Sec] {
        let d = sc(sr, Frag::Graded, "(rule cut_GS w (rule id_GS y X) (rule ><R (rule id_GS w X) (rule id_GS x X)))");
        let (out, cases) = reduce_cut(sr, &d).unwrap();
        assert_eq!(cases, vec![CaseFamily::Axiom]);
        assert_eq!(out.concl, d.concl);
        assert_eq!(out.to_node(), sc(sr, Frag::Graded, "(rule ><R (rule id_GS y X) (rule id_GS x X))").to_node());
        assert_eq!(out.concl.gctx()[0].grade, sr.one());
    }
}

#[test]
fn principal_lin_case_cuts_the_premises() {
    let sr = SemiringId::NatLeq;
    let left = "(rule Lin_R (rule -oR a (rule id_MS a A)))";
    let right = "(rule Lin_L z x 0 (rule id_MS z (A -o A)))";
    let d = sc(sr, Frag::Mixed, &format!("(rule gcut_MS x {left} {right})"));
    assert_eq!(cut_rank(&d), 3);
    let (out, cases) = reduce_cut(sr, &d).unwrap();
    assert_eq!(cases[0], CaseFamily::Principal);
    assert!(out.concl.same_sequent(&d.concl));
    assert!(cut_rank(&out) <= 2);
    assert!(!rules(&out).iter().any(|r| matches!(r, ScRule::LinL { .. } | ScRule::LinR)));
}

#[test]
fn notable_example_takes_three_principal_steps() {
    for sr in SemiringId::ALL {
        let d = lin_grd_example(sr).unwrap();
        let n = eliminate_cuts(sr, &d).unwrap();
        let principal = n.trace.iter().filter(|s| s.case_family == CaseFamily::Principal).count();
        assert_eq!(principal, 3, "{:?}", n.trace);
        assert!(n.deriv.concl.same_sequent(&d.concl));
        // the eta-expanded identity on Lin A
        let shape = rules(&n.deriv);
        assert!(matches!(shape.as_slice(), [ScRule::LinR, ScRule::LinL { .. }, ScRule::IdMS { .. }]), "{shape:?}");
        for w in n.trace.windows(2) {
            assert!(w[1].cut_rank_before <= w[0].cut_rank_before);
        }
    }
}

#[test]
fn grafted_tree_fails_the_subformula_check() {
    let sr = SemiringId::NatLeq;
    let mut d = sc(sr, Frag::Graded, "(rule cont_GS x y x (rule ><R (rule id_GS x X) (rule id_GS y X)))");
    assert!(check_subformula(&d));
    // Swap a leaf for one about an unrelated atom.
    d.children[0].children[1] = sc(sr, Frag::Graded, "(rule id_GS y Y)");
    assert!(!check_subformula(&d));
    assert!(!check_subformula(&sc(sr, Frag::Mixed, PROMOTION_CUT)));
}

#[test]
fn translation_keeps_the_promotion_term() {
    let sr = SemiringId::NatLeq;
    let d = sc(sr, Frag::Mixed, PROMOTION_SC);
    let n = sc_to_nd(sr, &d).unwrap();
    assert_eq!(n.concl, d.concl);
    assert_eq!(check_nd(sr, &n.to_bare_node()).unwrap(), d.concl);
    let back = nd_to_sc(sr, &n).unwrap();
    assert!(back.concl.alpha_eq(&d.concl));
}

#[test]
fn axioms_translate_to_axioms() {
    let sr = SemiringId::NatExact;
    let n = sc_to_nd(sr, &sc(sr, Frag::Graded, "(rule id_GS x X)")).unwrap();
    assert!(matches!(n.rule, NdRule::IdG { .. }) && n.children.is_empty());
    let s = nd_to_sc(sr, &nd(sr, Frag::Graded, "(rule Id x X)")).unwrap();
    assert!(matches!(s.rule, ScRule::IdGS { .. }) && s.children.is_empty());
}

#[test]
fn cut_translates_to_substitution() {
    let sr = SemiringId::NatLeq;
    let d = sc(sr, Frag::Graded, "(rule cut_GS w (rule ><R (rule id_GS a X) (rule id_GS b Y)) (rule ><R (rule id_GS x X) (rule id_GS w X >< Y)))");
    let left = d.children[0].concl.term();
    let right = d.children[1].concl.term();
    let expect = multi_subst(&right, &["w".to_string()], &left);
    let n = sc_to_nd(sr, &d).unwrap();
    assert!(alpha_eq(&n.concl.term(), &expect), "{}", n.concl);
    assert!(n.concl.alpha_eq(&d.concl));
}

#[test]
fn eliminations_become_left_rules_under_cuts() {
    let sr = SemiringId::NatExact;
    let app = nd(sr, Frag::Mixed, "(rule -oE (rule Id f (A -o B)) (rule Id a A))");
    let s = nd_to_sc(sr, &app).unwrap();
    assert!(s.concl.alpha_eq(&app.concl));
    let r = rules(&s);
    assert!(r.iter().any(|r| matches!(r, ScRule::LolliL { .. })), "{r:?}");
    assert!(s.has_cut());

    let unbox = nd(sr, Frag::Mixed, "(rule Grd_E x 0 (rule Id g Grd[2](X)) (rule Grd_I 2 (rule Id x X)))");
    let s = nd_to_sc(sr, &unbox).unwrap();
    assert!(s.concl.alpha_eq(&unbox.concl));
    let r = rules(&s);
    assert!(r.iter().any(|r| matches!(r, ScRule::GrdL { .. })), "{r:?}");
    assert!(s.has_cut());
    assert!(!eliminate_cuts(sr, &s).unwrap().deriv.has_cut());
}

#[test]
fn eq_rule_examples() {
    let sr = SemiringId::NatLeq;
    let d = sc(sr, Frag::Graded, "(rule cont_GS w x x (rule weak_GS w X 0 (rule id_GS x X)))");
    let out = apply_eq_rule(sr, "contr-unitL", &d, &[]).unwrap();
    assert!(matches!(out.rule, ScRule::IdGS { .. }));
    assert_eq!(out.concl, d.concl);

    let pair = sc(sr, Frag::Graded, "(rule ><R (rule id_GS x X) (rule id_GS y Y))");
    let d = sc(sr, Frag::Graded, "(rule ex_GS 0 (rule ex_GS 0 (rule ><R (rule id_GS x X) (rule id_GS y Y))))");
    assert_eq!(apply_eq_rule(sr, "ex-ex", &d, &[]).unwrap(), pair);

    let d = sc(sr, Frag::Graded, "(rule sub_GS [3] (rule sub_GS [2] (rule id_GS x X)))");
    let out = apply_eq_rule(sr, "sub-trans", &d, &[]).unwrap();
    assert!(matches!(&out.rule, ScRule::SubGS { to } if to == &vec![Grade::nat(3)]));
    assert!(matches!(out.children[0].rule, ScRule::IdGS { .. }));
    assert_eq!(out.concl, d.concl);

    assert!(matches!(apply_eq_rule(sr, "ex-ex", &pair, &[]), Err(EqError::Shape { .. })));
    assert!(matches!(apply_eq_rule(sr, "no-such-rule", &pair, &[]), Err(EqError::UnknownRule(_))));
    assert!(matches!(apply_eq_rule(sr, "ex-ex", &pair, &[7]), Err(EqError::NoSuchPosition(_))));
}

#[test]
fn oracle_examples() {
    let sr = SemiringId::NatLeq;
    let d = lin_grd_example(sr).unwrap();
    let n = eliminate_cuts(sr, &d).unwrap().deriv;
    assert_eq!(equiv_oracle(sr, &d, &n).unwrap(), Verdict::Equal);

    let xy = sc(sr, Frag::Graded, "(rule ><R (rule id_GS x X) (rule id_GS y X))");
    let yx = sc(sr, Frag::Graded, "(rule ex_GS 0 (rule ><R (rule id_GS y X) (rule id_GS x X)))");
    assert!(xy.concl.same_sequent(&yx.concl));
    assert_eq!(equiv_oracle(sr, &xy, &yx).unwrap(), Verdict::Unknown);

    let other = sc(sr, Frag::Graded, "(rule id_GS x Y)");
    assert!(matches!(equiv_oracle(sr, &xy, &other), Err(EqError::ConclusionMismatch(..))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn nd_to_sc_then_cut_elimination_is_cut_free(seed in 0u64..1_000_000, k in 0usize..5, mixed in any::<bool>()) {
        let sr = SemiringId::ALL[k];
        let frag = if mixed { Frag::Mixed } else { Frag::Graded };
        let n = gen_nd_derivation(sr, seed, 6, frag);
        let s = nd_to_sc(sr, &n).unwrap();
        prop_assert_eq!(check_sc(sr, &s.to_node()).unwrap(), s.concl.clone());
        prop_assert!(s.concl.alpha_eq(&n.concl));
        let out = eliminate_cuts(sr, &s).unwrap().deriv;
        prop_assert!(!out.has_cut());
        prop_assert!(out.concl.same_sequent(&n.concl));
        prop_assert!(check_subformula(&out));
    }

    #[test]
    fn trace_ranks_never_increase(seed in 0u64..1_000_000, k in 0usize..5) {
        let sr = SemiringId::ALL[k];
        let d = gen_sc_derivation(sr, seed, 7, Frag::Mixed, true);
        let n = eliminate_cuts(sr, &d).unwrap();
        for s in &n.trace {
            prop_assert!(s.cut_rank_after <= s.cut_rank_before);
        }
        for w in n.trace.windows(2) {
            prop_assert!(w[1].cut_rank_before <= w[0].cut_rank_after);
        }
        prop_assert_eq!(n.deriv.concl.same_sequent(&d.concl), true);
    }
}
