//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{corpus, Checked, ALL_SEMIRINGS};
use mgl_core::cut_elim::{check_subformula, eliminate_cuts, lin_grd_example, CaseFamily};
use mgl_core::deriv::Frag;
use mgl_core::derived::*;
use mgl_core::eq_theory::{apply_eq_rule, equiv_oracle, Verdict, EQ_RULES};
use mgl_core::gen::{gen_nd_derivation, gen_sc_derivation, Gen, GenConfig};
use mgl_core::infer::{elaborate_nd, Infer};
use mgl_core::parser::{parse_file, Item, Tree};
use mgl_core::sc::{ScDeriv, ScRule};
use mgl_core::translate::{nd_to_sc, sc_to_nd};
use mgl_core::*;

type Outcome = Result<String, String>;

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("semiring laws", semiring_laws),
        ("promotion example", promotion_example),
        ("box and graded-implication lemmas", lemmas),
        ("Grd distributes over ><", grd_distribution),
        ("cut elimination", cut_elimination),
        ("interderivability", interderivability),
        ("substitution lemma", substitution_lemma),
        ("equational rewrites", equational_rewrites),
        ("CLI golden invocations", cli_golden),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = started.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("PASS {} {name} ({detail}; {secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn wide_grade(sr: SemiringId, rng: &mut ChaCha8Rng) -> Grade {
    let lit = match sr {
        SemiringId::NatExact | SemiringId::NatLeq => rng.gen_range(0..1000u32).to_string(),
        SemiringId::N01w => ["0", "1", "w"].choose(rng).unwrap().to_string(),
        SemiringId::Sec => ["Lo", "Hi"].choose(rng).unwrap().to_string(),
        SemiringId::Rat => format!("{}/{}", rng.gen_range(0..200u32), rng.gen_range(1..30u32)),
    };
    sr.parse_grade(&lit).unwrap()
}

/// A grade at or above `g`, so monotonicity is exercised on related pairs.
fn grade_above(sr: SemiringId, g: &Grade, rng: &mut ChaCha8Rng) -> Grade {
    for _ in 0..20 {
        let c = wide_grade(sr, rng);
        let up = sr.add(g, &c).unwrap();
        if sr.leq(g, &up).unwrap() && rng.gen_bool(0.7) {
            return up;
        }
        if sr.leq(g, &c).unwrap() {
            return c;
        }
    }
    g.clone()
}

fn semiring_laws() -> Outcome {
    const CASES: usize = 1000;
    let started = Instant::now();
    let mut related = 0;
    for sr in ALL_SEMIRINGS {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (zero, one) = (sr.zero(), sr.one());
        for _ in 0..CASES {
            let a = wide_grade(sr, &mut rng);
            let b = wide_grade(sr, &mut rng);
            let c = wide_grade(sr, &mut rng);
            let add = |x: &Grade, y: &Grade| sr.add(x, y).unwrap();
            let mul = |x: &Grade, y: &Grade| sr.mul(x, y).unwrap();
            let leq = |x: &Grade, y: &Grade| sr.leq(x, y).unwrap();
            let ctx = || format!("{sr}: a={a} b={b} c={c}");
            ensure(add(&add(&a, &b), &c) == add(&a, &add(&b, &c)), || format!("+ associativity, {}", ctx()))?;
            ensure(add(&a, &b) == add(&b, &a), || format!("+ commutativity, {}", ctx()))?;
            ensure(add(&a, &zero) == a && add(&zero, &a) == a, || format!("+ unit, {}", ctx()))?;
            ensure(mul(&mul(&a, &b), &c) == mul(&a, &mul(&b, &c)), || format!("* associativity, {}", ctx()))?;
            ensure(mul(&a, &one) == a && mul(&one, &a) == a, || format!("* unit, {}", ctx()))?;
            ensure(mul(&a, &add(&b, &c)) == add(&mul(&a, &b), &mul(&a, &c)), || format!("left distributivity, {}", ctx()))?;
            ensure(mul(&add(&a, &b), &c) == add(&mul(&a, &c), &mul(&b, &c)), || format!("right distributivity, {}", ctx()))?;
            ensure(mul(&a, &zero) == zero && mul(&zero, &a) == zero, || format!("annihilation, {}", ctx()))?;
            ensure(leq(&a, &a), || format!("reflexivity, {}", ctx()))?;
            let b2 = grade_above(sr, &a, &mut rng);
            let c2 = grade_above(sr, &b2, &mut rng);
            if b2 != a {
                related += 1;
            }
            ensure(leq(&a, &c2), || format!("transitivity, {} <= {b2} <= {c2}", ctx()))?;
            ensure(leq(&add(&a, &c), &add(&b2, &c)), || format!("+ monotone, {} b'={b2}", ctx()))?;
            ensure(leq(&mul(&a, &c), &mul(&b2, &c)), || format!("* monotone left, {} b'={b2}", ctx()))?;
            ensure(leq(&mul(&c, &a), &mul(&c, &b2)), || format!("* monotone right, {} b'={b2}", ctx()))?;
        }
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}, limit 1s"))?;
    Ok(format!("{CASES} cases x 5 semirings, {related} strictly related pairs"))
}

fn promotion_example() -> Outcome {
    let text = std::fs::read_to_string(common::crate_dir().join("examples/promotion.mgl")).unwrap();
    let leq = parse_file(&text, Some(SemiringId::NatLeq)).map_err(|e| e.to_string())?;
    let six = Grade::nat(6);
    for name in ["promotion", "promotion_nd"] {
        let concl = match leq.item(name) {
            Some(Item::Deriv { tree: Tree::Sc(n), .. }) => n.check(SemiringId::NatLeq).map(|d| d.concl),
            Some(Item::Deriv { tree: Tree::Nd(n), .. }) => n.check(SemiringId::NatLeq).map(|d| d.concl),
            _ => return Err(format!("missing derivation {name}")),
        }
        .map_err(|e| format!("{name} in nat-leq: {e}"))?;
        ensure(concl.grades() == vec![six.clone()], || format!("{name}: grades {:?}", concl.grades()))?;
    }
    let exact = parse_file(&text, Some(SemiringId::NatExact)).map_err(|e| e.to_string())?;
    for name in ["promotion", "promotion_nd"] {
        let err = match exact.item(name) {
            Some(Item::Deriv { tree: Tree::Sc(n), .. }) => n.check(SemiringId::NatExact).err(),
            Some(Item::Deriv { tree: Tree::Nd(n), .. }) => n.check(SemiringId::NatExact).err(),
            _ => None,
        }
        .ok_or_else(|| format!("{name} unexpectedly checks in nat-exact"))?;
        ensure(err.rule.starts_with("sub"), || format!("{name} failed at {} instead of the sub node", err.rule))?;
    }
    Ok("grade 6 in SC and ND; nat-exact rejects the sub node".into())
}

fn atom_pool() -> [&'static str; 4] {
    ["A", "B", "C", "D"]
}

/// `c @ 1 : Lin(A) ; ⊢ Unlin c : A`
fn unlin_leaf(sr: SemiringId, a: &str, c: &str, ty: &LType) -> Result<ScDeriv, String> {
    let id = ScDeriv::leaf(sr, ScRule::IdMS { x: a.into(), ty: ty.clone() }).map_err(|e| e.to_string())?;
    ScDeriv::unary(sr, ScRule::LinL { x: a.into(), z: c.into(), at: 0 }, id).map_err(|e| e.to_string())
}

fn lemmas() -> Outcome {
    let mut built = 0;
    for sr in ALL_SEMIRINGS {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for i in 0..100 {
            let r = mgl_core::gen::random_grade(sr, &mut rng);
            let atom = *atom_pool().choose(&mut rng).unwrap();
            let ty = LType::atom(atom);
            let gty = GType::atom(atom);
            let tag = || format!("{sr} case {i} r={r} atom={atom}");
            let re = |what: &str, e: String| format!("{what}: {e} ({})", tag());

            let intro = derive_box_intro(sr, r.clone(), unlin_leaf(sr, "a", "c", &ty)?).map_err(|e| re("box intro", e.to_string()))?;
            intro.to_node().check(sr).map_err(|e| re("box intro recheck", e.to_string()))?;
            ensure(intro.concl.ltype() == Some(&box_type(r.clone(), ty.clone())), || re("box intro type", intro.concl.to_string()))?;

            // `c` at grade r inside the body, so the elimination has something to bind.
            let body = derive_box_intro(sr, r.clone(), unlin_leaf(sr, "b", "c", &ty)?).map_err(|e| re("body", e.to_string()))?;
            let elim = derive_box_elim(sr, intro.clone(), "c", body.clone()).map_err(|e| re("box elim", e.to_string()))?;
            elim.to_node().check(sr).map_err(|e| re("box elim recheck", e.to_string()))?;

            let d1 = ScDeriv::leaf(sr, ScRule::IdGS { x: "y".into(), ty: gty.clone() }).map_err(|e| e.to_string())?;
            let d2 = ScDeriv::leaf(sr, ScRule::IdMS { x: "x".into(), ty: ty.clone() }).map_err(|e| e.to_string())?;
            let left = derive_gimpl_left(sr, r.clone(), d1, "x", d2).map_err(|e| re("gimpl left", e.to_string()))?;
            left.to_node().check(sr).map_err(|e| re("gimpl left recheck", e.to_string()))?;

            let right = derive_gimpl_right(sr, "c", body).map_err(|e| re("gimpl right", e.to_string()))?;
            right.to_node().check(sr).map_err(|e| re("gimpl right recheck", e.to_string()))?;
            built += 4;
        }
    }
    Ok(format!("{built} derived trees re-checked"))
}

fn grd_distribution() -> Outcome {
    let mut cases: Vec<(SemiringId, Grade)> =
        ["0", "1", "w"].iter().map(|l| (SemiringId::N01w, SemiringId::N01w.parse_grade(l).unwrap())).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let n: u64 = rng.gen_range(0..10_000);
        cases.push((SemiringId::NatExact, Grade::nat(n)));
        cases.push((SemiringId::NatLeq, Grade::nat(n)));
    }
    for (sr, r) in &cases {
        let (x, y) = (GType::atom("X"), GType::atom("Y"));
        let d = derive_grd_tensor_dist(*sr, r.clone(), x.clone(), y.clone()).map_err(|e| format!("{sr} r={r}: {e}"))?;
        d.to_node().check(*sr).map_err(|e| format!("{sr} r={r} recheck: {e}"))?;
        let want = LType::lolli(
            LType::grd(r.clone(), GType::tensor(x.clone(), y.clone())),
            LType::tensor(LType::grd(r.clone(), x), LType::grd(r.clone(), y)),
        );
        ensure(d.concl.ltype() == Some(&want), || format!("{sr} r={r}: concluded {}", d.concl))?;
    }
    Ok(format!("{} grades", cases.len()))
}

fn cut_flavours(d: &ScDeriv, seen: &mut BTreeSet<&'static str>) {
    d.visit(&mut |_, n| match n.rule {
        ScRule::CutGS { .. } => {
            seen.insert("cut_GS");
        }
        ScRule::CutMS { .. } => {
            seen.insert("cut_MS");
        }
        ScRule::GCutMS { .. } => {
            seen.insert("gcut_MS");
        }
        _ => {}
    });
}

fn normalize_ok(sr: SemiringId, d: &ScDeriv, what: &str) -> Result<usize, String> {
    let out = eliminate_cuts(sr, d).map_err(|e| format!("{what}: {e}"))?;
    ensure(!out.deriv.has_cut(), || format!("{what}: cuts remain"))?;
    ensure(out.deriv.concl.same_sequent(&d.concl), || format!("{what}: {} became {}", d.concl, out.deriv.concl))?;
    ensure(check_subformula(&out.deriv), || format!("{what}: subformula property fails"))?;
    out.deriv.to_node().check(sr).map_err(|e| format!("{what}: result does not check: {e}"))?;
    let mut prev = usize::MAX;
    for s in &out.trace {
        ensure(s.cut_rank_after <= s.cut_rank_before && s.cut_rank_before <= prev, || {
            format!("{what}: cut rank went up at {} ({} -> {})", s.position, s.cut_rank_before, s.cut_rank_after)
        })?;
        prev = s.cut_rank_after;
    }
    Ok(out.trace.len())
}

fn cut_elimination() -> Outcome {
    let started = Instant::now();
    let sr = SemiringId::NatLeq;
    let ex = lin_grd_example(sr).map_err(|e| e.to_string())?;
    normalize_ok(sr, &ex, "notable example")?;
    let trace = eliminate_cuts(sr, &ex).map_err(|e| e.to_string())?.trace;
    let principal = trace.iter().filter(|s| s.case_family == CaseFamily::Principal).count();
    ensure(principal == 3, || format!("notable example has {principal} principal cases, expected 3"))?;

    let mut n = 0;
    let mut steps = 0;
    let mut flavours = BTreeSet::new();
    'outer: for seed in 0..10_000u64 {
        for sr in ALL_SEMIRINGS {
            let frag = if seed % 2 == 0 { Frag::Graded } else { Frag::Mixed };
            let d = gen_sc_derivation(sr, seed, 8, frag, true);
            if !d.has_cut() {
                continue;
            }
            ensure(d.depth() <= 8, || format!("generated depth {}", d.depth()))?;
            cut_flavours(&d, &mut flavours);
            steps += normalize_ok(sr, &d, &format!("{sr} seed {seed}"))?;
            n += 1;
            if n >= 600 {
                break 'outer;
            }
        }
    }
    for item in corpus() {
        if let Checked::Sc(d) = &item.deriv {
            cut_flavours(d, &mut flavours);
            normalize_ok(item.sr, d, &format!("{}:{}", item.file, item.name))?;
        }
    }
    ensure(flavours.len() == 3, || format!("cut flavours seen: {flavours:?}"))?;
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{n} generated derivations, {steps} reduction steps, flavours {flavours:?}"))
}

fn roundtrip_nd(sr: SemiringId, d: &mgl_core::nd::NdDeriv, what: &str) -> Result<(), String> {
    let sc = nd_to_sc(sr, d).map_err(|e| format!("{what} nd->sc: {e}"))?;
    sc.to_node().check(sr).map_err(|e| format!("{what} nd->sc image: {e}"))?;
    ensure(sc.concl.alpha_eq(&d.concl), || format!("{what}: nd->sc gave {}", sc.concl))?;
    let back = sc_to_nd(sr, &sc).map_err(|e| format!("{what} sc->nd: {e}"))?;
    back.to_node().check(sr).map_err(|e| format!("{what} sc->nd image: {e}"))?;
    ensure(back.concl.alpha_eq(&d.concl), || format!("{what}: round trip gave {}", back.concl))
}

fn roundtrip_sc(sr: SemiringId, d: &ScDeriv, what: &str) -> Result<(), String> {
    let nd = sc_to_nd(sr, d).map_err(|e| format!("{what} sc->nd: {e}"))?;
    nd.to_node().check(sr).map_err(|e| format!("{what} sc->nd image: {e}"))?;
    ensure(nd.concl.alpha_eq(&d.concl), || format!("{what}: sc->nd gave {}", nd.concl))?;
    let back = nd_to_sc(sr, &nd).map_err(|e| format!("{what} nd->sc: {e}"))?;
    back.to_node().check(sr).map_err(|e| format!("{what} nd->sc image: {e}"))?;
    ensure(back.concl.alpha_eq(&d.concl), || format!("{what}: round trip gave {}", back.concl))
}

fn interderivability() -> Outcome {
    let items = corpus();
    for item in &items {
        let what = format!("{}:{}", item.file, item.name);
        match &item.deriv {
            Checked::Sc(d) => roundtrip_sc(item.sr, d, &what)?,
            Checked::Nd(d) => roundtrip_nd(item.sr, d, &what)?,
        }
    }
    for i in 0..300u64 {
        let sr = ALL_SEMIRINGS[i as usize % 5];
        let frag = if i % 2 == 0 { Frag::Graded } else { Frag::Mixed };
        let d = gen_nd_derivation(sr, 1000 + i, 6, frag);
        roundtrip_nd(sr, &d, &format!("{sr} random {i}"))?;
    }
    Ok(format!("{} corpus derivations and 300 random", items.len()))
}

/// One substitution instance: `arg` proves the type of a block of adjacent
/// hypotheses of `body`; the substituted term must infer usage within the
/// predicted context and elaborate there exactly.
fn substitution_instance(sr: SemiringId, seed: u64, frag: Frag) -> Result<bool, String> {
    // Inference scales a unit elimination by 1, so generate only those.
    let mut cfg = GenConfig::new(5);
    cfg.unit_grade_one = true;
    let mut g = Gen::new(sr, seed, cfg);
    let body = g.nd(frag, 4);
    let gctx = body.concl.gctx().to_vec();
    if gctx.is_empty() {
        return Ok(false);
    }
    let start = g.rng.gen_range(0..gctx.len());
    let ty = gctx[start].ty.clone();
    let mut end = start + 1;
    while end < gctx.len() && gctx[end].ty == ty && g.rng.gen_bool(0.6) {
        end += 1;
    }
    let arg = g.nd_of_gtype(&ty, 3);
    let Term::G(arg_term) = arg.concl.term() else { unreachable!() };
    let xs: Vec<Name> = gctx[start..end].iter().map(|e| e.name.clone()).collect();
    let delta: Vec<Grade> = gctx[start..end].iter().map(|e| e.grade.clone()).collect();
    let scaled = sr.boxast(&delta, &arg.concl.grades(), xs.len()).map_err(|e| e.to_string())?;

    let mut predicted: GradedCtx = gctx[..start].to_vec();
    predicted.extend(arg.concl.gctx().iter().zip(scaled).map(|(e, r)| gentry(&e.name, r, e.ty.clone())));
    predicted.extend(gctx[end..].iter().cloned());
    let term = multi_subst(&body.concl.term(), &xs, &Term::G(arg_term));
    let types: Vec<(Name, GType)> = predicted.iter().map(|e| (e.name.clone(), e.ty.clone())).collect();
    let bound: Vec<Grade> = predicted.iter().map(|e| e.grade.clone()).collect();
    let infer = Infer::new(sr);
    let what = || format!("{sr} seed {seed} {frag:?}: [{} / {xs:?}] {}", arg.concl, body.concl);
    let (usage, goal) = match (&term, &body.concl) {
        (Term::G(t), Judgment::GS { ty, .. }) => {
            let (u, got) = infer.usage_gt(t, &types).map_err(|e| format!("{}: {e}", what()))?;
            ensure(&got == ty, || format!("{}: type {got}", what()))?;
            (u, Judgment::GS { gctx: predicted, term: t.clone(), ty: ty.clone() })
        }
        (Term::L(t), Judgment::MS { lctx, ty, .. }) => {
            let lin: Vec<(Name, LType)> = lctx.iter().map(|e| (e.name.clone(), e.ty.clone())).collect();
            let (u, got) = infer.usage_mt(t, &types, &lin).map_err(|e| format!("{}: {e}", what()))?;
            ensure(&got == ty, || format!("{}: type {got}", what()))?;
            (u, Judgment::MS { gctx: predicted, lctx: lctx.clone(), term: t.clone(), ty: ty.clone() })
        }
        _ => unreachable!(),
    };
    ensure(sr.vec_leq(&usage, &bound).unwrap_or(false), || format!("{}: usage {usage:?} exceeds {bound:?}", what()))?;
    let elaborated = elaborate_nd(sr, &goal).map_err(|e| format!("{}: elaboration failed: {e}", what()))?;
    ensure(elaborated.concl == goal, || format!("{}: elaborated {}", what(), elaborated.concl))?;
    Ok(true)
}

fn substitution_lemma() -> Outcome {
    let mut summary = Vec::new();
    for frag in [Frag::Graded, Frag::Mixed] {
        let mut done = 0;
        let mut seed = 0u64;
        while done < 300 {
            let sr = ALL_SEMIRINGS[seed as usize % 5];
            if substitution_instance(sr, seed, frag)? {
                done += 1;
            }
            seed += 1;
            ensure(seed < 10_000, || format!("{frag:?}: only {done} usable pairs"))?;
        }
        summary.push(format!("{done} {frag:?}"));
    }
    Ok(summary.join(", "))
}

/// Wraps `d` in two identical exchanges, so `ex-ex` and `gex-gex` have a redex.
fn double_exchange(sr: SemiringId, d: &ScDeriv) -> Option<ScDeriv> {
    let rule = match (&d.concl, d.concl.gctx().len(), d.concl.lctx().len()) {
        (Judgment::GS { .. }, n, _) if n >= 2 => ScRule::ExGS { k: 0 },
        (Judgment::MS { .. }, _, n) if n >= 2 => ScRule::ExMS { k: 0 },
        _ => return None,
    };
    let once = ScDeriv::unary(sr, rule.clone(), d.clone()).ok()?;
    ScDeriv::unary(sr, rule, once).ok()
}

fn double_gexchange(sr: SemiringId, d: &ScDeriv) -> Option<ScDeriv> {
    if d.concl.is_gs() || d.concl.gctx().len() < 2 {
        return None;
    }
    let once = ScDeriv::unary(sr, ScRule::GExMS { k: 0 }, d.clone()).ok()?;
    ScDeriv::unary(sr, ScRule::GExMS { k: 0 }, once).ok()
}

/// Weakens fresh copies in front of a graded hypothesis and contracts them
/// into it, giving redexes for the contraction unit and associativity rules.
fn contraction_redexes(sr: SemiringId, d: &ScDeriv) -> Vec<ScDeriv> {
    let Some(first) = d.concl.gctx().first().cloned() else { return vec![] };
    let gs = d.concl.is_gs();
    let weak = |x: &str, at| {
        if gs {
            ScRule::WeakGS { x: x.into(), ty: first.ty.clone(), at }
        } else {
            ScRule::WeakMS { x: x.into(), ty: first.ty.clone(), at }
        }
    };
    let cont = |x: &str, y: &str, z: &str| {
        if gs {
            ScRule::ContGS { x: x.into(), y: y.into(), z: z.into() }
        } else {
            ScRule::ContMS { x: x.into(), y: y.into(), z: z.into() }
        }
    };
    let build = || -> Result<Vec<ScDeriv>, mgl_core::deriv::CheckError> {
        let w1 = ScDeriv::unary(sr, weak("fresh_w1", 0), d.clone())?;
        let unit = ScDeriv::unary(sr, cont("fresh_w1", &first.name, "fresh_z"), w1.clone())?;
        let w2 = ScDeriv::unary(sr, weak("fresh_w2", 1), w1)?;
        let inner = ScDeriv::unary(sr, cont("fresh_w1", "fresh_w2", "fresh_u"), w2)?;
        let assoc = ScDeriv::unary(sr, cont("fresh_u", &first.name, "fresh_z"), inner)?;
        Ok(vec![unit, assoc])
    };
    build().unwrap_or_default()
}

fn equational_rewrites() -> Outcome {
    let mut hits: std::collections::BTreeMap<&str, usize> = EQ_RULES.iter().map(|r| (*r, 0)).collect();
    for seed in 0..400u64 {
        let sr = [SemiringId::NatLeq, SemiringId::N01w, SemiringId::Sec, SemiringId::Rat, SemiringId::NatExact][seed as usize % 5];
        let frag = if seed % 2 == 0 { Frag::Graded } else { Frag::Mixed };
        let base = gen_sc_derivation(sr, seed, 6, frag, seed % 3 == 0);
        let mut pool = vec![base.clone()];
        pool.extend(double_exchange(sr, &base));
        pool.extend(double_gexchange(sr, &base));
        pool.extend(contraction_redexes(sr, &base));
        for d in &pool {
            let mut positions = Vec::new();
            d.visit(&mut |p, _| positions.push(p.to_vec()));
            for rule in EQ_RULES {
                for p in &positions {
                    let Ok(e) = apply_eq_rule(sr, rule, d, p) else { continue };
                    *hits.get_mut(rule).unwrap() += 1;
                    e.to_node().check(sr).map_err(|err| format!("{rule} at {p:?} ({sr} seed {seed}): {err}"))?;
                    ensure(e.concl.alpha_eq(&d.concl), || format!("{rule} at {p:?} changed {} to {}", d.concl, e.concl))?;
                }
            }
        }
    }
    let missing: Vec<_> = hits.iter().filter(|(_, n)| **n == 0).map(|(r, _)| *r).collect();
    ensure(missing.is_empty(), || format!("rules never applied: {missing:?}"))?;

    let items = corpus();
    for item in &items {
        let d = match &item.deriv {
            Checked::Sc(d) => d.clone(),
            Checked::Nd(n) => nd_to_sc(item.sr, n).map_err(|e| e.to_string())?,
        };
        let norm = eliminate_cuts(item.sr, &d).map_err(|e| format!("{}: {e}", item.name))?;
        let v = equiv_oracle(item.sr, &d, &norm.deriv).map_err(|e| format!("{}: {e}", item.name))?;
        ensure(v == Verdict::Equal, || format!("{}:{} is not equal to its normal form", item.file, item.name))?;
    }
    let total: usize = hits.values().sum();
    Ok(format!("{total} rewrites over {} rules; {} corpus items equal to their normal forms", hits.len(), items.len()))
}

fn cli_golden() -> Outcome {
    let bin = Path::new(env!("CARGO_BIN_EXE_mgl"));
    let failures: Vec<String> = common::CASES.iter().filter_map(|c| common::verify(bin, c).err()).collect();
    ensure(failures.is_empty(), || failures.join("; "))?;
    let subcommands: BTreeSet<&str> =
        common::CASES.iter().filter_map(|c| c.args.iter().find(|a| ["check", "normalize", "translate", "infer", "eq"].contains(a)).copied()).collect();
    let codes: BTreeSet<i32> = common::CASES.iter().map(|c| c.exit).collect();
    ensure(subcommands.len() == 5, || format!("subcommands covered: {subcommands:?}"))?;
    Ok(format!("{} invocations, subcommands {subcommands:?}, exit codes {codes:?}", common::CASES.len()))
}
