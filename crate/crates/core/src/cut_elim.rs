//! Cut elimination for the sequent calculus.
//!
//! Each step picks the topmost, leftmost cut of greatest rank and pushes it
//! upward until it meets an axiom or the rule introducing the cut formula on
//! both sides. A principal reduction leaves cuts on strictly smaller formulas
//! behind; those are picked up by later steps. Rebuilt nodes are brought back
//! to the expected context order with exchanges.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::deriv::{multicut_ctx, path_string, splice, CheckError, Deriv, Frag, Rule};
use crate::sc::{ScDeriv, ScRule};
use crate::semiring::{Grade, SemiringId};
use crate::syntax::*;

pub fn rank_g(t: &GType) -> usize {
    match t {
        GType::Atom(_) | GType::J => 0,
        GType::Tensor(a, b) => 1 + rank_g(a).max(rank_g(b)),
        GType::Lin(a) => 1 + rank_l(a),
    }
}

pub fn rank_l(t: &LType) -> usize {
    match t {
        LType::Atom(_) | LType::I => 0,
        LType::Tensor(a, b) | LType::Lolli(a, b) => 1 + rank_l(a).max(rank_l(b)),
        LType::Grd(_, x) => 1 + rank_g(x),
    }
}

pub fn rank(f: &Formula) -> usize {
    match f {
        Formula::G(t) => rank_g(t),
        Formula::L(t) => rank_l(t),
    }
}

/// The formula a cut node cuts on.
pub fn cut_formula(d: &ScDeriv) -> Option<Formula> {
    if !d.rule.is_cut() {
        return None;
    }
    Some(d.children[0].concl.formula())
}

/// 0 for a cut-free tree, otherwise one more than the largest cut rank.
pub fn cut_rank(d: &ScDeriv) -> usize {
    let mut best = 0;
    d.visit(&mut |_, n| {
        if let Some(f) = cut_formula(n) {
            best = best.max(rank(&f) + 1);
        }
    });
    best
}

fn max_rank_cuts(d: &ScDeriv, cr: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    d.visit(&mut |p, n| {
        if let Some(f) = cut_formula(n) {
            if rank(&f) + 1 == cr {
                out.push(p.to_vec());
            }
        }
    });
    out
}

/// Topmost (no cut of the same rank above it), then leftmost.
fn select(d: &ScDeriv, cr: usize) -> Option<Vec<usize>> {
    let all = max_rank_cuts(d, cr);
    all.iter().find(|p| !all.iter().any(|q| q.len() > p.len() && q.starts_with(p))).cloned()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseFamily {
    #[serde(rename = "Commuting Conversions")]
    Commuting,
    #[serde(rename = "η-Expansions")]
    EtaExpansion,
    #[serde(rename = "Axiom Cases")]
    Axiom,
    #[serde(rename = "Principal Formula vs Principal Formula")]
    Principal,
    #[serde(rename = "Secondary Conclusion")]
    SecondaryConclusion,
    #[serde(rename = "Secondary Hypothesis")]
    SecondaryHypothesis,
    #[serde(rename = "Structural")]
    Structural,
}

impl CaseFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseFamily::Commuting => "Commuting Conversions",
            CaseFamily::EtaExpansion => "η-Expansions",
            CaseFamily::Axiom => "Axiom Cases",
            CaseFamily::Principal => "Principal Formula vs Principal Formula",
            CaseFamily::SecondaryConclusion => "Secondary Conclusion",
            CaseFamily::SecondaryHypothesis => "Secondary Hypothesis",
            CaseFamily::Structural => "Structural",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub position: String,
    #[serde(rename = "case-family")]
    pub case_family: CaseFamily,
    pub cut_rank_before: usize,
    pub cut_rank_after: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CutError {
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("internal error in cut elimination: {0}")]
    Invariant(String),
    #[error("cut measure did not decrease at {position}: {detail}")]
    Measure { position: String, detail: String },
}

type R<T> = Result<T, CutError>;

fn bug<T>(msg: impl Into<String>) -> R<T> {
    Err(CutError::Invariant(msg.into()))
}

#[derive(Debug, Clone)]
pub struct Normalized {
    pub deriv: ScDeriv,
    pub trace: Vec<TraceStep>,
}

/// Repeats single cut reductions until no cut is left.
pub fn eliminate_cuts(sr: SemiringId, d: &ScDeriv) -> R<Normalized> {
    let mut cur = d.clone();
    let mut trace = Vec::new();
    loop {
        let before = cut_rank(&cur);
        if before == 0 {
            break;
        }
        let pos = select(&cur, before).expect("a cut of the current rank exists");
        let node = cur.at(&pos).expect("selected position exists");
        let count_before = max_rank_cuts(&cur, before).len();
        let (reduced, cases) = reduce_with(sr, node, &cur.every_name())?;
        let local = cut_rank(&reduced);
        if local >= before {
            return Err(CutError::Measure {
                position: path_string(&pos),
                detail: format!("reduced subtree still has cut rank {local}"),
            });
        }
        let next = cur.replace_at(sr, &pos, reduced)?;
        let after = cut_rank(&next);
        let decreased = after < before || (after == before && max_rank_cuts(&next, after).len() < count_before);
        if !decreased {
            return Err(CutError::Measure { position: path_string(&pos), detail: format!("cut rank {before} -> {after}") });
        }
        // one entry per case; the rank only drops once the step is complete
        let last = cases.len().saturating_sub(1);
        for (i, case_family) in cases.into_iter().enumerate() {
            let cut_rank_after = if i == last { after } else { before };
            trace.push(TraceStep { position: path_string(&pos), case_family, cut_rank_before: before, cut_rank_after });
        }
        cur = next;
    }
    if !cur.concl.same_sequent(&d.concl) {
        return bug(format!("conclusion changed from {} to {}", d.concl, cur.concl));
    }
    Ok(Normalized { deriv: cur, trace })
}

/// Reduces the cut at the root of `d` away. Cuts in the result are on
/// strictly smaller formulas, provided none of the cuts above `d` are on
/// formulas of the same rank.
/// Also returns the cases applied, outermost first.
pub fn reduce_cut(sr: SemiringId, d: &ScDeriv) -> R<(ScDeriv, Vec<CaseFamily>)> {
    reduce_with(sr, d, &BTreeSet::new())
}

fn reduce_with(sr: SemiringId, d: &ScDeriv, avoid: &BTreeSet<Name>) -> R<(ScDeriv, Vec<CaseFamily>)> {
    use ScRule::*;
    let mut red = Reducer { sr, supply: NameSupply::avoiding(avoid.iter().cloned().chain(d.every_name())), cases: vec![] };
    let target = Target::of(&d.concl);
    let out = match &d.rule {
        CutGS { x } | GCutMS { x } => {
            let (n, body, x) = red.separate(&d.children[0], &d.children[1], x);
            let p = body.concl.find_graded(&x).expect("cut hypothesis");
            red.red_g(&n, &body, p)?
        }
        CutMS { x } => {
            let (n, body, x) = red.separate(&d.children[0], &d.children[1], x);
            let p = body.concl.find_linear(&x).expect("cut hypothesis");
            red.red_l(&n, &body, p)?
        }
        MCut { at, n: 0 } | GMCut { at, n: 0 } => {
            let mut c = d.children[1].clone();
            for (j, e) in d.children[0].concl.gctx().iter().enumerate() {
                let r = weak_rule(&c, e.name.clone(), e.ty.clone(), at + j);
                c = red.mk(r, vec![c])?;
            }
            red.note(CaseFamily::Structural);
            c
        }
        MCut { at, n: k } | GMCut { at, n: k } => {
            let block: Vec<Name> = d.children[1].concl.gctx()[*at..at + k].iter().map(|e| e.name.clone()).collect();
            let mut body = d.children[1].clone();
            for y in &block[1..] {
                let r = cont_rule(&body, block[0].clone(), y.clone(), block[0].clone());
                body = red.mk(r, vec![body])?;
            }
            let (n, body, x) = red.separate(&d.children[0], &body, &block[0]);
            let p = body.concl.find_graded(&x).expect("cut hypothesis");
            red.red_g(&n, &body, p)?
        }
        other => return bug(format!("`{}` is not a cut", other.name())),
    };
    Ok((red.fit(out, &target)?, red.cases))
}

// ---------------------------------------------------------------------------
// Where a hypothesis of the conclusion goes in the premises

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Loc {
    Axiom,
    Principal,
    Weak(usize),
    Cont(usize),
    Child(usize, usize),
}

fn gpos(d: &ScDeriv, x: &str) -> usize {
    d.concl.find_graded(x).expect("named hypothesis")
}

fn lpos(d: &ScDeriv, x: &str) -> usize {
    d.concl.find_linear(x).expect("named hypothesis")
}

fn swap(p: usize, k: usize) -> usize {
    if p == k {
        k + 1
    } else if p == k + 1 {
        k
    } else {
        p
    }
}

fn locate_g(d: &ScDeriv, p: usize) -> R<Loc> {
    use ScRule::*;
    let kids = &d.children;
    let glen = |i: usize| kids[i].concl.gctx().len();
    let skip = |at: usize| if p == at { Loc::Principal } else { Loc::Child(0, if p < at { p } else { p - 1 }) };
    Ok(match &d.rule {
        IdGS { .. } => Loc::Axiom,
        UnitJL { at, .. } | UnitJLMS { at, .. } | LinL { at, .. } => skip(*at),
        TenL { x, .. } | TenLMS { x, .. } => {
            let i = gpos(&kids[0], x);
            if p == i {
                Loc::Principal
            } else {
                Loc::Child(0, if p < i { p } else { p + 1 })
            }
        }
        WeakGS { at, .. } | WeakMS { at, .. } => {
            if p == *at {
                Loc::Weak(*at)
            } else {
                Loc::Child(0, if p < *at { p } else { p - 1 })
            }
        }
        ContGS { x, .. } | ContMS { x, .. } => {
            let i = gpos(&kids[0], x);
            if p == i {
                Loc::Cont(i)
            } else {
                Loc::Child(0, if p < i { p } else { p + 1 })
            }
        }
        ExGS { k } | GExMS { k } => Loc::Child(0, swap(p, *k)),
        SubGS { .. } | SubMS { .. } | LinR | LolliR { .. } | TensorL { .. } | UnitIL { .. } | GrdR { .. } | ExMS { .. } => {
            Loc::Child(0, p)
        }
        TenR | TensorR | LolliL { .. } | CutMS { .. } => {
            let l0 = glen(0);
            if p < l0 {
                Loc::Child(0, p)
            } else {
                Loc::Child(1, p - l0)
            }
        }
        GrdL { x, .. } => {
            let i = gpos(&kids[0], x);
            Loc::Child(0, if p < i { p } else { p + 1 })
        }
        CutGS { x } | GCutMS { x } => {
            let i = gpos(&kids[1], x);
            let la = glen(0);
            if p >= i && p < i + la {
                Loc::Child(0, p - i)
            } else {
                Loc::Child(1, if p < i { p } else { p - la + 1 })
            }
        }
        MCut { at, n } | GMCut { at, n } => {
            let la = glen(0);
            if p >= *at && p < at + la {
                Loc::Child(0, p - at)
            } else {
                Loc::Child(1, if p < *at { p } else { p - la + n })
            }
        }
        other => return bug(format!("`{}` has no graded hypotheses", other.name())),
    })
}

fn locate_l(d: &ScDeriv, p: usize) -> R<Loc> {
    use ScRule::*;
    let kids = &d.children;
    let llen = |i: usize| kids[i].concl.lctx().len();
    Ok(match &d.rule {
        IdMS { .. } => Loc::Axiom,
        UnitIL { at, .. } | GrdL { at, .. } => {
            if p == *at {
                Loc::Principal
            } else {
                Loc::Child(0, if p < *at { p } else { p - 1 })
            }
        }
        LolliR { x } | LinL { x, .. } => {
            let i = lpos(&kids[0], x);
            Loc::Child(0, if p < i { p } else { p + 1 })
        }
        LolliL { x, .. } => {
            let i = lpos(&kids[1], x);
            let la = llen(0);
            if p == i {
                Loc::Principal
            } else if p > i && p <= i + la {
                Loc::Child(0, p - i - 1)
            } else {
                Loc::Child(1, if p < i { p } else { p - la })
            }
        }
        TensorR => {
            let l0 = llen(0);
            if p < l0 {
                Loc::Child(0, p)
            } else {
                Loc::Child(1, p - l0)
            }
        }
        TensorL { x, .. } => {
            let i = lpos(&kids[0], x);
            if p == i {
                Loc::Principal
            } else {
                Loc::Child(0, if p < i { p } else { p + 1 })
            }
        }
        UnitJLMS { .. } | TenLMS { .. } | WeakMS { .. } | ContMS { .. } | GExMS { .. } | SubMS { .. } => Loc::Child(0, p),
        GCutMS { .. } | GMCut { .. } => Loc::Child(1, p),
        ExMS { k } => Loc::Child(0, swap(p, *k)),
        CutMS { x } => {
            let i = lpos(&kids[1], x);
            let la = llen(0);
            if p >= i && p < i + la {
                Loc::Child(0, p - i)
            } else {
                Loc::Child(1, if p < i { p } else { p - la + 1 })
            }
        }
        other => return bug(format!("`{}` has no linear hypotheses", other.name())),
    })
}

fn is_right_rule(r: &ScRule) -> bool {
    use ScRule::*;
    matches!(r, UnitJR | TenR | LinR | UnitIR | TensorR | LolliR { .. } | GrdR { .. })
}

fn is_structural(r: &ScRule) -> bool {
    use ScRule::*;
    matches!(r, ExGS { .. } | GExMS { .. } | ExMS { .. } | SubGS { .. } | SubMS { .. })
}

fn classify_left(n: &ScDeriv) -> CaseFamily {
    match &n.rule {
        ScRule::IdGS { .. } | ScRule::IdMS { .. } => CaseFamily::Axiom,
        r if is_right_rule(r) => CaseFamily::Principal,
        r if r.is_cut() => CaseFamily::Commuting,
        _ => CaseFamily::SecondaryConclusion,
    }
}

fn classify_with(loc: Loc, n: &ScDeriv, d: &ScDeriv) -> CaseFamily {
    match loc {
        Loc::Axiom => CaseFamily::Axiom,
        Loc::Weak(_) | Loc::Cont(_) => CaseFamily::Structural,
        Loc::Child(..) if d.rule.is_cut() => CaseFamily::Commuting,
        Loc::Child(..) if is_structural(&d.rule) => CaseFamily::Structural,
        Loc::Child(..) => CaseFamily::SecondaryHypothesis,
        Loc::Principal => classify_left(n),
    }
}

// ---------------------------------------------------------------------------
// Rules chosen by the fragment of the premise they act on

fn mixed(d: &ScDeriv) -> bool {
    Frag::of(&d.concl) == Frag::Mixed
}

fn weak_rule(d: &ScDeriv, x: Name, ty: GType, at: usize) -> ScRule {
    if mixed(d) {
        ScRule::WeakMS { x, ty, at }
    } else {
        ScRule::WeakGS { x, ty, at }
    }
}

fn cont_rule(d: &ScDeriv, x: Name, y: Name, z: Name) -> ScRule {
    if mixed(d) {
        ScRule::ContMS { x, y, z }
    } else {
        ScRule::ContGS { x, y, z }
    }
}

fn gex_rule(d: &ScDeriv, k: usize) -> ScRule {
    if mixed(d) {
        ScRule::GExMS { k }
    } else {
        ScRule::ExGS { k }
    }
}

fn gcut_rule(body: &ScDeriv, x: Name) -> ScRule {
    if mixed(body) {
        ScRule::GCutMS { x }
    } else {
        ScRule::CutGS { x }
    }
}

/// The graded left rules and cuts come in a GS and an MS form; picks the
/// one matching the premise that carries the context.
fn lift(rule: ScRule, ms: bool) -> ScRule {
    use ScRule::*;
    match (rule, ms) {
        (UnitJL { x, r, at }, true) => UnitJLMS { x, r, at },
        (UnitJLMS { x, r, at }, false) => UnitJL { x, r, at },
        (TenL { x, y, z }, true) => TenLMS { x, y, z },
        (TenLMS { x, y, z }, false) => TenL { x, y, z },
        (WeakGS { x, ty, at }, true) => WeakMS { x, ty, at },
        (WeakMS { x, ty, at }, false) => WeakGS { x, ty, at },
        (ContGS { x, y, z }, true) => ContMS { x, y, z },
        (ContMS { x, y, z }, false) => ContGS { x, y, z },
        (ExGS { k }, true) => GExMS { k },
        (GExMS { k }, false) => ExGS { k },
        (SubGS { to }, true) => SubMS { to },
        (SubMS { to }, false) => SubGS { to },
        (CutGS { x }, true) => GCutMS { x },
        (GCutMS { x }, false) => CutGS { x },
        (MCut { at, n }, true) => GMCut { at, n },
        (GMCut { at, n }, false) => MCut { at, n },
        (r, _) => r,
    }
}

// ---------------------------------------------------------------------------
// The reduction proper

/// The contexts a rebuilt subtree must end up with.
struct Target {
    g: GradedCtx,
    l: LinearCtx,
}

impl Target {
    fn of(j: &Judgment) -> Target {
        Target { g: j.gctx().clone(), l: j.lctx().to_vec() }
    }
}

struct Reducer {
    sr: SemiringId,
    supply: NameSupply,
    /// Cases applied so far, in the order they were entered.
    cases: Vec<CaseFamily>,
}

impl Reducer {
    fn note(&mut self, f: CaseFamily) {
        self.cases.push(f);
    }

    fn mk(&self, rule: ScRule, kids: Vec<ScDeriv>) -> R<ScDeriv> {
        Ok(Deriv::new(self.sr, rule, kids)?)
    }

    fn rename(d: &ScDeriv, map: &BTreeMap<Name, Name>) -> ScDeriv {
        if map.is_empty() {
            d.clone()
        } else {
            d.map_names(&|s| map.get(s).cloned().unwrap_or_else(|| s.to_string()))
        }
    }

    /// Renames inner names so that the two derivations share only the
    /// context names of their conclusions. Returns the new cut name too.
    fn separate(&mut self, n: &ScDeriv, d: &ScDeriv, x: &str) -> (ScDeriv, ScDeriv, Name) {
        let keep_n = n.concl.all_names();
        let in_d = d.every_name();
        let mut m1 = BTreeMap::new();
        for s in n.every_name() {
            if !keep_n.contains(&s) && in_d.contains(&s) {
                m1.insert(s.clone(), self.supply.fresh(&s));
            }
        }
        let n = Self::rename(n, &m1);
        let mut keep_d = d.concl.all_names();
        keep_d.remove(x);
        let in_n = n.every_name();
        let mut m2 = BTreeMap::new();
        for s in d.every_name() {
            if !keep_d.contains(&s) && in_n.contains(&s) {
                m2.insert(s.clone(), self.supply.fresh(&s));
            }
        }
        let x = m2.get(x).cloned().unwrap_or_else(|| x.to_string());
        (n, Self::rename(d, &m2), x)
    }

    /// A copy of `n` with every name replaced by a fresh one.
    fn copy(&mut self, n: &ScDeriv) -> ScDeriv {
        let map: BTreeMap<Name, Name> = n.every_name().into_iter().map(|s| (s.clone(), self.supply.fresh(&s))).collect();
        Self::rename(n, &map)
    }

    /// Exchanges `d` into the order of `t` and checks that the contexts agree.
    fn fit(&self, mut d: ScDeriv, t: &Target) -> R<ScDeriv> {
        for (i, e) in t.g.iter().enumerate() {
            let Some(mut j) = d.concl.find_graded(&e.name) else {
                return bug(format!("`{}` is missing after reduction", e.name));
            };
            while j > i {
                let r = gex_rule(&d, j - 1);
                d = self.mk(r, vec![d])?;
                j -= 1;
            }
        }
        for (i, e) in t.l.iter().enumerate() {
            let Some(mut j) = d.concl.find_linear(&e.name) else {
                return bug(format!("`{}` is missing after reduction", e.name));
            };
            while j > i {
                d = self.mk(ScRule::ExMS { k: j - 1 }, vec![d])?;
                j -= 1;
            }
        }
        if d.concl.gctx() != &t.g || d.concl.lctx() != t.l.as_slice() {
            return bug(format!("reduct has context {} but {} was expected", ctx_text(&d.concl), target_text(t)));
        }
        Ok(d)
    }

    /// Re-applies the rule of `old` to new premises, adjusting insertion
    /// points and grades to `t`.
    fn rebuild(&self, old: &ScDeriv, kids: Vec<ScDeriv>, t: &Target) -> R<ScDeriv> {
        use ScRule::*;
        let grade_of = |x: &str| t.g.iter().find(|e| e.name == x).map(|e| e.grade.clone());
        let rule = match old.rule.clone() {
            ExGS { .. } | GExMS { .. } | ExMS { .. } => {
                let kid = kids.into_iter().next().expect("one premise");
                return self.fit(kid, t);
            }
            UnitJL { x, r, .. } | UnitJLMS { x, r, .. } => {
                let r = grade_of(&x).unwrap_or(r);
                UnitJL { x, r, at: 0 }
            }
            LinL { x, z, .. } => LinL { x, z, at: 0 },
            GrdL { x, z, .. } => GrdL { x, z, at: 0 },
            UnitIL { x, .. } => UnitIL { x, at: 0 },
            WeakGS { x, ty, .. } | WeakMS { x, ty, .. } => WeakGS { x, ty, at: 0 },
            SubGS { .. } | SubMS { .. } => {
                let mut to = Vec::new();
                for e in kids[0].concl.gctx() {
                    match grade_of(&e.name) {
                        Some(g) => to.push(g),
                        None => return bug(format!("no target grade for `{}`", e.name)),
                    }
                }
                SubGS { to }
            }
            MCut { at, n } | GMCut { at, n } => {
                let at = if n == 0 {
                    0
                } else {
                    let first = &old.children[1].concl.gctx()[at].name;
                    gpos(&kids[1], first)
                };
                MCut { at, n }
            }
            r => r,
        };
        let rule = lift(rule, mixed(kids.last().expect("rebuilt rules have premises")));
        let d = self.mk(rule, kids)?;
        self.fit(d, t)
    }

    fn target_g(&self, n: &ScDeriv, d: &ScDeriv, p: usize) -> R<Target> {
        let g = multicut_ctx(self.sr, d.concl.gctx(), p, 1, n.concl.gctx()).map_err(|e| CutError::Invariant(e.to_string()))?;
        Ok(Target { g, l: d.concl.lctx().to_vec() })
    }

    fn target_l(&self, n: &ScDeriv, d: &ScDeriv, p: usize) -> Target {
        let mut g = n.concl.gctx().clone();
        g.extend_from_slice(d.concl.gctx());
        Target { g, l: splice(d.concl.lctx(), p, 1, n.concl.lctx()) }
    }

    /// Cuts `n` against the graded hypothesis at position `p` of `d`.
    fn red_g(&mut self, n: &ScDeriv, d: &ScDeriv, p: usize) -> R<ScDeriv> {
        let t = self.target_g(n, d, p)?;
        if let ScRule::IdGS { x: y, .. } = &n.rule {
            // r * 1 = r: the right premise with the cut name replaced
            self.note(CaseFamily::Axiom);
            let x = d.concl.gctx()[p].name.clone();
            return self.fit(Self::rename(d, &BTreeMap::from([(x, y.clone())])), &t);
        }
        let loc = locate_g(d, p)?;
        if loc != Loc::Principal {
            self.note(classify_with(loc, n, d));
        }
        match loc {
            Loc::Axiom => self.fit(n.clone(), &t),
            Loc::Principal => self.principal_g(n, d, p),
            Loc::Weak(at) => {
                let mut c = d.children[0].clone();
                for (j, e) in n.concl.gctx().iter().enumerate() {
                    let r = weak_rule(&c, e.name.clone(), e.ty.clone(), at + j);
                    c = self.mk(r, vec![c])?;
                }
                self.fit(c, &t)
            }
            Loc::Cont(i) => {
                let k = n.concl.gctx().len();
                let c = self.red_g(n, &d.children[0], i)?;
                let n2 = self.copy(n);
                let mut c = self.red_g(&n2, &c, i + k)?;
                for (e1, e2) in n.concl.gctx().iter().zip(n2.concl.gctx()) {
                    let want = gpos(&c, &e1.name) + 1;
                    let mut j = gpos(&c, &e2.name);
                    while j > want {
                        let r = gex_rule(&c, j - 1);
                        c = self.mk(r, vec![c])?;
                        j -= 1;
                    }
                    let r = cont_rule(&c, e1.name.clone(), e2.name.clone(), e1.name.clone());
                    c = self.mk(r, vec![c])?;
                }
                self.fit(c, &t)
            }
            Loc::Child(ci, pc) => {
                let mut kids = d.children.clone();
                kids[ci] = self.red_g(n, &d.children[ci], pc)?;
                self.rebuild(d, kids, &t)
            }
        }
    }

    /// `d` introduces the hypothesis at `p`; works on the shape of `n`.
    fn principal_g(&mut self, n: &ScDeriv, d: &ScDeriv, p: usize) -> R<ScDeriv> {
        use ScRule::*;
        let t = self.target_g(n, d, p)?;
        let x = d.concl.gctx()[p].name.clone();
        self.note(classify_left(n));
        match (&n.rule, &d.rule) {
            (IdGS { x: y, .. }, _) => {
                let y = y.clone();
                let out = d.map_names(&|s| if s == x { y.clone() } else { s.to_string() });
                self.fit(out, &t)
            }
            (UnitJR, UnitJL { .. } | UnitJLMS { .. }) => self.fit(d.children[0].clone(), &t),
            (TenR, TenL { x: a, y: b, .. } | TenLMS { x: a, y: b, .. }) => {
                let body = &d.children[0];
                let c = self.mk(gcut_rule(body, a.clone()), vec![n.children[0].clone(), body.clone()])?;
                let c = self.mk(gcut_rule(&c, b.clone()), vec![n.children[1].clone(), c])?;
                self.fit(c, &t)
            }
            (LinR, LinL { x: y, .. }) => {
                let c = self.mk(CutMS { x: y.clone() }, vec![n.children[0].clone(), d.children[0].clone()])?;
                self.fit(c, &t)
            }
            (r, _) if is_right_rule(r) => bug(format!("`{}` meets `{}` on a graded hypothesis", r.name(), d.rule.name())),
            (_, _) => {
                // n ends in a left, structural or cut rule: reduce in the
                // premise that concludes the cut formula
                let last = n.children.len() - 1;
                let mut kids = n.children.clone();
                kids[last] = self.principal_g(&n.children[last], d, p)?;
                self.rebuild(n, kids, &t)
            }
        }
    }

    /// Cuts `n` against the linear hypothesis at position `p` of `d`.
    fn red_l(&mut self, n: &ScDeriv, d: &ScDeriv, p: usize) -> R<ScDeriv> {
        let t = self.target_l(n, d, p);
        if let ScRule::IdMS { x: y, .. } = &n.rule {
            self.note(CaseFamily::Axiom);
            let x = d.concl.lctx()[p].name.clone();
            return self.fit(Self::rename(d, &BTreeMap::from([(x, y.clone())])), &t);
        }
        let loc = locate_l(d, p)?;
        if loc != Loc::Principal {
            self.note(classify_with(loc, n, d));
        }
        match loc {
            Loc::Axiom => self.fit(n.clone(), &t),
            Loc::Principal => self.principal_l(n, d, p),
            Loc::Child(ci, pc) => {
                let mut kids = d.children.clone();
                kids[ci] = self.red_l(n, &d.children[ci], pc)?;
                self.rebuild(d, kids, &t)
            }
            other => bug(format!("unexpected location {other:?} for a linear hypothesis")),
        }
    }

    fn principal_l(&mut self, n: &ScDeriv, d: &ScDeriv, p: usize) -> R<ScDeriv> {
        use ScRule::*;
        let t = self.target_l(n, d, p);
        let x = d.concl.lctx()[p].name.clone();
        self.note(classify_left(n));
        match (&n.rule, &d.rule) {
            (IdMS { x: y, .. }, _) => {
                let y = y.clone();
                let out = d.map_names(&|s| if s == x { y.clone() } else { s.to_string() });
                self.fit(out, &t)
            }
            (UnitIR, UnitIL { .. }) => self.fit(d.children[0].clone(), &t),
            (TensorR, TensorL { x: a, y: b, .. }) => {
                let c = self.mk(CutMS { x: a.clone() }, vec![n.children[0].clone(), d.children[0].clone()])?;
                let c = self.mk(CutMS { x: b.clone() }, vec![n.children[1].clone(), c])?;
                self.fit(c, &t)
            }
            (LolliR { x: y }, LolliL { x: w, .. }) => {
                let c = self.mk(CutMS { x: y.clone() }, vec![d.children[0].clone(), n.children[0].clone()])?;
                let c = self.mk(CutMS { x: w.clone() }, vec![c, d.children[1].clone()])?;
                self.fit(c, &t)
            }
            (GrdR { .. }, GrdL { x: y, .. }) => {
                let c = self.mk(GCutMS { x: y.clone() }, vec![n.children[0].clone(), d.children[0].clone()])?;
                self.fit(c, &t)
            }
            (r, _) if is_right_rule(r) => bug(format!("`{}` meets `{}` on a linear hypothesis", r.name(), d.rule.name())),
            (_, _) => {
                let last = n.children.len() - 1;
                let mut kids = n.children.clone();
                kids[last] = self.principal_l(&n.children[last], d, p)?;
                self.rebuild(n, kids, &t)
            }
        }
    }
}

fn ctx_text(j: &Judgment) -> String {
    target_text(&Target::of(j))
}

fn target_text(t: &Target) -> String {
    let g: Vec<String> = t.g.iter().map(|e| format!("{}:{} {}", e.name, e.grade, e.ty)).collect();
    let l: Vec<String> = t.l.iter().map(|e| format!("{}:{}", e.name, e.ty)).collect();
    format!("[{}; {}]", g.join(", "), l.join(", "))
}

// ---------------------------------------------------------------------------
// Subformula property

fn sub_g(t: &GType, out: &mut HashSet<Formula>) {
    if !out.insert(Formula::G(t.clone())) {
        return;
    }
    match t {
        GType::Tensor(a, b) => {
            sub_g(a, out);
            sub_g(b, out);
        }
        GType::Lin(a) => sub_l(a, out),
        _ => {}
    }
}

fn sub_l(t: &LType, out: &mut HashSet<Formula>) {
    if !out.insert(Formula::L(t.clone())) {
        return;
    }
    match t {
        LType::Tensor(a, b) | LType::Lolli(a, b) => {
            sub_l(a, out);
            sub_l(b, out);
        }
        LType::Grd(_, x) => sub_g(x, out),
        _ => {}
    }
}

fn formulas_of(j: &Judgment) -> Vec<Formula> {
    let mut v: Vec<Formula> = j.gctx().iter().map(|e| Formula::G(e.ty.clone())).collect();
    v.extend(j.lctx().iter().map(|e| Formula::L(e.ty.clone())));
    v.push(j.formula());
    v
}

/// Subformulas of the formulas in a judgment.
pub fn subformulas(j: &Judgment) -> HashSet<Formula> {
    let mut out = HashSet::new();
    for f in formulas_of(j) {
        match f {
            Formula::G(t) => sub_g(&t, &mut out),
            Formula::L(t) => sub_l(&t, &mut out),
        }
    }
    out
}

/// True when the tree is cut-free and every formula in it is a subformula of
/// the root judgment.
pub fn check_subformula(d: &ScDeriv) -> bool {
    if d.has_cut() {
        return false;
    }
    let allowed = subformulas(&d.concl);
    let mut ok = true;
    d.visit(&mut |_, n| {
        if ok && !formulas_of(&n.concl).iter().all(|f| allowed.contains(f)) {
            ok = false;
        }
    });
    ok
}

// ---------------------------------------------------------------------------

/// A cut on `Lin(Grd 1 (Lin A))` whose reduction runs through three
/// principal cases and ends in an axiom case, leaving `Lin_R(Lin_L(id))`.
pub fn lin_grd_example(sr: SemiringId) -> Result<ScDeriv, CheckError> {
    use ScRule::*;
    let a = LType::atom("A");
    let one: Grade = sr.one();
    let mk = |r: ScRule, k: Vec<ScDeriv>| Deriv::new(sr, r, k);
    // c : Lin A |- Lin (Grd 1 (Lin A))
    let left = mk(IdMS { x: "a".into(), ty: a.clone() }, vec![])?;
    let left = mk(LinL { x: "a".into(), z: "c".into(), at: 0 }, vec![left])?;
    let left = mk(LinR, vec![left])?;
    let left = mk(GrdR { r: one.clone() }, vec![left])?;
    let left = mk(LinR, vec![left])?;
    // x : Lin (Grd 1 (Lin A)) |- Lin A
    let right = mk(IdMS { x: "b".into(), ty: a }, vec![])?;
    let right = mk(LinL { x: "b".into(), z: "w".into(), at: 0 }, vec![right])?;
    let right = mk(GrdL { x: "w".into(), z: "y".into(), at: 0 }, vec![right])?;
    let right = mk(LinL { x: "y".into(), z: "x".into(), at: 0 }, vec![right])?;
    let right = mk(LinR, vec![right])?;
    mk(CutGS { x: "x".into() }, vec![left, right])
}
