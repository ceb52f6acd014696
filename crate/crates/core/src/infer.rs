//! Grade synthesis for bare terms and elaboration into natural-deduction trees.
//!
//! Elaboration is syntax-directed: every term former maps to its ND rule, shared
//! graded variables are split apart before a two-premise rule and contracted
//! afterwards, and the final tree is weakened, permuted and approximated to
//! match the requested judgment.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::deriv::{CheckError, Frag};
use crate::nd::{NdDeriv, NdRule};
use crate::semiring::{GradeVec, SemiringError, SemiringId};
use crate::syntax::*;

/// Per-hypothesis grades synthesised for a graded context.
pub type UsageVec = GradeVec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InferError {
    #[error("unbound variable `{0}`")]
    Unbound(Name),
    #[error("{0}")]
    Sort(String),
    #[error("linear variable `{0}` is used more than once")]
    LinearTwice(Name),
    #[error("linear variable `{0}` is never used")]
    LinearUnused(Name),
    #[error("type mismatch: {0}")]
    Mismatch(String),
    #[error("grade error: {0}")]
    Grade(String),
    #[error("binder `{0}` needs a type annotation")]
    Annotation(Name),
    #[error(transparent)]
    Semiring(#[from] SemiringError),
    #[error("internal: {0}")]
    Rule(#[from] CheckError),
}

type R<T> = Result<T, InferError>;

/// Inference settings. `strict` demands that a variable bound by
/// `let Grd[r] x = ..` be used at exactly `r` instead of at most `r`.
#[derive(Debug, Clone, Copy)]
pub struct Infer {
    pub sr: SemiringId,
    pub strict: bool,
}

impl Infer {
    pub fn new(sr: SemiringId) -> Infer {
        Infer { sr, strict: false }
    }

    pub fn strict(mut self, on: bool) -> Infer {
        self.strict = on;
        self
    }

    pub fn usage_gt(&self, t: &GTerm, gctx: &[(Name, GType)]) -> R<(UsageVec, GType)> {
        let mut e = Elab::new(*self, gctx.iter().map(|p| &p.0));
        e.genv.extend(gctx.iter().cloned());
        let t = e.freshen(&Term::G(t.clone()));
        let Term::G(t) = t else { unreachable!() };
        let (d, ty) = e.g(&t)?;
        Ok((usage(self.sr, &d.concl, gctx.iter().map(|p| &p.0)), ty))
    }

    pub fn usage_mt(&self, l: &LTerm, gctx: &[(Name, GType)], lctx: &[(Name, LType)]) -> R<(UsageVec, LType)> {
        let mut e = Elab::new(*self, gctx.iter().map(|p| &p.0).chain(lctx.iter().map(|p| &p.0)));
        e.genv.extend(gctx.iter().cloned());
        e.lenv.extend(lctx.iter().cloned());
        let t = e.freshen(&Term::L(l.clone()));
        let Term::L(l) = t else { unreachable!() };
        let (d, ty) = e.l(&l)?;
        for (x, _) in lctx {
            if d.concl.find_linear(x).is_none() {
                return Err(InferError::LinearUnused(x.clone()));
            }
        }
        Ok((usage(self.sr, &d.concl, gctx.iter().map(|p| &p.0)), ty))
    }

    /// Builds an ND tree whose conclusion is exactly `goal` (up to renaming of
    /// bound variables in the term).
    pub fn elaborate(&self, goal: &Judgment) -> R<NdDeriv> {
        let gctx: Vec<(Name, GType)> = goal.gctx().iter().map(|e| (e.name.clone(), e.ty.clone())).collect();
        let lctx: Vec<(Name, LType)> = goal.lctx().iter().map(|e| (e.name.clone(), e.ty.clone())).collect();
        let mut e = Elab::new(*self, goal.all_names().iter());
        e.genv.extend(gctx.iter().cloned());
        e.lenv.extend(lctx.iter().cloned());
        let term = e.freshen(&goal.term());
        let d = match (&term, goal) {
            (Term::G(t), Judgment::GS { ty, .. }) => {
                let (d, found) = e.g(t)?;
                if &found != ty {
                    return Err(InferError::Mismatch(format!("term has type {found}, goal expects {ty}")));
                }
                d
            }
            (Term::L(l), Judgment::MS { ty, .. }) => {
                let (d, found) = e.l(l)?;
                if &found != ty {
                    return Err(InferError::Mismatch(format!("term has type {found}, goal expects {ty}")));
                }
                d
            }
            _ => unreachable!(),
        };
        for (x, _) in &lctx {
            if d.concl.find_linear(x).is_none() {
                return Err(InferError::LinearUnused(x.clone()));
            }
        }
        let mut d = d;
        for (x, ty) in &gctx {
            if d.concl.find_graded(x).is_none() {
                let at = d.concl.gctx().len();
                d = e.node(e.weak(x, ty, at, &d), vec![d])?;
            }
        }
        let order: Vec<Name> = gctx.iter().map(|p| p.0.clone()).collect();
        d = e.permute_graded(d, &order)?;
        let lorder: Vec<Name> = lctx.iter().map(|p| p.0.clone()).collect();
        d = e.permute_linear(d, &lorder)?;
        let want = goal.grades();
        if d.concl.grades() != want {
            for (entry, r) in d.concl.gctx().iter().zip(&want) {
                if !self.sr.leq(&entry.grade, r)? {
                    return Err(InferError::Grade(format!(
                        "`{}` is used at {} which is not below the declared {r}",
                        entry.name, entry.grade
                    )));
                }
            }
            let rule = e.sub(want, &d);
            d = e.node(rule, vec![d])?;
        }
        if !d.concl.alpha_eq(goal) {
            return Err(InferError::Mismatch(format!("elaborated {} but the goal is {goal}", d.concl)));
        }
        Ok(d)
    }
}

pub fn infer_usage_gt(sr: SemiringId, t: &GTerm, gctx: &[(Name, GType)]) -> R<(UsageVec, GType)> {
    Infer::new(sr).usage_gt(t, gctx)
}

pub fn infer_usage_mt(
    sr: SemiringId,
    l: &LTerm,
    gctx: &[(Name, GType)],
    lctx: &[(Name, LType)],
) -> R<(UsageVec, LType)> {
    Infer::new(sr).usage_mt(l, gctx, lctx)
}

pub fn elaborate_nd(sr: SemiringId, goal: &Judgment) -> R<NdDeriv> {
    Infer::new(sr).elaborate(goal)
}

fn usage<'a>(sr: SemiringId, j: &Judgment, names: impl Iterator<Item = &'a Name>) -> UsageVec {
    names
        .map(|x| match j.find_graded(x) {
            Some(i) => j.gctx()[i].grade.clone(),
            None => sr.zero(),
        })
        .collect()
}

struct Elab {
    cfg: Infer,
    supply: NameSupply,
    genv: HashMap<Name, GType>,
    lenv: HashMap<Name, LType>,
    /// Linear variables hidden while inside a graded subterm.
    hidden: Vec<HashMap<Name, LType>>,
}

impl Elab {
    fn new<'a>(cfg: Infer, names: impl Iterator<Item = &'a Name>) -> Elab {
        Elab {
            cfg,
            supply: NameSupply::avoiding(names.cloned()),
            genv: HashMap::new(),
            lenv: HashMap::new(),
            hidden: Vec::new(),
        }
    }

    fn sr(&self) -> SemiringId {
        self.cfg.sr
    }

    fn node(&self, rule: NdRule, kids: Vec<NdDeriv>) -> R<NdDeriv> {
        Ok(NdDeriv::new(self.sr(), rule, kids)?)
    }

    fn weak(&self, x: &str, ty: &GType, at: usize, d: &NdDeriv) -> NdRule {
        let (x, ty) = (x.to_string(), ty.clone());
        match Frag::of(&d.concl) {
            Frag::Graded => NdRule::WeakG { x, ty, at },
            Frag::Mixed => NdRule::WeakM { x, ty, at },
        }
    }

    fn sub(&self, to: GradeVec, d: &NdDeriv) -> NdRule {
        match Frag::of(&d.concl) {
            Frag::Graded => NdRule::SubG { to },
            Frag::Mixed => NdRule::GSub { to },
        }
    }

    fn gex(&self, k: usize, d: &NdDeriv) -> NdRule {
        match Frag::of(&d.concl) {
            Frag::Graded => NdRule::ExG { k },
            Frag::Mixed => NdRule::GExM { k },
        }
    }

    fn cont(&self, x: &str, y: &str, d: &NdDeriv) -> NdRule {
        let (x, y, z) = (x.to_string(), y.to_string(), x.to_string());
        match Frag::of(&d.concl) {
            Frag::Graded => NdRule::ContG { x, y, z },
            Frag::Mixed => NdRule::ContM { x, y, z },
        }
    }

    /// Renames every binder that clashes with a name already in use.
    fn freshen(&mut self, t: &Term) -> Term {
        let mut seen: BTreeSet<Name> = self.genv.keys().chain(self.lenv.keys()).cloned().collect();
        seen.extend(free_vars(t));
        match t {
            Term::G(g) => Term::G(self.fresh_g(g, &mut seen)),
            Term::L(l) => Term::L(self.fresh_l(l, &mut seen)),
        }
    }

    fn bind(&mut self, x: &Name, body: Term, seen: &mut BTreeSet<Name>) -> (Name, Term) {
        if seen.insert(x.clone()) {
            self.supply.reserve(x);
            return (x.clone(), body);
        }
        let x2 = self.supply.fresh(x);
        seen.insert(x2.clone());
        let body = rename(&body, &[(x.clone(), x2.clone())]);
        (x2, body)
    }

    fn bind_pair(&mut self, x: &Name, y: &Name, b: &LTerm, seen: &mut BTreeSet<Name>) -> (Name, Name, LTerm) {
        let (x, b) = self.bind(x, Term::L(b.clone()), seen);
        let (y, b) = self.bind(y, b, seen);
        let Term::L(b) = b else { unreachable!() };
        let b = self.fresh_l(&b, seen);
        (x, y, b)
    }

    fn fresh_g(&mut self, t: &GTerm, seen: &mut BTreeSet<Name>) -> GTerm {
        use GTerm::*;
        match t {
            Var(_) | UnitJ => t.clone(),
            LetUnitJ(a, b) => LetUnitJ(Box::new(self.fresh_g(a, seen)), Box::new(self.fresh_g(b, seen))),
            Pair(a, b) => Pair(Box::new(self.fresh_g(a, seen)), Box::new(self.fresh_g(b, seen))),
            LetPair(x, y, a, b) => {
                let a = self.fresh_g(a, seen);
                let (x, b) = self.bind(x, Term::G((**b).clone()), seen);
                let (y, b) = self.bind(y, b, seen);
                let Term::G(b) = b else { unreachable!() };
                LetPair(x, y, Box::new(a), Box::new(self.fresh_g(&b, seen)))
            }
            Lin(l) => Lin(Box::new(self.fresh_l(l, seen))),
        }
    }

    fn fresh_l(&mut self, t: &LTerm, seen: &mut BTreeSet<Name>) -> LTerm {
        use LTerm::*;
        let bx = |s: LTerm| Box::new(s);
        match t {
            Var(_) | UnitI => t.clone(),
            LetUnitI(a, b) => LetUnitI(bx(self.fresh_l(a, seen)), bx(self.fresh_l(b, seen))),
            Pair(a, b) => Pair(bx(self.fresh_l(a, seen)), bx(self.fresh_l(b, seen))),
            App(a, b) => App(bx(self.fresh_l(a, seen)), bx(self.fresh_l(b, seen))),
            Grd(r, g) => Grd(r.clone(), Box::new(self.fresh_g(g, seen))),
            Unlin(g) => Unlin(Box::new(self.fresh_g(g, seen))),
            LetUnitJ(g, b) => LetUnitJ(Box::new(self.fresh_g(g, seen)), bx(self.fresh_l(b, seen))),
            LetPair(x, y, a, b) => {
                let a = self.fresh_l(a, seen);
                let (x, y, b) = self.bind_pair(x, y, b, seen);
                LetPair(x, y, bx(a), bx(b))
            }
            LetPairG(x, y, g, b) => {
                let g = self.fresh_g(g, seen);
                let (x, y, b) = self.bind_pair(x, y, b, seen);
                LetPairG(x, y, Box::new(g), bx(b))
            }
            Lam(x, ann, b) => {
                let (x, b) = self.bind(x, Term::L((**b).clone()), seen);
                let Term::L(b) = b else { unreachable!() };
                Lam(x, ann.clone(), bx(self.fresh_l(&b, seen)))
            }
            LetGrd(r, x, a, b) => {
                let a = self.fresh_l(a, seen);
                let (x, b) = self.bind(x, Term::L((**b).clone()), seen);
                let Term::L(b) = b else { unreachable!() };
                LetGrd(r.clone(), x, bx(a), bx(self.fresh_l(&b, seen)))
            }
        }
    }

    /// Renames the graded variables of `t` that `first` already uses, so the two
    /// premises of a rule have disjoint contexts.
    fn apart(&mut self, first: &NdDeriv, t: &Term) -> (Term, Vec<(Name, Name)>) {
        let used: BTreeSet<Name> = first.concl.graded_names().into_iter().collect();
        let mut map = Vec::new();
        for x in free_vars(t) {
            if used.contains(&x) {
                if let Some(ty) = self.genv.get(&x).cloned() {
                    let x2 = self.supply.fresh(&x);
                    self.genv.insert(x2.clone(), ty);
                    map.push((x, x2));
                }
            }
        }
        (rename(t, &map), map)
    }

    /// Contracts each renamed copy back into its original.
    fn merge(&mut self, mut d: NdDeriv, pairs: Vec<(Name, Name)>) -> R<NdDeriv> {
        for (x, x2) in pairs {
            d = self.adjacent(d, &x, &x2)?;
            d = self.node(self.cont(&x, &x2, &d), vec![d])?;
            self.genv.remove(&x2);
        }
        Ok(d)
    }

    /// Moves graded `y` to directly after `x`.
    fn adjacent(&self, mut d: NdDeriv, x: &str, y: &str) -> R<NdDeriv> {
        loop {
            let i = d.concl.find_graded(x).expect("present");
            let j = d.concl.find_graded(y).expect("present");
            if j == i + 1 {
                return Ok(d);
            }
            let k = if j > i { j - 1 } else { j };
            d = self.node(self.gex(k, &d), vec![d])?;
        }
    }

    fn adjacent_linear(&self, mut d: NdDeriv, x: &str, y: &str) -> R<NdDeriv> {
        loop {
            let i = d.concl.find_linear(x).expect("present");
            let j = d.concl.find_linear(y).expect("present");
            if j == i + 1 {
                return Ok(d);
            }
            let k = if j > i { j - 1 } else { j };
            d = self.node(NdRule::ExM { k }, vec![d])?;
        }
    }

    fn permute_graded(&self, mut d: NdDeriv, order: &[Name]) -> R<NdDeriv> {
        for (i, x) in order.iter().enumerate() {
            let mut j = d.concl.find_graded(x).expect("present");
            while j > i {
                d = self.node(self.gex(j - 1, &d), vec![d])?;
                j -= 1;
            }
        }
        Ok(d)
    }

    fn permute_linear(&self, mut d: NdDeriv, order: &[Name]) -> R<NdDeriv> {
        for (i, x) in order.iter().enumerate() {
            let mut j = d.concl.find_linear(x).expect("present");
            while j > i {
                d = self.node(NdRule::ExM { k: j - 1 }, vec![d])?;
                j -= 1;
            }
        }
        Ok(d)
    }

    fn ensure_graded(&self, d: NdDeriv, x: &str, ty: &GType) -> R<NdDeriv> {
        if d.concl.find_graded(x).is_some() {
            return Ok(d);
        }
        let at = d.concl.gctx().len();
        self.node(self.weak(x, ty, at, &d), vec![d])
    }

    fn disjoint_linear(&self, a: &NdDeriv, b: &NdDeriv) -> R<()> {
        let left: BTreeSet<Name> = a.concl.linear_names().into_iter().collect();
        for x in b.concl.linear_names() {
            if left.contains(&x) {
                return Err(InferError::LinearTwice(x));
            }
        }
        Ok(())
    }

    fn hide_linear(&mut self) {
        let l = std::mem::take(&mut self.lenv);
        self.hidden.push(l);
    }

    fn unhide_linear(&mut self) {
        self.lenv = self.hidden.pop().unwrap_or_default();
    }

    fn graded_sub(&mut self, t: &GTerm) -> R<(NdDeriv, GType)> {
        self.hide_linear();
        let r = self.g(t);
        self.unhide_linear();
        r
    }

    fn g(&mut self, t: &GTerm) -> R<(NdDeriv, GType)> {
        match t {
            GTerm::Var(x) => match self.genv.get(x) {
                Some(ty) => {
                    let ty = ty.clone();
                    Ok((self.node(NdRule::IdG { x: x.clone(), ty: ty.clone() }, vec![])?, ty))
                }
                None if self.lenv.contains_key(x) || self.hidden.iter().any(|h| h.contains_key(x)) => {
                    Err(InferError::Sort(format!("linear variable `{x}` used in a graded term")))
                }
                None => Err(InferError::Unbound(x.clone())),
            },
            GTerm::UnitJ => Ok((self.node(NdRule::UnitJI, vec![])?, GType::J)),
            GTerm::Pair(a, b) => {
                let (da, ta) = self.g(a)?;
                let (b, pairs) = self.apart(&da, &Term::G((**b).clone()));
                let Term::G(b) = b else { unreachable!() };
                let (db, tb) = self.g(&b)?;
                let d = self.node(NdRule::TenI, vec![da, db])?;
                Ok((self.merge(d, pairs)?, GType::tensor(ta, tb)))
            }
            GTerm::LetUnitJ(a, b) => {
                let (da, ta) = self.g(a)?;
                if ta != GType::J {
                    return Err(InferError::Mismatch(format!("`let unitJ` scrutinee has type {ta}")));
                }
                let (b, pairs) = self.apart(&da, &Term::G((**b).clone()));
                let Term::G(b) = b else { unreachable!() };
                let (db, tb) = self.g(&b)?;
                let d = self.node(NdRule::UnitJE { r: self.sr().one(), at: 0 }, vec![da, db])?;
                Ok((self.merge(d, pairs)?, tb))
            }
            GTerm::LetPair(x, y, a, b) => {
                let (da, ta) = self.g(a)?;
                let (tx, ty) = match ta {
                    GType::Tensor(p, q) => (*p, *q),
                    other => return Err(InferError::Mismatch(format!("pair scrutinee has type {other}"))),
                };
                self.genv.insert(x.clone(), tx.clone());
                self.genv.insert(y.clone(), ty.clone());
                let (b, pairs) = self.apart(&da, &Term::G((**b).clone()));
                let Term::G(b) = b else { unreachable!() };
                let (db, tb) = self.g(&b)?;
                let db = self.pair_bound(db, x, &tx, y, &ty)?;
                self.genv.remove(x);
                self.genv.remove(y);
                let d = self.node(NdRule::TenE { x: x.clone(), y: y.clone() }, vec![da, db])?;
                Ok((self.merge(d, pairs)?, tb))
            }
            GTerm::Lin(l) => {
                let saved = std::mem::take(&mut self.lenv);
                self.hidden.push(saved);
                let r = self.l(l);
                self.unhide_linear();
                let (dl, a) = r?;
                if let Some(x) = dl.concl.linear_names().first() {
                    return Err(InferError::Sort(format!("linear variable `{x}` escapes a Lin")));
                }
                Ok((self.node(NdRule::LinI, vec![dl])?, GType::lin(a)))
            }
        }
    }

    /// Prepares the continuation of a graded pair elimination: both bound
    /// variables present, adjacent, and at the same grade.
    fn pair_bound(&self, d: NdDeriv, x: &str, tx: &GType, y: &str, ty: &GType) -> R<NdDeriv> {
        let d = self.ensure_graded(d, x, tx)?;
        let d = self.ensure_graded(d, y, ty)?;
        let d = self.adjacent(d, x, y)?;
        let i = d.concl.find_graded(x).expect("present");
        let (gx, gy) = (&d.concl.gctx()[i].grade, &d.concl.gctx()[i + 1].grade);
        if gx != gy {
            return Err(InferError::Grade(format!("pair components `{x}` and `{y}` are used at {gx} and {gy}")));
        }
        Ok(d)
    }

    fn l(&mut self, t: &LTerm) -> R<(NdDeriv, LType)> {
        use LTerm::*;
        match t {
            Var(x) => match self.lenv.get(x) {
                Some(ty) => {
                    let ty = ty.clone();
                    Ok((self.node(NdRule::IdM { x: x.clone(), ty: ty.clone() }, vec![])?, ty))
                }
                None if self.genv.contains_key(x) => {
                    Err(InferError::Sort(format!("graded variable `{x}` used as a linear term")))
                }
                None if self.hidden.iter().any(|h| h.contains_key(x)) => {
                    Err(InferError::Sort(format!("linear variable `{x}` used under a graded term")))
                }
                None => Err(InferError::Unbound(x.clone())),
            },
            UnitI => Ok((self.node(NdRule::UnitII, vec![])?, LType::I)),
            LetUnitI(a, b) => {
                let (da, ta) = self.l(a)?;
                if ta != LType::I {
                    return Err(InferError::Mismatch(format!("`let unitI` scrutinee has type {ta}")));
                }
                let (b, pairs) = self.apart(&da, &Term::L((**b).clone()));
                let Term::L(b) = b else { unreachable!() };
                let (db, tb) = self.l(&b)?;
                self.disjoint_linear(&da, &db)?;
                let d = self.node(NdRule::UnitIE { at: 0 }, vec![da, db])?;
                Ok((self.merge(d, pairs)?, tb))
            }
            Pair(a, b) => {
                let (da, ta) = self.l(a)?;
                let (b, pairs) = self.apart(&da, &Term::L((**b).clone()));
                let Term::L(b) = b else { unreachable!() };
                let (db, tb) = self.l(&b)?;
                self.disjoint_linear(&da, &db)?;
                let d = self.node(NdRule::TensorI, vec![da, db])?;
                Ok((self.merge(d, pairs)?, LType::tensor(ta, tb)))
            }
            LetPair(x, y, a, b) => {
                let (da, ta) = self.l(a)?;
                let (tx, ty) = match ta {
                    LType::Tensor(p, q) => (*p, *q),
                    other => return Err(InferError::Mismatch(format!("pair scrutinee has type {other}"))),
                };
                self.lenv.insert(x.clone(), tx);
                self.lenv.insert(y.clone(), ty);
                let (b, pairs) = self.apart(&da, &Term::L((**b).clone()));
                let Term::L(b) = b else { unreachable!() };
                let r = self.l(&b);
                self.lenv.remove(x);
                self.lenv.remove(y);
                let (db, tb) = r?;
                for v in [x, y] {
                    if db.concl.find_linear(v).is_none() {
                        return Err(InferError::LinearUnused(v.clone()));
                    }
                }
                self.disjoint_linear(&da, &db)?;
                let db = self.adjacent_linear(db, x, y)?;
                let d = self.node(NdRule::TensorE { x: x.clone(), y: y.clone() }, vec![da, db])?;
                Ok((self.merge(d, pairs)?, tb))
            }
            Lam(x, ann, b) => {
                let a = ann.clone().ok_or_else(|| InferError::Annotation(x.clone()))?;
                self.lenv.insert(x.clone(), a.clone());
                let r = self.l(b);
                self.lenv.remove(x);
                let (db, tb) = r?;
                if db.concl.find_linear(x).is_none() {
                    return Err(InferError::LinearUnused(x.clone()));
                }
                Ok((self.node(NdRule::LolliI { x: x.clone() }, vec![db])?, LType::lolli(a, tb)))
            }
            App(f, a) => {
                let (df, tf) = self.l(f)?;
                let (a, pairs) = self.apart(&df, &Term::L((**a).clone()));
                let Term::L(a) = a else { unreachable!() };
                let (da, ta) = self.l(&a)?;
                let cod = match tf {
                    LType::Lolli(dom, cod) if *dom == ta => *cod,
                    other => {
                        return Err(InferError::Mismatch(format!(
                            "cannot apply a function of type {other} to an argument of type {ta}"
                        )))
                    }
                };
                self.disjoint_linear(&df, &da)?;
                let d = self.node(NdRule::LolliE, vec![df, da])?;
                Ok((self.merge(d, pairs)?, cod))
            }
            Grd(r, g) => {
                self.sr().check(r)?;
                let (dg, tg) = self.graded_sub(g)?;
                Ok((self.node(NdRule::GrdI { r: r.clone() }, vec![dg])?, LType::grd(r.clone(), tg)))
            }
            Unlin(g) => {
                let (dg, tg) = self.graded_sub(g)?;
                match tg {
                    GType::Lin(a) => Ok((self.node(NdRule::LinE, vec![dg])?, *a)),
                    other => Err(InferError::Mismatch(format!("`Unlin` applied to a term of type {other}"))),
                }
            }
            LetGrd(r, x, a, b) => {
                self.sr().check(r)?;
                let (da, ta) = self.l(a)?;
                let tx = match ta {
                    LType::Grd(s, inner) if &s == r => *inner,
                    other => {
                        return Err(InferError::Mismatch(format!("`let Grd[{r}]` scrutinee has type {other}")))
                    }
                };
                self.genv.insert(x.clone(), tx.clone());
                let (b, pairs) = self.apart(&da, &Term::L((**b).clone()));
                let Term::L(b) = b else { unreachable!() };
                let res = self.l(&b);
                self.genv.remove(x);
                let (db, tb) = res?;
                self.disjoint_linear(&da, &db)?;
                let db = self.ensure_graded(db, x, &tx)?;
                let i = db.concl.find_graded(x).expect("present");
                let used = db.concl.gctx()[i].grade.clone();
                let db = if &used == r {
                    db
                } else {
                    let ok = !self.cfg.strict && self.sr().leq(&used, r)?;
                    if !ok {
                        return Err(InferError::Grade(format!("`{x}` is used at {used} but bound at {r}")));
                    }
                    let mut to = db.concl.grades();
                    to[i] = r.clone();
                    self.node(self.sub(to, &db), vec![db])?
                };
                let d = self.node(NdRule::GrdE { x: x.clone(), at: 0 }, vec![da, db])?;
                Ok((self.merge(d, pairs)?, tb))
            }
            LetUnitJ(g, b) => {
                let (dg, tg) = self.graded_sub(g)?;
                if tg != GType::J {
                    return Err(InferError::Mismatch(format!("`let unitJ` scrutinee has type {tg}")));
                }
                let (b, pairs) = self.apart(&dg, &Term::L((**b).clone()));
                let Term::L(b) = b else { unreachable!() };
                let (db, tb) = self.l(&b)?;
                let d = self.node(NdRule::UnitJEM { r: self.sr().one(), at: 0 }, vec![dg, db])?;
                Ok((self.merge(d, pairs)?, tb))
            }
            LetPairG(x, y, g, b) => {
                let (dg, tg) = self.graded_sub(g)?;
                let (tx, ty) = match tg {
                    GType::Tensor(p, q) => (*p, *q),
                    other => return Err(InferError::Mismatch(format!("pair scrutinee has type {other}"))),
                };
                self.genv.insert(x.clone(), tx.clone());
                self.genv.insert(y.clone(), ty.clone());
                let (b, pairs) = self.apart(&dg, &Term::L((**b).clone()));
                let Term::L(b) = b else { unreachable!() };
                let res = self.l(&b);
                let res = res.and_then(|(db, tb)| Ok((self.pair_bound(db, x, &tx, y, &ty)?, tb)));
                self.genv.remove(x);
                self.genv.remove(y);
                let (db, tb) = res?;
                let d = self.node(NdRule::TenEM { x: x.clone(), y: y.clone() }, vec![dg, db])?;
                Ok((self.merge(d, pairs)?, tb))
            }
        }
    }
}
