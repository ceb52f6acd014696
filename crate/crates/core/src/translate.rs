//! Translations between the sequent calculus and natural deduction.
//!
//! Going from SC to ND, left rules become eliminations whose scrutinee is a
//! variable, and cuts become substitutions on ND derivations. The
//! substitution functions here rebuild the derivation node by node, so
//! the result is again a checked ND derivation and not only a term.
//! Going from ND to SC, each elimination is a left rule followed by a cut.

use std::collections::{BTreeMap, BTreeSet};

use crate::deriv::{splice, CheckError, Deriv, Frag, Rule, RuleError};
use crate::nd::{NdDeriv, NdRule};
use crate::sc::{ScDeriv, ScRule};
use crate::semiring::{Grade, SemiringId};
use crate::syntax::*;

pub type TResult<T> = Result<T, CheckError>;

fn fail<T>(rule: &str, msg: impl Into<String>) -> TResult<T> {
    Err(CheckError { path: vec![], rule: rule.to_string(), error: RuleError::Shape(msg.into()) })
}

fn names_of(ctx: &[GEntry]) -> Vec<Name> {
    ctx.iter().map(|e| e.name.clone()).collect()
}

fn lnames_of(ctx: &[LEntry]) -> Vec<Name> {
    ctx.iter().map(|e| e.name.clone()).collect()
}

/// Bookkeeping for one translation or substitution: the semiring and a
/// supply of names not used anywhere in the inputs.
pub struct Tx {
    pub sr: SemiringId,
    supply: NameSupply,
}

impl Tx {
    pub fn new(sr: SemiringId) -> Tx {
        Tx { sr, supply: NameSupply::new() }
    }

    pub fn avoid<I: IntoIterator<Item = Name>>(&mut self, names: I) {
        for n in names {
            self.supply.reserve(&n);
        }
    }

    pub fn fresh(&mut self, base: &str) -> Name {
        self.supply.fresh(base)
    }

    fn nd(&self, rule: NdRule, kids: Vec<NdDeriv>) -> TResult<NdDeriv> {
        Deriv::new(self.sr, rule, kids)
    }

    fn sc(&self, rule: ScRule, kids: Vec<ScDeriv>) -> TResult<ScDeriv> {
        Deriv::new(self.sr, rule, kids)
    }

    // -- structural helpers on ND derivations ------------------------------------

    fn gex(d: &NdDeriv, k: usize) -> NdRule {
        match Frag::of(&d.concl) {
            Frag::Graded => NdRule::ExG { k },
            Frag::Mixed => NdRule::GExM { k },
        }
    }

    fn weak(d: &NdDeriv, x: Name, ty: GType, at: usize) -> NdRule {
        match Frag::of(&d.concl) {
            Frag::Graded => NdRule::WeakG { x, ty, at },
            Frag::Mixed => NdRule::WeakM { x, ty, at },
        }
    }

    fn cont(d: &NdDeriv, x: Name, y: Name, z: Name) -> NdRule {
        match Frag::of(&d.concl) {
            Frag::Graded => NdRule::ContG { x, y, z },
            Frag::Mixed => NdRule::ContM { x, y, z },
        }
    }

    /// Reorders the graded context into `order` with adjacent exchanges.
    pub fn permute_graded(&self, mut d: NdDeriv, order: &[Name]) -> TResult<NdDeriv> {
        for (i, x) in order.iter().enumerate() {
            let Some(mut j) = d.concl.find_graded(x) else { return fail("ex", format!("`{x}` is missing")) };
            while j > i {
                let r = Self::gex(&d, j - 1);
                d = self.nd(r, vec![d])?;
                j -= 1;
            }
        }
        Ok(d)
    }

    pub fn permute_linear(&self, mut d: NdDeriv, order: &[Name]) -> TResult<NdDeriv> {
        for (i, x) in order.iter().enumerate() {
            let Some(mut j) = d.concl.find_linear(x) else { return fail("ex", format!("`{x}` is missing")) };
            while j > i {
                d = self.nd(NdRule::ExM { k: j - 1 }, vec![d])?;
                j -= 1;
            }
        }
        Ok(d)
    }

    /// A copy of `n` whose context names are replaced by fresh ones.
    fn copy(&mut self, n: &NdDeriv) -> NdDeriv {
        let map: BTreeMap<Name, Name> = n.concl.graded_names().into_iter().map(|x| (x.clone(), self.fresh(&x))).collect();
        n.map_names(&|s| map.get(s).cloned().unwrap_or_else(|| s.to_string()))
    }

    /// Renames names of `d` that also occur in `avoid`. The context names of
    /// the conclusion other than `keep` must not be among them.
    fn separate(&mut self, d: &NdDeriv, keep: &[Name], avoid: &BTreeSet<Name>) -> TResult<(NdDeriv, BTreeMap<Name, Name>)> {
        for n in d.concl.graded_names().into_iter().chain(d.concl.linear_names()) {
            if !keep.contains(&n) && avoid.contains(&n) {
                return fail("subst", format!("hypothesis `{n}` occurs in both derivations"));
            }
        }
        let mut map = BTreeMap::new();
        for n in d.every_name() {
            if avoid.contains(&n) {
                let f = self.fresh(&n);
                map.insert(n, f);
            }
        }
        let out = if map.is_empty() { d.clone() } else { d.map_names(&|s| map.get(s).cloned().unwrap_or_else(|| s.to_string())) };
        Ok((out, map))
    }

    // -- graded substitution -------------------------------------------------

    /// Replaces the graded hypothesis at position `p` of `d` by the context of
    /// `n`, scaled by its grade. The names in `n`'s context must not occur in `d`.
    fn sub_g(&mut self, d: &NdDeriv, p: usize, n: &NdDeriv) -> TResult<NdDeriv> {
        use NdRule::*;
        let delta1 = n.concl.gctx().clone();
        let k = delta1.len();
        let ctx = d.concl.gctx().clone();
        let x = ctx[p].name.clone();
        let kids = &d.children;
        let shift = |at: usize, pc: usize| if at <= pc { at } else { at + k - 1 };
        match &d.rule {
            IdG { .. } => Ok(n.clone()),
            WeakG { x: y, ty, at } | WeakM { x: y, ty, at } => {
                if *y == x {
                    let mut c = kids[0].clone();
                    for (j, e) in delta1.iter().enumerate() {
                        let r = Self::weak(&c, e.name.clone(), e.ty.clone(), at + j);
                        c = self.nd(r, vec![c])?;
                    }
                    Ok(c)
                } else {
                    let pc = if *at > p { p } else { p - 1 };
                    let c = self.sub_g(&kids[0], pc, n)?;
                    let r = Self::weak(&c, y.clone(), ty.clone(), shift(*at, pc));
                    self.nd(r, vec![c])
                }
            }
            ContG { x: a, y: b, z } | ContM { x: a, y: b, z } => {
                let i = kids[0].concl.find_graded(a).expect("contracted hypothesis");
                if p == i {
                    let c = self.sub_g(&kids[0], i, n)?;
                    let n2 = self.copy(n);
                    let mut c = self.sub_g(&c, i + k, &n2)?;
                    for (e1, e2) in delta1.iter().zip(n2.concl.gctx().clone()) {
                        let target = c.concl.find_graded(&e1.name).expect("copied hypothesis") + 1;
                        let mut j = c.concl.find_graded(&e2.name).expect("copied hypothesis");
                        while j > target {
                            let r = Self::gex(&c, j - 1);
                            c = self.nd(r, vec![c])?;
                            j -= 1;
                        }
                        let r = Self::cont(&c, e1.name.clone(), e2.name.clone(), e1.name.clone());
                        c = self.nd(r, vec![c])?;
                    }
                    Ok(c)
                } else {
                    let pc = if p < i { p } else { p + 1 };
                    let c = self.sub_g(&kids[0], pc, n)?;
                    self.nd(Self::cont(&c, a.clone(), b.clone(), z.clone()), vec![c])
                }
            }
            ExG { k: e } | GExM { k: e } => {
                let pc = if p == *e {
                    e + 1
                } else if p == e + 1 {
                    *e
                } else {
                    p
                };
                let c = self.sub_g(&kids[0], pc, n)?;
                let order = splice(&names_of(&ctx), p, 1, &names_of(&delta1));
                self.permute_graded(c, &order)
            }
            SubG { to } | GSub { to } => {
                let c = self.sub_g(&kids[0], p, n)?;
                let scaled: Vec<Grade> =
                    delta1.iter().map(|e| self.sr.mul(&to[p], &e.grade)).collect::<Result<_, _>>().map_err(|e| CheckError {
                        path: vec![],
                        rule: "subst".into(),
                        error: RuleError::Semiring(e),
                    })?;
                let to = splice(to, p, 1, &scaled);
                let r = if matches!(d.rule, SubG { .. }) { SubG { to } } else { GSub { to } };
                self.nd(r, vec![c])
            }
            UnitJE { r, at } | UnitJEM { r, at } => {
                let (s, c) = (&kids[0], &kids[1]);
                let ls = s.concl.gctx().len();
                if *at <= p && p < at + ls {
                    let s2 = self.sub_g(s, p - at, n)?;
                    self.nd(d.rule.clone(), vec![s2, c.clone()])
                } else {
                    let pc = if p < *at { p } else { p - ls };
                    let c2 = self.sub_g(c, pc, n)?;
                    let at = shift(*at, pc);
                    let rule = if matches!(d.rule, UnitJE { .. }) { UnitJE { r: r.clone(), at } } else { UnitJEM { r: r.clone(), at } };
                    self.nd(rule, vec![s.clone(), c2])
                }
            }
            TenE { x: a, .. } | TenEM { x: a, .. } => {
                let (s, c) = (&kids[0], &kids[1]);
                let ls = s.concl.gctx().len();
                let i = c.concl.find_graded(a).expect("pair component");
                if i <= p && p < i + ls {
                    let s2 = self.sub_g(s, p - i, n)?;
                    self.nd(d.rule.clone(), vec![s2, c.clone()])
                } else {
                    let pc = if p < i { p } else { p + 2 - ls };
                    let c2 = self.sub_g(c, pc, n)?;
                    self.nd(d.rule.clone(), vec![s.clone(), c2])
                }
            }
            TenI | TensorI | LolliE | UnitIE { .. } | TensorE { .. } => {
                let l0 = kids[0].concl.gctx().len();
                let mut kids = kids.clone();
                if p < l0 {
                    kids[0] = self.sub_g(&kids[0], p, n)?;
                } else {
                    kids[1] = self.sub_g(&kids[1], p - l0, n)?;
                }
                self.nd(d.rule.clone(), kids)
            }
            GrdE { x: y, .. } => {
                let ls = kids[0].concl.gctx().len();
                let mut kids = kids.clone();
                if p < ls {
                    kids[0] = self.sub_g(&kids[0], p, n)?;
                } else {
                    let q = p - ls;
                    let iy = kids[1].concl.find_graded(y).expect("unboxed hypothesis");
                    let pc = if q < iy { q } else { q + 1 };
                    kids[1] = self.sub_g(&kids[1], pc, n)?;
                }
                self.nd(d.rule.clone(), kids)
            }
            LinI | LinE | LolliI { .. } | GrdI { .. } | ExM { .. } => {
                let c = self.sub_g(&kids[0], p, n)?;
                self.nd(d.rule.clone(), vec![c])
            }
            IdM { .. } | UnitII | UnitJI => unreachable!("no graded hypothesis to substitute"),
        }
    }

    /// Substitutes `n` for each hypothesis of the contiguous block `xs` of `d`,
    /// and merges the copies of `n`'s context with contraction.
    pub fn subst_graded_block(&mut self, n: &NdDeriv, xs: &[Name], d: &NdDeriv) -> TResult<NdDeriv> {
        let Judgment::GS { ty, .. } = &n.concl else { return fail("subst", "substituted derivation must be graded") };
        let g = d.concl.gctx();
        let at = match xs.first() {
            Some(x) => d.concl.find_graded(x).ok_or_else(|| CheckError {
                path: vec![],
                rule: "subst".into(),
                error: RuleError::Shape(format!("`{x}` is not a graded hypothesis")),
            })?,
            None => 0,
        };
        for (j, x) in xs.iter().enumerate() {
            if g.get(at + j).map(|e| &e.name) != Some(x) {
                return fail("subst", "substituted hypotheses must be adjacent");
            }
            if &g[at + j].ty != ty {
                return fail("subst", format!("`{x}` has type {}, the substituted derivation has {ty}", g[at + j].ty));
            }
        }
        self.avoid(n.every_name());
        self.avoid(d.every_name());
        let avoid: BTreeSet<Name> = n.concl.graded_names().into_iter().collect();
        let (d, map) = self.separate(d, xs, &avoid)?;
        let xs: Vec<Name> = xs.iter().map(|x| map.get(x).cloned().unwrap_or_else(|| x.clone())).collect();
        let delta1 = n.concl.gctx().clone();
        if xs.is_empty() {
            let mut c = d;
            for (j, e) in delta1.iter().enumerate() {
                let r = Self::weak(&c, e.name.clone(), e.ty.clone(), at + j);
                c = self.nd(r, vec![c])?;
            }
            return Ok(c);
        }
        let mut c = self.sub_g(&d, at, n)?;
        for x in &xs[1..] {
            let copy = self.copy(n);
            let p = c.concl.find_graded(x).expect("block hypothesis");
            c = self.sub_g(&c, p, &copy)?;
            for (e1, e2) in delta1.iter().zip(copy.concl.gctx()) {
                let target = c.concl.find_graded(&e1.name).expect("copied hypothesis") + 1;
                let mut j = c.concl.find_graded(&e2.name).expect("copied hypothesis");
                while j > target {
                    let r = Self::gex(&c, j - 1);
                    c = self.nd(r, vec![c])?;
                    j -= 1;
                }
                let r = Self::cont(&c, e1.name.clone(), e2.name.clone(), e1.name.clone());
                c = self.nd(r, vec![c])?;
            }
        }
        Ok(c)
    }

    // -- linear substitution ---------------------------------------------------

    /// Replaces the linear hypothesis at position `p` of `d` by the linear
    /// context of `n`. The graded context of `n` lands unscaled as a block;
    /// its position in the result is returned.
    fn sub_l(&mut self, d: &NdDeriv, p: usize, n: &NdDeriv) -> TResult<(NdDeriv, usize)> {
        use NdRule::*;
        let delta1 = names_of(n.concl.gctx());
        let k = delta1.len();
        let m = n.concl.lctx().len();
        let kids = &d.children;
        let shift = |at: usize, pc: usize| if at <= pc { at } else { at + m - 1 };
        match &d.rule {
            IdM { .. } => Ok((n.clone(), 0)),
            TensorI | LolliE => {
                let l0 = kids[0].concl.lctx().len();
                let mut kids = kids.clone();
                let q = if p < l0 {
                    let (c, q) = self.sub_l(&kids[0], p, n)?;
                    kids[0] = c;
                    q
                } else {
                    let (c, q) = self.sub_l(&kids[1], p - l0, n)?;
                    kids[1] = c;
                    kids[0].concl.gctx().len() + q
                };
                Ok((self.nd(d.rule.clone(), kids)?, q))
            }
            UnitIE { at } | GrdE { at, .. } => {
                let (s, c) = (&kids[0], &kids[1]);
                let ls = s.concl.lctx().len();
                let gs = s.concl.gctx().len();
                if *at <= p && p < at + ls {
                    let (s2, q) = self.sub_l(s, p - at, n)?;
                    return Ok((self.nd(d.rule.clone(), vec![s2, c.clone()])?, q));
                }
                let pc = if p < *at { p } else { p - ls };
                let (c2, qc) = self.sub_l(c, pc, n)?;
                let at = shift(*at, pc);
                let (rule, q) = match &d.rule {
                    GrdE { x: y, .. } => {
                        let iy = c.concl.find_graded(y).expect("unboxed hypothesis");
                        (GrdE { x: y.clone(), at }, gs + if iy < qc { qc - 1 } else { qc })
                    }
                    _ => (UnitIE { at }, gs + qc),
                };
                Ok((self.nd(rule, vec![s.clone(), c2])?, q))
            }
            TensorE { x: a, .. } => {
                let (s, c) = (&kids[0], &kids[1]);
                let ls = s.concl.lctx().len();
                let i = c.concl.find_linear(a).expect("pair component");
                if i <= p && p < i + ls {
                    let (s2, q) = self.sub_l(s, p - i, n)?;
                    return Ok((self.nd(d.rule.clone(), vec![s2, c.clone()])?, q));
                }
                let pc = if p < i { p } else { p + 2 - ls };
                let (c2, qc) = self.sub_l(c, pc, n)?;
                let q = s.concl.gctx().len() + qc;
                Ok((self.nd(d.rule.clone(), vec![s.clone(), c2])?, q))
            }
            LolliI { x: y } => {
                let iy = kids[0].concl.find_linear(y).expect("bound hypothesis");
                let pc = if p < iy { p } else { p + 1 };
                let (c, q) = self.sub_l(&kids[0], pc, n)?;
                Ok((self.nd(d.rule.clone(), vec![c])?, q))
            }
            ExM { k: e } => {
                let pc = if p == *e {
                    e + 1
                } else if p == e + 1 {
                    *e
                } else {
                    p
                };
                let (c, q) = self.sub_l(&kids[0], pc, n)?;
                let order = splice(&lnames_of(d.concl.lctx()), p, 1, &lnames_of(n.concl.lctx()));
                Ok((self.permute_linear(c, &order)?, q))
            }
            WeakM { .. } | ContM { .. } | GExM { .. } | GSub { .. } | UnitJEM { .. } | TenEM { .. } => {
                let ci = kids.len() - 1;
                let (c, _) = self.sub_l(&kids[ci], p, n)?;
                let mut order: Vec<Name> = c.concl.graded_names().into_iter().filter(|x| !delta1.contains(x)).collect();
                order.extend(delta1.iter().cloned());
                let c = self.permute_graded(c, &order)?;
                let rule = match &d.rule {
                    GSub { to } => {
                        let mut to = to.clone();
                        to.extend(n.concl.grades());
                        GSub { to }
                    }
                    r => r.clone(),
                };
                let mut kids = kids.clone();
                kids[ci] = c;
                let out = self.nd(rule, kids)?;
                let q = out.concl.gctx().len() - k;
                Ok((out, q))
            }
            other => fail(other.name(), "no linear hypothesis to substitute"),
        }
    }

    /// Substitutes the mixed derivation `n` for the linear hypothesis `x` of `d`.
    /// The result has graded context `n`'s followed by `d`'s, and `x` replaced
    /// by `n`'s linear context.
    pub fn subst_linear(&mut self, n: &NdDeriv, x: &str, d: &NdDeriv) -> TResult<NdDeriv> {
        let Judgment::MS { ty, .. } = &n.concl else { return fail("subst", "substituted derivation must be mixed") };
        let Some(p) = d.concl.find_linear(x) else { return fail("subst", format!("`{x}` is not a linear hypothesis")) };
        if &d.concl.lctx()[p].ty != ty {
            return fail("subst", format!("`{x}` has type {}, the substituted derivation has {ty}", d.concl.lctx()[p].ty));
        }
        self.avoid(n.every_name());
        self.avoid(d.every_name());
        let avoid: BTreeSet<Name> = n.concl.graded_names().into_iter().chain(n.concl.linear_names()).collect();
        let (d, _) = self.separate(d, &[x.to_string()], &avoid)?;
        let (c, _) = self.sub_l(&d, p, n)?;
        let mut order = n.concl.graded_names();
        order.extend(d.concl.graded_names());
        self.permute_graded(c, &order)
    }

    // -- SC to ND --------------------------------------------------------------

    pub fn sc_to_nd(&mut self, d: &ScDeriv) -> TResult<NdDeriv> {
        use ScRule::*;
        let kids: Vec<NdDeriv> = d.children.iter().map(|c| self.sc_to_nd(c)).collect::<TResult<_>>()?;
        let direct = |r: NdRule| Some(r);
        let simple = match &d.rule {
            IdGS { x, ty } => direct(NdRule::IdG { x: x.clone(), ty: ty.clone() }),
            UnitJR => direct(NdRule::UnitJI),
            TenR => direct(NdRule::TenI),
            LinR => direct(NdRule::LinI),
            WeakGS { x, ty, at } => direct(NdRule::WeakG { x: x.clone(), ty: ty.clone(), at: *at }),
            ContGS { x, y, z } => direct(NdRule::ContG { x: x.clone(), y: y.clone(), z: z.clone() }),
            ExGS { k } => direct(NdRule::ExG { k: *k }),
            SubGS { to } => direct(NdRule::SubG { to: to.clone() }),
            IdMS { x, ty } => direct(NdRule::IdM { x: x.clone(), ty: ty.clone() }),
            UnitIR => direct(NdRule::UnitII),
            LolliR { x } => direct(NdRule::LolliI { x: x.clone() }),
            TensorR => direct(NdRule::TensorI),
            GrdR { r } => direct(NdRule::GrdI { r: r.clone() }),
            WeakMS { x, ty, at } => direct(NdRule::WeakM { x: x.clone(), ty: ty.clone(), at: *at }),
            ContMS { x, y, z } => direct(NdRule::ContM { x: x.clone(), y: y.clone(), z: z.clone() }),
            ExMS { k } => direct(NdRule::ExM { k: *k }),
            GExMS { k } => direct(NdRule::GExM { k: *k }),
            SubMS { to } => direct(NdRule::GSub { to: to.clone() }),
            _ => None,
        };
        if let Some(r) = simple {
            return self.nd(r, kids);
        }
        let c = kids.last().cloned().expect("premise");
        let sc_prem = d.children.last().expect("premise");
        match &d.rule {
            UnitJL { x, r, at } | UnitJLMS { x, r, at } => {
                let s = self.nd(NdRule::IdG { x: x.clone(), ty: GType::J }, vec![])?;
                let rule = if matches!(d.rule, UnitJL { .. }) {
                    NdRule::UnitJE { r: r.clone(), at: *at }
                } else {
                    NdRule::UnitJEM { r: r.clone(), at: *at }
                };
                self.nd(rule, vec![s, c])
            }
            TenL { x, y, z } | TenLMS { x, y, z } => {
                let g = sc_prem.concl.gctx();
                let i = sc_prem.concl.find_graded(x).expect("pair component");
                let ty = GType::tensor(g[i].ty.clone(), g[i + 1].ty.clone());
                let s = self.nd(NdRule::IdG { x: z.clone(), ty }, vec![])?;
                let rule =
                    if matches!(d.rule, TenL { .. }) { NdRule::TenE { x: x.clone(), y: y.clone() } } else { NdRule::TenEM { x: x.clone(), y: y.clone() } };
                self.nd(rule, vec![s, c])
            }
            UnitIL { x, at } => {
                let s = self.nd(NdRule::IdM { x: x.clone(), ty: LType::I }, vec![])?;
                self.nd(NdRule::UnitIE { at: *at }, vec![s, c])
            }
            TensorL { x, y, z } => {
                let l = sc_prem.concl.lctx();
                let i = sc_prem.concl.find_linear(x).expect("pair component");
                let ty = LType::tensor(l[i].ty.clone(), l[i + 1].ty.clone());
                let s = self.nd(NdRule::IdM { x: z.clone(), ty }, vec![])?;
                self.nd(NdRule::TensorE { x: x.clone(), y: y.clone() }, vec![s, c])
            }
            GrdL { x, z, at } => {
                let g = sc_prem.concl.gctx();
                let i = sc_prem.concl.find_graded(x).expect("boxed hypothesis");
                let ty = LType::grd(g[i].grade.clone(), g[i].ty.clone());
                let s = self.nd(NdRule::IdM { x: z.clone(), ty }, vec![])?;
                self.nd(NdRule::GrdE { x: x.clone(), at: *at }, vec![s, c])
            }
            LolliL { x, z } => {
                let (arg_sc, body_sc) = (&d.children[0], &d.children[1]);
                let Judgment::MS { ty: a, .. } = &arg_sc.concl else { unreachable!() };
                let i = body_sc.concl.find_linear(x).expect("applied hypothesis");
                let b = body_sc.concl.lctx()[i].ty.clone();
                let f = self.nd(NdRule::IdM { x: z.clone(), ty: LType::lolli(a.clone(), b) }, vec![])?;
                let app = self.nd(NdRule::LolliE, vec![f, kids[0].clone()])?;
                self.subst_linear(&app, x, &kids[1])
            }
            LinL { x, z, at } => {
                let i = sc_prem.concl.find_linear(x).expect("unlinned hypothesis");
                let a = sc_prem.concl.lctx()[i].ty.clone();
                let id = self.nd(NdRule::IdG { x: z.clone(), ty: GType::lin(a) }, vec![])?;
                let e = self.nd(NdRule::LinE, vec![id])?;
                let out = self.subst_linear(&e, x, &c)?;
                let mut order: Vec<Name> = c.concl.graded_names();
                order.insert(*at, z.clone());
                self.permute_graded(out, &order)
            }
            CutGS { x } | GCutMS { x } => self.subst_graded_block(&kids[0], &[x.clone()], &kids[1]),
            MCut { at, n } | GMCut { at, n } => {
                let xs: Vec<Name> = names_of(&kids[1].concl.gctx()[*at..at + n].to_vec());
                if *n == 0 {
                    // nothing to substitute: weaken the cut formula's context in place
                    let mut out = kids[1].clone();
                    for (j, e) in kids[0].concl.gctx().iter().enumerate() {
                        let r = Self::weak(&out, e.name.clone(), e.ty.clone(), at + j);
                        out = self.nd(r, vec![out])?;
                    }
                    return Ok(out);
                }
                self.subst_graded_block(&kids[0], &xs, &kids[1])
            }
            CutMS { x } => self.subst_linear(&kids[0], x, &kids[1]),
            _ => unreachable!("handled above"),
        }
    }

    // -- ND to SC --------------------------------------------------------------

    pub fn nd_to_sc(&mut self, d: &NdDeriv) -> TResult<ScDeriv> {
        use NdRule::*;
        let kids: Vec<ScDeriv> = d.children.iter().map(|c| self.nd_to_sc(c)).collect::<TResult<_>>()?;
        let direct = match &d.rule {
            IdG { x, ty } => Some(ScRule::IdGS { x: x.clone(), ty: ty.clone() }),
            UnitJI => Some(ScRule::UnitJR),
            TenI => Some(ScRule::TenR),
            LinI => Some(ScRule::LinR),
            WeakG { x, ty, at } => Some(ScRule::WeakGS { x: x.clone(), ty: ty.clone(), at: *at }),
            ContG { x, y, z } => Some(ScRule::ContGS { x: x.clone(), y: y.clone(), z: z.clone() }),
            ExG { k } => Some(ScRule::ExGS { k: *k }),
            SubG { to } => Some(ScRule::SubGS { to: to.clone() }),
            IdM { x, ty } => Some(ScRule::IdMS { x: x.clone(), ty: ty.clone() }),
            GSub { to } => Some(ScRule::SubMS { to: to.clone() }),
            UnitII => Some(ScRule::UnitIR),
            TensorI => Some(ScRule::TensorR),
            LolliI { x } => Some(ScRule::LolliR { x: x.clone() }),
            GrdI { r } => Some(ScRule::GrdR { r: r.clone() }),
            WeakM { x, ty, at } => Some(ScRule::WeakMS { x: x.clone(), ty: ty.clone(), at: *at }),
            ContM { x, y, z } => Some(ScRule::ContMS { x: x.clone(), y: y.clone(), z: z.clone() }),
            ExM { k } => Some(ScRule::ExMS { k: *k }),
            GExM { k } => Some(ScRule::GExMS { k: *k }),
            _ => None,
        };
        if let Some(r) = direct {
            return self.sc(r, kids);
        }
        let mut kids = kids.into_iter();
        let s = kids.next().expect("premise");
        match &d.rule {
            UnitJE { r, at } | UnitJEM { r, at } => {
                let c = kids.next().expect("premise");
                let x = self.fresh("u");
                let graded = matches!(d.rule, UnitJE { .. });
                let left = if graded {
                    ScRule::UnitJL { x: x.clone(), r: r.clone(), at: *at }
                } else {
                    ScRule::UnitJLMS { x: x.clone(), r: r.clone(), at: *at }
                };
                let c = self.sc(left, vec![c])?;
                let cut = if graded { ScRule::CutGS { x } } else { ScRule::GCutMS { x } };
                self.sc(cut, vec![s, c])
            }
            TenE { x, y } | TenEM { x, y } => {
                let c = kids.next().expect("premise");
                let z = self.fresh("p");
                let graded = matches!(d.rule, TenE { .. });
                let left = if graded {
                    ScRule::TenL { x: x.clone(), y: y.clone(), z: z.clone() }
                } else {
                    ScRule::TenLMS { x: x.clone(), y: y.clone(), z: z.clone() }
                };
                let c = self.sc(left, vec![c])?;
                let cut = if graded { ScRule::CutGS { x: z } } else { ScRule::GCutMS { x: z } };
                self.sc(cut, vec![s, c])
            }
            UnitIE { at } => {
                let c = kids.next().expect("premise");
                let z = self.fresh("i");
                let c = self.sc(ScRule::UnitIL { x: z.clone(), at: *at }, vec![c])?;
                self.sc(ScRule::CutMS { x: z }, vec![s, c])
            }
            TensorE { x, y } => {
                let c = kids.next().expect("premise");
                let z = self.fresh("t");
                let c = self.sc(ScRule::TensorL { x: x.clone(), y: y.clone(), z: z.clone() }, vec![c])?;
                self.sc(ScRule::CutMS { x: z }, vec![s, c])
            }
            LolliE => {
                let a = kids.next().expect("premise");
                let Judgment::MS { ty: LType::Lolli(_, cod), .. } = &s.concl else {
                    return fail("-oE", "function premise is not of lolli type");
                };
                let y = self.fresh("y");
                let z = self.fresh("f");
                let id = self.sc(ScRule::IdMS { x: y.clone(), ty: (**cod).clone() }, vec![])?;
                let app = self.sc(ScRule::LolliL { x: y, z: z.clone() }, vec![a, id])?;
                self.sc(ScRule::CutMS { x: z }, vec![s, app])
            }
            LinE => {
                let Judgment::GS { ty: GType::Lin(a), .. } = &s.concl else { return fail("Lin_E", "premise is not of Lin type") };
                let y = self.fresh("a");
                let z = self.fresh("c");
                let id = self.sc(ScRule::IdMS { x: y.clone(), ty: (**a).clone() }, vec![])?;
                let un = self.sc(ScRule::LinL { x: y, z: z.clone(), at: 0 }, vec![id])?;
                self.sc(ScRule::GCutMS { x: z }, vec![s, un])
            }
            GrdE { x, at } => {
                let c = kids.next().expect("premise");
                let z = self.fresh("b");
                let c = self.sc(ScRule::GrdL { x: x.clone(), z: z.clone(), at: *at }, vec![c])?;
                self.sc(ScRule::CutMS { x: z }, vec![s, c])
            }
            _ => unreachable!("handled above"),
        }
    }
}

/// Translates a sequent derivation into natural deduction with the same conclusion.
pub fn sc_to_nd(sr: SemiringId, d: &ScDeriv) -> TResult<NdDeriv> {
    let mut tx = Tx::new(sr);
    tx.avoid(d.every_name());
    tx.sc_to_nd(d)
}

/// Translates a natural-deduction derivation into the sequent calculus. Every
/// elimination becomes a left rule under an ordinary cut.
pub fn nd_to_sc(sr: SemiringId, d: &NdDeriv) -> TResult<ScDeriv> {
    let mut tx = Tx::new(sr);
    tx.avoid(d.every_name());
    tx.nd_to_sc(d)
}

/// Substitutes `n : Δ₁ ⊢ t : X` for the graded hypothesis `x` of `d`. The
/// result's context is `d`'s with `x` replaced by `Δ₁` scaled by the grade of `x`.
pub fn subst_graded(sr: SemiringId, n: &NdDeriv, x: &str, d: &NdDeriv) -> TResult<NdDeriv> {
    Tx::new(sr).subst_graded_block(n, &[x.to_string()], d)
}

/// Substitutes `n` for the linear hypothesis `x` of `d`.
pub fn subst_linear(sr: SemiringId, n: &NdDeriv, x: &str, d: &NdDeriv) -> TResult<NdDeriv> {
    Tx::new(sr).subst_linear(n, x, d)
}
