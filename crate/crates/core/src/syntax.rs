//! Formulas, proof terms, contexts and judgments for both fragments.

use std::collections::{BTreeSet, HashMap};

use crate::semiring::Grade;

pub type Name = String;

/// Formulas of the graded fragment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GType {
    Atom(Name),
    J,
    Tensor(Box<GType>, Box<GType>),
    Lin(Box<LType>),
}

/// Formulas of the linear fragment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LType {
    Atom(Name),
    I,
    Tensor(Box<LType>, Box<LType>),
    Lolli(Box<LType>, Box<LType>),
    Grd(Grade, Box<GType>),
}

impl GType {
    pub fn atom(n: &str) -> GType {
        GType::Atom(n.to_string())
    }
    pub fn tensor(a: GType, b: GType) -> GType {
        GType::Tensor(Box::new(a), Box::new(b))
    }
    pub fn lin(a: LType) -> GType {
        GType::Lin(Box::new(a))
    }
}

impl LType {
    pub fn atom(n: &str) -> LType {
        LType::Atom(n.to_string())
    }
    pub fn tensor(a: LType, b: LType) -> LType {
        LType::Tensor(Box::new(a), Box::new(b))
    }
    pub fn lolli(a: LType, b: LType) -> LType {
        LType::Lolli(Box::new(a), Box::new(b))
    }
    pub fn grd(r: Grade, x: GType) -> LType {
        LType::Grd(r, Box::new(x))
    }
}

/// Either kind of formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    G(GType),
    L(LType),
}

/// Proof terms of the graded fragment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GTerm {
    Var(Name),
    UnitJ,
    LetUnitJ(Box<GTerm>, Box<GTerm>),
    Pair(Box<GTerm>, Box<GTerm>),
    LetPair(Name, Name, Box<GTerm>, Box<GTerm>),
    Lin(Box<LTerm>),
}

/// Proof terms of the mixed fragment.
///
/// `LetUnitJ` and `LetPairG` eliminate a graded scrutinee; they share
/// concrete syntax with `LetUnitI`-style and `LetPair`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LTerm {
    Var(Name),
    UnitI,
    LetUnitI(Box<LTerm>, Box<LTerm>),
    Pair(Box<LTerm>, Box<LTerm>),
    LetPair(Name, Name, Box<LTerm>, Box<LTerm>),
    Lam(Name, Option<LType>, Box<LTerm>),
    App(Box<LTerm>, Box<LTerm>),
    Grd(Grade, Box<GTerm>),
    LetGrd(Grade, Name, Box<LTerm>, Box<LTerm>),
    Unlin(Box<GTerm>),
    LetUnitJ(Box<GTerm>, Box<LTerm>),
    LetPairG(Name, Name, Box<GTerm>, Box<LTerm>),
}

/// A term of either fragment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    G(GTerm),
    L(LTerm),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GEntry {
    pub name: Name,
    pub grade: Grade,
    pub ty: GType,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LEntry {
    pub name: Name,
    pub ty: LType,
}

pub type GradedCtx = Vec<GEntry>;
pub type LinearCtx = Vec<LEntry>;

pub fn gentry(name: &str, grade: Grade, ty: GType) -> GEntry {
    GEntry { name: name.to_string(), grade, ty }
}

pub fn lentry(name: &str, ty: LType) -> LEntry {
    LEntry { name: name.to_string(), ty }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Judgment {
    GS { gctx: GradedCtx, term: GTerm, ty: GType },
    MS { gctx: GradedCtx, lctx: LinearCtx, term: LTerm, ty: LType },
}

impl Judgment {
    pub fn gctx(&self) -> &GradedCtx {
        match self {
            Judgment::GS { gctx, .. } | Judgment::MS { gctx, .. } => gctx,
        }
    }

    pub fn lctx(&self) -> &[LEntry] {
        match self {
            Judgment::GS { .. } => &[],
            Judgment::MS { lctx, .. } => lctx,
        }
    }

    pub fn is_gs(&self) -> bool {
        matches!(self, Judgment::GS { .. })
    }

    pub fn term(&self) -> Term {
        match self {
            Judgment::GS { term, .. } => Term::G(term.clone()),
            Judgment::MS { term, .. } => Term::L(term.clone()),
        }
    }

    pub fn formula(&self) -> Formula {
        match self {
            Judgment::GS { ty, .. } => Formula::G(ty.clone()),
            Judgment::MS { ty, .. } => Formula::L(ty.clone()),
        }
    }

    pub fn gtype(&self) -> Option<&GType> {
        match self {
            Judgment::GS { ty, .. } => Some(ty),
            Judgment::MS { .. } => None,
        }
    }

    pub fn ltype(&self) -> Option<&LType> {
        match self {
            Judgment::GS { .. } => None,
            Judgment::MS { ty, .. } => Some(ty),
        }
    }

    pub fn grades(&self) -> Vec<Grade> {
        self.gctx().iter().map(|e| e.grade.clone()).collect()
    }

    pub fn graded_names(&self) -> Vec<Name> {
        self.gctx().iter().map(|e| e.name.clone()).collect()
    }

    pub fn linear_names(&self) -> Vec<Name> {
        self.lctx().iter().map(|e| e.name.clone()).collect()
    }

    pub fn find_graded(&self, x: &str) -> Option<usize> {
        self.gctx().iter().position(|e| e.name == x)
    }

    pub fn find_linear(&self, x: &str) -> Option<usize> {
        self.lctx().iter().position(|e| e.name == x)
    }

    /// Same contexts and formula; terms compared up to bound names.
    pub fn alpha_eq(&self, other: &Judgment) -> bool {
        self.same_sequent(other) && alpha_eq(&self.term(), &other.term())
    }

    /// Same contexts and formula, ignoring the proof term.
    pub fn same_sequent(&self, other: &Judgment) -> bool {
        match (self, other) {
            (Judgment::GS { gctx: a, ty: s, .. }, Judgment::GS { gctx: b, ty: t, .. }) => a == b && s == t,
            (
                Judgment::MS { gctx: a, lctx: la, ty: s, .. },
                Judgment::MS { gctx: b, lctx: lb, ty: t, .. },
            ) => a == b && la == lb && s == t,
            _ => false,
        }
    }

    pub fn all_names(&self) -> BTreeSet<Name> {
        let mut out: BTreeSet<Name> = self.graded_names().into_iter().collect();
        out.extend(self.linear_names());
        out
    }
}

// ---------------------------------------------------------------------------
// Free variables

pub fn free_vars(t: &Term) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    match t {
        Term::G(g) => fv_g(g, &mut Vec::new(), &mut out),
        Term::L(l) => fv_l(l, &mut Vec::new(), &mut out),
    }
    out
}

pub fn free_vars_g(t: &GTerm) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    fv_g(t, &mut Vec::new(), &mut out);
    out
}

pub fn free_vars_l(t: &LTerm) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    fv_l(t, &mut Vec::new(), &mut out);
    out
}

fn note(x: &Name, bound: &[Name], out: &mut BTreeSet<Name>) {
    if !bound.contains(x) {
        out.insert(x.clone());
    }
}

fn under<F: FnOnce(&mut Vec<Name>)>(bound: &mut Vec<Name>, names: &[&Name], f: F) {
    let n = bound.len();
    bound.extend(names.iter().map(|x| (*x).clone()));
    f(bound);
    bound.truncate(n);
}

fn fv_g(t: &GTerm, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
    match t {
        GTerm::Var(x) => note(x, bound, out),
        GTerm::UnitJ => {}
        GTerm::LetUnitJ(a, b) | GTerm::Pair(a, b) => {
            fv_g(a, bound, out);
            fv_g(b, bound, out);
        }
        GTerm::LetPair(x, y, a, b) => {
            fv_g(a, bound, out);
            under(bound, &[x, y], |bd| fv_g(b, bd, out));
        }
        GTerm::Lin(l) => fv_l(l, bound, out),
    }
}

fn fv_l(t: &LTerm, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
    match t {
        LTerm::Var(x) => note(x, bound, out),
        LTerm::UnitI => {}
        LTerm::LetUnitI(a, b) | LTerm::Pair(a, b) | LTerm::App(a, b) => {
            fv_l(a, bound, out);
            fv_l(b, bound, out);
        }
        LTerm::LetPair(x, y, a, b) => {
            fv_l(a, bound, out);
            under(bound, &[x, y], |bd| fv_l(b, bd, out));
        }
        LTerm::Lam(x, _, b) => under(bound, &[x], |bd| fv_l(b, bd, out)),
        LTerm::Grd(_, g) | LTerm::Unlin(g) => fv_g(g, bound, out),
        LTerm::LetGrd(_, x, a, b) => {
            fv_l(a, bound, out);
            under(bound, &[x], |bd| fv_l(b, bd, out));
        }
        LTerm::LetUnitJ(g, b) => {
            fv_g(g, bound, out);
            fv_l(b, bound, out);
        }
        LTerm::LetPairG(x, y, g, b) => {
            fv_g(g, bound, out);
            under(bound, &[x, y], |bd| fv_l(b, bd, out));
        }
    }
}

/// Every name occurring in the term, bound or free.
pub fn all_names(t: &Term) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    match t {
        Term::G(g) => names_g(g, &mut out),
        Term::L(l) => names_l(l, &mut out),
    }
    out
}

fn names_g(t: &GTerm, out: &mut BTreeSet<Name>) {
    match t {
        GTerm::Var(x) => {
            out.insert(x.clone());
        }
        GTerm::UnitJ => {}
        GTerm::LetUnitJ(a, b) | GTerm::Pair(a, b) => {
            names_g(a, out);
            names_g(b, out);
        }
        GTerm::LetPair(x, y, a, b) => {
            out.insert(x.clone());
            out.insert(y.clone());
            names_g(a, out);
            names_g(b, out);
        }
        GTerm::Lin(l) => names_l(l, out),
    }
}

fn names_l(t: &LTerm, out: &mut BTreeSet<Name>) {
    match t {
        LTerm::Var(x) => {
            out.insert(x.clone());
        }
        LTerm::UnitI => {}
        LTerm::LetUnitI(a, b) | LTerm::Pair(a, b) | LTerm::App(a, b) => {
            names_l(a, out);
            names_l(b, out);
        }
        LTerm::LetPair(x, y, a, b) => {
            out.insert(x.clone());
            out.insert(y.clone());
            names_l(a, out);
            names_l(b, out);
        }
        LTerm::Lam(x, _, b) => {
            out.insert(x.clone());
            names_l(b, out);
        }
        LTerm::Grd(_, g) | LTerm::Unlin(g) => names_g(g, out),
        LTerm::LetGrd(_, x, a, b) => {
            out.insert(x.clone());
            names_l(a, out);
            names_l(b, out);
        }
        LTerm::LetUnitJ(g, b) => {
            names_g(g, out);
            names_l(b, out);
        }
        LTerm::LetPairG(x, y, g, b) => {
            out.insert(x.clone());
            out.insert(y.clone());
            names_g(g, out);
            names_l(b, out);
        }
    }
}

// ---------------------------------------------------------------------------
// Fresh names

/// Produces names not in a growing set of used names by suffixing a counter.
#[derive(Debug, Clone, Default)]
pub struct NameSupply {
    used: BTreeSet<Name>,
    counter: usize,
}

impl NameSupply {
    pub fn new() -> NameSupply {
        NameSupply::default()
    }

    pub fn avoiding<I: IntoIterator<Item = Name>>(names: I) -> NameSupply {
        NameSupply { used: names.into_iter().collect(), counter: 0 }
    }

    pub fn reserve(&mut self, x: &str) {
        self.used.insert(x.to_string());
    }

    pub fn reserve_all<'a, I: IntoIterator<Item = &'a Name>>(&mut self, names: I) {
        for n in names {
            self.used.insert(n.clone());
        }
    }

    pub fn is_used(&self, x: &str) -> bool {
        self.used.contains(x)
    }

    pub fn fresh(&mut self, base: &str) -> Name {
        let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
        let stem = if stem.is_empty() { "v" } else { stem };
        loop {
            self.counter += 1;
            let cand = format!("{stem}{}", self.counter);
            if !self.used.contains(&cand) {
                self.used.insert(cand.clone());
                return cand;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Alpha-equivalence

pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    match (a, b) {
        (Term::G(x), Term::G(y)) => alpha_eq_g(x, y),
        (Term::L(x), Term::L(y)) => alpha_eq_l(x, y),
        _ => false,
    }
}

pub fn alpha_eq_g(a: &GTerm, b: &GTerm) -> bool {
    Alpha::default().g(a, b)
}

pub fn alpha_eq_l(a: &LTerm, b: &LTerm) -> bool {
    Alpha::default().l(a, b)
}

#[derive(Default)]
struct Alpha {
    left: Vec<Name>,
    right: Vec<Name>,
}

impl Alpha {
    fn var(&self, x: &Name, y: &Name) -> bool {
        let i = self.left.iter().rposition(|n| n == x);
        let j = self.right.iter().rposition(|n| n == y);
        match (i, j) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        }
    }

    fn bind<F: FnOnce(&mut Alpha) -> bool>(&mut self, xs: &[&Name], ys: &[&Name], f: F) -> bool {
        let n = self.left.len();
        self.left.extend(xs.iter().map(|x| (*x).clone()));
        self.right.extend(ys.iter().map(|y| (*y).clone()));
        let r = f(self);
        self.left.truncate(n);
        self.right.truncate(n);
        r
    }

    fn g(&mut self, a: &GTerm, b: &GTerm) -> bool {
        match (a, b) {
            (GTerm::Var(x), GTerm::Var(y)) => self.var(x, y),
            (GTerm::UnitJ, GTerm::UnitJ) => true,
            (GTerm::LetUnitJ(a1, a2), GTerm::LetUnitJ(b1, b2)) | (GTerm::Pair(a1, a2), GTerm::Pair(b1, b2)) => {
                self.g(a1, b1) && self.g(a2, b2)
            }
            (GTerm::LetPair(x1, y1, a1, a2), GTerm::LetPair(x2, y2, b1, b2)) => {
                self.g(a1, b1) && self.bind(&[x1, y1], &[x2, y2], |s| s.g(a2, b2))
            }
            (GTerm::Lin(a), GTerm::Lin(b)) => self.l(a, b),
            _ => false,
        }
    }

    fn l(&mut self, a: &LTerm, b: &LTerm) -> bool {
        match (a, b) {
            (LTerm::Var(x), LTerm::Var(y)) => self.var(x, y),
            (LTerm::UnitI, LTerm::UnitI) => true,
            (LTerm::LetUnitI(a1, a2), LTerm::LetUnitI(b1, b2))
            | (LTerm::Pair(a1, a2), LTerm::Pair(b1, b2))
            | (LTerm::App(a1, a2), LTerm::App(b1, b2)) => self.l(a1, b1) && self.l(a2, b2),
            (LTerm::LetPair(x1, y1, a1, a2), LTerm::LetPair(x2, y2, b1, b2)) => {
                self.l(a1, b1) && self.bind(&[x1, y1], &[x2, y2], |s| s.l(a2, b2))
            }
            // Binder annotations are checking aids and do not affect identity.
            (LTerm::Lam(x, _, a1), LTerm::Lam(y, _, b1)) => self.bind(&[x], &[y], |s| s.l(a1, b1)),
            (LTerm::Grd(r, a1), LTerm::Grd(s, b1)) => r == s && self.g(a1, b1),
            (LTerm::LetGrd(r, x, a1, a2), LTerm::LetGrd(s, y, b1, b2)) => {
                r == s && self.l(a1, b1) && self.bind(&[x], &[y], |st| st.l(a2, b2))
            }
            (LTerm::Unlin(a1), LTerm::Unlin(b1)) => self.g(a1, b1),
            (LTerm::LetUnitJ(a1, a2), LTerm::LetUnitJ(b1, b2)) => self.g(a1, b1) && self.l(a2, b2),
            (LTerm::LetPairG(x1, y1, a1, a2), LTerm::LetPairG(x2, y2, b1, b2)) => {
                self.g(a1, b1) && self.bind(&[x1, y1], &[x2, y2], |s| s.l(a2, b2))
            }
            _ => false,
        }
    }
}

// ---------------------------------------------------------------------------
// Substitution

/// A simultaneous substitution of terms for variables.
#[derive(Debug, Clone, Default)]
pub struct Subst {
    map: HashMap<Name, Term>,
}

impl Subst {
    pub fn new() -> Subst {
        Subst::default()
    }

    pub fn single(x: &str, t: Term) -> Subst {
        let mut s = Subst::new();
        s.insert(x, t);
        s
    }

    pub fn insert(&mut self, x: &str, t: Term) {
        self.map.insert(x.to_string(), t);
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    fn without(&self, xs: &[&Name]) -> Subst {
        let mut s = self.clone();
        for x in xs {
            s.map.remove(*x);
        }
        s
    }

    fn range_fv(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        for t in self.map.values() {
            out.extend(free_vars(t));
        }
        out
    }

    pub fn apply(&self, t: &Term) -> Term {
        match t {
            Term::G(g) => Term::G(self.apply_g(g)),
            Term::L(l) => Term::L(self.apply_l(l)),
        }
    }

    pub fn apply_g(&self, t: &GTerm) -> GTerm {
        if self.is_empty() {
            return t.clone();
        }
        let mut ctx = SubstCtx::new(self, &Term::G(t.clone()));
        ctx.g(self, t)
    }

    pub fn apply_l(&self, t: &LTerm) -> LTerm {
        if self.is_empty() {
            return t.clone();
        }
        let mut ctx = SubstCtx::new(self, &Term::L(t.clone()));
        ctx.l(self, t)
    }
}

struct SubstCtx {
    supply: NameSupply,
}

impl SubstCtx {
    fn new(s: &Subst, body: &Term) -> SubstCtx {
        let mut used = all_names(body);
        used.extend(s.range_fv());
        used.extend(s.map.keys().cloned());
        SubstCtx { supply: NameSupply::avoiding(used) }
    }

    /// Renames binders that would capture a free variable of the substituted terms.
    fn binders(&mut self, s: &Subst, xs: &[&Name]) -> (Subst, Vec<Name>) {
        let inner = s.without(xs);
        let danger = inner.range_fv();
        let mut out = inner;
        let mut names = Vec::new();
        for x in xs {
            if danger.contains(*x) {
                let y = self.supply.fresh(x);
                let var = Term::G(GTerm::Var(y.clone()));
                out.map.insert((*x).clone(), var);
                names.push(y);
            } else {
                names.push((*x).clone());
            }
        }
        (out, names)
    }

    fn g(&mut self, s: &Subst, t: &GTerm) -> GTerm {
        match t {
            GTerm::Var(x) => match s.map.get(x) {
                Some(Term::G(u)) => u.clone(),
                Some(Term::L(LTerm::Var(y))) => GTerm::Var(y.clone()),
                Some(Term::L(_)) => t.clone(),
                None => t.clone(),
            },
            GTerm::UnitJ => GTerm::UnitJ,
            GTerm::LetUnitJ(a, b) => GTerm::LetUnitJ(Box::new(self.g(s, a)), Box::new(self.g(s, b))),
            GTerm::Pair(a, b) => GTerm::Pair(Box::new(self.g(s, a)), Box::new(self.g(s, b))),
            GTerm::LetPair(x, y, a, b) => {
                let a = self.g(s, a);
                let (inner, names) = self.binders(s, &[x, y]);
                let b = self.g(&inner, b);
                GTerm::LetPair(names[0].clone(), names[1].clone(), Box::new(a), Box::new(b))
            }
            GTerm::Lin(l) => GTerm::Lin(Box::new(self.l(s, l))),
        }
    }

    fn l(&mut self, s: &Subst, t: &LTerm) -> LTerm {
        match t {
            LTerm::Var(x) => match s.map.get(x) {
                Some(Term::L(u)) => u.clone(),
                Some(Term::G(GTerm::Var(y))) => LTerm::Var(y.clone()),
                _ => t.clone(),
            },
            LTerm::UnitI => LTerm::UnitI,
            LTerm::LetUnitI(a, b) => LTerm::LetUnitI(Box::new(self.l(s, a)), Box::new(self.l(s, b))),
            LTerm::Pair(a, b) => LTerm::Pair(Box::new(self.l(s, a)), Box::new(self.l(s, b))),
            LTerm::App(a, b) => LTerm::App(Box::new(self.l(s, a)), Box::new(self.l(s, b))),
            LTerm::LetPair(x, y, a, b) => {
                let a = self.l(s, a);
                let (inner, names) = self.binders(s, &[x, y]);
                let b = self.l(&inner, b);
                LTerm::LetPair(names[0].clone(), names[1].clone(), Box::new(a), Box::new(b))
            }
            LTerm::Lam(x, ann, b) => {
                let (inner, names) = self.binders(s, &[x]);
                let b = self.l(&inner, b);
                LTerm::Lam(names[0].clone(), ann.clone(), Box::new(b))
            }
            LTerm::Grd(r, g) => LTerm::Grd(r.clone(), Box::new(self.g(s, g))),
            LTerm::Unlin(g) => LTerm::Unlin(Box::new(self.g(s, g))),
            LTerm::LetGrd(r, x, a, b) => {
                let a = self.l(s, a);
                let (inner, names) = self.binders(s, &[x]);
                let b = self.l(&inner, b);
                LTerm::LetGrd(r.clone(), names[0].clone(), Box::new(a), Box::new(b))
            }
            LTerm::LetUnitJ(g, b) => LTerm::LetUnitJ(Box::new(self.g(s, g)), Box::new(self.l(s, b))),
            LTerm::LetPairG(x, y, g, b) => {
                let g = self.g(s, g);
                let (inner, names) = self.binders(s, &[x, y]);
                let b = self.l(&inner, b);
                LTerm::LetPairG(names[0].clone(), names[1].clone(), Box::new(g), Box::new(b))
            }
        }
    }
}

/// `[arg/var] body`, capture-avoiding.
pub fn subst(body: &Term, var: &str, arg: &Term) -> Term {
    Subst::single(var, arg.clone()).apply(body)
}

/// `[arg, ..., arg / x1, ..., xn] body`.
pub fn multi_subst(body: &Term, vars: &[Name], arg: &Term) -> Term {
    let mut s = Subst::new();
    for v in vars {
        s.insert(v, arg.clone());
    }
    s.apply(body)
}

/// Renames free variables.
pub fn rename(body: &Term, map: &[(Name, Name)]) -> Term {
    let mut s = Subst::new();
    for (a, b) in map {
        let v = match body {
            Term::G(_) => Term::G(GTerm::Var(b.clone())),
            Term::L(_) => Term::L(LTerm::Var(b.clone())),
        };
        s.insert(a, v);
    }
    s.apply(body)
}

pub fn gvar(x: &str) -> GTerm {
    GTerm::Var(x.to_string())
}

pub fn lvar(x: &str) -> LTerm {
    LTerm::Var(x.to_string())
}

// ---------------------------------------------------------------------------
// Uniform renaming of every occurrence, bound or free

pub fn map_names(t: &Term, f: &dyn Fn(&str) -> Name) -> Term {
    match t {
        Term::G(g) => Term::G(map_names_g(g, f)),
        Term::L(l) => Term::L(map_names_l(l, f)),
    }
}

pub fn map_names_g(t: &GTerm, f: &dyn Fn(&str) -> Name) -> GTerm {
    let g = |a: &GTerm| Box::new(map_names_g(a, f));
    match t {
        GTerm::Var(x) => GTerm::Var(f(x)),
        GTerm::UnitJ => GTerm::UnitJ,
        GTerm::LetUnitJ(a, b) => GTerm::LetUnitJ(g(a), g(b)),
        GTerm::Pair(a, b) => GTerm::Pair(g(a), g(b)),
        GTerm::LetPair(x, y, a, b) => GTerm::LetPair(f(x), f(y), g(a), g(b)),
        GTerm::Lin(l) => GTerm::Lin(Box::new(map_names_l(l, f))),
    }
}

pub fn map_names_l(t: &LTerm, f: &dyn Fn(&str) -> Name) -> LTerm {
    let l = |a: &LTerm| Box::new(map_names_l(a, f));
    let g = |a: &GTerm| Box::new(map_names_g(a, f));
    match t {
        LTerm::Var(x) => LTerm::Var(f(x)),
        LTerm::UnitI => LTerm::UnitI,
        LTerm::LetUnitI(a, b) => LTerm::LetUnitI(l(a), l(b)),
        LTerm::Pair(a, b) => LTerm::Pair(l(a), l(b)),
        LTerm::LetPair(x, y, a, b) => LTerm::LetPair(f(x), f(y), l(a), l(b)),
        LTerm::Lam(x, ann, b) => LTerm::Lam(f(x), ann.clone(), l(b)),
        LTerm::App(a, b) => LTerm::App(l(a), l(b)),
        LTerm::Grd(r, a) => LTerm::Grd(r.clone(), g(a)),
        LTerm::LetGrd(r, x, a, b) => LTerm::LetGrd(r.clone(), f(x), l(a), l(b)),
        LTerm::Unlin(a) => LTerm::Unlin(g(a)),
        LTerm::LetUnitJ(a, b) => LTerm::LetUnitJ(g(a), l(b)),
        LTerm::LetPairG(x, y, a, b) => LTerm::LetPairG(f(x), f(y), g(a), l(b)),
    }
}

impl Judgment {
    pub fn map_names(&self, f: &dyn Fn(&str) -> Name) -> Judgment {
        match self {
            Judgment::GS { gctx, term, ty } => Judgment::GS {
                gctx: gctx.iter().map(|e| gentry(&f(&e.name), e.grade.clone(), e.ty.clone())).collect(),
                term: map_names_g(term, f),
                ty: ty.clone(),
            },
            Judgment::MS { gctx, lctx, term, ty } => Judgment::MS {
                gctx: gctx.iter().map(|e| gentry(&f(&e.name), e.grade.clone(), e.ty.clone())).collect(),
                lctx: lctx.iter().map(|e| lentry(&f(&e.name), e.ty.clone())).collect(),
                term: map_names_l(term, f),
                ty: ty.clone(),
            },
        }
    }

    /// Context names together with every name in the term.
    pub fn every_name(&self) -> BTreeSet<Name> {
        let mut out = self.all_names();
        out.extend(all_names(&self.term()));
        out
    }
}
