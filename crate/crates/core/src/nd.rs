//! Natural-deduction rules for the graded (GT) and mixed (MT) systems.

use crate::deriv::*;
use crate::semiring::{Grade, GradeVec, SemiringId};
use crate::syntax::*;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NdRule {
    IdG { x: Name, ty: GType },
    UnitJI,
    UnitJE { r: Grade, at: usize },
    TenI,
    TenE { x: Name, y: Name },
    LinI,
    WeakG { x: Name, ty: GType, at: usize },
    ContG { x: Name, y: Name, z: Name },
    ExG { k: usize },
    SubG { to: GradeVec },
    IdM { x: Name, ty: LType },
    GSub { to: GradeVec },
    UnitII,
    UnitIE { at: usize },
    TensorI,
    TensorE { x: Name, y: Name },
    LolliI { x: Name },
    LolliE,
    GrdI { r: Grade },
    LinE,
    GrdE { x: Name, at: usize },
    WeakM { x: Name, ty: GType, at: usize },
    ContM { x: Name, y: Name, z: Name },
    ExM { k: usize },
    GExM { k: usize },
    /// Graded unit elimination with a mixed continuation.
    UnitJEM { r: Grade, at: usize },
    /// Graded tensor elimination with a mixed continuation.
    TenEM { x: Name, y: Name },
}

pub type NdDeriv = Deriv<NdRule>;
pub type NdNode = Node<NdRule>;

use Frag::{Graded as G, Mixed as M};
use ParamKind as K;

type Entry = (&'static str, &'static [&'static str], Frag, &'static [ParamKind]);

const TABLE: &[Entry] = &[
    ("Id", &[], G, &[K::Name, K::GType]),
    ("unitJ_I", &[], G, &[]),
    ("unitJ_E", &[], G, &[K::Grade, K::Index]),
    ("><I", &["⊠I"], G, &[]),
    ("><E", &["⊠E"], G, &[K::Name, K::Name]),
    ("Lin_I", &[], G, &[]),
    ("weak", &[], G, &[K::Name, K::GType, K::Index]),
    ("cont", &[], G, &[K::Name, K::Name, K::Name]),
    ("ex", &[], G, &[K::Index]),
    ("sub", &[], G, &[K::Grades]),
    ("Id", &[], M, &[K::Name, K::LType]),
    ("GSub", &[], M, &[K::Grades]),
    ("unitI_I", &[], M, &[]),
    ("unitI_E", &[], M, &[K::Index]),
    ("*I", &["⊗I"], M, &[]),
    ("*E", &["⊗E"], M, &[K::Name, K::Name]),
    ("-oI", &["⊸I"], M, &[K::Name]),
    ("-oE", &["⊸E"], M, &[]),
    ("Grd_I", &[], M, &[K::Grade]),
    ("Lin_E", &[], M, &[]),
    ("Grd_E", &[], M, &[K::Name, K::Index]),
    ("weak", &[], M, &[K::Name, K::GType, K::Index]),
    ("cont", &[], M, &[K::Name, K::Name, K::Name]),
    ("ex", &[], M, &[K::Index]),
    ("gex", &[], M, &[K::Index]),
    ("unitJ_E", &[], M, &[K::Grade, K::Index]),
    ("><E", &["⊠E"], M, &[K::Name, K::Name]),
];

fn lookup(name: &str, frag: Frag) -> Option<&'static Entry> {
    TABLE.iter().find(|e| e.2 == frag && (e.0 == name || e.1.contains(&name)))
}

pub fn rule_names() -> impl Iterator<Item = &'static str> {
    TABLE.iter().map(|e| e.0)
}

fn get<T>(p: &Param, f: impl Fn(&Param) -> Option<T>, what: &str) -> Result<T, String> {
    f(p).ok_or_else(|| format!("expected {what}"))
}

fn name_p(p: &Param) -> Result<Name, String> {
    get(p, |p| if let Param::Name(n) = p { Some(n.clone()) } else { None }, "a name")
}
fn idx_p(p: &Param) -> Result<usize, String> {
    get(p, |p| if let Param::Index(n) = p { Some(*n) } else { None }, "an index")
}
fn grade_p(p: &Param) -> Result<Grade, String> {
    get(p, |p| if let Param::Grade(g) = p { Some(g.clone()) } else { None }, "a grade")
}
fn grades_p(p: &Param) -> Result<GradeVec, String> {
    get(p, |p| if let Param::Grades(g) = p { Some(g.clone()) } else { None }, "a grade vector")
}
fn gtype_p(p: &Param) -> Result<GType, String> {
    get(p, |p| if let Param::GType(t) = p { Some(t.clone()) } else { None }, "a graded type")
}
fn ltype_p(p: &Param) -> Result<LType, String> {
    get(p, |p| if let Param::LType(t) = p { Some(t.clone()) } else { None }, "a linear type")
}

impl Rule for NdRule {
    fn name(&self) -> &'static str {
        use NdRule::*;
        match self {
            IdG { .. } | IdM { .. } => "Id",
            UnitJI => "unitJ_I",
            UnitJE { .. } | UnitJEM { .. } => "unitJ_E",
            TenI => "><I",
            TenE { .. } | TenEM { .. } => "><E",
            LinI => "Lin_I",
            WeakG { .. } | WeakM { .. } => "weak",
            ContG { .. } | ContM { .. } => "cont",
            ExG { .. } | ExM { .. } => "ex",
            SubG { .. } => "sub",
            GSub { .. } => "GSub",
            UnitII => "unitI_I",
            UnitIE { .. } => "unitI_E",
            TensorI => "*I",
            TensorE { .. } => "*E",
            LolliI { .. } => "-oI",
            LolliE => "-oE",
            GrdI { .. } => "Grd_I",
            LinE => "Lin_E",
            GrdE { .. } => "Grd_E",
            GExM { .. } => "gex",
        }
    }

    fn frag(&self) -> Frag {
        use NdRule::*;
        match self {
            IdG { .. } | UnitJI | UnitJE { .. } | TenI | TenE { .. } | LinI | WeakG { .. } | ContG { .. } | ExG { .. }
            | SubG { .. } => G,
            _ => M,
        }
    }

    fn child_frags(&self) -> Vec<Frag> {
        use NdRule::*;
        match self {
            IdG { .. } | UnitJI | IdM { .. } | UnitII => vec![],
            UnitJE { .. } | TenE { .. } | TenI => vec![G, G],
            LinI => vec![M],
            WeakG { .. } | ContG { .. } | ExG { .. } | SubG { .. } => vec![G],
            UnitIE { .. } | TensorI | TensorE { .. } | LolliE | GrdE { .. } => vec![M, M],
            GrdI { .. } | LinE => vec![G],
            UnitJEM { .. } | TenEM { .. } => vec![G, M],
            GSub { .. } | LolliI { .. } | WeakM { .. } | ContM { .. } | ExM { .. } | GExM { .. } => vec![M],
        }
    }

    fn params(&self) -> Vec<Param> {
        use NdRule::*;
        let n = |s: &Name| Param::Name(s.clone());
        match self {
            IdG { x, ty } => vec![n(x), Param::GType(ty.clone())],
            IdM { x, ty } => vec![n(x), Param::LType(ty.clone())],
            UnitJI | TenI | LinI | UnitII | TensorI | LolliE | LinE => vec![],
            UnitJE { r, at } | UnitJEM { r, at } => vec![Param::Grade(r.clone()), Param::Index(*at)],
            TenE { x, y } | TenEM { x, y } | TensorE { x, y } => vec![n(x), n(y)],
            WeakG { x, ty, at } | WeakM { x, ty, at } => vec![n(x), Param::GType(ty.clone()), Param::Index(*at)],
            ContG { x, y, z } | ContM { x, y, z } => vec![n(x), n(y), n(z)],
            ExG { k } | ExM { k } | GExM { k } => vec![Param::Index(*k)],
            SubG { to } | GSub { to } => vec![Param::Grades(to.clone())],
            UnitIE { at } => vec![Param::Index(*at)],
            LolliI { x } => vec![n(x)],
            GrdI { r } => vec![Param::Grade(r.clone())],
            GrdE { x, at } => vec![n(x), Param::Index(*at)],
        }
    }

    fn schema(name: &str, frag: Frag) -> Option<(&'static str, &'static [ParamKind])> {
        lookup(name, frag).map(|e| (e.0, e.3))
    }

    fn from_params(name: &str, frag: Frag, p: Vec<Param>) -> Result<NdRule, String> {
        use NdRule::*;
        let e = lookup(name, frag).ok_or_else(|| format!("unknown rule `{name}` here"))?;
        if p.len() != e.3.len() {
            return Err(format!("rule `{}` takes {} parameters, found {}", e.0, e.3.len(), p.len()));
        }
        Ok(match (e.0, frag) {
            ("Id", G) => IdG { x: name_p(&p[0])?, ty: gtype_p(&p[1])? },
            ("unitJ_I", _) => UnitJI,
            ("unitJ_E", G) => UnitJE { r: grade_p(&p[0])?, at: idx_p(&p[1])? },
            ("><I", _) => TenI,
            ("><E", G) => TenE { x: name_p(&p[0])?, y: name_p(&p[1])? },
            ("Lin_I", _) => LinI,
            ("weak", G) => WeakG { x: name_p(&p[0])?, ty: gtype_p(&p[1])?, at: idx_p(&p[2])? },
            ("cont", G) => ContG { x: name_p(&p[0])?, y: name_p(&p[1])?, z: name_p(&p[2])? },
            ("ex", G) => ExG { k: idx_p(&p[0])? },
            ("sub", _) => SubG { to: grades_p(&p[0])? },
            ("Id", M) => IdM { x: name_p(&p[0])?, ty: ltype_p(&p[1])? },
            ("GSub", _) => GSub { to: grades_p(&p[0])? },
            ("unitI_I", _) => UnitII,
            ("unitI_E", _) => UnitIE { at: idx_p(&p[0])? },
            ("*I", _) => TensorI,
            ("*E", _) => TensorE { x: name_p(&p[0])?, y: name_p(&p[1])? },
            ("-oI", _) => LolliI { x: name_p(&p[0])? },
            ("-oE", _) => LolliE,
            ("Grd_I", _) => GrdI { r: grade_p(&p[0])? },
            ("Lin_E", _) => LinE,
            ("Grd_E", _) => GrdE { x: name_p(&p[0])?, at: idx_p(&p[1])? },
            ("weak", M) => WeakM { x: name_p(&p[0])?, ty: gtype_p(&p[1])?, at: idx_p(&p[2])? },
            ("cont", M) => ContM { x: name_p(&p[0])?, y: name_p(&p[1])?, z: name_p(&p[2])? },
            ("ex", M) => ExM { k: idx_p(&p[0])? },
            ("gex", _) => GExM { k: idx_p(&p[0])? },
            ("unitJ_E", M) => UnitJEM { r: grade_p(&p[0])?, at: idx_p(&p[1])? },
            ("><E", M) => TenEM { x: name_p(&p[0])?, y: name_p(&p[1])? },
            (other, _) => return Err(format!("unknown rule `{other}`")),
        })
    }

    fn conclude(&self, sr: SemiringId, prem: &[&Judgment]) -> Result<Judgment, RuleError> {
        conclude(sr, self, prem)
    }

    fn map_names(&self, f: &dyn Fn(&str) -> Name) -> NdRule {
        use NdRule::*;
        match self.clone() {
            IdG { x, ty } => IdG { x: f(&x), ty },
            TenE { x, y } => TenE { x: f(&x), y: f(&y) },
            WeakG { x, ty, at } => WeakG { x: f(&x), ty, at },
            ContG { x, y, z } => ContG { x: f(&x), y: f(&y), z: f(&z) },
            IdM { x, ty } => IdM { x: f(&x), ty },
            TensorE { x, y } => TensorE { x: f(&x), y: f(&y) },
            LolliI { x } => LolliI { x: f(&x) },
            GrdE { x, at } => GrdE { x: f(&x), at },
            WeakM { x, ty, at } => WeakM { x: f(&x), ty, at },
            ContM { x, y, z } => ContM { x: f(&x), y: f(&y), z: f(&z) },
            TenEM { x, y } => TenEM { x: f(&x), y: f(&y) },
            other => other,
        }
    }
}

fn concat<T: Clone>(a: &[T], b: &[T]) -> Vec<T> {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v
}

fn insert_all<T: Clone>(outer: &[T], at: usize, inner: &[T]) -> Result<Vec<T>, RuleError> {
    check_at(at, outer.len())?;
    Ok(splice(outer, at, 0, inner))
}

fn conclude(sr: SemiringId, rule: &NdRule, p: &[&Judgment]) -> Result<Judgment, RuleError> {
    use NdRule::*;
    Ok(match rule {
        IdG { x, ty } => Judgment::GS { gctx: vec![gentry(x, sr.one(), ty.clone())], term: gvar(x), ty: ty.clone() },
        UnitJI => Judgment::GS { gctx: vec![], term: GTerm::UnitJ, ty: GType::J },
        UnitJE { r, at } | UnitJEM { r, at } => {
            sr.check(r)?;
            let (gs, t1, j) = as_gs(p[0])?;
            if *j != GType::J {
                return shape(format!("scrutinee has type {j}, expected J"));
            }
            let scaled = scale(sr, r, gs)?;
            let g = insert_all(p[1].gctx(), *at, &scaled)?;
            let term = match p[1].term() {
                Term::G(t) => Term::G(GTerm::LetUnitJ(Box::new(t1.clone()), Box::new(t))),
                Term::L(l) => Term::L(LTerm::LetUnitJ(Box::new(t1.clone()), Box::new(l))),
            };
            with_term(&with_gctx(p[1], g), term)
        }
        TenI => {
            let (g1, t1, a) = as_gs(p[0])?;
            let (g2, t2, b) = as_gs(p[1])?;
            Judgment::GS {
                gctx: concat(g1, g2),
                term: GTerm::Pair(Box::new(t1.clone()), Box::new(t2.clone())),
                ty: GType::tensor(a.clone(), b.clone()),
            }
        }
        TenE { x, y } | TenEM { x, y } => {
            let (gs, t1, ty) = as_gs(p[0])?;
            let gc = p[1].gctx();
            let i = graded_pos(gc, x)?;
            if gc.get(i + 1).map(|e| e.name.as_str()) != Some(y.as_str()) {
                return shape(format!("`{y}` must directly follow `{x}`"));
            }
            if gc[i].grade != gc[i + 1].grade {
                return Err(RuleError::Grade(format!("`{x}` and `{y}` must share a grade")));
            }
            let expect = GType::tensor(gc[i].ty.clone(), gc[i + 1].ty.clone());
            if *ty != expect {
                return shape(format!("scrutinee has type {ty}, expected {expect}"));
            }
            let scaled = scale(sr, &gc[i].grade, gs)?;
            let g = splice(gc, i, 2, &scaled);
            let term = match p[1].term() {
                Term::G(t) => Term::G(GTerm::LetPair(x.clone(), y.clone(), Box::new(t1.clone()), Box::new(t))),
                Term::L(l) => Term::L(LTerm::LetPairG(x.clone(), y.clone(), Box::new(t1.clone()), Box::new(l))),
            };
            with_term(&with_gctx(p[1], g), term)
        }
        LinI => {
            let (g, l, t, a) = as_ms(p[0])?;
            if !l.is_empty() {
                return Err(RuleError::LinearNonEmpty);
            }
            Judgment::GS { gctx: g.clone(), term: GTerm::Lin(Box::new(t.clone())), ty: GType::lin(a.clone()) }
        }
        WeakG { x, ty, at } | WeakM { x, ty, at } => weaken(sr, p[0], x, ty, *at)?,
        ContG { x, y, z } | ContM { x, y, z } => contract(sr, p[0], x, y, z)?,
        ExG { k } | GExM { k } => exchange_graded(p[0], *k)?,
        ExM { k } => exchange_linear(p[0], *k)?,
        SubG { to } | GSub { to } => approximate(sr, p[0], to)?,
        IdM { x, ty } => Judgment::MS { gctx: vec![], lctx: vec![lentry(x, ty.clone())], term: lvar(x), ty: ty.clone() },
        UnitII => Judgment::MS { gctx: vec![], lctx: vec![], term: LTerm::UnitI, ty: LType::I },
        UnitIE { at } => {
            let (gs, ls, l1, a) = as_ms(p[0])?;
            if *a != LType::I {
                return shape(format!("scrutinee has type {a}, expected I"));
            }
            let (gc, lc, l2, b) = as_ms(p[1])?;
            Judgment::MS {
                gctx: concat(gs, gc),
                lctx: insert_all(lc, *at, ls)?,
                term: LTerm::LetUnitI(Box::new(l1.clone()), Box::new(l2.clone())),
                ty: b.clone(),
            }
        }
        TensorI => {
            let (g1, l1, t1, a) = as_ms(p[0])?;
            let (g2, l2, t2, b) = as_ms(p[1])?;
            Judgment::MS {
                gctx: concat(g1, g2),
                lctx: concat(l1, l2),
                term: LTerm::Pair(Box::new(t1.clone()), Box::new(t2.clone())),
                ty: LType::tensor(a.clone(), b.clone()),
            }
        }
        TensorE { x, y } => {
            let (gs, ls, l1, ty) = as_ms(p[0])?;
            let (gc, lc, l2, c) = as_ms(p[1])?;
            let i = linear_pos(lc, x)?;
            if lc.get(i + 1).map(|e| e.name.as_str()) != Some(y.as_str()) {
                return shape(format!("`{y}` must directly follow `{x}`"));
            }
            let expect = LType::tensor(lc[i].ty.clone(), lc[i + 1].ty.clone());
            if *ty != expect {
                return shape(format!("scrutinee has type {ty}, expected {expect}"));
            }
            Judgment::MS {
                gctx: concat(gs, gc),
                lctx: splice(lc, i, 2, ls),
                term: LTerm::LetPair(x.clone(), y.clone(), Box::new(l1.clone()), Box::new(l2.clone())),
                ty: c.clone(),
            }
        }
        LolliI { x } => {
            let (g, l, t, b) = as_ms(p[0])?;
            let i = linear_pos(l, x)?;
            let a = l[i].ty.clone();
            let mut l = l.clone();
            l.remove(i);
            Judgment::MS {
                gctx: g.clone(),
                lctx: l,
                term: LTerm::Lam(x.clone(), Some(a.clone()), Box::new(t.clone())),
                ty: LType::lolli(a, b.clone()),
            }
        }
        LolliE => {
            let (g1, l1, t1, f) = as_ms(p[0])?;
            let (g2, l2, t2, a) = as_ms(p[1])?;
            let b = match f {
                LType::Lolli(dom, cod) if **dom == *a => (**cod).clone(),
                _ => return shape(format!("cannot apply a function of type {f} to an argument of type {a}")),
            };
            Judgment::MS {
                gctx: concat(g1, g2),
                lctx: concat(l1, l2),
                term: LTerm::App(Box::new(t1.clone()), Box::new(t2.clone())),
                ty: b,
            }
        }
        GrdI { r } => {
            sr.check(r)?;
            let (g, t, x) = as_gs(p[0])?;
            Judgment::MS {
                gctx: scale(sr, r, g)?,
                lctx: vec![],
                term: LTerm::Grd(r.clone(), Box::new(t.clone())),
                ty: LType::grd(r.clone(), x.clone()),
            }
        }
        LinE => {
            let (g, t, x) = as_gs(p[0])?;
            let a = match x {
                GType::Lin(a) => (**a).clone(),
                _ => return shape(format!("expected a Lin type, found {x}")),
            };
            Judgment::MS { gctx: g.clone(), lctx: vec![], term: LTerm::Unlin(Box::new(t.clone())), ty: a }
        }
        GrdE { x, at } => {
            let (gs, ls, l1, ty) = as_ms(p[0])?;
            let (gc, lc, l2, b) = as_ms(p[1])?;
            let (r, inner) = match ty {
                LType::Grd(r, inner) => (r.clone(), (**inner).clone()),
                _ => return shape(format!("scrutinee has type {ty}, expected a Grd type")),
            };
            let i = graded_pos(gc, x)?;
            if gc[i].ty != inner {
                return shape(format!("`{x}` has type {}, expected {inner}", gc[i].ty));
            }
            if gc[i].grade != r {
                return Err(RuleError::Grade(format!("`{x}` is used at {} but bound at {r}", gc[i].grade)));
            }
            let mut rest = gc.clone();
            rest.remove(i);
            Judgment::MS {
                gctx: concat(gs, &rest),
                lctx: insert_all(lc, *at, ls)?,
                term: LTerm::LetGrd(r, x.clone(), Box::new(l1.clone()), Box::new(l2.clone())),
                ty: b.clone(),
            }
        }
    })
}

/// Checks an unchecked tree and returns its conclusion.
pub fn check_nd(sr: SemiringId, node: &NdNode) -> Result<Judgment, CheckError> {
    node.check(sr).map(|d| d.concl)
}
