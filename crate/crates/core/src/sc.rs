//! Sequent-calculus rules for the graded (GS) and mixed (MS) systems.

use crate::deriv::*;
use crate::semiring::{Grade, GradeVec, SemiringId};
use crate::syntax::*;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ScRule {
    IdGS { x: Name, ty: GType },
    UnitJR,
    UnitJL { x: Name, r: Grade, at: usize },
    TenR,
    TenL { x: Name, y: Name, z: Name },
    LinR,
    CutGS { x: Name },
    WeakGS { x: Name, ty: GType, at: usize },
    ContGS { x: Name, y: Name, z: Name },
    ExGS { k: usize },
    SubGS { to: GradeVec },
    IdMS { x: Name, ty: LType },
    UnitIR,
    UnitIL { x: Name, at: usize },
    LolliR { x: Name },
    LolliL { x: Name, z: Name },
    TensorR,
    TensorL { x: Name, y: Name, z: Name },
    UnitJLMS { x: Name, r: Grade, at: usize },
    TenLMS { x: Name, y: Name, z: Name },
    GrdR { r: Grade },
    LinL { x: Name, z: Name, at: usize },
    GrdL { x: Name, z: Name, at: usize },
    CutMS { x: Name },
    GCutMS { x: Name },
    WeakMS { x: Name, ty: GType, at: usize },
    ContMS { x: Name, y: Name, z: Name },
    ExMS { k: usize },
    GExMS { k: usize },
    SubMS { to: GradeVec },
    MCut { at: usize, n: usize },
    GMCut { at: usize, n: usize },
}

pub type ScDeriv = Deriv<ScRule>;
pub type ScNode = Node<ScRule>;

use Frag::{Graded as G, Mixed as M};
use ParamKind as K;

// (canonical name, aliases, conclusion fragment, params)
type Entry = (&'static str, &'static [&'static str], Frag, &'static [ParamKind]);

const TABLE: &[Entry] = &[
    ("id_GS", &[], G, &[K::Name, K::GType]),
    ("unitJ_R", &[], G, &[]),
    ("unitJ_L", &[], G, &[K::Name, K::Grade, K::Index]),
    ("><R", &["⊠R"], G, &[]),
    ("><L", &["⊠L"], G, &[K::Name, K::Name, K::Name]),
    ("Lin_R", &[], G, &[]),
    ("cut_GS", &[], G, &[K::Name]),
    ("weak_GS", &[], G, &[K::Name, K::GType, K::Index]),
    ("cont_GS", &[], G, &[K::Name, K::Name, K::Name]),
    ("ex_GS", &[], G, &[K::Index]),
    ("sub_GS", &[], G, &[K::Grades]),
    ("id_MS", &[], M, &[K::Name, K::LType]),
    ("unitI_R", &[], M, &[]),
    ("unitI_L", &[], M, &[K::Name, K::Index]),
    ("-oR", &["⊸R"], M, &[K::Name]),
    ("-oL", &["⊸L"], M, &[K::Name, K::Name]),
    ("*R", &["⊗R"], M, &[]),
    ("*L", &["⊗L"], M, &[K::Name, K::Name, K::Name]),
    ("unitJ_L-MS", &[], M, &[K::Name, K::Grade, K::Index]),
    ("><L-MS", &["⊠L-MS"], M, &[K::Name, K::Name, K::Name]),
    ("Grd_R", &[], M, &[K::Grade]),
    ("Lin_L", &[], M, &[K::Name, K::Name, K::Index]),
    ("Grd_L", &[], M, &[K::Name, K::Name, K::Index]),
    ("cut_MS", &[], M, &[K::Name]),
    ("gcut_MS", &[], M, &[K::Name]),
    ("weak_MS", &[], M, &[K::Name, K::GType, K::Index]),
    ("cont_MS", &[], M, &[K::Name, K::Name, K::Name]),
    ("ex_MS", &[], M, &[K::Index]),
    ("gex_MS", &[], M, &[K::Index]),
    ("sub_MS", &[], M, &[K::Grades]),
    ("mcut", &[], G, &[K::Index, K::Index]),
    ("gmcut", &[], M, &[K::Index, K::Index]),
];

pub fn rule_names() -> impl Iterator<Item = &'static str> {
    TABLE.iter().map(|e| e.0)
}

fn lookup(name: &str) -> Option<&'static Entry> {
    TABLE.iter().find(|e| e.0 == name || e.1.contains(&name))
}

fn name_p(p: &Param) -> Result<Name, String> {
    match p {
        Param::Name(n) => Ok(n.clone()),
        _ => Err("expected a name".into()),
    }
}

fn idx_p(p: &Param) -> Result<usize, String> {
    match p {
        Param::Index(n) => Ok(*n),
        _ => Err("expected an index".into()),
    }
}

fn grade_p(p: &Param) -> Result<Grade, String> {
    match p {
        Param::Grade(g) => Ok(g.clone()),
        _ => Err("expected a grade".into()),
    }
}

fn gtype_p(p: &Param) -> Result<GType, String> {
    match p {
        Param::GType(t) => Ok(t.clone()),
        _ => Err("expected a graded type".into()),
    }
}

fn grades_p(p: &Param) -> Result<GradeVec, String> {
    match p {
        Param::Grades(g) => Ok(g.clone()),
        _ => Err("expected a grade vector".into()),
    }
}

impl Rule for ScRule {
    fn name(&self) -> &'static str {
        use ScRule::*;
        match self {
            IdGS { .. } => "id_GS",
            UnitJR => "unitJ_R",
            UnitJL { .. } => "unitJ_L",
            TenR => "><R",
            TenL { .. } => "><L",
            LinR => "Lin_R",
            CutGS { .. } => "cut_GS",
            WeakGS { .. } => "weak_GS",
            ContGS { .. } => "cont_GS",
            ExGS { .. } => "ex_GS",
            SubGS { .. } => "sub_GS",
            IdMS { .. } => "id_MS",
            UnitIR => "unitI_R",
            UnitIL { .. } => "unitI_L",
            LolliR { .. } => "-oR",
            LolliL { .. } => "-oL",
            TensorR => "*R",
            TensorL { .. } => "*L",
            UnitJLMS { .. } => "unitJ_L-MS",
            TenLMS { .. } => "><L-MS",
            GrdR { .. } => "Grd_R",
            LinL { .. } => "Lin_L",
            GrdL { .. } => "Grd_L",
            CutMS { .. } => "cut_MS",
            GCutMS { .. } => "gcut_MS",
            WeakMS { .. } => "weak_MS",
            ContMS { .. } => "cont_MS",
            ExMS { .. } => "ex_MS",
            GExMS { .. } => "gex_MS",
            SubMS { .. } => "sub_MS",
            MCut { .. } => "mcut",
            GMCut { .. } => "gmcut",
        }
    }

    fn frag(&self) -> Frag {
        lookup(self.name()).map(|e| e.2).unwrap_or(G)
    }

    fn child_frags(&self) -> Vec<Frag> {
        use ScRule::*;
        match self {
            IdGS { .. } | UnitJR | IdMS { .. } | UnitIR => vec![],
            TenR => vec![G, G],
            LinR => vec![M],
            CutGS { .. } | MCut { .. } => vec![G, G],
            UnitJL { .. } | TenL { .. } | WeakGS { .. } | ContGS { .. } | ExGS { .. } | SubGS { .. } => vec![G],
            GrdR { .. } => vec![G],
            LolliL { .. } | TensorR | CutMS { .. } => vec![M, M],
            GCutMS { .. } | GMCut { .. } => vec![G, M],
            _ => vec![M],
        }
    }

    fn params(&self) -> Vec<Param> {
        use ScRule::*;
        let n = |s: &Name| Param::Name(s.clone());
        match self {
            IdGS { x, ty } | WeakGS { x, ty, .. } | WeakMS { x, ty, .. } => {
                let mut v = vec![n(x), Param::GType(ty.clone())];
                if let WeakGS { at, .. } | WeakMS { at, .. } = self {
                    v.push(Param::Index(*at));
                }
                v
            }
            IdMS { x, ty } => vec![n(x), Param::LType(ty.clone())],
            UnitJR | TenR | LinR | UnitIR | TensorR => vec![],
            UnitJL { x, r, at } | UnitJLMS { x, r, at } => vec![n(x), Param::Grade(r.clone()), Param::Index(*at)],
            TenL { x, y, z } | ContGS { x, y, z } | TensorL { x, y, z } | TenLMS { x, y, z } | ContMS { x, y, z } => {
                vec![n(x), n(y), n(z)]
            }
            CutGS { x } | LolliR { x } | CutMS { x } | GCutMS { x } => vec![n(x)],
            ExGS { k } | ExMS { k } | GExMS { k } => vec![Param::Index(*k)],
            SubGS { to } | SubMS { to } => vec![Param::Grades(to.clone())],
            UnitIL { x, at } => vec![n(x), Param::Index(*at)],
            LolliL { x, z } => vec![n(x), n(z)],
            GrdR { r } => vec![Param::Grade(r.clone())],
            LinL { x, z, at } | GrdL { x, z, at } => vec![n(x), n(z), Param::Index(*at)],
            MCut { at, n } | GMCut { at, n } => vec![Param::Index(*at), Param::Index(*n)],
        }
    }

    fn schema(name: &str, _frag: Frag) -> Option<(&'static str, &'static [ParamKind])> {
        lookup(name).map(|e| (e.0, e.3))
    }

    fn from_params(name: &str, _frag: Frag, p: Vec<Param>) -> Result<ScRule, String> {
        use ScRule::*;
        let e = lookup(name).ok_or_else(|| format!("unknown rule `{name}`"))?;
        if p.len() != e.3.len() {
            return Err(format!("rule `{}` takes {} parameters, found {}", e.0, e.3.len(), p.len()));
        }
        Ok(match e.0 {
            "id_GS" => IdGS { x: name_p(&p[0])?, ty: gtype_p(&p[1])? },
            "unitJ_R" => UnitJR,
            "unitJ_L" => UnitJL { x: name_p(&p[0])?, r: grade_p(&p[1])?, at: idx_p(&p[2])? },
            "><R" => TenR,
            "><L" => TenL { x: name_p(&p[0])?, y: name_p(&p[1])?, z: name_p(&p[2])? },
            "Lin_R" => LinR,
            "cut_GS" => CutGS { x: name_p(&p[0])? },
            "weak_GS" => WeakGS { x: name_p(&p[0])?, ty: gtype_p(&p[1])?, at: idx_p(&p[2])? },
            "cont_GS" => ContGS { x: name_p(&p[0])?, y: name_p(&p[1])?, z: name_p(&p[2])? },
            "ex_GS" => ExGS { k: idx_p(&p[0])? },
            "sub_GS" => SubGS { to: grades_p(&p[0])? },
            "id_MS" => match &p[1] {
                Param::LType(t) => IdMS { x: name_p(&p[0])?, ty: t.clone() },
                _ => return Err("expected a linear type".into()),
            },
            "unitI_R" => UnitIR,
            "unitI_L" => UnitIL { x: name_p(&p[0])?, at: idx_p(&p[1])? },
            "-oR" => LolliR { x: name_p(&p[0])? },
            "-oL" => LolliL { x: name_p(&p[0])?, z: name_p(&p[1])? },
            "*R" => TensorR,
            "*L" => TensorL { x: name_p(&p[0])?, y: name_p(&p[1])?, z: name_p(&p[2])? },
            "unitJ_L-MS" => UnitJLMS { x: name_p(&p[0])?, r: grade_p(&p[1])?, at: idx_p(&p[2])? },
            "><L-MS" => TenLMS { x: name_p(&p[0])?, y: name_p(&p[1])?, z: name_p(&p[2])? },
            "Grd_R" => GrdR { r: grade_p(&p[0])? },
            "Lin_L" => LinL { x: name_p(&p[0])?, z: name_p(&p[1])?, at: idx_p(&p[2])? },
            "Grd_L" => GrdL { x: name_p(&p[0])?, z: name_p(&p[1])?, at: idx_p(&p[2])? },
            "cut_MS" => CutMS { x: name_p(&p[0])? },
            "gcut_MS" => GCutMS { x: name_p(&p[0])? },
            "weak_MS" => WeakMS { x: name_p(&p[0])?, ty: gtype_p(&p[1])?, at: idx_p(&p[2])? },
            "cont_MS" => ContMS { x: name_p(&p[0])?, y: name_p(&p[1])?, z: name_p(&p[2])? },
            "ex_MS" => ExMS { k: idx_p(&p[0])? },
            "gex_MS" => GExMS { k: idx_p(&p[0])? },
            "sub_MS" => SubMS { to: grades_p(&p[0])? },
            "mcut" => MCut { at: idx_p(&p[0])?, n: idx_p(&p[1])? },
            "gmcut" => GMCut { at: idx_p(&p[0])?, n: idx_p(&p[1])? },
            other => return Err(format!("unknown rule `{other}`")),
        })
    }

    fn conclude(&self, sr: SemiringId, prem: &[&Judgment]) -> Result<Judgment, RuleError> {
        conclude(sr, self, prem)
    }

    fn map_names(&self, f: &dyn Fn(&str) -> Name) -> ScRule {
        use ScRule::*;
        match self.clone() {
            IdGS { x, ty } => IdGS { x: f(&x), ty },
            UnitJL { x, r, at } => UnitJL { x: f(&x), r, at },
            TenL { x, y, z } => TenL { x: f(&x), y: f(&y), z: f(&z) },
            CutGS { x } => CutGS { x: f(&x) },
            WeakGS { x, ty, at } => WeakGS { x: f(&x), ty, at },
            ContGS { x, y, z } => ContGS { x: f(&x), y: f(&y), z: f(&z) },
            IdMS { x, ty } => IdMS { x: f(&x), ty },
            UnitIL { x, at } => UnitIL { x: f(&x), at },
            LolliR { x } => LolliR { x: f(&x) },
            LolliL { x, z } => LolliL { x: f(&x), z: f(&z) },
            TensorL { x, y, z } => TensorL { x: f(&x), y: f(&y), z: f(&z) },
            UnitJLMS { x, r, at } => UnitJLMS { x: f(&x), r, at },
            TenLMS { x, y, z } => TenLMS { x: f(&x), y: f(&y), z: f(&z) },
            LinL { x, z, at } => LinL { x: f(&x), z: f(&z), at },
            GrdL { x, z, at } => GrdL { x: f(&x), z: f(&z), at },
            CutMS { x } => CutMS { x: f(&x) },
            GCutMS { x } => GCutMS { x: f(&x) },
            WeakMS { x, ty, at } => WeakMS { x: f(&x), ty, at },
            ContMS { x, y, z } => ContMS { x: f(&x), y: f(&y), z: f(&z) },
            other => other,
        }
    }

    fn is_cut(&self) -> bool {
        matches!(
            self,
            ScRule::CutGS { .. } | ScRule::CutMS { .. } | ScRule::GCutMS { .. } | ScRule::MCut { .. } | ScRule::GMCut { .. }
        )
    }
}

fn gs(gctx: GradedCtx, term: GTerm, ty: GType) -> Judgment {
    Judgment::GS { gctx, term, ty }
}

fn ms(gctx: GradedCtx, lctx: LinearCtx, term: LTerm, ty: LType) -> Judgment {
    Judgment::MS { gctx, lctx, term, ty }
}

fn concat<T: Clone>(a: &[T], b: &[T]) -> Vec<T> {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v
}

/// Adjacent pair `x`, `y` in a graded context with equal grades.
fn graded_pair(g: &GradedCtx, x: &str, y: &str) -> Result<usize, RuleError> {
    let i = graded_pos(g, x)?;
    if g.get(i + 1).map(|e| e.name.as_str()) != Some(y) {
        return shape(format!("`{y}` must directly follow `{x}`"));
    }
    if g[i].grade != g[i + 1].grade {
        return Err(RuleError::Grade(format!("`{x}` and `{y}` must share a grade")));
    }
    Ok(i)
}

fn linear_pair(l: &LinearCtx, x: &str, y: &str) -> Result<usize, RuleError> {
    let i = linear_pos(l, x)?;
    if l.get(i + 1).map(|e| e.name.as_str()) != Some(y) {
        return shape(format!("`{y}` must directly follow `{x}`"));
    }
    Ok(i)
}

/// The block of `n` cut hypotheses at `at`, which must all have type `ty`.
fn cut_block(g: &GradedCtx, at: usize, n: usize, ty: &GType) -> Result<Vec<Name>, RuleError> {
    if at + n > g.len() {
        return shape(format!("multicut block {at}+{n} exceeds context length {}", g.len()));
    }
    for e in &g[at..at + n] {
        if &e.ty != ty {
            return shape(format!("`{}` does not have the cut type {ty}", e.name));
        }
    }
    Ok(g[at..at + n].iter().map(|e| e.name.clone()).collect())
}

fn conclude(sr: SemiringId, rule: &ScRule, p: &[&Judgment]) -> Result<Judgment, RuleError> {
    use ScRule::*;
    Ok(match rule {
        IdGS { x, ty } => gs(vec![gentry(x, sr.one(), ty.clone())], gvar(x), ty.clone()),
        UnitJR => gs(vec![], GTerm::UnitJ, GType::J),
        UnitJL { x, r, at } | UnitJLMS { x, r, at } => {
            sr.check(r)?;
            let mut g = p[0].gctx().clone();
            check_at(*at, g.len())?;
            g.insert(*at, gentry(x, r.clone(), GType::J));
            let j = with_gctx(p[0], g);
            let t = match p[0].term() {
                Term::G(t) => Term::G(GTerm::LetUnitJ(Box::new(gvar(x)), Box::new(t))),
                Term::L(l) => Term::L(LTerm::LetUnitJ(Box::new(gvar(x)), Box::new(l))),
            };
            with_term(&j, t)
        }
        TenR => {
            let (g1, t1, a) = as_gs(p[0])?;
            let (g2, t2, b) = as_gs(p[1])?;
            gs(concat(g1, g2), GTerm::Pair(Box::new(t1.clone()), Box::new(t2.clone())), GType::tensor(a.clone(), b.clone()))
        }
        TenL { x, y, z } | TenLMS { x, y, z } => {
            let g = p[0].gctx();
            let i = graded_pair(g, x, y)?;
            let ty = GType::tensor(g[i].ty.clone(), g[i + 1].ty.clone());
            let out = splice(g, i, 2, &[gentry(z, g[i].grade.clone(), ty)]);
            let j = with_gctx(p[0], out);
            let t = match p[0].term() {
                Term::G(t) => Term::G(GTerm::LetPair(x.clone(), y.clone(), Box::new(gvar(z)), Box::new(t))),
                Term::L(l) => Term::L(LTerm::LetPairG(x.clone(), y.clone(), Box::new(gvar(z)), Box::new(l))),
            };
            with_term(&j, t)
        }
        LinR => {
            let (g, l, t, a) = as_ms(p[0])?;
            if !l.is_empty() {
                return Err(RuleError::LinearNonEmpty);
            }
            gs(g.clone(), GTerm::Lin(Box::new(t.clone())), GType::lin(a.clone()))
        }
        CutGS { x } | GCutMS { x } => {
            let (g2, t1, ty) = as_gs(p[0])?;
            let i = graded_pos(p[1].gctx(), x)?;
            if &p[1].gctx()[i].ty != ty {
                return shape(format!("cut hypothesis `{x}` does not have type {ty}"));
            }
            let g = multicut_ctx(sr, p[1].gctx(), i, 1, g2)?;
            let term = subst(&p[1].term(), x, &Term::G(t1.clone()));
            with_term(&with_gctx(p[1], g), term)
        }
        MCut { at, n } | GMCut { at, n } => {
            let (g2, t1, ty) = as_gs(p[0])?;
            let names = cut_block(p[1].gctx(), *at, *n, ty)?;
            let g = multicut_ctx(sr, p[1].gctx(), *at, *n, g2)?;
            let term = multi_subst(&p[1].term(), &names, &Term::G(t1.clone()));
            with_term(&with_gctx(p[1], g), term)
        }
        WeakGS { x, ty, at } | WeakMS { x, ty, at } => weaken(sr, p[0], x, ty, *at)?,
        ContGS { x, y, z } | ContMS { x, y, z } => contract(sr, p[0], x, y, z)?,
        ExGS { k } | GExMS { k } => exchange_graded(p[0], *k)?,
        ExMS { k } => exchange_linear(p[0], *k)?,
        SubGS { to } | SubMS { to } => approximate(sr, p[0], to)?,
        IdMS { x, ty } => ms(vec![], vec![lentry(x, ty.clone())], lvar(x), ty.clone()),
        UnitIR => ms(vec![], vec![], LTerm::UnitI, LType::I),
        UnitIL { x, at } => {
            let (g, l, t, a) = as_ms(p[0])?;
            check_at(*at, l.len())?;
            let mut l = l.clone();
            l.insert(*at, lentry(x, LType::I));
            ms(g.clone(), l, LTerm::LetUnitI(Box::new(lvar(x)), Box::new(t.clone())), a.clone())
        }
        LolliR { x } => {
            let (g, l, t, b) = as_ms(p[0])?;
            let i = linear_pos(l, x)?;
            let a = l[i].ty.clone();
            let mut l = l.clone();
            l.remove(i);
            ms(g.clone(), l, LTerm::Lam(x.clone(), Some(a.clone()), Box::new(t.clone())), LType::lolli(a, b.clone()))
        }
        LolliL { x, z } => {
            let (g1, l1, t1, a) = as_ms(p[0])?;
            let (g2, l2, t2, c) = as_ms(p[1])?;
            let i = linear_pos(l2, x)?;
            let b = l2[i].ty.clone();
            let mut inner = vec![lentry(z, LType::lolli(a.clone(), b))];
            inner.extend_from_slice(l1);
            let l = splice(l2, i, 1, &inner);
            let app = LTerm::App(Box::new(lvar(z)), Box::new(t1.clone()));
            let term = Subst::single(x, Term::L(app)).apply_l(t2);
            ms(concat(g1, g2), l, term, c.clone())
        }
        TensorR => {
            let (g1, l1, t1, a) = as_ms(p[0])?;
            let (g2, l2, t2, b) = as_ms(p[1])?;
            ms(
                concat(g1, g2),
                concat(l1, l2),
                LTerm::Pair(Box::new(t1.clone()), Box::new(t2.clone())),
                LType::tensor(a.clone(), b.clone()),
            )
        }
        TensorL { x, y, z } => {
            let (g, l, t, c) = as_ms(p[0])?;
            let i = linear_pair(l, x, y)?;
            let ty = LType::tensor(l[i].ty.clone(), l[i + 1].ty.clone());
            let l = splice(l, i, 2, &[lentry(z, ty)]);
            ms(g.clone(), l, LTerm::LetPair(x.clone(), y.clone(), Box::new(lvar(z)), Box::new(t.clone())), c.clone())
        }
        GrdR { r } => {
            sr.check(r)?;
            let (g, t, x) = as_gs(p[0])?;
            ms(scale(sr, r, g)?, vec![], LTerm::Grd(r.clone(), Box::new(t.clone())), LType::grd(r.clone(), x.clone()))
        }
        LinL { x, z, at } => {
            let (g, l, t, b) = as_ms(p[0])?;
            let i = linear_pos(l, x)?;
            let a = l[i].ty.clone();
            let mut l = l.clone();
            l.remove(i);
            check_at(*at, g.len())?;
            let mut g = g.clone();
            g.insert(*at, gentry(z, sr.one(), GType::lin(a)));
            let term = Subst::single(x, Term::L(LTerm::Unlin(Box::new(gvar(z))))).apply_l(t);
            ms(g, l, term, b.clone())
        }
        GrdL { x, z, at } => {
            let (g, l, t, b) = as_ms(p[0])?;
            let i = graded_pos(g, x)?;
            let r = g[i].grade.clone();
            let ty = LType::grd(r.clone(), g[i].ty.clone());
            let mut g = g.clone();
            g.remove(i);
            check_at(*at, l.len())?;
            let mut l = l.clone();
            l.insert(*at, lentry(z, ty));
            ms(g, l, LTerm::LetGrd(r, x.clone(), Box::new(lvar(z)), Box::new(t.clone())), b.clone())
        }
        CutMS { x } => {
            let (g2, l2, t1, a) = as_ms(p[0])?;
            let (g1, l1, t2, b) = as_ms(p[1])?;
            let i = linear_pos(l1, x)?;
            if &l1[i].ty != a {
                return shape(format!("cut hypothesis `{x}` does not have type {a}"));
            }
            let term = Subst::single(x, Term::L(t1.clone())).apply_l(t2);
            ms(concat(g2, g1), splice(l1, i, 1, l2), term, b.clone())
        }
    })
}

/// Convenience constructors that check as they build.
pub mod build {
    use super::*;
    use crate::deriv::CheckError;

    pub type R = Result<ScDeriv, CheckError>;

    pub fn id_gs(sr: SemiringId, x: &str, ty: GType) -> R {
        Deriv::leaf(sr, ScRule::IdGS { x: x.into(), ty })
    }
    pub fn id_ms(sr: SemiringId, x: &str, ty: LType) -> R {
        Deriv::leaf(sr, ScRule::IdMS { x: x.into(), ty })
    }
    pub fn unary(sr: SemiringId, rule: ScRule, d: ScDeriv) -> R {
        Deriv::unary(sr, rule, d)
    }
    pub fn binary(sr: SemiringId, rule: ScRule, a: ScDeriv, b: ScDeriv) -> R {
        Deriv::binary(sr, rule, a, b)
    }
}

/// Checks an unchecked tree and returns its conclusion.
pub fn check_sc(sr: SemiringId, node: &ScNode) -> Result<Judgment, CheckError> {
    node.check(sr).map(|d| d.concl)
}
