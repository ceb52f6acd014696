//! Equations between sequent derivations of the same judgment.
//!
//! Each named rule rewrites the subtree at a position. The rewrite keeps the
//! conclusion and the proof term; only the shape of the tree changes. Rules
//! apply in their displayed direction, and where the right-hand shape is
//! recognisable (contr-sym, contr-assoc, sub-comm-conv) also in reverse.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cut_elim::{eliminate_cuts, CutError};
use crate::deriv::{path_string, CheckError, Deriv, Frag, Rule};
use crate::sc::{ScDeriv, ScRule};
use crate::semiring::{Grade, SemiringId};
use crate::syntax::*;

pub const EQ_RULES: [&str; 13] = [
    "contr-sym",
    "contr-unitL",
    "contr-unitR",
    "contr-assoc",
    "ex-ex",
    "sub-refl",
    "sub-trans",
    "contr-mono",
    "sub-unitL",
    "sub-tensorL",
    "mult-mono",
    "sub-comm-conv",
    "gex-gex",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EqError {
    #[error("unknown equation `{0}`")]
    UnknownRule(String),
    #[error("no subtree at position {0}")]
    NoSuchPosition(String),
    #[error("{rule} does not apply at {position}: {reason}")]
    Shape { rule: String, position: String, reason: String },
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Cut(#[from] CutError),
    #[error("the derivations conclude different judgments: {0} and {1}")]
    ConclusionMismatch(String, String),
    #[error("internal error: {0}")]
    Invariant(String),
}

/// Outcome of the equivalence check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    Unknown,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Equal => "equal",
            Verdict::Unknown => "unknown",
        }
    }
}

/// Normalizes both sides and compares terms. `Equal` is always sound;
/// `Unknown` says nothing.
pub fn equiv_oracle(sr: SemiringId, d1: &ScDeriv, d2: &ScDeriv) -> Result<Verdict, EqError> {
    if !d1.concl.same_sequent(&d2.concl) {
        return Err(EqError::ConclusionMismatch(d1.concl.to_string(), d2.concl.to_string()));
    }
    let n1 = eliminate_cuts(sr, d1)?.deriv;
    let n2 = eliminate_cuts(sr, d2)?.deriv;
    Ok(if alpha_eq(&n1.concl.term(), &n2.concl.term()) { Verdict::Equal } else { Verdict::Unknown })
}

/// Rewrites the subtree of `d` at `pos` with the named equation.
pub fn apply_eq_rule(sr: SemiringId, name: &str, d: &ScDeriv, pos: &[usize]) -> Result<ScDeriv, EqError> {
    if !EQ_RULES.contains(&name) {
        return Err(EqError::UnknownRule(name.to_string()));
    }
    let node = d.at(pos).ok_or_else(|| EqError::NoSuchPosition(path_string(pos)))?;
    let eq = Eq { sr, rule: name, position: path_string(pos) };
    let new = eq.rewrite(node)?;
    if !new.concl.alpha_eq(&node.concl) {
        return Err(EqError::Invariant(format!("{name} changed {} into {}", node.concl, new.concl)));
    }
    Ok(d.replace_at(sr, pos, new)?)
}

/// Whether `name` applies at the root of `d`.
pub fn applies(sr: SemiringId, name: &str, d: &ScDeriv) -> bool {
    Eq { sr, rule: name, position: "root".into() }.rewrite(d).is_ok()
}

struct Eq<'a> {
    sr: SemiringId,
    rule: &'a str,
    position: String,
}

fn mixed(d: &ScDeriv) -> bool {
    Frag::of(&d.concl) == Frag::Mixed
}

fn sub_rule(d: &ScDeriv, to: Vec<Grade>) -> ScRule {
    if mixed(d) {
        ScRule::SubMS { to }
    } else {
        ScRule::SubGS { to }
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

impl Eq<'_> {
    fn no<T>(&self, reason: impl Into<String>) -> Result<T, EqError> {
        Err(EqError::Shape { rule: self.rule.to_string(), position: self.position.clone(), reason: reason.into() })
    }

    fn mk(&self, rule: ScRule, kids: Vec<ScDeriv>) -> Result<ScDeriv, EqError> {
        Ok(Deriv::new(self.sr, rule, kids)?)
    }

    fn rewrite(&self, d: &ScDeriv) -> Result<ScDeriv, EqError> {
        match self.rule {
            "contr-sym" => self.contr_sym(d),
            "contr-unitL" => self.contr_unit(d, true),
            "contr-unitR" => self.contr_unit(d, false),
            "contr-assoc" => self.contr_assoc(d),
            "ex-ex" => self.ex_ex(d, false),
            "gex-gex" => self.ex_ex(d, true),
            "sub-refl" => self.sub_refl(d),
            "sub-trans" => self.sub_trans(d),
            "contr-mono" => self.contr_mono(d),
            "sub-unitL" => self.sub_unit(d),
            "sub-tensorL" => self.sub_tensor(d),
            "mult-mono" => self.mult_mono(d),
            "sub-comm-conv" => self.sub_comm(d),
            other => Err(EqError::UnknownRule(other.to_string())),
        }
    }

    fn cont_parts<'d>(&self, d: &'d ScDeriv) -> Result<(&'d Name, &'d Name, &'d Name, &'d ScDeriv), EqError> {
        match &d.rule {
            ScRule::ContGS { x, y, z } | ScRule::ContMS { x, y, z } => Ok((x, y, z, &d.children[0])),
            r => self.no(format!("expected a contraction, found `{}`", r.name())),
        }
    }

    fn sub_parts<'d>(&self, d: &'d ScDeriv) -> Result<(&'d Vec<Grade>, &'d ScDeriv), EqError> {
        match &d.rule {
            ScRule::SubGS { to } | ScRule::SubMS { to } => Ok((to, &d.children[0])),
            r => self.no(format!("expected a sub node, found `{}`", r.name())),
        }
    }

    // cont x y z P  <->  cont y x z (ex P)
    fn contr_sym(&self, d: &ScDeriv) -> Result<ScDeriv, EqError> {
        let (x, y, z, p) = self.cont_parts(d)?;
        if let ScRule::ExGS { k } | ScRule::GExMS { k } = &p.rule {
            let q = &p.children[0];
            let g = q.concl.gctx();
            if g.get(*k).map(|e| &e.name) == Some(y) && g.get(k + 1).map(|e| &e.name) == Some(x) {
                return self.mk(cont_rule(q, y.clone(), x.clone(), z.clone()), vec![q.clone()]);
            }
        }
        let i = p.concl.find_graded(x).expect("contracted hypothesis");
        let swapped = self.mk(gex_rule(p, i), vec![p.clone()])?;
        self.mk(cont_rule(p, y.clone(), x.clone(), z.clone()), vec![swapped])
    }

    // cont over a weakening of one of the two contracted hypotheses
    fn contr_unit(&self, d: &ScDeriv, left: bool) -> Result<ScDeriv, EqError> {
        let (x, y, z, p) = self.cont_parts(d)?;
        let (gone, kept) = if left { (x, y) } else { (y, x) };
        match &p.rule {
            ScRule::WeakGS { x: w, .. } | ScRule::WeakMS { x: w, .. } if w == gone => {
                let q = &p.children[0];
                Ok(rename_hyp(q, kept, z))
            }
            _ => self.no(format!("`{gone}` is not weakened directly above the contraction")),
        }
    }

    // cont u x3 z (cont x1 x2 u P)  <->  cont x1 v z (cont x2 x3 v P)
    fn contr_assoc(&self, d: &ScDeriv) -> Result<ScDeriv, EqError> {
        let (a, b, z, p) = self.cont_parts(d)?;
        let (c, e, f, q) = self.cont_parts(p)?;
        let mut supply = NameSupply::avoiding(d.every_name());
        if f == a {
            // left-nested: (x1 + x2) + x3
            let (x1, x2, x3) = (c, e, b);
            let v = supply.fresh("v");
            let inner = self.mk(cont_rule(q, x2.clone(), x3.clone(), v.clone()), vec![q.clone()])?;
            return self.mk(cont_rule(&inner, x1.clone(), v, z.clone()), vec![inner]);
        }
        if f == b {
            // right-nested: x1 + (x2 + x3)
            let (x1, x2, x3) = (a, c, e);
            let u = supply.fresh("u");
            let inner = self.mk(cont_rule(q, x1.clone(), x2.clone(), u.clone()), vec![q.clone()])?;
            return self.mk(cont_rule(&inner, u, x3.clone(), z.clone()), vec![inner]);
        }
        self.no("the inner contraction does not produce one of the outer hypotheses")
    }

    fn ex_ex(&self, d: &ScDeriv, graded_in_ms: bool) -> Result<ScDeriv, EqError> {
        use ScRule::*;
        let same = |a: &ScRule, b: &ScRule| match (a, b) {
            (ExGS { k }, ExGS { k: j }) | (ExMS { k }, ExMS { k: j }) | (GExMS { k }, GExMS { k: j }) => k == j,
            _ => false,
        };
        let right_kind = match &d.rule {
            GExMS { .. } => graded_in_ms,
            ExGS { .. } | ExMS { .. } => !graded_in_ms,
            _ => false,
        };
        if !right_kind || d.children.is_empty() || !same(&d.rule, &d.children[0].rule) {
            return self.no("expected the same exchange twice");
        }
        Ok(d.children[0].children[0].clone())
    }

    fn sub_refl(&self, d: &ScDeriv) -> Result<ScDeriv, EqError> {
        let (to, p) = self.sub_parts(d)?;
        if &p.concl.grades() != to {
            return self.no("the sub node changes a grade");
        }
        Ok(p.clone())
    }

    fn sub_trans(&self, d: &ScDeriv) -> Result<ScDeriv, EqError> {
        let (to, p) = self.sub_parts(d)?;
        let (_, q) = self.sub_parts(p)?;
        self.mk(sub_rule(q, to.clone()), vec![q.clone()])
    }

    // cont (sub (sub P)) -> sub (cont P), where the subs raise the contracted pair
    fn contr_mono(&self, d: &ScDeriv) -> Result<ScDeriv, EqError> {
        let (x, y, z, p) = self.cont_parts(d)?;
        let (_, mut q) = self.sub_parts(p)?;
        if let ScRule::SubGS { .. } | ScRule::SubMS { .. } = &q.rule {
            q = &q.children[0];
        }
        let c = self.mk(cont_rule(q, x.clone(), y.clone(), z.clone()), vec![q.clone()])?;
        self.mk(sub_rule(&c, d.concl.grades()), vec![c])
    }

    // sub over unitJ_L raising only the unit hypothesis
    fn sub_unit(&self, d: &ScDeriv) -> Result<ScDeriv, EqError> {
        let (to, p) = self.sub_parts(d)?;
        let (x, at) = match &p.rule {
            ScRule::UnitJL { x, at, .. } | ScRule::UnitJLMS { x, at, .. } => (x, *at),
            r => return self.no(format!("expected unitJ_L under the sub node, found `{}`", r.name())),
        };
        only_changes(&p.concl.grades(), to, at).or_else(|m| self.no(m))?;
        let q = &p.children[0];
        let rule = if mixed(q) {
            ScRule::UnitJLMS { x: x.clone(), r: to[at].clone(), at }
        } else {
            ScRule::UnitJL { x: x.clone(), r: to[at].clone(), at }
        };
        self.mk(rule, vec![q.clone()])
    }

    // sub over ><L raising only the pair -> ><L over two subs
    fn sub_tensor(&self, d: &ScDeriv) -> Result<ScDeriv, EqError> {
        let (to, p) = self.sub_parts(d)?;
        let (x, y, z) = match &p.rule {
            ScRule::TenL { x, y, z } | ScRule::TenLMS { x, y, z } => (x, y, z),
            r => return self.no(format!("expected ><L under the sub node, found `{}`", r.name())),
        };
        let at = p.concl.find_graded(z).expect("pair hypothesis");
        only_changes(&p.concl.grades(), to, at).or_else(|m| self.no(m))?;
        let q = &p.children[0];
        let i = q.concl.find_graded(x).expect("pair component");
        let s = to[at].clone();
        let mut g1 = q.concl.grades();
        g1[i] = s.clone();
        let q1 = self.mk(sub_rule(q, g1.clone()), vec![q.clone()])?;
        g1[i + 1] = s;
        let q2 = self.mk(sub_rule(&q1, g1), vec![q1])?;
        let rule = if mixed(&q2) {
            ScRule::TenLMS { x: x.clone(), y: y.clone(), z: z.clone() }
        } else {
            ScRule::TenL { x: x.clone(), y: y.clone(), z: z.clone() }
        };
        self.mk(rule, vec![q2])
    }

    // cut (sub A) (sub B) -> sub (cut A B)
    fn mult_mono(&self, d: &ScDeriv) -> Result<ScDeriv, EqError> {
        if !matches!(d.rule, ScRule::CutGS { .. } | ScRule::GCutMS { .. }) {
            return self.no(format!("expected a graded cut, found `{}`", d.rule.name()));
        }
        let strip = |c: &ScDeriv| match &c.rule {
            ScRule::SubGS { .. } | ScRule::SubMS { .. } => (c.children[0].clone(), true),
            _ => (c.clone(), false),
        };
        let (a, sa) = strip(&d.children[0]);
        let (b, sb) = strip(&d.children[1]);
        if !sa && !sb {
            return self.no("neither premise of the cut ends in a sub node");
        }
        let c = self.mk(d.rule.clone(), vec![a, b])?;
        self.mk(sub_rule(&c, d.concl.grades()), vec![c])
    }

    // sub (R P) <-> R (sub P) for a unary rule R that passes grades through
    fn sub_comm(&self, d: &ScDeriv) -> Result<ScDeriv, EqError> {
        if let Ok((to, p)) = self.sub_parts(d) {
            if !passes_grades(&p.rule) {
                return self.no(format!("`{}` does not pass grades through", p.rule.name()));
            }
            let q = &p.children[0];
            let target: BTreeMap<&str, &Grade> =
                p.concl.gctx().iter().zip(to).map(|(e, g)| (e.name.as_str(), g)).collect();
            let raised: Vec<Grade> = q
                .concl
                .gctx()
                .iter()
                .map(|e| match p.concl.gctx().iter().find(|c| c.name == e.name) {
                    Some(c) if c.grade == e.grade => target[e.name.as_str()].clone(),
                    _ => e.grade.clone(),
                })
                .collect();
            let q2 = self.mk(sub_rule(q, raised), vec![q.clone()])?;
            let out = self.mk(p.rule.clone(), vec![q2])?;
            if out.concl.grades() != *to {
                return self.no("the sub node raises a grade introduced by the rule above it");
            }
            return Ok(out);
        }
        if d.children.len() == 1 && passes_grades(&d.rule) {
            let (_, q) = self.sub_parts(&d.children[0])?;
            let inner = self.mk(d.rule.clone(), vec![q.clone()])?;
            return self.mk(sub_rule(&inner, d.concl.grades()), vec![inner]);
        }
        self.no("expected a sub node next to a rule that passes grades through")
    }
}

/// Unary rules whose premise hypotheses reach the conclusion with the same
/// grade (or not at all).
fn passes_grades(r: &ScRule) -> bool {
    use ScRule::*;
    matches!(
        r,
        UnitJL { .. }
            | TenL { .. }
            | LinR
            | WeakGS { .. }
            | ContGS { .. }
            | ExGS { .. }
            | UnitIL { .. }
            | LolliR { .. }
            | TensorL { .. }
            | UnitJLMS { .. }
            | TenLMS { .. }
            | LinL { .. }
            | GrdL { .. }
            | WeakMS { .. }
            | ContMS { .. }
            | ExMS { .. }
            | GExMS { .. }
    )
}

fn only_changes(from: &[Grade], to: &[Grade], at: usize) -> Result<(), String> {
    if from.len() != to.len() {
        return Err("grade vectors differ in length".into());
    }
    for (i, (a, b)) in from.iter().zip(to).enumerate() {
        if i != at && a != b {
            return Err(format!("the sub node also changes position {i}"));
        }
    }
    Ok(())
}

/// Renames hypothesis `from` of `d` to `to`, moving any inner use of `to`
/// out of the way first.
fn rename_hyp(d: &ScDeriv, from: &str, to: &str) -> ScDeriv {
    let mut supply = NameSupply::avoiding(d.every_name().into_iter().chain([to.to_string()]));
    let clash = supply.fresh(to);
    let (from, to) = (from.to_string(), to.to_string());
    d.map_names(&|s| {
        if s == from {
            to.clone()
        } else if s == to {
            clash.clone()
        } else {
            s.to_string()
        }
    })
}
