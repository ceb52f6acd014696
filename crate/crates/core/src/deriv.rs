//! Rule-labelled derivation trees shared by both calculi, plus the context
//! operations their rules are built from.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::semiring::{Grade, GradeVec, SemiringError, SemiringId};
use crate::syntax::*;

/// Which fragment a judgment lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Frag {
    Graded,
    Mixed,
}

impl Frag {
    pub fn of(j: &Judgment) -> Frag {
        if j.is_gs() {
            Frag::Graded
        } else {
            Frag::Mixed
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("{0}")]
    Shape(String),
    #[error("grade mismatch: {0}")]
    Grade(String),
    #[error("context name clash on `{0}`")]
    NameClash(String),
    #[error("linear context must be empty")]
    LinearNonEmpty,
    #[error("expected {expected} premises, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("annotated conclusion `{annotated}` differs from computed `{computed}`")]
    Conclude { annotated: String, computed: String },
    #[error(transparent)]
    Semiring(#[from] SemiringError),
}

/// A rule failure located at a node (child indices from the root).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct CheckError {
    pub path: Vec<usize>,
    pub rule: String,
    pub error: RuleError,
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {} ({}): {}", path_string(&self.path), self.rule, self.error)
    }
}

pub fn path_string(path: &[usize]) -> String {
    if path.is_empty() {
        return "root".to_string();
    }
    let parts: Vec<String> = path.iter().map(|i| i.to_string()).collect();
    format!("root.{}", parts.join("."))
}

/// Positional rule parameter as it appears in files.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Param {
    Name(Name),
    GType(GType),
    LType(LType),
    Grade(Grade),
    Index(usize),
    Grades(GradeVec),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Name,
    GType,
    LType,
    Grade,
    Index,
    Grades,
}

/// A rule set: naming, parameters and the conclusion function.
pub trait Rule: Clone + fmt::Debug + PartialEq + Sized {
    fn name(&self) -> &'static str;
    /// Fragment of the conclusion.
    fn frag(&self) -> Frag;
    fn child_frags(&self) -> Vec<Frag>;
    fn params(&self) -> Vec<Param>;
    /// Parameter schema for a rule name at a given fragment; returns the canonical name.
    fn schema(name: &str, frag: Frag) -> Option<(&'static str, &'static [ParamKind])>;
    fn from_params(name: &str, frag: Frag, params: Vec<Param>) -> Result<Self, String>;
    fn conclude(&self, sr: SemiringId, prem: &[&Judgment]) -> Result<Judgment, RuleError>;
    fn is_cut(&self) -> bool {
        false
    }
    /// The same rule with every name parameter passed through `f`.
    fn map_names(&self, f: &dyn Fn(&str) -> Name) -> Self;
}

/// A checked derivation; `concl` is always the value computed from the rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deriv<R> {
    pub rule: R,
    pub children: Vec<Deriv<R>>,
    pub concl: Judgment,
}

/// An unchecked derivation as read from a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node<R> {
    pub rule: R,
    pub children: Vec<Node<R>>,
    pub conclude: Option<Judgment>,
}

impl<R: Rule> Node<R> {
    pub fn new(rule: R, children: Vec<Node<R>>) -> Node<R> {
        Node { rule, children, conclude: None }
    }

    /// Checks every node bottom-up and returns the checked tree.
    pub fn check(&self, sr: SemiringId) -> Result<Deriv<R>, CheckError> {
        self.check_at(sr, &mut Vec::new())
    }

    fn check_at(&self, sr: SemiringId, path: &mut Vec<usize>) -> Result<Deriv<R>, CheckError> {
        let mut kids = Vec::with_capacity(self.children.len());
        for (i, c) in self.children.iter().enumerate() {
            path.push(i);
            kids.push(c.check_at(sr, path)?);
            path.pop();
        }
        let err = |error| CheckError { path: path.clone(), rule: self.rule.name().to_string(), error };
        let d = Deriv::new(sr, self.rule.clone(), kids).map_err(|e| err(e.error))?;
        if let Some(ann) = &self.conclude {
            if !ann.alpha_eq(&d.concl) {
                return Err(err(RuleError::Conclude { annotated: ann.to_string(), computed: d.concl.to_string() }));
            }
        }
        Ok(d)
    }
}

impl<R: Rule> Deriv<R> {
    /// Applies a rule to checked premises.
    pub fn new(sr: SemiringId, rule: R, children: Vec<Deriv<R>>) -> Result<Deriv<R>, CheckError> {
        let err = |error| CheckError { path: vec![], rule: rule.name().to_string(), error };
        let frags = rule.child_frags();
        if frags.len() != children.len() {
            return Err(err(RuleError::Arity { expected: frags.len(), found: children.len() }));
        }
        for (i, (f, c)) in frags.iter().zip(&children).enumerate() {
            if Frag::of(&c.concl) != *f {
                return Err(err(RuleError::Shape(format!("premise {i} is in the wrong fragment"))));
            }
        }
        let prem: Vec<&Judgment> = children.iter().map(|c| &c.concl).collect();
        let concl = rule.conclude(sr, &prem).map_err(err)?;
        distinct_names(&concl).map_err(err)?;
        Ok(Deriv { rule, children, concl })
    }

    pub fn leaf(sr: SemiringId, rule: R) -> Result<Deriv<R>, CheckError> {
        Deriv::new(sr, rule, vec![])
    }

    pub fn unary(sr: SemiringId, rule: R, child: Deriv<R>) -> Result<Deriv<R>, CheckError> {
        Deriv::new(sr, rule, vec![child])
    }

    pub fn binary(sr: SemiringId, rule: R, a: Deriv<R>, b: Deriv<R>) -> Result<Deriv<R>, CheckError> {
        Deriv::new(sr, rule, vec![a, b])
    }

    /// Recomputes every conclusion and compares with the stored ones.
    pub fn recheck(&self, sr: SemiringId) -> Result<Judgment, CheckError> {
        self.to_node().check(sr).map(|d| d.concl)
    }

    pub fn to_node(&self) -> Node<R> {
        Node {
            rule: self.rule.clone(),
            children: self.children.iter().map(|c| c.to_node()).collect(),
            conclude: Some(self.concl.clone()),
        }
    }

    pub fn to_bare_node(&self) -> Node<R> {
        Node {
            rule: self.rule.clone(),
            children: self.children.iter().map(|c| c.to_bare_node()).collect(),
            conclude: None,
        }
    }

    /// Longest path to a leaf; axioms have depth 0.
    pub fn depth(&self) -> usize {
        self.children.iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn at(&self, pos: &[usize]) -> Option<&Deriv<R>> {
        match pos.split_first() {
            None => Some(self),
            Some((i, rest)) => self.children.get(*i)?.at(rest),
        }
    }

    /// Replaces the subtree at `pos`, rechecking the rules on the path above it.
    pub fn replace_at(&self, sr: SemiringId, pos: &[usize], new: Deriv<R>) -> Result<Deriv<R>, CheckError> {
        match pos.split_first() {
            None => Ok(new),
            Some((i, rest)) => {
                let child = self.children.get(*i).ok_or_else(|| CheckError {
                    path: pos.to_vec(),
                    rule: self.rule.name().to_string(),
                    error: RuleError::Shape("no such position".into()),
                })?;
                let replaced = child.replace_at(sr, rest, new)?;
                let mut kids = self.children.clone();
                kids[*i] = replaced;
                Deriv::new(sr, self.rule.clone(), kids)
            }
        }
    }

    /// Pre-order visit with positions.
    pub fn visit<'a, F: FnMut(&[usize], &'a Deriv<R>)>(&'a self, f: &mut F) {
        fn go<'a, R, F: FnMut(&[usize], &'a Deriv<R>)>(d: &'a Deriv<R>, path: &mut Vec<usize>, f: &mut F) {
            f(path, d);
            for (i, c) in d.children.iter().enumerate() {
                path.push(i);
                go(c, path, f);
                path.pop();
            }
        }
        go(self, &mut Vec::new(), f)
    }

    pub fn count<F: Fn(&R) -> bool>(&self, pred: F) -> usize {
        let mut n = 0;
        self.visit(&mut |_, d| {
            if pred(&d.rule) {
                n += 1
            }
        });
        n
    }

    /// Applies `f` to every name in the tree. `f` must be injective on the
    /// names that occur, in which case the result is again a valid derivation.
    pub fn map_names(&self, f: &dyn Fn(&str) -> Name) -> Deriv<R> {
        Deriv {
            rule: self.rule.map_names(f),
            children: self.children.iter().map(|c| c.map_names(f)).collect(),
            concl: self.concl.map_names(f),
        }
    }

    /// Every name occurring in any context, term or rule of the tree.
    pub fn every_name(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(&mut |_, d| {
            out.extend(d.concl.every_name());
            for p in d.rule.params() {
                if let Param::Name(n) = p {
                    out.insert(n);
                }
            }
        });
        out
    }

    pub fn has_cut(&self) -> bool {
        self.count(|r| r.is_cut()) > 0
    }
}

// ---------------------------------------------------------------------------
// Context operations used by rule definitions

pub fn shape<T>(msg: impl Into<String>) -> Result<T, RuleError> {
    Err(RuleError::Shape(msg.into()))
}

pub fn distinct_names(j: &Judgment) -> Result<(), RuleError> {
    let mut seen = BTreeSet::new();
    for n in j.graded_names().into_iter().chain(j.linear_names()) {
        if !seen.insert(n.clone()) {
            return Err(RuleError::NameClash(n));
        }
    }
    Ok(())
}

pub fn as_gs(j: &Judgment) -> Result<(&GradedCtx, &GTerm, &GType), RuleError> {
    match j {
        Judgment::GS { gctx, term, ty } => Ok((gctx, term, ty)),
        _ => shape("expected a graded judgment"),
    }
}

pub fn as_ms(j: &Judgment) -> Result<(&GradedCtx, &LinearCtx, &LTerm, &LType), RuleError> {
    match j {
        Judgment::MS { gctx, lctx, term, ty } => Ok((gctx, lctx, term, ty)),
        _ => shape("expected a mixed judgment"),
    }
}

pub fn graded_pos(ctx: &GradedCtx, x: &str) -> Result<usize, RuleError> {
    ctx.iter().position(|e| e.name == x).map_or_else(|| shape(format!("`{x}` is not in the graded context")), Ok)
}

pub fn linear_pos(ctx: &LinearCtx, x: &str) -> Result<usize, RuleError> {
    ctx.iter().position(|e| e.name == x).map_or_else(|| shape(format!("`{x}` is not in the linear context")), Ok)
}

pub fn check_at(at: usize, len: usize) -> Result<(), RuleError> {
    if at > len {
        return shape(format!("insertion index {at} exceeds context length {len}"));
    }
    Ok(())
}

/// Rebuilds a judgment with a new graded context, keeping the rest.
pub fn with_gctx(j: &Judgment, gctx: GradedCtx) -> Judgment {
    match j {
        Judgment::GS { term, ty, .. } => Judgment::GS { gctx, term: term.clone(), ty: ty.clone() },
        Judgment::MS { lctx, term, ty, .. } => {
            Judgment::MS { gctx, lctx: lctx.clone(), term: term.clone(), ty: ty.clone() }
        }
    }
}

pub fn with_term(j: &Judgment, t: Term) -> Judgment {
    match (j, t) {
        (Judgment::GS { gctx, ty, .. }, Term::G(term)) => Judgment::GS { gctx: gctx.clone(), term, ty: ty.clone() },
        (Judgment::MS { gctx, lctx, ty, .. }, Term::L(term)) => {
            Judgment::MS { gctx: gctx.clone(), lctx: lctx.clone(), term, ty: ty.clone() }
        }
        _ => unreachable!("term fragment differs from judgment fragment"),
    }
}

/// Inserts a hypothesis at grade 0.
pub fn weaken(sr: SemiringId, j: &Judgment, x: &str, ty: &GType, at: usize) -> Result<Judgment, RuleError> {
    let mut g = j.gctx().clone();
    check_at(at, g.len())?;
    g.insert(at, gentry(x, sr.zero(), ty.clone()));
    Ok(with_gctx(j, g))
}

/// Merges adjacent `x`, `y` of equal type into `z` at the sum of their grades.
pub fn contract(sr: SemiringId, j: &Judgment, x: &str, y: &str, z: &str) -> Result<Judgment, RuleError> {
    let g = j.gctx();
    let i = graded_pos(g, x)?;
    if g.get(i + 1).map(|e| e.name.as_str()) != Some(y) {
        return shape(format!("`{y}` must directly follow `{x}`"));
    }
    if g[i].ty != g[i + 1].ty {
        return shape(format!("contracted hypotheses `{x}` and `{y}` have different types"));
    }
    let grade = sr.add(&g[i].grade, &g[i + 1].grade)?;
    let mut out = g.clone();
    out[i] = gentry(z, grade, g[i].ty.clone());
    out.remove(i + 1);
    let term = rename(&j.term(), &[(x.to_string(), z.to_string()), (y.to_string(), z.to_string())]);
    Ok(with_term(&with_gctx(j, out), term))
}

/// Swaps graded positions `k` and `k+1`.
pub fn exchange_graded(j: &Judgment, k: usize) -> Result<Judgment, RuleError> {
    let mut g = j.gctx().clone();
    if k + 1 >= g.len() {
        return shape(format!("exchange position {k} out of range"));
    }
    g.swap(k, k + 1);
    Ok(with_gctx(j, g))
}

/// Swaps linear positions `k` and `k+1`.
pub fn exchange_linear(j: &Judgment, k: usize) -> Result<Judgment, RuleError> {
    let (g, l, t, a) = as_ms(j)?;
    let mut l = l.clone();
    if k + 1 >= l.len() {
        return shape(format!("exchange position {k} out of range"));
    }
    l.swap(k, k + 1);
    Ok(Judgment::MS { gctx: g.clone(), lctx: l, term: t.clone(), ty: a.clone() })
}

/// Raises the graded context to `to`, requiring the premise grades to be below it.
pub fn approximate(sr: SemiringId, j: &Judgment, to: &[Grade]) -> Result<Judgment, RuleError> {
    let from = j.grades();
    if from.len() != to.len() {
        return Err(SemiringError::Arity { expected: from.len(), found: to.len() }.into());
    }
    for (a, b) in from.iter().zip(to) {
        sr.check(b)?;
        if !sr.leq(a, b)? {
            return Err(RuleError::Grade(format!("{a} is not below {b}")));
        }
    }
    let g = j.gctx().iter().zip(to).map(|(e, r)| gentry(&e.name, r.clone(), e.ty.clone())).collect();
    Ok(with_gctx(j, g))
}

pub fn scale(sr: SemiringId, r: &Grade, g: &GradedCtx) -> Result<GradedCtx, RuleError> {
    g.iter().map(|e| Ok(gentry(&e.name, sr.mul(r, &e.grade)?, e.ty.clone()))).collect()
}

/// Replaces positions `at..at+n` of `outer` by `inner`.
pub fn splice<T: Clone>(outer: &[T], at: usize, n: usize, inner: &[T]) -> Vec<T> {
    let mut out = outer[..at].to_vec();
    out.extend_from_slice(inner);
    out.extend_from_slice(&outer[at + n..]);
    out
}

/// The graded-cut context: the block `at..at+n` (grades `delta`) is replaced by
/// `Δ₂` graded with `delta ⊠* [δ₂ⁿ]`.
pub fn multicut_ctx(
    sr: SemiringId,
    outer: &GradedCtx,
    at: usize,
    n: usize,
    inner: &GradedCtx,
) -> Result<GradedCtx, RuleError> {
    let delta: Vec<Grade> = outer[at..at + n].iter().map(|e| e.grade.clone()).collect();
    let delta2: Vec<Grade> = inner.iter().map(|e| e.grade.clone()).collect();
    let prod = sr.boxast(&delta, &delta2, n)?;
    let inner: GradedCtx = inner.iter().zip(prod).map(|(e, r)| gentry(&e.name, r, e.ty.clone())).collect();
    Ok(splice(outer, at, n, &inner))
}
