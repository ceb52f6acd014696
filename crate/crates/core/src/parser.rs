//! Reader for `.mgl` proof files.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::deriv::{Frag, Node, Param, ParamKind, Rule};
use crate::nd::{NdNode, NdRule};
use crate::sc::{ScNode, ScRule};
use crate::semiring::{Grade, SemiringId};
use crate::syntax::*;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

/// A derivation tree tagged with its calculus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tree {
    Sc(ScNode),
    Nd(NdNode),
}

impl Tree {
    pub fn frag(&self) -> Frag {
        match self {
            Tree::Sc(n) => n.rule.frag(),
            Tree::Nd(n) => n.rule.frag(),
        }
    }

    pub fn sort_tag(&self) -> &'static str {
        match (self, self.frag()) {
            (Tree::Sc(_), Frag::Graded) => "GS",
            (Tree::Sc(_), Frag::Mixed) => "MS",
            (Tree::Nd(_), Frag::Graded) => "GT",
            (Tree::Nd(_), Frag::Mixed) => "MT",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Goal { name: Name, judgment: Judgment },
    Deriv { name: Name, tree: Tree },
}

impl Item {
    pub fn name(&self) -> &str {
        match self {
            Item::Goal { name, .. } | Item::Deriv { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofFile {
    pub semiring: SemiringId,
    pub atoms: Vec<Name>,
    pub items: Vec<Item>,
}

impl ProofFile {
    pub fn item(&self, name: &str) -> Option<&Item> {
        self.items.iter().find(|i| i.name() == name)
    }
}

const KEYWORDS: &[&str] = &["let", "in", "unitJ", "unitI", "Lin", "Grd", "Unlin", "J", "I"];

/// Parses a whole file. `semiring` overrides the header when given.
pub fn parse_file(text: &str, semiring: Option<SemiringId>) -> Result<ProofFile, ParseError> {
    let mut p = Parser::new(text, SemiringId::NatExact);
    p.file(semiring)
}

/// Parses a single judgment. Atom names are accepted without declaration.
pub fn parse_judgment(text: &str, sr: SemiringId) -> Result<Judgment, ParseError> {
    let mut p = Parser::new(text, sr);
    p.open_atoms = true;
    let j = p.judgment()?;
    p.end()?;
    Ok(j)
}

pub fn parse_gtype(text: &str, sr: SemiringId) -> Result<GType, ParseError> {
    let mut p = Parser::new(text, sr);
    p.open_atoms = true;
    let t = p.gtype()?;
    p.end()?;
    Ok(t)
}

pub fn parse_ltype(text: &str, sr: SemiringId) -> Result<LType, ParseError> {
    let mut p = Parser::new(text, sr);
    p.open_atoms = true;
    let t = p.ltype()?;
    p.end()?;
    Ok(t)
}

/// Parses a term whose free variables are sorted by `graded` (everything else
/// is taken to be linear).
pub fn parse_term(text: &str, sr: SemiringId, want: Frag, graded: &[Name]) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, sr);
    p.open_atoms = true;
    let start = p.pos();
    let raw = p.term()?;
    p.end()?;
    let mut scope: Scope = graded.iter().map(|n| (n.clone(), vec![Frag::Graded])).collect();
    let err = |msg| ParseError { line: start.0, col: start.1, msg };
    match want {
        Frag::Graded => resolve_g(&raw, &mut scope).map(Term::G).map_err(err),
        Frag::Mixed => resolve_l(&raw, &mut scope).map(Term::L).map_err(err),
    }
}

pub fn parse_sc(text: &str, sr: SemiringId, frag: Frag) -> Result<ScNode, ParseError> {
    let mut p = Parser::new(text, sr);
    p.open_atoms = true;
    let n = p.tree::<ScRule>(frag)?;
    p.end()?;
    Ok(n)
}

pub fn parse_nd(text: &str, sr: SemiringId, frag: Frag) -> Result<NdNode, ParseError> {
    let mut p = Parser::new(text, sr);
    p.open_atoms = true;
    let n = p.tree::<NdRule>(frag)?;
    p.end()?;
    Ok(n)
}

struct Parser {
    src: Vec<char>,
    i: usize,
    line: usize,
    col: usize,
    sr: SemiringId,
    atoms: BTreeSet<Name>,
    open_atoms: bool,
}

/// Untyped term, before variables are sorted into the two fragments.
#[derive(Debug, Clone)]
enum Raw {
    Var(Name),
    UnitJ,
    UnitI,
    Pair(Box<Raw>, Box<Raw>),
    LetUnitJ(Box<Raw>, Box<Raw>),
    LetUnitI(Box<Raw>, Box<Raw>),
    LetPair(Name, Name, Box<Raw>, Box<Raw>),
    Lin(Box<Raw>),
    Lam(Name, Option<LType>, Box<Raw>),
    App(Box<Raw>, Box<Raw>),
    Grd(Grade, Box<Raw>),
    LetGrd(Grade, Name, Box<Raw>, Box<Raw>),
    Unlin(Box<Raw>),
}

impl Parser {
    fn new(text: &str, sr: SemiringId) -> Parser {
        Parser { src: text.chars().collect(), i: 0, line: 1, col: 1, sr, atoms: BTreeSet::new(), open_atoms: false }
    }

    fn pos(&mut self) -> (usize, usize) {
        self.ws();
        (self.line, self.col)
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { line: self.line, col: self.col, msg: msg.into() })
    }

    fn fail_at<T>(&self, at: (usize, usize), msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { line: at.0, col: at.1, msg: msg.into() })
    }

    fn peek(&self) -> Option<char> {
        self.src.get(self.i).copied()
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.src.get(self.i + k).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('-') if self.peek_at(1) == Some('-') => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => return,
            }
        }
    }

    fn end(&mut self) -> Result<(), ParseError> {
        self.ws();
        match self.peek() {
            None => Ok(()),
            Some(c) => self.fail(format!("unexpected `{c}`")),
        }
    }

    fn looking_at(&mut self, s: &str) -> bool {
        self.ws();
        s.chars().enumerate().all(|(k, c)| self.peek_at(k) == Some(c))
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.looking_at(s) {
            for _ in s.chars() {
                self.bump();
            }
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            let found = self.peek().map_or("end of input".to_string(), |c| format!("`{c}`"));
            self.fail(format!("expected `{s}`, found {found}"))
        }
    }

    fn peek_ident(&mut self) -> Option<String> {
        self.ws();
        let first = self.peek()?;
        if !(first.is_ascii_alphabetic() || first == '_') {
            return None;
        }
        let mut k = 0;
        let mut s = String::new();
        while let Some(c) = self.peek_at(k) {
            if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                s.push(c);
                k += 1;
            } else {
                break;
            }
        }
        Some(s)
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if self.peek_ident().as_deref() == Some(kw) {
            for _ in kw.chars() {
                self.bump();
            }
            true
        } else {
            false
        }
    }

    fn raw_ident(&mut self) -> Result<String, ParseError> {
        match self.peek_ident() {
            Some(s) => {
                for _ in s.chars() {
                    self.bump();
                }
                Ok(s)
            }
            None => self.fail("expected an identifier"),
        }
    }

    fn name(&mut self) -> Result<Name, ParseError> {
        let at = self.pos();
        let s = self.raw_ident()?;
        if KEYWORDS.contains(&s.as_str()) {
            return self.fail_at(at, format!("`{s}` is a keyword"));
        }
        Ok(s)
    }

    /// A run of characters up to whitespace or a delimiter.
    fn word(&mut self, stop: &[char]) -> String {
        self.ws();
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_whitespace() || stop.contains(&c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    fn grade(&mut self) -> Result<Grade, ParseError> {
        let at = self.pos();
        let lit = self.word(&['(', ')', '[', ']', ',', ';']);
        if lit.is_empty() {
            return self.fail("expected a grade");
        }
        self.sr.parse_grade(&lit).or_else(|e| self.fail_at(at, e.to_string()))
    }

    fn index(&mut self) -> Result<usize, ParseError> {
        let at = self.pos();
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s.parse().or_else(|_| self.fail_at(at, "expected a non-negative integer"))
    }

    fn grades(&mut self) -> Result<Vec<Grade>, ParseError> {
        self.expect("[")?;
        let mut out = Vec::new();
        if self.eat("]") {
            return Ok(out);
        }
        loop {
            out.push(self.grade()?);
            if self.eat("]") {
                return Ok(out);
            }
            self.expect(",")?;
        }
    }

    fn atom(&mut self) -> Result<Name, ParseError> {
        let at = self.pos();
        let n = self.name()?;
        if !self.open_atoms && !self.atoms.contains(&n) {
            return self.fail_at(at, format!("undeclared atom `{n}`"));
        }
        Ok(n)
    }

    // -- types ---------------------------------------------------------------

    fn gtype(&mut self) -> Result<GType, ParseError> {
        let mut t = self.gprim()?;
        while self.eat("><") || self.eat("⊠") {
            let r = self.gprim()?;
            t = GType::tensor(t, r);
        }
        Ok(t)
    }

    fn gprim(&mut self) -> Result<GType, ParseError> {
        if self.eat("(") {
            let t = self.gtype()?;
            self.expect(")")?;
            return Ok(t);
        }
        if self.keyword("J") {
            return Ok(GType::J);
        }
        if self.keyword("Lin") {
            self.expect("(")?;
            let a = self.ltype()?;
            self.expect(")")?;
            return Ok(GType::lin(a));
        }
        Ok(GType::Atom(self.atom()?))
    }

    fn ltype(&mut self) -> Result<LType, ParseError> {
        let a = self.ltensor()?;
        if self.eat("-o") || self.eat("⊸") {
            let b = self.ltype()?;
            return Ok(LType::lolli(a, b));
        }
        Ok(a)
    }

    fn ltensor(&mut self) -> Result<LType, ParseError> {
        let mut t = self.lprim()?;
        while self.eat("*") || self.eat("⊗") {
            let r = self.lprim()?;
            t = LType::tensor(t, r);
        }
        Ok(t)
    }

    fn lprim(&mut self) -> Result<LType, ParseError> {
        if self.eat("(") {
            let t = self.ltype()?;
            self.expect(")")?;
            return Ok(t);
        }
        if self.keyword("I") {
            return Ok(LType::I);
        }
        if self.keyword("Grd") {
            self.expect("[")?;
            let r = self.grade()?;
            self.expect("]")?;
            self.expect("(")?;
            let x = self.gtype()?;
            self.expect(")")?;
            return Ok(LType::grd(r, x));
        }
        Ok(LType::Atom(self.atom()?))
    }

    // -- terms ---------------------------------------------------------------

    fn term(&mut self) -> Result<Raw, ParseError> {
        if self.keyword("let") {
            return self.let_form();
        }
        if self.eat("\\") {
            let x = self.name()?;
            let ann = if self.eat(":") { Some(self.ltype()?) } else { None };
            self.expect(".")?;
            let body = self.term()?;
            return Ok(Raw::Lam(x, ann, Box::new(body)));
        }
        let mut t = self.prefix()?;
        while self.starts_prefix() {
            let a = self.prefix()?;
            t = Raw::App(Box::new(t), Box::new(a));
        }
        Ok(t)
    }

    fn starts_prefix(&mut self) -> bool {
        self.ws();
        match self.peek() {
            Some('(') => true,
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                !matches!(self.peek_ident().as_deref(), Some("in") | Some("let"))
            }
            _ => false,
        }
    }

    fn let_form(&mut self) -> Result<Raw, ParseError> {
        if self.keyword("unitJ") {
            self.expect("=")?;
            let a = self.term()?;
            self.in_kw()?;
            let b = self.term()?;
            return Ok(Raw::LetUnitJ(Box::new(a), Box::new(b)));
        }
        if self.keyword("unitI") {
            self.expect("=")?;
            let a = self.term()?;
            self.in_kw()?;
            let b = self.term()?;
            return Ok(Raw::LetUnitI(Box::new(a), Box::new(b)));
        }
        if self.keyword("Grd") {
            self.expect("[")?;
            let r = self.grade()?;
            self.expect("]")?;
            let x = self.name()?;
            self.expect("=")?;
            let a = self.term()?;
            self.in_kw()?;
            let b = self.term()?;
            return Ok(Raw::LetGrd(r, x, Box::new(a), Box::new(b)));
        }
        self.expect("(")?;
        let x = self.name()?;
        self.expect(",")?;
        let y = self.name()?;
        self.expect(")")?;
        self.expect("=")?;
        let a = self.term()?;
        self.in_kw()?;
        let b = self.term()?;
        Ok(Raw::LetPair(x, y, Box::new(a), Box::new(b)))
    }

    fn in_kw(&mut self) -> Result<(), ParseError> {
        if self.keyword("in") {
            Ok(())
        } else {
            self.fail("expected `in`")
        }
    }

    fn prefix(&mut self) -> Result<Raw, ParseError> {
        if self.keyword("Lin") {
            return Ok(Raw::Lin(Box::new(self.prefix()?)));
        }
        if self.keyword("Unlin") {
            return Ok(Raw::Unlin(Box::new(self.prefix()?)));
        }
        if self.keyword("Grd") {
            self.expect("[")?;
            let r = self.grade()?;
            self.expect("]")?;
            return Ok(Raw::Grd(r, Box::new(self.prefix()?)));
        }
        self.atomic()
    }

    fn atomic(&mut self) -> Result<Raw, ParseError> {
        if self.eat("(") {
            let a = self.term()?;
            if self.eat(",") {
                let b = self.term()?;
                self.expect(")")?;
                return Ok(Raw::Pair(Box::new(a), Box::new(b)));
            }
            self.expect(")")?;
            return Ok(a);
        }
        if self.keyword("unitJ") {
            return Ok(Raw::UnitJ);
        }
        if self.keyword("unitI") {
            return Ok(Raw::UnitI);
        }
        Ok(Raw::Var(self.name()?))
    }

    // -- judgments -----------------------------------------------------------

    fn judgment(&mut self) -> Result<Judgment, ParseError> {
        let at = self.pos();
        let tag = self.raw_ident()?;
        self.expect(":")?;
        match tag.as_str() {
            "GS" => {
                let gctx = self.graded_ctx(&["|-", "⊢"])?;
                self.turnstile()?;
                let (term, ty) = self.typed_term(&gctx, &[], Frag::Graded)?;
                match (term, ty) {
                    (Term::G(term), Formula::G(ty)) => Ok(Judgment::GS { gctx, term, ty }),
                    _ => unreachable!(),
                }
            }
            "MS" => {
                let gctx = self.graded_ctx(&[";"])?;
                self.expect(";")?;
                let lctx = self.linear_ctx()?;
                self.turnstile()?;
                let (term, ty) = self.typed_term(&gctx, &lctx, Frag::Mixed)?;
                match (term, ty) {
                    (Term::L(term), Formula::L(ty)) => Ok(Judgment::MS { gctx, lctx, term, ty }),
                    _ => unreachable!(),
                }
            }
            other => self.fail_at(at, format!("expected `GS` or `MS`, found `{other}`")),
        }
    }

    fn turnstile(&mut self) -> Result<(), ParseError> {
        if self.eat("⊢") {
            return Ok(());
        }
        self.expect("|-")
    }

    fn graded_ctx(&mut self, stop: &[&str]) -> Result<GradedCtx, ParseError> {
        let mut out = Vec::new();
        if stop.iter().any(|s| self.looking_at(s)) {
            return Ok(out);
        }
        loop {
            let x = self.name()?;
            self.expect("@")?;
            let r = self.grade()?;
            self.expect(":")?;
            let ty = self.gtype()?;
            out.push(GEntry { name: x, grade: r, ty });
            if !self.eat(",") {
                return Ok(out);
            }
        }
    }

    fn linear_ctx(&mut self) -> Result<LinearCtx, ParseError> {
        let mut out = Vec::new();
        if self.looking_at("|-") || self.looking_at("⊢") {
            return Ok(out);
        }
        loop {
            let x = self.name()?;
            self.expect(":")?;
            let ty = self.ltype()?;
            out.push(LEntry { name: x, ty });
            if !self.eat(",") {
                return Ok(out);
            }
        }
    }

    fn typed_term(&mut self, g: &[GEntry], l: &[LEntry], frag: Frag) -> Result<(Term, Formula), ParseError> {
        let at = self.pos();
        let raw = self.term()?;
        self.expect(":")?;
        let mut scope: Scope = HashMap::new();
        for e in g {
            scope.entry(e.name.clone()).or_default().push(Frag::Graded);
        }
        for e in l {
            scope.entry(e.name.clone()).or_default().push(Frag::Mixed);
        }
        match frag {
            Frag::Graded => {
                let t = resolve_g(&raw, &mut scope).or_else(|m| self.fail_at(at, m))?;
                Ok((Term::G(t), Formula::G(self.gtype()?)))
            }
            Frag::Mixed => {
                let t = resolve_l(&raw, &mut scope).or_else(|m| self.fail_at(at, m))?;
                Ok((Term::L(t), Formula::L(self.ltype()?)))
            }
        }
    }

    // -- derivations ---------------------------------------------------------

    fn tree<R: Rule>(&mut self, frag: Frag) -> Result<Node<R>, ParseError> {
        self.expect("(")?;
        if !self.keyword("rule") {
            return self.fail("expected `rule`");
        }
        let at = self.pos();
        let rname = self.word(&['(', ')']);
        let (canon, kinds) = match R::schema(&rname, frag) {
            Some(s) => s,
            None => {
                let other = match frag {
                    Frag::Graded => Frag::Mixed,
                    Frag::Mixed => Frag::Graded,
                };
                return if R::schema(&rname, other).is_some() {
                    self.fail_at(at, format!("rule `{rname}` cannot conclude a {} judgment here", frag_word(frag)))
                } else {
                    self.fail_at(at, format!("unknown rule name `{rname}`"))
                };
            }
        };
        let mut params = Vec::new();
        for k in kinds {
            params.push(match k {
                ParamKind::Name => Param::Name(self.name()?),
                ParamKind::GType => Param::GType(self.gtype()?),
                ParamKind::LType => Param::LType(self.ltype()?),
                ParamKind::Grade => Param::Grade(self.grade()?),
                ParamKind::Index => Param::Index(self.index()?),
                ParamKind::Grades => Param::Grades(self.grades()?),
            });
        }
        let rule = R::from_params(canon, frag, params).or_else(|m| self.fail_at(at, m))?;
        if rule.frag() != frag {
            return self.fail_at(at, format!("rule `{rname}` cannot conclude a {} judgment here", frag_word(frag)));
        }
        let frags = rule.child_frags();
        let mut children = Vec::new();
        while self.looking_at("(") {
            let f = match frags.get(children.len()) {
                Some(f) => *f,
                None => return self.fail(format!("rule `{canon}` takes {} premises", frags.len())),
            };
            children.push(self.tree::<R>(f)?);
        }
        if children.len() != frags.len() {
            return self.fail(format!("rule `{canon}` takes {} premises, found {}", frags.len(), children.len()));
        }
        let conclude = if self.eat(":conclude") { Some(self.judgment()?) } else { None };
        self.expect(")")?;
        Ok(Node { rule, children, conclude })
    }

    // -- files ---------------------------------------------------------------

    fn file(&mut self, override_sr: Option<SemiringId>) -> Result<ProofFile, ParseError> {
        if !self.keyword("semiring") {
            return self.fail("expected `semiring` header");
        }
        let at = self.pos();
        let id = self.word(&[';']);
        let header = SemiringId::from_name(&id).or_else(|e| self.fail_at(at, e.to_string()))?;
        self.sr = override_sr.unwrap_or(header);
        self.expect(";")?;
        let mut atoms = Vec::new();
        let mut items = Vec::new();
        loop {
            self.ws();
            if self.peek().is_none() {
                break;
            }
            let at = self.pos();
            let kw = self.raw_ident().or_else(|_| self.fail("expected `atom`, `goal` or `deriv`"))?;
            match kw.as_str() {
                "atom" => loop {
                    let at = self.pos();
                    let n = self.name()?;
                    if !self.atoms.insert(n.clone()) {
                        return self.fail_at(at, format!("atom `{n}` declared twice"));
                    }
                    atoms.push(n);
                    if self.eat(";") {
                        break;
                    }
                    self.expect(",")?;
                },
                "goal" => {
                    let name = match self.peek_ident() {
                        Some(s) if s != "GS" && s != "MS" => self.name()?,
                        _ => format!("goal{}", items.len() + 1),
                    };
                    let judgment = self.judgment()?;
                    self.expect(";")?;
                    items.push(Item::Goal { name, judgment });
                }
                "deriv" => {
                    let name = match self.peek_ident() {
                        Some(s) if !["GS", "MS", "GT", "MT"].contains(&s.as_str()) => self.name()?,
                        _ => format!("deriv{}", items.len() + 1),
                    };
                    let at = self.pos();
                    let tag = self.raw_ident()?;
                    let tree = match tag.as_str() {
                        "GS" => Tree::Sc(self.tree(Frag::Graded)?),
                        "MS" => Tree::Sc(self.tree(Frag::Mixed)?),
                        "GT" => Tree::Nd(self.tree(Frag::Graded)?),
                        "MT" => Tree::Nd(self.tree(Frag::Mixed)?),
                        other => return self.fail_at(at, format!("expected GS, MS, GT or MT, found `{other}`")),
                    };
                    self.expect(";")?;
                    items.push(Item::Deriv { name, tree });
                }
                other => return self.fail_at(at, format!("expected `atom`, `goal` or `deriv`, found `{other}`")),
            }
        }
        Ok(ProofFile { semiring: self.sr, atoms, items })
    }
}

fn frag_word(f: Frag) -> &'static str {
    match f {
        Frag::Graded => "graded",
        Frag::Mixed => "mixed",
    }
}

// ---------------------------------------------------------------------------
// Sorting variables into fragments

type Scope = HashMap<Name, Vec<Frag>>;

fn lookup(scope: &Scope, x: &str) -> Option<Frag> {
    scope.get(x).and_then(|v| v.last().copied())
}

fn with_bound<T>(scope: &mut Scope, xs: &[(&Name, Frag)], f: impl FnOnce(&mut Scope) -> T) -> T {
    for (x, fr) in xs {
        scope.entry((*x).clone()).or_default().push(*fr);
    }
    let r = f(scope);
    for (x, _) in xs {
        if let Some(v) = scope.get_mut(*x) {
            v.pop();
        }
    }
    r
}

fn sort_of(raw: &Raw, scope: &mut Scope) -> Option<Frag> {
    match raw {
        Raw::Var(x) => lookup(scope, x),
        Raw::UnitJ | Raw::Lin(_) => Some(Frag::Graded),
        Raw::UnitI | Raw::Lam(..) | Raw::App(..) | Raw::Grd(..) | Raw::Unlin(_) | Raw::LetGrd(..) | Raw::LetUnitI(..) => {
            Some(Frag::Mixed)
        }
        Raw::Pair(a, b) => sort_of(a, scope).or_else(|| sort_of(b, scope)),
        Raw::LetUnitJ(_, b) => sort_of(b, scope),
        Raw::LetPair(x, y, a, b) => {
            let s = sort_of(a, scope).unwrap_or(Frag::Mixed);
            with_bound(scope, &[(x, s), (y, s)], |sc| sort_of(b, sc))
        }
    }
}

fn resolve_g(raw: &Raw, scope: &mut Scope) -> Result<GTerm, String> {
    Ok(match raw {
        Raw::Var(x) => {
            if lookup(scope, x) == Some(Frag::Mixed) {
                return Err(format!("linear variable `{x}` used in a graded term"));
            }
            GTerm::Var(x.clone())
        }
        Raw::UnitJ => GTerm::UnitJ,
        Raw::Pair(a, b) => GTerm::Pair(Box::new(resolve_g(a, scope)?), Box::new(resolve_g(b, scope)?)),
        Raw::LetUnitJ(a, b) => GTerm::LetUnitJ(Box::new(resolve_g(a, scope)?), Box::new(resolve_g(b, scope)?)),
        Raw::LetPair(x, y, a, b) => {
            let a = resolve_g(a, scope)?;
            let b = with_bound(scope, &[(x, Frag::Graded), (y, Frag::Graded)], |sc| resolve_g(b, sc))?;
            GTerm::LetPair(x.clone(), y.clone(), Box::new(a), Box::new(b))
        }
        Raw::Lin(l) => GTerm::Lin(Box::new(resolve_l(l, scope)?)),
        _ => return Err("expected a graded term".into()),
    })
}

fn resolve_l(raw: &Raw, scope: &mut Scope) -> Result<LTerm, String> {
    Ok(match raw {
        Raw::Var(x) => {
            if lookup(scope, x) == Some(Frag::Graded) {
                return Err(format!("graded variable `{x}` used as a linear term"));
            }
            LTerm::Var(x.clone())
        }
        Raw::UnitI => LTerm::UnitI,
        Raw::Pair(a, b) => LTerm::Pair(Box::new(resolve_l(a, scope)?), Box::new(resolve_l(b, scope)?)),
        Raw::LetUnitI(a, b) => LTerm::LetUnitI(Box::new(resolve_l(a, scope)?), Box::new(resolve_l(b, scope)?)),
        Raw::LetUnitJ(a, b) => LTerm::LetUnitJ(Box::new(resolve_g(a, scope)?), Box::new(resolve_l(b, scope)?)),
        Raw::LetPair(x, y, a, b) => {
            if sort_of(a, scope) == Some(Frag::Graded) {
                let a = resolve_g(a, scope)?;
                let b = with_bound(scope, &[(x, Frag::Graded), (y, Frag::Graded)], |sc| resolve_l(b, sc))?;
                LTerm::LetPairG(x.clone(), y.clone(), Box::new(a), Box::new(b))
            } else {
                let a = resolve_l(a, scope)?;
                let b = with_bound(scope, &[(x, Frag::Mixed), (y, Frag::Mixed)], |sc| resolve_l(b, sc))?;
                LTerm::LetPair(x.clone(), y.clone(), Box::new(a), Box::new(b))
            }
        }
        Raw::Lam(x, ann, b) => {
            let b = with_bound(scope, &[(x, Frag::Mixed)], |sc| resolve_l(b, sc))?;
            LTerm::Lam(x.clone(), ann.clone(), Box::new(b))
        }
        Raw::App(a, b) => LTerm::App(Box::new(resolve_l(a, scope)?), Box::new(resolve_l(b, scope)?)),
        Raw::Grd(r, t) => LTerm::Grd(r.clone(), Box::new(resolve_g(t, scope)?)),
        Raw::LetGrd(r, x, a, b) => {
            let a = resolve_l(a, scope)?;
            let b = with_bound(scope, &[(x, Frag::Graded)], |sc| resolve_l(b, sc))?;
            LTerm::LetGrd(r.clone(), x.clone(), Box::new(a), Box::new(b))
        }
        Raw::Unlin(t) => LTerm::Unlin(Box::new(resolve_g(t, scope)?)),
        _ => return Err("expected a mixed term".into()),
    })
}

// ---------------------------------------------------------------------------
// Printing files and trees

pub fn print_params(params: &[Param]) -> String {
    let mut out = String::new();
    for p in params {
        out.push(' ');
        match p {
            Param::Name(n) => out.push_str(n),
            Param::GType(t) => out.push_str(&t.to_string()),
            Param::LType(t) => out.push_str(&t.to_string()),
            Param::Grade(g) => out.push_str(&g.to_string()),
            Param::Index(i) => out.push_str(&i.to_string()),
            Param::Grades(v) => {
                let parts: Vec<String> = v.iter().map(|g| g.to_string()).collect();
                out.push_str(&format!("[{}]", parts.join(", ")));
            }
        }
    }
    out
}

pub fn print_node<R: Rule>(n: &Node<R>) -> String {
    let mut out = String::new();
    write_node(n, 0, &mut out);
    out
}

fn write_node<R: Rule>(n: &Node<R>, indent: usize, out: &mut String) {
    out.push_str("(rule ");
    out.push_str(n.rule.name());
    out.push_str(&print_params(&n.rule.params()));
    for c in &n.children {
        out.push('\n');
        out.push_str(&" ".repeat(indent + 2));
        write_node(c, indent + 2, out);
    }
    if let Some(j) = &n.conclude {
        out.push('\n');
        out.push_str(&" ".repeat(indent + 2));
        out.push_str(":conclude ");
        out.push_str(&j.to_string());
    }
    out.push(')');
}

impl fmt::Display for ProofFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "semiring {};", self.semiring)?;
        if !self.atoms.is_empty() {
            writeln!(f, "atom {};", self.atoms.join(", "))?;
        }
        for item in &self.items {
            writeln!(f)?;
            match item {
                Item::Goal { name, judgment } => writeln!(f, "goal {name} {judgment};")?,
                Item::Deriv { name, tree } => {
                    let body = match tree {
                        Tree::Sc(n) => print_node(n),
                        Tree::Nd(n) => print_node(n),
                    };
                    writeln!(f, "deriv {name} {}\n  {};", tree.sort_tag(), body.replace('\n', "\n  "))?;
                }
            }
        }
        Ok(())
    }
}
