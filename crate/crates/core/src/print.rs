//! Concrete syntax output. Everything printed here parses back to the same AST.

use std::fmt;

use crate::syntax::*;

impl fmt::Display for GType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GType::Atom(n) => f.write_str(n),
            GType::J => f.write_str("J"),
            GType::Tensor(a, b) => {
                write!(f, "{a} >< ")?;
                match **b {
                    GType::Tensor(..) => write!(f, "({b})"),
                    _ => write!(f, "{b}"),
                }
            }
            GType::Lin(a) => write!(f, "Lin({a})"),
        }
    }
}

impl fmt::Display for LType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LType::Atom(n) => f.write_str(n),
            LType::I => f.write_str("I"),
            LType::Tensor(a, b) => {
                match **a {
                    LType::Lolli(..) => write!(f, "({a}) * ")?,
                    _ => write!(f, "{a} * ")?,
                }
                match **b {
                    LType::Lolli(..) | LType::Tensor(..) => write!(f, "({b})"),
                    _ => write!(f, "{b}"),
                }
            }
            LType::Lolli(a, b) => {
                match **a {
                    LType::Lolli(..) => write!(f, "({a}) -o ")?,
                    _ => write!(f, "{a} -o ")?,
                }
                write!(f, "{b}")
            }
            LType::Grd(r, x) => write!(f, "Grd[{r}]({x})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::G(x) => x.fmt(f),
            Formula::L(a) => a.fmt(f),
        }
    }
}

// Precedence levels for terms: open binders, application, prefix forms, atoms.
const OPEN: u8 = 0;
const APP: u8 = 1;
const PREFIX: u8 = 2;

fn g_level(t: &GTerm) -> u8 {
    match t {
        GTerm::LetUnitJ(..) | GTerm::LetPair(..) => OPEN,
        GTerm::Lin(_) => PREFIX,
        _ => 3,
    }
}

fn l_level(t: &LTerm) -> u8 {
    match t {
        LTerm::LetUnitI(..)
        | LTerm::LetPair(..)
        | LTerm::Lam(..)
        | LTerm::LetGrd(..)
        | LTerm::LetUnitJ(..)
        | LTerm::LetPairG(..) => OPEN,
        LTerm::App(..) => APP,
        LTerm::Grd(..) | LTerm::Unlin(_) => PREFIX,
        _ => 3,
    }
}

struct G<'a>(&'a GTerm, u8);
struct L<'a>(&'a LTerm, u8);

impl fmt::Display for G<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if g_level(self.0) < self.1 {
            return write!(f, "({})", G(self.0, OPEN));
        }
        match self.0 {
            GTerm::Var(x) => f.write_str(x),
            GTerm::UnitJ => f.write_str("unitJ"),
            GTerm::LetUnitJ(a, b) => write!(f, "let unitJ = {} in {}", G(a, OPEN), G(b, OPEN)),
            GTerm::Pair(a, b) => write!(f, "({},{})", G(a, OPEN), G(b, OPEN)),
            GTerm::LetPair(x, y, a, b) => write!(f, "let ({x},{y}) = {} in {}", G(a, OPEN), G(b, OPEN)),
            GTerm::Lin(l) => write!(f, "Lin {}", L(l, PREFIX)),
        }
    }
}

impl fmt::Display for L<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if l_level(self.0) < self.1 {
            return write!(f, "({})", L(self.0, OPEN));
        }
        match self.0 {
            LTerm::Var(x) => f.write_str(x),
            LTerm::UnitI => f.write_str("unitI"),
            LTerm::LetUnitI(a, b) => write!(f, "let unitI = {} in {}", L(a, OPEN), L(b, OPEN)),
            LTerm::Pair(a, b) => write!(f, "({},{})", L(a, OPEN), L(b, OPEN)),
            LTerm::LetPair(x, y, a, b) => write!(f, "let ({x},{y}) = {} in {}", L(a, OPEN), L(b, OPEN)),
            LTerm::Lam(x, None, b) => write!(f, "\\{x} . {}", L(b, OPEN)),
            LTerm::Lam(x, Some(ty), b) => write!(f, "\\{x} : {ty} . {}", L(b, OPEN)),
            LTerm::App(a, b) => write!(f, "{} {}", L(a, APP), L(b, PREFIX)),
            LTerm::Grd(r, g) => write!(f, "Grd[{r}] {}", G(g, PREFIX)),
            LTerm::LetGrd(r, x, a, b) => write!(f, "let Grd[{r}] {x} = {} in {}", L(a, OPEN), L(b, OPEN)),
            LTerm::Unlin(g) => write!(f, "Unlin {}", G(g, PREFIX)),
            LTerm::LetUnitJ(g, b) => write!(f, "let unitJ = {} in {}", G(g, OPEN), L(b, OPEN)),
            LTerm::LetPairG(x, y, g, b) => write!(f, "let ({x},{y}) = {} in {}", G(g, OPEN), L(b, OPEN)),
        }
    }
}

impl fmt::Display for GTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        G(self, OPEN).fmt(f)
    }
}

impl fmt::Display for LTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        L(self, OPEN).fmt(f)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::G(t) => t.fmt(f),
            Term::L(l) => l.fmt(f),
        }
    }
}

impl fmt::Display for GEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @ {} : {}", self.name, self.grade, self.ty)
    }
}

impl fmt::Display for LEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {}", self.name, self.ty)
    }
}

fn comma_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, xs: &[T]) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Judgment::GS { gctx, term, ty } => {
                f.write_str("GS:")?;
                if !gctx.is_empty() {
                    f.write_str(" ")?;
                    comma_list(f, gctx)?;
                }
                write!(f, " |- {term} : {ty}")
            }
            Judgment::MS { gctx, lctx, term, ty } => {
                f.write_str("MS:")?;
                if !gctx.is_empty() {
                    f.write_str(" ")?;
                    comma_list(f, gctx)?;
                }
                f.write_str(" ;")?;
                if !lctx.is_empty() {
                    f.write_str(" ")?;
                    comma_list(f, lctx)?;
                }
                write!(f, " |- {term} : {ty}")
            }
        }
    }
}
