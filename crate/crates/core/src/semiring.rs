//! Preordered semirings and grade vectors.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemiringError {
    #[error("grade {grade} does not belong to semiring {semiring}")]
    InstanceMismatch { semiring: SemiringId, grade: String },
    #[error("arity error: expected length {expected}, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("invalid grade literal `{literal}` for semiring {semiring}")]
    BadLiteral { semiring: SemiringId, literal: String },
    #[error("unknown semiring `{0}`")]
    UnknownSemiring(String),
}

/// A preordered semiring over a fixed carrier.
pub trait Semiring {
    type Elem: Clone + Eq + Hash + fmt::Debug;

    fn zero() -> Self::Elem;
    fn one() -> Self::Elem;
    fn add(a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn leq(a: &Self::Elem, b: &Self::Elem) -> bool;
    fn parse(lit: &str) -> Option<Self::Elem>;
    fn render(a: &Self::Elem) -> String;
}

/// Naturals with the discrete order.
pub struct NatExact;
/// Naturals with the usual order.
pub struct NatLeq;
/// {0, 1, w}, saturating at w.
pub struct NoneOneTons;
/// Two security levels.
pub struct Security;
/// Nonnegative rationals with the usual order.
pub struct Sensitivity;

fn parse_nat(lit: &str) -> Option<BigUint> {
    if lit.is_empty() || !lit.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    lit.parse().ok()
}

impl Semiring for NatExact {
    type Elem = BigUint;
    fn zero() -> BigUint {
        BigUint::zero()
    }
    fn one() -> BigUint {
        BigUint::one()
    }
    fn add(a: &BigUint, b: &BigUint) -> BigUint {
        a + b
    }
    fn mul(a: &BigUint, b: &BigUint) -> BigUint {
        a * b
    }
    fn leq(a: &BigUint, b: &BigUint) -> bool {
        a == b
    }
    fn parse(lit: &str) -> Option<BigUint> {
        parse_nat(lit)
    }
    fn render(a: &BigUint) -> String {
        a.to_string()
    }
}

impl Semiring for NatLeq {
    type Elem = BigUint;
    fn zero() -> BigUint {
        BigUint::zero()
    }
    fn one() -> BigUint {
        BigUint::one()
    }
    fn add(a: &BigUint, b: &BigUint) -> BigUint {
        a + b
    }
    fn mul(a: &BigUint, b: &BigUint) -> BigUint {
        a * b
    }
    fn leq(a: &BigUint, b: &BigUint) -> bool {
        a <= b
    }
    fn parse(lit: &str) -> Option<BigUint> {
        parse_nat(lit)
    }
    fn render(a: &BigUint) -> String {
        a.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Usage {
    Zero,
    One,
    Many,
}

impl Semiring for NoneOneTons {
    type Elem = Usage;
    fn zero() -> Usage {
        Usage::Zero
    }
    fn one() -> Usage {
        Usage::One
    }
    fn add(a: &Usage, b: &Usage) -> Usage {
        match (a, b) {
            (Usage::Zero, x) | (x, Usage::Zero) => *x,
            _ => Usage::Many,
        }
    }
    fn mul(a: &Usage, b: &Usage) -> Usage {
        match (a, b) {
            (Usage::Zero, _) | (_, Usage::Zero) => Usage::Zero,
            (Usage::One, x) | (x, Usage::One) => *x,
            _ => Usage::Many,
        }
    }
    fn leq(a: &Usage, b: &Usage) -> bool {
        a == b || *b == Usage::Many
    }
    fn parse(lit: &str) -> Option<Usage> {
        match lit {
            "0" => Some(Usage::Zero),
            "1" => Some(Usage::One),
            "w" => Some(Usage::Many),
            _ => None,
        }
    }
    fn render(a: &Usage) -> String {
        match a {
            Usage::Zero => "0",
            Usage::One => "1",
            Usage::Many => "w",
        }
        .to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Lo,
    Hi,
}

// Multiplication has unit Lo and addition has unit Hi, so 0 = Hi and 1 = Lo.
const SEC_MUL: [[Level; 2]; 2] = [[Level::Lo, Level::Hi], [Level::Hi, Level::Hi]];
const SEC_ADD: [[Level; 2]; 2] = [[Level::Lo, Level::Lo], [Level::Lo, Level::Hi]];

impl Semiring for Security {
    type Elem = Level;
    fn zero() -> Level {
        Level::Hi
    }
    fn one() -> Level {
        Level::Lo
    }
    fn add(a: &Level, b: &Level) -> Level {
        SEC_ADD[*a as usize][*b as usize]
    }
    fn mul(a: &Level, b: &Level) -> Level {
        SEC_MUL[*a as usize][*b as usize]
    }
    fn leq(a: &Level, b: &Level) -> bool {
        a <= b
    }
    fn parse(lit: &str) -> Option<Level> {
        match lit {
            "Lo" => Some(Level::Lo),
            "Hi" => Some(Level::Hi),
            _ => None,
        }
    }
    fn render(a: &Level) -> String {
        match a {
            Level::Lo => "Lo",
            Level::Hi => "Hi",
        }
        .to_string()
    }
}

impl Semiring for Sensitivity {
    type Elem = BigRational;
    fn zero() -> BigRational {
        BigRational::zero()
    }
    fn one() -> BigRational {
        BigRational::one()
    }
    fn add(a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn mul(a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn leq(a: &BigRational, b: &BigRational) -> bool {
        a <= b
    }
    fn parse(lit: &str) -> Option<BigRational> {
        let (num, den) = match lit.split_once('/') {
            Some((n, d)) => (parse_nat(n)?, parse_nat(d)?),
            None => (parse_nat(lit)?, BigUint::one()),
        };
        if den.is_zero() {
            return None;
        }
        Some(BigRational::new(num.into(), den.into()))
    }
    fn render(a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
}

/// Selects one of the built-in instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SemiringId {
    NatExact,
    NatLeq,
    N01w,
    Sec,
    Rat,
}

impl SemiringId {
    pub const ALL: [SemiringId; 5] = [
        SemiringId::NatExact,
        SemiringId::NatLeq,
        SemiringId::N01w,
        SemiringId::Sec,
        SemiringId::Rat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SemiringId::NatExact => "nat-exact",
            SemiringId::NatLeq => "nat-leq",
            SemiringId::N01w => "n01w",
            SemiringId::Sec => "sec",
            SemiringId::Rat => "rat",
        }
    }

    pub fn from_name(name: &str) -> Result<SemiringId, SemiringError> {
        SemiringId::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| SemiringError::UnknownSemiring(name.to_string()))
    }
}

impl fmt::Display for SemiringId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A grade of some built-in instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Grade {
    Nat(BigUint),
    Use(Usage),
    Sec(Level),
    Rat(BigRational),
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grade::Nat(n) => write!(f, "{}", NatLeq::render(n)),
            Grade::Use(u) => f.write_str(&NoneOneTons::render(u)),
            Grade::Sec(l) => f.write_str(&Security::render(l)),
            Grade::Rat(q) => f.write_str(&Sensitivity::render(q)),
        }
    }
}

impl Grade {
    pub fn nat(n: u64) -> Grade {
        Grade::Nat(BigUint::from(n))
    }
}

pub type GradeVec = Vec<Grade>;

macro_rules! dispatch {
    ($self:expr, $a:expr, $b:expr, $op:ident, $nat:expr, $use_:expr, $sec:expr, $rat:expr) => {
        match ($self, $a, $b) {
            (SemiringId::NatExact, Grade::Nat(x), Grade::Nat(y)) => Ok($nat(NatExact::$op(x, y))),
            (SemiringId::NatLeq, Grade::Nat(x), Grade::Nat(y)) => Ok($nat(NatLeq::$op(x, y))),
            (SemiringId::N01w, Grade::Use(x), Grade::Use(y)) => Ok($use_(NoneOneTons::$op(x, y))),
            (SemiringId::Sec, Grade::Sec(x), Grade::Sec(y)) => Ok($sec(Security::$op(x, y))),
            (SemiringId::Rat, Grade::Rat(x), Grade::Rat(y)) => Ok($rat(Sensitivity::$op(x, y))),
            (s, x, y) => Err(s.mismatch(if s.owns(x) { y } else { x })),
        }
    };
}

fn same<T>(v: T) -> T {
    v
}

impl SemiringId {
    fn owns(self, g: &Grade) -> bool {
        match (self, g) {
            (SemiringId::NatExact | SemiringId::NatLeq, Grade::Nat(_)) => true,
            (SemiringId::N01w, Grade::Use(_)) => true,
            (SemiringId::Sec, Grade::Sec(_)) => true,
            (SemiringId::Rat, Grade::Rat(q)) => !q.is_negative(),
            _ => false,
        }
    }

    fn mismatch(self, g: &Grade) -> SemiringError {
        SemiringError::InstanceMismatch { semiring: self, grade: g.to_string() }
    }

    pub fn check(self, g: &Grade) -> Result<(), SemiringError> {
        if self.owns(g) {
            Ok(())
        } else {
            Err(self.mismatch(g))
        }
    }

    pub fn zero(self) -> Grade {
        match self {
            SemiringId::NatExact | SemiringId::NatLeq => Grade::Nat(BigUint::zero()),
            SemiringId::N01w => Grade::Use(Usage::Zero),
            SemiringId::Sec => Grade::Sec(Security::zero()),
            SemiringId::Rat => Grade::Rat(BigRational::zero()),
        }
    }

    pub fn one(self) -> Grade {
        match self {
            SemiringId::NatExact | SemiringId::NatLeq => Grade::Nat(BigUint::one()),
            SemiringId::N01w => Grade::Use(Usage::One),
            SemiringId::Sec => Grade::Sec(Security::one()),
            SemiringId::Rat => Grade::Rat(BigRational::one()),
        }
    }

    pub fn add(self, a: &Grade, b: &Grade) -> Result<Grade, SemiringError> {
        dispatch!(self, a, b, add, Grade::Nat, Grade::Use, Grade::Sec, Grade::Rat)
    }

    pub fn mul(self, a: &Grade, b: &Grade) -> Result<Grade, SemiringError> {
        dispatch!(self, a, b, mul, Grade::Nat, Grade::Use, Grade::Sec, Grade::Rat)
    }

    pub fn leq(self, a: &Grade, b: &Grade) -> Result<bool, SemiringError> {
        dispatch!(self, a, b, leq, same, same, same, same)
    }

    pub fn parse_grade(self, lit: &str) -> Result<Grade, SemiringError> {
        let g = match self {
            SemiringId::NatExact => NatExact::parse(lit).map(Grade::Nat),
            SemiringId::NatLeq => NatLeq::parse(lit).map(Grade::Nat),
            SemiringId::N01w => NoneOneTons::parse(lit).map(Grade::Use),
            SemiringId::Sec => Security::parse(lit).map(Grade::Sec),
            SemiringId::Rat => Sensitivity::parse(lit).map(Grade::Rat),
        };
        g.ok_or_else(|| SemiringError::BadLiteral { semiring: self, literal: lit.to_string() })
    }

    pub fn vec_add(self, a: &[Grade], b: &[Grade]) -> Result<GradeVec, SemiringError> {
        if a.len() != b.len() {
            return Err(SemiringError::Arity { expected: a.len(), found: b.len() });
        }
        a.iter().zip(b).map(|(x, y)| self.add(x, y)).collect()
    }

    pub fn vec_scale(self, r: &Grade, v: &[Grade]) -> Result<GradeVec, SemiringError> {
        v.iter().map(|x| self.mul(r, x)).collect()
    }

    pub fn vec_leq(self, a: &[Grade], b: &[Grade]) -> Result<bool, SemiringError> {
        if a.len() != b.len() {
            return Err(SemiringError::Arity { expected: a.len(), found: b.len() });
        }
        for (x, y) in a.iter().zip(b) {
            if !self.leq(x, y)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The multicut product: the sum over k of `delta[k] * delta2`.
    pub fn boxast(self, delta: &[Grade], delta2: &[Grade], n: usize) -> Result<GradeVec, SemiringError> {
        if delta.len() != n {
            return Err(SemiringError::Arity { expected: n, found: delta.len() });
        }
        let mut acc = vec![self.zero(); delta2.len()];
        for r in delta {
            let row = self.vec_scale(r, delta2)?;
            acc = self.vec_add(&acc, &row)?;
        }
        Ok(acc)
    }
}
