//! Proof kernel for mixed graded/linear logic.
pub mod semiring;
pub mod syntax;
pub mod print;
pub mod deriv;
pub mod sc;
pub mod nd;
pub mod parser;
pub mod infer;
pub mod derived;
pub mod gen;
pub mod translate;
pub mod cut_elim;
pub mod eq_theory;
pub mod cli;

pub use semiring::{Grade, GradeVec, Semiring, SemiringError, SemiringId};
pub use syntax::*;
