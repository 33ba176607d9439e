//! Shared abstract syntax and the value/state model.

pub mod ast;
mod display;
pub mod expand;
pub mod int;
pub mod state;
pub mod value;

pub use ast::{
    BinOp, BlockBody, Command, FloatLit, Formula, GuardedArm, Ident, LValue, LabelBlock, Program,
    Rel, Signature, Span, Target, Term, Type, VarDecl, VerificationCondition, HALT, START,
};
pub use expand::{expand_label_refs, expanded_assertion, ExpandError};
pub use int::Int;
pub use state::State;
pub use value::{IntArray, Value};
