//! Equation DSL: parse, render, and classify functional equations.

mod ast;
mod classify;
mod parser;
mod render;

pub use ast::{
    Codomain, DomainClass, DomainSpec, DomainSpecError, Equation, Expr, FuncSym, GroupArg,
    GroupOp, Known, OpSym, ShapeId, Sign, Unknown, Var,
};
pub use classify::classify;
pub use parser::{parse, ParseError, ParseErrorKind};
pub use render::{render, render_expr};
