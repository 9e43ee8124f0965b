//! Exact symbolic algebra of exponential polynomials.

mod indep;
mod poly;
mod residual;
mod symbols;

pub use indep::linearly_independent;
pub use poly::{Arity, Atom, ExpPoly, Monomial, PolyError, MAX_DEGREE};
pub use residual::{residual, residual_for_shape, Assignment, KnownValues, Residual};
pub use symbols::{AddId, BiaddId, ExpId, SymbolTable, SymbolTableBuilder, VarCopy};
