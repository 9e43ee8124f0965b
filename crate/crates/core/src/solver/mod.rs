//! Solution families per shape, constraint solving, realization, and
//! membership testing.

mod admissible;
mod constraints;
mod family;
mod membership;
mod sampling;

pub use admissible::real_admissible;
pub use constraints::{
    solve_constraints, Branch, BranchExpr, ConstraintError, ConstraintSystem, ParamName,
    ParamPoly, SolvedSet,
};
pub use family::{
    canonical_equation, realize, solve_shape, Param, ParamKind, ParamRole, Realization,
    SolutionFamily, SolverError, TableSpec, Template, TemplateAtom, TemplateTerm,
};
pub use membership::check_membership;
pub use sampling::sample_params;
