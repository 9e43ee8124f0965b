//! Finite-model oracle: exhaustive enumeration, cocycle checks, character
//! models, and exact instantiation of formal solutions.

mod characters;
mod enumerate;
mod instantiate;
mod model;

pub use characters::{
    dstar_absorbing_residual, dstar_concrete_residual_max, CharacterModel, DStarPoint,
    CHARACTER_TOLERANCE,
};
pub use num_complex::Complex64;
pub use enumerate::{
    enumerate_additive, enumerate_solutions, log_maps, match_family, verify_solution, Solution,
};
pub use instantiate::SymbolDraws;
pub use model::{
    cocycle_check, DomainModel, FiniteGroup, FunctionTable, OracleError, PairTable, PrimeField,
    ShapeModel, DEFAULT_MAX_SPACE, GROUP_ORDER_LIMIT,
};
