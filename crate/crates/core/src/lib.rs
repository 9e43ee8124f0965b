//! Workbench for perturbed Cauchy-difference functional equations.
//!
//! The crate parses two-variable functional equations of the form
//! "Cauchy difference = inhomogeneity", classifies them into a fixed shape
//! taxonomy, produces the exact parametric solution families for each shape,
//! and verifies those families three ways: symbolically (exact zero residual
//! over ℚ(i)), over finite models (exhaustive enumeration), and numerically
//! (regular real-line solutions and parameter fitting).

pub mod eqdsl;
pub mod exppoly;
pub mod numeric;
pub mod oracle;
pub mod scalar;
pub mod solver;

pub use eqdsl::{classify, parse, render, DomainClass, DomainSpec, Equation, GroupOp, ShapeId};
pub use scalar::Scalar;
