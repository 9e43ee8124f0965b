//! Equation residuals in the doubled symbol algebra.
//!
//! Substituting candidate forms for the unknowns turns an equation into a
//! polynomial identity in the doubled (x-copy, y-copy) symbol set; the
//! identity holds for every instantiation of the formal symbols exactly
//! when that polynomial is zero. This is the converse direction of each
//! result, made mechanical.

use super::poly::{Arity, Atom, ExpPoly, PolyError};
use super::symbols::VarCopy;
use crate::eqdsl::{classify, Equation, ShapeId};
use crate::scalar::Scalar;

/// Residual `lhs - rhs` of an equation under an assignment, fully expanded
/// in the doubled symbol set. Zero iff the assignment solves the equation
/// identically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residual(pub ExpPoly);

impl Residual {
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// Candidate forms for the unknowns, as one-variable polynomials.
#[derive(Debug, Clone)]
pub struct Assignment {
    pub f: Option<ExpPoly>,
    pub alpha: Option<ExpPoly>,
}

impl Assignment {
    pub fn f_only(f: ExpPoly) -> Assignment {
        Assignment { f: Some(f), alpha: None }
    }

    pub fn pair(f: ExpPoly, alpha: ExpPoly) -> Assignment {
        Assignment { f: Some(f), alpha: Some(alpha) }
    }
}

/// Values for the given symbols of an equation.
#[derive(Debug, Clone, Default)]
pub struct KnownValues {
    /// `B(x,y)` as a two-variable polynomial whose monomials are biadditive
    /// (each the product of one x-atom and one y-atom, or a cross atom).
    pub b_form: Option<ExpPoly>,
    /// The scalar constant `alpha`.
    pub scalar_alpha: Option<Scalar>,
}

impl KnownValues {
    pub fn b(b_form: ExpPoly) -> KnownValues {
        KnownValues { b_form: Some(b_form), scalar_alpha: None }
    }

    pub fn alpha(value: Scalar) -> KnownValues {
        KnownValues { b_form: None, scalar_alpha: Some(value) }
    }
}

/// Computes the residual of `eq` under `assign`; the equation's shape
/// decides how each side expands.
pub fn residual(
    eq: &Equation,
    assign: &Assignment,
    knowns: &KnownValues,
) -> Result<Residual, PolyError> {
    residual_for_shape(classify(eq), assign, knowns)
}

/// Same as [`residual`] for a pre-classified shape; the shape alone
/// determines how both sides expand.
pub fn residual_for_shape(
    shape: ShapeId,
    assign: &Assignment,
    knowns: &KnownValues,
) -> Result<Residual, PolyError> {
    let f = assign.f.as_ref().ok_or(PolyError::UnassignedUnknown("f"))?;
    let table = f.table().clone();

    let alpha = || assign.alpha.as_ref().ok_or(PolyError::UnassignedUnknown("alpha"));
    let fx = f.inject(VarCopy::X)?;
    let fy = f.inject(VarCopy::Y)?;
    let f_at_prod = f.expand_on_product()?;

    // Additive-type difference f(x∘y) - f(x) - f(y), or exponential-type
    // f(x∘y) - f(x)·f(y).
    let lhs_additive = || f_at_prod.sub(&fx)?.sub(&fy);
    let lhs_exponential = || f_at_prod.sub(&fx.mul(&fy)?);

    let scalar_alpha =
        || knowns.scalar_alpha.clone().ok_or(PolyError::MissingKnown("alpha"));

    let (lhs, rhs) = match shape {
        ShapeId::S1 => {
            let b = knowns.b_form.as_ref().ok_or(PolyError::MissingKnown("B"))?;
            if b.table() != &table {
                return Err(PolyError::TableMismatch);
            }
            if b.arity() != Arity::Two {
                return Err(PolyError::ArityMismatch { expected: Arity::Two });
            }
            (lhs_additive()?, b.clone())
        }
        ShapeId::S2 => {
            let e = table.embedding_additive().ok_or(PolyError::NotRepresentable(
                "no additive embedding symbol declared for the domain variable",
            ))?;
            let ex = ExpPoly::atom(&table, Arity::Two, Atom::Add(e, VarCopy::X));
            let ey = ExpPoly::atom(&table, Arity::Two, Atom::Add(e, VarCopy::Y));
            (lhs_additive()?, ex.mul(&ey)?.scale(&scalar_alpha()?))
        }
        ShapeId::S3 => {
            let e = table.embedding_exponential().ok_or(PolyError::NotRepresentable(
                "no exponential embedding symbol declared for the domain variable",
            ))?;
            let ex = ExpPoly::atom(&table, Arity::Two, Atom::Exp(e, VarCopy::X));
            let ey = ExpPoly::atom(&table, Arity::Two, Atom::Exp(e, VarCopy::Y));
            (lhs_additive()?, ex.mul(&ey)?.scale(&scalar_alpha()?))
        }
        ShapeId::S4 => (lhs_additive()?, alpha()?.expand_on_product()?),
        ShapeId::S5 => (lhs_additive()?, alpha()?.compose_with_field_product()?),
        ShapeId::S6 => {
            let a = alpha()?;
            (lhs_additive()?, a.inject(VarCopy::X)?.mul(&a.inject(VarCopy::Y)?)?)
        }
        ShapeId::S7 | ShapeId::S8 => (lhs_exponential()?, alpha()?.expand_on_product()?),
        ShapeId::S9 => {
            let a = alpha()?;
            (lhs_exponential()?, a.inject(VarCopy::X)?.mul(&a.inject(VarCopy::Y)?)?)
        }
        other => return Err(PolyError::UnsupportedShape(other)),
    };
    Ok(Residual(lhs.sub(&rhs)?))
}
