//! Shape classification.
//!
//! An equation is brought to `lhs - rhs = 0` form as a multiset of signed
//! terms and compared against the canonical shape patterns, modulo
//! reordering of sum and product children and an overall sign flip. The two
//! mixed equations (exponential Cauchy difference with the inhomogeneity on
//! the other operation) are recognized as `OpenProblemMixed`.

use super::ast::*;

/// One normalized term: a sign and a sorted multiset of atomic factors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Term {
    sign: Sign,
    factors: Vec<Expr>,
}

/// Signed-term multiset of `lhs - rhs`, or `None` when some term is not a
/// flat product of atoms (such terms cannot occur in any shape).
fn signed_terms(eq: &Equation) -> Option<Vec<Term>> {
    let mut terms = Vec::new();
    for (side, flip) in [(&eq.lhs, false), (&eq.rhs, true)] {
        let side_terms: Vec<(Sign, &Expr)> = match side {
            Expr::Sum(ts) => ts.iter().map(|(s, e)| (*s, e)).collect(),
            other => vec![(Sign::Pos, other)],
        };
        for (mut sign, expr) in side_terms {
            if flip {
                sign = sign.flip();
            }
            let mut factors = match expr {
                Expr::Prod(fs) => {
                    if fs.iter().any(|f| matches!(f, Expr::Sum(_) | Expr::Prod(_))) {
                        return None;
                    }
                    fs.clone()
                }
                Expr::Sum(_) => return None,
                atom => vec![atom.clone()],
            };
            factors.sort();
            terms.push(Term { sign, factors });
        }
    }
    terms.sort();
    Some(terms)
}

fn flip_all(mut terms: Vec<Term>) -> Vec<Term> {
    for t in &mut terms {
        t.sign = t.sign.flip();
    }
    terms.sort();
    terms
}

/// Builds the canonical term multiset for a shape pattern.
fn pattern(lhs_terms: Vec<(Sign, Expr)>) -> Vec<Term> {
    let mut terms: Vec<Term> = lhs_terms
        .into_iter()
        .map(|(sign, e)| {
            let mut factors = match e {
                Expr::Prod(fs) => fs,
                atom => vec![atom],
            };
            factors.sort();
            Term { sign, factors }
        })
        .collect();
    terms.sort();
    terms
}

fn f_of(arg: GroupArg) -> Expr {
    Expr::app1(FuncSym::F, arg)
}

fn a_of(arg: GroupArg) -> Expr {
    Expr::app1(FuncSym::Alpha, arg)
}

fn joined(op: OpSym) -> GroupArg {
    GroupArg::Pair(Var::X, op, Var::Y)
}

const X: GroupArg = GroupArg::Single(Var::X);
const Y: GroupArg = GroupArg::Single(Var::Y);

/// Classifies a well-formed equation. Total: anything that matches no shape
/// is `Unrecognized`.
pub fn classify(eq: &Equation) -> ShapeId {
    let Some(terms) = signed_terms(eq) else {
        return ShapeId::Unrecognized;
    };
    let flipped = flip_all(terms.clone());

    let g = eq.domain.group_op.sym();
    let other = match g {
        OpSym::Plus => OpSym::Times,
        OpSym::Times => OpSym::Plus,
    };
    let embedded = eq.domain.class.embeds_in_field();

    // Additive-type Cauchy difference: f(x∘y) - f(x) - f(y).
    let add_diff = |rhs: Vec<Expr>| {
        let mut v = vec![
            (Sign::Pos, f_of(joined(g))),
            (Sign::Neg, f_of(X)),
            (Sign::Neg, f_of(Y)),
        ];
        v.extend(rhs.into_iter().map(|e| (Sign::Neg, e)));
        pattern(v)
    };
    // Exponential-type Cauchy difference: f(x∘y) - f(x)·f(y).
    let exp_diff = |rhs: Vec<Expr>| {
        let mut v = vec![
            (Sign::Pos, f_of(joined(g))),
            (Sign::Neg, Expr::Prod(vec![f_of(X), f_of(Y)])),
        ];
        v.extend(rhs.into_iter().map(|e| (Sign::Neg, e)));
        pattern(v)
    };

    let alpha_xy = Expr::Prod(vec![Expr::ScalarAlpha, Expr::Var(Var::X), Expr::Var(Var::Y)]);
    let alpha_fn_prod = Expr::Prod(vec![a_of(X), a_of(Y)]);
    let b_xy = Expr::App { sym: FuncSym::B, args: vec![X, Y] };

    // Candidates in taxonomy order; the first match wins (patterns are
    // mutually exclusive anyway).
    let mut candidates: Vec<(ShapeId, Vec<Term>)> = vec![
        (ShapeId::S1, add_diff(vec![b_xy])),
        (ShapeId::S6, add_diff(vec![alpha_fn_prod.clone()])),
        (ShapeId::S9, exp_diff(vec![alpha_fn_prod])),
    ];
    if embedded {
        let scalar_shape = match g {
            OpSym::Plus => ShapeId::S2,
            OpSym::Times => ShapeId::S3,
        };
        candidates.push((scalar_shape, add_diff(vec![alpha_xy])));
    }
    match g {
        OpSym::Times => {
            candidates.push((ShapeId::S4, add_diff(vec![a_of(joined(OpSym::Times))])));
            candidates.push((ShapeId::S7, exp_diff(vec![a_of(joined(OpSym::Times))])));
        }
        OpSym::Plus => {
            candidates.push((ShapeId::S8, exp_diff(vec![a_of(joined(OpSym::Plus))])));
            if embedded {
                candidates.push((ShapeId::S5, add_diff(vec![a_of(joined(OpSym::Times))])));
            }
        }
    }
    // Mixed open problems: exponential difference, inhomogeneity on the
    // other operation.
    candidates.push((ShapeId::OpenProblemMixed, exp_diff(vec![a_of(joined(other))])));

    for (shape, pat) in candidates {
        if terms == pat || flipped == pat {
            return shape;
        }
    }
    ShapeId::Unrecognized
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqdsl::parse;

    fn shape(text: &str, domain: DomainSpec) -> ShapeId {
        classify(&parse(text, domain).unwrap())
    }

    fn field_add() -> DomainSpec {
        DomainSpec::new(DomainClass::FieldAdditive, GroupOp::Additive, Codomain::GeneralField)
            .unwrap()
    }

    fn field_mul() -> DomainSpec {
        DomainSpec::new(
            DomainClass::FieldMultiplicativeNoZero,
            GroupOp::Multiplicative,
            Codomain::GeneralField,
        )
        .unwrap()
    }

    #[test]
    fn the_nine_shapes() {
        assert_eq!(shape("f(x+y)-f(x)-f(y)=B(x,y)", DomainSpec::real_line()), ShapeId::S1);
        assert_eq!(shape("f(x+y)-f(x)-f(y)=alpha*x*y", field_add()), ShapeId::S2);
        assert_eq!(shape("f(x*y)-f(x)-f(y)=alpha*x*y", field_mul()), ShapeId::S3);
        assert_eq!(shape("f(x*y)-f(x)-f(y)=a(x*y)", field_mul()), ShapeId::S4);
        assert_eq!(shape("f(x+y)-f(x)-f(y)=a(x*y)", field_add()), ShapeId::S5);
        assert_eq!(
            shape("f(x*y)-f(x)-f(y)=a(x)*a(y)", DomainSpec::group(GroupOp::Multiplicative)),
            ShapeId::S6
        );
        assert_eq!(shape("f(x*y)-f(x)*f(y)=a(x*y)", field_mul()), ShapeId::S7);
        assert_eq!(shape("f(x+y)-f(x)*f(y)=a(x+y)", field_add()), ShapeId::S8);
        assert_eq!(
            shape("f(x*y)-f(x)*f(y)=a(x)*a(y)", DomainSpec::group(GroupOp::Multiplicative)),
            ShapeId::S9
        );
    }

    #[test]
    fn open_problems_are_flagged() {
        assert_eq!(shape("f(x+y)-f(x)*f(y)=a(x*y)", field_add()), ShapeId::OpenProblemMixed);
        assert_eq!(shape("f(x*y)-f(x)*f(y)=a(x+y)", field_mul()), ShapeId::OpenProblemMixed);
    }

    #[test]
    fn scalar_shapes_need_field_embedding() {
        // On an abstract group, alpha*x*y has no meaning as a codomain
        // product of domain elements.
        assert_eq!(
            shape("f(x+y)-f(x)-f(y)=alpha*x*y", DomainSpec::group(GroupOp::Additive)),
            ShapeId::Unrecognized
        );
    }

    #[test]
    fn sign_normalization_and_rearrangement() {
        // Same identity written with sides swapped and terms moved around.
        assert_eq!(shape("a(x)*a(y)=f(x+y)-f(x)-f(y)", DomainSpec::real_line()), ShapeId::S6);
        assert_eq!(shape("f(x+y)=f(x)+f(y)+a(x)*a(y)", DomainSpec::real_line()), ShapeId::S6);
        assert_eq!(
            shape("f(x)+f(y)-f(x+y)+a(x)*a(y)=0*x", DomainSpec::real_line()),
            ShapeId::Unrecognized,
        );
        assert_eq!(shape("f(x)*f(y)+a(x)*a(y)=f(x+y)", DomainSpec::real_line()), ShapeId::S9);
    }

    #[test]
    fn product_reordering_is_invisible() {
        assert_eq!(shape("f(x+y)-f(x)-f(y)=y*alpha*x", field_add()), ShapeId::S2);
        assert_eq!(shape("f(x+y)-f(x)-f(y)=a(y)*a(x)", DomainSpec::real_line()), ShapeId::S6);
    }

    #[test]
    fn junk_is_total_unrecognized() {
        assert_eq!(shape("f(x+y)=a(x)*a(y)", DomainSpec::real_line()), ShapeId::Unrecognized);
        assert_eq!(shape("f(x+y)-f(x)-f(y)=2*x*y", field_add()), ShapeId::Unrecognized);
        assert_eq!(shape("x=y", DomainSpec::real_line()), ShapeId::Unrecognized);
        assert_eq!(
            shape("f(x+y)-f(x)-f(y)=alpha*(x+y)", field_add()),
            ShapeId::Unrecognized
        );
    }
}
