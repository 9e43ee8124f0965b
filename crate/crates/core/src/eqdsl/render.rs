//! Canonical textual form of equations.
//!
//! `parse(render(eq))` reproduces `eq` structurally, and rendering a parsed
//! input once more yields the same string, so the canonical form is a fixed
//! point of `render ∘ parse`.

use super::ast::*;
use std::fmt::Write;

/// Renders one expression. Sums separate terms with ` + ` / ` - `; products
/// use a tight `*`; parenthesized subexpressions appear only where the
/// grammar requires them.
pub fn render_expr(expr: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, expr);
    out
}

/// Canonical textual form `lhs = rhs`.
pub fn render(eq: &Equation) -> String {
    format!("{} = {}", render_expr(&eq.lhs), render_expr(&eq.rhs))
}

fn write_expr(out: &mut String, expr: &Expr) {
    match expr {
        Expr::Sum(terms) => {
            debug_assert!(
                matches!(terms.first(), Some((Sign::Pos, _))),
                "canonical sums start with a positive term"
            );
            for (idx, (sign, term)) in terms.iter().enumerate() {
                if idx > 0 {
                    out.push_str(match sign {
                        Sign::Pos => " + ",
                        Sign::Neg => " - ",
                    });
                }
                write_factor_or_atom(out, term, false);
            }
        }
        other => write_factor_or_atom(out, other, false),
    }
}

fn write_factor_or_atom(out: &mut String, expr: &Expr, inside_prod: bool) {
    match expr {
        Expr::Var(v) => {
            let _ = write!(out, "{v}");
        }
        Expr::Num(r) => {
            let _ = write!(out, "{r}");
        }
        Expr::ScalarAlpha => out.push_str("alpha"),
        Expr::App { sym, args } => {
            let _ = write!(out, "{sym}(");
            for (idx, arg) in args.iter().enumerate() {
                if idx > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{arg}");
            }
            out.push(')');
        }
        Expr::Prod(factors) => {
            for (idx, factor) in factors.iter().enumerate() {
                if idx > 0 {
                    out.push('*');
                }
                write_factor_or_atom(out, factor, true);
            }
        }
        Expr::Sum(_) => {
            // A sum nested under a product needs parentheses; a sum nested
            // directly under a sum cannot occur (flattened at parse time).
            debug_assert!(inside_prod, "nested sum outside a product");
            out.push('(');
            write_expr(out, expr);
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqdsl::parse;

    fn canon(text: &str, domain: DomainSpec) -> String {
        render(&parse(text, domain).unwrap())
    }

    #[test]
    fn canonical_strings() {
        assert_eq!(
            canon("f(x+y) - f(x) - f(y) = alpha * x * y", DomainSpec::real_line()),
            "f(x+y) - f(x) - f(y) = alpha*x*y"
        );
        assert_eq!(
            canon("f(x*y)-f(x)-f(y)=a(x)*a(y)", DomainSpec::group(GroupOp::Multiplicative)),
            "f(x*y) - f(x) - f(y) = a(x)*a(y)"
        );
    }

    #[test]
    fn alpha_function_renders_as_a() {
        assert_eq!(
            canon("f(x+y)-f(x)-f(y)=alpha(x)*alpha(y)", DomainSpec::real_line()),
            "f(x+y) - f(x) - f(y) = a(x)*a(y)"
        );
    }

    #[test]
    fn render_parse_is_identity_on_canonical_forms() {
        for (text, dom) in [
            ("f(x+y) - f(x) - f(y) = B(x,y)", DomainSpec::real_line()),
            ("f(x+y) - f(x) - f(y) = alpha*x*y", DomainSpec::real_line()),
            ("f(x*y) - f(x)*f(y) = a(x)*a(y)", DomainSpec::group(GroupOp::Multiplicative)),
            ("f(x+y) - f(x) - f(y) = 1/2*x*y", DomainSpec::real_line()),
        ] {
            let eq = parse(text, dom).unwrap();
            assert_eq!(render(&eq), text);
            let again = parse(&render(&eq), dom).unwrap();
            assert_eq!(again, eq);
        }
    }

    #[test]
    fn sums_inside_products_are_parenthesized() {
        let dom = DomainSpec::real_line();
        let eq = parse("f(x+y)-f(x)-f(y)=alpha*(x+y)", dom).unwrap();
        let text = render(&eq);
        assert_eq!(text, "f(x+y) - f(x) - f(y) = alpha*(x + y)");
        assert_eq!(parse(&text, dom).unwrap(), eq);
    }
}
