//! Recursive-descent parser for the equation grammar.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! equation := expr "=" expr ;
//! expr     := term { ("+"|"-") term } ;
//! term     := factor { "*" factor } ;
//! factor   := apply | var | number | ident | "(" expr ")" ;
//! apply    := ident "(" garg { "," garg } ")" ;
//! garg     := var [ ("+"|"*") var ] ;
//! var      := "x" | "y" ;   ident := letter { letter } ;
//! number   := integer [ "/" integer ] ;
//! ```
//!
//! Positions in errors are 1-based character offsets. Nested sums and
//! products are flattened while parsing (with sign distribution over
//! parenthesized sums), so structurally equal inputs produce equal ASTs.

use super::ast::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeSet;
use std::fmt;

const MAX_DEPTH: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken { expected: &'static str, found: String },
    UnexpectedEnd { expected: &'static str },
    UnknownFunction(String),
    UnknownIdentifier(String),
    Arity { sym: FuncSym, expected: usize, got: usize },
    MixedGroupOps,
    OpUnavailable { domain: &'static str },
    ZeroDenominator,
    TooDeep,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based character offset.
    pub pos: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ParseErrorKind::*;
        match &self.kind {
            UnexpectedChar(c) => write!(f, "unexpected character `{c}` at offset {}", self.pos),
            UnexpectedToken { expected, found } => {
                write!(f, "expected {expected}, found `{found}` at offset {}", self.pos)
            }
            UnexpectedEnd { expected } => {
                write!(f, "expected {expected} at offset {} (unexpected end of input)", self.pos)
            }
            UnknownFunction(name) => {
                write!(f, "unknown function symbol `{name}` at offset {} (expected f, a, alpha or B)", self.pos)
            }
            UnknownIdentifier(name) => {
                write!(f, "unknown identifier `{name}` at offset {} (only `alpha` may appear bare)", self.pos)
            }
            Arity { sym, expected, got } => {
                write!(f, "{sym} takes {expected} argument(s), got {got} at offset {}", self.pos)
            }
            MixedGroupOps => {
                write!(f, "mixed group operations inside one function application at offset {}", self.pos)
            }
            OpUnavailable { domain } => write!(
                f,
                "operation at offset {} is not available on domain `{domain}`",
                self.pos
            ),
            ZeroDenominator => write!(f, "zero denominator at offset {}", self.pos),
            TooDeep => write!(f, "expression nested deeper than {MAX_DEPTH} at offset {}", self.pos),
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Comma,
    Eq,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => s.clone(),
            Tok::Int(n) => n.to_string(),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Star => "*".into(),
            Tok::Slash => "/".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::Comma => ",".into(),
            Tok::Eq => "=".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        match c {
            _ if c.is_whitespace() => i += 1,
            '+' => { toks.push((pos, Tok::Plus)); i += 1; }
            '-' => { toks.push((pos, Tok::Minus)); i += 1; }
            '*' => { toks.push((pos, Tok::Star)); i += 1; }
            '/' => { toks.push((pos, Tok::Slash)); i += 1; }
            '(' => { toks.push((pos, Tok::LParen)); i += 1; }
            ')' => { toks.push((pos, Tok::RParen)); i += 1; }
            ',' => { toks.push((pos, Tok::Comma)); i += 1; }
            '=' => { toks.push((pos, Tok::Eq)); i += 1; }
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                toks.push((start + 1, Tok::Int(digits.parse().expect("digits"))));
            }
            _ if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphabetic() {
                    i += 1;
                }
                toks.push((start + 1, Tok::Ident(chars[start..i].iter().collect())));
            }
            _ => return Err(ParseError { pos, kind: ParseErrorKind::UnexpectedChar(c) }),
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    cursor: usize,
    end_pos: usize,
    domain: &'a DomainSpec,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.cursor).map(|(_, t)| t)
    }

    fn bump(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.cursor).cloned();
        if t.is_some() {
            self.cursor += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, expected: &'static str) -> Result<usize, ParseError> {
        match self.bump() {
            Some((p, t)) if &t == want => Ok(p),
            Some((p, t)) => Err(ParseError {
                pos: p,
                kind: ParseErrorKind::UnexpectedToken { expected, found: t.describe() },
            }),
            None => Err(ParseError {
                pos: self.end_pos,
                kind: ParseErrorKind::UnexpectedEnd { expected },
            }),
        }
    }

    fn err_here(&self, expected: &'static str) -> ParseError {
        match self.toks.get(self.cursor) {
            Some((p, t)) => ParseError {
                pos: *p,
                kind: ParseErrorKind::UnexpectedToken { expected, found: t.describe() },
            },
            None => ParseError {
                pos: self.end_pos,
                kind: ParseErrorKind::UnexpectedEnd { expected },
            },
        }
    }

    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms: Vec<(Sign, Expr)> = Vec::new();
        let first = self.parse_term()?;
        push_term(&mut terms, Sign::Pos, first);
        loop {
            let sign = match self.peek() {
                Some(Tok::Plus) => Sign::Pos,
                Some(Tok::Minus) => Sign::Neg,
                _ => break,
            };
            self.bump();
            let term = self.parse_term()?;
            push_term(&mut terms, sign, term);
        }
        if terms.len() == 1 && terms[0].0 == Sign::Pos {
            Ok(terms.pop_unchecked())
        } else {
            Ok(Expr::Sum(terms))
        }
    }

    fn parse_term(&mut self) -> Result<Expr, ParseError> {
        let mut factors: Vec<Expr> = Vec::new();
        push_factor(&mut factors, self.parse_factor()?);
        while matches!(self.peek(), Some(Tok::Star)) {
            self.bump();
            push_factor(&mut factors, self.parse_factor()?);
        }
        if factors.len() == 1 {
            Ok(factors.pop().expect("nonempty"))
        } else {
            Ok(Expr::Prod(factors))
        }
    }

    fn parse_factor(&mut self) -> Result<Expr, ParseError> {
        match self.bump() {
            Some((pos, Tok::LParen)) => {
                self.depth += 1;
                if self.depth > MAX_DEPTH {
                    return Err(ParseError { pos, kind: ParseErrorKind::TooDeep });
                }
                let inner = self.parse_expr()?;
                self.expect(&Tok::RParen, "`)`")?;
                self.depth -= 1;
                Ok(inner)
            }
            Some((pos, Tok::Int(numer))) => {
                if matches!(self.peek(), Some(Tok::Slash)) {
                    self.bump();
                    match self.bump() {
                        Some((dpos, Tok::Int(denom))) => {
                            if denom.is_zero() {
                                return Err(ParseError {
                                    pos: dpos,
                                    kind: ParseErrorKind::ZeroDenominator,
                                });
                            }
                            Ok(Expr::Num(BigRational::new(numer, denom)))
                        }
                        Some((p, t)) => Err(ParseError {
                            pos: p,
                            kind: ParseErrorKind::UnexpectedToken {
                                expected: "integer denominator",
                                found: t.describe(),
                            },
                        }),
                        None => Err(ParseError {
                            pos: self.end_pos,
                            kind: ParseErrorKind::UnexpectedEnd { expected: "integer denominator" },
                        }),
                    }
                } else {
                    let _ = pos;
                    Ok(Expr::Num(BigRational::from_integer(numer)))
                }
            }
            Some((pos, Tok::Ident(name))) => {
                if matches!(self.peek(), Some(Tok::LParen)) {
                    self.parse_apply(pos, &name)
                } else {
                    match name.as_str() {
                        "x" => Ok(Expr::Var(Var::X)),
                        "y" => Ok(Expr::Var(Var::Y)),
                        "alpha" => Ok(Expr::ScalarAlpha),
                        _ => Err(ParseError {
                            pos,
                            kind: ParseErrorKind::UnknownIdentifier(name),
                        }),
                    }
                }
            }
            Some((p, t)) => Err(ParseError {
                pos: p,
                kind: ParseErrorKind::UnexpectedToken {
                    expected: "a factor",
                    found: t.describe(),
                },
            }),
            None => Err(ParseError {
                pos: self.end_pos,
                kind: ParseErrorKind::UnexpectedEnd { expected: "a factor" },
            }),
        }
    }

    fn parse_apply(&mut self, ident_pos: usize, name: &str) -> Result<Expr, ParseError> {
        let sym = match name {
            "f" => FuncSym::F,
            "a" | "alpha" => FuncSym::Alpha,
            "B" => FuncSym::B,
            _ => {
                return Err(ParseError {
                    pos: ident_pos,
                    kind: ParseErrorKind::UnknownFunction(name.to_string()),
                })
            }
        };
        self.expect(&Tok::LParen, "`(`")?;
        let mut args = vec![self.parse_garg()?];
        while matches!(self.peek(), Some(Tok::Comma)) {
            self.bump();
            args.push(self.parse_garg()?);
        }
        self.expect(&Tok::RParen, "`)` or `,`")?;

        let expected = if sym == FuncSym::B { 2 } else { 1 };
        if args.len() != expected {
            return Err(ParseError {
                pos: ident_pos,
                kind: ParseErrorKind::Arity { sym, expected, got: args.len() },
            });
        }
        let ops: BTreeSet<OpSym> = args.iter().filter_map(GroupArg::op).collect();
        if ops.len() > 1 {
            return Err(ParseError { pos: ident_pos, kind: ParseErrorKind::MixedGroupOps });
        }
        if let Some(op) = ops.into_iter().next() {
            let group_sym = self.domain.group_op.sym();
            if op != group_sym && !self.domain.class.has_both_field_ops() {
                return Err(ParseError {
                    pos: ident_pos,
                    kind: ParseErrorKind::OpUnavailable { domain: self.domain.class.name() },
                });
            }
        }
        Ok(Expr::App { sym, args })
    }

    fn parse_garg(&mut self) -> Result<GroupArg, ParseError> {
        let first = self.parse_garg_var()?;
        let op = match self.peek() {
            Some(Tok::Plus) => Some(OpSym::Plus),
            Some(Tok::Star) => Some(OpSym::Times),
            _ => None,
        };
        match op {
            None => Ok(GroupArg::Single(first)),
            Some(op) => {
                self.bump();
                let second = self.parse_garg_var()?;
                Ok(GroupArg::Pair(first, op, second))
            }
        }
    }

    fn parse_garg_var(&mut self) -> Result<Var, ParseError> {
        match self.bump() {
            Some((_, Tok::Ident(s))) if s == "x" => Ok(Var::X),
            Some((_, Tok::Ident(s))) if s == "y" => Ok(Var::Y),
            Some((p, t)) => Err(ParseError {
                pos: p,
                kind: ParseErrorKind::UnexpectedToken {
                    expected: "variable `x` or `y`",
                    found: t.describe(),
                },
            }),
            None => Err(ParseError {
                pos: self.end_pos,
                kind: ParseErrorKind::UnexpectedEnd { expected: "variable `x` or `y`" },
            }),
        }
    }
}

/// Splice a parenthesized sum into the surrounding sum, distributing the sign.
fn push_term(terms: &mut Vec<(Sign, Expr)>, sign: Sign, term: Expr) {
    match term {
        Expr::Sum(inner) => {
            for (s, e) in inner {
                let s = if sign == Sign::Neg { s.flip() } else { s };
                terms.push((s, e));
            }
        }
        other => terms.push((sign, other)),
    }
}

fn push_factor(factors: &mut Vec<Expr>, factor: Expr) {
    match factor {
        Expr::Prod(inner) => factors.extend(inner),
        other => factors.push(other),
    }
}

trait PopTerm {
    fn pop_unchecked(&mut self) -> Expr;
}

impl PopTerm for Vec<(Sign, Expr)> {
    fn pop_unchecked(&mut self) -> Expr {
        self.pop().expect("nonempty").1
    }
}

/// Parses `text` into an [`Equation`] over the given domain.
pub fn parse(text: &str, domain: DomainSpec) -> Result<Equation, ParseError> {
    let end_pos = text.chars().count() + 1;
    let toks = lex(text)?;
    let mut p = Parser { toks, cursor: 0, end_pos, domain: &domain, depth: 0 };
    let lhs = p.parse_expr()?;
    p.expect(&Tok::Eq, "`=`")?;
    let rhs = p.parse_expr()?;
    if p.peek().is_some() {
        return Err(p.err_here("end of input"));
    }

    for (side, pos_hint) in [(&lhs, 1), (&rhs, end_pos)] {
        if side.depth() > MAX_DEPTH {
            return Err(ParseError { pos: pos_hint, kind: ParseErrorKind::TooDeep });
        }
    }

    let mut knowns = BTreeSet::new();
    let mut unknowns = BTreeSet::new();
    for side in [&lhs, &rhs] {
        for (sym, _) in side.apps() {
            match sym {
                FuncSym::F => {
                    unknowns.insert(Unknown::F);
                }
                FuncSym::Alpha => {
                    unknowns.insert(Unknown::AlphaFn);
                }
                FuncSym::B => {
                    knowns.insert(Known::BForm);
                }
            }
        }
        if side.contains_scalar_alpha() {
            knowns.insert(Known::ScalarAlpha);
        }
    }

    Ok(Equation { lhs, rhs, domain, knowns, unknowns })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqdsl::render;

    fn real_add() -> DomainSpec {
        DomainSpec::real_line()
    }

    fn group_mul() -> DomainSpec {
        DomainSpec::group(GroupOp::Multiplicative)
    }

    #[test]
    fn parses_scalar_inhomogeneity() {
        let eq = parse("f(x+y)-f(x)-f(y)=alpha*x*y", real_add()).unwrap();
        match &eq.lhs {
            Expr::Sum(terms) => {
                assert_eq!(terms.len(), 3);
                assert!(terms.iter().all(|(_, e)| matches!(e, Expr::App { sym: FuncSym::F, .. })));
                assert_eq!(terms[0].0, Sign::Pos);
                assert_eq!(terms[1].0, Sign::Neg);
                assert_eq!(terms[2].0, Sign::Neg);
            }
            other => panic!("expected sum, got {other:?}"),
        }
        match &eq.rhs {
            Expr::Prod(fs) => {
                assert_eq!(
                    fs.as_slice(),
                    &[Expr::ScalarAlpha, Expr::Var(Var::X), Expr::Var(Var::Y)]
                );
            }
            other => panic!("expected product, got {other:?}"),
        }
        assert!(eq.knowns.contains(&Known::ScalarAlpha));
        assert_eq!(eq.unknowns.len(), 1);
    }

    #[test]
    fn parses_two_unknowns() {
        let eq = parse("f(x*y)-f(x)-f(y)=a(x)*a(y)", group_mul()).unwrap();
        assert!(eq.unknowns.contains(&Unknown::F));
        assert!(eq.unknowns.contains(&Unknown::AlphaFn));
        assert!(eq.knowns.is_empty());
    }

    #[test]
    fn alpha_spelling_is_arity_resolved() {
        let eq = parse("f(x+y)-f(x)-f(y)=alpha(x)*alpha(y)", real_add()).unwrap();
        assert!(eq.unknowns.contains(&Unknown::AlphaFn));
        assert!(eq.knowns.is_empty());
    }

    #[test]
    fn unbalanced_paren_reports_offset() {
        let err = parse("f(x+y", real_add()).unwrap_err();
        assert_eq!(err.pos, 6);
        assert!(matches!(err.kind, ParseErrorKind::UnexpectedEnd { .. }));
    }

    #[test]
    fn b_arity_checked() {
        let err = parse("f(x+y)-f(x)-f(y)=B(x)", real_add()).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Arity { sym: FuncSym::B, expected: 2, got: 1 }));
    }

    #[test]
    fn mixed_ops_in_one_application_rejected() {
        let err = parse("f(x+y)-f(x)-f(y)=B(x+y,x*y)", real_add()).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::MixedGroupOps));
    }

    #[test]
    fn foreign_op_rejected_on_abstract_group() {
        let err = parse("f(x*y)-f(x)-f(y)=a(x+y)", group_mul()).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::OpUnavailable { .. }));
    }

    #[test]
    fn foreign_op_allowed_on_field() {
        let dom = DomainSpec::new(
            DomainClass::FieldAdditive,
            GroupOp::Additive,
            Codomain::GeneralField,
        )
        .unwrap();
        parse("f(x+y)-f(x)-f(y)=a(x*y)", dom).unwrap();
    }

    #[test]
    fn unknown_symbols_rejected() {
        let err = parse("g(x+y)-f(x)-f(y)=B(x,y)", real_add()).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::UnknownFunction(_)));
        let err = parse("f(x+y)-f(x)-f(y)=q*x*y", real_add()).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::UnknownIdentifier(_)));
    }

    #[test]
    fn parenthesized_sums_are_spliced() {
        let a = parse("f(x+y)-(f(x)+f(y))=B(x,y)", real_add()).unwrap();
        let b = parse("f(x+y)-f(x)-f(y)=B(x,y)", real_add()).unwrap();
        assert_eq!(a.lhs, b.lhs);
        assert_eq!(render(&a), render(&b));
    }

    #[test]
    fn pathological_nesting_rejected() {
        let deep = format!("{}x{}=y", "(".repeat(20), ")".repeat(20));
        let err = parse(&deep, real_add()).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::TooDeep));
        // 15 levels are still fine.
        let ok = format!("{}x{}=y", "(".repeat(14), ")".repeat(14));
        parse(&ok, real_add()).unwrap();
    }

    #[test]
    fn rational_literals() {
        let eq = parse("f(x+y)-f(x)-f(y)=1/2*x*y", real_add()).unwrap();
        match &eq.rhs {
            Expr::Prod(fs) => assert!(matches!(&fs[0], Expr::Num(r) if *r == BigRational::new(1.into(), 2.into()))),
            other => panic!("unexpected {other:?}"),
        }
        let err = parse("f(x+y)-f(x)-f(y)=1/0*x*y", real_add()).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::ZeroDenominator));
    }
}
