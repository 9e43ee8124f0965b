//! Equation AST and domain annotations.
//!
//! The same glyphs `+` and `*` mean two different things depending on
//! position: inside a function argument they denote the domain's group
//! operation, outside they denote codomain field arithmetic. The AST keeps
//! that distinction structural so later stages never have to guess.

use num_rational::BigRational;
use std::collections::BTreeSet;
use std::fmt;

/// One of the two equation variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X,
    Y,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X => write!(f, "x"),
            Var::Y => write!(f, "y"),
        }
    }
}

/// Group operation symbol usable inside a function argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpSym {
    Plus,
    Times,
}

impl fmt::Display for OpSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpSym::Plus => write!(f, "+"),
            OpSym::Times => write!(f, "*"),
        }
    }
}

/// Function symbols that may be applied to group arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FuncSym {
    /// The unknown `f`.
    F,
    /// The unknown function α (spelled `a` or `alpha` in input).
    Alpha,
    /// The given symmetric biadditive form `B`.
    B,
}

impl fmt::Display for FuncSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FuncSym::F => write!(f, "f"),
            FuncSym::Alpha => write!(f, "a"),
            FuncSym::B => write!(f, "B"),
        }
    }
}

/// A group argument: a single variable or two variables joined by one group
/// operation symbol. Codomain arithmetic never appears here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupArg {
    Single(Var),
    Pair(Var, OpSym, Var),
}

impl GroupArg {
    pub fn op(&self) -> Option<OpSym> {
        match self {
            GroupArg::Single(_) => None,
            GroupArg::Pair(_, op, _) => Some(*op),
        }
    }
}

impl fmt::Display for GroupArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupArg::Single(v) => write!(f, "{v}"),
            GroupArg::Pair(a, op, b) => write!(f, "{a}{op}{b}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

/// Expression tree for one side of an equation.
///
/// `Sum` and `Prod` are kept flattened (no sum directly inside a sum, no
/// product directly inside a product) so structural comparison modulo
/// reordering is a multiset check.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Var(Var),
    /// Exact rational literal.
    Num(BigRational),
    /// The bare scalar constant `alpha`.
    ScalarAlpha,
    App {
        sym: FuncSym,
        args: Vec<GroupArg>,
    },
    Sum(Vec<(Sign, Expr)>),
    Prod(Vec<Expr>),
}

impl Expr {
    pub fn app1(sym: FuncSym, arg: GroupArg) -> Expr {
        Expr::App { sym, args: vec![arg] }
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Var(_) | Expr::Num(_) | Expr::ScalarAlpha | Expr::App { .. } => 1,
            Expr::Sum(ts) => 1 + ts.iter().map(|(_, e)| e.depth()).max().unwrap_or(0),
            Expr::Prod(fs) => 1 + fs.iter().map(Expr::depth).max().unwrap_or(0),
        }
    }

    /// All function applications in the tree.
    pub fn apps(&self) -> Vec<(FuncSym, &[GroupArg])> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let Expr::App { sym, args } = e {
                out.push((*sym, args.as_slice()));
            }
        });
        out
    }

    pub fn contains_scalar_alpha(&self) -> bool {
        let mut found = false;
        self.walk(&mut |e| {
            if matches!(e, Expr::ScalarAlpha) {
                found = true;
            }
        });
        found
    }

    fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        match self {
            Expr::Sum(ts) => ts.iter().for_each(|(_, e)| e.walk(f)),
            Expr::Prod(fs) => fs.iter().for_each(|e| e.walk(f)),
            _ => {}
        }
    }
}

/// Domain classes from the result table: abstract (semi)groups, subdomains of
/// a general field, and the concrete real domains ℝ, ]0,∞[, ℝ^×, and the
/// zero-including variants D* = {ℝ, [0,∞[}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DomainClass {
    Semigroup,
    Group,
    FieldAdditive,
    FieldMultiplicativeNoZero,
    FieldWithZero,
    RealLine,
    RealPositive,
    RealNonzero,
    RealWithZero,
    RealNonneg,
}

impl DomainClass {
    /// The group operation forced by the class, if any. `Semigroup`/`Group`
    /// carry their operation explicitly in the [`DomainSpec`].
    pub fn forced_op(self) -> Option<GroupOp> {
        use DomainClass::*;
        match self {
            Semigroup | Group => None,
            FieldAdditive | RealLine => Some(GroupOp::Additive),
            FieldMultiplicativeNoZero | FieldWithZero | RealPositive | RealNonzero
            | RealWithZero | RealNonneg => Some(GroupOp::Multiplicative),
        }
    }

    /// True when domain elements are themselves elements of the codomain
    /// field, so expressions like `alpha*x*y` make sense.
    pub fn embeds_in_field(self) -> bool {
        !matches!(self, DomainClass::Semigroup | DomainClass::Group)
    }

    /// True when both field operations are available on the domain, so a
    /// function argument may use the operation that is not the group one.
    pub fn has_both_field_ops(self) -> bool {
        self.embeds_in_field()
    }

    /// True when the domain contains the multiplicatively absorbing zero.
    pub fn contains_zero(self) -> bool {
        matches!(
            self,
            DomainClass::FieldWithZero | DomainClass::RealWithZero | DomainClass::RealNonneg
        )
    }

    pub fn name(self) -> &'static str {
        use DomainClass::*;
        match self {
            Semigroup => "semigroup",
            Group => "group",
            FieldAdditive => "field-add",
            FieldMultiplicativeNoZero => "field-mult",
            FieldWithZero => "field-with-zero",
            RealLine => "real",
            RealPositive => "real-pos",
            RealNonzero => "real-nonzero",
            RealWithZero => "real-with-zero",
            RealNonneg => "real-nonneg",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupOp {
    Additive,
    Multiplicative,
}

impl GroupOp {
    pub fn sym(self) -> OpSym {
        match self {
            GroupOp::Additive => OpSym::Plus,
            GroupOp::Multiplicative => OpSym::Times,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Codomain {
    GeneralField,
    Complex,
    Real,
}

impl Codomain {
    pub fn name(self) -> &'static str {
        match self {
            Codomain::GeneralField => "field",
            Codomain::Complex => "complex",
            Codomain::Real => "real",
        }
    }
}

/// Domain annotation for an equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DomainSpec {
    pub class: DomainClass,
    pub group_op: GroupOp,
    pub codomain: Codomain,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("domain class {class} requires the {required} operation")]
pub struct DomainSpecError {
    pub class: &'static str,
    pub required: &'static str,
}

impl DomainSpec {
    /// Builds a spec, checking that the operation is consistent with the
    /// class (e.g. `RealPositive` is multiplicative).
    pub fn new(
        class: DomainClass,
        group_op: GroupOp,
        codomain: Codomain,
    ) -> Result<Self, DomainSpecError> {
        if let Some(forced) = class.forced_op() {
            if forced != group_op {
                return Err(DomainSpecError {
                    class: class.name(),
                    required: match forced {
                        GroupOp::Additive => "additive",
                        GroupOp::Multiplicative => "multiplicative",
                    },
                });
            }
        }
        Ok(DomainSpec { class, group_op, codomain })
    }

    pub fn group(op: GroupOp) -> Self {
        DomainSpec { class: DomainClass::Group, group_op: op, codomain: Codomain::Complex }
    }

    pub fn real_line() -> Self {
        DomainSpec {
            class: DomainClass::RealLine,
            group_op: GroupOp::Additive,
            codomain: Codomain::Real,
        }
    }
}

/// Known (given) symbols an equation may mention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Known {
    BForm,
    ScalarAlpha,
}

/// Unknown function symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Unknown {
    F,
    AlphaFn,
}

/// A parsed two-variable functional equation with its domain annotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub lhs: Expr,
    pub rhs: Expr,
    pub domain: DomainSpec,
    pub knowns: BTreeSet<Known>,
    pub unknowns: BTreeSet<Unknown>,
}

/// Shape taxonomy. S1–S9 follow the result table; the two mixed equations
/// are recognized but explicitly unsupported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ShapeId {
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
    S7,
    S8,
    S9,
    OpenProblemMixed,
    Unrecognized,
}

impl ShapeId {
    pub fn name(self) -> &'static str {
        use ShapeId::*;
        match self {
            S1 => "S1",
            S2 => "S2",
            S3 => "S3",
            S4 => "S4",
            S5 => "S5",
            S6 => "S6",
            S7 => "S7",
            S8 => "S8",
            S9 => "S9",
            OpenProblemMixed => "OpenProblemMixed",
            Unrecognized => "Unrecognized",
        }
    }
}

impl fmt::Display for ShapeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}
