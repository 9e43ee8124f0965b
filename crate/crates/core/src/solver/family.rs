//! The curated solution-family table, realization, and real admissibility.
//!
//! Families are stored as data, one entry per proved result, rather than
//! re-derived: correctness is enforced by the exact symbolic residual check
//! on every realization. `solve_shape` maps a shape and domain to its
//! families; `realize` instantiates one family at concrete parameters and
//! verifies the residual is identically zero.

use super::constraints::{ConstraintSystem, ParamPoly};
use crate::eqdsl::{
    parse, Codomain, DomainClass, DomainSpec, Equation, GroupOp, ShapeId,
};
use crate::exppoly::{
    residual_for_shape, Arity, Assignment, ExpPoly, KnownValues, PolyError, SymbolTable,
};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamKind {
    ComplexScalar,
    RealScalar,
    /// Real scalar restricted to a closed interval.
    RealInterval(Scalar, Scalar),
    AdditiveSymbol,
    ExponentialSymbol,
    LogarithmicSymbol,
}

impl ParamKind {
    pub fn is_scalar(&self) -> bool {
        matches!(
            self,
            ParamKind::ComplexScalar | ParamKind::RealScalar | ParamKind::RealInterval(..)
        )
    }
}

/// Whether the symbol is an unknown of the equation or a given.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamRole {
    Unknown,
    Given,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub kind: ParamKind,
    pub role: ParamRole,
}

impl Param {
    fn scalar(name: &str) -> Param {
        Param { name: name.into(), kind: ParamKind::ComplexScalar, role: ParamRole::Unknown }
    }

    fn given_scalar(name: &str) -> Param {
        Param { name: name.into(), kind: ParamKind::ComplexScalar, role: ParamRole::Given }
    }

    fn additive(name: &str, op: GroupOp) -> Param {
        let kind = match op {
            GroupOp::Additive => ParamKind::AdditiveSymbol,
            GroupOp::Multiplicative => ParamKind::LogarithmicSymbol,
        };
        Param { name: name.into(), kind, role: ParamRole::Unknown }
    }

    fn exponential(name: &str) -> Param {
        Param { name: name.into(), kind: ParamKind::ExponentialSymbol, role: ParamRole::Unknown }
    }
}

/// Structural factor of a template term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemplateAtom {
    /// The constant function 1.
    One,
    /// `a(x)` for the named additive/logarithmic symbol parameter.
    Add(String),
    /// `m(x)` for the named exponential symbol parameter.
    Exp(String),
    /// `a(x²)` — the diagonal of the biadditive form tied to additive `a`.
    DiagOfParam(String),
    /// `B(x,x)` for the given biadditive form.
    DiagOfKnown,
    /// The embedded variable `x` itself.
    EmbedVar,
}

/// One term: `coeff · ∏ scalar-param^power · ∏ atoms`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateTerm {
    pub coeff: Scalar,
    pub scalar_pows: Vec<(String, u32)>,
    pub atoms: Vec<TemplateAtom>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Template(pub Vec<TemplateTerm>);

impl TemplateTerm {
    fn new(coeff: Scalar, scalar_pows: &[(&str, u32)], atoms: &[TemplateAtom]) -> Self {
        TemplateTerm {
            coeff,
            scalar_pows: scalar_pows.iter().map(|(n, e)| (n.to_string(), *e)).collect(),
            atoms: atoms.to_vec(),
        }
    }
}

/// Everything the realization table needs besides the symbol parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TableSpec {
    pub additive_embedding: bool,
    pub exponential_embedding: bool,
    pub known_biadd: bool,
    /// Name of the additive parameter that needs a linked biadditive form
    /// (for `a(x·y)` on an additive field domain).
    pub biadd_link: Option<&'static str>,
}

/// A parametric solution family for one shape over one domain class.
#[derive(Debug, Clone)]
pub struct SolutionFamily {
    pub shape: ShapeId,
    pub domain: DomainSpec,
    pub label: String,
    pub params: Vec<Param>,
    pub template_f: Template,
    pub template_alpha: Option<Template>,
    pub display_f: String,
    pub display_alpha: Option<String>,
    pub constraints: ConstraintSystem,
    pub notes: Vec<String>,
    /// Regular closed forms available after `real_admissible`.
    pub regular_forms: Vec<String>,
    pub table_spec: TableSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("shape {shape} is not solvable here: {reason}")]
    UnsupportedShape { shape: ShapeId, reason: String },
    #[error("shape {shape} has no proved families on domain `{domain}`: {reason}")]
    UnsupportedDomain { shape: ShapeId, domain: &'static str, reason: String },
    #[error("constraint violated: {0}")]
    ConstraintViolation(String),
    #[error("missing value for scalar parameter `{0}`")]
    MissingParam(String),
    #[error("`{0}` is not a parameter of this family")]
    UnknownParam(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Constraints(#[from] super::constraints::ConstraintError),
    #[error("internal error: {0}")]
    Internal(String),
}

impl SolutionFamily {
    pub fn scalar_params(&self) -> impl Iterator<Item = &Param> {
        self.params.iter().filter(|p| p.kind.is_scalar())
    }

    pub fn param(&self, name: &str) -> Option<&Param> {
        self.params.iter().find(|p| p.name == name)
    }

    /// The canonical equation this family solves.
    pub fn equation(&self) -> Equation {
        canonical_equation(self.shape, self.domain).expect("family shape always has an equation")
    }
}

/// Canonical equation text for a shape, instantiated with the domain's
/// group operation.
pub fn canonical_equation(shape: ShapeId, domain: DomainSpec) -> Option<Equation> {
    let op = match domain.group_op {
        GroupOp::Additive => '+',
        GroupOp::Multiplicative => '*',
    };
    let text = match shape {
        ShapeId::S1 => format!("f(x{op}y) - f(x) - f(y) = B(x,y)"),
        ShapeId::S2 => "f(x+y) - f(x) - f(y) = alpha*x*y".to_string(),
        ShapeId::S3 => "f(x*y) - f(x) - f(y) = alpha*x*y".to_string(),
        ShapeId::S4 => "f(x*y) - f(x) - f(y) = a(x*y)".to_string(),
        ShapeId::S5 => "f(x+y) - f(x) - f(y) = a(x*y)".to_string(),
        ShapeId::S6 => format!("f(x{op}y) - f(x) - f(y) = a(x)*a(y)"),
        ShapeId::S7 => "f(x*y) - f(x)*f(y) = a(x*y)".to_string(),
        ShapeId::S8 => "f(x+y) - f(x)*f(y) = a(x+y)".to_string(),
        ShapeId::S9 => format!("f(x{op}y) - f(x)*f(y) = a(x)*a(y)"),
        _ => return None,
    };
    Some(parse(&text, domain).expect("canonical equation text parses"))
}

fn v(name: &str) -> ParamPoly {
    ParamPoly::var(name)
}

fn one_atom() -> TemplateAtom {
    TemplateAtom::One
}

fn half() -> Scalar {
    Scalar::from_ratio(1, 2)
}

/// The families proved for `shape` on `domain`.
pub fn solve_shape(shape: ShapeId, domain: DomainSpec) -> Result<Vec<SolutionFamily>, SolverError> {
    use ShapeId::*;
    let class = domain.class;
    let op = domain.group_op;
    let not_on = |reason: &str| SolverError::UnsupportedDomain {
        shape,
        domain: class.name(),
        reason: reason.to_string(),
    };

    match shape {
        OpenProblemMixed => Err(SolverError::UnsupportedShape {
            shape,
            reason: "open problem: the mixed equations are recognized but cannot be solved by \
                     the methods implemented here"
                .into(),
        }),
        Unrecognized => Err(SolverError::UnsupportedShape {
            shape,
            reason: "the equation does not match any supported shape".into(),
        }),
        S1 => {
            let mut fam = SolutionFamily {
                shape,
                domain,
                label: "S1".into(),
                params: vec![Param::additive("a", op)],
                template_f: Template(vec![
                    TemplateTerm::new(half(), &[], &[TemplateAtom::DiagOfKnown]),
                    TemplateTerm::new(Scalar::one(), &[], &[TemplateAtom::Add("a".into())]),
                ]),
                template_alpha: None,
                display_f: "f(x) = 1/2*B(x,x) + a(x)".into(),
                display_alpha: None,
                constraints: ConstraintSystem::default(),
                notes: vec!["codomain characteristic must not be 2 (1/2 is used)".into()],
                regular_forms: vec![],
                table_spec: TableSpec { known_biadd: true, ..TableSpec::default() },
            };
            if op == GroupOp::Multiplicative {
                fam.notes.push("B is biadditive with respect to the domain product".into());
            }
            Ok(vec![fam])
        }
        S2 => {
            if !(class.embeds_in_field() && op == GroupOp::Additive) {
                return Err(not_on("requires an additive subdomain of the codomain field"));
            }
            Ok(vec![SolutionFamily {
                shape,
                domain,
                label: "S2".into(),
                params: vec![Param::given_scalar("alpha"), Param::additive("a", op)],
                template_f: Template(vec![
                    TemplateTerm::new(
                        half(),
                        &[("alpha", 1)],
                        &[TemplateAtom::EmbedVar, TemplateAtom::EmbedVar],
                    ),
                    TemplateTerm::new(Scalar::one(), &[], &[TemplateAtom::Add("a".into())]),
                ]),
                template_alpha: None,
                display_f: "f(x) = alpha/2*x^2 + a(x)".into(),
                display_alpha: None,
                constraints: ConstraintSystem::default(),
                notes: vec!["codomain characteristic must not be 2 (1/2 is used)".into()],
                regular_forms: vec![],
                table_spec: TableSpec { additive_embedding: true, ..TableSpec::default() },
            }])
        }
        S3 => {
            if !(class.embeds_in_field() && op == GroupOp::Multiplicative) {
                return Err(not_on("requires a multiplicative subdomain of the codomain field"));
            }
            let zero_in_domain = class.contains_zero();
            let (template_f, display_f, params, mut notes): (_, _, Vec<Param>, Vec<String>) =
                if zero_in_domain {
                    (
                        Template(vec![]),
                        "f(x) = 0".to_string(),
                        vec![Param::given_scalar("alpha")],
                        vec!["0 in the domain forces f to vanish identically".into()],
                    )
                } else {
                    (
                        Template(vec![TemplateTerm::new(
                            Scalar::one(),
                            &[],
                            &[TemplateAtom::Add("l".into())],
                        )]),
                        "f(x) = l(x)".to_string(),
                        vec![Param::given_scalar("alpha"), Param::additive("l", op)],
                        vec!["f is logarithmic: f(x*y) = f(x) + f(y)".into()],
                    )
                };
            notes.push(
                "alpha = 0 is forced: alpha*x*y must satisfy the cocycle equation".into(),
            );
            Ok(vec![SolutionFamily {
                shape,
                domain,
                label: "S3".into(),
                params,
                template_f,
                template_alpha: None,
                display_f,
                display_alpha: None,
                constraints: ConstraintSystem::new(&["alpha"], vec![v("alpha")]),
                notes,
                regular_forms: vec![],
                table_spec: TableSpec { exponential_embedding: true, ..TableSpec::default() },
            }])
        }
        S4 => {
            if op != GroupOp::Multiplicative {
                return Err(not_on("the inhomogeneity a(x*y) lives on a multiplicative domain"));
            }
            if class == DomainClass::Semigroup {
                return Err(not_on("a neutral element is required (the proof sets y = 1)"));
            }
            let mut notes =
                vec!["gamma = f(1); alpha is the constant function -f(1)".into()];
            if class.contains_zero() {
                notes.push(
                    "0 in the domain forces the additive part to vanish (f constant)".into(),
                );
            }
            Ok(vec![SolutionFamily {
                shape,
                domain,
                label: "S4".into(),
                params: vec![Param::scalar("gamma"), Param::additive("a", op)],
                template_f: Template(vec![
                    TemplateTerm::new(Scalar::one(), &[], &[TemplateAtom::Add("a".into())]),
                    TemplateTerm::new(Scalar::one(), &[("gamma", 1)], &[one_atom()]),
                ]),
                template_alpha: Some(Template(vec![TemplateTerm::new(
                    Scalar::from_int(-1),
                    &[("gamma", 1)],
                    &[one_atom()],
                )])),
                display_f: "f(x) = a(x) + gamma".into(),
                display_alpha: Some("a(x) = -gamma".into()),
                constraints: ConstraintSystem::default(),
                notes,
                regular_forms: vec![],
                table_spec: TableSpec::default(),
            }])
        }
        S5 => {
            if !(matches!(class, DomainClass::FieldAdditive | DomainClass::RealLine)
                && op == GroupOp::Additive)
            {
                return Err(not_on("requires the whole field under addition"));
            }
            Ok(vec![SolutionFamily {
                shape,
                domain,
                label: "S5".into(),
                params: vec![
                    Param::scalar("gamma"),
                    Param::additive("a", op),
                    Param::additive("A", op),
                ],
                template_f: Template(vec![
                    TemplateTerm::new(half(), &[], &[TemplateAtom::DiagOfParam("a".into())]),
                    TemplateTerm::new(Scalar::one(), &[], &[TemplateAtom::Add("A".into())]),
                    TemplateTerm::new(Scalar::from_int(-1), &[("gamma", 1)], &[one_atom()]),
                ]),
                template_alpha: Some(Template(vec![
                    TemplateTerm::new(Scalar::one(), &[], &[TemplateAtom::Add("a".into())]),
                    TemplateTerm::new(Scalar::one(), &[("gamma", 1)], &[one_atom()]),
                ])),
                display_f: "f(x) = 1/2*a(x^2) + A(x) - gamma".into(),
                display_alpha: Some("a(x) = a(x) + gamma".into()),
                constraints: ConstraintSystem::default(),
                notes: vec![
                    "codomain characteristic must not be 2 (1/2 is used)".into(),
                    "the constant in f is -gamma: substituting +gamma back into the equation \
                     leaves a residual of -2*gamma"
                        .into(),
                ],
                regular_forms: vec![],
                table_spec: TableSpec { biadd_link: Some("a"), ..TableSpec::default() },
            }])
        }
        S6 => {
            let supported = matches!(
                class,
                DomainClass::Group
                    | DomainClass::RealLine
                    | DomainClass::RealNonzero
                    | DomainClass::RealPositive
                    | DomainClass::RealWithZero
                    | DomainClass::RealNonneg
            );
            if !supported {
                return Err(not_on(
                    "proved for commutative groups and the real domains ℝ, D, D*",
                ));
            }
            if domain.codomain == Codomain::GeneralField {
                return Err(not_on("complex-valued functions are required"));
            }
            let dstar = class.contains_zero();
            let add_name = if op == GroupOp::Additive { "a" } else { "l" };
            let mut params = vec![
                Param::scalar("alpha"),
                Param::scalar("gamma"),
                Param::additive(add_name, op),
                Param::exponential("m"),
            ];
            let mut constraints = ConstraintSystem::default();
            let mut notes = Vec::new();
            let mut template_f = vec![
                TemplateTerm::new(
                    Scalar::one(),
                    &[("gamma", 1)],
                    &[TemplateAtom::Add(add_name.into())],
                ),
                TemplateTerm::new(Scalar::one(), &[("alpha", 2)], &[TemplateAtom::Exp("m".into())]),
                TemplateTerm::new(Scalar::from_int(-1), &[("alpha", 2)], &[one_atom()]),
            ];
            let mut display_f = format!("f(x) = gamma*{add_name}(x) + alpha^2*(m(x) - 1)");
            if dstar {
                // Adjoining the absorbing zero forces the logarithmic part out.
                params.retain(|p| p.name != *add_name);
                constraints = ConstraintSystem::new(&["gamma"], vec![v("gamma")]);
                template_f.remove(0);
                display_f = "f(x) = alpha^2*(m(x) - 1)".into();
                notes.push("gamma = 0 is forced by the absorbing element 0".into());
                notes.push("the exponential extends to 0 by m(0) = 0 unless m is identically 1".into());
            }
            Ok(vec![SolutionFamily {
                shape,
                domain,
                label: "S6".into(),
                params,
                template_f: Template(template_f),
                template_alpha: Some(Template(vec![
                    TemplateTerm::new(Scalar::one(), &[("alpha", 1)], &[TemplateAtom::Exp("m".into())]),
                    TemplateTerm::new(Scalar::from_int(-1), &[("alpha", 1)], &[one_atom()]),
                ])),
                display_f,
                display_alpha: Some("a(x) = alpha*(m(x) - 1)".into()),
                constraints,
                notes,
                regular_forms: vec![],
                table_spec: TableSpec::default(),
            }])
        }
        S7 | S8 => {
            let (needed_op, neutral) = if shape == S7 {
                (GroupOp::Multiplicative, "1")
            } else {
                (GroupOp::Additive, "0")
            };
            if op != needed_op {
                return Err(not_on("the inhomogeneity uses the other group operation"));
            }
            if class == DomainClass::Semigroup {
                return Err(not_on(
                    "a neutral element is required (the proof evaluates at it)",
                ));
            }
            let mut notes = vec![format!("c = f({neutral}), the value at the neutral element")];
            if shape == S8 {
                notes.push(
                    "on an additive domain the neutral element is 0, so c = f(0)".into(),
                );
            }
            Ok(vec![SolutionFamily {
                shape,
                domain,
                label: shape.name().into(),
                params: vec![Param::scalar("c"), Param::exponential("m")],
                template_f: Template(vec![TemplateTerm::new(
                    Scalar::one(),
                    &[("c", 1)],
                    &[TemplateAtom::Exp("m".into())],
                )]),
                template_alpha: Some(Template(vec![
                    TemplateTerm::new(Scalar::one(), &[("c", 1)], &[TemplateAtom::Exp("m".into())]),
                    TemplateTerm::new(
                        Scalar::from_int(-1),
                        &[("c", 2)],
                        &[TemplateAtom::Exp("m".into())],
                    ),
                ])),
                display_f: "f(x) = c*m(x)".into(),
                display_alpha: Some("a(x) = c*(1 - c)*m(x)".into()),
                constraints: ConstraintSystem::default(),
                notes,
                regular_forms: vec![],
                table_spec: TableSpec::default(),
            }])
        }
        S9 => {
            let supported = matches!(
                class,
                DomainClass::Group
                    | DomainClass::RealLine
                    | DomainClass::RealNonzero
                    | DomainClass::RealPositive
            );
            if !supported {
                return Err(not_on("proved for commutative groups (no absorbing zero)"));
            }
            if domain.codomain == Codomain::GeneralField {
                return Err(not_on("complex-valued functions are required"));
            }
            let add_name = if op == GroupOp::Additive { "a" } else { "l" };
            let case_i = SolutionFamily {
                shape,
                domain,
                label: "S9 case (i)".into(),
                params: vec![
                    Param::scalar("alpha1"),
                    Param::scalar("alpha2"),
                    Param::scalar("gamma1"),
                    Param::scalar("gamma2"),
                    Param::additive(add_name, op),
                    Param::exponential("m"),
                ],
                template_f: Template(vec![
                    TemplateTerm::new(
                        Scalar::one(),
                        &[("gamma1", 1)],
                        &[TemplateAtom::Add(add_name.into()), TemplateAtom::Exp("m".into())],
                    ),
                    TemplateTerm::new(
                        Scalar::one(),
                        &[("gamma2", 1)],
                        &[TemplateAtom::Exp("m".into())],
                    ),
                ]),
                template_alpha: Some(Template(vec![
                    TemplateTerm::new(
                        Scalar::one(),
                        &[("alpha1", 1)],
                        &[TemplateAtom::Add(add_name.into()), TemplateAtom::Exp("m".into())],
                    ),
                    TemplateTerm::new(
                        Scalar::one(),
                        &[("alpha2", 1)],
                        &[TemplateAtom::Exp("m".into())],
                    ),
                ])),
                display_f: format!("f(x) = (gamma1*{add_name}(x) + gamma2)*m(x)"),
                display_alpha: Some(format!(
                    "a(x) = (alpha1*{add_name}(x) + alpha2)*m(x)"
                )),
                constraints: ConstraintSystem::new(
                    &["alpha1", "alpha2", "gamma1", "gamma2"],
                    vec![
                        v("gamma1").pow(2).add(&v("alpha1").pow(2)),
                        v("gamma2").pow(2).add(&v("alpha2").pow(2)).sub(&v("gamma2")),
                        v("gamma1")
                            .mul(&v("gamma2"))
                            .add(&v("alpha1").mul(&v("alpha2")))
                            .sub(&v("gamma1")),
                    ],
                ),
                notes: vec![],
                regular_forms: vec![],
                table_spec: TableSpec::default(),
            };
            let mut case_ii_constraints = ConstraintSystem::new(
                &["alpha1", "alpha2", "gamma1", "gamma2"],
                vec![
                    v("gamma1").pow(2).add(&v("alpha1").pow(2)).sub(&v("gamma1")),
                    v("gamma2").pow(2).add(&v("alpha2").pow(2)).sub(&v("gamma2")),
                    v("gamma1").mul(&v("gamma2")).add(&v("alpha1").mul(&v("alpha2"))),
                ],
            );
            case_ii_constraints
                .side_conditions
                .push("m1 and m2 are linearly independent exponentials".into());
            let case_ii = SolutionFamily {
                shape,
                domain,
                label: "S9 case (ii)".into(),
                params: vec![
                    Param::scalar("alpha1"),
                    Param::scalar("alpha2"),
                    Param::scalar("gamma1"),
                    Param::scalar("gamma2"),
                    Param::exponential("m1"),
                    Param::exponential("m2"),
                ],
                template_f: Template(vec![
                    TemplateTerm::new(
                        Scalar::one(),
                        &[("gamma1", 1)],
                        &[TemplateAtom::Exp("m1".into())],
                    ),
                    TemplateTerm::new(
                        Scalar::one(),
                        &[("gamma2", 1)],
                        &[TemplateAtom::Exp("m2".into())],
                    ),
                ]),
                template_alpha: Some(Template(vec![
                    TemplateTerm::new(
                        Scalar::one(),
                        &[("alpha1", 1)],
                        &[TemplateAtom::Exp("m1".into())],
                    ),
                    TemplateTerm::new(
                        Scalar::one(),
                        &[("alpha2", 1)],
                        &[TemplateAtom::Exp("m2".into())],
                    ),
                ])),
                display_f: "f(x) = gamma1*m1(x) + gamma2*m2(x)".into(),
                display_alpha: Some("a(x) = alpha1*m1(x) + alpha2*m2(x)".into()),
                constraints: case_ii_constraints,
                notes: vec![],
                regular_forms: vec![],
                table_spec: TableSpec::default(),
            };
            let case_iii = SolutionFamily {
                shape,
                domain,
                label: "S9 case (iii)".into(),
                params: vec![
                    Param::scalar("alpha"),
                    Param::scalar("gamma"),
                    Param::exponential("m"),
                ],
                template_f: Template(vec![TemplateTerm::new(
                    Scalar::one(),
                    &[("gamma", 1)],
                    &[TemplateAtom::Exp("m".into())],
                )]),
                template_alpha: Some(Template(vec![TemplateTerm::new(
                    Scalar::one(),
                    &[("alpha", 1)],
                    &[TemplateAtom::Exp("m".into())],
                )])),
                display_f: "f(x) = gamma*m(x)".into(),
                display_alpha: Some("a(x) = alpha*m(x)".into()),
                constraints: ConstraintSystem::new(
                    &["alpha", "gamma"],
                    vec![v("gamma").pow(2).add(&v("alpha").pow(2)).sub(&v("gamma"))],
                ),
                notes: vec![
                    "includes the identically-zero pair (gamma = alpha = 0); the nonzero \
                     branch has gamma ≠ 0"
                        .into(),
                ],
                regular_forms: vec![],
                table_spec: TableSpec::default(),
            };
            Ok(vec![case_i, case_ii, case_iii])
        }
    }
}

/// A realized family instance with its verified residual.
#[derive(Debug, Clone)]
pub struct Realization {
    pub f: ExpPoly,
    pub alpha: Option<ExpPoly>,
    pub table: SymbolTable,
    pub values: BTreeMap<String, Scalar>,
}

/// Instantiates the family at the given scalar parameter values. A single
/// missing scalar is completed from the constraint system when it is
/// determined up to an exact choice; the full assignment is then checked
/// exactly and the symbolic residual verified to vanish.
pub fn realize(
    fam: &SolutionFamily,
    vals: &BTreeMap<String, Scalar>,
) -> Result<Realization, SolverError> {
    for name in vals.keys() {
        match fam.param(name) {
            Some(p) if p.kind.is_scalar() => {}
            Some(_) => {
                return Err(SolverError::UnknownParam(format!("{name} (a symbol parameter)")))
            }
            None => return Err(SolverError::UnknownParam(name.clone())),
        }
    }
    let mut values = vals.clone();
    let missing: Vec<String> = fam
        .scalar_params()
        .filter(|p| !values.contains_key(&p.name))
        .map(|p| p.name.clone())
        .collect();
    match missing.as_slice() {
        [] => {}
        [name] => {
            let completed = complete_param(fam, &values, name)?;
            values.insert(name.clone(), completed);
        }
        _ => return Err(SolverError::MissingParam(missing.join(", "))),
    }
    fam.constraints.check(&values).map_err(SolverError::ConstraintViolation)?;

    // Assemble the symbol table: symbol parameters plus whatever the shape
    // needs structurally.
    let mut builder = SymbolTable::builder();
    let mut add_ids = BTreeMap::new();
    let mut exp_ids = BTreeMap::new();
    for p in &fam.params {
        match p.kind {
            ParamKind::AdditiveSymbol | ParamKind::LogarithmicSymbol => {
                add_ids.insert(p.name.clone(), builder.additive(&p.name));
            }
            ParamKind::ExponentialSymbol => {
                exp_ids.insert(p.name.clone(), builder.exponential(&p.name));
            }
            _ => {}
        }
    }
    let spec = fam.table_spec;
    if spec.additive_embedding {
        builder.additive_embedding();
    }
    if spec.exponential_embedding {
        builder.exponential_embedding();
    }
    let known_b = spec.known_biadd.then(|| builder.biadditive("B"));
    if let Some(linked) = spec.biadd_link {
        let id = add_ids
            .get(linked)
            .copied()
            .ok_or_else(|| SolverError::Internal(format!("no additive param `{linked}`")))?;
        builder.biadditive_of("aB", id);
    }
    let table = builder.build();

    let eval_template = |tpl: &Template| -> Result<ExpPoly, SolverError> {
        let mut acc = ExpPoly::zero(&table, Arity::One);
        for term in &tpl.0 {
            let mut coeff = term.coeff.clone();
            for (p, e) in &term.scalar_pows {
                let v = values
                    .get(p)
                    .ok_or_else(|| SolverError::MissingParam(p.clone()))?;
                coeff = &coeff * &v.pow(*e);
            }
            let mut poly = ExpPoly::constant(&table, Arity::One, coeff);
            for atom in &term.atoms {
                let factor = match atom {
                    TemplateAtom::One => ExpPoly::one(&table, Arity::One),
                    TemplateAtom::Add(name) => ExpPoly::additive(&table, add_ids[name]),
                    TemplateAtom::Exp(name) => ExpPoly::exponential(&table, exp_ids[name]),
                    TemplateAtom::DiagOfParam(name) => {
                        let b = table
                            .biadditive_from(add_ids[name])
                            .ok_or_else(|| SolverError::Internal("missing biadd link".into()))?;
                        ExpPoly::diagonal(&table, b)
                    }
                    TemplateAtom::DiagOfKnown => {
                        let b = known_b
                            .ok_or_else(|| SolverError::Internal("missing known B".into()))?;
                        ExpPoly::diagonal(&table, b)
                    }
                    TemplateAtom::EmbedVar => {
                        let e = table
                            .embedding_additive()
                            .ok_or_else(|| SolverError::Internal("missing embedding".into()))?;
                        ExpPoly::additive(&table, e)
                    }
                };
                poly = poly.mul(&factor).map_err(SolverError::Poly)?;
            }
            acc = acc.add(&poly).map_err(SolverError::Poly)?;
        }
        Ok(acc)
    };

    let f = eval_template(&fam.template_f)?;
    let alpha = fam.template_alpha.as_ref().map(eval_template).transpose()?;

    // Verify the residual vanishes identically.
    let knowns = KnownValues {
        b_form: known_b.map(|b| ExpPoly::cross(&table, b)),
        scalar_alpha: values.get("alpha").cloned().or_else(|| Some(Scalar::zero())),
    };
    let assignment = Assignment { f: Some(f.clone()), alpha: alpha.clone() };
    let res = residual_for_shape(fam.shape, &assignment, &knowns)?;
    if !res.is_zero() {
        return Err(SolverError::Internal(format!(
            "family `{}` realized with nonzero residual: {}",
            fam.label, res.0
        )));
    }
    Ok(Realization { f, alpha, table, values })
}

/// Solves the constraint system for one missing parameter given the others,
/// when it is pinned down to an exact linear or quadratic choice.
fn complete_param(
    fam: &SolutionFamily,
    values: &BTreeMap<String, Scalar>,
    name: &str,
) -> Result<Scalar, SolverError> {
    for eq in &fam.constraints.equations {
        if !eq.vars().iter().any(|v| v == name) {
            continue;
        }
        // Substitute everything known, leaving a univariate polynomial.
        let mut uni = eq.clone();
        for (p, val) in values {
            uni = uni.subst(p, &ParamPoly::constant(val.clone()));
        }
        let vars = uni.vars();
        if vars.len() != 1 {
            continue;
        }
        match uni.degree_in(name) {
            1 => {
                let lin = uni.clone();
                // c·p + r = 0
                let c = lin.sub(&uni.subst(name, &ParamPoly::constant(Scalar::zero())));
                let r = uni.subst(name, &ParamPoly::constant(Scalar::zero()));
                let c = c
                    .subst(name, &ParamPoly::constant(Scalar::one()))
                    .as_constant()
                    .ok_or_else(|| SolverError::Internal("nonconstant coefficient".into()))?;
                let r = r
                    .as_constant()
                    .ok_or_else(|| SolverError::Internal("nonconstant remainder".into()))?;
                return Ok(&-&r / &c);
            }
            2 => {
                let a = {
                    let two = uni.subst(name, &ParamPoly::constant(Scalar::from_int(2)));
                    let one = uni.subst(name, &ParamPoly::constant(Scalar::one()));
                    let zero = uni.subst(name, &ParamPoly::constant(Scalar::zero()));
                    // f(2) - 2f(1) + f(0) = 2a
                    let d = two
                        .sub(&one.scale(&Scalar::from_int(2)))
                        .add(&zero)
                        .as_constant()
                        .ok_or_else(|| SolverError::Internal("nonconstant".into()))?;
                    &d / &Scalar::from_int(2)
                };
                let c0 = uni
                    .subst(name, &ParamPoly::constant(Scalar::zero()))
                    .as_constant()
                    .unwrap_or_else(Scalar::zero);
                let b = {
                    let one = uni
                        .subst(name, &ParamPoly::constant(Scalar::one()))
                        .as_constant()
                        .unwrap_or_else(Scalar::zero);
                    &(&one - &c0) - &a
                };
                let disc = &(&b * &b) - &(&Scalar::from_int(4) * &(&a * &c0));
                let Some(s) = disc.sqrt_exact() else {
                    return Err(SolverError::ConstraintViolation(format!(
                        "{eq} = 0: no Gaussian-rational value of `{name}` exists \
                         (discriminant {disc} has no exact square root)"
                    )));
                };
                // Deterministic choice: the canonical (+) root.
                return Ok(&(&-&b + &s) / &(&Scalar::from_int(2) * &a));
            }
            _ => continue,
        }
    }
    Err(SolverError::MissingParam(name.to_string()))
}

impl fmt::Display for SolutionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} on {}:", self.label, self.domain.class.name())?;
        writeln!(f, "  {}", self.display_f)?;
        if let Some(da) = &self.display_alpha {
            writeln!(f, "  {da}")?;
        }
        for eq in &self.constraints.equations {
            writeln!(f, "  constraint: {eq} = 0")?;
        }
        for note in &self.notes {
            writeln!(f, "  note: {note}")?;
        }
        Ok(())
    }
}
