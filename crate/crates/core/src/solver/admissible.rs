//! Restriction of complex families to real-valued solutions.
//!
//! Real-valuedness cuts the parameter space down: in S9 case (i) it forces
//! α₁ = 0 (α vanishes, f is exponential), in case (ii) it restricts
//! α₁ ∈ [-1/2, 1/2], in case (iii) γ ∈ [0, 1]. On the real domains the
//! regular exponentials take the classical closed forms exp(λx) on ℝ and
//! |x|^μ, sign(x)·|x|^μ on D (plus the identically-zero exponential).

use super::constraints::ParamPoly;
use super::family::{ParamKind, SolutionFamily};
use crate::eqdsl::{DomainClass, GroupOp, ShapeId};
use crate::scalar::Scalar;

/// Returns the family with parameter domains restricted so realized
/// `(f, α)` are real-valued, and with the admissible regular forms listed.
pub fn real_admissible(fam: &SolutionFamily) -> SolutionFamily {
    let mut out = fam.clone();
    for p in &mut out.params {
        if p.kind == ParamKind::ComplexScalar {
            p.kind = ParamKind::RealScalar;
        }
    }
    match (fam.shape, fam.label.as_str()) {
        (ShapeId::S9, "S9 case (i)") => {
            // (±α₁·i·a + 1)·m and α₁·a·m are both real only if α₁ = 0.
            set_interval(&mut out, "alpha1", 0, 1, 0, 1);
            out.constraints.equations.push(ParamPoly::var("alpha1"));
            out.notes.push(
                "real-valued only for alpha1 = 0: alpha vanishes identically and f is \
                 exponential"
                    .into(),
            );
        }
        (ShapeId::S9, "S9 case (ii)") => {
            set_interval(&mut out, "alpha1", -1, 2, 1, 2);
            out.notes
                .push("real-valued iff alpha1 lies in [-1/2, 1/2]".into());
        }
        (ShapeId::S9, "S9 case (iii)") => {
            set_interval(&mut out, "gamma", 0, 1, 1, 1);
            out.notes.push("real-valued iff gamma lies in [0, 1]".into());
        }
        _ => {}
    }
    out.regular_forms = regular_forms(fam.domain.class, fam.domain.group_op);
    if !out.regular_forms.is_empty() {
        out.notes.push(
            "regular solutions (continuity at a point, measurability on a set of positive \
             measure, or local boundedness) use the listed closed forms"
                .into(),
        );
    }
    if fam.domain.group_op == GroupOp::Additive && fam.domain.class == DomainClass::RealLine {
        out.notes.push(
            "one-sided boundedness is not enough: any exponential is bounded below, so \
             bounded-below solutions need not be regular"
                .into(),
        );
    }
    out
}

fn set_interval(fam: &mut SolutionFamily, name: &str, lo_n: i64, lo_d: i64, hi_n: i64, hi_d: i64) {
    if let Some(p) = fam.params.iter_mut().find(|p| p.name == name) {
        p.kind =
            ParamKind::RealInterval(Scalar::from_ratio(lo_n, lo_d), Scalar::from_ratio(hi_n, hi_d));
    }
}

fn regular_forms(class: DomainClass, op: GroupOp) -> Vec<String> {
    match (class, op) {
        (DomainClass::RealLine, GroupOp::Additive) => {
            vec!["m(x) = exp(lambda*x)".into(), "m(x) = 0".into(), "a(x) = gamma*x".into()]
        }
        (DomainClass::RealNonzero | DomainClass::RealPositive, GroupOp::Multiplicative) => vec![
            "m(x) = |x|^mu".into(),
            "m(x) = sign(x)*|x|^mu".into(),
            "m(x) = 0".into(),
            "l(x) = gamma*ln|x|".into(),
        ],
        (DomainClass::RealWithZero | DomainClass::RealNonneg, GroupOp::Multiplicative) => vec![
            "m(x) = |x|^mu (mu >= 0)".into(),
            "m(x) = sign(x)*|x|^mu (mu >= 0)".into(),
            "m(x) = 0".into(),
        ],
        _ => vec![],
    }
}
