//! Membership test: does a concrete (f, α) pair lie in a solution family?
//!
//! The inverse of `realize`: pattern-match the polynomials against the
//! family template, extract the scalar parameters, and verify the family's
//! constraint system exactly. Ties (e.g. a zero α leaving the exponential
//! unconstrained) are broken canonically.

use super::family::SolutionFamily;
use crate::exppoly::{AddId, Arity, Atom, ExpId, ExpPoly, VarCopy};
use crate::scalar::Scalar;
use crate::eqdsl::ShapeId;
use std::collections::BTreeMap;

/// Linear decomposition of a polynomial whose monomials are all `1`, a
/// single additive atom, or a single exponential atom.
#[derive(Debug)]
struct LinearForm {
    constant: Scalar,
    adds: BTreeMap<AddId, Scalar>,
    exps: BTreeMap<ExpId, Scalar>,
}

impl LinearForm {
    fn of(p: &ExpPoly) -> Option<LinearForm> {
        let mut out = LinearForm {
            constant: Scalar::zero(),
            adds: BTreeMap::new(),
            exps: BTreeMap::new(),
        };
        for (mono, coeff) in p.terms() {
            let atoms: Vec<(&Atom, &u32)> = mono.atoms().collect();
            match atoms.as_slice() {
                [] => out.constant = coeff.clone(),
                [(Atom::Add(id, VarCopy::X), 1)] => {
                    out.adds.insert(*id, coeff.clone());
                }
                [(Atom::Exp(id, VarCopy::X), 1)] => {
                    out.exps.insert(*id, coeff.clone());
                }
                _ => return None,
            }
        }
        Some(out)
    }
}

/// Attempts to express `(f, α)` in the family, returning the scalar
/// parameter values on success.
pub fn check_membership(
    f: &ExpPoly,
    alpha: Option<&ExpPoly>,
    fam: &SolutionFamily,
) -> Option<BTreeMap<String, Scalar>> {
    if f.arity() != Arity::One {
        return None;
    }
    let assignment = match (fam.shape, fam.label.as_str()) {
        (ShapeId::S6, _) => match_s6(f, alpha?, fam)?,
        (ShapeId::S7 | ShapeId::S8, _) => match_s7s8(f, alpha?)?,
        (ShapeId::S9, "S9 case (i)") => match_s9_affine(f, alpha?)?,
        (ShapeId::S9, "S9 case (ii)") => match_s9_two_exp(f, alpha?)?,
        (ShapeId::S9, "S9 case (iii)") => match_s9_rank_one(f, alpha?)?,
        (ShapeId::S4, _) => match_s4(f, alpha?)?,
        (ShapeId::S3, _) => match_s3(f, fam)?,
        (ShapeId::S2, _) => match_s2(f)?,
        (ShapeId::S1, _) => match_s1(f)?,
        (ShapeId::S5, _) => match_s5(f, alpha?)?,
        _ => return None,
    };
    // Only values the family actually declares, plus exact constraints.
    for name in assignment.keys() {
        match fam.param(name) {
            Some(p) if p.kind.is_scalar() => {}
            _ => return None,
        }
    }
    fam.constraints.check(&assignment).ok()?;
    Some(assignment)
}

/// α = c·(m - 1), f = γ·a + c²·(m - 1). On D* the γ·a part must be absent.
fn match_s6(
    f: &ExpPoly,
    alpha: &ExpPoly,
    fam: &SolutionFamily,
) -> Option<BTreeMap<String, Scalar>> {
    let a_lf = LinearForm::of(alpha)?;
    if !a_lf.adds.is_empty() || a_lf.exps.len() > 1 {
        return None;
    }
    let (c, m) = match a_lf.exps.iter().next() {
        Some((id, coeff)) => {
            if a_lf.constant != -coeff.clone() {
                return None;
            }
            (coeff.clone(), Some(*id))
        }
        None => {
            if !a_lf.constant.is_zero() {
                return None;
            }
            (Scalar::zero(), None)
        }
    };
    let f_lf = LinearForm::of(f)?;
    let c_sq = &c * &c;
    match m {
        Some(id) => {
            if f_lf.exps.len() > 1 || f_lf.exps.get(&id).cloned().unwrap_or_else(Scalar::zero) != c_sq
            {
                return None;
            }
            if f_lf.constant != -c_sq.clone() {
                return None;
            }
        }
        None => {
            if !f_lf.exps.is_empty() || !f_lf.constant.is_zero() {
                return None;
            }
        }
    }
    let has_gamma = fam.param("gamma").is_some();
    let gamma = match f_lf.adds.len() {
        0 => Scalar::zero(),
        1 => f_lf.adds.values().next().cloned().expect("one entry"),
        _ => Scalar::one(), // a is taken to be the whole additive combination
    };
    if !has_gamma && !f_lf.adds.is_empty() {
        return None; // D* family has no logarithmic part
    }
    let mut out = BTreeMap::from([("alpha".to_string(), c)]);
    if has_gamma {
        out.insert("gamma".to_string(), gamma);
    }
    Some(out)
}

/// f = c·m, α = (c - c²)·m.
fn match_s7s8(f: &ExpPoly, alpha: &ExpPoly) -> Option<BTreeMap<String, Scalar>> {
    let f_lf = LinearForm::of(f)?;
    if !f_lf.adds.is_empty() || f_lf.exps.len() > 1 {
        return None;
    }
    let (c, m) = single_exp_coeff(&f_lf)?;
    let a_lf = LinearForm::of(alpha)?;
    if !a_lf.adds.is_empty() {
        return None;
    }
    let expected = &c - &(&c * &c);
    let (a_val, a_m) = single_exp_coeff(&a_lf)?;
    if a_val != expected {
        return None;
    }
    if !a_val.is_zero() && !c.is_zero() && a_m != m {
        return None;
    }
    Some(BTreeMap::from([("c".to_string(), c)]))
}

/// For a form with no additive part: the coefficient on its one
/// exponential, treating a bare constant as the trivial exponential.
fn single_exp_coeff(lf: &LinearForm) -> Option<(Scalar, Option<ExpId>)> {
    match (lf.exps.len(), lf.constant.is_zero()) {
        (0, _) => Some((lf.constant.clone(), None)),
        (1, true) => {
            let (id, c) = lf.exps.iter().next().expect("one entry");
            Some((c.clone(), Some(*id)))
        }
        _ => None,
    }
}

/// f = γ·m, α = c·m with γ = γ² + c².
fn match_s9_rank_one(f: &ExpPoly, alpha: &ExpPoly) -> Option<BTreeMap<String, Scalar>> {
    let f_lf = LinearForm::of(f)?;
    let a_lf = LinearForm::of(alpha)?;
    if !f_lf.adds.is_empty() || !a_lf.adds.is_empty() {
        return None;
    }
    let (gamma, fm) = single_exp_coeff(&f_lf)?;
    let (c, am) = single_exp_coeff(&a_lf)?;
    if !gamma.is_zero() && !c.is_zero() && fm != am {
        return None;
    }
    Some(BTreeMap::from([("alpha".to_string(), c), ("gamma".to_string(), gamma)]))
}

/// f = (γ₁·a + γ₂)·m, α = (α₁·a + α₂)·m with a common exponential factor.
fn match_s9_affine(f: &ExpPoly, alpha: &ExpPoly) -> Option<BTreeMap<String, Scalar>> {
    let (fm, f_parts) = strip_common_exp(f)?;
    let (am, a_parts) = strip_common_exp(alpha)?;
    if !f.is_zero() && !alpha.is_zero() && fm != am {
        return None;
    }
    let (gamma1, gamma2) = affine_coeffs(&f_parts)?;
    let (alpha1, alpha2) = affine_coeffs(&a_parts)?;
    Some(BTreeMap::from([
        ("alpha1".to_string(), alpha1),
        ("alpha2".to_string(), alpha2),
        ("gamma1".to_string(), gamma1),
        ("gamma2".to_string(), gamma2),
    ]))
}

/// Factors out the exponential atom shared by every monomial (None for the
/// trivial exponential); returns what multiplies it, keyed by additive part.
fn strip_common_exp(p: &ExpPoly) -> Option<(Option<ExpId>, BTreeMap<Option<AddId>, Scalar>)> {
    let mut common: Option<ExpId> = None;
    let mut parts: BTreeMap<Option<AddId>, Scalar> = BTreeMap::new();
    for (mono, coeff) in p.terms() {
        let mut add_part: Option<AddId> = None;
        let mut exp_part: Option<ExpId> = None;
        for (atom, e) in mono.atoms() {
            match (atom, e) {
                (Atom::Add(id, VarCopy::X), 1) if add_part.is_none() => add_part = Some(*id),
                (Atom::Exp(id, VarCopy::X), 1) if exp_part.is_none() => exp_part = Some(*id),
                _ => return None,
            }
        }
        match (common, exp_part) {
            (None, m) => common = m,
            (Some(c), Some(m)) if c == m => {}
            // A constant term with no exponential cannot share a nontrivial m.
            _ => return None,
        }
        parts.insert(add_part, coeff.clone());
    }
    Some((common, parts))
}

fn affine_coeffs(parts: &BTreeMap<Option<AddId>, Scalar>) -> Option<(Scalar, Scalar)> {
    let mut linear = Scalar::zero();
    let mut constant = Scalar::zero();
    let mut add_seen: Option<AddId> = None;
    for (key, coeff) in parts {
        match key {
            None => constant = coeff.clone(),
            Some(id) => {
                if add_seen.is_some() && add_seen != Some(*id) {
                    return None;
                }
                add_seen = Some(*id);
                linear = coeff.clone();
            }
        }
    }
    Some((linear, constant))
}

/// f = γ₁·m₁ + γ₂·m₂, α = α₁·m₁ + α₂·m₂ with m₁, m₂ independent. The slot
/// order is the canonical symbol order, the trivial exponential first.
fn match_s9_two_exp(f: &ExpPoly, alpha: &ExpPoly) -> Option<BTreeMap<String, Scalar>> {
    let f_lf = LinearForm::of(f)?;
    let a_lf = LinearForm::of(alpha)?;
    if !f_lf.adds.is_empty() || !a_lf.adds.is_empty() {
        return None;
    }
    let mut slots: Vec<Option<ExpId>> = Vec::new();
    for lf in [&f_lf, &a_lf] {
        if !lf.constant.is_zero() && !slots.contains(&None) {
            slots.push(None);
        }
        for id in lf.exps.keys() {
            if !slots.contains(&Some(*id)) {
                slots.push(Some(*id));
            }
        }
    }
    if slots.len() > 2 {
        return None;
    }
    slots.sort();
    let coeff_in = |lf: &LinearForm, slot: &Option<ExpId>| match slot {
        None => lf.constant.clone(),
        Some(id) => lf.exps.get(id).cloned().unwrap_or_else(Scalar::zero),
    };
    let get = |i: usize, lf: &LinearForm| {
        slots.get(i).map(|s| coeff_in(lf, s)).unwrap_or_else(Scalar::zero)
    };
    Some(BTreeMap::from([
        ("gamma1".to_string(), get(0, &f_lf)),
        ("gamma2".to_string(), get(1, &f_lf)),
        ("alpha1".to_string(), get(0, &a_lf)),
        ("alpha2".to_string(), get(1, &a_lf)),
    ]))
}

/// f = a + γ, α = -γ with a additive.
fn match_s4(f: &ExpPoly, alpha: &ExpPoly) -> Option<BTreeMap<String, Scalar>> {
    let a_lf = LinearForm::of(alpha)?;
    if !a_lf.adds.is_empty() || !a_lf.exps.is_empty() {
        return None;
    }
    let gamma = -a_lf.constant.clone();
    let f_lf = LinearForm::of(f)?;
    if !f_lf.exps.is_empty() || f_lf.constant != gamma {
        return None;
    }
    Some(BTreeMap::from([("gamma".to_string(), gamma)]))
}

/// f logarithmic (an additive combination); with 0 in the domain f must
/// vanish. The given scalar alpha is 0 by the family constraint.
fn match_s3(f: &ExpPoly, fam: &SolutionFamily) -> Option<BTreeMap<String, Scalar>> {
    if fam.domain.class.contains_zero() {
        if !f.is_zero() {
            return None;
        }
    } else {
        let lf = LinearForm::of(f)?;
        if !lf.constant.is_zero() || !lf.exps.is_empty() {
            return None;
        }
    }
    Some(BTreeMap::from([("alpha".to_string(), Scalar::zero())]))
}

/// f = (alpha/2)·x² + a(x): the embedded square pins the scalar alpha.
fn match_s2(f: &ExpPoly) -> Option<BTreeMap<String, Scalar>> {
    let embed = f.table().embedding_additive()?;
    let mut alpha_half: Option<Scalar> = None;
    for (mono, coeff) in f.terms() {
        let atoms: Vec<(&Atom, &u32)> = mono.atoms().collect();
        match atoms.as_slice() {
            [(Atom::Add(id, VarCopy::X), 2)] if *id == embed => {
                alpha_half = Some(coeff.clone());
            }
            [(Atom::Add(_, VarCopy::X), 1)] => {}
            _ => return None,
        }
    }
    let alpha = alpha_half.map_or_else(Scalar::zero, |h| &h * &Scalar::from_int(2));
    Some(BTreeMap::from([("alpha".to_string(), alpha)]))
}

/// f = 1/2·B(x,x) + a(x).
fn match_s1(f: &ExpPoly) -> Option<BTreeMap<String, Scalar>> {
    let mut saw_diag = false;
    for (mono, coeff) in f.terms() {
        let atoms: Vec<(&Atom, &u32)> = mono.atoms().collect();
        match atoms.as_slice() {
            [(Atom::Diag(_, VarCopy::X), 1)] => {
                if coeff != &Scalar::from_ratio(1, 2) {
                    return None;
                }
                saw_diag = true;
            }
            [(Atom::Add(_, VarCopy::X), 1)] => {}
            _ => return None,
        }
    }
    let _ = saw_diag; // B may be zero, in which case f is purely additive
    Some(BTreeMap::new())
}

/// α = a + γ with a linked to a biadditive form, f = 1/2·a(x²) + A(x) - γ.
fn match_s5(f: &ExpPoly, alpha: &ExpPoly) -> Option<BTreeMap<String, Scalar>> {
    let table = alpha.table();
    let a_lf = LinearForm::of(alpha)?;
    if !a_lf.exps.is_empty() || a_lf.adds.len() != 1 {
        return None;
    }
    let (&a_id, coeff) = a_lf.adds.iter().next().expect("one entry");
    if !coeff.is_one() {
        return None;
    }
    let linked = table.biadditive_from(a_id)?;
    let gamma = a_lf.constant.clone();
    for (mono, coeff) in f.terms() {
        let atoms: Vec<(&Atom, &u32)> = mono.atoms().collect();
        match atoms.as_slice() {
            [] => {
                if coeff != &-gamma.clone() {
                    return None;
                }
            }
            [(Atom::Diag(id, VarCopy::X), 1)] if *id == linked => {
                if coeff != &Scalar::from_ratio(1, 2) {
                    return None;
                }
            }
            [(Atom::Add(_, VarCopy::X), 1)] => {}
            _ => return None,
        }
    }
    Some(BTreeMap::from([("gamma".to_string(), gamma)]))
}
