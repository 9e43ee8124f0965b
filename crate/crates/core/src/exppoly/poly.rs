//! Sparse exponential polynomials with exact ℚ(i) coefficients.
//!
//! A monomial is a finite multiset of atoms (symbol instantiated at a
//! variable copy); a polynomial maps monomials to nonzero coefficients.
//! Normal form is maintained on every operation, so two polynomials are
//! equal exactly when their monomial maps are.

use super::symbols::{AddId, BiaddId, ExpId, SymbolTable, VarCopy};
use crate::scalar::Scalar;
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Polynomial degree cap. The results here never need degree above 3; the
/// cap catches runaway expansions early instead of letting them grow.
pub const MAX_DEGREE: u32 = 8;

/// One multiplicand of a monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// `a(x)` or `a(y)` for an additive symbol.
    Add(AddId, VarCopy),
    /// `B(x,x)` or `B(y,y)` — the diagonal of a biadditive symbol.
    Diag(BiaddId, VarCopy),
    /// `B(x,y)` — the cross value of a biadditive symbol (two-variable only).
    Cross(BiaddId),
    /// `m(x)` or `m(y)` for an exponential symbol.
    Exp(ExpId, VarCopy),
}

impl Atom {
    /// Contribution to polynomial degree per unit exponent. Exponentials do
    /// not count: a product of exponentials is again an exponential.
    fn degree_weight(self) -> u32 {
        match self {
            Atom::Add(..) => 1,
            Atom::Diag(..) | Atom::Cross(_) => 2,
            Atom::Exp(..) => 0,
        }
    }

    fn is_two_variable(self) -> bool {
        matches!(self, Atom::Cross(_)) || matches!(self, Atom::Add(_, VarCopy::Y))
            || matches!(self, Atom::Diag(_, VarCopy::Y))
            || matches!(self, Atom::Exp(_, VarCopy::Y))
    }
}

/// Number of variable copies a polynomial lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Arity {
    One,
    Two,
}

/// A monomial: sorted atom → positive exponent map. The empty monomial is
/// the constant `𝟏` (equivalently the identically-one exponential `m₀`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(BTreeMap<Atom, u32>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn atom(a: Atom) -> Monomial {
        Monomial(BTreeMap::from([(a, 1)]))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&Atom, &u32)> {
        self.0.iter()
    }

    pub fn exponent(&self, a: &Atom) -> u32 {
        self.0.get(a).copied().unwrap_or(0)
    }

    /// Polynomial degree: additive atoms count 1, biadditive atoms 2,
    /// exponential atoms 0.
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(a, e)| a.degree_weight() * e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (a, e) in &other.0 {
            *out.entry(*a).or_insert(0) += e;
        }
        Monomial(out)
    }

    fn insert_power(&mut self, a: Atom, e: u32) {
        if e > 0 {
            *self.0.entry(a).or_insert(0) += e;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("symbol-table mismatch between operands")]
    TableMismatch,
    #[error("arity mismatch: expected {expected:?} operand")]
    ArityMismatch { expected: Arity },
    #[error("polynomial degree {degree} exceeds the cap {MAX_DEGREE}")]
    DegreeBound { degree: u32 },
    #[error("not representable in the symbol algebra: {0}")]
    NotRepresentable(&'static str),
    #[error("unknown `{0}` has no assignment")]
    UnassignedUnknown(&'static str),
    #[error("known `{0}` was not provided")]
    MissingKnown(&'static str),
    #[error("equation shape {0} is not supported by the residual machinery")]
    UnsupportedShape(crate::eqdsl::ShapeId),
    #[error("{0}")]
    InvalidInput(String),
}

/// Sparse exponential polynomial in one or two variable copies.
#[derive(Clone, PartialEq, Eq)]
pub struct ExpPoly {
    table: SymbolTable,
    arity: Arity,
    terms: BTreeMap<Monomial, Scalar>,
}

impl ExpPoly {
    pub fn zero(table: &SymbolTable, arity: Arity) -> ExpPoly {
        ExpPoly { table: table.clone(), arity, terms: BTreeMap::new() }
    }

    pub fn constant(table: &SymbolTable, arity: Arity, c: Scalar) -> ExpPoly {
        let mut p = ExpPoly::zero(table, arity);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn one(table: &SymbolTable, arity: Arity) -> ExpPoly {
        ExpPoly::constant(table, arity, Scalar::one())
    }

    /// Single atom with coefficient 1. One-variable constructors use copy X.
    pub fn atom(table: &SymbolTable, arity: Arity, a: Atom) -> ExpPoly {
        debug_assert!(
            arity == Arity::Two || !a.is_two_variable(),
            "two-variable atom in a one-variable polynomial"
        );
        let mut p = ExpPoly::zero(table, arity);
        p.terms.insert(Monomial::atom(a), Scalar::one());
        p
    }

    pub fn additive(table: &SymbolTable, id: AddId) -> ExpPoly {
        ExpPoly::atom(table, Arity::One, Atom::Add(id, VarCopy::X))
    }

    pub fn exponential(table: &SymbolTable, id: ExpId) -> ExpPoly {
        ExpPoly::atom(table, Arity::One, Atom::Exp(id, VarCopy::X))
    }

    /// `B(x,x)` as a one-variable polynomial.
    pub fn diagonal(table: &SymbolTable, id: BiaddId) -> ExpPoly {
        ExpPoly::atom(table, Arity::One, Atom::Diag(id, VarCopy::X))
    }

    /// `B(x,y)` as a two-variable polynomial.
    pub fn cross(table: &SymbolTable, id: BiaddId) -> ExpPoly {
        ExpPoly::atom(table, Arity::Two, Atom::Cross(id))
    }

    pub fn table(&self) -> &SymbolTable {
        &self.table
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    fn check_compatible(&self, other: &ExpPoly) -> Result<(), PolyError> {
        if self.table != other.table {
            return Err(PolyError::TableMismatch);
        }
        if self.arity != other.arity {
            return Err(PolyError::ArityMismatch { expected: self.arity });
        }
        Ok(())
    }

    fn insert_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Coefficient-wise sum.
    pub fn add(&self, other: &ExpPoly) -> Result<ExpPoly, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ExpPoly) -> Result<ExpPoly, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ExpPoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> ExpPoly {
        if c.is_zero() {
            return ExpPoly::zero(&self.table, self.arity);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = &*v * c;
        }
        out
    }

    /// Distributed product. Exponents add per atom; distinct exponential
    /// symbols never merge. Fails when a product monomial exceeds the
    /// degree cap.
    pub fn mul(&self, other: &ExpPoly) -> Result<ExpPoly, PolyError> {
        self.check_compatible(other)?;
        let mut out = ExpPoly::zero(&self.table, self.arity);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let d = m.degree();
                if d > MAX_DEGREE {
                    return Err(PolyError::DegreeBound { degree: d });
                }
                out.insert_term(m, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<ExpPoly, PolyError> {
        let mut acc = ExpPoly::one(&self.table, self.arity);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Re-tags a one-variable polynomial as living at the given copy of the
    /// doubled (x, y) algebra.
    pub fn inject(&self, copy: VarCopy) -> Result<ExpPoly, PolyError> {
        if self.arity != Arity::One {
            return Err(PolyError::ArityMismatch { expected: Arity::One });
        }
        let mut out = ExpPoly::zero(&self.table, Arity::Two);
        for (m, c) in &self.terms {
            let mut nm = Monomial::one();
            for (a, e) in m.atoms() {
                let na = match *a {
                    Atom::Add(id, _) => Atom::Add(id, copy),
                    Atom::Diag(id, _) => Atom::Diag(id, copy),
                    Atom::Exp(id, _) => Atom::Exp(id, copy),
                    Atom::Cross(_) => unreachable!("cross atom in one-variable polynomial"),
                };
                nm.insert_power(na, *e);
            }
            out.insert_term(nm, c.clone());
        }
        Ok(out)
    }

    /// Substitutes the group product `x∘y` for the variable: every additive
    /// atom expands to `a(x)+a(y)`, every exponential atom to `m(x)·m(y)`,
    /// and every biadditive diagonal to `B(x,x)+2B(x,y)+B(y,y)`.
    pub fn expand_on_product(&self) -> Result<ExpPoly, PolyError> {
        if self.arity != Arity::One {
            return Err(PolyError::ArityMismatch { expected: Arity::One });
        }
        let table = &self.table;
        let mut out = ExpPoly::zero(table, Arity::Two);
        for (m, c) in &self.terms {
            let mut acc = ExpPoly::constant(table, Arity::Two, c.clone());
            for (a, e) in m.atoms() {
                let factor = match *a {
                    Atom::Add(id, _) => {
                        let ax = ExpPoly::atom(table, Arity::Two, Atom::Add(id, VarCopy::X));
                        let ay = ExpPoly::atom(table, Arity::Two, Atom::Add(id, VarCopy::Y));
                        ax.add(&ay)?.pow(*e)?
                    }
                    Atom::Exp(id, _) => {
                        let mut mono = Monomial::one();
                        mono.insert_power(Atom::Exp(id, VarCopy::X), *e);
                        mono.insert_power(Atom::Exp(id, VarCopy::Y), *e);
                        let mut p = ExpPoly::zero(table, Arity::Two);
                        p.insert_term(mono, Scalar::one());
                        p
                    }
                    Atom::Diag(id, _) => {
                        let qx = ExpPoly::atom(table, Arity::Two, Atom::Diag(id, VarCopy::X));
                        let qy = ExpPoly::atom(table, Arity::Two, Atom::Diag(id, VarCopy::Y));
                        let cr = ExpPoly::atom(table, Arity::Two, Atom::Cross(id))
                            .scale(&Scalar::from_int(2));
                        qx.add(&cr)?.add(&qy)?.pow(*e)?
                    }
                    Atom::Cross(_) => unreachable!("cross atom in one-variable polynomial"),
                };
                acc = acc.mul(&factor)?;
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    /// Substitutes the codomain field product `x·y` for the variable, on a
    /// domain whose group operation is `+`. An additive symbol composed
    /// with the product becomes its linked biadditive cross atom; the
    /// identity embedding becomes `x·y` itself. Exponential and diagonal
    /// atoms have no such expansion.
    pub fn compose_with_field_product(&self) -> Result<ExpPoly, PolyError> {
        if self.arity != Arity::One {
            return Err(PolyError::ArityMismatch { expected: Arity::One });
        }
        let table = &self.table;
        let mut out = ExpPoly::zero(table, Arity::Two);
        for (m, c) in &self.terms {
            let mut nm = Monomial::one();
            for (a, e) in m.atoms() {
                match *a {
                    Atom::Add(id, _) if table.is_additive_embedding(id) => {
                        nm.insert_power(Atom::Add(id, VarCopy::X), *e);
                        nm.insert_power(Atom::Add(id, VarCopy::Y), *e);
                    }
                    Atom::Add(id, _) => match table.biadditive_from(id) {
                        Some(b) => nm.insert_power(Atom::Cross(b), *e),
                        None => {
                            return Err(PolyError::NotRepresentable(
                                "additive symbol without a linked biadditive form under x*y",
                            ))
                        }
                    },
                    Atom::Exp(..) => {
                        return Err(PolyError::NotRepresentable(
                            "exponential symbol composed with the field product",
                        ))
                    }
                    Atom::Diag(..) => {
                        return Err(PolyError::NotRepresentable(
                            "biadditive diagonal composed with the field product",
                        ))
                    }
                    Atom::Cross(_) => unreachable!("cross atom in one-variable polynomial"),
                }
            }
            let d = nm.degree();
            if d > MAX_DEGREE {
                return Err(PolyError::DegreeBound { degree: d });
            }
            out.insert_term(nm, c.clone());
        }
        Ok(out)
    }

    /// Exact evaluation under an atom assignment. Used by tests and the
    /// oracle to confirm that a symbolically-zero polynomial vanishes at
    /// every concrete instantiation.
    pub fn eval_with(&self, value_of: &mut dyn FnMut(Atom) -> Scalar) -> Scalar {
        let mut total = Scalar::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (a, e) in m.atoms() {
                term *= &value_of(*a).pow(*e);
            }
            total += &term;
        }
        total
    }
}

impl fmt::Display for ExpPoly {
    /// Canonical dump: monomials in their sorted order, deterministic.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let mut coeff = c.clone();
            let negative_real = coeff.is_real() && coeff.re().is_negative();
            if idx == 0 {
                if negative_real {
                    write!(f, "-")?;
                    coeff = -coeff;
                }
            } else if negative_real {
                write!(f, " - ")?;
                coeff = -coeff;
            } else {
                write!(f, " + ")?;
            }
            // A coefficient of the form a+bi needs parentheses in a product.
            let needs_parens = !coeff.re().is_zero() && !coeff.im().is_zero();
            let coeff_str =
                if needs_parens { format!("({coeff})") } else { format!("{coeff}") };
            if m.is_one() {
                write!(f, "{coeff_str}")?;
            } else {
                if !coeff.is_one() {
                    write!(f, "{coeff_str}*")?;
                }
                let atoms: Vec<String> = m
                    .atoms()
                    .map(|(a, e)| {
                        let base = self.atom_name(*a);
                        if *e == 1 {
                            base
                        } else {
                            format!("{base}^{e}")
                        }
                    })
                    .collect();
                write!(f, "{}", atoms.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl ExpPoly {
    fn atom_name(&self, a: Atom) -> String {
        match a {
            Atom::Add(id, copy) => {
                if self.table.is_additive_embedding(id) {
                    copy.var_name().to_string()
                } else {
                    format!("{}({})", self.table.additive_name(id), copy.var_name())
                }
            }
            Atom::Exp(id, copy) => {
                if self.table.is_exponential_embedding(id) {
                    copy.var_name().to_string()
                } else {
                    format!("{}({})", self.table.exponential_name(id), copy.var_name())
                }
            }
            Atom::Diag(id, copy) => {
                let v = copy.var_name();
                format!("{}({v},{v})", self.table.biadditive_name(id))
            }
            Atom::Cross(id) => format!("{}(x,y)", self.table.biadditive_name(id)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_table() -> (SymbolTable, AddId, ExpId) {
        let mut b = SymbolTable::builder();
        let a1 = b.additive("a1");
        let m1 = b.exponential("m1");
        (b.build(), a1, m1)
    }

    #[test]
    fn add_identity_and_cancellation() {
        let (t, a1, m1) = sample_table();
        let p = ExpPoly::additive(&t, a1)
            .mul(&ExpPoly::exponential(&t, m1))
            .unwrap()
            .scale(&Scalar::from_int(2));
        let zero = ExpPoly::zero(&t, Arity::One);
        assert_eq!(p.add(&zero).unwrap(), p);
        assert!(p.add(&p.neg()).unwrap().is_zero());
    }

    #[test]
    fn add_disjoint_support() {
        let (t, a1, _) = sample_table();
        let a = ExpPoly::additive(&t, a1);
        let a_sq = a.mul(&a).unwrap();
        let sum = a.add(&a_sq).unwrap();
        assert_eq!(sum.term_count(), 2);
        assert_eq!(sum.degree(), 2);
    }

    #[test]
    fn mul_tracks_exponent_pairs() {
        let (t, a1, m1) = sample_table();
        let am = ExpPoly::additive(&t, a1).mul(&ExpPoly::exponential(&t, m1)).unwrap();
        let sq = am.mul(&am).unwrap();
        assert_eq!(sq.term_count(), 1);
        let (mono, coeff) = sq.terms().next().unwrap();
        assert_eq!(coeff, &Scalar::one());
        assert_eq!(mono.exponent(&Atom::Add(a1, VarCopy::X)), 2);
        assert_eq!(mono.exponent(&Atom::Exp(m1, VarCopy::X)), 2);
    }

    #[test]
    fn binomial_square_of_exponential_shift() {
        // (m1 - 1)·(m1 - 1) = m1² - 2·m1 + 1, by direct distribution.
        let (t, _, m1) = sample_table();
        let m = ExpPoly::exponential(&t, m1);
        let shifted = m.sub(&ExpPoly::one(&t, Arity::One)).unwrap();
        let sq = shifted.mul(&shifted).unwrap();

        let mut expected = ExpPoly::one(&t, Arity::One);
        expected = expected
            .add(&m.mul(&m).unwrap())
            .unwrap()
            .add(&m.scale(&Scalar::from_int(-2)))
            .unwrap();
        assert_eq!(sq, expected);
        assert_eq!(format!("{sq}"), "1 - 2*m1(x) + m1(x)^2");
    }

    #[test]
    fn degree_cap_enforced() {
        let (t, a1, _) = sample_table();
        let a = ExpPoly::additive(&t, a1);
        let p4 = a.pow(4).unwrap();
        let err = p4.mul(&p4.mul(&a).unwrap()).unwrap_err();
        assert!(matches!(err, PolyError::DegreeBound { degree: 9 }));
    }

    #[test]
    fn table_mismatch_detected() {
        let (t1, a1, _) = sample_table();
        let mut b = SymbolTable::builder();
        let a2 = b.additive("other");
        let t2 = b.build();
        let err = ExpPoly::additive(&t1, a1).add(&ExpPoly::additive(&t2, a2)).unwrap_err();
        assert_eq!(err, PolyError::TableMismatch);
    }

    #[test]
    fn expand_on_product_additive_rule() {
        let (t, a1, _) = sample_table();
        let a = ExpPoly::additive(&t, a1);
        let e = a.expand_on_product().unwrap();
        let ax = ExpPoly::atom(&t, Arity::Two, Atom::Add(a1, VarCopy::X));
        let ay = ExpPoly::atom(&t, Arity::Two, Atom::Add(a1, VarCopy::Y));
        assert_eq!(e, ax.add(&ay).unwrap());
    }

    #[test]
    fn expand_on_product_binomial() {
        let (t, a1, _) = sample_table();
        let a = ExpPoly::additive(&t, a1);
        let e = a.pow(2).unwrap().expand_on_product().unwrap();
        let ax = ExpPoly::atom(&t, Arity::Two, Atom::Add(a1, VarCopy::X));
        let ay = ExpPoly::atom(&t, Arity::Two, Atom::Add(a1, VarCopy::Y));
        let expected = ax
            .pow(2)
            .unwrap()
            .add(&ax.mul(&ay).unwrap().scale(&Scalar::from_int(2)))
            .unwrap()
            .add(&ay.pow(2).unwrap())
            .unwrap();
        assert_eq!(e, expected);
    }

    #[test]
    fn expand_on_product_mixed_term_matches_instantiation() {
        // a1·m1 expands to (a1(x)+a1(y))·m1(x)m1(y); checked against a
        // concrete instantiation on (ℤ, +) with a1(k) = 2k, m1(k) = 3^k.
        let (t, a1, m1) = sample_table();
        let p = ExpPoly::additive(&t, a1).mul(&ExpPoly::exponential(&t, m1)).unwrap();
        let e = p.expand_on_product().unwrap();

        let a_val = |k: i64| Scalar::from_int(2 * k);
        let m_val = |k: i64| Scalar::from_int(3).pow(k as u32);
        for (kx, ky) in [(0i64, 0i64), (1, 2), (3, 1), (2, 2)] {
            let direct = p.eval_with(&mut |atom| match atom {
                Atom::Add(id, VarCopy::X) if id == a1 => a_val(kx + ky),
                Atom::Exp(id, VarCopy::X) if id == m1 => m_val(kx + ky),
                _ => unreachable!(),
            });
            let expanded = e.eval_with(&mut |atom| match atom {
                Atom::Add(id, copy) if id == a1 => a_val(if copy == VarCopy::X { kx } else { ky }),
                Atom::Exp(id, copy) if id == m1 => m_val(if copy == VarCopy::X { kx } else { ky }),
                _ => unreachable!(),
            });
            assert_eq!(direct, expanded);
        }
    }

    #[test]
    fn expand_diagonal_polarizes() {
        let mut b = SymbolTable::builder();
        let bf = b.biadditive("B");
        let t = b.build();
        let q = ExpPoly::diagonal(&t, bf);
        let e = q.expand_on_product().unwrap();
        let qx = ExpPoly::atom(&t, Arity::Two, Atom::Diag(bf, VarCopy::X));
        let qy = ExpPoly::atom(&t, Arity::Two, Atom::Diag(bf, VarCopy::Y));
        let cr = ExpPoly::cross(&t, bf).scale(&Scalar::from_int(2));
        assert_eq!(e, qx.add(&cr).unwrap().add(&qy).unwrap());
    }

    #[test]
    fn compose_with_field_product_links() {
        let mut b = SymbolTable::builder();
        let a = b.additive("a");
        let bb = b.biadditive_of("Ba", a);
        let t = b.build();
        let p = ExpPoly::additive(&t, a).add(&ExpPoly::one(&t, Arity::One)).unwrap();
        let composed = p.compose_with_field_product().unwrap();
        let expected =
            ExpPoly::cross(&t, bb).add(&ExpPoly::one(&t, Arity::Two)).unwrap();
        assert_eq!(composed, expected);
    }

    #[test]
    fn compose_rejects_exponentials() {
        let (t, _, m1) = sample_table();
        let err = ExpPoly::exponential(&t, m1).compose_with_field_product().unwrap_err();
        assert!(matches!(err, PolyError::NotRepresentable(_)));
    }

    #[test]
    fn display_is_deterministic() {
        let (t, a1, m1) = sample_table();
        let p = ExpPoly::additive(&t, a1)
            .scale(&Scalar::from_ratio(1, 2))
            .add(&ExpPoly::exponential(&t, m1).scale(&Scalar::i()))
            .unwrap()
            .sub(&ExpPoly::one(&t, Arity::One))
            .unwrap();
        assert_eq!(format!("{p}"), "-1 + 1/2*a1(x) + i*m1(x)");
    }
}
