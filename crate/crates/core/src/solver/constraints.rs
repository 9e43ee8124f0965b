//! Polynomial constraint systems on family parameters and their exact
//! branch solutions.
//!
//! The systems that arise have at most four scalar parameters and equations
//! of total degree at most two. They are solved by structured elimination:
//! linear substitution, factoring over ℚ(i), pairwise combination, a
//! square-elimination step for bilinear couplings, and a final quadratic
//! solve whose root is kept as a symbolic surd. Every branch is verified by
//! exact back-substitution before it is returned.

use crate::scalar::Scalar;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub type ParamName = String;

/// Monomial over parameter names.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct ParamMono(BTreeMap<ParamName, u32>);

impl ParamMono {
    fn one() -> Self {
        Self::default()
    }

    fn var(name: &str) -> Self {
        ParamMono(BTreeMap::from([(name.to_string(), 1)]))
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = self.0.clone();
        for (p, e) in &other.0 {
            *out.entry(p.clone()).or_insert(0) += e;
        }
        ParamMono(out)
    }

    fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    fn degree_in(&self, p: &str) -> u32 {
        self.0.get(p).copied().unwrap_or(0)
    }

    fn without(&self, p: &str) -> Self {
        let mut out = self.0.clone();
        out.remove(p);
        ParamMono(out)
    }
}

/// Multivariate polynomial over ℚ(i) in named parameters.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ParamPoly {
    terms: BTreeMap<ParamMono, Scalar>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = Self::zero();
        p.insert(ParamMono::one(), c);
        p
    }

    pub fn var(name: &str) -> Self {
        let mut p = Self::zero();
        p.insert(ParamMono::var(name), Scalar::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value if the polynomial has no parameters.
    pub fn as_constant(&self) -> Option<Scalar> {
        if self.terms.is_empty() {
            return Some(Scalar::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&ParamMono::one()) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn vars(&self) -> BTreeSet<ParamName> {
        self.terms.keys().flat_map(|m| m.0.keys().cloned()).collect()
    }

    pub fn degree_in(&self, p: &str) -> u32 {
        self.terms.keys().map(|m| m.degree_in(p)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(ParamMono::degree).max().unwrap_or(0)
    }

    fn insert(&mut self, m: ParamMono, c: Scalar) {
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

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = &*v * c;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.insert(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(Scalar::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Replaces `p` by `value` everywhere.
    pub fn subst(&self, p: &str, value: &ParamPoly) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.degree_in(p);
            let rest = m.without(p);
            let mut term = Self::zero();
            term.insert(rest, c.clone());
            out = out.add(&term.mul(&value.pow(e)));
        }
        out
    }

    /// Exact evaluation; every variable must be present in `vals`.
    pub fn eval(&self, vals: &BTreeMap<ParamName, Scalar>) -> Result<Scalar, ParamName> {
        let mut total = Scalar::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (p, e) in &m.0 {
                let v = vals.get(p).ok_or_else(|| p.clone())?;
                term *= &v.pow(*e);
            }
            total += &term;
        }
        Ok(total)
    }

    /// Splits into `(coefficient-of-p^1, remainder)` when the polynomial is
    /// linear in `p`; the coefficient may involve other parameters.
    fn split_linear(&self, p: &str) -> Option<(ParamPoly, ParamPoly)> {
        if self.degree_in(p) != 1 {
            return None;
        }
        let mut coeff = ParamPoly::zero();
        let mut rest = ParamPoly::zero();
        for (m, c) in &self.terms {
            if m.degree_in(p) == 1 {
                coeff.insert(m.without(p), c.clone());
            } else {
                rest.insert(m.clone(), c.clone());
            }
        }
        Some((coeff, rest))
    }

    /// Coefficients `(A, B, C)` of `A·p² + B·p + C`; `A` must be a nonzero
    /// scalar constant, `B` and `C` may involve the other parameters.
    fn split_quadratic(&self, p: &str) -> Option<(Scalar, ParamPoly, ParamPoly)> {
        if self.degree_in(p) != 2 {
            return None;
        }
        let mut a = ParamPoly::zero();
        let mut b = ParamPoly::zero();
        let mut c = ParamPoly::zero();
        for (m, coeff) in &self.terms {
            match m.degree_in(p) {
                2 => a.insert(m.without(p), coeff.clone()),
                1 => b.insert(m.without(p), coeff.clone()),
                _ => c.insert(m.clone(), coeff.clone()),
            }
        }
        let a = a.as_constant()?;
        if a.is_zero() {
            return None;
        }
        Some((a, b, c))
    }

    /// Monic-like normal form for equation deduplication: divides by the
    /// first nonzero coefficient.
    fn normalized(&self) -> Self {
        match self.terms.values().next() {
            None => Self::zero(),
            Some(first) => self.scale(&first.inv()),
        }
    }

    /// Rational content, used to pull perfect-square factors out of
    /// radicands for presentation.
    fn rational_content(&self) -> Option<num_rational::BigRational> {
        use num_bigint::BigInt;
        use num_integer::Integer;
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::from(1);
        for c in self.terms.values() {
            if !c.is_real() {
                return None;
            }
            num_gcd = num_gcd.gcd(c.re().numer());
            den_lcm = den_lcm.lcm(c.re().denom());
        }
        if num_gcd.is_zero() {
            None
        } else {
            Some(num_rational::BigRational::new(num_gcd, den_lcm))
        }
    }
}

impl fmt::Display for ParamPoly {
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
            let complex = !coeff.re().is_zero() && !coeff.im().is_zero();
            let coeff_str = if complex { format!("({coeff})") } else { format!("{coeff}") };
            if m.0.is_empty() {
                write!(f, "{coeff_str}")?;
            } else {
                if !coeff.is_one() {
                    write!(f, "{coeff_str}*")?;
                }
                let vars: Vec<String> = m
                    .0
                    .iter()
                    .map(|(p, e)| if *e == 1 { p.clone() } else { format!("{p}^{e}") })
                    .collect();
                write!(f, "{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A system of polynomial equations over declared parameters, plus side
/// conditions that are carried as text (e.g. linear independence of m1, m2).
#[derive(Debug, Clone, Default)]
pub struct ConstraintSystem {
    pub params: Vec<ParamName>,
    pub equations: Vec<ParamPoly>,
    pub side_conditions: Vec<String>,
}

impl ConstraintSystem {
    pub fn new(params: &[&str], equations: Vec<ParamPoly>) -> Self {
        ConstraintSystem {
            params: params.iter().map(|s| s.to_string()).collect(),
            equations,
            side_conditions: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// Exact satisfaction check at a full parameter assignment. Returns the
    /// first violated equation, rendered.
    pub fn check(&self, vals: &BTreeMap<ParamName, Scalar>) -> Result<(), String> {
        for eq in &self.equations {
            match eq.eval(vals) {
                Ok(v) if v.is_zero() => {}
                Ok(v) => return Err(format!("{eq} = 0 violated (value {v})")),
                Err(p) => return Err(format!("{eq} = 0 cannot be checked: `{p}` unset")),
            }
        }
        Ok(())
    }
}

/// Closed-form value of a solved parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BranchExpr {
    Poly(ParamPoly),
    /// `base + sign·coeff·√radicand`, the radicand a polynomial in one free
    /// parameter (or constant).
    Surd { base: ParamPoly, coeff: ParamPoly, sign: i8, radicand: ParamPoly },
}

impl fmt::Display for BranchExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BranchExpr::Poly(p) => write!(f, "{p}"),
            BranchExpr::Surd { base, coeff, sign, radicand } => {
                if !base.is_zero() {
                    write!(f, "{base} ")?;
                    write!(f, "{} ", if *sign >= 0 { "+" } else { "-" })?;
                } else if *sign < 0 {
                    write!(f, "-")?;
                }
                let coeff_is_one = coeff.as_constant().is_some_and(|c| c.is_one());
                if !coeff_is_one {
                    write!(f, "{coeff}*")?;
                }
                write!(f, "sqrt({radicand})")
            }
        }
    }
}

/// One branch of a solved system: substitutions for the fixed parameters,
/// the remaining parameters free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub subs: BTreeMap<ParamName, BranchExpr>,
    pub free: Vec<ParamName>,
}

impl Branch {
    /// Canonical rendering used for ordering and golden output.
    pub fn render(&self) -> String {
        let subs: Vec<String> =
            self.subs.iter().map(|(p, e)| format!("{p} = {e}")).collect();
        let mut out = subs.join(", ");
        if !self.free.is_empty() {
            out.push_str(&format!("  [free: {}]", self.free.join(", ")));
        }
        out
    }

    /// True when a full rational assignment lies on this branch. Surd
    /// substitutions are checked in squared form, which covers both signs
    /// of the pair.
    pub fn contains_point(&self, vals: &BTreeMap<ParamName, Scalar>) -> bool {
        for (p, expr) in &self.subs {
            let Some(actual) = vals.get(p) else { return false };
            match expr {
                BranchExpr::Poly(poly) => match poly.eval(vals) {
                    Ok(v) if &v == actual => {}
                    _ => return false,
                },
                BranchExpr::Surd { base, coeff, radicand, .. } => {
                    let (Ok(b), Ok(c), Ok(r)) =
                        (base.eval(vals), coeff.eval(vals), radicand.eval(vals))
                    else {
                        return false;
                    };
                    let diff = actual - &b;
                    if &diff * &diff != &(&c * &c) * &r {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolvedSet {
    pub branches: Vec<Branch>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstraintError {
    #[error("constraint system outside the supported fragment: {0}")]
    UnsupportedFragment(String),
    #[error("internal verification failed: {0}")]
    Internal(String),
}

struct Solver {
    all_params: Vec<ParamName>,
    branches: Vec<Branch>,
    square_elims_done: BTreeSet<String>,
}

#[derive(Clone)]
struct State {
    eqs: Vec<ParamPoly>,
    /// Substitutions in application order; RHS may reference parameters
    /// substituted later (resolved at materialization).
    subs: Vec<(ParamName, ParamPoly)>,
}

impl State {
    /// Parameters referenced by some substitution RHS.
    fn referenced(&self) -> BTreeSet<ParamName> {
        self.subs.iter().flat_map(|(_, rhs)| rhs.vars()).collect()
    }

    fn apply(&mut self, p: &str, value: ParamPoly) {
        for eq in &mut self.eqs {
            *eq = eq.subst(p, &value);
        }
        self.subs.push((p.to_string(), value));
    }
}

const MAX_SOLVE_DEPTH: usize = 24;

/// Solves a constraint system into a complete, canonically ordered branch
/// list, verified by exact back-substitution.
pub fn solve_constraints(cs: &ConstraintSystem) -> Result<SolvedSet, ConstraintError> {
    for eq in &cs.equations {
        if eq.total_degree() > 2 {
            return Err(ConstraintError::UnsupportedFragment(format!(
                "equation `{eq}` has degree greater than 2"
            )));
        }
    }
    let mut declared: Vec<ParamName> = cs.params.clone();
    for eq in &cs.equations {
        for v in eq.vars() {
            if !declared.contains(&v) {
                declared.push(v);
            }
        }
    }
    if declared.len() > 4 {
        return Err(ConstraintError::UnsupportedFragment(format!(
            "{} scalar parameters (at most 4 supported)",
            declared.len()
        )));
    }
    declared.sort();

    let mut solver = Solver {
        all_params: declared,
        branches: Vec::new(),
        square_elims_done: BTreeSet::new(),
    };
    let state = State { eqs: cs.equations.clone(), subs: Vec::new() };
    solver.run(state, 0)?;

    let mut branches = solver.branches;
    dedupe_and_subsume(&mut branches);
    branches.sort_by_key(|b| (b.subs.len(), b.render()));

    for branch in &branches {
        verify_branch(&cs.equations, branch).map_err(ConstraintError::Internal)?;
    }
    Ok(SolvedSet { branches })
}

impl Solver {
    fn run(&mut self, mut state: State, depth: usize) -> Result<(), ConstraintError> {
        if depth > MAX_SOLVE_DEPTH {
            return Err(ConstraintError::UnsupportedFragment(
                "solver recursion limit reached".into(),
            ));
        }

        // M1: normalize — drop zero equations, kill contradictory branches,
        // dedupe equations equal up to a scalar factor.
        let mut seen = BTreeSet::new();
        let mut eqs = Vec::new();
        for eq in std::mem::take(&mut state.eqs) {
            if let Some(c) = eq.as_constant() {
                if c.is_zero() {
                    continue;
                }
                return Ok(()); // no solutions on this branch
            }
            let key = format!("{}", eq.normalized());
            if seen.insert(key) {
                eqs.push(eq);
            }
        }
        state.eqs = eqs;

        if state.eqs.is_empty() {
            self.emit(state)?;
            return Ok(());
        }

        // M2: solve an equation that is linear in a parameter with constant
        // coefficient; substitute the later-named parameter first so
        // earlier-named ones stay free.
        for i in 0..state.eqs.len() {
            let mut vars: Vec<ParamName> = state.eqs[i].vars().into_iter().collect();
            vars.sort();
            vars.reverse();
            for p in vars {
                if let Some((coeff, rest)) = state.eqs[i].split_linear(&p) {
                    if let Some(c) = coeff.as_constant() {
                        if !c.is_zero() {
                            let value = rest.neg().scale(&c.inv());
                            let mut next = state.clone();
                            next.eqs.remove(i);
                            next.apply(&p, value);
                            return self.run(next, depth + 1);
                        }
                    }
                }
            }
        }

        // M3: factor one equation into linear pieces over ℚ(i).
        for i in 0..state.eqs.len() {
            if let Some(cases) = factor_cases(&state.eqs[i]) {
                for case in cases {
                    let mut next = state.clone();
                    next.eqs.remove(i);
                    next.eqs.push(case);
                    self.run(next, depth + 1)?;
                }
                return Ok(());
            }
        }

        // M4: a sum or difference of two equations may factor even when
        // neither does alone (e.g. α₁² - α₂²).
        for i in 0..state.eqs.len() {
            for j in (i + 1)..state.eqs.len() {
                for minus in [true, false] {
                    let comb = if minus {
                        state.eqs[i].sub(&state.eqs[j])
                    } else {
                        state.eqs[i].add(&state.eqs[j])
                    };
                    if comb.is_zero() || comb.as_constant().is_some() {
                        continue;
                    }
                    if let Some(cases) = factor_cases(&comb) {
                        for case in cases {
                            let mut next = state.clone();
                            next.eqs.push(case);
                            self.run(next, depth + 1)?;
                        }
                        return Ok(());
                    }
                }
            }
        }

        // M5: square elimination. For S + c·p·q = 0 with p², q² known from
        // other equations, (c·p·q)² = S² is a parameter-only consequence.
        if let Some(new_eq) = self.square_elimination(&state) {
            let mut next = state;
            next.eqs.push(new_eq);
            return self.run(next, depth + 1);
        }

        // M6: a single remaining equation, quadratic in one parameter —
        // close with a symbolic square root.
        if state.eqs.len() == 1 {
            let eq = state.eqs[0].clone();
            if let Some((p, a, b, c)) = self.pick_surd_target(&state, &eq) {
                let mut closed = state.clone();
                closed.eqs.clear();
                self.emit_surd(closed, &p, &a, &b, &c)?;
                return Ok(());
            }
        }

        Err(ConstraintError::UnsupportedFragment(format!(
            "stuck with equations: {}",
            state.eqs.iter().map(|e| format!("{e}")).collect::<Vec<_>>().join("; ")
        )))
    }

    /// Chooses the parameter to solve quadratically. A parameter already
    /// referenced by existing substitutions is kept free when possible, so
    /// those substitutions remain expressed in the shared free parameter
    /// and the ± signs stay linked through it; among unreferenced
    /// candidates the pure square comes first.
    fn pick_surd_target(
        &self,
        state: &State,
        eq: &ParamPoly,
    ) -> Option<(ParamName, Scalar, ParamPoly, ParamPoly)> {
        let referenced = state.referenced();
        let mut candidates: Vec<(bool, bool, ParamName, Scalar, ParamPoly, ParamPoly)> =
            Vec::new();
        for p in eq.vars() {
            if let Some((a, b, c)) = eq.split_quadratic(&p) {
                let others: BTreeSet<ParamName> =
                    b.vars().union(&c.vars()).cloned().collect();
                if others.len() > 1 {
                    continue;
                }
                let is_referenced = referenced.contains(&p);
                let pure_square = b.is_zero();
                candidates.push((is_referenced, !pure_square, p, a, b, c));
            }
        }
        if candidates.is_empty() {
            return None;
        }
        if candidates.iter().all(|c| c.0) {
            // Everything is woven into existing substitutions; solve the
            // last-named parameter so the first-named stays free.
            candidates.sort_by(|x, y| y.2.cmp(&x.2));
        } else {
            candidates.retain(|c| !c.0);
            candidates.sort_by(|x, y| (x.1, &x.2).cmp(&(y.1, &y.2)));
        }
        candidates
            .into_iter()
            .next()
            .map(|(_, _, p, a, b, c)| (p, a, b, c))
    }

    fn square_elimination(&mut self, state: &State) -> Option<ParamPoly> {
        // Square-resolving equations: A·p² + R = 0 with R free of p.
        let mut squares: BTreeMap<ParamName, ParamPoly> = BTreeMap::new();
        for eq in &state.eqs {
            for p in eq.vars() {
                if let Some((a, b, c)) = eq.split_quadratic(&p) {
                    if b.is_zero() && !c.vars().contains(&p) {
                        // p² = -c/a
                        squares.entry(p).or_insert_with(|| c.neg().scale(&a.inv()));
                    }
                }
            }
        }
        for eq in &state.eqs {
            // Look for S + c·p·q with p, q square-known and S free of both.
            let mut bilinear: Option<(ParamName, ParamName, Scalar)> = None;
            let mut rest = ParamPoly::zero();
            let mut ok = true;
            for (m, coeff) in &eq.terms {
                let vars: Vec<(&ParamName, &u32)> = m.0.iter().collect();
                let is_pq = vars.len() == 2
                    && vars.iter().all(|(p, e)| **e == 1 && squares.contains_key(*p));
                if is_pq && bilinear.is_none() {
                    bilinear = Some((vars[0].0.clone(), vars[1].0.clone(), coeff.clone()));
                } else {
                    rest.insert(m.clone(), coeff.clone());
                }
            }
            let Some((p, q, c)) = bilinear else { continue };
            if rest.vars().contains(&p) || rest.vars().contains(&q) {
                ok = false;
            }
            if !ok {
                continue;
            }
            let key = format!("{eq}|{p}|{q}");
            if !self.square_elims_done.insert(key) {
                continue;
            }
            // (c·p·q)² = rest²  ⇒  rest² - c²·(p²)·(q²) = 0, a consequence
            // in the remaining parameters only (degree up to 4; it factors
            // in the next step).
            let consequence = rest
                .mul(&rest)
                .sub(&squares[&p].mul(&squares[&q]).scale(&(&c * &c)));
            if consequence.is_zero() {
                continue;
            }
            return Some(consequence);
        }
        None
    }

    fn emit(&mut self, state: State) -> Result<(), ConstraintError> {
        let branch = materialize(&self.all_params, &state.subs, None)?;
        self.branches.push(branch);
        Ok(())
    }

    fn emit_surd(
        &mut self,
        state: State,
        p: &str,
        a: &Scalar,
        b: &ParamPoly,
        c: &ParamPoly,
    ) -> Result<(), ConstraintError> {
        // p = (-B ± √(B² - 4AC)) / 2A
        let two_a_inv = (&Scalar::from_int(2) * a).inv();
        let base = b.neg().scale(&two_a_inv);
        let mut coeff = ParamPoly::constant(two_a_inv.clone());
        let mut radicand =
            b.mul(b).sub(&c.scale(&(&Scalar::from_int(4) * a)));
        if let Some(r) = radicand.as_constant() {
            // Constant radicand: exact roots if one exists, else keep the surd.
            if let Some(s) = r.sqrt_exact() {
                for sign in [1i64, -1] {
                    let root = base.add(&ParamPoly::constant(
                        &(&two_a_inv * &s) * &Scalar::from_int(sign),
                    ));
                    let branch = materialize(
                        &self.all_params,
                        &state.subs,
                        Some((p, BranchExpr::Poly(root))),
                    )?;
                    self.branches.push(branch);
                }
                return Ok(());
            }
        }
        // Pull perfect-square rational content out of the radicand.
        if let Some(content) = radicand.rational_content() {
            let sq = square_part(&content);
            if !sq.is_one() {
                let sq_scalar = Scalar::from_rational(sq.clone());
                radicand = radicand.scale(&Scalar::from_rational(
                    (&sq * &sq).recip(),
                ));
                coeff = coeff.scale(&sq_scalar);
            }
        }
        if radicand.is_zero() {
            let branch = materialize(
                &self.all_params,
                &state.subs,
                Some((p, BranchExpr::Poly(base))),
            )?;
            self.branches.push(branch);
            return Ok(());
        }
        for sign in [1i8, -1] {
            let expr = BranchExpr::Surd {
                base: base.clone(),
                coeff: coeff.clone(),
                sign,
                radicand: radicand.clone(),
            };
            let branch = materialize(&self.all_params, &state.subs, Some((p, expr)))?;
            self.branches.push(branch);
        }
        Ok(())
    }
}

/// Largest rational s with s² dividing `r` (numerator and denominator
/// square parts extracted by trial division — the values here are tiny).
fn square_part(r: &num_rational::BigRational) -> num_rational::BigRational {
    use num_bigint::BigInt;
    fn int_square_part(n: &BigInt) -> BigInt {
        let mut n = n.abs();
        let mut out = BigInt::from(1);
        let mut d = BigInt::from(2);
        while &d * &d <= n {
            let dd = &d * &d;
            while (&n % &dd).is_zero() {
                n /= &dd;
                out *= &d;
            }
            d += 1;
        }
        out
    }
    num_rational::BigRational::new(int_square_part(r.numer()), int_square_part(r.denom()))
}

/// Factors an equation into alternative linear cases, if possible.
/// Returns the list of case equations whose disjunction is equivalent.
fn factor_cases(eq: &ParamPoly) -> Option<Vec<ParamPoly>> {
    // Single term c·∏pᵢ^eᵢ: the product vanishes iff one factor does.
    if eq.terms.len() == 1 {
        let (m, _) = eq.terms.iter().next().unwrap();
        let vars: Vec<ParamName> = m.0.keys().cloned().collect();
        if !vars.is_empty() {
            return Some(vars.into_iter().map(|p| ParamPoly::var(&p)).collect());
        }
        return None;
    }
    // Common parameter factor: p divides every term.
    let common: Option<ParamName> = {
        let mut iter = eq.terms.keys();
        let first: BTreeSet<ParamName> = iter.next().unwrap().0.keys().cloned().collect();
        first
            .into_iter()
            .find(|p| eq.terms.keys().all(|m| m.degree_in(p) >= 1))
    };
    if let Some(p) = common {
        let mut quotient = ParamPoly::zero();
        for (m, c) in &eq.terms {
            let mut reduced = m.clone();
            let e = reduced.0.get_mut(&p).expect("common factor");
            *e -= 1;
            if *e == 0 {
                reduced.0.remove(&p);
            }
            quotient.insert(reduced, c.clone());
        }
        return Some(vec![ParamPoly::var(&p), quotient]);
    }
    let vars: Vec<ParamName> = eq.vars().into_iter().collect();
    // Univariate quadratic with scalar coefficients and exact roots.
    if vars.len() == 1 {
        let p = &vars[0];
        if let Some((a, b, c)) = eq.split_quadratic(p) {
            let (Some(b), Some(c)) = (b.as_constant(), c.as_constant()) else {
                return None;
            };
            let disc = &(&b * &b) - &(&Scalar::from_int(4) * &(&a * &c));
            let s = disc.sqrt_exact()?;
            let half_inv = (&Scalar::from_int(2) * &a).inv();
            let r1 = &(&-&b + &s) * &half_inv;
            let r2 = &(&-&b - &s) * &half_inv;
            let mut cases =
                vec![ParamPoly::var(p).sub(&ParamPoly::constant(r1.clone()))];
            if r1 != r2 {
                cases.push(ParamPoly::var(p).sub(&ParamPoly::constant(r2)));
            }
            return Some(cases);
        }
        return None;
    }
    // Homogeneous binary quadratic A·p² + B·p·q + C·q²: factor through the
    // discriminant when it has an exact root (covers p² + q² via ±i and
    // p² - q²).
    if vars.len() == 2 && eq.total_degree() == 2 {
        let (p, q) = (&vars[0], &vars[1]);
        let homogeneous = eq.terms.keys().all(|m| m.degree() == 2);
        if homogeneous {
            let a = eq.coeff_of(&[(p, 2)]);
            let b = eq.coeff_of(&[(p, 1), (q, 1)]);
            let c = eq.coeff_of(&[(q, 2)]);
            if !a.is_zero() {
                let disc = &(&b * &b) - &(&Scalar::from_int(4) * &(&a * &c));
                let s = disc.sqrt_exact()?;
                let half_inv = (&Scalar::from_int(2) * &a).inv();
                let t1 = &(&-&b + &s) * &half_inv;
                let t2 = &(&-&b - &s) * &half_inv;
                // p = t·q for each root t.
                let case = |t: &Scalar| {
                    ParamPoly::var(p).sub(&ParamPoly::var(q).scale(t))
                };
                let mut cases = vec![case(&t1)];
                if t1 != t2 {
                    cases.push(case(&t2));
                }
                return Some(cases);
            }
        }
    }
    None
}

impl ParamPoly {
    fn coeff_of(&self, spec: &[(&ParamName, u32)]) -> Scalar {
        let mut m = ParamMono::one();
        for (p, e) in spec {
            m.0.insert((*p).clone(), *e);
        }
        self.terms.get(&m).cloned().unwrap_or_else(Scalar::zero)
    }
}

/// Resolves the substitution chain into closed forms over the free
/// parameters, optionally closing one parameter with a surd.
fn materialize(
    all_params: &[ParamName],
    subs: &[(ParamName, ParamPoly)],
    surd: Option<(&str, BranchExpr)>,
) -> Result<Branch, ConstraintError> {
    let mut resolved: BTreeMap<ParamName, BranchExpr> = BTreeMap::new();
    if let Some((p, expr)) = surd {
        resolved.insert(p.to_string(), expr);
    }
    for (p, rhs) in subs.iter().rev() {
        let expr = resolve_poly(rhs, &resolved)?;
        resolved.insert(p.clone(), expr);
    }
    let free: Vec<ParamName> =
        all_params.iter().filter(|p| !resolved.contains_key(*p)).cloned().collect();
    Ok(Branch { subs: resolved, free })
}

/// Substitutes already-resolved parameters into `poly`. Entries in
/// `resolved` are fully closed over the free parameters, so one polynomial
/// pass suffices; at most one surd may flow in, and only linearly.
fn resolve_poly(
    poly: &ParamPoly,
    resolved: &BTreeMap<ParamName, BranchExpr>,
) -> Result<BranchExpr, ConstraintError> {
    let mut plain = poly.clone();
    for p in poly.vars() {
        if let Some(BranchExpr::Poly(value)) = resolved.get(&p) {
            plain = plain.subst(&p, value);
        }
    }
    let surd_vars: Vec<ParamName> = plain
        .vars()
        .into_iter()
        .filter(|p| matches!(resolved.get(p), Some(BranchExpr::Surd { .. })))
        .collect();
    match surd_vars.as_slice() {
        [] => Ok(BranchExpr::Poly(plain)),
        [p] => {
            let Some(BranchExpr::Surd { base, coeff, sign, radicand }) = resolved.get(p) else {
                unreachable!()
            };
            let Some((lin_coeff, rest)) = plain.split_linear(p) else {
                return Err(ConstraintError::UnsupportedFragment(
                    "surd substituted into a nonlinear position".into(),
                ));
            };
            // lin_coeff·(base ± coeff·√R) + rest
            let base_out = rest.add(&lin_coeff.mul(base));
            let combined_coeff = lin_coeff.mul(coeff);
            if combined_coeff.is_zero() {
                return Ok(BranchExpr::Poly(base_out));
            }
            // Fold a negative real constant coefficient into the sign.
            let (combined_coeff, sign_out) = match combined_coeff.as_constant() {
                Some(c) if c.is_real() && c.re().is_negative() => {
                    (combined_coeff.neg(), -sign)
                }
                _ => (combined_coeff, *sign),
            };
            Ok(BranchExpr::Surd {
                base: base_out,
                coeff: combined_coeff,
                sign: sign_out,
                radicand: radicand.clone(),
            })
        }
        _ => Err(ConstraintError::UnsupportedFragment(
            "two distinct surds in one expression".into(),
        )),
    }
}

fn dedupe_and_subsume(branches: &mut Vec<Branch>) {
    // Exact duplicates first.
    let mut seen = BTreeSet::new();
    branches.retain(|b| seen.insert(b.render()));
    // Point branches subsumed by parametric ones: a branch with no free
    // parameters whose (rational) point lies on another branch is dropped.
    let retained: Vec<Branch> = branches
        .iter()
        .filter(|b| {
            if !b.free.is_empty() {
                return true;
            }
            let Some(point) = branch_point(b) else { return true };
            !branches.iter().any(|other| {
                other.render() != b.render()
                    && !other.free.is_empty()
                    && other.contains_point(&point)
            })
        })
        .cloned()
        .collect();
    *branches = retained;
}

/// Constant assignment defined by a fully-fixed branch, when every value is
/// an explicit constant.
fn branch_point(b: &Branch) -> Option<BTreeMap<ParamName, Scalar>> {
    let mut point = BTreeMap::new();
    for (p, expr) in &b.subs {
        match expr {
            BranchExpr::Poly(poly) => {
                point.insert(p.clone(), poly.as_constant()?);
            }
            BranchExpr::Surd { .. } => return None,
        }
    }
    Some(point)
}

/// Back-substitutes a branch into every equation, using exact arithmetic in
/// the quadratic extension ℚ(i)(params)[√R].
fn verify_branch(equations: &[ParamPoly], branch: &Branch) -> Result<(), String> {
    let radicand: Option<ParamPoly> = branch.subs.values().find_map(|e| match e {
        BranchExpr::Surd { radicand, .. } => Some(radicand.clone()),
        BranchExpr::Poly(_) => None,
    });
    for eq in equations {
        // Evaluate eq with params replaced by (plain, surd-coefficient)
        // pairs: value = plain + surd_coeff·√R.
        let value = eval_surd_poly(eq, branch, radicand.as_ref());
        let (p, q) = value;
        if !p.is_zero() || !q.is_zero() {
            return Err(format!(
                "branch `{}` does not satisfy `{eq} = 0` (got {p} + ({q})·sqrt)",
                branch.render()
            ));
        }
    }
    Ok(())
}

fn eval_surd_poly(
    eq: &ParamPoly,
    branch: &Branch,
    radicand: Option<&ParamPoly>,
) -> (ParamPoly, ParamPoly) {
    // Represent each parameter value as (plain, coeff) meaning plain + coeff·√R.
    let value_of = |p: &ParamName| -> (ParamPoly, ParamPoly) {
        match branch.subs.get(p) {
            None => (ParamPoly::var(p), ParamPoly::zero()),
            Some(BranchExpr::Poly(v)) => (v.clone(), ParamPoly::zero()),
            Some(BranchExpr::Surd { base, coeff, sign, .. }) => {
                let c =
                    if *sign >= 0 { coeff.clone() } else { coeff.neg() };
                (base.clone(), c)
            }
        }
    };
    let r = radicand.cloned().unwrap_or_else(ParamPoly::zero);
    let mul_surd = |a: &(ParamPoly, ParamPoly), b: &(ParamPoly, ParamPoly)| {
        (
            a.0.mul(&b.0).add(&a.1.mul(&b.1).mul(&r)),
            a.0.mul(&b.1).add(&a.1.mul(&b.0)),
        )
    };
    let mut total = (ParamPoly::zero(), ParamPoly::zero());
    for (m, c) in &eq.terms {
        let mut term = (ParamPoly::constant(c.clone()), ParamPoly::zero());
        for (p, e) in &m.0 {
            let v = value_of(p);
            for _ in 0..*e {
                term = mul_surd(&term, &v);
            }
        }
        total = (total.0.add(&term.0), total.1.add(&term.1));
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(name: &str) -> ParamPoly {
        ParamPoly::var(name)
    }

    fn c(n: i64) -> ParamPoly {
        ParamPoly::constant(Scalar::from_int(n))
    }

    /// γ₁² + α₁² = 0, γ₂² + α₂² = γ₂, γ₁γ₂ + α₁α₂ = γ₁
    fn system_a() -> ConstraintSystem {
        ConstraintSystem::new(
            &["alpha1", "alpha2", "gamma1", "gamma2"],
            vec![
                v("gamma1").pow(2).add(&v("alpha1").pow(2)),
                v("gamma2").pow(2).add(&v("alpha2").pow(2)).sub(&v("gamma2")),
                v("gamma1").mul(&v("gamma2")).add(&v("alpha1").mul(&v("alpha2"))).sub(&v("gamma1")),
            ],
        )
    }

    /// γ₁² + α₁² = γ₁, γ₂² + α₂² = γ₂, γ₁γ₂ + α₁α₂ = 0
    fn system_b() -> ConstraintSystem {
        ConstraintSystem::new(
            &["alpha1", "alpha2", "gamma1", "gamma2"],
            vec![
                v("gamma1").pow(2).add(&v("alpha1").pow(2)).sub(&v("gamma1")),
                v("gamma2").pow(2).add(&v("alpha2").pow(2)).sub(&v("gamma2")),
                v("gamma1").mul(&v("gamma2")).add(&v("alpha1").mul(&v("alpha2"))),
            ],
        )
    }

    /// γ = γ² + α²
    fn system_c() -> ConstraintSystem {
        ConstraintSystem::new(
            &["alpha", "gamma"],
            vec![v("gamma").pow(2).add(&v("alpha").pow(2)).sub(&v("gamma"))],
        )
    }

    #[test]
    fn system_a_branches() {
        let solved = solve_constraints(&system_a()).unwrap();
        let rendered: Vec<String> = solved.branches.iter().map(Branch::render).collect();
        // Nontrivial pair: α₂ = 0, γ₂ = 1, γ₁ = ±i·α₁.
        assert!(
            rendered.iter().any(|r| r.contains("gamma1 = i*alpha1")
                && r.contains("alpha2 = 0")
                && r.contains("gamma2 = 1")),
            "branches: {rendered:?}"
        );
        assert!(
            rendered.iter().any(|r| r.contains("gamma1 = -i*alpha1")),
            "branches: {rendered:?}"
        );
        // Trivial branch: γ₁ = α₁ = 0 with γ₂² + α₂² = γ₂ closed as a surd.
        assert!(
            rendered.iter().any(|r| r.contains("alpha1 = 0")
                && r.contains("gamma1 = 0")
                && r.contains("sqrt")),
            "branches: {rendered:?}"
        );
    }

    #[test]
    fn system_b_branches() {
        let solved = solve_constraints(&system_b()).unwrap();
        let rendered: Vec<String> = solved.branches.iter().map(Branch::render).collect();
        // Expected branch: α₂ = -α₁, γ₁ = (1 ± √(1-4α₁²))/2, γ₂ = (1 ∓ √)/2.
        let plus = rendered.iter().find(|r| {
            r.contains("alpha2 = -alpha1")
                && r.contains("gamma1 = 1/2 + 1/2*sqrt(1 - 4*alpha1^2)")
        });
        let minus = rendered.iter().find(|r| {
            r.contains("alpha2 = -alpha1")
                && r.contains("gamma1 = 1/2 - 1/2*sqrt(1 - 4*alpha1^2)")
        });
        assert!(plus.is_some() && minus.is_some(), "branches: {rendered:?}");
        // Opposite sign on γ₂ in each.
        assert!(plus.unwrap().contains("gamma2 = 1/2 - 1/2*sqrt(1 - 4*alpha1^2)"));
        assert!(minus.unwrap().contains("gamma2 = 1/2 + 1/2*sqrt(1 - 4*alpha1^2)"));
    }

    #[test]
    fn system_c_branches() {
        let solved = solve_constraints(&system_c()).unwrap();
        let rendered: Vec<String> = solved.branches.iter().map(Branch::render).collect();
        assert!(
            rendered.iter().any(|r| r.contains("alpha = sqrt(gamma - gamma^2)")),
            "branches: {rendered:?}"
        );
        assert!(
            rendered.iter().any(|r| r.contains("alpha = -sqrt(gamma - gamma^2)")),
            "branches: {rendered:?}"
        );
    }

    #[test]
    fn branch_membership_and_rejection() {
        let solved = solve_constraints(&system_a()).unwrap();
        // A point on the nontrivial branch: α₁ = 2, γ₁ = 2i, α₂ = 0, γ₂ = 1.
        let mut on = BTreeMap::new();
        on.insert("alpha1".to_string(), Scalar::from_int(2));
        on.insert("gamma1".to_string(), &Scalar::i() * &Scalar::from_int(2));
        on.insert("alpha2".to_string(), Scalar::zero());
        on.insert("gamma2".to_string(), Scalar::one());
        assert!(solved.branches.iter().any(|b| b.contains_point(&on)));
        // A random-ish off-branch point must violate the system.
        let mut off = on.clone();
        off.insert("gamma2".to_string(), Scalar::from_int(3));
        assert!(!solved.branches.iter().any(|b| b.contains_point(&off)));
        assert!(system_a().check(&off).is_err());
    }

    #[test]
    fn linear_system_solves_directly() {
        // x + y = 1, x - y = 3 → x = 2, y = -1.
        let cs = ConstraintSystem::new(
            &["x", "y"],
            vec![v("x").add(&v("y")).sub(&c(1)), v("x").sub(&v("y")).sub(&c(3))],
        );
        let solved = solve_constraints(&cs).unwrap();
        assert_eq!(solved.branches.len(), 1);
        let b = &solved.branches[0];
        assert_eq!(b.render(), "x = 2, y = -1");
    }

    #[test]
    fn inconsistent_system_has_no_branches() {
        let cs = ConstraintSystem::new(&["x"], vec![v("x").sub(&c(1)), v("x").sub(&c(2))]);
        let solved = solve_constraints(&cs).unwrap();
        assert!(solved.branches.is_empty());
    }

    #[test]
    fn degree_cap_rejected() {
        let cs = ConstraintSystem::new(&["x"], vec![v("x").pow(3)]);
        assert!(matches!(
            solve_constraints(&cs),
            Err(ConstraintError::UnsupportedFragment(_))
        ));
    }
}
