//! Exhaustive and structured enumeration of solutions over finite models.
//!
//! The raw path is a backtracking sweep over all function tables with
//! equation pairs checked as soon as their cells are assigned, which keeps
//! it exhaustive-exact while pruning most of the space. For S1 a structured
//! path propagates f from its generator values instead; both must agree
//! (differential-tested), and every returned tuple is re-verified against
//! all pairs independently of the search.

use super::model::{
    DomainModel, FiniteGroup, FunctionTable, OracleError, PrimeField, ShapeModel,
};
use crate::eqdsl::ShapeId;

/// All homomorphisms G → (𝔽_p, +), generated from the images of the cyclic
/// generators subject to the order constraints, in lexicographic order of
/// the image vectors.
pub fn enumerate_additive(g: &FiniteGroup, field: &PrimeField) -> Vec<FunctionTable> {
    let p = field.p();
    // ℤ_n → 𝔽_p: n·c ≡ 0 (mod p), so c is free iff p | n and 0 otherwise.
    let choices: Vec<Vec<u64>> = g
        .factors()
        .iter()
        .map(|&n| if n as u64 % p == 0 { (0..p).collect() } else { vec![0] })
        .collect();
    let mut images = vec![0u64; choices.len()];
    let mut out = Vec::new();
    build_homs(g, field, &choices, 0, &mut images, &mut out);
    out
}

fn build_homs(
    g: &FiniteGroup,
    field: &PrimeField,
    choices: &[Vec<u64>],
    i: usize,
    images: &mut Vec<u64>,
    out: &mut Vec<FunctionTable>,
) {
    if i == choices.len() {
        let table: Vec<u64> = (0..g.order())
            .map(|idx| {
                g.decode(idx)
                    .iter()
                    .zip(images.iter())
                    .fold(0u64, |acc, (&coord, &c)| field.add(acc, field.mul(coord as u64, c)))
            })
            .collect();
        out.push(FunctionTable(table));
        return;
    }
    for &c in &choices[i] {
        images[i] = c;
        build_homs(g, field, choices, i + 1, images, out);
    }
}

/// The additive maps of the multiplicative monoid (𝔽_p, ·): functions with
/// f(x·y) = f(x) + f(y) for all x, y including 0. The absorbing element
/// forces f ≡ 0 (f(0) = f(x) + f(0)), so the list is the zero map alone;
/// derived here independently rather than assumed.
pub fn log_maps(field: &PrimeField) -> Vec<FunctionTable> {
    let p = field.p();
    // On the unit group, f(g^k) = k·f(g) with (p-1)·f(g) ≡ 0 (mod p); since
    // gcd(p-1, p) = 1 the generator image is 0. With 0 adjoined, f(0) = 0
    // and consistency with f(x·0) = f(x) + f(0) pins every value to 0.
    vec![FunctionTable(vec![0; p as usize])]
}

/// One solution tuple for a shape model.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Solution {
    pub f: FunctionTable,
    pub alpha: Option<FunctionTable>,
}

impl std::fmt::Display for Solution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "f={}", self.f)?;
        if let Some(a) = &self.alpha {
            write!(f, " a={a}")?;
        }
        Ok(())
    }
}

/// Every table tuple satisfying the model's equation at all |G|² pairs,
/// in lexicographic order. `max_space` bounds |𝔽|^(unknowns·|G|).
pub fn enumerate_solutions(
    model: &ShapeModel,
    max_space: u64,
) -> Result<Vec<Solution>, OracleError> {
    let n = model.domain.size();
    let cells = n * model.unknown_count();
    let space = (model.field.p() as f64).powi(cells as i32);
    if space > max_space as f64 {
        if model.shape == ShapeId::S1 {
            return enumerate_s1_structured(model);
        }
        return Err(OracleError::SearchSpaceExceeded {
            space: if space > u64::MAX as f64 { u64::MAX } else { space as u64 },
            bound: max_space,
        });
    }
    enumerate_backtracking(model)
}

/// The raw exhaustive path with early pruning. A pair (x, y) is checked at
/// the first step where every cell it reads has been assigned.
fn enumerate_backtracking(model: &ShapeModel) -> Result<Vec<Solution>, OracleError> {
    let n = model.domain.size();
    let two = model.unknown_count() == 2;
    let cells = if two { 2 * n } else { n };

    // Schedule: pairs_by_step[t] lists the pairs fully determined once
    // cell t is assigned.
    let mut pairs_by_step: Vec<Vec<(usize, usize)>> = vec![Vec::new(); cells];
    for x in 0..n {
        for y in 0..n {
            let mut max_cell = 0usize;
            let mut track = |c: usize| max_cell = max_cell.max(c);
            let xy = model.domain.op(x, y);
            track(x);
            track(y);
            track(xy);
            if two {
                match model.shape {
                    ShapeId::S4 | ShapeId::S7 | ShapeId::S8 => track(n + xy),
                    ShapeId::S5 => {
                        let ex = model.domain.embed(x, &model.field).expect("validated");
                        let ey = model.domain.embed(y, &model.field).expect("validated");
                        track(n + model.field.mul(ex, ey) as usize);
                    }
                    _ => {
                        track(n + x);
                        track(n + y);
                    }
                }
            }
            pairs_by_step[max_cell].push((x, y));
        }
    }

    let mut values = vec![0u64; cells];
    let mut out = Vec::new();
    search(model, n, two, &pairs_by_step, &mut values, 0, &mut out);

    // Independent re-verification of every returned tuple.
    for sol in &out {
        debug_assert!(verify_solution(model, sol));
    }
    Ok(out)
}

fn search(
    model: &ShapeModel,
    n: usize,
    two: bool,
    pairs_by_step: &[Vec<(usize, usize)>],
    values: &mut Vec<u64>,
    step: usize,
    out: &mut Vec<Solution>,
) {
    if step == values.len() {
        let f = FunctionTable(values[..n].to_vec());
        let alpha = two.then(|| FunctionTable(values[n..].to_vec()));
        let sol = Solution { f, alpha };
        if verify_solution(model, &sol) {
            out.push(sol);
        }
        return;
    }
    for v in 0..model.field.p() {
        values[step] = v;
        let ok = pairs_by_step[step].iter().all(|&(x, y)| {
            let f = |i: usize| (i <= step).then(|| values[i]);
            let a = |i: usize| (n + i <= step).then(|| values[n + i]);
            model.residual_at(x, y, &f, &a) == Some(0)
        });
        if ok {
            search(model, n, two, pairs_by_step, values, step + 1, out);
        }
    }
}

/// Full-pair verification, independent of how the candidate was found.
pub fn verify_solution(model: &ShapeModel, sol: &Solution) -> bool {
    let n = model.domain.size();
    if sol.f.len() != n {
        return false;
    }
    let f = |i: usize| Some(sol.f.0[i]);
    let a = |i: usize| sol.alpha.as_ref().map(|t| t.0[i]);
    (0..n).all(|x| (0..n).all(|y| model.residual_at(x, y, &f, &a) == Some(0)))
}

/// Structured search for S1: f(0) = 0 is forced, and f propagates from its
/// generator images along the mixed-radix order, so only |𝔽|^k candidates
/// exist. Each propagated table is verified against all pairs.
fn enumerate_s1_structured(model: &ShapeModel) -> Result<Vec<Solution>, OracleError> {
    let DomainModel::AdditiveGroup(g) = &model.domain else {
        return Err(OracleError::UnsupportedShape(
            model.shape,
            "structured search needs the additive group model".into(),
        ));
    };
    let b = model.given_b.as_ref().expect("validated");
    let field = &model.field;
    let gens = g.generators();
    let k = gens.len();
    let mut images = vec![0u64; k];
    let mut out = Vec::new();

    fn rec(
        g: &FiniteGroup,
        field: &PrimeField,
        b: &super::model::PairTable,
        model: &ShapeModel,
        gens: &[usize],
        images: &mut Vec<u64>,
        i: usize,
        out: &mut Vec<Solution>,
    ) {
        if i < images.len() {
            for v in 0..field.p() {
                images[i] = v;
                rec(g, field, b, model, gens, images, i + 1, out);
            }
            return;
        }
        // Propagate: each nonzero element is w + e_i for its lowest
        // nonzero coordinate i, with w already computed.
        let n = g.order();
        let mut f = vec![0u64; n];
        for idx in 1..n {
            let coords = g.decode(idx);
            let lead = coords.iter().position(|&c| c > 0).expect("nonzero element");
            let mut prev = coords.clone();
            prev[lead] -= 1;
            let w = g.encode(&prev);
            let e = gens[lead];
            // f(w + e) = f(w) + f(e) + B(w, e); f(e) itself comes from the
            // guessed image on the first pass (w = 0 gives f(e) = image).
            if idx == e {
                f[idx] = images[lead];
            } else {
                f[idx] = field.add(field.add(f[w], f[e]), b.get(w, e));
            }
        }
        let sol = Solution { f: FunctionTable(f), alpha: None };
        if verify_solution(model, &sol) {
            out.push(sol);
        }
    }
    rec(g, field, b, model, &gens, &mut images, 0, &mut out);
    out.sort();
    out.dedup();
    Ok(out)
}

/// True iff some parameter instantiation of the finite-field analog of the
/// shape's solution family reproduces the tables exactly.
pub fn match_family(model: &ShapeModel, sol: &Solution) -> bool {
    let n = model.domain.size();
    let field = &model.field;
    match model.shape {
        // f = ½B(x,x) + a(x): a := f - ½B(x,x) must be additive.
        ShapeId::S1 => {
            let b = model.given_b.as_ref().expect("validated");
            let half = field.half().expect("validated");
            let a: Vec<u64> =
                (0..n).map(|x| field.sub(sol.f.0[x], field.mul(half, b.get(x, x)))).collect();
            is_additive(&model.domain, field, &a)
        }
        // f = (α/2)x² + a(x).
        ShapeId::S2 => {
            let half = field.half().expect("validated");
            let alpha = model.given_alpha.unwrap_or(0);
            let a: Vec<u64> = (0..n)
                .map(|x| {
                    let e = model.domain.embed(x, field).expect("validated");
                    field.sub(sol.f.0[x], field.mul(field.mul(alpha, half), field.mul(e, e)))
                })
                .collect();
            is_additive(&model.domain, field, &a)
        }
        // α = 0 forced; f additive for the domain operation.
        ShapeId::S3 => {
            model.given_alpha.unwrap_or(0) == 0 && is_additive(&model.domain, field, &sol.f.0)
        }
        // f = a + f(1), α ≡ -f(1) with a additive (neutral element is 1).
        ShapeId::S4 => {
            let Some(alpha) = &sol.alpha else { return false };
            let c = sol.f.0[1];
            if alpha.0.iter().any(|&v| v != field.neg(c)) {
                return false;
            }
            let a: Vec<u64> = (0..n).map(|x| field.sub(sol.f.0[x], c)).collect();
            is_additive(&model.domain, field, &a)
        }
        // α = c(m-1), f = γa + c²(m-1) with m a multiplicative character
        // into 𝔽_p; c is searched exhaustively, a is whatever additive map
        // remains.
        ShapeId::S6 => {
            let Some(alpha) = &sol.alpha else { return false };
            'cand: for c in 0..field.p() {
                let m: Vec<u64> = (0..n)
                    .map(|x| {
                        if c == 0 {
                            1
                        } else {
                            field.add(field.mul(alpha.0[x], field.inv(c)), 1)
                        }
                    })
                    .collect();
                if c == 0 && alpha.0.iter().any(|&v| v != 0) {
                    continue;
                }
                for x in 0..n {
                    for y in 0..n {
                        let xy = model.domain.op(x, y);
                        if m[xy] != field.mul(m[x], m[y]) {
                            continue 'cand;
                        }
                    }
                }
                let c2 = field.mul(c, c);
                let residue: Vec<u64> = (0..n)
                    .map(|x| field.sub(sol.f.0[x], field.mul(c2, field.sub(m[x], 1))))
                    .collect();
                if is_additive(&model.domain, field, &residue) {
                    return true;
                }
            }
            false
        }
        // f = c·m, α = (c - c²)·m with m(1) = 1.
        ShapeId::S7 => {
            let Some(alpha) = &sol.alpha else { return false };
            let c = sol.f.0[1];
            if c == 0 {
                return sol.f.0.iter().all(|&v| v == 0) && alpha.0.iter().all(|&v| v == 0);
            }
            let m: Vec<u64> = (0..n).map(|x| field.mul(sol.f.0[x], field.inv(c))).collect();
            for x in 0..n {
                for y in 0..n {
                    if m[model.domain.op(x, y)] != field.mul(m[x], m[y]) {
                        return false;
                    }
                }
            }
            let k = field.sub(c, field.mul(c, c));
            (0..n).all(|x| alpha.0[x] == field.mul(k, m[x]))
        }
        _ => false,
    }
}

fn is_additive(domain: &DomainModel, field: &PrimeField, a: &[u64]) -> bool {
    let n = domain.size();
    (0..n).all(|x| (0..n).all(|y| a[domain.op(x, y)] == field.add(a[x], a[y])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::model::PairTable;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn additive_maps_z5_to_f5() {
        let homs = enumerate_additive(&FiniteGroup::cyclic(5), &f5());
        assert_eq!(homs.len(), 5);
        // Each is x ↦ c·x.
        for (c, h) in homs.iter().enumerate() {
            for x in 0..5u64 {
                assert_eq!(h.0[x as usize], c as u64 * x % 5);
            }
        }
    }

    #[test]
    fn additive_maps_with_coprime_orders() {
        // ℤ₂ → 𝔽₅: 2·a(1) = 0 in characteristic 5 forces a(1) = 0.
        let homs = enumerate_additive(&FiniteGroup::cyclic(2), &f5());
        assert_eq!(homs.len(), 1);
        assert!(homs[0].0.iter().all(|&v| v == 0));
    }

    #[test]
    fn additive_maps_z3_squared_to_f3() {
        let f3 = PrimeField::new(3).unwrap();
        let homs = enumerate_additive(&FiniteGroup::new(vec![3, 3]).unwrap(), &f3);
        assert_eq!(homs.len(), 9);
    }

    fn s1_model(p: u64) -> ShapeModel {
        let field = PrimeField::new(p).unwrap();
        let product = PairTable::from_fn(p as usize, |x, y| field.mul(x as u64, y as u64));
        ShapeModel::new(
            ShapeId::S1,
            DomainModel::AdditiveGroup(FiniteGroup::cyclic(p as u32)),
            field,
            Some(product),
            None,
        )
        .unwrap()
    }

    #[test]
    fn s1_on_z5_has_exactly_the_polarized_solutions() {
        // f(x) = 3x² + cx (3 = 1/2 in 𝔽₅), one per additive map.
        let model = s1_model(5);
        let sols = enumerate_solutions(&model, 10_000_000).unwrap();
        assert_eq!(sols.len(), 5);
        let mut seen_c = Vec::new();
        for sol in &sols {
            // c is pinned by f(1) = 3 + c.
            let c = (sol.f.0[1] + 5 - 3) % 5;
            seen_c.push(c);
            for x in 0..5u64 {
                assert_eq!(sol.f.0[x as usize], (3 * x * x + c * x) % 5);
            }
            assert!(match_family(&model, sol));
        }
        seen_c.sort_unstable();
        assert_eq!(seen_c, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn s1_structured_agrees_with_raw() {
        for p in [3u64, 5] {
            let model = s1_model(p);
            let raw = enumerate_backtracking(&model).unwrap();
            let structured = enumerate_s1_structured(&model).unwrap();
            assert_eq!(raw, structured);
        }
    }

    #[test]
    fn s1_with_zero_b_reduces_to_cauchy() {
        let field = f5();
        let zero = PairTable::from_fn(5, |_, _| 0);
        let model = ShapeModel::new(
            ShapeId::S1,
            DomainModel::AdditiveGroup(FiniteGroup::cyclic(5)),
            field,
            Some(zero),
            None,
        )
        .unwrap();
        let sols = enumerate_solutions(&model, 10_000_000).unwrap();
        let homs = enumerate_additive(&FiniteGroup::cyclic(5), &field);
        assert_eq!(sols.iter().map(|s| s.f.clone()).collect::<Vec<_>>(), homs);
    }

    fn s3_model(p: u64, alpha: u64) -> ShapeModel {
        let field = PrimeField::new(p).unwrap();
        ShapeModel::new(
            ShapeId::S3,
            DomainModel::MultiplicativeMonoid(field),
            field,
            None,
            Some(alpha),
        )
        .unwrap()
    }

    #[test]
    fn s3_alpha_nonzero_has_no_solutions() {
        let sols = enumerate_solutions(&s3_model(5, 1), 10_000_000).unwrap();
        assert!(sols.is_empty());
    }

    #[test]
    fn s3_alpha_zero_gives_exactly_the_additive_maps() {
        let sols = enumerate_solutions(&s3_model(5, 0), 10_000_000).unwrap();
        let expected = log_maps(&f5());
        assert_eq!(sols.iter().map(|s| s.f.clone()).collect::<Vec<_>>(), expected);
        for sol in &sols {
            assert!(match_family(&s3_model(5, 0), sol));
        }
    }

    #[test]
    fn s6_character_instance_matches() {
        // On ℤ₄ → 𝔽₅ the map m(x) = 2^x is a character (2⁴ = 16 ≡ 1);
        // f = c²(m-1), α = c(m-1) solves S6 and matches the family.
        let field = f5();
        let g = FiniteGroup::cyclic(4);
        let model = ShapeModel::new(
            ShapeId::S6,
            DomainModel::AdditiveGroup(g),
            field,
            None,
            None,
        )
        .unwrap();
        let c = 3u64;
        let m: Vec<u64> = (0..4).map(|x| field.pow(2, x)).collect();
        let f: Vec<u64> =
            m.iter().map(|&mx| field.mul(field.mul(c, c), field.sub(mx, 1))).collect();
        let a: Vec<u64> = m.iter().map(|&mx| field.mul(c, field.sub(mx, 1))).collect();
        let sol = Solution { f: FunctionTable(f), alpha: Some(FunctionTable(a)) };
        assert!(verify_solution(&model, &sol));
        assert!(match_family(&model, &sol));
        // A corrupted table is rejected.
        let mut bad = sol.clone();
        bad.f.0[2] = field.add(bad.f.0[2], 1);
        assert!(!verify_solution(&model, &bad));
        assert!(!match_family(&model, &bad));
    }

    #[test]
    fn search_space_bound_respected() {
        let err = enumerate_solutions(&s3_model(7, 0), 100).unwrap_err();
        assert!(matches!(err, OracleError::SearchSpaceExceeded { .. }));
    }

    #[test]
    fn s2_on_z5_has_one_solution_per_additive_map() {
        // f(x+y) - f(x) - f(y) = 2xy on Z5 ⊂ F5: f(x) = x² + cx (2/2 = 1).
        let field = f5();
        let model = ShapeModel::new(
            ShapeId::S2,
            DomainModel::AdditiveGroup(FiniteGroup::cyclic(5)),
            field,
            None,
            Some(2),
        )
        .unwrap();
        let sols = enumerate_solutions(&model, 10_000_000).unwrap();
        assert_eq!(sols.len(), 5);
        for sol in &sols {
            let c = sol.f.0[1] + 5 - 1;
            for x in 0..5u64 {
                assert_eq!(sol.f.0[x as usize], (x * x + c * x) % 5);
            }
            assert!(match_family(&model, sol));
        }
    }

    #[test]
    fn s6_joint_enumeration_agrees_with_brute_force() {
        // Independent cross-check on a tiny model: Z2 → F3 with two
        // unknowns, all 3^4 table pairs swept directly.
        let f3 = PrimeField::new(3).unwrap();
        let g = FiniteGroup::cyclic(2);
        let model = ShapeModel::new(
            ShapeId::S6,
            DomainModel::AdditiveGroup(g.clone()),
            f3,
            None,
            None,
        )
        .unwrap();
        let lib = enumerate_solutions(&model, 10_000_000).unwrap();

        let mut brute = Vec::new();
        for code in 0..81usize {
            let digits: Vec<u64> =
                (0..4).map(|i| ((code / 3usize.pow(i)) % 3) as u64).collect();
            let (f, a) = (&digits[..2], &digits[2..]);
            let ok = (0..2).all(|x: usize| {
                (0..2).all(|y: usize| {
                    let lhs = f3.sub(f[(x + y) % 2], f3.add(f[x], f[y]));
                    lhs == f3.mul(a[x], a[y])
                })
            });
            if ok {
                brute.push(Solution {
                    f: FunctionTable(f.to_vec()),
                    alpha: Some(FunctionTable(a.to_vec())),
                });
            }
        }
        brute.sort();
        assert_eq!(lib, brute);
        assert!(!lib.is_empty());
    }
}
