//! Linear independence of exponential polynomials.
//!
//! Distinct monomials over formally independent symbols are linearly
//! independent, so a family of polynomials is independent exactly when its
//! coefficient matrix over the monomial basis has full column rank. The
//! rank is computed by exact Gaussian elimination over ℚ(i).

use super::poly::{ExpPoly, Monomial, PolyError};
use crate::scalar::Scalar;
use std::collections::BTreeSet;

/// True iff the polynomials are linearly independent over ℂ.
pub fn linearly_independent(polys: &[ExpPoly]) -> Result<bool, PolyError> {
    if polys.is_empty() {
        return Ok(true);
    }
    let table = polys[0].table();
    let arity = polys[0].arity();
    for p in polys {
        if p.table() != table {
            return Err(PolyError::TableMismatch);
        }
        if p.arity() != arity {
            return Err(PolyError::ArityMismatch { expected: arity });
        }
    }
    let basis: BTreeSet<Monomial> =
        polys.iter().flat_map(|p| p.terms().map(|(m, _)| m.clone())).collect();
    let basis: Vec<Monomial> = basis.into_iter().collect();
    let rows: Vec<Vec<Scalar>> =
        polys.iter().map(|p| basis.iter().map(|m| p.coeff(m)).collect()).collect();
    Ok(rank(rows) == polys.len())
}

/// Exact row rank via fraction-free-enough Gaussian elimination (division
/// is exact in ℚ(i), so plain elimination is fine).
fn rank(mut rows: Vec<Vec<Scalar>>) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pivot) = (r..nrows).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot);
        let inv = rows[r][col].inv();
        for i in (r + 1)..nrows {
            if rows[i][col].is_zero() {
                continue;
            }
            let factor = &rows[i][col] * &inv;
            for j in col..ncols {
                let delta = &factor * &rows[r][j];
                let v = &rows[i][j] - &delta;
                rows[i][j] = v;
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exppoly::{Arity, SymbolTable};

    #[test]
    fn distinct_monomials_are_independent() {
        let mut b = SymbolTable::builder();
        let a1 = b.additive("a1");
        let t = b.build();
        let one = ExpPoly::one(&t, Arity::One);
        let a = ExpPoly::additive(&t, a1);
        assert!(linearly_independent(&[one, a]).unwrap());
    }

    #[test]
    fn scalar_multiples_are_dependent() {
        let mut b = SymbolTable::builder();
        let m1 = b.exponential("m1");
        let t = b.build();
        let shifted = ExpPoly::exponential(&t, m1).sub(&ExpPoly::one(&t, Arity::One)).unwrap();
        let doubled = shifted.scale(&Scalar::from_int(2));
        assert!(!linearly_independent(&[shifted, doubled]).unwrap());
    }

    #[test]
    fn rank_two_relation_detected() {
        // f = γ1·a1 + γ2, α = λf + μ: the triple {f, 1, α} is dependent
        // whenever (γ1, γ2) ≠ 0.
        let mut b = SymbolTable::builder();
        let a1 = b.additive("a1");
        let t = b.build();
        let gamma1 = Scalar::from_int(3);
        let gamma2 = Scalar::from_ratio(-1, 2);
        let lambda = Scalar::from_int(2);
        let mu = Scalar::i();
        let f = ExpPoly::additive(&t, a1)
            .scale(&gamma1)
            .add(&ExpPoly::constant(&t, Arity::One, gamma2))
            .unwrap();
        let alpha = f.scale(&lambda).add(&ExpPoly::constant(&t, Arity::One, mu)).unwrap();
        let one = ExpPoly::one(&t, Arity::One);
        assert!(!linearly_independent(&[f.clone(), one.clone(), alpha]).unwrap());
        assert!(linearly_independent(&[f, one]).unwrap());
    }

    #[test]
    fn all_multi_index_monomials_independent() {
        // Lemma-style check: the monomials a1^i·a2^j for distinct (i, j)
        // with i+j ≤ 3 are linearly independent.
        let mut b = SymbolTable::builder();
        let a1 = b.additive("a1");
        let a2 = b.additive("a2");
        let t = b.build();
        let p1 = ExpPoly::additive(&t, a1);
        let p2 = ExpPoly::additive(&t, a2);
        let mut monos = Vec::new();
        for i in 0..=3u32 {
            for j in 0..=(3 - i) {
                monos.push(p1.pow(i).unwrap().mul(&p2.pow(j).unwrap()).unwrap());
            }
        }
        assert!(linearly_independent(&monos).unwrap());
    }
}
