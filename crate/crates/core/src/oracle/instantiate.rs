//! Exact instantiation of formal symbols on a concrete group.
//!
//! The model group is (ℤ, +) sampled at small nonnegative points. Additive
//! symbols become k ↦ c·k, exponentials k ↦ r^k with r ≠ 0, biadditive
//! symbols (j, k) ↦ b·j·k; a biadditive symbol linked to an additive one
//! shares its coefficient (it stands for a(x·y)), and the identity
//! embedding takes c = 1. All values stay in ℚ(i), so "the residual
//! vanishes at this instantiation" is an exact statement.

use crate::exppoly::{Atom, ExpPoly, SymbolTable, VarCopy};
use crate::scalar::Scalar;
use rand::Rng;

/// Concrete values chosen for every symbol of a table.
#[derive(Debug, Clone)]
pub struct SymbolDraws {
    add_coeffs: Vec<Scalar>,
    exp_bases: Vec<Scalar>,
    biadd_coeffs: Vec<Scalar>,
}

impl SymbolDraws {
    /// Random rational instantiation respecting embeddings and links.
    pub fn random(table: &SymbolTable, rng: &mut impl Rng) -> SymbolDraws {
        let mut small = |nonzero: bool| loop {
            let num = rng.gen_range(-9i64..=9);
            let den = rng.gen_range(1i64..=4);
            if !nonzero || num != 0 {
                return Scalar::from_ratio(num, den);
            }
        };
        let add_coeffs: Vec<Scalar> = (0..table.additive_count())
            .map(|i| {
                if table.is_additive_embedding(crate::exppoly::AddId(i as u16)) {
                    Scalar::one()
                } else {
                    small(false)
                }
            })
            .collect();
        let exp_bases: Vec<Scalar> =
            (0..table.exponential_count()).map(|_| small(true)).collect();
        let biadd_coeffs: Vec<Scalar> = (0..table.biadditive_count())
            .map(|i| {
                // A linked symbol stands for a(x·y) and inherits a's slope.
                let id = crate::exppoly::BiaddId(i as u16);
                match linked_additive(table, id) {
                    Some(a) => add_coeffs[a.0 as usize].clone(),
                    None => small(false),
                }
            })
            .collect();
        SymbolDraws { add_coeffs, exp_bases, biadd_coeffs }
    }

    fn atom_value(&self, atom: Atom, kx: u32, ky: u32) -> Scalar {
        let at = |copy: VarCopy| if copy == VarCopy::X { kx } else { ky };
        match atom {
            Atom::Add(id, copy) => {
                &self.add_coeffs[id.0 as usize] * &Scalar::from_int(at(copy) as i64)
            }
            Atom::Exp(id, copy) => self.exp_bases[id.0 as usize].pow(at(copy)),
            Atom::Diag(id, copy) => {
                let k = at(copy) as i64;
                &self.biadd_coeffs[id.0 as usize] * &Scalar::from_int(k * k)
            }
            Atom::Cross(id) => {
                &self.biadd_coeffs[id.0 as usize] * &Scalar::from_int(kx as i64 * ky as i64)
            }
        }
    }

    /// Exact value of a (one- or two-variable) polynomial at the sample
    /// point (kx, ky); one-variable polynomials read kx.
    pub fn eval(&self, poly: &ExpPoly, kx: u32, ky: u32) -> Scalar {
        poly.eval_with(&mut |atom| self.atom_value(atom, kx, ky))
    }
}

fn linked_additive(table: &SymbolTable, id: crate::exppoly::BiaddId) -> Option<crate::exppoly::AddId> {
    (0..table.additive_count())
        .map(|i| crate::exppoly::AddId(i as u16))
        .find(|&a| table.biadditive_from(a) == Some(id))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn expansion_agrees_with_instantiation() {
        // For p one-variable and its product expansion e, the identity
        // p(x∘y) = e(x, y) must hold at every concrete instantiation.
        let mut b = SymbolTable::builder();
        let a1 = b.additive("a1");
        let m1 = b.exponential("m1");
        let q = b.biadditive("B");
        let table = b.build();
        let p = ExpPoly::additive(&table, a1)
            .mul(&ExpPoly::exponential(&table, m1))
            .unwrap()
            .add(&ExpPoly::diagonal(&table, q))
            .unwrap()
            .add(&ExpPoly::additive(&table, a1).pow(2).unwrap())
            .unwrap();
        let e = p.expand_on_product().unwrap();

        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let draws = SymbolDraws::random(&table, &mut rng);
            for (kx, ky) in [(0u32, 0u32), (1, 2), (3, 1), (2, 4)] {
                let direct = draws.eval(&p, kx + ky, 0);
                let expanded = draws.eval(&e, kx, ky);
                assert_eq!(direct, expanded);
            }
        }
    }

    #[test]
    fn linked_biadditive_matches_composition() {
        // With b linked to a, Cross(b) at (j, k) equals a evaluated at the
        // field product j·k.
        let mut b = SymbolTable::builder();
        let a = b.additive("a");
        let link = b.biadditive_of("aB", a);
        let table = b.build();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws = SymbolDraws::random(&table, &mut rng);
        let a_poly = ExpPoly::additive(&table, a);
        let cross = ExpPoly::cross(&table, link);
        for (j, k) in [(2u32, 3u32), (1, 4), (5, 5)] {
            assert_eq!(draws.eval(&cross, j, k), draws.eval(&a_poly, j * k, 0));
        }
    }

    #[test]
    fn embedding_is_identity() {
        let mut b = SymbolTable::builder();
        let e = b.additive_embedding();
        let table = b.build();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let draws = SymbolDraws::random(&table, &mut rng);
        let x = ExpPoly::additive(&table, e);
        assert_eq!(draws.eval(&x, 4, 0), Scalar::from_int(4));
    }
}
