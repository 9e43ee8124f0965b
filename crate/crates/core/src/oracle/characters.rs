//! Character models on cyclic groups and the D* absorbing-zero checks.
//!
//! Characters χ_k(x) = ω^{kx} on ℤ_n are stored as exponents (products are
//! exponent sums mod n, exact); sums of character values are compared in
//! floating point with a tight tolerance, flagged as non-exact. The D*
//! model adjoins an absorbing element to the group with χ(0̄) = 0 for
//! nontrivial χ, mirroring how adjoining 0 to a multiplicative domain
//! forces the logarithmic term out of the solution family.

use crate::exppoly::{Arity, ExpPoly, SymbolTable};
use crate::scalar::Scalar;
use num_complex::Complex64;

pub const CHARACTER_TOLERANCE: f64 = 1e-12;

/// χ_k on ℤ_n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CharacterModel {
    n: u32,
    k: u32,
}

/// A point of the extended domain ℤ_n ∪ {0̄}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DStarPoint {
    Group(u32),
    Absorbing,
}

impl CharacterModel {
    pub fn new(n: u32, k: u32) -> CharacterModel {
        assert!(n >= 1);
        CharacterModel { n, k: k % n }
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn is_trivial(&self) -> bool {
        self.k == 0
    }

    /// Exact exponent of ω at a group element: χ(x) = ω^{exponent}.
    pub fn exponent(&self, x: u32) -> u32 {
        (self.k as u64 * x as u64 % self.n as u64) as u32
    }

    pub fn value(&self, x: u32) -> Complex64 {
        let theta = 2.0 * std::f64::consts::PI * self.exponent(x) as f64 / self.n as f64;
        Complex64::new(theta.cos(), theta.sin())
    }

    /// Value on the extended domain: the absorbing element takes 0 unless
    /// the character is identically one.
    pub fn value_ext(&self, x: DStarPoint) -> Complex64 {
        match x {
            DStarPoint::Group(g) => self.value(g),
            DStarPoint::Absorbing => {
                if self.is_trivial() {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
        }
    }

    /// The multiplicativity defect |χ(x∘y) - χ(x)χ(y)|, which is zero up to
    /// floating-point representation on the whole extended domain.
    pub fn multiplicativity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for x in self.points() {
            for y in self.points() {
                let xy = ext_op(self.n, x, y);
                let defect = (self.value_ext(xy) - self.value_ext(x) * self.value_ext(y)).norm();
                worst = worst.max(defect);
            }
        }
        worst
    }

    pub fn points(&self) -> Vec<DStarPoint> {
        let mut pts = vec![DStarPoint::Absorbing];
        pts.extend((0..self.n).map(DStarPoint::Group));
        pts
    }
}

fn ext_op(n: u32, a: DStarPoint, b: DStarPoint) -> DStarPoint {
    match (a, b) {
        (DStarPoint::Group(x), DStarPoint::Group(y)) => DStarPoint::Group((x + y) % n),
        _ => DStarPoint::Absorbing,
    }
}

/// Maximum residual of the γ = 0 family f = c²(χ-1), α = c(χ-1) over all
/// pairs of the extended domain, absorbing element included. Zero (within
/// tolerance) for every character and constant.
pub fn dstar_concrete_residual_max(n: u32, k: u32, c: Complex64) -> f64 {
    let chi = CharacterModel::new(n, k);
    let f = |x: DStarPoint| c * c * (chi.value_ext(x) - 1.0);
    let a = |x: DStarPoint| c * (chi.value_ext(x) - 1.0);
    let mut worst: f64 = 0.0;
    for x in chi.points() {
        for y in chi.points() {
            let r = f(ext_op(n, x, y)) - f(x) - f(y) - a(x) * a(y);
            worst = worst.max(r.norm());
        }
    }
    worst
}

/// Formal residual of the S6 family at the pair (x, 0̄) in the extended
/// model: with f = γ·l + c²(m-1) and α = c(m-1), the absorbing element
/// evaluates m to 0 and l to 0, leaving exactly -γ·l(x). Nonzero precisely
/// when γ ≠ 0 — the forcing, stated as an exact polynomial identity.
pub fn dstar_absorbing_residual(gamma: &Scalar, c: &Scalar) -> ExpPoly {
    let mut b = SymbolTable::builder();
    let l = b.additive("l");
    let m = b.exponential("m");
    let table = b.build();
    let shifted = ExpPoly::exponential(&table, m)
        .sub(&ExpPoly::one(&table, Arity::One))
        .expect("same table");
    let f = ExpPoly::additive(&table, l)
        .scale(gamma)
        .add(&shifted.scale(&(c * c)))
        .expect("same table");
    let alpha = shifted.scale(c);

    // residual(x, 0̄) = f(x·0̄) - f(x) - f(0̄) - α(x)·α(0̄)
    //               = -f(x) - α(0̄)·α(x), since x·0̄ = 0̄.
    let alpha_at_absorbing = eval_at_absorbing(&alpha);
    f.neg().sub(&alpha.scale(&alpha_at_absorbing)).expect("same table")
}

/// Evaluates a one-variable polynomial at the absorbing element. Every
/// formal symbol vanishes there — additive by the only consistent
/// extension, exponential by the χ(0̄) = 0 rule (the trivial exponential is
/// the empty monomial and needs no rule) — so only the constant term
/// survives.
fn eval_at_absorbing(p: &ExpPoly) -> Scalar {
    let mut total = Scalar::zero();
    for (mono, coeff) in p.terms() {
        if mono.is_one() {
            total += coeff;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characters_are_multiplicative() {
        for n in [1u32, 2, 3, 4, 6, 8] {
            for k in 0..n {
                let chi = CharacterModel::new(n, k);
                assert!(chi.multiplicativity_defect() <= CHARACTER_TOLERANCE);
                // Exponent arithmetic is exact.
                for x in 0..n {
                    for y in 0..n {
                        assert_eq!(
                            chi.exponent((x + y) % n),
                            (chi.exponent(x) + chi.exponent(y)) % n
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn gamma_zero_family_vanishes_on_extended_domain() {
        for (n, k) in [(4u32, 1u32), (6, 2), (8, 3)] {
            let r = dstar_concrete_residual_max(n, k, Complex64::new(0.75, -0.5));
            assert!(r <= 1e-9, "residual {r} on Z_{n}, chi_{k}");
        }
    }

    #[test]
    fn absorbing_residual_is_gamma_times_log() {
        let r = dstar_absorbing_residual(&Scalar::from_int(3), &Scalar::from_ratio(1, 2));
        assert_eq!(format!("{r}"), "-3*l(x)");
        assert!(!r.is_zero());
        let r0 = dstar_absorbing_residual(&Scalar::zero(), &Scalar::from_ratio(1, 2));
        assert!(r0.is_zero());
    }
}
