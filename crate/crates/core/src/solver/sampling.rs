//! Random constraint-satisfying parameter draws.
//!
//! Families with constraints need exact rational points on the constraint
//! variety. The quadric γ = γ² + α² is a circle through the origin and has
//! the rational parametrization γ = 1/(1+t²), α = t/(1+t²); the coupled
//! systems reduce to the same circle plus linear relations. Every draw is
//! checked against the constraint system before it is returned.

use super::family::SolutionFamily;
use crate::eqdsl::ShapeId;
use crate::scalar::Scalar;
use rand::Rng;
use std::collections::BTreeMap;

/// A random exact parameter assignment satisfying the family's constraint
/// system. Deterministic for a fixed RNG stream.
pub fn sample_params(fam: &SolutionFamily, rng: &mut impl Rng) -> BTreeMap<String, Scalar> {
    fn rational(rng: &mut impl Rng, nonzero: bool) -> Scalar {
        loop {
            let num = rng.gen_range(-12i64..=12);
            let den = rng.gen_range(1i64..=5);
            if !nonzero || num != 0 {
                return Scalar::from_ratio(num, den);
            }
        }
    }
    let mut vals: BTreeMap<String, Scalar> = BTreeMap::new();

    // Parameters pinned to zero by a bare single-variable constraint (the
    // real-admissible restriction adds such pins, e.g. alpha1 on S9 (i)).
    let pinned = |name: &str| {
        fam.constraints.equations.iter().any(|eq| format!("{eq}") == name)
    };

    match (fam.shape, fam.label.as_str()) {
        (ShapeId::S9, "S9 case (i)") => {
            // Nontrivial branch γ₁ = ±i·α₁, α₂ = 0, γ₂ = 1, or the trivial
            // branch γ₁ = α₁ = 0 on the circle. With α₁ pinned (the
            // real-valued restriction) only the trivial branch remains.
            if !pinned("alpha1") && rng.gen_bool(0.5) {
                let a1 = rational(rng, false);
                let sign = if rng.gen_bool(0.5) { Scalar::i() } else { -Scalar::i() };
                vals.insert("alpha1".into(), a1.clone());
                vals.insert("gamma1".into(), &sign * &a1);
                vals.insert("alpha2".into(), Scalar::zero());
                vals.insert("gamma2".into(), Scalar::one());
            } else {
                let (gamma, alpha) = circle_point(&rational(rng, false));
                vals.insert("alpha1".into(), Scalar::zero());
                vals.insert("gamma1".into(), Scalar::zero());
                vals.insert("alpha2".into(), alpha);
                vals.insert("gamma2".into(), gamma);
            }
        }
        (ShapeId::S9, "S9 case (ii)") => {
            // (γ₁, α₁) on the circle, γ₂ = 1 - γ₁, α₂ = -α₁.
            let (gamma1, alpha1) = circle_point(&rational(rng, false));
            vals.insert("gamma2".into(), &Scalar::one() - &gamma1);
            vals.insert("alpha2".into(), -alpha1.clone());
            vals.insert("gamma1".into(), gamma1);
            vals.insert("alpha1".into(), alpha1);
        }
        (ShapeId::S9, "S9 case (iii)") => {
            let (gamma, alpha) = circle_point(&rational(rng, false));
            vals.insert("gamma".into(), gamma);
            vals.insert("alpha".into(), alpha);
        }
        _ => {
            // Remaining families: every scalar is free except those pinned
            // to 0 by a single-variable constraint (S3's alpha, D*'s gamma).
            for p in fam.scalar_params() {
                let value = if pinned(&p.name) { Scalar::zero() } else { rational(rng, false) };
                vals.insert(p.name.clone(), value);
            }
        }
    }

    debug_assert!(
        fam.constraints.check(&vals).is_ok(),
        "sampled point violates constraints for {}",
        fam.label
    );
    vals
}

/// Rational point on γ = γ² + α²: (1/(1+t²), t/(1+t²)).
fn circle_point(t: &Scalar) -> (Scalar, Scalar) {
    let denom = &Scalar::one() + &(t * t);
    (&Scalar::one() / &denom, t / &denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqdsl::{DomainSpec, GroupOp};
    use crate::solver::family::{realize, solve_shape};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn draws_satisfy_constraints_and_realize() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for shape in [ShapeId::S6, ShapeId::S9, ShapeId::S7, ShapeId::S4] {
            for fam in solve_shape(shape, DomainSpec::group(GroupOp::Multiplicative)).unwrap() {
                for _ in 0..10 {
                    let vals = sample_params(&fam, &mut rng);
                    fam.constraints.check(&vals).unwrap();
                    // realize re-verifies the symbolic residual internally.
                    realize(&fam, &vals).unwrap();
                }
            }
        }
    }

    #[test]
    fn draws_respect_real_admissible_pins() {
        use crate::solver::real_admissible;
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for fam in solve_shape(ShapeId::S9, DomainSpec::group(GroupOp::Multiplicative)).unwrap() {
            let restricted = real_admissible(&fam);
            for _ in 0..20 {
                let vals = sample_params(&restricted, &mut rng);
                restricted.constraints.check(&vals).unwrap();
                realize(&restricted, &vals).unwrap();
                // Real-valued families draw real parameters.
                assert!(vals.values().all(|v| v.is_real()), "{vals:?}");
            }
        }
    }

    #[test]
    fn circle_parametrization_is_exact() {
        for t in [Scalar::from_int(2), Scalar::from_ratio(-3, 4), Scalar::zero()] {
            let (gamma, alpha) = circle_point(&t);
            assert_eq!(&gamma * &gamma + &alpha * &alpha, gamma);
        }
    }
}
