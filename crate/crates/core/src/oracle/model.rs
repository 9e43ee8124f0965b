//! Finite models: cyclic-product groups, prime-field codomains, function
//! tables, and the per-shape residual evaluator.
//!
//! Two domain models cover the taxonomy at desk scale. Additive shapes run
//! on ℤ_{n₁}×…×ℤ_{n_k}; the shapes whose domain is multiplicative and
//! embedded in the field (S3, S4, S7) run on the multiplicative monoid of
//! 𝔽_p itself, zero included, which is what "ℤ_p inside 𝔽_p" means there —
//! the mixed-radix index embeds as the field element.

use crate::eqdsl::ShapeId;

pub const GROUP_ORDER_LIMIT: usize = 4096;
pub const DEFAULT_MAX_SPACE: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("group order {0} exceeds the limit {GROUP_ORDER_LIMIT}")]
    GroupTooLarge(usize),
    #[error("characteristic 2: the shape divides by 2")]
    CharacteristicTwo,
    #[error("search space {space} exceeds the bound {bound} and no structured search applies")]
    SearchSpaceExceeded { space: u64, bound: u64 },
    #[error("shape {0} has no finite model here: {1}")]
    UnsupportedShape(ShapeId, String),
    #[error("the given B table is not symmetric and biadditive")]
    BadBForm,
    #[error("embedding requires the group to be Z_p for the same prime p as the field")]
    BadEmbedding,
    #[error("table length {got} does not match the domain size {want}")]
    BadTableLength { got: usize, want: usize },
}

/// Product of cyclic groups ℤ_{n₁}×…×ℤ_{n_k}, written additively. Elements
/// are mixed-radix indices: index = Σ xᵢ·(n₁·…·n_{i-1}).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    factors: Vec<u32>,
}

impl FiniteGroup {
    pub fn new(factors: Vec<u32>) -> Result<FiniteGroup, OracleError> {
        assert!(!factors.is_empty() && factors.iter().all(|&n| n >= 1), "factors must be >= 1");
        let order: usize = factors.iter().map(|&n| n as usize).product();
        if order > GROUP_ORDER_LIMIT {
            return Err(OracleError::GroupTooLarge(order));
        }
        Ok(FiniteGroup { factors })
    }

    pub fn cyclic(n: u32) -> FiniteGroup {
        FiniteGroup::new(vec![n]).expect("single factor within limit")
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.factors.iter().map(|&n| n as usize).product()
    }

    pub fn decode(&self, mut idx: usize) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.factors.len());
        for &n in &self.factors {
            out.push((idx % n as usize) as u32);
            idx /= n as usize;
        }
        out
    }

    pub fn encode(&self, coords: &[u32]) -> usize {
        let mut idx = 0usize;
        let mut stride = 1usize;
        for (&c, &n) in coords.iter().zip(&self.factors) {
            idx += c as usize * stride;
            stride *= n as usize;
        }
        idx
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (xa, xb) = (self.decode(a), self.decode(b));
        let sum: Vec<u32> =
            xa.iter().zip(&xb).zip(&self.factors).map(|((&u, &v), &n)| (u + v) % n).collect();
        self.encode(&sum)
    }

    /// The unit vector of each cyclic factor.
    pub fn generators(&self) -> Vec<usize> {
        (0..self.factors.len())
            .map(|i| {
                let mut coords = vec![0u32; self.factors.len()];
                coords[i] = if self.factors[i] > 1 { 1 } else { 0 };
                self.encode(&coords)
            })
            .collect()
    }
}

/// 𝔽_p arithmetic on `u64` values reduced mod p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<PrimeField, OracleError> {
        if !is_prime(p) {
            return Err(OracleError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.p != 0, "inverse of zero");
        self.pow(a, self.p - 2)
    }

    /// 1/2 in the field; requires characteristic ≠ 2.
    pub fn half(&self) -> Result<u64, OracleError> {
        if self.p == 2 {
            return Err(OracleError::CharacteristicTwo);
        }
        Ok(self.inv(2))
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Values of one unknown on every domain element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FunctionTable(pub Vec<u64>);

impl FunctionTable {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::fmt::Display for FunctionTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// Values on domain pairs (the given B, or a candidate cocycle C).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairTable {
    pub n: usize,
    pub values: Vec<u64>,
}

impl PairTable {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> u64) -> PairTable {
        let mut values = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                values.push(f(x, y));
            }
        }
        PairTable { n, values }
    }

    pub fn get(&self, x: usize, y: usize) -> u64 {
        self.values[x * self.n + y]
    }
}

/// The two domain structures the oracle runs on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainModel {
    AdditiveGroup(FiniteGroup),
    /// All of 𝔽_p under multiplication, the absorbing 0 included.
    MultiplicativeMonoid(PrimeField),
}

impl DomainModel {
    pub fn size(&self) -> usize {
        match self {
            DomainModel::AdditiveGroup(g) => g.order(),
            DomainModel::MultiplicativeMonoid(f) => f.p() as usize,
        }
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        match self {
            DomainModel::AdditiveGroup(g) => g.add(a, b),
            DomainModel::MultiplicativeMonoid(f) => f.mul(a as u64, b as u64) as usize,
        }
    }

    /// The embedding into 𝔽_p, valid when the index set coincides with the
    /// field (ℤ_p additively, or the monoid itself).
    pub fn embed(&self, x: usize, field: &PrimeField) -> Result<u64, OracleError> {
        match self {
            DomainModel::AdditiveGroup(g) => {
                if g.factors() == [field.p() as u32] {
                    Ok(x as u64)
                } else {
                    Err(OracleError::BadEmbedding)
                }
            }
            DomainModel::MultiplicativeMonoid(f) => {
                if f.p() == field.p() {
                    Ok(x as u64)
                } else {
                    Err(OracleError::BadEmbedding)
                }
            }
        }
    }
}

/// A fully specified finite instance of one equation shape.
#[derive(Debug, Clone)]
pub struct ShapeModel {
    pub shape: ShapeId,
    pub domain: DomainModel,
    pub field: PrimeField,
    pub given_b: Option<PairTable>,
    pub given_alpha: Option<u64>,
}

impl ShapeModel {
    pub fn new(
        shape: ShapeId,
        domain: DomainModel,
        field: PrimeField,
        given_b: Option<PairTable>,
        given_alpha: Option<u64>,
    ) -> Result<ShapeModel, OracleError> {
        let model = ShapeModel { shape, domain, field, given_b, given_alpha };
        model.validate()?;
        Ok(model)
    }

    pub fn unknown_count(&self) -> usize {
        match self.shape {
            ShapeId::S1 | ShapeId::S2 | ShapeId::S3 => 1,
            _ => 2,
        }
    }

    fn validate(&self) -> Result<(), OracleError> {
        let n = self.domain.size();
        match self.shape {
            ShapeId::S1 | ShapeId::S2 => {
                self.field.half()?;
            }
            _ => {}
        }
        match self.shape {
            ShapeId::S1 => {
                let b = self.given_b.as_ref().ok_or(OracleError::BadBForm)?;
                if b.n != n {
                    return Err(OracleError::BadTableLength { got: b.n, want: n });
                }
                self.check_biadditive(b)?;
            }
            ShapeId::S2 | ShapeId::S3 => {
                // Embedding must exist; the scalar defaults to 0.
                self.domain.embed(0, &self.field)?;
                if matches!(
                    (self.shape, &self.domain),
                    (ShapeId::S2, DomainModel::MultiplicativeMonoid(_))
                        | (ShapeId::S3, DomainModel::AdditiveGroup(_))
                ) {
                    return Err(OracleError::UnsupportedShape(
                        self.shape,
                        "domain operation does not match the shape".into(),
                    ));
                }
            }
            ShapeId::S5 => {
                // Needs both field operations on the index set.
                if !matches!(&self.domain, DomainModel::AdditiveGroup(_)) {
                    return Err(OracleError::UnsupportedShape(
                        self.shape,
                        "S5 runs on the additive group of the field".into(),
                    ));
                }
                self.domain.embed(0, &self.field)?;
                self.field.half()?;
            }
            ShapeId::S4 | ShapeId::S7 => {
                if !matches!(&self.domain, DomainModel::MultiplicativeMonoid(_)) {
                    return Err(OracleError::UnsupportedShape(
                        self.shape,
                        "the inhomogeneity a(x*y) needs the multiplicative monoid".into(),
                    ));
                }
            }
            ShapeId::S6 | ShapeId::S8 | ShapeId::S9 => {
                if !matches!(&self.domain, DomainModel::AdditiveGroup(_)) {
                    return Err(OracleError::UnsupportedShape(
                        self.shape,
                        "this shape is modeled on an abstract additive group".into(),
                    ));
                }
            }
            ShapeId::OpenProblemMixed | ShapeId::Unrecognized => {
                return Err(OracleError::UnsupportedShape(
                    self.shape,
                    "no finite model for unsupported shapes".into(),
                ));
            }
        }
        Ok(())
    }

    fn check_biadditive(&self, b: &PairTable) -> Result<(), OracleError> {
        let n = self.domain.size();
        for x in 0..n {
            for y in 0..n {
                if b.get(x, y) != b.get(y, x) {
                    return Err(OracleError::BadBForm);
                }
                for z in 0..n {
                    let xy = self.domain.op(x, y);
                    if b.get(xy, z) != self.field.add(b.get(x, z), b.get(y, z)) {
                        return Err(OracleError::BadBForm);
                    }
                }
            }
        }
        Ok(())
    }

    /// Residual of the equation at `(x, y)` for partially assigned tables:
    /// `None` when some needed value is unassigned.
    pub fn residual_at(
        &self,
        x: usize,
        y: usize,
        f: &dyn Fn(usize) -> Option<u64>,
        a: &dyn Fn(usize) -> Option<u64>,
    ) -> Option<u64> {
        let fld = &self.field;
        let xy = self.domain.op(x, y);
        let lhs = match self.shape {
            ShapeId::S7 | ShapeId::S8 | ShapeId::S9 => {
                fld.sub(f(xy)?, fld.mul(f(x)?, f(y)?))
            }
            _ => fld.sub(f(xy)?, fld.add(f(x)?, f(y)?)),
        };
        let rhs = match self.shape {
            ShapeId::S1 => self.given_b.as_ref().expect("validated").get(x, y),
            ShapeId::S2 | ShapeId::S3 => {
                let alpha = self.given_alpha.unwrap_or(0);
                let ex = self.domain.embed(x, fld).expect("validated");
                let ey = self.domain.embed(y, fld).expect("validated");
                fld.mul(alpha, fld.mul(ex, ey))
            }
            ShapeId::S4 | ShapeId::S7 | ShapeId::S8 => a(xy)?,
            ShapeId::S5 => {
                let ex = self.domain.embed(x, fld).expect("validated");
                let ey = self.domain.embed(y, fld).expect("validated");
                a(fld.mul(ex, ey) as usize)?
            }
            ShapeId::S6 | ShapeId::S9 => fld.mul(a(x)?, a(y)?),
            _ => unreachable!("validated"),
        };
        Some(fld.sub(lhs, rhs))
    }
}

/// The cocycle identity C(x,y) + C(x∘y,z) = C(x,y∘z) + C(y,z) over every
/// triple of a finite magma.
pub fn cocycle_check(
    domain: &DomainModel,
    field: &PrimeField,
    c: &PairTable,
) -> Result<bool, OracleError> {
    let n = domain.size();
    if c.n != n {
        return Err(OracleError::BadTableLength { got: c.n, want: n });
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let lhs = field.add(c.get(x, y), c.get(domain.op(x, y), z));
                let rhs = field.add(c.get(x, domain.op(y, z)), c.get(y, z));
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_radix_group_arithmetic() {
        let g = FiniteGroup::new(vec![3, 4]).unwrap();
        assert_eq!(g.order(), 12);
        for a in 0..12 {
            for b in 0..12 {
                assert_eq!(g.add(a, b), g.add(b, a));
                for c in 0..12 {
                    assert_eq!(g.add(g.add(a, b), c), g.add(a, g.add(b, c)));
                }
            }
        }
        let e = g.encode(&[2, 3]);
        assert_eq!(g.add(e, g.encode(&[1, 1])), g.encode(&[0, 0]));
        assert_eq!(g.generators(), vec![g.encode(&[1, 0]), g.encode(&[0, 1])]);
    }

    #[test]
    fn field_basics() {
        assert!(PrimeField::new(6).is_err());
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.mul(f.inv(3), 3), 1);
        assert_eq!(f.half().unwrap(), 4);
        assert!(PrimeField::new(2).unwrap().half().is_err());
    }

    #[test]
    fn biadditive_validation() {
        let f5 = PrimeField::new(5).unwrap();
        let g = FiniteGroup::cyclic(5);
        let product = PairTable::from_fn(5, |x, y| (x * y % 5) as u64);
        let model = ShapeModel::new(
            crate::eqdsl::ShapeId::S1,
            DomainModel::AdditiveGroup(g.clone()),
            f5,
            Some(product),
            None,
        );
        assert!(model.is_ok());
        // A non-biadditive table is rejected.
        let junk = PairTable::from_fn(5, |x, y| ((x + y * y) % 5) as u64);
        assert!(matches!(
            ShapeModel::new(
                crate::eqdsl::ShapeId::S1,
                DomainModel::AdditiveGroup(g),
                f5,
                Some(junk),
                None
            ),
            Err(OracleError::BadBForm)
        ));
    }

    #[test]
    fn cauchy_difference_is_a_cocycle() {
        // C_f(x,y) = f(x+y) - f(x) - f(y) satisfies the cocycle identity
        // for any f, exactly.
        let g = FiniteGroup::cyclic(6);
        let f7 = PrimeField::new(7).unwrap();
        let dm = DomainModel::AdditiveGroup(g.clone());
        let f: Vec<u64> = vec![3, 1, 4, 1, 5, 2];
        let c = PairTable::from_fn(6, |x, y| {
            f7.sub(f[g.add(x, y)], f7.add(f[x], f[y]))
        });
        assert!(cocycle_check(&dm, &f7, &c).unwrap());
    }

    #[test]
    fn bilinear_table_fails_cocycle_on_multiplicative_monoid() {
        // C(x,y) = x·y with α = 1 on the monoid (𝔽₅, ·): the identity
        // forces α·y·(x - z) = 0, which fails.
        let f5 = PrimeField::new(5).unwrap();
        let dm = DomainModel::MultiplicativeMonoid(f5);
        let c = PairTable::from_fn(5, |x, y| f5.mul(x as u64, y as u64));
        assert!(!cocycle_check(&dm, &f5, &c).unwrap());
        // The zero table trivially passes.
        let zero = PairTable::from_fn(5, |_, _| 0);
        assert!(cocycle_check(&dm, &f5, &zero).unwrap());
    }
}
