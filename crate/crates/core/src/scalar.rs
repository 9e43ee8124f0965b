//! Exact Gaussian-rational arithmetic.
//!
//! A [`Scalar`] is a number of the form `p/q + (r/s)i` with arbitrary-precision
//! integer parts, kept gcd-reduced with positive denominators. Equality is
//! decidable and exact, which is what makes "the residual is zero" a real test
//! rather than a tolerance judgement.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

/// An exact element of ℚ(i).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Scalar::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    /// The imaginary unit i.
    pub fn i() -> Self {
        Scalar::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    /// Exact rational `num/den`. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn from_rational(re: BigRational) -> Self {
        Scalar::new(re, BigRational::zero())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar::new(self.re.clone(), -self.im.clone())
    }

    /// |z|² = re² + im², a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero Scalar");
        let n = self.norm_sqr();
        Scalar::new(&self.re / &n, -&self.im / &n)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact square root in ℚ(i), if one exists.
    ///
    /// Returns the root with nonnegative real part (positive imaginary part
    /// on the imaginary axis), so the result is deterministic; the other root
    /// is its negation.
    pub fn sqrt_exact(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.im.is_zero() {
            // Real case: c ≥ 0 needs √c rational; c < 0 needs √(-c) rational.
            return if self.re.is_negative() {
                rational_sqrt(&-self.re.clone()).map(|r| Scalar::new(BigRational::zero(), r))
            } else {
                rational_sqrt(&self.re).map(Scalar::from_rational)
            };
        }
        // General case: (a+bi)² = c+di with d ≠ 0 means a² = (|z|+c)/2,
        // b² = (|z|-c)/2 and sign(b) = sign(d)·sign(a); |z| must be rational.
        let n = rational_sqrt(&self.norm_sqr())?;
        let two = BigRational::from_integer(BigInt::from(2));
        let a2 = (&n + &self.re) / &two;
        let b2 = (&n - &self.re) / &two;
        let a = rational_sqrt(&a2)?;
        let mut b = rational_sqrt(&b2)?;
        if self.im.is_negative() {
            b = -b;
        }
        let cand = Scalar::new(a, b);
        debug_assert_eq!(&(&cand * &cand), self);
        Some(cand)
    }

    /// Nearest f64 approximation of the real part (for the numeric layer).
    pub fn re_f64(&self) -> f64 {
        ratio_to_f64(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        ratio_to_f64(&self.im)
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    let numer = r.numer();
    let denom = r.denom();
    // Good enough for diagnostics: fall back to string parsing for huge values.
    match (i128::try_from(numer.clone()), i128::try_from(denom.clone())) {
        (Ok(n), Ok(d)) => n as f64 / d as f64,
        _ => {
            let s = format!("{numer}");
            let t = format!("{denom}");
            s.parse::<f64>().unwrap_or(f64::NAN) / t.parse::<f64>().unwrap_or(f64::NAN)
        }
    }
}

/// √r over ℚ, if it exists: both numerator and denominator must be perfect
/// squares (r in lowest terms, r ≥ 0).
fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let sn = r.numer().sqrt();
    let sd = r.denom().sqrt();
    if &(&sn * &sn) == r.numer() && &(&sd * &sd) == r.denom() {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}
forward_binop!(Add, add);

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}
forward_binop!(Sub, sub);

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}
forward_binop!(Mul, mul);

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    // Division in ℚ(i) is multiplication by the exact inverse.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv()
    }
}
forward_binop!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re, -self.im)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

fn fmt_imag(im: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if im.is_one() {
        write!(f, "i")
    } else if (-im).is_one() {
        write!(f, "-i")
    } else {
        write!(f, "{im}i")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.re),
            (true, false) => fmt_imag(&self.im, f),
            (false, false) => {
                write!(f, "{}", self.re)?;
                if !self.im.is_negative() {
                    write!(f, "+")?;
                }
                fmt_imag(&self.im, f)
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parse error for [`Scalar::from_str`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid scalar literal `{0}`")]
pub struct ParseScalarError(pub String);

impl FromStr for Scalar {
    type Err = ParseScalarError;

    /// Accepts `3`, `-3/4`, `i`, `-i`, `2i`, `1/2i`, `1+2i`, `1/2-3/4i`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(ParseScalarError(s.to_string()));
        }
        // Split an `a±bi` form at the sign that separates the two parts
        // (skip index 0 so leading signs stay attached).
        if let Some(stripped) = t.strip_suffix('i') {
            for (idx, c) in stripped.char_indices().rev() {
                if idx == 0 || (c != '+' && c != '-') {
                    continue;
                }
                if stripped.as_bytes()[idx - 1] == b'/' {
                    continue; // sign inside a fraction like 1/-2 is invalid anyway
                }
                let (re_part, im_part) = stripped.split_at(idx);
                let re = parse_rational(re_part).ok_or_else(|| ParseScalarError(s.to_string()))?;
                let im = parse_signed_unit(im_part).ok_or_else(|| ParseScalarError(s.to_string()))?;
                return Ok(Scalar::new(re, im));
            }
            let im = parse_signed_unit(stripped).ok_or_else(|| ParseScalarError(s.to_string()))?;
            return Ok(Scalar::new(BigRational::zero(), im));
        }
        parse_rational(&t)
            .map(Scalar::from_rational)
            .ok_or_else(|| ParseScalarError(s.to_string()))
    }
}

/// `+`, `-`, `2`, `-3/4` — the coefficient in front of `i`.
fn parse_signed_unit(s: &str) -> Option<BigRational> {
    match s {
        "" | "+" => Some(BigRational::one()),
        "-" => Some(-BigRational::one()),
        _ => parse_rational(s),
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((n, d)) = s.split_once('/') {
        let numer: BigInt = n.parse().ok()?;
        let denom: BigInt = d.parse().ok()?;
        if denom.is_zero() {
            return None;
        }
        Some(BigRational::new(numer, denom))
    } else {
        let numer: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(numer))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = Scalar::from_ratio(1, 3);
        let b = Scalar::from_ratio(1, 6);
        assert_eq!(&a + &b, Scalar::from_ratio(1, 2));
        assert_eq!(&a - &a, Scalar::zero());
        assert_eq!(&Scalar::i() * &Scalar::i(), Scalar::from_int(-1));
    }

    #[test]
    fn division_round_trips() {
        let z = s("1/2-3/4i");
        assert_eq!(&(&z / &s("2+i")) * &s("2+i"), z);
    }

    #[test]
    fn sqrt_exact_cases() {
        assert_eq!(s("9/4").sqrt_exact(), Some(s("3/2")));
        assert_eq!(s("-4").sqrt_exact(), Some(s("2i")));
        assert_eq!(s("2i").sqrt_exact(), Some(s("1+i")));
        // -2 = 2·i² has no Gaussian-rational root (norm argument).
        assert_eq!(s("-2").sqrt_exact(), None);
        assert_eq!(s("2").sqrt_exact(), None);
        assert_eq!(s("-1").sqrt_exact(), Some(Scalar::i()));
        let z = s("-3/4+i");
        assert_eq!(z.sqrt_exact(), Some(s("1/2+i")));
    }

    #[test]
    fn display_round_trips() {
        for text in ["0", "1", "-1", "3/4", "i", "-i", "2i", "1+2i", "1/2-3/4i"] {
            assert_eq!(s(text).to_string(), text);
        }
    }
}
