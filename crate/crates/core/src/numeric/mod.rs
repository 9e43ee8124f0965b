//! Regular real-line solution families, floating-point residuals, and
//! parameter fitting.
//!
//! Tolerances in this module are artifact decisions (the underlying results
//! are exact mathematics and give no numerical guidance); residual bounds
//! are scaled by (1 + max|f|) since the exponential families grow.

mod fit;

pub use fit::{fit_regular, FitResult, FitVariant, SampleSet};

use crate::eqdsl::GroupOp;

/// Parameter magnitude below which a family collapses onto the additive
/// branch (the parameterization is not identifiable on that stratum).
pub const IDENTIFIABILITY_EPS: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultForm {
    /// m ≡ 0.
    Zero,
    /// m(x) = |x|^μ.
    AbsPow,
    /// m(x) = sign(x)·|x|^μ.
    SignAbsPow,
}

/// The regular closed-form families on ℝ and on D = ℝ^× or ]0,∞[.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegularFamily {
    /// α(x) = a·(exp(λx) - 1), f(x) = γx + a²·(exp(λx) - 1) on (ℝ, +).
    AddExp { alpha: f64, gamma: f64, lambda: f64 },
    /// α(x) = -a, f(x) = γx - a² on (ℝ, +).
    AddConst { alpha: f64, gamma: f64 },
    /// α(x) = a·(m(x) - 1), f(x) = γ·ln|x| + a²·(m(x) - 1) on (D, ·).
    MultLog { alpha: f64, gamma: f64, mu: f64, form: MultForm },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericError {
    #[error("x = {0} is outside the family domain")]
    DomainViolation(f64),
    #[error("degenerate samples: {0}")]
    DegenerateSamples(String),
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("non-finite value in input")]
    NonFinite,
}

impl RegularFamily {
    pub fn group_op(&self) -> GroupOp {
        match self {
            RegularFamily::AddExp { .. } | RegularFamily::AddConst { .. } => GroupOp::Additive,
            RegularFamily::MultLog { .. } => GroupOp::Multiplicative,
        }
    }

    /// Pointwise values `(f(x), α(x))`.
    pub fn eval(&self, x: f64) -> Result<(f64, f64), NumericError> {
        match *self {
            RegularFamily::AddExp { alpha, gamma, lambda } => {
                let shifted = (lambda * x).exp() - 1.0;
                Ok((gamma * x + alpha * alpha * shifted, alpha * shifted))
            }
            RegularFamily::AddConst { alpha, gamma } => {
                Ok((gamma * x - alpha * alpha, -alpha))
            }
            RegularFamily::MultLog { alpha, gamma, mu, form } => {
                if x == 0.0 {
                    return Err(NumericError::DomainViolation(x));
                }
                let m = match form {
                    MultForm::Zero => 0.0,
                    MultForm::AbsPow => x.abs().powf(mu),
                    MultForm::SignAbsPow => x.signum() * x.abs().powf(mu),
                };
                let shifted = m - 1.0;
                Ok((gamma * x.abs().ln() + alpha * alpha * shifted, alpha * shifted))
            }
        }
    }
}

/// Which numeric identity a residual measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NumericShape {
    /// f(x+y) - f(x) - f(y) = α·x·y with a given scalar α.
    ScalarBilinear { alpha: f64 },
    /// f(x∘y) - f(x) - f(y) = α(x)·α(y).
    AdditiveDifference(GroupOp),
    /// f(x∘y) - f(x)·f(y) = α(x)·α(y).
    ExponentialDifference(GroupOp),
}

/// Max |lhs - rhs| over the grid for arbitrary function values.
pub fn residual_max(
    shape: NumericShape,
    f: &dyn Fn(f64) -> f64,
    alpha: &dyn Fn(f64) -> f64,
    pairs: &[(f64, f64)],
) -> f64 {
    let mut worst: f64 = 0.0;
    for &(x, y) in pairs {
        let op = match shape {
            NumericShape::ScalarBilinear { .. } => GroupOp::Additive,
            NumericShape::AdditiveDifference(op) | NumericShape::ExponentialDifference(op) => op,
        };
        let xy = match op {
            GroupOp::Additive => x + y,
            GroupOp::Multiplicative => x * y,
        };
        let r = match shape {
            NumericShape::ScalarBilinear { alpha: a } => f(xy) - f(x) - f(y) - a * x * y,
            NumericShape::AdditiveDifference(_) => f(xy) - f(x) - f(y) - alpha(x) * alpha(y),
            NumericShape::ExponentialDifference(_) => f(xy) - f(x) * f(y) - alpha(x) * alpha(y),
        };
        worst = worst.max(r.abs());
    }
    worst
}

/// Max equation residual of a regular family over the grid, paired with the
/// magnitude scale max|f| for relative comparison.
pub fn family_residual_max(
    fam: &RegularFamily,
    pairs: &[(f64, f64)],
) -> Result<(f64, f64), NumericError> {
    let shape = NumericShape::AdditiveDifference(fam.group_op());
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for &(x, y) in pairs {
        let xy = match fam.group_op() {
            GroupOp::Additive => x + y,
            GroupOp::Multiplicative => x * y,
        };
        let (fxy, _) = fam.eval(xy)?;
        let (fx, ax) = fam.eval(x)?;
        let (fy, ay) = fam.eval(y)?;
        let r = match shape {
            NumericShape::AdditiveDifference(_) => fxy - fx - fy - ax * ay,
            _ => unreachable!(),
        };
        worst = worst.max(r.abs());
        scale = scale.max(fxy.abs()).max(fx.abs()).max(fy.abs());
    }
    Ok((worst, scale))
}
