//! Constrained-polynomial toolkit built around the Lorentz representation
//! `f(x) = Σ a_j (b−x)^j (x−a)^{d−j}` with nonnegative coefficients.
//!
//! The crate provides exact rational polynomial arithmetic, Lorentz basis
//! algebra and Lorentz-degree computation, sup/L_p norms with exact paths,
//! membership predicates and generators for the constrained classes, and
//! checkers for the sharp Markov- and Nikolskii-type inequalities that hold
//! over those classes.

pub mod classes;
pub mod lorentz;
pub mod norms;
pub mod poly;
pub mod scalar;
pub mod search;
pub mod sturm;
pub mod verify;

pub use poly::{FloatPoly, PowerPoly, RatPoly};
pub use scalar::{rat, rint, Rational, Scalar};

/// Errors shared across the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("representation degree {got} is below the polynomial degree {needed}")]
    DegreeTooSmall { needed: usize, got: usize },
    #[error("elevation target {got} is below the current degree {current}")]
    DegreeDecrease { current: usize, got: usize },
    #[error("target interval is not nested inside the source interval")]
    BadNesting,
    #[error("operands live on different intervals")]
    IntervalMismatch,
    #[error("a factor has a zero strictly inside the unit disk")]
    ZeroInsideDisk,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("norm exponent must be positive")]
    NonPositiveP,
    #[error("input violates the class hypothesis: {0}")]
    ClassViolation(String),
    #[error("rejection sampling budget exceeded ({0} tries)")]
    RejectionBudgetExceeded(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Parse `"num"` or `"num/den"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    use num_bigint::BigInt;
    let mut parts = s.splitn(2, '/');
    let num: BigInt = parts.next()?.trim().parse().ok()?;
    let den: BigInt = match parts.next() {
        Some(d) => d.trim().parse().ok()?,
        None => BigInt::from(1),
    };
    if den == BigInt::from(0) {
        return None;
    }
    Some(Rational::new(num, den))
}
