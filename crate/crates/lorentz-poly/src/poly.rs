//! Power-basis polynomials over a generic scalar.
//!
//! Coefficients are stored in ascending degree order with the trailing
//! coefficient nonzero (the zero polynomial has an empty coefficient list).

use crate::scalar::{rint, Rational, Scalar};
use num_traits::{One, Zero};

/// Polynomial in the power basis, ascending coefficient order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerPoly<T> {
    coeffs: Vec<T>,
}

/// Power polynomial over the exact rationals.
pub type RatPoly = PowerPoly<Rational>;
/// Power polynomial over `f64`, used on numeric-only paths.
pub type FloatPoly = PowerPoly<f64>;

impl<T: Scalar> PowerPoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PowerPoly { coeffs }
    }

    pub fn zero() -> Self {
        PowerPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        PowerPoly {
            coeffs: vec![T::zero(), T::one()],
        }
    }

    /// `c_0 + c_1 x + ...` from integer coefficients.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| T::from_i64(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; 0 for constants and for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| T::from_i64(k as i64) * c.clone())
            .collect();
        Self::new(coeffs)
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = vec![T::zero()];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.clone() / T::from_i64(k as i64 + 1));
        }
        Self::new(coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Self::new(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - other.coeff(k)).collect();
        Self::new(coeffs)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Exact coefficient convolution.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(coeffs)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::constant(T::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `f(s*x + t)`, exact affine substitution.
    pub fn compose_affine(&self, s: &T, t: &T) -> Self {
        let mut acc = Self::zero();
        let lin = Self::new(vec![t.clone(), s.clone()]);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// Euclidean division: returns `(quotient, remainder)`.
    ///
    /// Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let dd = divisor.degree();
        let lead = divisor.leading();
        if rem.coeffs.len() < divisor.coeffs.len() {
            return (Self::zero(), rem);
        }
        let mut quot = vec![T::zero(); rem.coeffs.len() - divisor.coeffs.len() + 1];
        while !rem.is_zero() && rem.coeffs.len() >= divisor.coeffs.len() {
            let k = rem.degree() - dd;
            let q = rem.leading() / lead.clone();
            quot[k] = q.clone();
            let mut sub = vec![T::zero(); k];
            sub.extend(divisor.coeffs.iter().map(|c| c.clone() * q.clone()));
            rem = rem.sub(&Self::new(sub));
            // guard against a nonvanishing leading term from inexact scalars
            if rem.coeffs.len() > k + dd {
                rem.coeffs.truncate(k + dd);
                rem = Self::new(rem.coeffs);
            }
        }
        (Self::new(quot), rem)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> PowerPoly<U> {
        PowerPoly::new(self.coeffs.iter().map(f).collect())
    }
}

impl RatPoly {
    /// Monic normalization (zero polynomial maps to itself).
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = Rational::one() / self.leading();
        self.scale(&inv)
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `f / gcd(f, f')`: same distinct roots, all simple.
    pub fn square_free_part(&self) -> Self {
        if self.is_zero() || self.degree() == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.clone();
        }
        self.div_rem(&g).0
    }

    pub fn to_float(&self) -> FloatPoly {
        self.map(|c| c.to_f64_lossy())
    }
}

/// Chebyshev polynomial of the first kind, via the standard recurrence.
pub fn chebyshev_t(n: usize) -> RatPoly {
    let mut t0 = RatPoly::constant(rint(1));
    if n == 0 {
        return t0;
    }
    let mut t1 = RatPoly::x();
    let two_x = RatPoly::new(vec![rint(0), rint(2)]);
    for _ in 1..n {
        let next = two_x.mul(&t1).sub(&t0);
        t0 = t1;
        t1 = next;
    }
    t1
}

/// A real root with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealRoot {
    pub root: Rational,
    pub multiplicity: usize,
}

/// A conjugate pair `α = re ± i·im` with multiplicity (`im != 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexPair {
    pub re: Rational,
    pub im: Rational,
    pub multiplicity: usize,
}

/// Constructive factorization over the rationals: leading coefficient times
/// linear factors at real roots and real quadratic factors at conjugate pairs.
///
/// Kept alongside the expanded polynomial so zero-location predicates can
/// answer exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorList {
    pub real_roots: Vec<RealRoot>,
    pub complex_pairs: Vec<ComplexPair>,
    pub leading: Rational,
}

impl FactorList {
    pub fn degree(&self) -> usize {
        let real: usize = self.real_roots.iter().map(|r| r.multiplicity).sum();
        let cplx: usize = self.complex_pairs.iter().map(|p| 2 * p.multiplicity).sum();
        real + cplx
    }

    /// `leading · Π(x−r) · Π((x−α)(x−ᾱ))` expanded exactly.
    pub fn expand(&self) -> RatPoly {
        assert!(!self.leading.is_zero(), "leading coefficient must be nonzero");
        let mut f = RatPoly::constant(self.leading.clone());
        for r in &self.real_roots {
            let lin = RatPoly::new(vec![-r.root.clone(), rint(1)]);
            f = f.mul(&lin.pow(r.multiplicity));
        }
        for p in &self.complex_pairs {
            // (x-α)(x-ᾱ) = x² - 2·re·x + (re²+im²)
            let quad = RatPoly::new(vec![
                p.re.clone() * p.re.clone() + p.im.clone() * p.im.clone(),
                -(rint(2) * p.re.clone()),
                rint(1),
            ]);
            f = f.mul(&quad.pow(p.multiplicity));
        }
        f
    }
}

/// `from_factors` of the factor-list representation: expanded polynomial plus
/// retained constructive evidence.
pub fn from_factors(factors: FactorList) -> (RatPoly, FactorList) {
    let f = factors.expand();
    (f, factors)
}
