//! Sup and L_p norms of polynomials on `[a, b]`.
//!
//! Exact rational paths whenever the computation stays in the rationals
//! (endpoint/critical-point sup norms, integer-exponent integrals split at
//! rational roots); certified adaptive Gauss–Legendre quadrature otherwise.

use crate::poly::RatPoly;
use crate::scalar::{rint, Rational, Scalar};
use crate::sturm::{refine_root, sturm_isolate, Interval, Parity, Refined};
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};

/// Norm exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Inf,
    Finite(f64),
}

impl Exponent {
    /// Positive-integer exponents small enough for the exact path.
    fn as_small_int(self) -> Option<u32> {
        match self {
            Exponent::Inf => None,
            Exponent::Finite(p) => {
                if p > 0.0 && p.fract() == 0.0 && p <= 64.0 {
                    Some(p as u32)
                } else {
                    None
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMode {
    Exact,
    Quadrature,
}

/// Rational certificate attached to an exact norm evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactNorm {
    /// The norm value itself is rational.
    Value(Rational),
    /// The norm is `power^(1/p)` with rational `power`.
    PthRoot { power: Rational, p: u32 },
}

/// A norm evaluation with provenance and a certified error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct NormValue {
    pub value: f64,
    pub mode: NormMode,
    pub error_bound: f64,
    pub exact: Option<ExactNorm>,
    /// Point attaining the sup norm (sup norm only; smallest on ties).
    pub argmax: Option<Rational>,
}

impl NormValue {
    fn exact_value(value: Rational, argmax: Option<Rational>) -> Self {
        NormValue {
            value: value.to_f64_lossy(),
            mode: NormMode::Exact,
            error_bound: 0.0,
            exact: Some(ExactNorm::Value(value)),
            argmax,
        }
    }

    /// Rational value of the norm, when the evaluation was exact.
    pub fn rational(&self) -> Option<&Rational> {
        match &self.exact {
            Some(ExactNorm::Value(v)) => Some(v),
            _ => None,
        }
    }

    /// Rational value of `norm^p`, when available.
    pub fn rational_pth_power(&self) -> Option<(Rational, u32)> {
        match &self.exact {
            Some(ExactNorm::Value(v)) => Some((v.clone(), 1)),
            Some(ExactNorm::PthRoot { power, p }) => Some((power.clone(), *p)),
            None => None,
        }
    }
}

/// Exact `∫_a^b f(x) dx` via the antiderivative.
pub fn integral_exact(f: &RatPoly, a: &Rational, b: &Rational) -> Rational {
    let anti = f.antiderivative();
    anti.eval(b) - anti.eval(a)
}

pub(crate) fn pow_rat(r: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= r.clone();
    }
    acc
}

/// Crude bound on `|f|` over `[a, b]` from the coefficient sums.
fn coeff_bound(f: &RatPoly, a: &Rational, b: &Rational) -> f64 {
    let m = a.abs().max(b.abs()).to_f64_lossy().max(1.0);
    f.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| c.to_f64_lossy().abs() * m.powi(k as i32))
        .sum()
}

fn rational_from_f64(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_else(Rational::zero)
}

struct Candidate {
    x: Rational,
    abs_val: Rational,
    err: f64,
}

/// Sup norm on `[a, b]`: endpoints plus Sturm-refined critical points.
pub fn sup_norm(f: &RatPoly, a: &Rational, b: &Rational) -> NormValue {
    assert!(a < b);
    if f.is_zero() {
        return NormValue::exact_value(Rational::zero(), Some(a.clone()));
    }
    let mut candidates = vec![
        Candidate {
            x: a.clone(),
            abs_val: f.eval(a).abs(),
            err: 0.0,
        },
        Candidate {
            x: b.clone(),
            abs_val: f.eval(b).abs(),
            err: 0.0,
        },
    ];
    let scale = candidates
        .iter()
        .map(|c| c.abs_val.to_f64_lossy())
        .fold(1.0, f64::max);
    if f.degree() >= 2 {
        let df = f.derivative();
        let sf = df.square_free_part().monic();
        let slope = coeff_bound(&df, a, b).max(1.0);
        // bisect each critical bracket until |f| is pinned to 1e-15·scale
        let target_width = rational_from_f64((1e-15 * scale / slope).max(1e-300));
        for bracket in sturm_isolate(&df, &Interval::Open(a.clone(), b.clone())) {
            match refine_root(&sf, &bracket.lo, &bracket.hi, &target_width) {
                Refined::Exact(r) => candidates.push(Candidate {
                    abs_val: f.eval(&r).abs(),
                    x: r,
                    err: 0.0,
                }),
                Refined::Bracket(l, h) => {
                    let width = (h.clone() - l.clone()).to_f64_lossy();
                    candidates.push(Candidate {
                        abs_val: f.eval(&l).abs(),
                        x: l,
                        err: slope * width,
                    });
                }
            }
        }
    }
    candidates.sort_by(|p, q| p.x.cmp(&q.x));
    let mut best = 0;
    for i in 1..candidates.len() {
        if candidates[i].abs_val > candidates[best].abs_val {
            best = i;
        }
    }
    let winner = &candidates[best];
    // the reported value is a lower bound; any candidate whose uncertainty
    // range reaches above it keeps the evaluation inexact
    let mut error_bound: f64 = 0.0;
    for c in &candidates {
        if c.err > 0.0 && c.abs_val.to_f64_lossy() + c.err > winner.abs_val.to_f64_lossy() {
            error_bound = error_bound.max(c.err);
        }
    }
    if error_bound == 0.0 {
        NormValue::exact_value(winner.abs_val.clone(), Some(winner.x.clone()))
    } else {
        NormValue {
            value: winner.abs_val.to_f64_lossy(),
            mode: NormMode::Quadrature,
            error_bound,
            exact: None,
            argmax: Some(winner.x.clone()),
        }
    }
}

/// Sign-change cut points of `f` strictly inside `(a, b)`.
///
/// Returns `(cuts, err)`; each cut is rational, and `err` bounds the total
/// integration error of `|f|^p` caused by inexact cuts.
fn sign_cuts(
    f: &RatPoly,
    a: &Rational,
    b: &Rational,
    p_for_err: f64,
) -> (Vec<Rational>, f64) {
    let mut cuts = Vec::new();
    let mut err = 0.0;
    let sf = f.square_free_part().monic();
    let fbound = coeff_bound(f, a, b).max(1e-300);
    let target_width = rational_from_f64((1e-16 / fbound.powf(p_for_err)).max(1e-300));
    for bracket in sturm_isolate(f, &Interval::Open(a.clone(), b.clone())) {
        if bracket.parity() == Parity::Even {
            continue; // no sign change
        }
        match refine_root(&sf, &bracket.lo, &bracket.hi, &target_width) {
            Refined::Exact(r) => cuts.push(r),
            Refined::Bracket(l, h) => {
                err += (h.clone() - l.clone()).to_f64_lossy() * fbound.powf(p_for_err);
                cuts.push(l);
            }
        }
    }
    cuts.sort();
    (cuts, err)
}

/// L_p norm on `[a, b]`.
///
/// `p = ∞` delegates to [`sup_norm`]. Integer `p` splits at the real roots
/// of `f` and integrates `±f^p` exactly per piece; non-integer `p` uses
/// adaptive Gauss–Legendre per sign-constant piece. `known_nonneg` skips the
/// sign-splitting.
pub fn lp_norm(
    f: &RatPoly,
    p: Exponent,
    a: &Rational,
    b: &Rational,
    known_nonneg: bool,
) -> Result<NormValue> {
    if let Exponent::Finite(v) = p {
        if v <= 0.0 {
            return Err(Error::NonPositiveP);
        }
    }
    if p == Exponent::Inf {
        return Ok(sup_norm(f, a, b));
    }
    if f.is_zero() {
        return Ok(NormValue::exact_value(Rational::zero(), None));
    }
    if let Some(pi) = p.as_small_int() {
        let (cuts, cut_err) = if known_nonneg {
            (Vec::new(), 0.0)
        } else {
            sign_cuts(f, a, b, pi as f64)
        };
        let fp = {
            let mut acc = RatPoly::constant(rint(1));
            for _ in 0..pi {
                acc = acc.mul(f);
            }
            acc
        };
        let mut total = Rational::zero();
        let mut prev = a.clone();
        for cut in cuts.iter().chain(std::iter::once(b)) {
            if *cut > prev {
                total += integral_exact(&fp, &prev, cut).abs();
                prev = cut.clone();
            }
        }
        let value = total.to_f64_lossy().powf(1.0 / pi as f64);
        if cut_err == 0.0 {
            return Ok(NormValue {
                value,
                mode: NormMode::Exact,
                error_bound: 0.0,
                exact: Some(ExactNorm::PthRoot {
                    power: total,
                    p: pi,
                }),
                argmax: None,
            });
        }
        return Ok(NormValue {
            value,
            mode: NormMode::Quadrature,
            error_bound: (cut_err / (pi as f64)) * value.max(1e-300).powf(1.0 - pi as f64) + 1e-15 * value,
            exact: None,
            argmax: None,
        });
    }
    // non-integer exponent: quadrature over sign-constant pieces
    let Exponent::Finite(pf) = p else { unreachable!() };
    let (cuts, cut_err) = if known_nonneg {
        (Vec::new(), 0.0)
    } else {
        sign_cuts(f, a, b, pf)
    };
    let ff = f.to_float();
    let integrand = |x: f64| ff.eval(&x).abs().powf(pf);
    let mut total = 0.0;
    let mut err = cut_err;
    let mut prev = a.to_f64_lossy();
    for cut in cuts
        .iter()
        .map(|c| c.to_f64_lossy())
        .chain(std::iter::once(b.to_f64_lossy()))
    {
        if cut > prev {
            let (piece, piece_err) = adaptive_gauss_legendre(&integrand, prev, cut, 1e-12);
            total += piece;
            err += piece_err;
            prev = cut;
        }
    }
    let value = total.powf(1.0 / pf);
    let rel = err / total.max(1e-300);
    Ok(NormValue {
        value,
        mode: NormMode::Quadrature,
        error_bound: value * (rel / pf + 1e-14),
        exact: None,
        argmax: None,
    })
}

// 16-point Gauss–Legendre nodes and weights on [-1, 1].
const GL16: [(f64, f64); 8] = [
    (0.0950125098376374401853, 0.1894506104550684962854),
    (0.2816035507792589132304, 0.1826034150449235888667),
    (0.4580167776572273863424, 0.1691565193950025381893),
    (0.6178762444026437484467, 0.1495959888165767320815),
    (0.7554044083550030338951, 0.1246289712555338720525),
    (0.8656312023878317438805, 0.0951585116824927848099),
    (0.9445750230732325760780, 0.0622535239386478928628),
    (0.9894009349916499325962, 0.0271524594117540948518),
];

fn gl16_panel(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = 0.0;
    for (x, w) in GL16 {
        sum += w * (f(mid - half * x) + f(mid + half * x));
    }
    sum * half
}

fn composite(f: &impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    // combined in index order for schedule-independent determinism
    (0..panels)
        .map(|i| gl16_panel(f, a + i as f64 * h, a + (i + 1) as f64 * h))
        .sum()
}

/// Composite 16-node Gauss–Legendre with panel halving until two refinement
/// levels agree within `rel_tol`; the last refinement delta is the error
/// estimate.
pub fn adaptive_gauss_legendre(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> (f64, f64) {
    let mut panels = 1;
    let mut prev = composite(f, a, b, panels);
    loop {
        panels *= 2;
        let next = composite(f, a, b, panels);
        let delta = (next - prev).abs();
        if delta <= rel_tol * next.abs().max(1e-300) || panels >= 1 << 14 {
            return (next, delta);
        }
        prev = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{chebyshev_t, PowerPoly};
    use crate::scalar::rat;

    fn p(cs: &[i64]) -> RatPoly {
        PowerPoly::from_ints(cs)
    }

    #[test]
    fn integral_examples() {
        // ∫_{−1}^1 (x+1)² dx = 8/3
        assert_eq!(integral_exact(&p(&[1, 2, 1]), &rint(-1), &rint(1)), rat(8, 3));
        assert_eq!(integral_exact(&p(&[0, 1]), &rint(-1), &rint(1)), rint(0));
        assert_eq!(integral_exact(&p(&[1]), &rint(-1), &rint(1)), rint(2));
    }

    #[test]
    fn sup_norm_examples() {
        let n = sup_norm(&p(&[1, 0, 1]), &rint(-1), &rint(1));
        assert_eq!(n.rational(), Some(&rint(2)));
        assert_eq!(n.argmax, Some(rint(-1)));

        // (x+1)³ − 4: |f| = 4 at both endpoints, argmax reports the smallest
        let f = p(&[-3, 3, 3, 1]);
        let n = sup_norm(&f, &rint(-1), &rint(1));
        assert_eq!(n.rational(), Some(&rint(4)));
        assert_eq!(n.argmax, Some(rint(-1)));

        // interior rational critical point: x² on [−1, 2] peaks at 2
        let n = sup_norm(&p(&[0, 0, 1]), &rint(-1), &rint(2));
        assert_eq!(n.rational(), Some(&rint(4)));
    }

    #[test]
    fn sup_norm_chebyshev_equioscillation() {
        let n = sup_norm(&chebyshev_t(5), &rint(-1), &rint(1));
        assert!((n.value - 1.0).abs() < 1e-9, "got {}", n.value);
        assert!(n.error_bound < 1e-9);
    }

    #[test]
    fn lp_norm_examples() {
        // (x+1)², p=1: nonnegative, ∫ = 8/3
        let n = lp_norm(&p(&[1, 2, 1]), Exponent::Finite(1.0), &rint(-1), &rint(1), false).unwrap();
        assert_eq!(n.rational_pth_power(), Some((rat(8, 3), 1)));
        assert_eq!(n.mode, NormMode::Exact);

        // constant 1: ‖1‖_p = 2^{1/p}
        for pv in [0.5, 1.0, 2.0, 3.0] {
            let n = lp_norm(&p(&[1]), Exponent::Finite(pv), &rint(-1), &rint(1), false).unwrap();
            assert!((n.value - 2f64.powf(1.0 / pv)).abs() < 1e-9);
        }

        // ‖(x+1)^n‖_q^q = 2^{nq+1}/(nq+1)
        for (n_deg, q) in [(2u32, 1u32), (3, 2), (4, 3)] {
            let f = p(&[1, 1]).pow(n_deg as usize);
            let norm = lp_norm(&f, Exponent::Finite(q as f64), &rint(-1), &rint(1), false).unwrap();
            let nq = n_deg * q;
            let expect = Rational::new(
                num_bigint::BigInt::from(2u64).pow(nq + 1),
                num_bigint::BigInt::from(nq + 1),
            );
            assert_eq!(norm.rational_pth_power(), Some((expect, q)));
        }

        assert_eq!(
            lp_norm(&p(&[1]), Exponent::Finite(-1.0), &rint(-1), &rint(1), false),
            Err(Error::NonPositiveP)
        );
    }

    #[test]
    fn lp_sign_splitting_exact() {
        // ∫_{−1}^1 |x| dx = 1, cut at the exact rational root 0
        let n = lp_norm(&p(&[0, 1]), Exponent::Finite(1.0), &rint(-1), &rint(1), false).unwrap();
        assert_eq!(n.rational_pth_power(), Some((rint(1), 1)));
        assert_eq!(n.mode, NormMode::Exact);

        // ∫_{−1}^1 |x² − 1/4| dx = 2(1/4·1/2·2 − ...) computed independently:
        // ∫|x²−1/4| = ∫_{-1}^{-1/2} + |∫_{-1/2}^{1/2}| + ∫_{1/2}^1 = 11/24+1/6·... use oracle value
        let f = RatPoly::new(vec![rat(-1, 4), rint(0), rint(1)]);
        let n = lp_norm(&f, Exponent::Finite(1.0), &rint(-1), &rint(1), false).unwrap();
        let left = integral_exact(&f, &rint(-1), &rat(-1, 2));
        let mid = -integral_exact(&f, &rat(-1, 2), &rat(1, 2));
        let right = integral_exact(&f, &rat(1, 2), &rint(1));
        assert_eq!(
            n.rational_pth_power().unwrap().0,
            left + mid + right
        );
    }

    #[test]
    fn quadrature_agrees_with_exact_path() {
        let f = p(&[1, -2, 0, 3]);
        for q in [1.0, 2.0, 3.0] {
            let exact = lp_norm(&f, Exponent::Finite(q), &rint(-1), &rint(1), false).unwrap();
            // force quadrature through a non-integer exponent very close to q
            let (quad, _) = adaptive_gauss_legendre(
                &|x: f64| f.to_float().eval(&x).abs().powf(q),
                -1.0,
                1.0,
                1e-13,
            );
            assert!((quad.powf(1.0 / q) - exact.value).abs() < 1e-9 * exact.value.max(1.0));
        }
    }

    #[test]
    fn scaling_is_exact_on_exact_path() {
        let f = p(&[1, 2, 1]);
        let c = rat(-7, 3);
        let n1 = lp_norm(&f.scale(&c), Exponent::Finite(2.0), &rint(-1), &rint(1), false).unwrap();
        let n2 = lp_norm(&f, Exponent::Finite(2.0), &rint(-1), &rint(1), false).unwrap();
        let (p1, _) = n1.rational_pth_power().unwrap();
        let (p2, _) = n2.rational_pth_power().unwrap();
        assert_eq!(p1, pow_rat(&c.abs(), 2) * p2);
    }
}
